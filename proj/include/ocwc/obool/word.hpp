#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ocwc/obool/backend.hpp"

namespace ocwc::obool {

/// Fixed-width encrypted integer, least-significant bit first.
struct Word {
  std::vector<Bit> bits;

  Word() = default;
  explicit Word(std::vector<Bit> b) : bits(std::move(b)) {}
  explicit Word(Bit b) : bits{b} {}

  std::size_t width() const noexcept { return bits.size(); }
  Bit operator[](std::size_t i) const { return bits[i]; }
  Bit msb() const { return bits.back(); }
};

Word constant_word(Backend& be, std::uint64_t value, std::size_t width);
Word encrypt_word(Backend& be, std::uint64_t value, std::size_t width);
std::uint64_t decrypt_word(Backend& be, const Word& w);

/// `low` occupies the least-significant bits of the result.
Word concat(const Word& low, const Word& high);
Word slice(const Word& w, std::size_t offset, std::size_t width);
/// Explicit widening with CONST zero bits.
Word zero_extend(Backend& be, const Word& w, std::size_t width);

/// Ripple-carry sum modulo 2^width:
///   s_i = x_i ^ y_i ^ c_i,  c_{i+1} = (x_i ^ c_i)(y_i ^ c_i) ^ c_i,  c_0 = 0.
Word add(Backend& be, const Word& x, const Word& y);

/// w + inc (inc is a single bit) modulo 2^width, as a half-adder chain.
Word increment(Backend& be, const Word& w, Bit inc);

/// 1 iff x > y (unsigned). Sign bit of the (width+1)-bit difference y - x,
/// formed as y + ~x + 1 on zero-extended operands.
Bit cmp_gt(Backend& be, const Word& x, const Word& y);

/// 1 iff every bit agrees; AND over NOT(x_i ^ y_i). Width 0 yields CONST 1.
Bit eq(Backend& be, const Word& x, const Word& y);

/// s ? a : b, per bit s*a_i ^ (!s)*b_i.
Word mux(Backend& be, Bit s, const Word& a, const Word& b);

/// Exchanges a and b when s decrypts to 1: d = s*(a^b); a ^= d; b ^= d.
void cond_swap(Backend& be, Bit s, Word& a, Word& b);

/// OR of a run of bits; empty input yields CONST 0.
Bit any_of(Backend& be, std::span<const Bit> bits);
Bit gate_or(Backend& be, Bit a, Bit b);

}  // namespace ocwc::obool
