#include "ocwc/obool/word.hpp"

#include "ocwc/errors.hpp"

namespace ocwc::obool {

namespace {

void require_same_width(const Word& x, const Word& y, const char* op) {
  if (x.width() != y.width())
    throw UsageError(std::string(op) + ": width mismatch (" +
                     std::to_string(x.width()) + " vs " +
                     std::to_string(y.width()) + ")");
}

}  // namespace

Word constant_word(Backend& be, std::uint64_t value, std::size_t width) {
  Word w;
  w.bits.reserve(width);
  for (std::size_t i = 0; i < width; ++i) w.bits.push_back(be.const_bit((value >> i) & 1u));
  return w;
}

Word encrypt_word(Backend& be, std::uint64_t value, std::size_t width) {
  Word w;
  w.bits.reserve(width);
  for (std::size_t i = 0; i < width; ++i) w.bits.push_back(be.encrypt((value >> i) & 1u));
  return w;
}

std::uint64_t decrypt_word(Backend& be, const Word& w) {
  if (w.width() > 64) throw UsageError("decrypt_word: width exceeds 64 bits");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < w.width(); ++i)
    if (be.decrypt(w[i])) v |= std::uint64_t{1} << i;
  return v;
}

Word concat(const Word& low, const Word& high) {
  Word w;
  w.bits.reserve(low.width() + high.width());
  w.bits.insert(w.bits.end(), low.bits.begin(), low.bits.end());
  w.bits.insert(w.bits.end(), high.bits.begin(), high.bits.end());
  return w;
}

Word slice(const Word& w, std::size_t offset, std::size_t width) {
  if (offset + width > w.width()) throw UsageError("slice out of range");
  return Word(std::vector<Bit>(w.bits.begin() + offset, w.bits.begin() + offset + width));
}

Word zero_extend(Backend& be, const Word& w, std::size_t width) {
  if (width < w.width()) throw UsageError("zero_extend cannot narrow a word");
  Word out = w;
  while (out.width() < width) out.bits.push_back(be.const_bit(false));
  return out;
}

Word add(Backend& be, const Word& x, const Word& y) {
  require_same_width(x, y, "add");
  Word sum;
  if (x.width() == 0) return sum;
  sum.bits.reserve(x.width());
  Bit carry = be.const_bit(false);
  for (std::size_t i = 0; i < x.width(); ++i) {
    const Bit xc = be.gate_xor(x[i], carry);
    sum.bits.push_back(be.gate_xor(xc, y[i]));
    if (i + 1 < x.width()) {
      const Bit yc = be.gate_xor(y[i], carry);
      carry = be.gate_xor(be.gate_and(xc, yc), carry);
    }
  }
  return sum;
}

Word increment(Backend& be, const Word& w, Bit inc) {
  Word out;
  out.bits.reserve(w.width());
  Bit carry = inc;
  for (std::size_t i = 0; i < w.width(); ++i) {
    out.bits.push_back(be.gate_xor(w[i], carry));
    if (i + 1 < w.width()) carry = be.gate_and(w[i], carry);
  }
  return out;
}

Bit cmp_gt(Backend& be, const Word& x, const Word& y) {
  require_same_width(x, y, "cmp_gt");
  // The extension bits contribute 0 (from y) and 1 (from ~x), so the sign bit
  // of the widened difference is NOT(carry out of the low `width` bits).
  Bit carry = be.const_bit(true);
  for (std::size_t i = 0; i < x.width(); ++i) {
    const Bit nx = be.gate_not(x[i]);
    const Bit a = be.gate_xor(nx, carry);
    const Bit b = be.gate_xor(y[i], carry);
    carry = be.gate_xor(be.gate_and(a, b), carry);
  }
  return be.gate_not(carry);
}

Bit eq(Backend& be, const Word& x, const Word& y) {
  require_same_width(x, y, "eq");
  if (x.width() == 0) return be.const_bit(true);
  Bit acc = be.gate_not(be.gate_xor(x[0], y[0]));
  for (std::size_t i = 1; i < x.width(); ++i)
    acc = be.gate_and(acc, be.gate_not(be.gate_xor(x[i], y[i])));
  return acc;
}

Word mux(Backend& be, Bit s, const Word& a, const Word& b) {
  require_same_width(a, b, "mux");
  Word out;
  out.bits.reserve(a.width());
  const Bit ns = be.gate_not(s);
  for (std::size_t i = 0; i < a.width(); ++i)
    out.bits.push_back(be.gate_xor(be.gate_and(s, a[i]), be.gate_and(ns, b[i])));
  return out;
}

void cond_swap(Backend& be, Bit s, Word& a, Word& b) {
  require_same_width(a, b, "cond_swap");
  for (std::size_t i = 0; i < a.width(); ++i) {
    const Bit d = be.gate_and(s, be.gate_xor(a[i], b[i]));
    a.bits[i] = be.gate_xor(a[i], d);
    b.bits[i] = be.gate_xor(b[i], d);
  }
}

Bit gate_or(Backend& be, Bit a, Bit b) {
  // a | b = a ^ b ^ ab
  return be.gate_xor(be.gate_xor(a, b), be.gate_and(a, b));
}

Bit any_of(Backend& be, std::span<const Bit> bits) {
  if (bits.empty()) return be.const_bit(false);
  Bit acc = bits[0];
  for (std::size_t i = 1; i < bits.size(); ++i) acc = gate_or(be, acc, bits[i]);
  return acc;
}

}  // namespace ocwc::obool
