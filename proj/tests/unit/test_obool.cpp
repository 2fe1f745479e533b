#include <algorithm>
#include <array>
#include <numeric>
#include <random>

#include "doctest.h"
#include "ocwc/errors.hpp"
#include "ocwc/obool/word.hpp"

using namespace ocwc;
using namespace ocwc::obool;

namespace {

GateCounts counts_of(const Backend& be, const GateCounts& before) {
  return be.transcript().counts() - before;
}

// Bubble sort built from cmp_gt and mux. The inner bound is j < n so the
// last element takes part in every pass.
void reference_bubble_sort(Backend& be, std::vector<Word>& arr) {
  const std::size_t n = arr.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 1; j < n; ++j) {
      const Bit gt = cmp_gt(be, arr[j - 1], arr[j]);
      const Word tmp = mux(be, gt, arr[j - 1], arr[j]);
      arr[j - 1] = mux(be, gt, arr[j], arr[j - 1]);
      arr[j] = tmp;
    }
}

}  // namespace

TEST_SUITE("obool") {

TEST_CASE("gate truth tables") {
  auto be = make_simulation_backend();
  for (int a = 0; a < 2; ++a) {
    CHECK(be.decrypt(be.gate_not(be.encrypt(a))) == !a);
    CHECK(be.decrypt(be.const_bit(a)) == static_cast<bool>(a));
    for (int b = 0; b < 2; ++b) {
      const Bit x = be.encrypt(a), y = be.encrypt(b);
      CHECK(be.decrypt(be.gate_xor(x, y)) == static_cast<bool>(a ^ b));
      CHECK(be.decrypt(be.gate_and(x, y)) == static_cast<bool>(a & b));
      CHECK(be.decrypt(gate_or(be, x, y)) == static_cast<bool>(a | b));
    }
  }
}

TEST_CASE("4-bit adder example 6 + 7 = 13") {
  auto be = make_simulation_backend();
  CHECK(decrypt_word(be, add(be, encrypt_word(be, 6, 4), encrypt_word(be, 7, 4))) == 13);
}

TEST_CASE("arithmetic and comparison agree with plaintext exhaustively up to width 5") {
  for (std::size_t w = 1; w <= 5; ++w) {
    auto be = make_simulation_backend();
    const std::uint64_t lim = std::uint64_t{1} << w;
    for (std::uint64_t x = 0; x < lim; ++x)
      for (std::uint64_t y = 0; y < lim; ++y) {
        const Word X = encrypt_word(be, x, w), Y = encrypt_word(be, y, w);
        CHECK(decrypt_word(be, add(be, X, Y)) == ((x + y) & (lim - 1)));
        CHECK(be.decrypt(cmp_gt(be, X, Y)) == (x > y));
        CHECK(be.decrypt(eq(be, X, Y)) == (x == y));
        for (int s = 0; s < 2; ++s) {
          const Bit S = be.encrypt(s);
          CHECK(decrypt_word(be, mux(be, S, X, Y)) == (s ? x : y));
          Word a = X, b = Y;
          cond_swap(be, S, a, b);
          CHECK(decrypt_word(be, a) == (s ? y : x));
          CHECK(decrypt_word(be, b) == (s ? x : y));
          CHECK(decrypt_word(be, increment(be, X, S)) == ((x + s) & (lim - 1)));
        }
      }
  }
}

TEST_CASE("randomized homomorphism at widths 8 to 16") {
  std::mt19937_64 rng(11);
  auto be = make_simulation_backend();
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t w = 8 + rng() % 9;
    const std::uint64_t mask = (std::uint64_t{1} << w) - 1;
    const std::uint64_t x = rng() & mask, y = rng() & mask;
    const Word X = encrypt_word(be, x, w), Y = encrypt_word(be, y, w);
    CHECK(decrypt_word(be, add(be, X, Y)) == ((x + y) & mask));
    CHECK(be.decrypt(cmp_gt(be, X, Y)) == (x > y));
    CHECK(be.decrypt(eq(be, X, X)));
  }
}

TEST_CASE("cmp_gt induces a strict total order") {
  auto be = make_simulation_backend();
  for (std::uint64_t x = 0; x < 16; ++x)
    for (std::uint64_t y = 0; y < 16; ++y) {
      const Word X = encrypt_word(be, x, 4), Y = encrypt_word(be, y, 4);
      const int gt = be.decrypt(cmp_gt(be, X, Y));
      const int lt = be.decrypt(cmp_gt(be, Y, X));
      const int e = be.decrypt(eq(be, X, Y));
      CHECK(gt + lt + e == 1);
    }
}

TEST_CASE("exact gate counts of the word circuits") {
  for (std::size_t w = 1; w <= 12; ++w) {
    auto be = make_simulation_backend();
    const Word X = encrypt_word(be, 0, w), Y = encrypt_word(be, 0, w);
    auto before = be.transcript().counts();
    add(be, X, Y);
    auto c = counts_of(be, before);
    CHECK(c[GateKind::Const] == 1);
    CHECK(c[GateKind::Xor] == 4 * w - 2);
    CHECK(c[GateKind::And] == w - 1);
    CHECK(c[GateKind::Not] == 0);

    before = be.transcript().counts();
    cmp_gt(be, X, Y);
    c = counts_of(be, before);
    CHECK(c[GateKind::Const] == 1);
    CHECK(c[GateKind::Not] == w + 1);
    CHECK(c[GateKind::Xor] == 3 * w);
    CHECK(c[GateKind::And] == w);

    before = be.transcript().counts();
    eq(be, X, Y);
    c = counts_of(be, before);
    CHECK(c[GateKind::Xor] == w);
    CHECK(c[GateKind::Not] == w);
    CHECK(c[GateKind::And] == w - 1);

    before = be.transcript().counts();
    mux(be, be.encrypt(true), X, Y);
    c = counts_of(be, before);
    CHECK(c[GateKind::Not] == 1);
    CHECK(c[GateKind::And] == 2 * w);
    CHECK(c[GateKind::Xor] == w);

    before = be.transcript().counts();
    Word a = X, b = Y;
    cond_swap(be, be.encrypt(true), a, b);
    c = counts_of(be, before);
    CHECK(c[GateKind::And] == w);
    CHECK(c[GateKind::Xor] == 3 * w);
  }
  auto be = make_simulation_backend();
  const auto before = be.transcript().counts();
  CHECK(be.decrypt(eq(be, Word{}, Word{})));
  CHECK(counts_of(be, before)[GateKind::Const] == 1);
}

TEST_CASE("width mismatch and foreign bits are usage errors") {
  auto be = make_simulation_backend();
  auto other = make_simulation_backend();
  const Word a = encrypt_word(be, 1, 3), b = encrypt_word(be, 1, 4);
  CHECK_THROWS_AS(add(be, a, b), UsageError);
  CHECK_THROWS_AS(cmp_gt(be, a, b), UsageError);
  CHECK_THROWS_AS(eq(be, a, b), UsageError);
  CHECK_THROWS_AS(other.gate_not(a[0]), UsageError);
  CHECK_THROWS_AS(be.gate_not(Bit{9999, be.instance()}), UsageError);
}

TEST_CASE("transcript digest depends on wiring, not on values") {
  auto run = [](std::uint64_t x, std::uint64_t y, bool use_gt) {
    auto be = make_simulation_backend();
    const Word X = encrypt_word(be, x, 6), Y = encrypt_word(be, y, 6);
    if (use_gt) cmp_gt(be, X, Y);
    else add(be, X, Y);
    return be.transcript().digest();
  };
  CHECK(run(3, 9, true) == run(60, 2, true));
  CHECK(run(3, 9, false) == run(0, 0, false));
  CHECK(run(3, 9, true) != run(3, 9, false));
  CHECK(run(1, 1, true).size() == 64);

  // Constant literals are part of the wiring.
  auto c0 = make_simulation_backend(), c1 = make_simulation_backend();
  c0.const_bit(false);
  c1.const_bit(true);
  CHECK(c0.transcript().digest() != c1.transcript().digest());
}

TEST_CASE("recorded ops mirror the counts") {
  auto be = make_simulation_backend(true, {.record_ops = true});
  add(be, encrypt_word(be, 2, 3), encrypt_word(be, 5, 3));
  const auto& ops = be.transcript().ops();
  CHECK(ops.size() == be.transcript().counts().total());
  CHECK(ops.front() == GateOp{GateKind::Const, 0, 0});
  CHECK(be.transcript().inputs() == 6);
}

TEST_CASE("secret key possession gates encrypt and decrypt") {
  auto analyst = make_simulation_backend(false);
  CHECK_THROWS_AS(analyst.encrypt(true), BackendError);
  const std::vector<std::uint8_t> blob{1};
  const Bit b = analyst.import_bit(blob);
  const Bit nb = analyst.gate_not(b);
  CHECK(analyst.export_bit(nb) == std::vector<std::uint8_t>{0});
  CHECK_THROWS_AS(analyst.decrypt(nb), BackendError);
  const std::vector<std::uint8_t> bad{7};
  CHECK_THROWS_AS(analyst.import_bit(bad), BackendError);
}

TEST_CASE("slot budget raises BudgetExceeded") {
  auto be = make_simulation_backend(true, {.slot_limit = 10});
  for (int i = 0; i < 10; ++i) be.const_bit(false);
  CHECK_THROWS_AS(be.const_bit(false), BudgetExceeded);
}

TEST_CASE("cost table parsing and weighting") {
  const auto t = CostTable::parse("# weights\nand = 20\n xor=1.5 # cheap\n\nnot=0\n");
  GateCounts g;
  g.by_kind = {2, 3, 4, 5};
  CHECK(t.cost(g) == doctest::Approx(2 * 1.5 + 3 * 20 + 0 + 5));
  CHECK(CostTable{}.cost(g) == 14);
  CHECK_THROWS_AS(CostTable::parse("or=1\n"), ParseError);
  CHECK_THROWS_AS(CostTable::parse("and=fast\n"), ParseError);
  CHECK_THROWS_AS(CostTable::parse("and 3\n"), ParseError);
  CHECK_THROWS_AS(CostTable::parse("and=-1\n"), ParseError);
}

TEST_CASE("reference bubble sort sorts every permutation of five distinct values") {
  std::array<std::uint64_t, 5> values{3, 14, 0, 9, 6};
  std::sort(values.begin(), values.end());
  std::string digest;
  do {
    auto be = make_simulation_backend();
    std::vector<Word> arr;
    for (auto v : values) arr.push_back(encrypt_word(be, v, 4));
    reference_bubble_sort(be, arr);
    std::vector<std::uint64_t> out;
    for (const auto& w : arr) out.push_back(decrypt_word(be, w));
    CHECK(std::is_sorted(out.begin(), out.end()));
    std::vector<std::uint64_t> expect(values.begin(), values.end());
    std::sort(expect.begin(), expect.end());
    CHECK(out == expect);
    if (digest.empty()) digest = be.transcript().digest();
    CHECK(be.transcript().digest() == digest);
  } while (std::next_permutation(values.begin(), values.end()));
}

}
