#include <fstream>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ocwc/errors.hpp"
#include "ocwc/oracle.hpp"
#include "ocwc/pcwc.hpp"
#include "ocwc/protocol.hpp"

using namespace ocwc;
using namespace ocwc::protocol;
namespace fs = std::filesystem;

namespace {

Container sample_container() {
  Container c;
  c.header = {PayloadKind::Dataset, BackendKind::Sim, 3, 4, 2, 2};
  for (int col = 0; col < 4; ++col) {
    std::vector<Blob> blobs;
    for (int i = 0; i < 4; ++i) blobs.push_back({static_cast<std::uint8_t>((col + i) & 1)});
    c.columns.push_back(blobs);
  }
  return c;
}

KeyFiles sim_keys(const testing::TempDir& dir) {
  keygen(BackendKind::Sim, dir.path(), 7);
  return KeyFiles{dir.path()};
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("container round trip is lossless") {
  const auto c = sample_container();
  const auto bytes = encode(c);
  CHECK(bytes[0] == 'O');
  CHECK(bytes[3] == 'C');
  CHECK(bytes[4] == 1);  // version, little-endian
  CHECK(bytes[5] == 0);
  CHECK(decode(bytes) == c);

  Container mask;
  mask.header = {PayloadKind::SelectionMask, BackendKind::Fhe, 5, 8, 3, 3};
  mask.columns.push_back({{1, 2, 3}, {4}, {}});
  CHECK(decode(encode(mask)) == mask);
}

TEST_CASE("container decoding rejects damaged input") {
  const auto good = encode(sample_container());
  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode(bad_magic), DataError);
  auto bad_version = good;
  bad_version[4] = 2;
  CHECK_THROWS_AS(decode(bad_version), DataError);
  CHECK_THROWS_AS(decode(std::span(good).first(good.size() - 1)), DataError);
  auto trailing = good;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode(trailing), DataError);
  auto bad_dims = good;
  bad_dims[10] = 5;  // n now exceeds n_pad
  CHECK_THROWS_AS(decode(bad_dims), DataError);

  auto wrong_shape = sample_container();
  wrong_shape.columns.pop_back();
  CHECK_THROWS_AS(encode(wrong_shape), DataError);
}

TEST_CASE("keygen writes both key files") {
  testing::TempDir dir;
  keygen(BackendKind::Sim, dir / "keys", 3);
  CHECK(fs::exists(dir / "keys/secret.key"));
  CHECK(fs::exists(dir / "keys/eval.key"));
  CHECK(std::distance(fs::directory_iterator(dir / "keys"), fs::directory_iterator{}) == 2);
}

TEST_CASE("keygen into an unwritable location leaves nothing behind") {
  testing::TempDir dir;
  std::ofstream(dir / "plain-file") << "x";
  CHECK_THROWS_AS(keygen(BackendKind::Sim, dir / "plain-file/keys", 3), DataError);
  CHECK(std::distance(fs::directory_iterator(dir.path()), fs::directory_iterator{}) == 1);
}

TEST_CASE("fhe keygen without an adapter reports the backend as unavailable") {
  testing::TempDir dir;
  try {
    keygen(BackendKind::Fhe, dir / "keys", 3, "/nonexistent/libocwc_fhe_adapter.so");
    FAIL("expected BackendError");
  } catch (const BackendError& e) {
    CHECK(std::string(e.what()).find("backend unavailable") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(dir / "keys"));
}

TEST_CASE("missing or wrong keys are backend errors") {
  testing::TempDir dir;
  CHECK_THROWS_AS(open_owner_backend(BackendKind::Sim, KeyFiles{dir.path()}), BackendError);
  CHECK_THROWS_AS(open_analyst_backend(BackendKind::Sim, KeyFiles{dir.path()}), BackendError);
  std::ofstream(dir / "eval.key") << "something else\n";
  CHECK_THROWS_AS(open_analyst_backend(BackendKind::Sim, KeyFiles{dir.path()}), BackendError);
  CHECK_THROWS_AS(parse_backend_kind("tfhe"), UsageError);
  CHECK_THROWS_AS(parse_algorithm("fast"), UsageError);
}

TEST_CASE("one round: two messages, no decryption on the analyst side") {
  testing::TempDir dir;
  const auto keys = sim_keys(dir);
  for (auto alg : {Algorithm::Naive, Algorithm::Improved}) {
    const auto run = run_protocol(testing::table2(), alg, BackendKind::Sim, keys);
    CHECK(run.selected == std::vector<std::string>{"f1", "f2", "f4"});
    CHECK(run.channel.owner_to_analyst == 1);
    CHECK(run.channel.analyst_to_owner == 1);
    CHECK(run.channel.total() == 2);
    CHECK(run.analyst_decrypt_calls == 0);
    CHECK(run.stats.gates.total() > 0);
    CHECK(run.stats.n_pad == 8);
  }
}

TEST_CASE("the analyst backend cannot decrypt") {
  testing::TempDir dir;
  const auto keys = sim_keys(dir);
  auto analyst = open_analyst_backend(BackendKind::Sim, keys);
  const std::vector<std::uint8_t> blob{1};
  CHECK_THROWS_AS(analyst.decrypt(analyst.import_bit(blob)), BackendError);
}

TEST_CASE("encrypted dataset message decrypts back to the padded table") {
  testing::TempDir dir;
  const auto keys = sim_keys(dir);
  auto owner = open_owner_backend(BackendKind::Sim, keys);
  const auto ds = testing::table3_upper();
  const auto c = decode(encrypt_dataset_message(owner, ds));
  CHECK(c.header.n == 5);
  CHECK(c.header.n_pad == 8);
  CHECK(c.header.k == 5);
  CHECK(c.header.word_width == 3);
  const auto p = pad(ds);
  auto reader = open_owner_backend(BackendKind::Sim, keys);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(reader.decrypt(reader.import_bit(c.columns[j][i])) == static_cast<bool>(p.value(i, j)));
    CHECK(reader.decrypt(reader.import_bit(c.columns[5][i])) == static_cast<bool>(p.label(i)));
    CHECK(reader.decrypt(reader.import_bit(c.columns[6][i])) == static_cast<bool>(p.validity[i]));
  }
}

TEST_CASE("messages of the wrong kind are rejected") {
  testing::TempDir dir;
  const auto keys = sim_keys(dir);
  auto owner = open_owner_backend(BackendKind::Sim, keys);
  auto analyst = open_analyst_backend(BackendKind::Sim, keys);
  const auto msg = encrypt_dataset_message(owner, testing::table2());
  const auto reply = select_message(analyst, msg, Algorithm::Improved);
  CHECK_THROWS_AS(select_message(analyst, reply, Algorithm::Improved), DataError);
  CHECK_THROWS_AS(decrypt_mask_message(owner, msg), DataError);
  auto fhe_tagged = decode(msg);
  fhe_tagged.header.backend = BackendKind::Fhe;
  CHECK_THROWS_AS(select_message(analyst, encode(fhe_tagged), Algorithm::Naive), DataError);
}

TEST_CASE("row counts beyond the index width are rejected") {
  testing::TempDir dir;
  const auto keys = sim_keys(dir);
  auto owner = open_owner_backend(BackendKind::Sim, keys);
  const std::size_t n = kMaxPaddedRows + 1;
  const Dataset big({"a"}, std::vector<std::vector<std::uint8_t>>(n, {0}),
                    std::vector<std::uint8_t>(n, 0));
  CHECK_THROWS_AS(encrypt_dataset_message(owner, big), DataError);
}

TEST_CASE("selection is never empty for consistent tables with a varying class") {
  testing::TempDir dir;
  const auto keys = sim_keys(dir);
  std::mt19937_64 rng(61);
  int checked = 0;
  while (checked < 20) {
    const auto ds = testing::random_dataset(rng, 3 + rng() % 6, 2 + rng() % 3);
    bool varies = false;
    for (std::size_t i = 1; i < ds.n(); ++i) varies = varies || ds.label(i) != ds.label(0);
    if (!varies || !oracle::is_consistent(ds, oracle::FeatureSubset::all(ds.k()))) continue;
    ++checked;
    const auto run = run_protocol(ds, Algorithm::Improved, BackendKind::Sim, keys);
    CHECK_FALSE(run.selected.empty());
  }
}

TEST_CASE("gen_dataset is reproducible and plants a determining subset") {
  const auto a = gen_dataset(8, 5, 7, 2);
  CHECK(a == gen_dataset(8, 5, 7, 2));
  CHECK(a.feature_names() == std::vector<std::string>{"f1", "f2", "f3", "f4", "f5"});
  const auto planted = planted_features(5, 7, 2);
  REQUIRE(planted.size() == 2);
  CHECK(planted[0] != planted[1]);
  CHECK(oracle::is_consistent(a, oracle::FeatureSubset::of(5, {planted[0], planted[1]})));
  for (std::size_t i = 0; i < a.n(); ++i)
    CHECK(a.label(i) == (a.value(i, planted[0]) ^ a.value(i, planted[1])));

  CHECK_THROWS_AS(gen_dataset(8, 5, 7, 6), UsageError);
  CHECK_THROWS_AS(gen_dataset(0, 5, 7), UsageError);
  CHECK_FALSE(gen_dataset(64, 5, 1) == gen_dataset(64, 5, 2));
}

}
