#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "ocwc/errors.hpp"
#include "ocwc/pcwc.hpp"
#include "ocwc/protocol.hpp"

namespace ocwc::protocol {

namespace {

BackendKind kind_of(const obool::Backend& be) {
  return be.kind() == "sim" ? BackendKind::Sim : BackendKind::Fhe;
}

std::vector<Blob> export_column(const obool::Backend& be, std::span<const obool::Bit> bits) {
  std::vector<Blob> out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(be.export_bit(b));
  return out;
}

std::vector<obool::Bit> import_column(obool::Backend& be, const std::vector<Blob>& blobs) {
  std::vector<obool::Bit> out;
  out.reserve(blobs.size());
  for (const auto& blob : blobs) out.push_back(be.import_bit(blob));
  return out;
}

void require_backend(const obool::Backend& be, const ContainerHeader& h) {
  if (kind_of(be) != h.backend)
    throw DataError("container was produced by the " + std::string(to_string(h.backend)) +
                    " backend, but the " + std::string(be.kind()) + " backend is in use");
}

}  // namespace

std::vector<std::uint8_t> encrypt_dataset_message(obool::Backend& owner, const Dataset& ds) {
  const auto padded = pad(ds);
  if (padded.n_pad > kMaxPaddedRows)
    throw DataError("dataset has " + std::to_string(ds.n()) + " rows; at most " +
                    std::to_string(kMaxPaddedRows) + " fit the index width");
  if (ds.k() > kMaxFeatures)
    throw DataError("dataset has " + std::to_string(ds.k()) + " features; at most " +
                    std::to_string(kMaxFeatures) + " are supported");

  const auto enc = pcwc::encrypt_dataset(owner, padded);
  Container c;
  c.header = {PayloadKind::Dataset,
              kind_of(owner),
              static_cast<std::uint32_t>(ds.n()),
              static_cast<std::uint32_t>(padded.n_pad),
              static_cast<std::uint32_t>(ds.k()),
              static_cast<std::uint16_t>(padded.suffix_bits)};
  for (const auto& col : enc.features) c.columns.push_back(export_column(owner, col));
  c.columns.push_back(export_column(owner, enc.classes));
  c.columns.push_back(export_column(owner, enc.validity));
  return encode(c);
}

std::vector<std::uint8_t> select_message(obool::Backend& analyst,
                                         std::span<const std::uint8_t> message,
                                         Algorithm algorithm, SelectStats* stats) {
  const auto in = decode(message);
  if (in.header.payload != PayloadKind::Dataset)
    throw DataError("expected an encrypted dataset, got a selection mask");
  require_backend(analyst, in.header);

  const auto start = std::chrono::steady_clock::now();
  pcwc::EncryptedDatasetState enc;
  for (std::size_t j = 0; j < in.header.k; ++j)
    enc.features.push_back(import_column(analyst, in.columns[j]));
  enc.classes = import_column(analyst, in.columns[in.header.k]);
  enc.validity = import_column(analyst, in.columns[in.header.k + 1]);

  const auto before = analyst.transcript().counts();
  const auto mask = algorithm == Algorithm::Naive ? pcwc::naive_select(analyst, enc)
                                                  : pcwc::improved_select(analyst, enc);
  const auto elapsed = std::chrono::steady_clock::now() - start;

  if (stats != nullptr) {
    stats->algorithm = algorithm;
    stats->k = in.header.k;
    stats->n_pad = in.header.n_pad;
    stats->gates = analyst.transcript().counts() - before;
    stats->digest = analyst.transcript().digest();
    stats->wall_ms = std::chrono::duration<double, std::milli>(elapsed).count();
  }

  Container out;
  out.header = in.header;
  out.header.payload = PayloadKind::SelectionMask;
  out.columns.push_back(export_column(analyst, mask.keep));
  return encode(out);
}

std::vector<std::uint8_t> decrypt_mask_message(obool::Backend& owner,
                                               std::span<const std::uint8_t> message) {
  const auto in = decode(message);
  if (in.header.payload != PayloadKind::SelectionMask)
    throw DataError("expected a selection mask, got an encrypted dataset");
  require_backend(owner, in.header);
  pcwc::SelectionMaskCipher mask{import_column(owner, in.columns[0])};
  return pcwc::decrypt_mask(owner, mask);
}

ProtocolRun run_protocol(const Dataset& ds, Algorithm algorithm, BackendKind kind,
                         const KeyFiles& keys, const std::string& adapter_path) {
  auto owner = open_owner_backend(kind, keys, adapter_path);
  auto analyst = open_analyst_backend(kind, keys, adapter_path);

  ProtocolRun run;
  const auto to_analyst = encrypt_dataset_message(owner, ds);
  ++run.channel.owner_to_analyst;
  const auto to_owner = select_message(analyst, to_analyst, algorithm, &run.stats);
  ++run.channel.analyst_to_owner;
  run.analyst_decrypt_calls = analyst.decrypt_calls();

  run.mask = decrypt_mask_message(owner, to_owner);
  run.selected = decode_selection(run.mask, ds);
  return run;
}

namespace {

// Draws the planted subset first so planted_features can replay it without
// generating the table.
std::vector<std::size_t> draw_planted(std::mt19937_64& rng, std::size_t k, std::size_t planted) {
  if (planted > k)
    throw UsageError("cannot plant " + std::to_string(planted) + " features among " +
                     std::to_string(k));
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < planted; ++i) std::swap(idx[i], idx[i + rng() % (k - i)]);
  idx.resize(planted);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::vector<std::size_t> planted_features(std::size_t k, std::uint64_t seed, std::size_t planted) {
  std::mt19937_64 rng(seed);
  return draw_planted(rng, k, planted);
}

Dataset gen_dataset(std::size_t n, std::size_t k, std::uint64_t seed,
                    std::optional<std::size_t> planted) {
  if (n == 0 || k == 0) throw UsageError("gen-dataset needs n >= 1 and k >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  if (planted) chosen = draw_planted(rng, k, *planted);

  std::vector<std::string> names;
  for (std::size_t j = 0; j < k; ++j) names.push_back("f" + std::to_string(j + 1));
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(k));
  std::vector<std::uint8_t> classes(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : rows[i]) v = static_cast<std::uint8_t>(rng() & 1);
    if (planted) {
      std::uint8_t c = 0;
      for (auto j : chosen) c ^= rows[i][j];
      classes[i] = c;
    } else {
      classes[i] = static_cast<std::uint8_t>(rng() & 1);
    }
  }
  return Dataset(std::move(names), std::move(rows), std::move(classes));
}

}  // namespace ocwc::protocol
