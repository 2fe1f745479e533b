#include "ocwc/pcwc.hpp"

#include <bit>

#include "ocwc/errors.hpp"
#include "ocwc/sortnet.hpp"

namespace ocwc::pcwc {

using sortnet::KeyedRecordSet;
using sortnet::Record;

namespace {

std::vector<Bit> negate_all(Backend& be, std::span<const Bit> bits) {
  std::vector<Bit> out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(be.gate_not(b));
  return out;
}

std::vector<Bit> bits_of(const std::vector<Word>& words) {
  std::vector<Bit> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(w[0]);
  return out;
}

std::vector<Word> slice_all(const std::vector<Word>& words, std::size_t offset,
                            std::size_t width) {
  std::vector<Word> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(obool::slice(w, offset, width));
  return out;
}

std::vector<Bit> bit_column(const std::vector<Word>& words, std::size_t bit) {
  std::vector<Bit> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(w[bit]);
  return out;
}

// Group labels for rows whose grouping key is `keys`, assuming equal keys are
// adjacent: label[0] = 0, label[i] = label[i-1] + NOT eq(keys[i-1], keys[i]).
std::vector<Word> adjacency_labels(Backend& be, const std::vector<Word>& keys,
                                   const Word& zero) {
  std::vector<Word> labels;
  labels.reserve(keys.size());
  labels.push_back(zero);
  for (std::size_t i = 1; i < keys.size(); ++i) {
    const Bit same = obool::eq(be, keys[i - 1], keys[i]);
    labels.push_back(obool::increment(be, labels.back(), be.gate_not(same)));
  }
  return labels;
}

std::vector<Word> row_tags(Backend& be, std::size_t n_pad, unsigned width) {
  std::vector<Word> tags;
  tags.reserve(n_pad);
  for (std::size_t i = 0; i < n_pad; ++i) tags.push_back(obool::constant_word(be, i, width));
  return tags;
}

}  // namespace

void EncryptedDatasetState::validate() const {
  const auto n = classes.size();
  if (n == 0 || !std::has_single_bit(n))
    throw UsageError("encrypted state row count must be a power of two");
  if (validity.size() != n) throw UsageError("validity column length differs");
  if (features.empty()) throw UsageError("encrypted state has no features");
  for (const auto& col : features)
    if (col.size() != n) throw UsageError("feature column length differs");
}

EncryptedDatasetState encrypt_dataset(Backend& be, const PaddedDataset& ds) {
  EncryptedDatasetState enc;
  const auto k = ds.base.k();
  enc.features.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    enc.features[j].reserve(ds.n_pad);
    for (std::size_t i = 0; i < ds.n_pad; ++i) enc.features[j].push_back(be.encrypt(ds.value(i, j)));
  }
  for (std::size_t i = 0; i < ds.n_pad; ++i) enc.classes.push_back(be.encrypt(ds.label(i)));
  for (std::size_t i = 0; i < ds.n_pad; ++i) enc.validity.push_back(be.encrypt(ds.validity[i]));
  return enc;
}

std::vector<std::uint8_t> decrypt_mask(Backend& be, const SelectionMaskCipher& mask) {
  std::vector<std::uint8_t> out;
  out.reserve(mask.keep.size());
  for (auto b : mask.keep) out.push_back(be.decrypt(b) ? 1 : 0);
  return out;
}

std::vector<std::vector<Word>> compute_prefix_labels(
    Backend& be, std::span<const Bit> validity,
    std::span<const std::vector<Bit>> columns, unsigned width) {
  const std::size_t n = validity.size();
  for (const auto& col : columns)
    if (col.size() != n) throw UsageError("compute_prefix_labels: column length differs");
  const Word zero = obool::constant_word(be, 0, width);

  std::vector<std::vector<Word>> labels;
  labels.reserve(columns.size() + 1);
  // same[i]: rows i-1 and i agree on validity and every column so far.
  std::vector<Bit> same(n);
  for (std::size_t i = 1; i < n; ++i)
    same[i] = be.gate_not(be.gate_xor(validity[i - 1], validity[i]));

  auto emit = [&] {
    std::vector<Word> level;
    level.reserve(n);
    if (n > 0) level.push_back(zero);
    for (std::size_t i = 1; i < n; ++i)
      level.push_back(obool::increment(be, level.back(), be.gate_not(same[i])));
    labels.push_back(std::move(level));
  };

  emit();
  for (const auto& col : columns) {
    for (std::size_t i = 1; i < n; ++i)
      same[i] = be.gate_and(same[i], be.gate_not(be.gate_xor(col[i - 1], col[i])));
    emit();
  }
  return labels;
}

Bit consistency_bit(Backend& be, std::span<const Word> group_a, std::span<const Word> group_b,
                    std::span<const Bit> classes, std::span<const Bit> validity) {
  const std::size_t n = classes.size();
  if (group_a.size() != n || group_b.size() != n || validity.size() != n)
    throw UsageError("consistency_bit: column lengths differ");
  // consistent = AND_i NOT(valid pair AND same group AND classes differ);
  // the keep-bit is its negation.
  Bit consistent = be.const_bit(true);
  for (std::size_t i = 1; i < n; ++i) {
    const Bit same = obool::eq(be, obool::concat(group_b[i - 1], group_a[i - 1]),
                               obool::concat(group_b[i], group_a[i]));
    const Bit differ = be.gate_xor(classes[i - 1], classes[i]);
    const Bit valid = be.gate_and(validity[i - 1], validity[i]);
    const Bit violation = be.gate_and(be.gate_and(valid, same), differ);
    consistent = be.gate_and(consistent, be.gate_not(violation));
  }
  return be.gate_not(consistent);
}

SelectionMaskCipher naive_select(Backend& be, const EncryptedDatasetState& enc) {
  enc.validate();
  const std::size_t k = enc.k();
  const std::size_t n = enc.n_pad();
  const unsigned w = enc.index_width();
  const auto net = sortnet::generate_network(n);

  auto columns = enc.features;
  auto classes = enc.classes;
  auto invalid = negate_all(be, enc.validity);
  const std::vector<Word> no_group(n);

  SelectionMaskCipher mask;
  mask.keep.resize(k);
  for (std::size_t t = k; t-- > 0;) {
    // Key, least-significant first: f_k..f_1 without f_t, then NOT validity
    // so dummy rows always sort behind every real row.
    std::vector<std::size_t> others;
    for (std::size_t j = k; j-- > 0;)
      if (j != t) others.push_back(j);

    std::vector<Record> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Word key;
      key.bits.reserve(others.size() + 1);
      for (auto j : others) key.bits.push_back(columns[j][i]);
      key.bits.push_back(invalid[i]);
      records.push_back({std::move(key), {Word(columns[t][i]), Word(classes[i])}});
    }
    auto rs = sortnet::with_stability_suffix(be, KeyedRecordSet(std::move(records)));
    rs = sortnet::oblivious_sort(be, std::move(rs), net);

    const auto keys = rs.key_column();
    for (std::size_t pos = 0; pos < others.size(); ++pos)
      columns[others[pos]] = bit_column(keys, w + pos);
    invalid = bit_column(keys, w + others.size());
    columns[t] = bits_of(rs.payload_column(0));
    classes = bits_of(rs.payload_column(1));
    const auto validity = negate_all(be, invalid);

    std::vector<std::vector<Bit>> prefix_columns;
    for (std::size_t j = 0; j < k; ++j)
      if (j != t) prefix_columns.push_back(columns[j]);
    const auto labels = compute_prefix_labels(be, validity, prefix_columns, w);

    const Bit keep = consistency_bit(be, labels.back(), no_group, classes, validity);
    mask.keep[t] = keep;
    for (auto& bit : columns[t]) bit = be.gate_and(bit, keep);
  }
  return mask;
}

SelectionMaskCipher improved_select(Backend& be, const EncryptedDatasetState& enc,
                                    const ImprovedProbe* probe) {
  enc.validate();
  const std::size_t k = enc.k();
  const std::size_t n = enc.n_pad();
  const unsigned w = enc.index_width();
  const auto net = sortnet::generate_network(n);
  const bool tagged = probe != nullptr && probe->carry_row_tags;

  // Phase 1: full sort by (NOT validity, f_1, ..., f_k) and prefix labels.
  std::vector<std::vector<Bit>> prefix_features(k);
  std::vector<Bit> classes;
  std::vector<Bit> validity;
  std::vector<Word> prefix_tags;
  {
    const auto invalid = negate_all(be, enc.validity);
    const auto tags = tagged ? row_tags(be, n, w) : std::vector<Word>{};
    std::vector<Record> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Word key;
      key.bits.reserve(k + 1);
      for (std::size_t j = k; j-- > 0;) key.bits.push_back(enc.features[j][i]);
      key.bits.push_back(invalid[i]);
      Record r{std::move(key), {Word(enc.classes[i])}};
      if (tagged) r.payload.push_back(tags[i]);
      records.push_back(std::move(r));
    }
    auto rs = sortnet::with_stability_suffix(be, KeyedRecordSet(std::move(records)));
    rs = sortnet::oblivious_sort(be, std::move(rs), net);
    const auto keys = rs.key_column();
    for (std::size_t j = 0; j < k; ++j) prefix_features[j] = bit_column(keys, w + (k - 1 - j));
    validity = negate_all(be, bit_column(keys, w + k));
    classes = bits_of(rs.payload_column(0));
    if (tagged) prefix_tags = rs.payload_column(1);
  }

  const Word zero = obool::constant_word(be, 0, w);
  LabelState state;
  state.prefix = compute_prefix_labels(be, validity, prefix_features, w);
  state.post_labels.assign(n, zero);
  for (std::size_t i = 0; i < n; ++i) state.map.push_back(obool::constant_word(be, i, w));
  if (probe && probe->after_phase1) probe->after_phase1({state, prefix_tags, prefix_features});

  // Suffix side: arrays kept in the order produced by the latest suffix sort.
  std::vector<Bit> suffix_classes = classes;
  std::vector<Bit> suffix_validity = validity;
  std::vector<Word> suffix_tags = prefix_tags;
  std::vector<Bit> next_feature;  // f_{t+1}, aligned to the suffix order

  SelectionMaskCipher mask;
  mask.keep.resize(k);
  for (std::size_t t = k; t-- > 0;) {
    // Phase 2a: regroup the suffix by (f_{t+1}, PostL). Nothing to do for the
    // last feature, whose suffix is empty.
    if (t + 1 < k) {
      std::vector<Record> records;
      records.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        Record r{obool::concat(state.post_labels[i], Word(next_feature[i])),
                 {Word(suffix_classes[i]), Word(suffix_validity[i]), state.map[i]}};
        if (tagged) r.payload.push_back(suffix_tags[i]);
        records.push_back(std::move(r));
      }
      auto rs = sortnet::with_stability_suffix(be, KeyedRecordSet(std::move(records)));
      rs = sortnet::oblivious_sort(be, std::move(rs), net);
      state.post_labels = adjacency_labels(be, slice_all(rs.key_column(), w, w + 1), zero);
      suffix_classes = bits_of(rs.payload_column(0));
      suffix_validity = bits_of(rs.payload_column(1));
      state.map = rs.payload_column(2);
      if (tagged) suffix_tags = rs.payload_column(3);
    }

    // Phase 2b: bring f_t and L[t-1] (prefix order) into the suffix order.
    state.map_inverse = sortnet::inverse_permutation(be, state.map, net);
    std::vector<Bit> aligned_feature;
    std::vector<Word> aligned_labels;
    std::vector<Word> aligned_tags;
    {
      std::vector<Record> records;
      records.reserve(n);
      for (std::size_t p = 0; p < n; ++p) {
        Record r{state.map_inverse[p], {Word(prefix_features[t][p]), state.prefix[t][p]}};
        if (tagged) r.payload.push_back(prefix_tags[p]);
        records.push_back(std::move(r));
      }
      auto rs = sortnet::oblivious_sort(be, KeyedRecordSet(std::move(records)), net);
      aligned_feature = bits_of(rs.payload_column(0));
      aligned_labels = rs.payload_column(1);
      if (tagged) aligned_tags = rs.payload_column(2);
    }
    if (probe && probe->after_alignment)
      probe->after_alignment({t, state, suffix_tags, aligned_tags});

    // Phase 3: make rows with equal (L[t-1], PostL) adjacent, then decide.
    Bit keep;
    {
      std::vector<Record> records;
      records.reserve(n);
      for (std::size_t i = 0; i < n; ++i)
        records.push_back({obool::concat(state.post_labels[i], aligned_labels[i]),
                           {Word(suffix_classes[i]), Word(suffix_validity[i])}});
      auto rs = sortnet::with_stability_suffix(be, KeyedRecordSet(std::move(records)));
      rs = sortnet::oblivious_sort(be, std::move(rs), net);
      const auto keys = rs.key_column();
      keep = consistency_bit(be, slice_all(keys, 2 * w, w), slice_all(keys, w, w),
                             bits_of(rs.payload_column(0)), bits_of(rs.payload_column(1)));
    }
    mask.keep[t] = keep;
    next_feature.clear();
    next_feature.reserve(n);
    for (auto b : aligned_feature) next_feature.push_back(be.gate_and(b, keep));
  }
  return mask;
}

}  // namespace ocwc::pcwc
