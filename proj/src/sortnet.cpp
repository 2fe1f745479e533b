#include "ocwc/sortnet.hpp"

#include <bit>

#include "ocwc/dataset.hpp"
#include "ocwc/errors.hpp"

namespace ocwc::sortnet {

using obool::Backend;
using obool::Word;

std::size_t SortingNetwork::comparator_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers) count += layer.size();
  return count;
}

std::vector<Comparator> SortingNetwork::flatten() const {
  std::vector<Comparator> all;
  all.reserve(comparator_count());
  for (const auto& layer : layers) all.insert(all.end(), layer.begin(), layer.end());
  return all;
}

SortingNetwork generate_network(std::size_t m) {
  if (m == 0 || !std::has_single_bit(m))
    throw UsageError("sorting network size must be a power of two, got " + std::to_string(m));
  SortingNetwork net;
  net.size = m;
  // Iterative odd-even mergesort: merge runs of length p pairwise; each
  // (p, k) pass is one layer.
  for (std::size_t p = 1; p < m; p *= 2) {
    for (std::size_t k = p; k >= 1; k /= 2) {
      std::vector<Comparator> layer;
      for (std::size_t j = k % p; j + k < m; j += 2 * k) {
        for (std::size_t i = 0; i < k && i + j + k < m; ++i) {
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p))
            layer.push_back({static_cast<std::uint32_t>(i + j),
                             static_cast<std::uint32_t>(i + j + k)});
        }
      }
      if (!layer.empty()) net.layers.push_back(std::move(layer));
    }
  }
  return net;
}

KeyedRecordSet::KeyedRecordSet(std::vector<Record> records) : records_(std::move(records)) {
  if (records_.empty()) return;
  const auto& first = records_.front();
  for (const auto& r : records_) {
    if (r.key.width() != first.key.width())
      throw UsageError("record set keys have differing widths");
    if (r.payload.size() != first.payload.size())
      throw UsageError("record set payloads have differing layouts");
    for (std::size_t s = 0; s < r.payload.size(); ++s)
      if (r.payload[s].width() != first.payload[s].width())
        throw UsageError("record set payload slot " + std::to_string(s) +
                         " has differing widths");
  }
}

std::size_t KeyedRecordSet::key_width() const {
  return records_.empty() ? 0 : records_.front().key.width();
}

std::vector<Word> KeyedRecordSet::payload_column(std::size_t slot) const {
  std::vector<Word> col;
  col.reserve(records_.size());
  for (const auto& r : records_) col.push_back(r.payload.at(slot));
  return col;
}

std::vector<Word> KeyedRecordSet::key_column() const {
  std::vector<Word> col;
  col.reserve(records_.size());
  for (const auto& r : records_) col.push_back(r.key);
  return col;
}

KeyedRecordSet with_stability_suffix(Backend& be, KeyedRecordSet rs) {
  const unsigned width = ceil_log2(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i)
    rs[i].key = obool::concat(obool::constant_word(be, i, width), rs[i].key);
  return rs;
}

KeyedRecordSet oblivious_sort(Backend& be, KeyedRecordSet rs, const SortingNetwork& net) {
  if (rs.size() != net.size)
    throw UsageError("record set has " + std::to_string(rs.size()) +
                     " records but the network sorts " + std::to_string(net.size));
  for (const auto& layer : net.layers) {
    for (const auto& c : layer) {
      Record& lo = rs[c.lo];
      Record& hi = rs[c.hi];
      const obool::Bit swap = obool::cmp_gt(be, lo.key, hi.key);
      obool::cond_swap(be, swap, lo.key, hi.key);
      for (std::size_t s = 0; s < lo.payload.size(); ++s)
        obool::cond_swap(be, swap, lo.payload[s], hi.payload[s]);
    }
  }
  return rs;
}

std::vector<Word> inverse_permutation(Backend& be, const std::vector<Word>& mapl,
                                      const SortingNetwork& net) {
  const unsigned width = ceil_log2(mapl.size());
  std::vector<Record> records;
  records.reserve(mapl.size());
  for (std::size_t i = 0; i < mapl.size(); ++i)
    records.push_back({mapl[i], {obool::constant_word(be, i, width)}});
  auto sorted = oblivious_sort(be, KeyedRecordSet(std::move(records)), net);
  return sorted.payload_column(0);
}

}  // namespace ocwc::sortnet
