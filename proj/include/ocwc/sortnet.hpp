#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ocwc/obool/word.hpp"

namespace ocwc::sortnet {

struct Comparator {
  std::uint32_t lo;
  std::uint32_t hi;
  bool operator==(const Comparator&) const = default;
};

/// Batcher odd-even mergesort network. Comparators in one layer touch
/// disjoint positions; execution order is layer by layer, left to right.
struct SortingNetwork {
  std::size_t size = 0;
  std::vector<std::vector<Comparator>> layers;

  std::size_t comparator_count() const;
  std::vector<Comparator> flatten() const;
};

/// Throws UsageError unless m is a power of two (m >= 1).
SortingNetwork generate_network(std::size_t m);

struct Record {
  obool::Word key;
  std::vector<obool::Word> payload;
};

/// Records sharing one key width and payload layout.
class KeyedRecordSet {
 public:
  KeyedRecordSet() = default;
  explicit KeyedRecordSet(std::vector<Record> records);

  std::size_t size() const noexcept { return records_.size(); }
  std::size_t key_width() const;
  const Record& operator[](std::size_t i) const { return records_[i]; }
  Record& operator[](std::size_t i) { return records_[i]; }
  const std::vector<Record>& records() const noexcept { return records_; }

  /// Column view: payload slot `slot` of every record, in record order.
  std::vector<obool::Word> payload_column(std::size_t slot) const;
  std::vector<obool::Word> key_column() const;

 private:
  std::vector<Record> records_;
};

/// Widens each key by ceil(log2 m) low-order CONST bits holding the record's
/// current position, making every composite key distinct.
KeyedRecordSet with_stability_suffix(obool::Backend& be, KeyedRecordSet rs);

/// Ascending sort on unsigned keys: every comparator is a cmp_gt on the two
/// keys followed by a conditional swap of key and full payload.
KeyedRecordSet oblivious_sort(obool::Backend& be, KeyedRecordSet rs,
                              const SortingNetwork& net);

/// r with r[mapl[i]] = i, computed by sorting the identity sequence with
/// `mapl` as the key. Contract is void unless mapl decrypts to a permutation.
std::vector<obool::Word> inverse_permutation(obool::Backend& be,
                                             const std::vector<obool::Word>& mapl,
                                             const SortingNetwork& net);

}  // namespace ocwc::sortnet
