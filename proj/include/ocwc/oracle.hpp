#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ocwc/dataset.hpp"

namespace ocwc::oracle {

/// Feature subset as a k-bit presence mask (1 = feature selected).
struct FeatureSubset {
  std::vector<std::uint8_t> mask;

  static FeatureSubset none(std::size_t k) { return {std::vector<std::uint8_t>(k, 0)}; }
  static FeatureSubset all(std::size_t k) { return {std::vector<std::uint8_t>(k, 1)}; }
  static FeatureSubset of(std::size_t k, std::initializer_list<std::size_t> features);

  std::size_t k() const noexcept { return mask.size(); }
  std::size_t count() const;
  bool contains(std::size_t j) const { return mask[j] != 0; }
  FeatureSubset without(std::size_t j) const;
  bool subset_of(const FeatureSubset& other) const;

  auto operator<=>(const FeatureSubset&) const = default;
};

/// True iff no two rows agree on every selected feature while differing in
/// class (binary consistency measure equals 0).
bool is_consistent(const Dataset& ds, const FeatureSubset& s);

struct CwcResult {
  FeatureSubset selected;
  bool inconsistent_input = false;  // the full feature set is inconsistent
};

/// Greedy backward elimination visiting features in `order` (0-based
/// permutation of 0..k-1): drop f whenever the remainder stays consistent.
CwcResult cwc_select(const Dataset& ds, std::span<const std::size_t> order);

/// k-1, k-2, ..., 0: the order in which the oblivious algorithms decide.
std::vector<std::size_t> reverse_order(std::size_t k);
std::vector<std::size_t> forward_order(std::size_t k);

/// I(f_j; C) in bits over the empirical row distribution.
double mutual_information(const Dataset& ds, std::size_t feature);

/// Every consistent subset none of whose proper subsets is consistent.
/// Exponential; throws UsageError for k > 15.
std::vector<FeatureSubset> minimal_consistent_bruteforce(const Dataset& ds);

}  // namespace ocwc::oracle
