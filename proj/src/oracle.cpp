#include "ocwc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ocwc/errors.hpp"

namespace ocwc::oracle {

FeatureSubset FeatureSubset::of(std::size_t k, std::initializer_list<std::size_t> features) {
  auto s = none(k);
  for (auto j : features) s.mask.at(j) = 1;
  return s;
}

std::size_t FeatureSubset::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

FeatureSubset FeatureSubset::without(std::size_t j) const {
  auto s = *this;
  s.mask.at(j) = 0;
  return s;
}

bool FeatureSubset::subset_of(const FeatureSubset& other) const {
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask[j] && !other.mask[j]) return false;
  return true;
}

bool is_consistent(const Dataset& ds, const FeatureSubset& s) {
  if (s.k() != ds.k())
    throw UsageError("subset has " + std::to_string(s.k()) + " flags, dataset has " +
                     std::to_string(ds.k()) + " features");
  std::map<std::vector<std::uint8_t>, std::uint8_t> seen;
  std::vector<std::uint8_t> projected;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    projected.clear();
    for (std::size_t j = 0; j < ds.k(); ++j)
      if (s.contains(j)) projected.push_back(ds.value(i, j));
    auto [it, inserted] = seen.emplace(projected, ds.label(i));
    if (!inserted && it->second != ds.label(i)) return false;
  }
  return true;
}

CwcResult cwc_select(const Dataset& ds, std::span<const std::size_t> order) {
  std::vector<std::size_t> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> identity(ds.k());
  std::iota(identity.begin(), identity.end(), 0);
  if (sorted != identity) throw UsageError("cwc_select: order is not a permutation of 0..k-1");

  CwcResult result{FeatureSubset::all(ds.k()), false};
  if (!is_consistent(ds, result.selected)) {
    result.inconsistent_input = true;
    return result;
  }
  for (auto j : order) {
    auto candidate = result.selected.without(j);
    if (is_consistent(ds, candidate)) result.selected = std::move(candidate);
  }
  return result;
}

std::vector<std::size_t> reverse_order(std::size_t k) {
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = k - 1 - i;
  return order;
}

std::vector<std::size_t> forward_order(std::size_t k) {
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

double mutual_information(const Dataset& ds, std::size_t feature) {
  if (feature >= ds.k()) throw UsageError("feature index out of range");
  double joint[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < ds.n(); ++i) joint[ds.value(i, feature)][ds.label(i)] += 1;
  const double n = static_cast<double>(ds.n());
  double mi = 0;
  for (int f = 0; f < 2; ++f) {
    for (int c = 0; c < 2; ++c) {
      if (joint[f][c] == 0) continue;
      const double pfc = joint[f][c] / n;
      const double pf = (joint[f][0] + joint[f][1]) / n;
      const double pc = (joint[0][c] + joint[1][c]) / n;
      mi += pfc * std::log2(pfc / (pf * pc));
    }
  }
  return std::max(mi, 0.0);
}

std::vector<FeatureSubset> minimal_consistent_bruteforce(const Dataset& ds) {
  if (ds.k() > 15) throw UsageError("brute-force enumeration is limited to k <= 15");
  const std::size_t k = ds.k();
  const std::size_t total = std::size_t{1} << k;
  std::vector<char> consistent(total);
  auto subset_of_bits = [k](std::size_t bits) {
    auto s = FeatureSubset::none(k);
    for (std::size_t j = 0; j < k; ++j) s.mask[j] = (bits >> j) & 1u;
    return s;
  };
  for (std::size_t bits = 0; bits < total; ++bits)
    consistent[bits] = is_consistent(ds, subset_of_bits(bits));

  std::vector<FeatureSubset> minimal;
  for (std::size_t bits = 0; bits < total; ++bits) {
    if (!consistent[bits]) continue;
    // Every proper submask is checked, so this does not lean on monotonicity.
    bool is_minimal = true;
    if (bits != 0) {
      for (std::size_t sub = (bits - 1) & bits;; sub = (sub - 1) & bits) {
        if (consistent[sub]) {
          is_minimal = false;
          break;
        }
        if (sub == 0) break;
      }
    }
    if (is_minimal) minimal.push_back(subset_of_bits(bits));
  }
  return minimal;
}

}  // namespace ocwc::oracle
