#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ocwc {

/// Binary training table: n samples, k binary features and one binary class.
/// Rows keep the order in which they were read; that order is the canonical
/// "original position" used by stability suffixes.
class Dataset {
 public:
  Dataset(std::vector<std::string> feature_names,
          std::vector<std::vector<std::uint8_t>> rows,
          std::vector<std::uint8_t> classes, std::string class_name = "C");

  std::size_t n() const noexcept { return classes_.size(); }
  std::size_t k() const noexcept { return names_.size(); }

  std::uint8_t value(std::size_t row, std::size_t feature) const {
    return values_[row * k() + feature];
  }
  std::uint8_t label(std::size_t row) const { return classes_[row]; }
  std::span<const std::uint8_t> row(std::size_t i) const {
    return {values_.data() + i * k(), k()};
  }

  const std::vector<std::string>& feature_names() const noexcept {
    return names_;
  }
  const std::string& class_name() const noexcept { return class_name_; }

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::string> names_;
  std::string class_name_;
  std::vector<std::uint8_t> values_;  // row-major n*k
  std::vector<std::uint8_t> classes_;
};

/// Dataset extended to a power-of-two row count. Rows [n, n_pad) are dummies
/// with all-zero features, class 0 and validity 0.
struct PaddedDataset {
  Dataset base;
  std::size_t n_pad;
  std::vector<std::uint8_t> validity;
  unsigned suffix_bits;  // ceil(log2(n_pad)); 0 when n_pad == 1

  std::uint8_t value(std::size_t row, std::size_t feature) const {
    return row < base.n() ? base.value(row, feature) : 0;
  }
  std::uint8_t label(std::size_t row) const {
    return row < base.n() ? base.label(row) : 0;
  }
};

std::size_t next_power_of_two(std::size_t n);
unsigned ceil_log2(std::size_t n);

Dataset parse_csv(std::string_view text);
Dataset load_csv(const std::filesystem::path& path);
void save_csv(const Dataset& ds, const std::filesystem::path& path);
std::string to_csv(const Dataset& ds);

PaddedDataset pad(const Dataset& ds);

/// Names of the features whose mask bit is set, in column order.
std::vector<std::string> decode_selection(std::span<const std::uint8_t> mask,
                                          const Dataset& ds);

}  // namespace ocwc
