#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ocwc/dataset.hpp"

namespace ocwc::testing {

inline Dataset make(const std::vector<std::vector<std::uint8_t>>& rows_with_class) {
  const std::size_t k = rows_with_class.front().size() - 1;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < k; ++j) names.push_back("f" + std::to_string(j + 1));
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::uint8_t> classes;
  for (const auto& r : rows_with_class) {
    rows.emplace_back(r.begin(), r.end() - 1);
    classes.push_back(r.back());
  }
  return Dataset(names, rows, classes);
}

// Eight samples, five features; f4 XOR f5 determines C.
inline Dataset table2() {
  return make({{1, 0, 1, 1, 1, 0},
               {1, 1, 0, 0, 0, 0},
               {0, 0, 0, 1, 1, 0},
               {1, 0, 1, 0, 0, 0},
               {1, 1, 1, 1, 0, 1},
               {0, 1, 0, 1, 0, 1},
               {0, 1, 0, 0, 1, 1},
               {0, 0, 0, 0, 1, 1}});
}

// Five samples, five features; d2 and d3 coincide.
inline Dataset table3_upper() {
  return make({{1, 0, 1, 0, 0, 1},
               {0, 1, 0, 0, 1, 0},
               {0, 1, 0, 0, 1, 0},
               {1, 0, 0, 0, 1, 1},
               {1, 0, 1, 1, 1, 0}});
}

inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(k + 1));
  for (auto& r : rows)
    for (auto& v : r) v = static_cast<std::uint8_t>(rng() & 1);
  return make(rows);
}

/// Dataset whose bits are read from `code`, row-major with the class last.
inline Dataset dataset_from_code(std::uint64_t code, std::size_t n, std::size_t k) {
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(k + 1));
  std::size_t bit = 0;
  for (auto& r : rows)
    for (auto& v : r) v = static_cast<std::uint8_t>((code >> bit++) & 1);
  return make(rows);
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ocwc-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace ocwc::testing
