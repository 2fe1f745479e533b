#include "ocwc/dataset.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "ocwc/errors.hpp"

namespace ocwc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

Dataset::Dataset(std::vector<std::string> feature_names,
                 std::vector<std::vector<std::uint8_t>> rows,
                 std::vector<std::uint8_t> classes, std::string class_name)
    : names_(std::move(feature_names)),
      class_name_(std::move(class_name)),
      classes_(std::move(classes)) {
  if (names_.empty()) throw DataError("dataset needs at least one feature");
  if (classes_.empty()) throw DataError("dataset needs at least one row");
  if (rows.size() != classes_.size())
    throw DataError("row count and class count differ");
  values_.reserve(rows.size() * names_.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != names_.size())
      throw DataError("row " + std::to_string(i) + " has " +
                      std::to_string(rows[i].size()) + " values, expected " +
                      std::to_string(names_.size()));
    for (auto v : rows[i]) {
      if (v > 1) throw DataError("row " + std::to_string(i) + " is not binary");
      values_.push_back(v);
    }
    if (classes_[i] > 1)
      throw DataError("class of row " + std::to_string(i) + " is not binary");
  }
}

std::size_t next_power_of_two(std::size_t n) { return std::bit_ceil(n); }

unsigned ceil_log2(std::size_t n) {
  return n <= 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1));
}

Dataset parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, 1, "empty file");

  const auto header = split_cells(lines[0]);
  if (header.size() < 2)
    throw ParseError(1, 1, "header needs at least one feature and a class column");
  std::vector<std::string> names;
  for (std::size_t j = 0; j + 1 < header.size(); ++j) {
    auto name = trim(header[j]);
    if (name.empty()) throw ParseError(1, j + 1, "empty feature name");
    names.emplace_back(name);
  }
  std::string class_name{trim(header.back())};
  if (lines.size() < 2) throw ParseError(2, 1, "no data rows");

  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::uint8_t> classes;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_cells(lines[r]);
    if (cells.size() != header.size())
      throw ParseError(r + 1, std::min(cells.size(), header.size()) + 1,
                       "expected " + std::to_string(header.size()) +
                           " cells, found " + std::to_string(cells.size()));
    std::vector<std::uint8_t> row;
    row.reserve(names.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      std::uint8_t v;
      if (cells[j] == "0") {
        v = 0;
      } else if (cells[j] == "1") {
        v = 1;
      } else {
        throw ParseError(r + 1, j + 1,
                         "expected 0 or 1, found \"" + std::string(cells[j]) + "\"");
      }
      if (j + 1 < cells.size()) {
        row.push_back(v);
      } else {
        classes.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  return Dataset(std::move(names), std::move(rows), std::move(classes),
                 std::move(class_name));
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string to_csv(const Dataset& ds) {
  std::string out;
  for (const auto& name : ds.feature_names()) {
    out += name;
    out += ',';
  }
  out += ds.class_name();
  out += '\n';
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (auto v : ds.row(i)) {
      out += static_cast<char>('0' + v);
      out += ',';
    }
    out += static_cast<char>('0' + ds.label(i));
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_csv(ds);
  if (!out) throw DataError("write failed for " + path.string());
}

PaddedDataset pad(const Dataset& ds) {
  const auto n_pad = next_power_of_two(ds.n());
  std::vector<std::uint8_t> validity(n_pad, 0);
  std::fill_n(validity.begin(), ds.n(), std::uint8_t{1});
  return PaddedDataset{ds, n_pad, std::move(validity), ceil_log2(n_pad)};
}

std::vector<std::string> decode_selection(std::span<const std::uint8_t> mask,
                                          const Dataset& ds) {
  if (mask.size() != ds.k())
    throw UsageError("selection mask has " + std::to_string(mask.size()) +
                     " bits but the dataset has " + std::to_string(ds.k()) +
                     " features");
  std::vector<std::string> names;
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask[j]) names.push_back(ds.feature_names()[j]);
  return names;
}

}  // namespace ocwc
