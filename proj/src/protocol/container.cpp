#include <fstream>
#include <iterator>

#include "ocwc/errors.hpp"
#include "ocwc/protocol.hpp"

namespace ocwc::protocol {

namespace {

constexpr std::uint8_t kMagic[4] = {'O', 'C', 'W', 'C'};

class Writer {
 public:
  void bytes(const std::uint8_t* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  template <typename T>
  void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
      out_.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
  }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > in_.size() - pos_) throw DataError("truncated OCWC container");
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  template <typename T>
  T le() {
    auto s = take(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{s[i]} << (8 * i);
    return static_cast<T>(v);
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::size_t expected_columns(const ContainerHeader& h) {
  return h.payload == PayloadKind::Dataset ? std::size_t{h.k} + 2 : 1;
}

std::size_t expected_blobs(const ContainerHeader& h) {
  return h.payload == PayloadKind::Dataset ? h.n_pad : h.k;
}

void check_shape(const Container& c) {
  const auto& h = c.header;
  if (c.columns.size() != expected_columns(h))
    throw DataError("OCWC container has " + std::to_string(c.columns.size()) +
                    " columns, header implies " + std::to_string(expected_columns(h)));
  for (const auto& col : c.columns)
    if (col.size() != expected_blobs(h))
      throw DataError("OCWC column holds " + std::to_string(col.size()) +
                      " ciphertexts, header implies " + std::to_string(expected_blobs(h)));
}

}  // namespace

std::vector<std::uint8_t> encode(const Container& c) {
  check_shape(c);
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.le<std::uint16_t>(kContainerVersion);
  w.le<std::uint8_t>(static_cast<std::uint8_t>(c.header.payload));
  w.le<std::uint8_t>(static_cast<std::uint8_t>(c.header.backend));
  w.le<std::uint32_t>(c.header.n);
  w.le<std::uint32_t>(c.header.n_pad);
  w.le<std::uint32_t>(c.header.k);
  w.le<std::uint16_t>(c.header.word_width);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(c.columns.size()));
  for (const auto& col : c.columns) {
    std::uint64_t length = 0;
    for (const auto& blob : col) length += 4 + blob.size();
    w.le<std::uint64_t>(length);
    for (const auto& blob : col) {
      w.le<std::uint32_t>(static_cast<std::uint32_t>(blob.size()));
      w.bytes(blob.data(), blob.size());
    }
  }
  return std::move(w.buffer());
}

Container decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.take(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw DataError("not an OCWC container");
  const auto version = r.le<std::uint16_t>();
  if (version != kContainerVersion)
    throw DataError("unsupported OCWC container version " + std::to_string(version));

  Container c;
  const auto payload = r.le<std::uint8_t>();
  if (payload != 1 && payload != 2) throw DataError("unknown OCWC payload kind");
  c.header.payload = static_cast<PayloadKind>(payload);
  const auto backend = r.le<std::uint8_t>();
  if (backend > 1) throw DataError("unknown OCWC backend kind");
  c.header.backend = static_cast<BackendKind>(backend);
  c.header.n = r.le<std::uint32_t>();
  c.header.n_pad = r.le<std::uint32_t>();
  c.header.k = r.le<std::uint32_t>();
  c.header.word_width = r.le<std::uint16_t>();
  const auto& h = c.header;
  if (h.k == 0 || h.n == 0 || h.n > h.n_pad || h.n_pad != next_power_of_two(h.n) ||
      h.word_width != ceil_log2(h.n_pad))
    throw DataError("inconsistent OCWC header dimensions");

  const auto columns = r.le<std::uint32_t>();
  if (columns != expected_columns(h))
    throw DataError("OCWC column count does not match header");
  c.columns.resize(columns);
  for (auto& col : c.columns) {
    const auto length = r.le<std::uint64_t>();
    Reader body(r.take(length));
    for (std::size_t i = 0; i < expected_blobs(h); ++i) {
      const auto size = body.le<std::uint32_t>();
      auto blob = body.take(size);
      col.emplace_back(blob.begin(), blob.end());
    }
    if (!body.done()) throw DataError("OCWC column length prefix does not match its body");
  }
  if (!r.done()) throw DataError("trailing bytes after OCWC container");
  return c;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace ocwc::protocol
