#include "ocwc/obool/backend.hpp"

#include <sodium.h>

#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ocwc/errors.hpp"

namespace ocwc::obool {

namespace {

std::atomic<std::uint32_t> g_next_instance{1};

constexpr std::uint8_t kInputTag = 0xF0;
constexpr std::size_t kHashBufferSize = 1 << 16;

void put_u32(std::uint8_t* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

}  // namespace

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::Xor: return "xor";
    case GateKind::And: return "and";
    case GateKind::Not: return "not";
    case GateKind::Const: return "const";
  }
  return "?";
}

std::uint64_t GateCounts::total() const {
  std::uint64_t sum = 0;
  for (auto c : by_kind) sum += c;
  return sum;
}

GateCounts GateCounts::operator-(const GateCounts& rhs) const {
  GateCounts out;
  for (std::size_t i = 0; i < kGateKinds; ++i) out.by_kind[i] = by_kind[i] - rhs.by_kind[i];
  return out;
}

double CostTable::cost(const GateCounts& counts) const {
  double sum = 0;
  for (std::size_t i = 0; i < kGateKinds; ++i)
    sum += weight[i] * static_cast<double>(counts.by_kind[i]);
  return sum;
}

CostTable CostTable::parse(std::string_view text) {
  CostTable table;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, 1, "expected key=value");
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const auto key = strip(line.substr(0, eq));
    const auto value = strip(line.substr(eq + 1));
    std::size_t slot;
    if (key == "xor") slot = 0;
    else if (key == "and") slot = 1;
    else if (key == "not") slot = 2;
    else if (key == "const") slot = 3;
    else throw ParseError(line_no, 1, "unknown gate kind \"" + key + "\"");
    double w = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), w);
    if (ec != std::errc{} || ptr != value.data() + value.size() || w < 0)
      throw ParseError(line_no, eq + 2, "invalid weight \"" + value + "\"");
    table.weight[slot] = w;
  }
  return table;
}

CostTable CostTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open cost table " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

struct Transcript::HashState {
  crypto_generichash_state state;
  std::vector<std::uint8_t> pending;
};

Transcript::Transcript(bool record_ops)
    : record_ops_(record_ops), hash_(std::make_unique<HashState>()) {
  if (sodium_init() < 0) throw BackendError("libsodium initialisation failed");
  crypto_generichash_init(&hash_->state, nullptr, 0, 32);
  hash_->pending.reserve(kHashBufferSize);
}

Transcript::~Transcript() = default;
Transcript::Transcript(Transcript&&) noexcept = default;
Transcript& Transcript::operator=(Transcript&&) noexcept = default;

void Transcript::feed(const std::uint8_t* data, std::size_t size) {
  auto& pending = hash_->pending;
  if (pending.size() + size > kHashBufferSize) {
    crypto_generichash_update(&hash_->state, pending.data(), pending.size());
    pending.clear();
  }
  pending.insert(pending.end(), data, data + size);
}

void Transcript::append(GateKind kind, std::uint32_t a, std::uint32_t b) {
  ++counts_.by_kind[static_cast<std::size_t>(kind)];
  std::uint8_t rec[9];
  rec[0] = static_cast<std::uint8_t>(kind);
  put_u32(rec + 1, a);
  put_u32(rec + 5, b);
  feed(rec, sizeof rec);
  if (record_ops_) ops_.push_back({kind, a, b});
}

void Transcript::note_input(std::uint32_t id) {
  ++inputs_;
  std::uint8_t rec[5];
  rec[0] = kInputTag;
  put_u32(rec + 1, id);
  feed(rec, sizeof rec);
}

std::string Transcript::digest() const {
  crypto_generichash_state copy = hash_->state;
  crypto_generichash_update(&copy, hash_->pending.data(), hash_->pending.size());
  std::uint8_t out[32];
  crypto_generichash_final(&copy, out, sizeof out);
  char hex[65];
  sodium_bin2hex(hex, sizeof hex, out, sizeof out);
  return std::string(hex, 64);
}

void SimulationEngine::push_encrypt(bool value) {
  if (!secret_) throw BackendError("simulation backend holds no secret key");
  bits_.push_back(value);
}

void SimulationEngine::push_import(std::span<const std::uint8_t> blob) {
  if (blob.size() != 1 || blob[0] > 1)
    throw BackendError("malformed simulation ciphertext blob");
  bits_.push_back(blob[0]);
}

bool SimulationEngine::decrypt_slot(std::uint32_t id) const {
  if (!secret_) throw BackendError("simulation backend holds no secret key");
  return bits_[id] != 0;
}

Backend::Backend(std::unique_ptr<BitEngine> engine, BackendOptions options)
    : engine_(std::move(engine)),
      transcript_(options.record_ops),
      instance_(g_next_instance.fetch_add(1)),
      slot_limit_(options.slot_limit) {}

void Backend::check(Bit b) const {
  if (b.owner != instance_)
    throw UsageError("bit belongs to backend instance " + std::to_string(b.owner) +
                     ", not " + std::to_string(instance_));
  if (b.id >= next_id_) throw UsageError("dangling bit handle");
}

std::uint32_t Backend::claim_slot() {
  if (slot_limit_ != 0 && next_id_ >= slot_limit_)
    throw BudgetExceeded("backend slot budget of " + std::to_string(slot_limit_) +
                         " exhausted");
  return next_id_;
}

Bit Backend::const_bit(bool value) {
  const auto id = claim_slot();
  engine_->push_const(value);
  ++next_id_;
  transcript_.append(GateKind::Const, value ? 1u : 0u, 0);
  return {id, instance_};
}

Bit Backend::gate_xor(Bit a, Bit b) {
  check(a);
  check(b);
  const auto id = claim_slot();
  engine_->push_xor(a.id, b.id);
  ++next_id_;
  transcript_.append(GateKind::Xor, a.id, b.id);
  return {id, instance_};
}

Bit Backend::gate_and(Bit a, Bit b) {
  check(a);
  check(b);
  const auto id = claim_slot();
  engine_->push_and(a.id, b.id);
  ++next_id_;
  transcript_.append(GateKind::And, a.id, b.id);
  return {id, instance_};
}

Bit Backend::gate_not(Bit a) {
  check(a);
  const auto id = claim_slot();
  engine_->push_not(a.id);
  ++next_id_;
  transcript_.append(GateKind::Not, a.id, 0);
  return {id, instance_};
}

Bit Backend::encrypt(bool value) {
  const auto id = claim_slot();
  engine_->push_encrypt(value);
  ++next_id_;
  transcript_.note_input(id);
  return {id, instance_};
}

Bit Backend::import_bit(std::span<const std::uint8_t> blob) {
  const auto id = claim_slot();
  engine_->push_import(blob);
  ++next_id_;
  transcript_.note_input(id);
  return {id, instance_};
}

bool Backend::decrypt(Bit b) {
  check(b);
  ++decrypt_calls_;
  return engine_->decrypt_slot(b.id);
}

std::vector<std::uint8_t> Backend::export_bit(Bit b) const {
  check(b);
  return engine_->export_slot(b.id);
}

Backend make_simulation_backend(bool has_secret_key, BackendOptions options) {
  return Backend(std::make_unique<SimulationEngine>(has_secret_key), options);
}

}  // namespace ocwc::obool
