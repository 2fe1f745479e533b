#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ocwc::obool {

enum class GateKind : std::uint8_t { Xor = 0, And = 1, Not = 2, Const = 3 };
inline constexpr std::size_t kGateKinds = 4;

std::string_view to_string(GateKind kind);

/// Handle to one encrypted bit. Only the issuing Backend can combine it.
struct Bit {
  std::uint32_t id = 0;
  std::uint32_t owner = 0;
};

struct GateOp {
  GateKind kind;
  std::uint32_t a;  // first operand id, or the literal for Const
  std::uint32_t b;  // second operand id (Xor/And only)
  bool operator==(const GateOp&) const = default;
};

struct GateCounts {
  std::array<std::uint64_t, kGateKinds> by_kind{};

  std::uint64_t operator[](GateKind kind) const {
    return by_kind[static_cast<std::size_t>(kind)];
  }
  std::uint64_t total() const;
  GateCounts operator-(const GateCounts& rhs) const;
  bool operator==(const GateCounts&) const = default;
};

/// Per-gate weights for cost models where AND and XOR are not equally
/// expensive. Parsed from "kind=value" lines; '#' starts a comment.
struct CostTable {
  std::array<double, kGateKinds> weight{1.0, 1.0, 1.0, 1.0};

  double cost(const GateCounts& counts) const;
  static CostTable parse(std::string_view text);
  static CostTable load(const std::filesystem::path& path);
};

/// Append-only record of the gates a Backend evaluated. The digest covers
/// gate kinds, operand wiring, constant literals and input creation, and
/// never plaintext values, so equal circuits give equal digests.
class Transcript {
 public:
  explicit Transcript(bool record_ops = false);
  ~Transcript();
  Transcript(Transcript&&) noexcept;
  Transcript& operator=(Transcript&&) noexcept;

  void append(GateKind kind, std::uint32_t a, std::uint32_t b);
  void note_input(std::uint32_t id);

  const GateCounts& counts() const noexcept { return counts_; }
  std::uint64_t inputs() const noexcept { return inputs_; }
  const std::vector<GateOp>& ops() const noexcept { return ops_; }
  bool recording() const noexcept { return record_ops_; }

  /// Hex BLAKE2b-256 of everything appended so far.
  std::string digest() const;

 private:
  struct HashState;
  void feed(const std::uint8_t* data, std::size_t size);

  bool record_ops_;
  GateCounts counts_;
  std::uint64_t inputs_ = 0;
  std::vector<GateOp> ops_;
  std::unique_ptr<HashState> hash_;
};

/// Storage and evaluation for one backend kind. Every push_* appends exactly
/// one slot; slot index == Bit::id.
class BitEngine {
 public:
  virtual ~BitEngine() = default;

  virtual std::string_view kind() const = 0;
  virtual void push_const(bool value) = 0;
  virtual void push_xor(std::uint32_t a, std::uint32_t b) = 0;
  virtual void push_and(std::uint32_t a, std::uint32_t b) = 0;
  virtual void push_not(std::uint32_t a) = 0;
  virtual void push_encrypt(bool value) = 0;
  virtual void push_import(std::span<const std::uint8_t> blob) = 0;
  virtual std::vector<std::uint8_t> export_slot(std::uint32_t id) const = 0;
  virtual bool decrypt_slot(std::uint32_t id) const = 0;
  virtual bool has_secret_key() const = 0;
  virtual std::size_t bytes_per_slot() const = 0;
};

/// Plaintext simulation: one byte per slot. "Ciphertext" blobs are the bit
/// itself; secret-key possession is modelled by a flag so that the analyst
/// role can be run without decryption capability.
class SimulationEngine final : public BitEngine {
 public:
  explicit SimulationEngine(bool has_secret_key = true)
      : secret_(has_secret_key) {}

  std::string_view kind() const override { return "sim"; }
  void push_const(bool value) override { bits_.push_back(value); }
  void push_xor(std::uint32_t a, std::uint32_t b) override {
    bits_.push_back(bits_[a] ^ bits_[b]);
  }
  void push_and(std::uint32_t a, std::uint32_t b) override {
    bits_.push_back(bits_[a] & bits_[b]);
  }
  void push_not(std::uint32_t a) override { bits_.push_back(bits_[a] ^ 1u); }
  void push_encrypt(bool value) override;
  void push_import(std::span<const std::uint8_t> blob) override;
  std::vector<std::uint8_t> export_slot(std::uint32_t id) const override {
    return {bits_[id]};
  }
  bool decrypt_slot(std::uint32_t id) const override;
  bool has_secret_key() const override { return secret_; }
  std::size_t bytes_per_slot() const override { return 1; }

 private:
  bool secret_;
  std::vector<std::uint8_t> bits_;
};

struct BackendOptions {
  bool record_ops = false;
  std::size_t slot_limit = 0;  // 0 = unlimited
};

class Backend {
 public:
  explicit Backend(std::unique_ptr<BitEngine> engine, BackendOptions options = {});
  Backend(Backend&&) noexcept = default;
  Backend& operator=(Backend&&) noexcept = default;

  Bit const_bit(bool value);
  Bit gate_xor(Bit a, Bit b);
  Bit gate_and(Bit a, Bit b);
  Bit gate_not(Bit a);

  Bit encrypt(bool value);
  bool decrypt(Bit b);
  Bit import_bit(std::span<const std::uint8_t> blob);
  std::vector<std::uint8_t> export_bit(Bit b) const;

  std::string_view kind() const { return engine_->kind(); }
  bool has_secret_key() const { return engine_->has_secret_key(); }
  const Transcript& transcript() const noexcept { return transcript_; }
  std::size_t decrypt_calls() const noexcept { return decrypt_calls_; }
  std::size_t slots() const noexcept { return next_id_; }
  std::uint32_t instance() const noexcept { return instance_; }

 private:
  void check(Bit b) const;
  std::uint32_t claim_slot();

  std::unique_ptr<BitEngine> engine_;
  Transcript transcript_;
  std::uint32_t instance_;
  std::uint32_t next_id_ = 0;
  std::size_t slot_limit_;
  std::size_t decrypt_calls_ = 0;
};

Backend make_simulation_backend(bool has_secret_key = true,
                                BackendOptions options = {});

}  // namespace ocwc::obool
