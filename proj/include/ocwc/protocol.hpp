#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocwc/dataset.hpp"
#include "ocwc/obool/backend.hpp"

namespace ocwc::protocol {

enum class BackendKind : std::uint8_t { Sim = 0, Fhe = 1 };
enum class Algorithm : std::uint8_t { Naive = 0, Improved = 1 };

BackendKind parse_backend_kind(std::string_view text);
std::string_view to_string(BackendKind kind);
Algorithm parse_algorithm(std::string_view text);
std::string_view to_string(Algorithm algorithm);

// ---------------------------------------------------------------------------
// Encrypted container ("OCWC" files). Doubles as the wire format of the two
// protocol messages.
// ---------------------------------------------------------------------------

inline constexpr std::uint16_t kContainerVersion = 1;

enum class PayloadKind : std::uint8_t { Dataset = 1, SelectionMask = 2 };

struct ContainerHeader {
  PayloadKind payload = PayloadKind::Dataset;
  BackendKind backend = BackendKind::Sim;
  std::uint32_t n = 0;
  std::uint32_t n_pad = 0;
  std::uint32_t k = 0;
  std::uint16_t word_width = 0;
  bool operator==(const ContainerHeader&) const = default;
};

using Blob = std::vector<std::uint8_t>;

struct Container {
  ContainerHeader header;
  std::vector<std::vector<Blob>> columns;
  bool operator==(const Container&) const = default;
};

std::vector<std::uint8_t> encode(const Container& c);
/// Throws DataError on bad magic, unsupported version or inconsistent shape.
Container decode(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Keys and backend construction.
// ---------------------------------------------------------------------------

struct KeyFiles {
  std::filesystem::path dir;
  std::filesystem::path secret() const { return dir / "secret.key"; }
  std::filesystem::path eval() const { return dir / "eval.key"; }
};

/// Writes secret.key and eval.key into out_dir; on failure neither file is
/// left behind. The simulation backend's keys are notional seed tokens.
void keygen(BackendKind kind, const std::filesystem::path& out_dir, std::uint64_t seed,
            const std::string& adapter_path = {});

/// Data-owner side: may encrypt and decrypt.
obool::Backend open_owner_backend(BackendKind kind, const KeyFiles& keys,
                                  const std::string& adapter_path = {},
                                  obool::BackendOptions options = {});
/// Analyst side: evaluation key only; any decrypt attempt fails.
obool::Backend open_analyst_backend(BackendKind kind, const KeyFiles& keys,
                                    const std::string& adapter_path = {},
                                    obool::BackendOptions options = {});
/// Freshly keyed backend holding both keys, for in-process benchmarks.
obool::Backend open_ephemeral_backend(BackendKind kind, std::uint64_t seed,
                                      const std::string& adapter_path = {},
                                      obool::BackendOptions options = {});

// ---------------------------------------------------------------------------
// Protocol steps.
// ---------------------------------------------------------------------------

/// Largest n_pad whose indices fit the container's 16-bit word width field.
inline constexpr std::size_t kMaxPaddedRows = std::size_t{1} << 16;
inline constexpr std::size_t kMaxFeatures = std::size_t{1} << 16;

struct SelectStats {
  Algorithm algorithm = Algorithm::Improved;
  std::size_t k = 0;
  std::size_t n_pad = 0;
  obool::GateCounts gates;
  std::string digest;
  double wall_ms = 0;
};

/// Owner: dataset -> message 1.
std::vector<std::uint8_t> encrypt_dataset_message(obool::Backend& owner, const Dataset& ds);
/// Analyst: message 1 -> message 2. Never decrypts.
std::vector<std::uint8_t> select_message(obool::Backend& analyst,
                                         std::span<const std::uint8_t> message,
                                         Algorithm algorithm, SelectStats* stats = nullptr);
/// Owner: message 2 -> plaintext keep-mask.
std::vector<std::uint8_t> decrypt_mask_message(obool::Backend& owner,
                                               std::span<const std::uint8_t> message);

/// Counts messages crossing the owner/analyst boundary.
struct Channel {
  std::size_t owner_to_analyst = 0;
  std::size_t analyst_to_owner = 0;
  std::size_t total() const { return owner_to_analyst + analyst_to_owner; }
};

struct ProtocolRun {
  std::vector<std::uint8_t> mask;
  std::vector<std::string> selected;
  SelectStats stats;
  Channel channel;
  std::size_t analyst_decrypt_calls = 0;
};

/// encrypt -> select -> decrypt, in process, with the messages serialized
/// exactly as the CLI writes them.
ProtocolRun run_protocol(const Dataset& ds, Algorithm algorithm, BackendKind kind,
                         const KeyFiles& keys, const std::string& adapter_path = {});

// ---------------------------------------------------------------------------
// Synthetic data.
// ---------------------------------------------------------------------------

/// Reproducible random binary table. With `planted`, the class is the XOR of
/// that many distinct randomly chosen features. Names are f1..fk and C.
Dataset gen_dataset(std::size_t n, std::size_t k, std::uint64_t seed,
                    std::optional<std::size_t> planted = std::nullopt);

/// Which features gen_dataset planted for these arguments.
std::vector<std::size_t> planted_features(std::size_t k, std::uint64_t seed,
                                          std::size_t planted);

}  // namespace ocwc::protocol
