#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ocwc/fhe_adapter.h"
#include "ocwc/obool/backend.hpp"

namespace ocwc::obool {

/// Function table resolved from a dynamically loaded adapter library.
struct AdapterApi {
  decltype(&ocwc_fhe_abi_version) abi_version = nullptr;
  decltype(&ocwc_fhe_create_session) create_session = nullptr;
  decltype(&ocwc_fhe_destroy_session) destroy_session = nullptr;
  decltype(&ocwc_fhe_keygen) keygen = nullptr;
  decltype(&ocwc_fhe_save_keys) save_keys = nullptr;
  decltype(&ocwc_fhe_load_secret_key) load_secret_key = nullptr;
  decltype(&ocwc_fhe_load_eval_key) load_eval_key = nullptr;
  decltype(&ocwc_fhe_encrypt_bit) encrypt_bit = nullptr;
  decltype(&ocwc_fhe_decrypt_bit) decrypt_bit = nullptr;
  decltype(&ocwc_fhe_gate) gate = nullptr;
  decltype(&ocwc_fhe_export_bit) export_bit = nullptr;
  decltype(&ocwc_fhe_import_bit) import_bit = nullptr;
  decltype(&ocwc_fhe_last_error) last_error = nullptr;
};

class AdapterLibrary {
 public:
  /// Library named by $OCWC_FHE_ADAPTER, else "libocwc_fhe_adapter.so".
  static std::string default_path();

  /// Throws BackendError("backend unavailable: ...") when the library or any
  /// symbol cannot be resolved, or the ABI version differs.
  static std::shared_ptr<AdapterLibrary> open(const std::string& path);

  ~AdapterLibrary();
  AdapterLibrary(const AdapterLibrary&) = delete;
  AdapterLibrary& operator=(const AdapterLibrary&) = delete;

  const AdapterApi& api() const noexcept { return api_; }

 private:
  explicit AdapterLibrary(void* handle) : handle_(handle) {}
  void* handle_;
  AdapterApi api_;
};

/// One adapter session; owns its native handles for its whole lifetime.
class AdapterSession {
 public:
  explicit AdapterSession(std::shared_ptr<AdapterLibrary> lib);
  ~AdapterSession();
  AdapterSession(const AdapterSession&) = delete;
  AdapterSession& operator=(const AdapterSession&) = delete;

  void keygen(std::uint64_t seed);
  void save_keys(const std::filesystem::path& secret_key,
                 const std::filesystem::path& eval_key);
  void load_secret_key(const std::filesystem::path& path);
  void load_eval_key(const std::filesystem::path& path);

  ocwc_fhe_handle encrypt(bool bit);
  bool decrypt(ocwc_fhe_handle h);
  ocwc_fhe_handle gate(int kind, std::initializer_list<ocwc_fhe_handle> operands,
                       int immediate = 0);
  std::vector<std::uint8_t> export_bit(ocwc_fhe_handle h);
  ocwc_fhe_handle import_bit(std::span<const std::uint8_t> blob);

  bool has_secret_key() const noexcept { return secret_; }

 private:
  void check(int status, const char* what) const;

  std::shared_ptr<AdapterLibrary> lib_;
  ocwc_fhe_session session_ = 0;
  bool secret_ = false;
};

/// BitEngine that forwards every gate across the adapter boundary.
class ExternalEngine final : public BitEngine {
 public:
  explicit ExternalEngine(std::unique_ptr<AdapterSession> session)
      : session_(std::move(session)) {}

  std::string_view kind() const override { return "fhe"; }
  void push_const(bool value) override;
  void push_xor(std::uint32_t a, std::uint32_t b) override;
  void push_and(std::uint32_t a, std::uint32_t b) override;
  void push_not(std::uint32_t a) override;
  void push_encrypt(bool value) override;
  void push_import(std::span<const std::uint8_t> blob) override;
  std::vector<std::uint8_t> export_slot(std::uint32_t id) const override;
  bool decrypt_slot(std::uint32_t id) const override;
  bool has_secret_key() const override { return session_->has_secret_key(); }
  std::size_t bytes_per_slot() const override { return sizeof(ocwc_fhe_handle); }

 private:
  std::unique_ptr<AdapterSession> session_;
  std::vector<ocwc_fhe_handle> handles_;
};

}  // namespace ocwc::obool
