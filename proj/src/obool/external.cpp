#include "ocwc/obool/external.hpp"

#include <dlfcn.h>

#include <cstdlib>

#include "ocwc/errors.hpp"

namespace ocwc::obool {

namespace {

template <typename Fn>
void resolve(void* handle, const char* name, Fn& slot) {
  void* sym = dlsym(handle, name);
  if (sym == nullptr)
    throw BackendError(std::string("backend unavailable: adapter lacks symbol ") + name);
  slot = reinterpret_cast<Fn>(sym);
}

}  // namespace

std::string AdapterLibrary::default_path() {
  if (const char* env = std::getenv("OCWC_FHE_ADAPTER"); env != nullptr && *env != '\0')
    return env;
  return "libocwc_fhe_adapter.so";
}

std::shared_ptr<AdapterLibrary> AdapterLibrary::open(const std::string& path) {
  void* handle = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (handle == nullptr) {
    const char* err = dlerror();
    throw BackendError("backend unavailable: cannot load FHE adapter \"" + path +
                       "\"" + (err ? std::string(": ") + err : std::string{}));
  }
  std::shared_ptr<AdapterLibrary> lib(new AdapterLibrary(handle));
  auto& api = lib->api_;
  resolve(handle, "ocwc_fhe_abi_version", api.abi_version);
  resolve(handle, "ocwc_fhe_create_session", api.create_session);
  resolve(handle, "ocwc_fhe_destroy_session", api.destroy_session);
  resolve(handle, "ocwc_fhe_keygen", api.keygen);
  resolve(handle, "ocwc_fhe_save_keys", api.save_keys);
  resolve(handle, "ocwc_fhe_load_secret_key", api.load_secret_key);
  resolve(handle, "ocwc_fhe_load_eval_key", api.load_eval_key);
  resolve(handle, "ocwc_fhe_encrypt_bit", api.encrypt_bit);
  resolve(handle, "ocwc_fhe_decrypt_bit", api.decrypt_bit);
  resolve(handle, "ocwc_fhe_gate", api.gate);
  resolve(handle, "ocwc_fhe_export_bit", api.export_bit);
  resolve(handle, "ocwc_fhe_import_bit", api.import_bit);
  resolve(handle, "ocwc_fhe_last_error", api.last_error);
  if (api.abi_version() != OCWC_FHE_ABI_VERSION)
    throw BackendError("backend unavailable: adapter ABI version " +
                       std::to_string(api.abi_version()) + ", expected " +
                       std::to_string(OCWC_FHE_ABI_VERSION));
  return lib;
}

AdapterLibrary::~AdapterLibrary() {
  if (handle_ != nullptr) dlclose(handle_);
}

AdapterSession::AdapterSession(std::shared_ptr<AdapterLibrary> lib) : lib_(std::move(lib)) {
  const int status = lib_->api().create_session(&session_);
  if (status != OCWC_FHE_OK)
    throw BackendError("adapter: create_session failed with status " + std::to_string(status));
}

AdapterSession::~AdapterSession() {
  if (session_ != 0) lib_->api().destroy_session(session_);
}

void AdapterSession::check(int status, const char* what) const {
  if (status == OCWC_FHE_OK) return;
  const char* msg = lib_->api().last_error(session_);
  throw BackendError(std::string("adapter: ") + what + " failed (status " +
                     std::to_string(status) + ")" + (msg && *msg ? std::string(": ") + msg : ""));
}

void AdapterSession::keygen(std::uint64_t seed) {
  check(lib_->api().keygen(session_, seed), "keygen");
  secret_ = true;
}

void AdapterSession::save_keys(const std::filesystem::path& secret_key,
                               const std::filesystem::path& eval_key) {
  check(lib_->api().save_keys(session_, secret_key.c_str(), eval_key.c_str()), "save_keys");
}

void AdapterSession::load_secret_key(const std::filesystem::path& path) {
  check(lib_->api().load_secret_key(session_, path.c_str()), "load_secret_key");
  secret_ = true;
}

void AdapterSession::load_eval_key(const std::filesystem::path& path) {
  check(lib_->api().load_eval_key(session_, path.c_str()), "load_eval_key");
}

ocwc_fhe_handle AdapterSession::encrypt(bool bit) {
  ocwc_fhe_handle h = 0;
  check(lib_->api().encrypt_bit(session_, bit ? 1 : 0, &h), "encrypt_bit");
  return h;
}

bool AdapterSession::decrypt(ocwc_fhe_handle h) {
  int out = 0;
  check(lib_->api().decrypt_bit(session_, h, &out), "decrypt_bit");
  return out != 0;
}

ocwc_fhe_handle AdapterSession::gate(int kind, std::initializer_list<ocwc_fhe_handle> operands,
                                     int immediate) {
  ocwc_fhe_handle h = 0;
  check(lib_->api().gate(session_, kind, operands.begin(), operands.size(), immediate, &h),
        "gate");
  return h;
}

std::vector<std::uint8_t> AdapterSession::export_bit(ocwc_fhe_handle h) {
  std::size_t len = 0;
  int status = lib_->api().export_bit(session_, h, nullptr, 0, &len);
  if (status != OCWC_FHE_BUFFER_TOO_SMALL) check(status, "export_bit");
  std::vector<std::uint8_t> blob(len);
  check(lib_->api().export_bit(session_, h, blob.data(), blob.size(), &len), "export_bit");
  blob.resize(len);
  return blob;
}

ocwc_fhe_handle AdapterSession::import_bit(std::span<const std::uint8_t> blob) {
  ocwc_fhe_handle h = 0;
  check(lib_->api().import_bit(session_, blob.data(), blob.size(), &h), "import_bit");
  return h;
}

void ExternalEngine::push_const(bool value) {
  handles_.push_back(session_->gate(OCWC_FHE_GATE_CONST, {}, value ? 1 : 0));
}

void ExternalEngine::push_xor(std::uint32_t a, std::uint32_t b) {
  handles_.push_back(session_->gate(OCWC_FHE_GATE_XOR, {handles_[a], handles_[b]}));
}

void ExternalEngine::push_and(std::uint32_t a, std::uint32_t b) {
  handles_.push_back(session_->gate(OCWC_FHE_GATE_AND, {handles_[a], handles_[b]}));
}

void ExternalEngine::push_not(std::uint32_t a) {
  handles_.push_back(session_->gate(OCWC_FHE_GATE_NOT, {handles_[a]}));
}

void ExternalEngine::push_encrypt(bool value) { handles_.push_back(session_->encrypt(value)); }

void ExternalEngine::push_import(std::span<const std::uint8_t> blob) {
  handles_.push_back(session_->import_bit(blob));
}

std::vector<std::uint8_t> ExternalEngine::export_slot(std::uint32_t id) const {
  return session_->export_bit(handles_[id]);
}

bool ExternalEngine::decrypt_slot(std::uint32_t id) const {
  if (!session_->has_secret_key()) throw BackendError("fhe backend holds no secret key");
  return session_->decrypt(handles_[id]);
}

}  // namespace ocwc::obool
