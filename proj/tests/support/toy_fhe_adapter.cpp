// Test double for the FHE adapter boundary. It honours the ABI contract
// (sessions, key files, opaque blobs, handle lifetimes, error codes) but its
// "ciphertexts" are bits masked with a keyed pseudo-random stream, and the
// evaluation key carries the same material as the secret key. No security.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "ocwc/fhe_adapter.h"

namespace {

struct Session {
  bool has_eval = false;
  bool has_secret = false;
  std::uint64_t key = 0;
  std::uint64_t nonce = 0;
  std::uint64_t next_handle = 1;
  std::map<ocwc_fhe_handle, std::vector<std::uint8_t>> ciphertexts;
  std::string error;
};

std::mutex g_mutex;
std::map<ocwc_fhe_session, Session> g_sessions;
ocwc_fhe_session g_next_session = 1;

constexpr std::size_t kBlobSize = 9;

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint8_t pad_bit(std::uint64_t key, std::uint64_t nonce) {
  return static_cast<std::uint8_t>(mix(key ^ mix(nonce)) & 1);
}

std::vector<std::uint8_t> seal(Session& s, int bit) {
  const std::uint64_t nonce = mix(s.key + ++s.nonce);
  std::vector<std::uint8_t> blob(kBlobSize);
  for (int i = 0; i < 8; ++i) blob[i] = static_cast<std::uint8_t>(nonce >> (8 * i));
  blob[8] = static_cast<std::uint8_t>((bit & 1) ^ pad_bit(s.key, nonce));
  return blob;
}

int open_bit(const Session& s, const std::vector<std::uint8_t>& blob) {
  std::uint64_t nonce = 0;
  for (int i = 0; i < 8; ++i) nonce |= std::uint64_t{blob[i]} << (8 * i);
  return (blob[8] ^ pad_bit(s.key, nonce)) & 1;
}

Session* find(ocwc_fhe_session id) {
  auto it = g_sessions.find(id);
  return it == g_sessions.end() ? nullptr : &it->second;
}

int fail(Session& s, int status, std::string msg) {
  s.error = std::move(msg);
  return status;
}

ocwc_fhe_handle store(Session& s, std::vector<std::uint8_t> blob) {
  const auto h = s.next_handle++;
  s.ciphertexts.emplace(h, std::move(blob));
  return h;
}

int write_key(const char* path, const char* tag, std::uint64_t key) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) return OCWC_FHE_IO;
  out << tag << ' ' << key << '\n';
  return out ? OCWC_FHE_OK : OCWC_FHE_IO;
}

int read_key(Session& s, const char* path, const char* tag) {
  std::ifstream in(path);
  std::string got;
  std::uint64_t key = 0;
  if (!in || !(in >> got >> key) || got != tag)
    return fail(s, OCWC_FHE_IO, std::string("cannot read ") + tag + " from " + path);
  s.key = key;
  s.has_eval = true;
  return OCWC_FHE_OK;
}

}  // namespace

extern "C" {

uint32_t ocwc_fhe_abi_version(void) { return OCWC_FHE_ABI_VERSION; }

int ocwc_fhe_create_session(ocwc_fhe_session* out) {
  if (out == nullptr) return OCWC_FHE_BAD_ARGUMENT;
  std::lock_guard lock(g_mutex);
  *out = g_next_session++;
  g_sessions[*out];
  return OCWC_FHE_OK;
}

int ocwc_fhe_destroy_session(ocwc_fhe_session session) {
  std::lock_guard lock(g_mutex);
  return g_sessions.erase(session) ? OCWC_FHE_OK : OCWC_FHE_INVALID_HANDLE;
}

int ocwc_fhe_keygen(ocwc_fhe_session session, uint64_t seed) {
  std::lock_guard lock(g_mutex);
  auto* s = find(session);
  if (!s) return OCWC_FHE_INVALID_HANDLE;
  s->key = mix(seed ^ 0x70795f6b6579ULL);
  s->has_eval = s->has_secret = true;
  return OCWC_FHE_OK;
}

int ocwc_fhe_save_keys(ocwc_fhe_session session, const char* secret_key_path,
                       const char* eval_key_path) {
  std::lock_guard lock(g_mutex);
  auto* s = find(session);
  if (!s) return OCWC_FHE_INVALID_HANDLE;
  if (!s->has_secret) return fail(*s, OCWC_FHE_NO_KEY, "no key generated");
  if (write_key(secret_key_path, "TOYFHE-SECRET", s->key) != OCWC_FHE_OK ||
      write_key(eval_key_path, "TOYFHE-EVAL", s->key) != OCWC_FHE_OK)
    return fail(*s, OCWC_FHE_IO, "cannot write key files");
  return OCWC_FHE_OK;
}

int ocwc_fhe_load_secret_key(ocwc_fhe_session session, const char* path) {
  std::lock_guard lock(g_mutex);
  auto* s = find(session);
  if (!s) return OCWC_FHE_INVALID_HANDLE;
  const int status = read_key(*s, path, "TOYFHE-SECRET");
  if (status == OCWC_FHE_OK) s->has_secret = true;
  return status;
}

int ocwc_fhe_load_eval_key(ocwc_fhe_session session, const char* path) {
  std::lock_guard lock(g_mutex);
  auto* s = find(session);
  if (!s) return OCWC_FHE_INVALID_HANDLE;
  return read_key(*s, path, "TOYFHE-EVAL");
}

int ocwc_fhe_encrypt_bit(ocwc_fhe_session session, int bit, ocwc_fhe_handle* out) {
  std::lock_guard lock(g_mutex);
  auto* s = find(session);
  if (!s || !out) return OCWC_FHE_INVALID_HANDLE;
  if (!s->has_secret) return fail(*s, OCWC_FHE_NO_KEY, "encryption needs the secret key");
  *out = store(*s, seal(*s, bit));
  return OCWC_FHE_OK;
}

int ocwc_fhe_decrypt_bit(ocwc_fhe_session session, ocwc_fhe_handle handle, int* out) {
  std::lock_guard lock(g_mutex);
  auto* s = find(session);
  if (!s || !out) return OCWC_FHE_INVALID_HANDLE;
  if (!s->has_secret) return fail(*s, OCWC_FHE_NO_KEY, "decryption needs the secret key");
  auto it = s->ciphertexts.find(handle);
  if (it == s->ciphertexts.end()) return fail(*s, OCWC_FHE_INVALID_HANDLE, "unknown handle");
  *out = open_bit(*s, it->second);
  return OCWC_FHE_OK;
}

int ocwc_fhe_gate(ocwc_fhe_session session, int kind, const ocwc_fhe_handle* operands,
                  size_t operand_count, int immediate, ocwc_fhe_handle* out) {
  std::lock_guard lock(g_mutex);
  auto* s = find(session);
  if (!s || !out) return OCWC_FHE_INVALID_HANDLE;
  if (!s->has_eval) return fail(*s, OCWC_FHE_NO_KEY, "gates need the evaluation key");
  static const std::size_t arity[] = {2, 2, 1, 0, 3};
  if (kind < 0 || kind > OCWC_FHE_GATE_MUX || operand_count != arity[kind])
    return fail(*s, OCWC_FHE_BAD_ARGUMENT, "bad gate kind or operand count");
  int v[3] = {0, 0, 0};
  for (std::size_t i = 0; i < operand_count; ++i) {
    auto it = s->ciphertexts.find(operands[i]);
    if (it == s->ciphertexts.end()) return fail(*s, OCWC_FHE_INVALID_HANDLE, "unknown handle");
    v[i] = open_bit(*s, it->second);
  }
  int r = 0;
  switch (kind) {
    case OCWC_FHE_GATE_XOR: r = v[0] ^ v[1]; break;
    case OCWC_FHE_GATE_AND: r = v[0] & v[1]; break;
    case OCWC_FHE_GATE_NOT: r = v[0] ^ 1; break;
    case OCWC_FHE_GATE_CONST: r = immediate & 1; break;
    case OCWC_FHE_GATE_MUX: r = v[0] ? v[1] : v[2]; break;
  }
  *out = store(*s, seal(*s, r));
  return OCWC_FHE_OK;
}

int ocwc_fhe_export_bit(ocwc_fhe_session session, ocwc_fhe_handle handle, uint8_t* buffer,
                        size_t capacity, size_t* length) {
  std::lock_guard lock(g_mutex);
  auto* s = find(session);
  if (!s || !length) return OCWC_FHE_INVALID_HANDLE;
  auto it = s->ciphertexts.find(handle);
  if (it == s->ciphertexts.end()) return fail(*s, OCWC_FHE_INVALID_HANDLE, "unknown handle");
  *length = it->second.size();
  if (capacity < it->second.size() || buffer == nullptr) return OCWC_FHE_BUFFER_TOO_SMALL;
  std::memcpy(buffer, it->second.data(), it->second.size());
  return OCWC_FHE_OK;
}

int ocwc_fhe_import_bit(ocwc_fhe_session session, const uint8_t* buffer, size_t length,
                        ocwc_fhe_handle* out) {
  std::lock_guard lock(g_mutex);
  auto* s = find(session);
  if (!s || !out) return OCWC_FHE_INVALID_HANDLE;
  if (buffer == nullptr || length != kBlobSize)
    return fail(*s, OCWC_FHE_BAD_ARGUMENT, "malformed ciphertext");
  *out = store(*s, std::vector<std::uint8_t>(buffer, buffer + length));
  return OCWC_FHE_OK;
}

const char* ocwc_fhe_last_error(ocwc_fhe_session session) {
  std::lock_guard lock(g_mutex);
  auto* s = find(session);
  return s ? s->error.c_str() : "unknown session";
}

}  // extern "C"
