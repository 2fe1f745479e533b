/*
 * Flat C boundary between the oblivious circuit engine and a native
 * gate-bootstrapping FHE library. An adapter is a shared library exporting
 * every function below; the engine loads it at run time and drives it gate
 * by gate. Only integer handles cross the boundary.
 *
 * All functions return OCWC_FHE_OK on success or one of the error codes;
 * ocwc_fhe_last_error() then describes the most recent failure of a session.
 */
#ifndef OCWC_FHE_ADAPTER_H
#define OCWC_FHE_ADAPTER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define OCWC_FHE_ABI_VERSION 1u

typedef uint64_t ocwc_fhe_session;
typedef uint64_t ocwc_fhe_handle;

enum ocwc_fhe_status {
  OCWC_FHE_OK = 0,
  OCWC_FHE_INVALID_HANDLE = 1,
  OCWC_FHE_NO_KEY = 2,
  OCWC_FHE_IO = 3,
  OCWC_FHE_LIBRARY = 4,
  OCWC_FHE_BAD_ARGUMENT = 5,
  OCWC_FHE_BUFFER_TOO_SMALL = 6
};

enum ocwc_fhe_gate_kind {
  OCWC_FHE_GATE_XOR = 0,   /* operands: a, b */
  OCWC_FHE_GATE_AND = 1,   /* operands: a, b */
  OCWC_FHE_GATE_NOT = 2,   /* operands: a */
  OCWC_FHE_GATE_CONST = 3, /* operands: none; immediate is the bit */
  OCWC_FHE_GATE_MUX = 4    /* operands: s, a, b -> s ? a : b */
};

uint32_t ocwc_fhe_abi_version(void);

int ocwc_fhe_create_session(ocwc_fhe_session* out);
int ocwc_fhe_destroy_session(ocwc_fhe_session session);

/* Generates a fresh secret key and its evaluation (cloud) key. */
int ocwc_fhe_keygen(ocwc_fhe_session session, uint64_t seed);
int ocwc_fhe_save_keys(ocwc_fhe_session session, const char* secret_key_path,
                       const char* eval_key_path);
int ocwc_fhe_load_secret_key(ocwc_fhe_session session, const char* path);
int ocwc_fhe_load_eval_key(ocwc_fhe_session session, const char* path);

int ocwc_fhe_encrypt_bit(ocwc_fhe_session session, int bit, ocwc_fhe_handle* out);
int ocwc_fhe_decrypt_bit(ocwc_fhe_session session, ocwc_fhe_handle handle, int* out);

int ocwc_fhe_gate(ocwc_fhe_session session, int kind,
                  const ocwc_fhe_handle* operands, size_t operand_count,
                  int immediate, ocwc_fhe_handle* out);

/* Writes the library's native serialization of one ciphertext. When
 * capacity is too small, *length receives the required size and
 * OCWC_FHE_BUFFER_TOO_SMALL is returned. */
int ocwc_fhe_export_bit(ocwc_fhe_session session, ocwc_fhe_handle handle,
                        uint8_t* buffer, size_t capacity, size_t* length);
int ocwc_fhe_import_bit(ocwc_fhe_session session, const uint8_t* buffer,
                        size_t length, ocwc_fhe_handle* out);

const char* ocwc_fhe_last_error(ocwc_fhe_session session);

#ifdef __cplusplus
}
#endif

#endif /* OCWC_FHE_ADAPTER_H */
