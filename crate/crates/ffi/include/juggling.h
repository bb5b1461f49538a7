/* SPDX-License-Identifier: Apache-2.0 */

#ifndef JUGGLING_H
#define JUGGLING_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Group selector.
 */
typedef enum JgGroup {
  JG_GROUP_TOY = 0,
  JG_GROUP_SECP256K1 = 1,
} JgGroup;

/**
 * Role named by a transcript audit.
 */
typedef enum JgRole {
  JG_ROLE_NONE = 0,
  JG_ROLE_P1 = 1,
  JG_ROLE_P2 = 2,
  JG_ROLE_PROVIDER = 3,
} JgRole;

/**
 * Result of every fallible call.
 */
typedef enum JgStatus {
  JG_STATUS_OK = 0,
  JG_STATUS_NULL_POINTER = 1,
  JG_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A proof, bundle or transcript check failed.
   */
  JG_STATUS_REJECTED = 3,
  /**
   * Bytes did not decode.
   */
  JG_STATUS_MALFORMED = 4,
  JG_STATUS_OUT_OF_ORDER = 5,
  /**
   * No more segments to release.
   */
  JG_STATUS_EXHAUSTED = 6,
  /**
   * Not every segment has been decrypted.
   */
  JG_STATUS_INCOMPLETE = 7,
  JG_STATUS_BUFFER_TOO_SMALL = 8,
  JG_STATUS_INTERNAL = 9,
} JgStatus;

/**
 * Receiving side of one juggling session.
 */
typedef struct JgDecryptor JgDecryptor;

/**
 * Sending side of one juggling session.
 */
typedef struct JgEncryptor JgEncryptor;

/**
 * Encryption key pair for receiving juggled secrets.
 */
typedef struct JgKeyPair JgKeyPair;

/**
 * Outcome of a simulated swap.
 */
typedef struct JgSwapResult JgSwapResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *jg_status_message(enum JgStatus status);

/**
 * Deterministic key pair from `seed`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum JgStatus jg_keypair_generate(enum JgGroup group, uint64_t seed, struct JgKeyPair **out);

/**
 * Encoded public key `Y`.
 *
 * # Safety
 * `kp` must come from `jg_keypair_generate`; `buf` must hold `cap` bytes.
 */
enum JgStatus jg_keypair_public(const struct JgKeyPair *kp,
                                uint8_t *buf,
                                size_t cap,
                                size_t *written);

/**
 * # Safety
 * `kp` must be null or come from `jg_keypair_generate`, and not be used again.
 */
void jg_keypair_free(struct JgKeyPair *kp);

/**
 * Starts a session encrypting `secret` (or a fresh admissible secret when
 * `secret_len` is 0) to `recipient`, with `l`-bit segments.
 *
 * # Safety
 * Pointers must be valid for the given lengths; `out` must be valid for writes.
 */
enum JgStatus jg_encryptor_new(enum JgGroup group,
                               uint32_t segment_bits,
                               const uint8_t *secret,
                               size_t secret_len,
                               const uint8_t *recipient,
                               size_t recipient_len,
                               uint64_t seed,
                               struct JgEncryptor **out);

/**
 * Encoded public key `Q` of the juggled secret.
 *
 * # Safety
 * `enc` must come from `jg_encryptor_new`; `buf` must hold `cap` bytes.
 */
enum JgStatus jg_encryptor_public_key(const struct JgEncryptor *enc,
                                      uint8_t *buf,
                                      size_t cap,
                                      size_t *written);

/**
 * Encoded setup bundle.
 *
 * # Safety
 * As for `jg_encryptor_public_key`.
 */
enum JgStatus jg_encryptor_setup(const struct JgEncryptor *enc,
                                 uint8_t *buf,
                                 size_t cap,
                                 size_t *written);

/**
 * Next encoded segment release; `JG_STATUS_EXHAUSTED` after the last one.
 * On `JG_STATUS_BUFFER_TOO_SMALL` the segment is not consumed.
 *
 * # Safety
 * As for `jg_encryptor_public_key`, with `enc` mutable.
 */
enum JgStatus jg_encryptor_release_next(struct JgEncryptor *enc,
                                        uint8_t *buf,
                                        size_t cap,
                                        size_t *written);

/**
 * # Safety
 * `enc` must be null or come from `jg_encryptor_new`, and not be used again.
 */
void jg_encryptor_free(struct JgEncryptor *enc);

/**
 * Starts receiving a session for public key `q` under `kp`.
 *
 * # Safety
 * `kp` must come from `jg_keypair_generate`; `q` must hold `q_len` bytes.
 */
enum JgStatus jg_decryptor_new(const struct JgKeyPair *kp,
                               uint32_t segment_bits,
                               const uint8_t *q,
                               size_t q_len,
                               struct JgDecryptor **out);

/**
 * Verifies a setup bundle.
 *
 * # Safety
 * `dec` must come from `jg_decryptor_new`; `bundle` must hold `len` bytes.
 */
enum JgStatus jg_decryptor_accept_setup(struct JgDecryptor *dec, const uint8_t *bundle, size_t len);

/**
 * Verifies and decrypts the next release; the limb goes to `limb` if non-null.
 *
 * # Safety
 * As for `jg_decryptor_accept_setup`; `limb` must be null or valid for writes.
 */
enum JgStatus jg_decryptor_accept_segment(struct JgDecryptor *dec,
                                          const uint8_t *release,
                                          size_t len,
                                          uint64_t *limb);

/**
 * Number of segments decrypted so far; 0 for a null handle.
 *
 * # Safety
 * `dec` must be null or come from `jg_decryptor_new`.
 */
size_t jg_decryptor_decrypted(const struct JgDecryptor *dec);

/**
 * Reconstructed secret, checked against `Q`.
 *
 * # Safety
 * As for `jg_keypair_public`.
 */
enum JgStatus jg_decryptor_finish(const struct JgDecryptor *dec,
                                  uint8_t *buf,
                                  size_t cap,
                                  size_t *written);

/**
 * # Safety
 * `dec` must be null or come from `jg_decryptor_new`, and not be used again.
 */
void jg_decryptor_free(struct JgDecryptor *dec);

/**
 * Runs a full simulated swap. `adversary` is a NUL-terminated script such
 * as `"none"` or `"abort-at=3:P2"`; null means none. Each owner starts
 * with `max(amount, 100)` tokens. A swap that aborts still returns
 * `JG_STATUS_OK` with a result handle.
 *
 * # Safety
 * `adversary` must be null or a valid C string; `out` must be valid for writes.
 */
enum JgStatus jg_swap_run(enum JgGroup group,
                          uint32_t segment_bits,
                          uint64_t amount1,
                          uint64_t amount2,
                          const char *adversary,
                          uint64_t seed,
                          struct JgSwapResult **out);

/**
 * 1 if the swap reached the end, 0 otherwise or for a null handle.
 *
 * # Safety
 * `r` must be null or come from `jg_swap_run`.
 */
int32_t jg_swap_result_completed(const struct JgSwapResult *r);

/**
 * Difference between the owners' decrypted segment counts.
 *
 * # Safety
 * `r` must be null or come from `jg_swap_run`.
 */
size_t jg_swap_result_advantage(const struct JgSwapResult *r);

/**
 * Confirmed transactions on chain `index` (0 or 1), or 0 if out of range.
 *
 * # Safety
 * `r` must be null or come from `jg_swap_run`.
 */
size_t jg_swap_result_tx_count(const struct JgSwapResult *r, size_t index);

/**
 * Transcript text (not NUL-terminated).
 *
 * # Safety
 * As for `jg_keypair_public`.
 */
enum JgStatus jg_swap_result_transcript(const struct JgSwapResult *r,
                                        uint8_t *buf,
                                        size_t cap,
                                        size_t *written);

/**
 * # Safety
 * `r` must be null or come from `jg_swap_run`, and not be used again.
 */
void jg_swap_result_free(struct JgSwapResult *r);

/**
 * Audits transcript text. `JG_STATUS_OK` with `*blamed = JG_ROLE_NONE` when clean,
 * `JG_STATUS_REJECTED` with the blamed role otherwise, `JG_STATUS_MALFORMED` if it does
 * not parse.
 *
 * # Safety
 * `text` must hold `len` bytes; `blamed` must be valid for writes.
 */
enum JgStatus jg_swap_audit(const uint8_t *text, size_t len, enum JgRole *blamed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JUGGLING_H */
