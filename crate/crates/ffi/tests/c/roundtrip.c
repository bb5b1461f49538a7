/* SPDX-License-Identifier: Apache-2.0 */
/* Full juggling session and a swap through the C interface. */

#include <stdio.h>
#include <stdlib.h>

#include "juggling.h"

#define CHECK(call)                                                         \
  do {                                                                      \
    JgStatus s_ = (call);                                                   \
    if (s_ != JG_STATUS_OK) {                                               \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, jg_status_message(s_)); \
      return 1;                                                             \
    }                                                                       \
  } while (0)

int main(void) {
  uint8_t y[64], q[64], x[64], *buf;
  size_t y_len, q_len, n, x_len;
  JgKeyPair *kp = NULL;
  JgEncryptor *enc = NULL;
  JgDecryptor *dec = NULL;

  CHECK(jg_keypair_generate(JG_GROUP_SECP256K1, 7, &kp));
  CHECK(jg_keypair_public(kp, y, sizeof y, &y_len));
  CHECK(jg_encryptor_new(JG_GROUP_SECP256K1, 8, NULL, 0, y, y_len, 7, &enc));
  CHECK(jg_encryptor_public_key(enc, q, sizeof q, &q_len));
  CHECK(jg_decryptor_new(kp, 8, q, q_len, &dec));

  /* size query, then the real call */
  if (jg_encryptor_setup(enc, NULL, 0, &n) != JG_STATUS_BUFFER_TOO_SMALL) return 1;
  size_t cap = n;
  buf = malloc(cap);
  CHECK(jg_encryptor_setup(enc, buf, cap, &n));
  CHECK(jg_decryptor_accept_setup(dec, buf, n));
  for (;;) {
    JgStatus s = jg_encryptor_release_next(enc, buf, cap, &n);
    if (s == JG_STATUS_EXHAUSTED) break;
    CHECK(s);
    CHECK(jg_decryptor_accept_segment(dec, buf, n, NULL));
  }
  if (jg_decryptor_decrypted(dec) != 32) return 1;
  CHECK(jg_decryptor_finish(dec, x, sizeof x, &x_len));
  if (x_len != 32) return 1;

  JgSwapResult *r = NULL;
  JgRole blamed = JG_ROLE_P1;
  static uint8_t text[1 << 16];
  CHECK(jg_swap_run(JG_GROUP_TOY, 4, 40, 70, "none", 1, &r));
  if (!jg_swap_result_completed(r) || jg_swap_result_tx_count(r, 0) != 2) return 1;
  CHECK(jg_swap_result_transcript(r, text, sizeof text, &n));
  CHECK(jg_swap_audit(text, n, &blamed));
  if (blamed != JG_ROLE_NONE) return 1;

  free(buf);
  jg_swap_result_free(r);
  jg_decryptor_free(dec);
  jg_encryptor_free(enc);
  jg_keypair_free(kp);
  printf("ok\n");
  return 0;
}
