// SPDX-License-Identifier: Apache-2.0

//! C ABI over the juggling toolkit.
//!
//! Every object is an opaque heap handle created by a `jg_*_new` or
//! `jg_*_generate` call and released with the matching `jg_*_free`. Every
//! fallible call returns a [`JgStatus`]. Byte outputs use caller buffers:
//! `*written` always receives the required length, and `JG_STATUS_BUFFER_TOO_SMALL`
//! is returned when `cap` is short (pass `buf = NULL` to query the size).
//! Panics never cross the boundary; they surface as `JG_STATUS_INTERNAL`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use juggling::elgamal::EncKeyPair;
use juggling::group::{Group, GroupKind, Secp256k1, ToyGroup};
use juggling::juggling::{encryptor_setup, Decryptor, EncryptorState, JugglingError, SegmentRelease, SetupBundle};
use juggling::segmentation::{random_secret, SegmentationParams};
use juggling::swap::{audit_transcript, run_swap, Adversary, Role, SwapConfig, SwapOutcome, Transcript, Verdict};
use juggling::wire::Encode;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A proof, bundle or transcript check failed.
    Rejected = 3,
    /// Bytes did not decode.
    Malformed = 4,
    OutOfOrder = 5,
    /// No more segments to release.
    Exhausted = 6,
    /// Not every segment has been decrypted.
    Incomplete = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

/// Group selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JgGroup {
    Toy = 0,
    Secp256k1 = 1,
}

impl From<JgGroup> for GroupKind {
    fn from(g: JgGroup) -> Self {
        match g {
            JgGroup::Toy => GroupKind::Toy,
            JgGroup::Secp256k1 => GroupKind::Secp256k1,
        }
    }
}

/// Role named by a transcript audit.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JgRole {
    None = 0,
    P1 = 1,
    P2 = 2,
    Provider = 3,
}

impl From<JugglingError> for JgStatus {
    fn from(e: JugglingError) -> Self {
        match e {
            JugglingError::OutOfOrder { .. } => JgStatus::OutOfOrder,
            JugglingError::Exhausted => JgStatus::Exhausted,
            JugglingError::Incomplete { .. } => JgStatus::Incomplete,
            JugglingError::SecretOutOfRange(_) | JugglingError::KeyMismatch | JugglingError::Segmentation(_) => {
                JgStatus::InvalidArgument
            }
            _ => JgStatus::Rejected,
        }
    }
}

/// Encryption key pair for receiving juggled secrets.
pub struct JgKeyPair {
    inner: Keys,
}

enum Keys {
    Toy(EncKeyPair<ToyGroup>),
    Secp(EncKeyPair<Secp256k1>),
}

/// Sending side of one juggling session.
pub struct JgEncryptor {
    inner: Enc,
}

struct EncSide<G: Group> {
    rng: ChaCha20Rng,
    q: G::Point,
    state: EncryptorState<G>,
    bundle: Vec<u8>,
}

// handles are boxed already, so variant size does not matter
#[allow(clippy::large_enum_variant)]
enum Enc {
    Toy(EncSide<ToyGroup>),
    Secp(EncSide<Secp256k1>),
}

/// Receiving side of one juggling session.
pub struct JgDecryptor {
    inner: Dec,
}

#[allow(clippy::large_enum_variant)]
enum Dec {
    Toy(Decryptor<ToyGroup>),
    Secp(Decryptor<Secp256k1>),
}

/// Outcome of a simulated swap.
pub struct JgSwapResult {
    outcome: SwapOutcome,
    text: String,
}

fn guard(f: impl FnOnce() -> Result<(), JgStatus>) -> JgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => JgStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => JgStatus::Internal,
    }
}

unsafe fn bytes<'a>(p: *const u8, len: usize) -> Result<&'a [u8], JgStatus> {
    if p.is_null() {
        return if len == 0 { Ok(&[]) } else { Err(JgStatus::NullPointer) };
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *mut T) -> Result<&'a mut T, JgStatus> {
    p.as_mut().ok_or(JgStatus::NullPointer)
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), JgStatus> {
    if out.is_null() {
        return Err(JgStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn write_buf(data: &[u8], buf: *mut u8, cap: usize, written: *mut usize) -> Result<(), JgStatus> {
    if written.is_null() {
        return Err(JgStatus::NullPointer);
    }
    *written = data.len();
    if buf.is_null() || cap < data.len() {
        return Err(JgStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

fn seeded(seed: u64, domain: &[u8]) -> ChaCha20Rng {
    use sha2::{Digest, Sha256};
    ChaCha20Rng::from_seed(Sha256::new().chain_update(domain).chain_update(seed.to_be_bytes()).finalize().into())
}

fn params<G: Group>(l: u32) -> Result<SegmentationParams, JgStatus> {
    SegmentationParams::for_group::<G>(l).map_err(|_| JgStatus::InvalidArgument)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn jg_status_message(status: JgStatus) -> *const c_char {
    let s: &'static CStr = match status {
        JgStatus::Ok => c"ok",
        JgStatus::NullPointer => c"null pointer argument",
        JgStatus::InvalidArgument => c"invalid argument",
        JgStatus::Rejected => c"verification rejected",
        JgStatus::Malformed => c"malformed input bytes",
        JgStatus::OutOfOrder => c"segment out of order",
        JgStatus::Exhausted => c"all segments released",
        JgStatus::Incomplete => c"not all segments decrypted",
        JgStatus::BufferTooSmall => c"output buffer too small",
        JgStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Deterministic key pair from `seed`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jg_keypair_generate(group: JgGroup, seed: u64, out: *mut *mut JgKeyPair) -> JgStatus {
    guard(|| {
        let mut rng = seeded(seed, b"JUGGLE/FFI/KEY/v1");
        let inner = match group {
            JgGroup::Toy => Keys::Toy(EncKeyPair::generate(&mut rng)),
            JgGroup::Secp256k1 => Keys::Secp(EncKeyPair::generate(&mut rng)),
        };
        put(out, JgKeyPair { inner })
    })
}

/// Encoded public key `Y`.
///
/// # Safety
/// `kp` must come from `jg_keypair_generate`; `buf` must hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn jg_keypair_public(
    kp: *const JgKeyPair,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> JgStatus {
    guard(|| {
        let kp = kp.as_ref().ok_or(JgStatus::NullPointer)?;
        let enc = match &kp.inner {
            Keys::Toy(k) => ToyGroup::encode_point(&k.public),
            Keys::Secp(k) => Secp256k1::encode_point(&k.public),
        };
        write_buf(&enc, buf, cap, written)
    })
}

/// # Safety
/// `kp` must be null or come from `jg_keypair_generate`, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn jg_keypair_free(kp: *mut JgKeyPair) {
    free(kp)
}

fn new_enc<G: Group>(l: u32, secret: &[u8], recipient: &[u8], seed: u64) -> Result<EncSide<G>, JgStatus> {
    let params = params::<G>(l)?;
    let y = G::decode_point(recipient).map_err(|_| JgStatus::Malformed)?;
    let mut rng = seeded(seed, b"JUGGLE/FFI/ENC/v1");
    let x = if secret.is_empty() {
        random_secret::<G, _>(&params, &mut rng)
    } else {
        G::decode_scalar(secret).map_err(|_| JgStatus::Malformed)?
    };
    let q = G::mul_base(&x);
    let (state, bundle) = encryptor_setup::<G, _>(&x, &q, &y, &params, &mut rng)?;
    Ok(EncSide { rng, q, state, bundle: bundle.to_bytes() })
}

/// Starts a session encrypting `secret` (or a fresh admissible secret when
/// `secret_len` is 0) to `recipient`, with `l`-bit segments.
///
/// # Safety
/// Pointers must be valid for the given lengths; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jg_encryptor_new(
    group: JgGroup,
    segment_bits: u32,
    secret: *const u8,
    secret_len: usize,
    recipient: *const u8,
    recipient_len: usize,
    seed: u64,
    out: *mut *mut JgEncryptor,
) -> JgStatus {
    guard(|| {
        let (s, r) = (bytes(secret, secret_len)?, bytes(recipient, recipient_len)?);
        let inner = match group {
            JgGroup::Toy => Enc::Toy(new_enc(segment_bits, s, r, seed)?),
            JgGroup::Secp256k1 => Enc::Secp(new_enc(segment_bits, s, r, seed)?),
        };
        put(out, JgEncryptor { inner })
    })
}

/// Encoded public key `Q` of the juggled secret.
///
/// # Safety
/// `enc` must come from `jg_encryptor_new`; `buf` must hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn jg_encryptor_public_key(
    enc: *const JgEncryptor,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> JgStatus {
    guard(|| {
        let enc = enc.as_ref().ok_or(JgStatus::NullPointer)?;
        let q = match &enc.inner {
            Enc::Toy(e) => ToyGroup::encode_point(&e.q),
            Enc::Secp(e) => Secp256k1::encode_point(&e.q),
        };
        write_buf(&q, buf, cap, written)
    })
}

/// Encoded setup bundle.
///
/// # Safety
/// As for `jg_encryptor_public_key`.
#[no_mangle]
pub unsafe extern "C" fn jg_encryptor_setup(
    enc: *const JgEncryptor,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> JgStatus {
    guard(|| {
        let enc = enc.as_ref().ok_or(JgStatus::NullPointer)?;
        let b = match &enc.inner {
            Enc::Toy(e) => &e.bundle,
            Enc::Secp(e) => &e.bundle,
        };
        write_buf(b, buf, cap, written)
    })
}

/// Computes the release on copies and commits only once it is written, so
/// a retry after `JG_STATUS_BUFFER_TOO_SMALL` yields the same bytes.
unsafe fn next_release<G: Group>(
    e: &mut EncSide<G>,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> Result<(), JgStatus> {
    let mut state = e.state.clone();
    let mut rng = e.rng.clone();
    let rel = state.release_next(&mut rng)?;
    write_buf(&rel.to_bytes(), buf, cap, written)?;
    e.state = state;
    e.rng = rng;
    Ok(())
}

/// Next encoded segment release; `JG_STATUS_EXHAUSTED` after the last one.
/// On `JG_STATUS_BUFFER_TOO_SMALL` the segment is not consumed.
///
/// # Safety
/// As for `jg_encryptor_public_key`, with `enc` mutable.
#[no_mangle]
pub unsafe extern "C" fn jg_encryptor_release_next(
    enc: *mut JgEncryptor,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> JgStatus {
    guard(|| match &mut handle(enc)?.inner {
        Enc::Toy(e) => next_release(e, buf, cap, written),
        Enc::Secp(e) => next_release(e, buf, cap, written),
    })
}

/// # Safety
/// `enc` must be null or come from `jg_encryptor_new`, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn jg_encryptor_free(enc: *mut JgEncryptor) {
    free(enc)
}

/// Starts receiving a session for public key `q` under `kp`.
///
/// # Safety
/// `kp` must come from `jg_keypair_generate`; `q` must hold `q_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn jg_decryptor_new(
    kp: *const JgKeyPair,
    segment_bits: u32,
    q: *const u8,
    q_len: usize,
    out: *mut *mut JgDecryptor,
) -> JgStatus {
    guard(|| {
        let kp = kp.as_ref().ok_or(JgStatus::NullPointer)?;
        let q = bytes(q, q_len)?;
        let inner = match &kp.inner {
            Keys::Toy(k) => {
                let q = ToyGroup::decode_point(q).map_err(|_| JgStatus::Malformed)?;
                Dec::Toy(Decryptor::new(params::<ToyGroup>(segment_bits)?, k, q)?)
            }
            Keys::Secp(k) => {
                let q = Secp256k1::decode_point(q).map_err(|_| JgStatus::Malformed)?;
                Dec::Secp(Decryptor::new(params::<Secp256k1>(segment_bits)?, k, q)?)
            }
        };
        put(out, JgDecryptor { inner })
    })
}

fn accept_setup<G: Group>(d: &mut Decryptor<G>, b: &[u8]) -> Result<(), JgStatus> {
    let bundle = SetupBundle::<G>::from_bytes(b).map_err(|_| JgStatus::Malformed)?;
    Ok(d.accept_setup(bundle)?)
}

fn accept_segment<G: Group>(d: &mut Decryptor<G>, b: &[u8]) -> Result<u64, JgStatus> {
    let rel = SegmentRelease::<G>::from_bytes(b).map_err(|_| JgStatus::Malformed)?;
    Ok(d.accept_segment(&rel)?)
}

/// Verifies a setup bundle.
///
/// # Safety
/// `dec` must come from `jg_decryptor_new`; `bundle` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn jg_decryptor_accept_setup(dec: *mut JgDecryptor, bundle: *const u8, len: usize) -> JgStatus {
    guard(|| {
        let b = bytes(bundle, len)?;
        match &mut handle(dec)?.inner {
            Dec::Toy(d) => accept_setup(d, b),
            Dec::Secp(d) => accept_setup(d, b),
        }
    })
}

/// Verifies and decrypts the next release; the limb goes to `limb` if non-null.
///
/// # Safety
/// As for `jg_decryptor_accept_setup`; `limb` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jg_decryptor_accept_segment(
    dec: *mut JgDecryptor,
    release: *const u8,
    len: usize,
    limb: *mut u64,
) -> JgStatus {
    guard(|| {
        let b = bytes(release, len)?;
        let v = match &mut handle(dec)?.inner {
            Dec::Toy(d) => accept_segment(d, b)?,
            Dec::Secp(d) => accept_segment(d, b)?,
        };
        if let Some(l) = limb.as_mut() {
            *l = v;
        }
        Ok(())
    })
}

/// Number of segments decrypted so far; 0 for a null handle.
///
/// # Safety
/// `dec` must be null or come from `jg_decryptor_new`.
#[no_mangle]
pub unsafe extern "C" fn jg_decryptor_decrypted(dec: *const JgDecryptor) -> usize {
    match dec.as_ref().map(|d| &d.inner) {
        Some(Dec::Toy(d)) => d.decrypted(),
        Some(Dec::Secp(d)) => d.decrypted(),
        None => 0,
    }
}

/// Reconstructed secret, checked against `Q`.
///
/// # Safety
/// As for `jg_keypair_public`.
#[no_mangle]
pub unsafe extern "C" fn jg_decryptor_finish(
    dec: *const JgDecryptor,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> JgStatus {
    guard(|| {
        let x = match &dec.as_ref().ok_or(JgStatus::NullPointer)?.inner {
            Dec::Toy(d) => ToyGroup::encode_scalar(&d.finish()?),
            Dec::Secp(d) => Secp256k1::encode_scalar(&d.finish()?),
        };
        write_buf(&x, buf, cap, written)
    })
}

/// # Safety
/// `dec` must be null or come from `jg_decryptor_new`, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn jg_decryptor_free(dec: *mut JgDecryptor) {
    free(dec)
}

/// Runs a full simulated swap. `adversary` is a NUL-terminated script such
/// as `"none"` or `"abort-at=3:P2"`; null means none. Each owner starts
/// with `max(amount, 100)` tokens. A swap that aborts still returns
/// `JG_STATUS_OK` with a result handle.
///
/// # Safety
/// `adversary` must be null or a valid C string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jg_swap_run(
    group: JgGroup,
    segment_bits: u32,
    amount1: u64,
    amount2: u64,
    adversary: *const c_char,
    seed: u64,
    out: *mut *mut JgSwapResult,
) -> JgStatus {
    guard(|| {
        let adversary = match adversary.as_ref() {
            None => Adversary::None,
            Some(_) => CStr::from_ptr(adversary)
                .to_str()
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or(JgStatus::InvalidArgument)?,
        };
        let cfg = SwapConfig {
            group: group.into(),
            segment_bits,
            amounts: [amount1, amount2],
            initial: [amount1.max(100), amount2.max(100)],
            adversary,
            seed,
            ..SwapConfig::default()
        };
        let outcome = run_swap(&cfg).map_err(|_| JgStatus::InvalidArgument)?;
        let text = outcome.transcript.to_text();
        put(out, JgSwapResult { outcome, text })
    })
}

/// 1 if the swap reached the end, 0 otherwise or for a null handle.
///
/// # Safety
/// `r` must be null or come from `jg_swap_run`.
#[no_mangle]
pub unsafe extern "C" fn jg_swap_result_completed(r: *const JgSwapResult) -> i32 {
    r.as_ref().is_some_and(|r| r.outcome.completed()).into()
}

/// Difference between the owners' decrypted segment counts.
///
/// # Safety
/// `r` must be null or come from `jg_swap_run`.
#[no_mangle]
pub unsafe extern "C" fn jg_swap_result_advantage(r: *const JgSwapResult) -> usize {
    r.as_ref().map_or(0, |r| r.outcome.report.advantage)
}

/// Confirmed transactions on chain `index` (0 or 1), or 0 if out of range.
///
/// # Safety
/// `r` must be null or come from `jg_swap_run`.
#[no_mangle]
pub unsafe extern "C" fn jg_swap_result_tx_count(r: *const JgSwapResult, index: usize) -> usize {
    r.as_ref().and_then(|r| r.outcome.chains.get(index)).map_or(0, |c| c.tx_count)
}

/// Transcript text (not NUL-terminated).
///
/// # Safety
/// As for `jg_keypair_public`.
#[no_mangle]
pub unsafe extern "C" fn jg_swap_result_transcript(
    r: *const JgSwapResult,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> JgStatus {
    guard(|| {
        let r = r.as_ref().ok_or(JgStatus::NullPointer)?;
        write_buf(r.text.as_bytes(), buf, cap, written)
    })
}

/// # Safety
/// `r` must be null or come from `jg_swap_run`, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn jg_swap_result_free(r: *mut JgSwapResult) {
    free(r)
}

/// Audits transcript text. `JG_STATUS_OK` with `*blamed = JG_ROLE_NONE` when clean,
/// `JG_STATUS_REJECTED` with the blamed role otherwise, `JG_STATUS_MALFORMED` if it does
/// not parse.
///
/// # Safety
/// `text` must hold `len` bytes; `blamed` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jg_swap_audit(text: *const u8, len: usize, blamed: *mut JgRole) -> JgStatus {
    guard(|| {
        let blamed = blamed.as_mut().ok_or(JgStatus::NullPointer)?;
        *blamed = JgRole::None;
        let text = std::str::from_utf8(bytes(text, len)?).map_err(|_| JgStatus::Malformed)?;
        let t = Transcript::parse(text).map_err(|_| JgStatus::Malformed)?;
        match audit_transcript(&t).map_err(|_| JgStatus::Malformed)? {
            Verdict::Clean => Ok(()),
            Verdict::Blame { role, .. } => {
                *blamed = match role {
                    Role::P1 => JgRole::P1,
                    Role::P2 => JgRole::P2,
                    _ => JgRole::Provider,
                };
                Err(JgStatus::Rejected)
            }
        }
    })
}
