// SPDX-License-Identifier: Apache-2.0

//! Segmented verifiable encryption of a discrete log with serial release.
//!
//! The encryptor splits `x` (with `Q = xG`) into `m` limbs, encrypts each
//! limb to the decryptor's key `Y`, and publishes a [`SetupBundle`]: every
//! `D_k`, a range proof per `D_k`, the weighted aggregate `E = sum f_k E_k`,
//! and a proof that `(sum f_k D_k, E)` encrypts `log_G Q`. It then releases
//! `E_k` one at a time in ascending order, each with a proof of correct
//! encryption. After verifying a release the decryptor recovers limb `k`
//! with a bounded discrete log; after all `m` it reconstructs `x`.
//!
//! Anyone holding `(Q, Y)` can check the bundle and every release; only the
//! holder of `y` can decrypt. See [`Verifier`] and [`Decryptor`].

pub mod attack;

use rand::{CryptoRng, RngCore};

use crate::elgamal::{
    aggregate, aggregate_opened, decrypt_segment_with, encrypt, Ciphertext, EncKeyPair,
    OpenedCiphertext,
};
use crate::group::{Bsgs, Group, GroupError};
use crate::rangeproof::{BitRange, RangeProofSystem, RangeStatement};
use crate::segmentation::{reconstruct, segment, SegmentationError, SegmentationParams, Segments};
use crate::sigma::{self, Enc, EncDlog, EncDlogProof, EncDlogStatement, EncProof, EncStatement};
use crate::wire::{CodecError, Encode, Reader, Writer};

pub const FRAME_SETUP: u8 = 0x01;
pub const FRAME_RELEASE: u8 = 0x02;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JugglingError {
    #[error("secret has bits at or above position {0}")]
    SecretOutOfRange(usize),
    #[error("public key does not match the secret")]
    KeyMismatch,
    #[error("segment {got} out of order, expected {expected}")]
    OutOfOrder { expected: usize, got: usize },
    #[error("all segments already released")]
    Exhausted,
    #[error("setup bundle rejected")]
    SetupRejected,
    #[error("proof for segment {0} rejected")]
    ProofRejected(usize),
    #[error("no verified setup bundle")]
    NoSetup,
    #[error("session poisoned by an earlier rejection")]
    Poisoned,
    #[error("segment {0} did not decrypt inside its range")]
    ExtractionFailed(usize),
    #[error("{have} of {need} segments decrypted")]
    Incomplete { have: usize, need: usize },
    #[error("reconstructed secret does not match the public key")]
    SoundnessViolation,
    #[error(transparent)]
    Segmentation(SegmentationError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<SegmentationError> for JugglingError {
    fn from(e: SegmentationError) -> Self {
        match e {
            SegmentationError::SecretOutOfRange(bit) => JugglingError::SecretOutOfRange(bit),
            other => JugglingError::Segmentation(other),
        }
    }
}

/// Everything the encryptor publishes before the first release.
#[derive(Debug, Clone, PartialEq)]
pub struct SetupBundle<G: Group, RP: RangeProofSystem<G> = BitRange<G>> {
    pub all_d: Vec<G::Point>,
    pub range_proofs: Vec<RP::Proof>,
    pub e_agg: G::Point,
    pub encdlog_proof: EncDlogProof<G>,
}

/// One unit of gradual release. `k` is 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentRelease<G: Group> {
    pub k: usize,
    pub e_k: G::Point,
    pub enc_proof: EncProof<G>,
}

/// Encryptor-side session: the opened ciphertexts and the release cursor.
#[derive(Debug, Clone)]
pub struct EncryptorState<G: Group> {
    params: SegmentationParams,
    y_pub: G::Point,
    limbs: Vec<G::Scalar>,
    cts: Vec<OpenedCiphertext<G>>,
    next_k: usize,
}

impl<G: Group> EncryptorState<G> {
    pub fn params(&self) -> &SegmentationParams {
        &self.params
    }

    /// 1-based index of the next segment to release.
    pub fn next_k(&self) -> usize {
        self.next_k
    }

    pub fn is_exhausted(&self) -> bool {
        self.next_k > self.params.m
    }

    /// Releases segment `k`, which must be [`Self::next_k`].
    pub fn release_segment<R: RngCore + CryptoRng>(
        &mut self,
        k: usize,
        rng: &mut R,
    ) -> Result<SegmentRelease<G>, JugglingError> {
        if self.is_exhausted() {
            return Err(JugglingError::Exhausted);
        }
        if k != self.next_k {
            return Err(JugglingError::OutOfOrder { expected: self.next_k, got: k });
        }
        let idx = k - 1;
        let opened = &self.cts[idx];
        let stmt = EncStatement { y: self.y_pub, d: opened.ct.d, e: opened.ct.e };
        let enc_proof =
            sigma::prove::<G, Enc<G>, _>(&stmt, &(self.limbs[idx], opened.randomness), rng);
        self.next_k += 1;
        Ok(SegmentRelease { k, e_k: opened.ct.e, enc_proof })
    }

    /// Releases whatever segment is next.
    pub fn release_next<R: RngCore + CryptoRng>(
        &mut self,
        rng: &mut R,
    ) -> Result<SegmentRelease<G>, JugglingError> {
        self.release_segment(self.next_k, rng)
    }
}

/// Setup with the bit-decomposition range proof.
pub fn encryptor_setup<G: Group, R: RngCore + CryptoRng>(
    x: &G::Scalar,
    q_pub: &G::Point,
    y_pub: &G::Point,
    params: &SegmentationParams,
    rng: &mut R,
) -> Result<(EncryptorState<G>, SetupBundle<G>), JugglingError> {
    encryptor_setup_with::<G, BitRange<G>, R>(x, q_pub, y_pub, params, rng)
}

pub fn encryptor_setup_with<G: Group, RP: RangeProofSystem<G>, R: RngCore + CryptoRng>(
    x: &G::Scalar,
    q_pub: &G::Point,
    y_pub: &G::Point,
    params: &SegmentationParams,
    rng: &mut R,
) -> Result<(EncryptorState<G>, SetupBundle<G, RP>), JugglingError> {
    if G::mul_base(x) != *q_pub {
        return Err(JugglingError::KeyMismatch);
    }
    let Segments { limbs } = segment::<G>(x, params)?;
    let cts: Vec<OpenedCiphertext<G>> = limbs
        .iter()
        .map(|v| encrypt::<G, R>(&G::scalar_from_u64(*v), y_pub, rng))
        .collect();
    let range_proofs = limbs
        .iter()
        .zip(&cts)
        .enumerate()
        .map(|(k, (v, c))| {
            RP::prove(*v, &c.randomness, y_pub, params.limb_bits(k), rng)
                .expect("segmented limbs are within their range")
        })
        .collect();
    let limbs: Vec<G::Scalar> = limbs.iter().map(|v| G::scalar_from_u64(*v)).collect();
    let state = EncryptorState { params: *params, y_pub: *y_pub, limbs, cts, next_k: 1 };
    let bundle = build_bundle::<G, RP, R>(&state, q_pub, x, range_proofs, rng);
    Ok((state, bundle))
}

fn build_bundle<G: Group, RP: RangeProofSystem<G>, R: RngCore + CryptoRng>(
    state: &EncryptorState<G>,
    q_pub: &G::Point,
    x: &G::Scalar,
    range_proofs: Vec<RP::Proof>,
    rng: &mut R,
) -> SetupBundle<G, RP> {
    let agg = aggregate_opened(&state.cts, &state.params.weights::<G>());
    let stmt = EncDlogStatement { y: state.y_pub, q: *q_pub, d: agg.ct.d, e: agg.ct.e };
    let encdlog_proof = sigma::prove::<G, EncDlog<G>, R>(&stmt, &(*x, agg.randomness), rng);
    SetupBundle {
        all_d: state.cts.iter().map(|c| c.ct.d).collect(),
        range_proofs,
        e_agg: agg.ct.e,
        encdlog_proof,
    }
}

/// Public check of a setup bundle against `(Q, Y)`.
pub fn verify_setup<G: Group, RP: RangeProofSystem<G>>(
    bundle: &SetupBundle<G, RP>,
    q_pub: &G::Point,
    y_pub: &G::Point,
    params: &SegmentationParams,
) -> bool {
    if bundle.all_d.len() != params.m || bundle.range_proofs.len() != params.m {
        return false;
    }
    let ranges_ok = bundle.all_d.iter().zip(&bundle.range_proofs).enumerate().all(|(k, (d, p))| {
        let stmt = RangeStatement { commitment: *d, y: *y_pub, n_bits: params.limb_bits(k) };
        RP::verify(&stmt, p)
    });
    if !ranges_ok {
        return false;
    }
    let d_agg = bundle
        .all_d
        .iter()
        .zip(params.weights::<G>())
        .fold(G::identity(), |acc, (d, f)| acc + G::mul(d, &f));
    let stmt = EncDlogStatement { y: *y_pub, q: *q_pub, d: d_agg, e: bundle.e_agg };
    sigma::verify(&stmt, &bundle.encdlog_proof)
}

/// Public verifier for one juggling session. Needs no secret; the provider
/// and auditors use it directly and [`Decryptor`] builds on it.
#[derive(Debug, Clone)]
pub struct Verifier<G: Group, RP: RangeProofSystem<G> = BitRange<G>> {
    params: SegmentationParams,
    q_pub: G::Point,
    y_pub: G::Point,
    bundle: Option<SetupBundle<G, RP>>,
    verified: usize,
    poisoned: bool,
}

impl<G: Group, RP: RangeProofSystem<G>> Verifier<G, RP> {
    pub fn new(params: SegmentationParams, q_pub: G::Point, y_pub: G::Point) -> Self {
        Verifier { params, q_pub, y_pub, bundle: None, verified: 0, poisoned: false }
    }

    pub fn params(&self) -> &SegmentationParams {
        &self.params
    }

    pub fn q_pub(&self) -> &G::Point {
        &self.q_pub
    }

    pub fn has_setup(&self) -> bool {
        self.bundle.is_some()
    }

    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    /// Number of releases verified so far.
    pub fn verified(&self) -> usize {
        self.verified
    }

    pub fn accept_setup(&mut self, bundle: SetupBundle<G, RP>) -> Result<(), JugglingError> {
        if self.poisoned {
            return Err(JugglingError::Poisoned);
        }
        if !verify_setup(&bundle, &self.q_pub, &self.y_pub, &self.params) {
            self.poisoned = true;
            return Err(JugglingError::SetupRejected);
        }
        self.bundle = Some(bundle);
        Ok(())
    }

    /// Verifies the next release and returns its full ciphertext.
    pub fn accept_release(&mut self, release: &SegmentRelease<G>) -> Result<Ciphertext<G>, JugglingError> {
        if self.poisoned {
            return Err(JugglingError::Poisoned);
        }
        let bundle = self.bundle.as_ref().ok_or(JugglingError::NoSetup)?;
        let expected = self.verified + 1;
        if expected > self.params.m {
            return Err(JugglingError::Exhausted);
        }
        if release.k != expected {
            return Err(JugglingError::OutOfOrder { expected, got: release.k });
        }
        let ct = Ciphertext { d: bundle.all_d[release.k - 1], e: release.e_k };
        let stmt = EncStatement { y: self.y_pub, d: ct.d, e: ct.e };
        if !sigma::verify(&stmt, &release.enc_proof) {
            self.poisoned = true;
            return Err(JugglingError::ProofRejected(release.k));
        }
        self.verified += 1;
        Ok(ct)
    }
}

/// Decryptor-side session holding `y`.
#[derive(Debug, Clone)]
pub struct Decryptor<G: Group, RP: RangeProofSystem<G> = BitRange<G>> {
    verifier: Verifier<G, RP>,
    y: G::Scalar,
    solver: Bsgs<G>,
    limbs: Vec<u64>,
}

impl<G: Group, RP: RangeProofSystem<G>> Decryptor<G, RP> {
    pub fn new(
        params: SegmentationParams,
        keys: &EncKeyPair<G>,
        q_pub: G::Point,
    ) -> Result<Self, JugglingError> {
        Ok(Decryptor {
            verifier: Verifier::new(params, q_pub, keys.public),
            y: keys.secret,
            solver: Bsgs::with_generator(1u64 << params.l)?,
            limbs: Vec::with_capacity(params.m),
        })
    }

    pub fn verifier(&self) -> &Verifier<G, RP> {
        &self.verifier
    }

    /// Size of the baby-step table used per extraction.
    pub fn bsgs_table_len(&self) -> usize {
        self.solver.table_len()
    }

    pub fn accept_setup(&mut self, bundle: SetupBundle<G, RP>) -> Result<(), JugglingError> {
        self.verifier.accept_setup(bundle)
    }

    /// Verifies and decrypts the next release, returning its limb.
    ///
    /// `ExtractionFailed` here means a verified ciphertext decrypted outside
    /// its proven range, which the proofs rule out; callers treat it as fatal.
    pub fn accept_segment(&mut self, release: &SegmentRelease<G>) -> Result<u64, JugglingError> {
        let ct = self.verifier.accept_release(release)?;
        let k = release.k - 1;
        let limb = decrypt_segment_with(&ct, &self.y, &self.solver)
            .map_err(|_| JugglingError::ExtractionFailed(release.k))?;
        if limb >= self.verifier.params.limb_bound(k) {
            return Err(JugglingError::ExtractionFailed(release.k));
        }
        self.limbs.push(limb);
        Ok(limb)
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn decrypted(&self) -> usize {
        self.limbs.len()
    }

    pub fn finish(&self) -> Result<G::Scalar, JugglingError> {
        let params = &self.verifier.params;
        if self.limbs.len() < params.m {
            return Err(JugglingError::Incomplete { have: self.limbs.len(), need: params.m });
        }
        let x = reconstruct::<G>(&Segments { limbs: self.limbs.clone() }, params)?;
        if G::mul_base(&x) != self.verifier.q_pub {
            return Err(JugglingError::SoundnessViolation);
        }
        Ok(x)
    }

    /// After an abort, tries to brute force the limbs not yet released.
    ///
    /// The unknown part is `f_j * v` with `v < 2^(m*l - 1 - j*l)`; the
    /// search runs only when that exponent is at most `budget_bits`.
    pub fn recover_remaining(&self, budget_bits: u32) -> Option<G::Scalar> {
        let params = &self.verifier.params;
        let j = self.limbs.len();
        if j >= params.m {
            return self.finish().ok();
        }
        let unknown_bits = (params.msb_position() - j * params.l as usize) as u32;
        if unknown_bits > budget_bits.min(32) {
            return None;
        }
        let weights = params.weights::<G>();
        let known = self
            .limbs
            .iter()
            .zip(&weights)
            .fold(G::zero(), |acc, (v, f)| acc + *f * G::scalar_from_u64(*v));
        let target = self.verifier.q_pub - G::mul_base(&known);
        let base = G::mul_base(&weights[j]);
        let v = Bsgs::<G>::new(base, 1u64 << unknown_bits).ok()?.solve(&target).ok()?;
        Some(known + weights[j] * G::scalar_from_u64(v))
    }
}

impl<G: Group, RP: RangeProofSystem<G>> Encode<G> for SetupBundle<G, RP> {
    fn write(&self, w: &mut Writer) {
        w.u16(self.all_d.len() as u16);
        for d in &self.all_d {
            w.point::<G>(d);
        }
        for p in &self.range_proofs {
            p.write(w);
        }
        w.point::<G>(&self.e_agg);
        self.encdlog_proof.write(w);
    }

    fn read(r: &mut Reader<'_>) -> Result<Self, CodecError> {
        let m = r.u16()? as usize;
        let all_d = (0..m).map(|_| r.point::<G>()).collect::<Result<Vec<_>, _>>()?;
        let range_proofs = (0..m).map(|_| RP::Proof::read(r)).collect::<Result<Vec<_>, _>>()?;
        let e_agg = r.point::<G>()?;
        let encdlog_proof = EncDlogProof::<G>::read(r)?;
        Ok(SetupBundle { all_d, range_proofs, e_agg, encdlog_proof })
    }
}

impl<G: Group> Encode<G> for SegmentRelease<G> {
    fn write(&self, w: &mut Writer) {
        w.u16(self.k as u16).point::<G>(&self.e_k);
        self.enc_proof.write(w);
    }

    fn read(r: &mut Reader<'_>) -> Result<Self, CodecError> {
        let k = r.u16()? as usize;
        let e_k = r.point::<G>()?;
        let enc_proof = EncProof::<G>::read(r)?;
        Ok(SegmentRelease { k, e_k, enc_proof })
    }
}

/// Aggregate of a bundle's segment commitments, `sum f_k D_k`.
pub fn aggregate_commitments<G: Group>(all_d: &[G::Point], params: &SegmentationParams) -> G::Point {
    let cts: Vec<Ciphertext<G>> =
        all_d.iter().map(|d| Ciphertext { d: *d, e: G::identity() }).collect();
    aggregate(&cts, &params.weights::<G>()).d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{brute_force_dlog, Secp256k1, ToyGroup, TOY_ORDER};
    use crate::segmentation::random_secret;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    struct Session<G: Group> {
        x: G::Scalar,
        q: G::Point,
        keys: EncKeyPair<G>,
        params: SegmentationParams,
        enc: EncryptorState<G>,
        bundle: SetupBundle<G>,
    }

    fn session<G: Group>(l: u32, rng: &mut ChaCha20Rng) -> Session<G> {
        let params = SegmentationParams::for_group::<G>(l).unwrap();
        let x = random_secret::<G, _>(&params, rng);
        let q = G::mul_base(&x);
        let keys = EncKeyPair::generate(rng);
        let (enc, bundle) = encryptor_setup::<G, _>(&x, &q, &keys.public, &params, rng).unwrap();
        Session { x, q, keys, params, enc, bundle }
    }

    #[test]
    fn honest_toy_sessions_recover_secret() {
        let mut rng = ChaCha20Rng::seed_from_u64(51);
        for l in [2, 3, 4, 5, 8] {
            let mut s = session::<ToyGroup>(l, &mut rng);
            assert!(verify_setup(&s.bundle, &s.q, &s.keys.public, &s.params));
            let mut dec = Decryptor::<ToyGroup>::new(s.params, &s.keys, s.q).unwrap();
            dec.accept_setup(s.bundle.clone()).unwrap();
            let expected = segment::<ToyGroup>(&s.x, &s.params).unwrap().limbs;
            for k in 1..=s.params.m {
                let rel = s.enc.release_segment(k, &mut rng).unwrap();
                assert_eq!(dec.accept_segment(&rel).unwrap(), expected[k - 1]);
            }
            let x = dec.finish().unwrap();
            assert_eq!(x, s.x);
            let full = brute_force_dlog::<ToyGroup>(&s.q, TOY_ORDER).unwrap();
            assert_eq!(ToyGroup::scalar_from_u64(full), x);
        }
    }

    #[test]
    fn secp256k1_session_at_l8() {
        let mut rng = ChaCha20Rng::seed_from_u64(52);
        let mut s = session::<Secp256k1>(8, &mut rng);
        assert_eq!(s.params.m, 32);
        let mut dec = Decryptor::<Secp256k1>::new(s.params, &s.keys, s.q).unwrap();
        assert_eq!(dec.bsgs_table_len(), 16);
        dec.accept_setup(s.bundle.clone()).unwrap();
        while !s.enc.is_exhausted() {
            let rel = s.enc.release_next(&mut rng).unwrap();
            dec.accept_segment(&rel).unwrap();
        }
        assert_eq!(dec.finish().unwrap(), s.x);
    }

    #[test]
    fn setup_input_errors() {
        let mut rng = ChaCha20Rng::seed_from_u64(53);
        let params = SegmentationParams::for_group::<Secp256k1>(8).unwrap();
        let x = random_secret::<Secp256k1, _>(&params, &mut rng);
        let keys = EncKeyPair::<Secp256k1>::generate(&mut rng);
        let wrong_q = Secp256k1::mul_base(&(x + Secp256k1::one()));
        assert_eq!(
            encryptor_setup::<Secp256k1, _>(&x, &wrong_q, &keys.public, &params, &mut rng).unwrap_err(),
            JugglingError::KeyMismatch
        );
        let big = x + Secp256k1::pow2(255);
        assert_eq!(
            encryptor_setup::<Secp256k1, _>(&big, &Secp256k1::mul_base(&big), &keys.public, &params, &mut rng)
                .unwrap_err(),
            JugglingError::SecretOutOfRange(255)
        );
    }

    #[test]
    fn tampered_bundle_rejected() {
        let mut rng = ChaCha20Rng::seed_from_u64(54);
        let s = session::<Secp256k1>(8, &mut rng);
        let mut bad = s.bundle.clone();
        bad.all_d[0] += Secp256k1::generator();
        assert!(!verify_setup(&bad, &s.q, &s.keys.public, &s.params));
        let mut short = s.bundle.clone();
        short.all_d.pop();
        assert!(!verify_setup(&short, &s.q, &s.keys.public, &s.params));
        let other_q = Secp256k1::mul_base(&Secp256k1::random_scalar(&mut rng));
        assert!(!verify_setup(&s.bundle, &other_q, &s.keys.public, &s.params));
    }

    #[test]
    fn ordering_enforced() {
        let mut rng = ChaCha20Rng::seed_from_u64(55);
        let mut s = session::<ToyGroup>(4, &mut rng);
        s.enc.release_segment(1, &mut rng).unwrap();
        assert_eq!(
            s.enc.release_segment(3, &mut rng).unwrap_err(),
            JugglingError::OutOfOrder { expected: 2, got: 3 }
        );
        let mut dec = Decryptor::<ToyGroup>::new(s.params, &s.keys, s.q).unwrap();
        let rel2 = s.enc.release_segment(2, &mut rng).unwrap();
        assert_eq!(dec.accept_segment(&rel2).unwrap_err(), JugglingError::NoSetup);
        dec.accept_setup(s.bundle.clone()).unwrap();
        assert_eq!(dec.accept_segment(&rel2).unwrap_err(), JugglingError::OutOfOrder { expected: 1, got: 2 });
        while !s.enc.is_exhausted() {
            s.enc.release_next(&mut rng).unwrap();
        }
        assert_eq!(s.enc.release_next(&mut rng).unwrap_err(), JugglingError::Exhausted);
    }

    #[test]
    fn reused_ciphertext_poisons_session() {
        let mut rng = ChaCha20Rng::seed_from_u64(56);
        let mut s = session::<Secp256k1>(8, &mut rng);
        let mut dec = Decryptor::<Secp256k1>::new(s.params, &s.keys, s.q).unwrap();
        dec.accept_setup(s.bundle.clone()).unwrap();
        let rel1 = s.enc.release_next(&mut rng).unwrap();
        dec.accept_segment(&rel1).unwrap();
        let mut rel2 = s.enc.release_next(&mut rng).unwrap();
        rel2.e_k = rel1.e_k;
        assert_eq!(dec.accept_segment(&rel2).unwrap_err(), JugglingError::ProofRejected(2));
        let rel3 = s.enc.release_next(&mut rng).unwrap();
        assert_eq!(dec.accept_segment(&rel3).unwrap_err(), JugglingError::Poisoned);
        assert_eq!(dec.decrypted(), 1);
    }

    #[test]
    fn incomplete_and_recovery() {
        let mut rng = ChaCha20Rng::seed_from_u64(57);
        let mut s = session::<ToyGroup>(4, &mut rng);
        let mut dec = Decryptor::<ToyGroup>::new(s.params, &s.keys, s.q).unwrap();
        dec.accept_setup(s.bundle.clone()).unwrap();
        for _ in 0..s.params.m - 1 {
            dec.accept_segment(&s.enc.release_next(&mut rng).unwrap()).unwrap();
        }
        assert_eq!(dec.finish().unwrap_err(), JugglingError::Incomplete { have: 4, need: 5 });
        // top limb has l-1 = 3 unknown bits
        assert_eq!(dec.recover_remaining(2), None);
        assert_eq!(dec.recover_remaining(3), Some(s.x));
    }

    #[test]
    fn wire_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(58);
        let mut s = session::<Secp256k1>(8, &mut rng);
        let bytes = s.bundle.to_bytes();
        let back = SetupBundle::<Secp256k1>::from_bytes(&bytes).unwrap();
        assert_eq!(back, s.bundle);
        assert!(SetupBundle::<Secp256k1>::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let rel = s.enc.release_next(&mut rng).unwrap();
        assert_eq!(SegmentRelease::<Secp256k1>::from_bytes(&rel.to_bytes()).unwrap(), rel);
    }
}
