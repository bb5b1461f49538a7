// SPDX-License-Identifier: Apache-2.0

//! Biased-segment encryptor.
//!
//! Shifts two limbs by `b` and `b'` with `f_k b + f_k' b' = 0`, so the
//! weighted sum of plaintexts still equals `x` and the aggregate proof stays
//! honest. The shifted limbs are no longer small, so their range proofs
//! must be forged; [`verify_setup`](super::verify_setup) has to catch that.

use rand::{CryptoRng, Rng, RngCore};

use super::{build_bundle, EncryptorState, JugglingError, SetupBundle};
use crate::elgamal::{encrypt, OpenedCiphertext};
use crate::group::Group;
use crate::rangeproof::{BitRange, BitRangeProof, RangeProofSystem};
use crate::segmentation::{segment, SegmentationParams};

/// Which pair of limbs (0-based) to shift and by how much.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bias<G: Group> {
    pub k: usize,
    pub k2: usize,
    pub b_k: G::Scalar,
}

impl<G: Group> Bias<G> {
    /// `u_k = [x]_k + f_k^-1`, `u_{k+1} = [x]_{k+1} - f_{k+1}^-1`.
    pub fn adjacent(params: &SegmentationParams, k: usize) -> Self {
        assert!(k + 1 < params.m);
        let b_k = G::invert(&params.weight::<G>(k)).expect("weights are powers of two");
        Bias { k, k2: k + 1, b_k }
    }

    /// Random distinct pair with a random nonzero shift.
    pub fn random<R: RngCore + CryptoRng>(params: &SegmentationParams, rng: &mut R) -> Self {
        let k = rng.gen_range(0..params.m);
        let mut k2 = rng.gen_range(0..params.m - 1);
        if k2 >= k {
            k2 += 1;
        }
        let b_k = loop {
            let b = G::random_scalar(rng);
            if !G::is_zero(&b) {
                break b;
            }
        };
        Bias { k, k2, b_k }
    }

    /// Compensating shift `b' = -b f_k / f_k'`.
    pub fn b_k2(&self, params: &SegmentationParams) -> G::Scalar {
        let f_k2_inv = G::invert(&params.weight::<G>(self.k2)).expect("weights are powers of two");
        -(self.b_k * params.weight::<G>(self.k) * f_k2_inv)
    }
}

/// How a range proof for an out-of-range limb is faked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Forgery {
    /// Honest bit proofs for the low bits; the bits do not sum to `D`.
    Truncate,
    /// Low bits honest, top bit commitment absorbs the excess so the sum
    /// matches `D`; its OR proof runs with a wrong witness.
    AbsorbTop,
}

/// Builds a biased setup. Releases from the returned state carry valid
/// correct-encryption proofs for the shifted limbs.
pub fn biased_setup<G: Group, R: RngCore + CryptoRng>(
    x: &G::Scalar,
    q_pub: &G::Point,
    y_pub: &G::Point,
    params: &SegmentationParams,
    bias: &Bias<G>,
    rng: &mut R,
) -> Result<(EncryptorState<G>, SetupBundle<G>), JugglingError> {
    if G::mul_base(x) != *q_pub {
        return Err(JugglingError::KeyMismatch);
    }
    let mut limbs: Vec<G::Scalar> =
        segment::<G>(x, params)?.limbs.iter().map(|v| G::scalar_from_u64(*v)).collect();
    limbs[bias.k] = limbs[bias.k] + bias.b_k;
    limbs[bias.k2] = limbs[bias.k2] + bias.b_k2(params);

    let cts: Vec<OpenedCiphertext<G>> = limbs.iter().map(|v| encrypt::<G, R>(v, y_pub, rng)).collect();
    let range_proofs = limbs
        .iter()
        .zip(&cts)
        .enumerate()
        .map(|(k, (u, c))| {
            let n = params.limb_bits(k);
            match G::scalar_to_u64(u).filter(|v| v >> n == 0) {
                Some(v) => BitRange::<G>::prove(v, &c.randomness, y_pub, n, rng).expect("in range"),
                None => {
                    let how = if rng.gen::<bool>() { Forgery::Truncate } else { Forgery::AbsorbTop };
                    forge_range_proof(u, c, y_pub, n, how, rng)
                }
            }
        })
        .collect();
    let state = EncryptorState { params: *params, y_pub: *y_pub, limbs, cts, next_k: 1 };
    let bundle = build_bundle::<G, BitRange<G>, R>(&state, q_pub, x, range_proofs, rng);
    Ok((state, bundle))
}

fn low_bits<G: Group>(u: &G::Scalar, n: u32) -> u64 {
    let bytes = G::encode_scalar(u);
    let tail = &bytes[bytes.len().saturating_sub(8)..];
    let v = tail.iter().fold(0u64, |acc, b| (acc << 8) | u64::from(*b));
    v & ((1u64 << n) - 1)
}

/// Best-effort range proof for a plaintext `u` that is not below `2^n`.
pub fn forge_range_proof<G: Group, R: RngCore + CryptoRng>(
    u: &G::Scalar,
    opened: &OpenedCiphertext<G>,
    y_pub: &G::Point,
    n: u32,
    how: Forgery,
    rng: &mut R,
) -> BitRangeProof<G> {
    let w = low_bits::<G>(u, n);
    let n = n as usize;
    let mut claimed: Vec<(bool, G::Scalar)> =
        (0..n).map(|i| ((w >> i) & 1 == 1, G::random_scalar(rng))).collect();
    let rest = claimed.iter().skip(1).enumerate().fold(G::zero(), |acc, (i, (_, rho))| acc + G::pow2(i + 1) * *rho);
    claimed[0].1 = opened.randomness - rest;
    let mut bits: Vec<G::Point> = claimed
        .iter()
        .map(|(b, rho)| {
            let blind = G::mul(y_pub, rho);
            if *b {
                G::generator() + blind
            } else {
                blind
            }
        })
        .collect();
    if how == Forgery::AbsorbTop {
        let top = n - 1;
        let inv = G::invert(&G::pow2(top)).expect("nonzero");
        let below = bits[..top]
            .iter()
            .enumerate()
            .fold(G::identity(), |acc, (i, b)| acc + G::mul(b, &G::pow2(i)));
        bits[top] = G::mul(&(opened.ct.d - below), &inv);
        let rho_below = claimed[..top].iter().enumerate().fold(G::zero(), |acc, (i, (_, rho))| acc + G::pow2(i) * *rho);
        claimed[top] = (false, (opened.randomness - rho_below) * inv);
    }
    BitRange::<G>::prove_raw(&opened.ct.d, y_pub, bits, &claimed, rng)
}
