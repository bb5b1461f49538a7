// SPDX-License-Identifier: Apache-2.0

//! Splitting a scalar into `m` limbs of `l` bits and putting it back together.
//!
//! Limb `k` (0-based here, `k+1` in 1-based notation) carries weight
//! `f_k = 2^(k*l)`. The most significant limb is restricted to `l-1` bits,
//! which is why secrets must have bit `m*l - 1` clear.

use rand::{CryptoRng, RngCore};

use crate::group::Group;

pub const MIN_SEGMENT_BITS: u32 = 2;
/// Limbs must stay extractable by baby-step giant-step, which caps at `2^32`.
pub const MAX_SEGMENT_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SegmentationError {
    #[error("segment length {0} outside [{MIN_SEGMENT_BITS}, {MAX_SEGMENT_BITS}]")]
    BadSegmentBits(u32),
    #[error("secret has bits at or above position {0}")]
    SecretOutOfRange(usize),
    #[error("limb {index} = {value} is not below 2^{bits}")]
    LimbOutOfRange { index: usize, value: u64, bits: u32 },
    #[error("expected {expected} limbs, got {got}")]
    WrongLimbCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentationParams {
    /// Bits per segment.
    pub l: u32,
    /// Number of segments, `ceil(q_bits / l)`.
    pub m: usize,
    pub q_bits: usize,
}

impl SegmentationParams {
    pub fn new(l: u32, q_bits: usize) -> Result<Self, SegmentationError> {
        if !(MIN_SEGMENT_BITS..=MAX_SEGMENT_BITS).contains(&l) {
            return Err(SegmentationError::BadSegmentBits(l));
        }
        Ok(SegmentationParams { l, m: q_bits.div_ceil(l as usize), q_bits })
    }

    pub fn for_group<G: Group>(l: u32) -> Result<Self, SegmentationError> {
        Self::new(l, G::ORDER_BITS)
    }

    /// Bit position that must be clear in every secret: `m*l - 1`.
    pub fn msb_position(&self) -> usize {
        self.m * self.l as usize - 1
    }

    /// Exclusive upper bound on limb `k`: `2^l`, or `2^(l-1)` for the top limb.
    pub fn limb_bound(&self, k: usize) -> u64 {
        1u64 << self.limb_bits(k)
    }

    /// Bit width range-proved for limb `k`.
    pub fn limb_bits(&self, k: usize) -> u32 {
        if k + 1 == self.m {
            self.l - 1
        } else {
            self.l
        }
    }

    /// `f_k = 2^(k*l)` reduced mod `q`.
    pub fn weight<G: Group>(&self, k: usize) -> G::Scalar {
        G::pow2(k * self.l as usize)
    }

    pub fn weights<G: Group>(&self) -> Vec<G::Scalar> {
        let step = G::pow2(self.l as usize);
        let mut out = Vec::with_capacity(self.m);
        let mut acc = G::one();
        for _ in 0..self.m {
            out.push(acc);
            acc = acc * step;
        }
        out
    }
}

/// Limbs of a segmented scalar, least significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segments {
    pub limbs: Vec<u64>,
}

pub fn segment<G: Group>(
    x: &G::Scalar,
    params: &SegmentationParams,
) -> Result<Segments, SegmentationError> {
    let bytes = G::encode_scalar(x);
    let bit = |i: usize| -> bool {
        let byte_idx = i / 8;
        byte_idx < bytes.len() && (bytes[bytes.len() - 1 - byte_idx] >> (i % 8)) & 1 == 1
    };
    let limit = params.msb_position();
    if (limit..bytes.len() * 8).any(bit) {
        return Err(SegmentationError::SecretOutOfRange(limit));
    }
    let l = params.l as usize;
    let limbs = (0..params.m)
        .map(|k| (0..l).fold(0u64, |acc, j| acc | (u64::from(bit(k * l + j)) << j)))
        .collect();
    Ok(Segments { limbs })
}

pub fn reconstruct<G: Group>(
    segs: &Segments,
    params: &SegmentationParams,
) -> Result<G::Scalar, SegmentationError> {
    if segs.limbs.len() != params.m {
        return Err(SegmentationError::WrongLimbCount { expected: params.m, got: segs.limbs.len() });
    }
    let mut acc = G::zero();
    for (index, (limb, weight)) in segs.limbs.iter().zip(params.weights::<G>()).enumerate() {
        if *limb >= 1u64 << params.l {
            return Err(SegmentationError::LimbOutOfRange { index, value: *limb, bits: params.l });
        }
        acc = acc + weight * G::scalar_from_u64(*limb);
    }
    Ok(acc)
}

/// Samples a uniformly random secret with bit `m*l - 1` (and above) clear.
pub fn random_secret<G: Group, R: RngCore + CryptoRng>(
    params: &SegmentationParams,
    rng: &mut R,
) -> G::Scalar {
    loop {
        let x = G::random_scalar(rng);
        if segment::<G>(&x, params).is_ok() {
            return x;
        }
    }
}
