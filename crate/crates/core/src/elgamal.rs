// SPDX-License-Identifier: Apache-2.0

//! Additively homomorphic ElGamal "in the exponent".
//!
//! A plaintext `v` encrypts to `(D, E) = (vG + rY, rG)`. Decryption yields
//! `vG`; recovering `v` needs a bounded discrete log, so only small
//! plaintexts (segments) are decryptable.

use rand::{CryptoRng, RngCore};

use crate::group::{Bsgs, Group, GroupError};
use crate::wire::{CodecError, Encode, Reader, Writer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncKeyPair<G: Group> {
    pub secret: G::Scalar,
    pub public: G::Point,
}

impl<G: Group> EncKeyPair<G> {
    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        Self::from_secret(G::random_scalar(rng))
    }

    pub fn from_secret(secret: G::Scalar) -> Self {
        EncKeyPair { secret, public: G::mul_base(&secret) }
    }
}

/// Public half of a ciphertext as it travels on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ciphertext<G: Group> {
    pub d: G::Point,
    pub e: G::Point,
}

/// Ciphertext together with the randomness that produced it, held by the
/// encryptor so it can prove statements about the ciphertext.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpenedCiphertext<G: Group> {
    pub ct: Ciphertext<G>,
    pub randomness: G::Scalar,
}

pub fn encrypt<G: Group, R: RngCore + CryptoRng>(
    v: &G::Scalar,
    y_pub: &G::Point,
    rng: &mut R,
) -> OpenedCiphertext<G> {
    encrypt_with(v, y_pub, G::random_scalar(rng))
}

/// Encryption with caller-chosen randomness.
pub fn encrypt_with<G: Group>(v: &G::Scalar, y_pub: &G::Point, r: G::Scalar) -> OpenedCiphertext<G> {
    OpenedCiphertext {
        ct: Ciphertext { d: G::mul_base(v) + G::mul(y_pub, &r), e: G::mul_base(&r) },
        randomness: r,
    }
}

/// `D - yE`, which equals `vG` for an honest ciphertext.
pub fn decrypt_point<G: Group>(ct: &Ciphertext<G>, y: &G::Scalar) -> G::Point {
    ct.d - G::mul(&ct.e, y)
}

/// Recovers a plaintext known to lie below `2^bits`.
pub fn decrypt_segment<G: Group>(
    ct: &Ciphertext<G>,
    y: &G::Scalar,
    bits: u32,
) -> Result<u64, GroupError> {
    Bsgs::<G>::with_generator(1u64 << bits)?.solve(&decrypt_point(ct, y))
}

/// Same as [`decrypt_segment`] with a prebuilt solver.
pub fn decrypt_segment_with<G: Group>(
    ct: &Ciphertext<G>,
    y: &G::Scalar,
    solver: &Bsgs<G>,
) -> Result<u64, GroupError> {
    solver.solve(&decrypt_point(ct, y))
}

/// Weighted homomorphic sum `(sum f_k D_k, sum f_k E_k)`.
pub fn aggregate<G: Group>(cts: &[Ciphertext<G>], weights: &[G::Scalar]) -> Ciphertext<G> {
    debug_assert_eq!(cts.len(), weights.len());
    cts.iter().zip(weights).fold(
        Ciphertext { d: G::identity(), e: G::identity() },
        |acc, (ct, f)| Ciphertext { d: acc.d + G::mul(&ct.d, f), e: acc.e + G::mul(&ct.e, f) },
    )
}

/// Prover-side aggregate, also summing randomness as `sum f_k r_k`.
pub fn aggregate_opened<G: Group>(
    cts: &[OpenedCiphertext<G>],
    weights: &[G::Scalar],
) -> OpenedCiphertext<G> {
    let public: Vec<_> = cts.iter().map(|c| c.ct).collect();
    let randomness = cts
        .iter()
        .zip(weights)
        .fold(G::zero(), |acc, (c, f)| acc + *f * c.randomness);
    OpenedCiphertext { ct: aggregate(&public, weights), randomness }
}

impl<G: Group> Encode<G> for Ciphertext<G> {
    fn write(&self, w: &mut Writer) {
        w.point::<G>(&self.d).point::<G>(&self.e);
    }

    fn read(r: &mut Reader<'_>) -> Result<Self, CodecError> {
        Ok(Ciphertext { d: r.point::<G>()?, e: r.point::<G>()? })
    }
}
