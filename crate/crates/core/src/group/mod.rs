// SPDX-License-Identifier: Apache-2.0

//! Prime-order groups used by every protocol in the crate.
//!
//! Protocol code is generic over [`Group`]. Two instantiations ship with the
//! crate: [`ToyGroup`], a subgroup of `Z_p^*` whose order is below `2^20` so
//! that any discrete log can be brute forced in tests, and [`Secp256k1`].
//!
//! Group law is written additively throughout, including for the toy group
//! where the underlying operation is multiplication mod `p`.

mod bsgs;
mod secp256k1;
mod toy;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use rand::{CryptoRng, RngCore};

pub use bsgs::{brute_force_dlog, Bsgs, MAX_DLOG_BOUND};
pub use secp256k1::Secp256k1;
pub use toy::{ToyGroup, ToyPoint, ToyScalar, TOY_GENERATOR, TOY_MODULUS, TOY_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("malformed point encoding")]
    MalformedPoint,
    #[error("malformed scalar encoding")]
    MalformedScalar,
    #[error("no discrete log below the search bound")]
    NotFound,
    #[error("discrete log bound {0} exceeds 2^32")]
    BoundTooLarge(u64),
    #[error("inverse of zero")]
    ZeroInverse,
}

/// Descriptive parameters of a group instantiation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupParams {
    pub name: &'static str,
    /// Big-endian group order `q`.
    pub order: Vec<u8>,
    pub order_bits: usize,
    pub generator: Vec<u8>,
    pub scalar_byte_len: usize,
    pub point_byte_len: usize,
}

/// A cyclic group of prime order `q` together with its scalar field.
///
/// Encodings are canonical and fixed width. Scalars are big-endian; points
/// use whatever the instantiation documents, with a distinguished encoding
/// for the identity. These exact bytes feed Fiat-Shamir hashing.
pub trait Group: Copy + Clone + Debug + Default + PartialEq + Eq + Send + Sync + 'static {
    type Scalar: Copy
        + Eq
        + Debug
        + Send
        + Sync
        + Add<Output = Self::Scalar>
        + Sub<Output = Self::Scalar>
        + Mul<Output = Self::Scalar>
        + Neg<Output = Self::Scalar>;

    type Point: Copy
        + Eq
        + Debug
        + Send
        + Sync
        + Add<Output = Self::Point>
        + Sub<Output = Self::Point>
        + Neg<Output = Self::Point>;

    const NAME: &'static str;
    const SCALAR_BYTES: usize;
    const POINT_BYTES: usize;
    const ORDER_BITS: usize;

    fn order_be() -> Vec<u8>;
    fn generator() -> Self::Point;
    fn identity() -> Self::Point;
    fn mul(point: &Self::Point, k: &Self::Scalar) -> Self::Point;

    fn mul_base(k: &Self::Scalar) -> Self::Point {
        Self::mul(&Self::generator(), k)
    }

    /// `a*P + b*R`.
    fn mul2(p: &Self::Point, a: &Self::Scalar, r: &Self::Point, b: &Self::Scalar) -> Self::Point {
        Self::mul(p, a) + Self::mul(r, b)
    }

    fn scalar_from_u64(v: u64) -> Self::Scalar;
    fn invert(k: &Self::Scalar) -> Result<Self::Scalar, GroupError>;
    fn random_scalar<R: RngCore + CryptoRng>(rng: &mut R) -> Self::Scalar;

    fn encode_scalar(k: &Self::Scalar) -> Vec<u8>;
    /// Rejects wrong lengths and values `>= q`.
    fn decode_scalar(bytes: &[u8]) -> Result<Self::Scalar, GroupError>;
    /// Interprets a digest as a big-endian integer and reduces it mod `q`.
    fn scalar_from_digest(digest: &[u8; 32]) -> Self::Scalar;

    fn encode_point(p: &Self::Point) -> Vec<u8>;
    /// Rejects wrong lengths, non-canonical bytes and non-members.
    fn decode_point(bytes: &[u8]) -> Result<Self::Point, GroupError>;

    fn params() -> GroupParams {
        GroupParams {
            name: Self::NAME,
            order: Self::order_be(),
            order_bits: Self::ORDER_BITS,
            generator: Self::encode_point(&Self::generator()),
            scalar_byte_len: Self::SCALAR_BYTES,
            point_byte_len: Self::POINT_BYTES,
        }
    }

    fn zero() -> Self::Scalar {
        Self::scalar_from_u64(0)
    }

    fn one() -> Self::Scalar {
        Self::scalar_from_u64(1)
    }

    /// `2^n mod q`.
    fn pow2(n: usize) -> Self::Scalar {
        let two = Self::scalar_from_u64(2);
        (0..n).fold(Self::one(), |acc, _| acc * two)
    }

    fn is_zero(k: &Self::Scalar) -> bool {
        *k == Self::zero()
    }

    /// Bit `i` (little-endian numbering) of the canonical integer representing `k`.
    fn scalar_bit(k: &Self::Scalar, i: usize) -> bool {
        let bytes = Self::encode_scalar(k);
        let byte_idx = i / 8;
        if byte_idx >= bytes.len() {
            return false;
        }
        (bytes[bytes.len() - 1 - byte_idx] >> (i % 8)) & 1 == 1
    }

    /// `Some(v)` when the canonical integer of `k` fits in a `u64`.
    fn scalar_to_u64(k: &Self::Scalar) -> Option<u64> {
        let bytes = Self::encode_scalar(k);
        let split = bytes.len().saturating_sub(8);
        if bytes[..split].iter().any(|b| *b != 0) {
            return None;
        }
        Some(bytes[split..].iter().fold(0u64, |acc, b| (acc << 8) | u64::from(*b)))
    }
}

/// Runtime selector for the shipped group instantiations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Toy,
    Secp256k1,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Toy => ToyGroup::NAME,
            GroupKind::Secp256k1 => Secp256k1::NAME,
        }
    }

    pub fn order_bits(self) -> usize {
        match self {
            GroupKind::Toy => ToyGroup::ORDER_BITS,
            GroupKind::Secp256k1 => Secp256k1::ORDER_BITS,
        }
    }
}

impl FromStr for GroupKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "toy" => Ok(GroupKind::Toy),
            "secp256k1" => Ok(GroupKind::Secp256k1),
            other => Err(format!("unknown group `{other}` (expected toy or secp256k1)")),
        }
    }
}

impl std::fmt::Display for GroupKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Used by hash-keyed tables; encodings are canonical so this is injective.
pub(crate) fn point_key<G: Group>(p: &G::Point) -> Vec<u8> {
    G::encode_point(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn group_laws<G: Group>(draws: usize) {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let g = G::generator();
        for _ in 0..draws {
            let a = G::random_scalar(&mut rng);
            let b = G::random_scalar(&mut rng);
            assert_eq!(G::mul_base(&(a + b)), G::mul_base(&a) + G::mul_base(&b));
            assert_eq!(G::mul(&G::mul_base(&b), &a), G::mul_base(&(a * b)));
            assert_eq!(G::mul(&g, &(a - b)), G::mul_base(&a) - G::mul_base(&b));
        }
    }

    fn trivial_mults<G: Group>() {
        let g = G::generator();
        assert_eq!(G::mul_base(&G::zero()), G::identity());
        assert_eq!(G::mul_base(&G::one()), g);
        let q_minus_one = -G::one();
        assert_eq!(G::mul_base(&q_minus_one) + g, G::identity());
        assert_ne!(g, G::identity());
    }

    fn encodings<G: Group>() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let g = G::generator();
        assert_eq!(G::decode_point(&G::encode_point(&g)).unwrap(), g);
        let id = G::encode_point(&G::identity());
        assert_eq!(id.len(), G::POINT_BYTES);
        assert_eq!(G::decode_point(&id).unwrap(), G::identity());
        assert_eq!(
            G::decode_point(&vec![0u8; G::POINT_BYTES + 1]),
            Err(GroupError::MalformedPoint)
        );
        assert_eq!(G::decode_point(&[]), Err(GroupError::MalformedPoint));
        for _ in 0..50 {
            let k = G::random_scalar(&mut rng);
            let enc = G::encode_scalar(&k);
            assert_eq!(enc.len(), G::SCALAR_BYTES);
            assert_eq!(G::decode_scalar(&enc).unwrap(), k);
            let p = G::mul_base(&k);
            let penc = G::encode_point(&p);
            assert_eq!(penc.len(), G::POINT_BYTES);
            assert_eq!(G::decode_point(&penc).unwrap(), p);
        }
        // q itself is not a canonical scalar
        let mut q = G::order_be();
        while q.len() < G::SCALAR_BYTES {
            q.insert(0, 0);
        }
        assert_eq!(G::decode_scalar(&q), Err(GroupError::MalformedScalar));
        assert_eq!(G::invert(&G::zero()), Err(GroupError::ZeroInverse));
        let k = G::random_scalar(&mut rng);
        assert_eq!(k * G::invert(&k).unwrap(), G::one());
    }

    #[test]
    fn toy_group_laws() {
        trivial_mults::<ToyGroup>();
        group_laws::<ToyGroup>(1000);
        encodings::<ToyGroup>();
    }

    #[test]
    fn secp256k1_group_laws() {
        trivial_mults::<Secp256k1>();
        group_laws::<Secp256k1>(1000);
        encodings::<Secp256k1>();
    }

    #[test]
    fn pow2_and_bits() {
        assert_eq!(ToyGroup::pow2(10), ToyGroup::scalar_from_u64(1024));
        assert_eq!(Secp256k1::scalar_to_u64(&Secp256k1::pow2(40)), Some(1 << 40));
        let k = Secp256k1::scalar_from_u64(0b1010);
        assert!(Secp256k1::scalar_bit(&k, 1));
        assert!(!Secp256k1::scalar_bit(&k, 2));
        assert!(Secp256k1::scalar_bit(&k, 3));
        assert_eq!(Secp256k1::scalar_to_u64(&-Secp256k1::one()), None);
    }

    #[test]
    fn group_kind_parses() {
        assert_eq!("toy".parse::<GroupKind>(), Ok(GroupKind::Toy));
        assert_eq!("secp256k1".parse::<GroupKind>(), Ok(GroupKind::Secp256k1));
        assert!("p256".parse::<GroupKind>().is_err());
        assert_eq!(ToyGroup::params().order_bits, 20);
    }
}
