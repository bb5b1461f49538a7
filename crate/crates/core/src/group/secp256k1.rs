// SPDX-License-Identifier: Apache-2.0

//! secp256k1 backed by the `k256` crate.
//!
//! Points encode as 33-byte SEC1 compressed form. The identity, which SEC1
//! encodes as a single zero byte, is widened to 33 zero bytes so every point
//! has the same length on the wire.

use k256::elliptic_curve::ff::PrimeField;
use k256::elliptic_curve::ops::{LinearCombination, MulByGenerator, Reduce};
use k256::elliptic_curve::sec1::{FromEncodedPoint, ToEncodedPoint};
use k256::elliptic_curve::group::Group as _;
use k256::{AffinePoint, EncodedPoint, FieldBytes, ProjectivePoint, Scalar, U256};
use rand::{CryptoRng, RngCore};

use super::{Group, GroupError};

const ORDER_HEX: &str = "fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Secp256k1;

impl Group for Secp256k1 {
    type Scalar = Scalar;
    type Point = ProjectivePoint;

    const NAME: &'static str = "secp256k1";
    const SCALAR_BYTES: usize = 32;
    const POINT_BYTES: usize = 33;
    const ORDER_BITS: usize = 256;

    fn order_be() -> Vec<u8> {
        hex::decode(ORDER_HEX).expect("constant")
    }

    fn generator() -> ProjectivePoint {
        ProjectivePoint::GENERATOR
    }

    fn identity() -> ProjectivePoint {
        ProjectivePoint::IDENTITY
    }

    fn mul(point: &ProjectivePoint, k: &Scalar) -> ProjectivePoint {
        point * k
    }

    fn mul_base(k: &Scalar) -> ProjectivePoint {
        ProjectivePoint::mul_by_generator(k)
    }

    fn mul2(p: &ProjectivePoint, a: &Scalar, r: &ProjectivePoint, b: &Scalar) -> ProjectivePoint {
        ProjectivePoint::lincomb(p, a, r, b)
    }

    fn scalar_from_u64(v: u64) -> Scalar {
        Scalar::from(v)
    }

    fn invert(k: &Scalar) -> Result<Scalar, GroupError> {
        Option::from(k.invert()).ok_or(GroupError::ZeroInverse)
    }

    fn random_scalar<R: RngCore + CryptoRng>(rng: &mut R) -> Scalar {
        loop {
            let mut bytes = FieldBytes::default();
            rng.fill_bytes(&mut bytes);
            if let Some(k) = Option::<Scalar>::from(Scalar::from_repr(bytes)) {
                return k;
            }
        }
    }

    fn encode_scalar(k: &Scalar) -> Vec<u8> {
        k.to_bytes().to_vec()
    }

    fn decode_scalar(bytes: &[u8]) -> Result<Scalar, GroupError> {
        if bytes.len() != Self::SCALAR_BYTES {
            return Err(GroupError::MalformedScalar);
        }
        let mut repr = FieldBytes::default();
        repr.copy_from_slice(bytes);
        Option::from(Scalar::from_repr(repr)).ok_or(GroupError::MalformedScalar)
    }

    fn scalar_from_digest(digest: &[u8; 32]) -> Scalar {
        let mut repr = FieldBytes::default();
        repr.copy_from_slice(digest);
        <Scalar as Reduce<U256>>::reduce_bytes(&repr)
    }

    fn encode_point(p: &ProjectivePoint) -> Vec<u8> {
        if bool::from(p.is_identity()) {
            return vec![0u8; Self::POINT_BYTES];
        }
        p.to_affine().to_encoded_point(true).as_bytes().to_vec()
    }

    fn decode_point(bytes: &[u8]) -> Result<ProjectivePoint, GroupError> {
        if bytes.len() != Self::POINT_BYTES {
            return Err(GroupError::MalformedPoint);
        }
        if bytes.iter().all(|b| *b == 0) {
            return Ok(ProjectivePoint::IDENTITY);
        }
        if bytes[0] != 0x02 && bytes[0] != 0x03 {
            return Err(GroupError::MalformedPoint);
        }
        let encoded = EncodedPoint::from_bytes(bytes).map_err(|_| GroupError::MalformedPoint)?;
        Option::<AffinePoint>::from(AffinePoint::from_encoded_point(&encoded))
            .map(ProjectivePoint::from)
            .ok_or(GroupError::MalformedPoint)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_generator() {
        let g = Secp256k1::encode_point(&Secp256k1::generator());
        assert_eq!(
            hex::encode(g),
            "0279be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798"
        );
    }

    #[test]
    fn rejects_off_curve_x() {
        // x = 5 has no square root on y^2 = x^3 + 7 mod p
        let mut bytes = [0u8; 33];
        bytes[0] = 0x02;
        bytes[32] = 5;
        assert_eq!(Secp256k1::decode_point(&bytes), Err(GroupError::MalformedPoint));
        // x >= p is non-canonical
        let mut big = [0xffu8; 33];
        big[0] = 0x02;
        assert_eq!(Secp256k1::decode_point(&big), Err(GroupError::MalformedPoint));
        let mut bad_prefix = Secp256k1::encode_point(&Secp256k1::generator());
        bad_prefix[0] = 0x04;
        assert_eq!(Secp256k1::decode_point(&bad_prefix), Err(GroupError::MalformedPoint));
    }

    #[test]
    fn digest_reduction_matches_big_endian_mod_q() {
        let mut digest = [0xffu8; 32];
        let reduced = Secp256k1::scalar_from_digest(&digest);
        // 2^256 - 1 - q
        let expected = hex::decode("000000000000000000000000000000014551231950b75fc4402da1732fc9bebe").unwrap();
        assert_eq!(Secp256k1::encode_scalar(&reduced), expected);
        digest = [0u8; 32];
        digest[31] = 9;
        assert_eq!(Secp256k1::scalar_from_digest(&digest), Scalar::from(9u64));
    }
}
