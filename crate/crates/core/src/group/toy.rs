// SPDX-License-Identifier: Apache-2.0

//! Order-`q` subgroup of `Z_p^*` with `q = 2^20 - 3` and `p = 2094*q + 1`.
//!
//! Small enough that every discrete log is recoverable by baby-step
//! giant-step, which makes it the oracle group for protocol tests. Offers no
//! security whatsoever.

use std::ops::{Add, Mul, Neg, Sub};

use rand::{CryptoRng, Rng, RngCore};

use super::{Group, GroupError};

/// Subgroup order, the largest prime below `2^20`.
pub const TOY_ORDER: u64 = 1_048_573;
/// Field modulus, `2094 * TOY_ORDER + 1`.
pub const TOY_MODULUS: u64 = 2_195_711_863;
/// `2^((p-1)/q) mod p`, a generator of the order-`q` subgroup.
pub const TOY_GENERATOR: u64 = 1_702_017_198;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ToyScalar(u32);

impl ToyScalar {
    pub fn value(self) -> u64 {
        u64::from(self.0)
    }
}

impl Add for ToyScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ToyScalar(((self.value() + rhs.value()) % TOY_ORDER) as u32)
    }
}

impl Sub for ToyScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ToyScalar(((self.value() + TOY_ORDER - rhs.value()) % TOY_ORDER) as u32)
    }
}

impl Mul for ToyScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ToyScalar(mul_mod(self.value(), rhs.value(), TOY_ORDER) as u32)
    }
}

impl Neg for ToyScalar {
    type Output = Self;
    fn neg(self) -> Self {
        ToyScalar(((TOY_ORDER - self.value()) % TOY_ORDER) as u32)
    }
}

/// Element of the order-`q` subgroup, stored as its residue mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ToyPoint(u32);

impl ToyPoint {
    pub fn residue(self) -> u64 {
        u64::from(self.0)
    }
}

impl Add for ToyPoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ToyPoint(mul_mod(self.residue(), rhs.residue(), TOY_MODULUS) as u32)
    }
}

impl Neg for ToyPoint {
    type Output = Self;
    fn neg(self) -> Self {
        // inverse in the subgroup: a^(q-1)
        ToyPoint(pow_mod(self.residue(), TOY_ORDER - 1, TOY_MODULUS) as u32)
    }
}

impl Sub for ToyPoint {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ToyGroup;

impl Group for ToyGroup {
    type Scalar = ToyScalar;
    type Point = ToyPoint;

    const NAME: &'static str = "toy";
    const SCALAR_BYTES: usize = 3;
    const POINT_BYTES: usize = 4;
    const ORDER_BITS: usize = 20;

    fn order_be() -> Vec<u8> {
        TOY_ORDER.to_be_bytes()[8 - Self::SCALAR_BYTES..].to_vec()
    }

    fn generator() -> ToyPoint {
        ToyPoint(TOY_GENERATOR as u32)
    }

    fn identity() -> ToyPoint {
        ToyPoint(1)
    }

    fn mul(point: &ToyPoint, k: &ToyScalar) -> ToyPoint {
        ToyPoint(pow_mod(point.residue(), k.value(), TOY_MODULUS) as u32)
    }

    fn scalar_from_u64(v: u64) -> ToyScalar {
        ToyScalar((v % TOY_ORDER) as u32)
    }

    fn invert(k: &ToyScalar) -> Result<ToyScalar, GroupError> {
        if k.0 == 0 {
            return Err(GroupError::ZeroInverse);
        }
        Ok(ToyScalar(pow_mod(k.value(), TOY_ORDER - 2, TOY_ORDER) as u32))
    }

    fn random_scalar<R: RngCore + CryptoRng>(rng: &mut R) -> ToyScalar {
        ToyScalar(rng.gen_range(0..TOY_ORDER) as u32)
    }

    fn encode_scalar(k: &ToyScalar) -> Vec<u8> {
        k.value().to_be_bytes()[8 - Self::SCALAR_BYTES..].to_vec()
    }

    fn decode_scalar(bytes: &[u8]) -> Result<ToyScalar, GroupError> {
        if bytes.len() != Self::SCALAR_BYTES {
            return Err(GroupError::MalformedScalar);
        }
        let v = bytes.iter().fold(0u64, |acc, b| (acc << 8) | u64::from(*b));
        if v >= TOY_ORDER {
            return Err(GroupError::MalformedScalar);
        }
        Ok(ToyScalar(v as u32))
    }

    fn scalar_from_digest(digest: &[u8; 32]) -> ToyScalar {
        let v = digest
            .iter()
            .fold(0u64, |acc, b| ((acc << 8) | u64::from(*b)) % TOY_ORDER);
        ToyScalar(v as u32)
    }

    fn encode_point(p: &ToyPoint) -> Vec<u8> {
        p.0.to_be_bytes().to_vec()
    }

    fn decode_point(bytes: &[u8]) -> Result<ToyPoint, GroupError> {
        let arr: [u8; 4] = bytes.try_into().map_err(|_| GroupError::MalformedPoint)?;
        let v = u64::from(u32::from_be_bytes(arr));
        if v == 0 || v >= TOY_MODULUS || pow_mod(v, TOY_ORDER, TOY_MODULUS) != 1 {
            return Err(GroupError::MalformedPoint);
        }
        Ok(ToyPoint(v as u32))
    }
}
