// SPDX-License-Identifier: Apache-2.0

//! Proof that `(D, E)` encrypts the discrete log of `Q` under `Y`:
//! knowledge of `(x, r)` with `Q = xG`, `D = xG + rY`, `E = rG`.
//!
//! Combines a Schnorr proof for `Q` with a DDH proof for
//! `(G, E, Y, D - Q)` under one challenge.

use std::marker::PhantomData;

use rand::{CryptoRng, RngCore};

use super::{div_diff, Proof, SigmaError, SigmaProtocol, Transcript};
use crate::group::Group;
use crate::wire::{CodecError, Reader, Writer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncDlogStatement<G: Group> {
    pub y: G::Point,
    pub q: G::Point,
    pub d: G::Point,
    pub e: G::Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncDlogCommitment<G: Group> {
    pub a1: G::Point,
    pub a2: G::Point,
    pub a3: G::Point,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EncDlog<G>(PhantomData<G>);

pub type EncDlogProof<G> = Proof<G, EncDlog<G>>;

impl<G: Group> SigmaProtocol<G> for EncDlog<G> {
    const DOMAIN: &'static [u8] = b"JUGGLE/ENCDLOG/v1";

    type Statement = EncDlogStatement<G>;
    type Witness = (G::Scalar, G::Scalar);
    type Commitment = EncDlogCommitment<G>;
    type Nonce = (G::Scalar, G::Scalar);
    type Response = (G::Scalar, G::Scalar);

    fn commit<R: RngCore + CryptoRng>(
        stmt: &EncDlogStatement<G>,
        rng: &mut R,
    ) -> (EncDlogCommitment<G>, Self::Nonce) {
        let s1 = G::random_scalar(rng);
        let s2 = G::random_scalar(rng);
        let c = EncDlogCommitment {
            a1: G::mul_base(&s1),
            a2: G::mul(&stmt.y, &s2),
            a3: G::mul_base(&s2),
        };
        (c, (s1, s2))
    }

    fn respond(
        (x, r): &Self::Witness,
        (s1, s2): &Self::Nonce,
        e: &G::Scalar,
    ) -> Self::Response {
        (*s1 + *e * *x, *s2 + *e * *r)
    }

    fn verify_with_challenge(
        stmt: &EncDlogStatement<G>,
        c: &EncDlogCommitment<G>,
        e: &G::Scalar,
        (z1, z2): &Self::Response,
    ) -> bool {
        G::mul_base(z1) == c.a1 + G::mul(&stmt.q, e)
            && G::mul_base(z2) == c.a3 + G::mul(&stmt.e, e)
            && G::mul(&stmt.y, z2) == c.a2 + G::mul(&(stmt.d - stmt.q), e)
    }

    fn simulate<R: RngCore + CryptoRng>(
        stmt: &EncDlogStatement<G>,
        e: &G::Scalar,
        rng: &mut R,
    ) -> (EncDlogCommitment<G>, Self::Response) {
        let z2 = G::random_scalar(rng);
        let a3 = G::mul_base(&z2) - G::mul(&stmt.e, e);
        let a2 = G::mul(&stmt.y, &z2) - G::mul(&(stmt.d - stmt.q), e);
        let z1 = G::random_scalar(rng);
        let a1 = G::mul_base(&z1) - G::mul(&stmt.q, e);
        (EncDlogCommitment { a1, a2, a3 }, (z1, z2))
    }

    fn extract(
        (e1, (z1, z2)): (&G::Scalar, &Self::Response),
        (e2, (z1b, z2b)): (&G::Scalar, &Self::Response),
    ) -> Result<Self::Witness, SigmaError> {
        Ok((div_diff::<G>(z1, z1b, e1, e2)?, div_diff::<G>(z2, z2b, e1, e2)?))
    }

    fn absorb_statement(stmt: &EncDlogStatement<G>, t: &mut Transcript) {
        t.absorb_point::<G>(&G::generator())
            .absorb_point::<G>(&stmt.y)
            .absorb_point::<G>(&stmt.q)
            .absorb_point::<G>(&stmt.d)
            .absorb_point::<G>(&stmt.e);
    }

    fn absorb_commitment(c: &EncDlogCommitment<G>, t: &mut Transcript) {
        t.absorb_point::<G>(&c.a1).absorb_point::<G>(&c.a2).absorb_point::<G>(&c.a3);
    }

    fn write_commitment(c: &EncDlogCommitment<G>, w: &mut Writer) {
        w.point::<G>(&c.a1).point::<G>(&c.a2).point::<G>(&c.a3);
    }

    fn read_commitment(r: &mut Reader<'_>) -> Result<EncDlogCommitment<G>, CodecError> {
        Ok(EncDlogCommitment { a1: r.point::<G>()?, a2: r.point::<G>()?, a3: r.point::<G>()? })
    }

    fn write_response((z1, z2): &Self::Response, w: &mut Writer) {
        w.scalar::<G>(z1).scalar::<G>(z2);
    }

    fn read_response(r: &mut Reader<'_>) -> Result<Self::Response, CodecError> {
        Ok((r.scalar::<G>()?, r.scalar::<G>()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elgamal::{encrypt, EncKeyPair};
    use crate::group::{Secp256k1, ToyGroup};
    use crate::sigma::{prove, verify};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn honest_proof_verifies() {
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let kp = EncKeyPair::<Secp256k1>::generate(&mut rng);
        let x = Secp256k1::random_scalar(&mut rng);
        let c = encrypt::<Secp256k1, _>(&x, &kp.public, &mut rng);
        let stmt = EncDlogStatement::<Secp256k1> { y: kp.public, q: Secp256k1::mul_base(&x), d: c.ct.d, e: c.ct.e };
        let proof = prove::<_, EncDlog<_>, _>(&stmt, &(x, c.randomness), &mut rng);
        assert!(verify(&stmt, &proof));
    }

    #[test]
    fn wrong_plaintext_rejected() {
        let mut rng = ChaCha20Rng::seed_from_u64(32);
        for _ in 0..200 {
            let kp = EncKeyPair::<ToyGroup>::generate(&mut rng);
            let x = ToyGroup::random_scalar(&mut rng);
            let other = ToyGroup::random_scalar(&mut rng);
            if other == x {
                continue;
            }
            let c = encrypt::<ToyGroup, _>(&other, &kp.public, &mut rng);
            let stmt = EncDlogStatement::<ToyGroup> { y: kp.public, q: ToyGroup::mul_base(&x), d: c.ct.d, e: c.ct.e };
            // the prover claims x while the ciphertext holds `other`
            let proof = prove::<_, EncDlog<_>, _>(&stmt, &(x, c.randomness), &mut rng);
            assert!(!verify(&stmt, &proof));
        }
    }

    #[test]
    fn simulator_verifies() {
        let mut rng = ChaCha20Rng::seed_from_u64(33);
        let kp = EncKeyPair::<Secp256k1>::generate(&mut rng);
        let stmt = EncDlogStatement::<Secp256k1> {
            y: kp.public,
            q: Secp256k1::mul_base(&Secp256k1::random_scalar(&mut rng)),
            d: Secp256k1::mul_base(&Secp256k1::random_scalar(&mut rng)),
            e: Secp256k1::mul_base(&Secp256k1::random_scalar(&mut rng)),
        };
        let e = Secp256k1::random_scalar(&mut rng);
        let (c, z) = EncDlog::simulate(&stmt, &e, &mut rng);
        assert!(EncDlog::verify_with_challenge(&stmt, &c, &e, &z));
    }
}
