// SPDX-License-Identifier: Apache-2.0

//! Proof that `(D, E)` is a well-formed ElGamal-in-the-exponent ciphertext
//! under `Y`: knowledge of `(x, r)` with `D = xG + rY` and `E = rG`.
//!
//! The prover sends `T = s1*G + s2*Y` and `A3 = s2*G` rather than the two
//! halves of `T` separately.

use std::marker::PhantomData;

use rand::{CryptoRng, RngCore};

use super::{div_diff, Proof, SigmaError, SigmaProtocol, Transcript};
use crate::group::Group;
use crate::wire::{CodecError, Reader, Writer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncStatement<G: Group> {
    pub y: G::Point,
    pub d: G::Point,
    pub e: G::Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncCommitment<G: Group> {
    pub t: G::Point,
    pub a3: G::Point,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Enc<G>(PhantomData<G>);

pub type EncProof<G> = Proof<G, Enc<G>>;

impl<G: Group> SigmaProtocol<G> for Enc<G> {
    const DOMAIN: &'static [u8] = b"JUGGLE/ENC/v1";

    type Statement = EncStatement<G>;
    /// `(x, r)`
    type Witness = (G::Scalar, G::Scalar);
    type Commitment = EncCommitment<G>;
    type Nonce = (G::Scalar, G::Scalar);
    /// `(z1, z2)`
    type Response = (G::Scalar, G::Scalar);

    fn commit<R: RngCore + CryptoRng>(
        stmt: &EncStatement<G>,
        rng: &mut R,
    ) -> (EncCommitment<G>, Self::Nonce) {
        let s1 = G::random_scalar(rng);
        let s2 = G::random_scalar(rng);
        let t = G::mul_base(&s1) + G::mul(&stmt.y, &s2);
        (EncCommitment { t, a3: G::mul_base(&s2) }, (s1, s2))
    }

    fn respond(
        (x, r): &Self::Witness,
        (s1, s2): &Self::Nonce,
        e: &G::Scalar,
    ) -> Self::Response {
        (*s1 + *e * *x, *s2 + *e * *r)
    }

    fn verify_with_challenge(
        stmt: &EncStatement<G>,
        c: &EncCommitment<G>,
        e: &G::Scalar,
        (z1, z2): &Self::Response,
    ) -> bool {
        G::mul_base(z1) + G::mul(&stmt.y, z2) == c.t + G::mul(&stmt.d, e)
            && G::mul_base(z2) == c.a3 + G::mul(&stmt.e, e)
    }

    fn simulate<R: RngCore + CryptoRng>(
        stmt: &EncStatement<G>,
        e: &G::Scalar,
        rng: &mut R,
    ) -> (EncCommitment<G>, Self::Response) {
        let z2 = G::random_scalar(rng);
        let a3 = G::mul_base(&z2) - G::mul(&stmt.e, e);
        let z1 = G::random_scalar(rng);
        let t = G::mul_base(&z1) + G::mul(&stmt.y, &z2) - G::mul(&stmt.d, e);
        (EncCommitment { t, a3 }, (z1, z2))
    }

    fn extract(
        (e1, (z1, z2)): (&G::Scalar, &Self::Response),
        (e2, (z1b, z2b)): (&G::Scalar, &Self::Response),
    ) -> Result<Self::Witness, SigmaError> {
        Ok((div_diff::<G>(z1, z1b, e1, e2)?, div_diff::<G>(z2, z2b, e1, e2)?))
    }

    fn absorb_statement(stmt: &EncStatement<G>, t: &mut Transcript) {
        t.absorb_point::<G>(&G::generator())
            .absorb_point::<G>(&stmt.y)
            .absorb_point::<G>(&stmt.d)
            .absorb_point::<G>(&stmt.e);
    }

    fn absorb_commitment(c: &EncCommitment<G>, t: &mut Transcript) {
        t.absorb_point::<G>(&c.t).absorb_point::<G>(&c.a3);
    }

    fn write_commitment(c: &EncCommitment<G>, w: &mut Writer) {
        w.point::<G>(&c.t).point::<G>(&c.a3);
    }

    fn read_commitment(r: &mut Reader<'_>) -> Result<EncCommitment<G>, CodecError> {
        Ok(EncCommitment { t: r.point::<G>()?, a3: r.point::<G>()? })
    }

    fn write_response((z1, z2): &Self::Response, w: &mut Writer) {
        w.scalar::<G>(z1).scalar::<G>(z2);
    }

    fn read_response(r: &mut Reader<'_>) -> Result<Self::Response, CodecError> {
        Ok((r.scalar::<G>()?, r.scalar::<G>()?))
    }
}
