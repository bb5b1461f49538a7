// SPDX-License-Identifier: Apache-2.0

//! Chaum-Pedersen proof that `(G1, H1, G2, H2)` is a DDH tuple, i.e.
//! `H1 = x*G1` and `H2 = x*G2` for a common `x`.
//!
//! Response convention: `z = alpha - x*e`, verified as
//! `a1 = z*G1 + e*H1` and `a2 = z*G2 + e*H2`.

use std::marker::PhantomData;

use rand::{CryptoRng, RngCore};

use super::{div_diff, Proof, SigmaError, SigmaProtocol, Transcript};
use crate::group::Group;
use crate::wire::{CodecError, Reader, Writer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DdhStatement<G: Group> {
    pub g1: G::Point,
    pub h1: G::Point,
    pub g2: G::Point,
    pub h2: G::Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DdhCommitment<G: Group> {
    pub a1: G::Point,
    pub a2: G::Point,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Ddh<G>(PhantomData<G>);

pub type DdhProof<G> = Proof<G, Ddh<G>>;

impl<G: Group> SigmaProtocol<G> for Ddh<G> {
    const DOMAIN: &'static [u8] = b"JUGGLE/DDH/v1";

    type Statement = DdhStatement<G>;
    type Witness = G::Scalar;
    type Commitment = DdhCommitment<G>;
    type Nonce = G::Scalar;
    type Response = G::Scalar;

    fn commit<R: RngCore + CryptoRng>(
        stmt: &DdhStatement<G>,
        rng: &mut R,
    ) -> (DdhCommitment<G>, G::Scalar) {
        let alpha = G::random_scalar(rng);
        (DdhCommitment { a1: G::mul(&stmt.g1, &alpha), a2: G::mul(&stmt.g2, &alpha) }, alpha)
    }

    fn respond(x: &G::Scalar, alpha: &G::Scalar, e: &G::Scalar) -> G::Scalar {
        *alpha - *x * *e
    }

    fn verify_with_challenge(
        stmt: &DdhStatement<G>,
        c: &DdhCommitment<G>,
        e: &G::Scalar,
        z: &G::Scalar,
    ) -> bool {
        c.a1 == G::mul(&stmt.g1, z) + G::mul(&stmt.h1, e)
            && c.a2 == G::mul(&stmt.g2, z) + G::mul(&stmt.h2, e)
    }

    fn simulate<R: RngCore + CryptoRng>(
        stmt: &DdhStatement<G>,
        e: &G::Scalar,
        rng: &mut R,
    ) -> (DdhCommitment<G>, G::Scalar) {
        let z = G::random_scalar(rng);
        let a1 = G::mul(&stmt.g1, &z) + G::mul(&stmt.h1, e);
        let a2 = G::mul(&stmt.g2, &z) + G::mul(&stmt.h2, e);
        (DdhCommitment { a1, a2 }, z)
    }

    fn extract(
        (e1, z1): (&G::Scalar, &G::Scalar),
        (e2, z2): (&G::Scalar, &G::Scalar),
    ) -> Result<G::Scalar, SigmaError> {
        // z1 - z2 = x (e2 - e1)
        div_diff::<G>(z1, z2, e2, e1)
    }

    fn absorb_statement(stmt: &DdhStatement<G>, t: &mut Transcript) {
        t.absorb_point::<G>(&stmt.g1)
            .absorb_point::<G>(&stmt.h1)
            .absorb_point::<G>(&stmt.g2)
            .absorb_point::<G>(&stmt.h2);
    }

    fn absorb_commitment(c: &DdhCommitment<G>, t: &mut Transcript) {
        t.absorb_point::<G>(&c.a1).absorb_point::<G>(&c.a2);
    }

    fn write_commitment(c: &DdhCommitment<G>, w: &mut Writer) {
        w.point::<G>(&c.a1).point::<G>(&c.a2);
    }

    fn read_commitment(r: &mut Reader<'_>) -> Result<DdhCommitment<G>, CodecError> {
        Ok(DdhCommitment { a1: r.point::<G>()?, a2: r.point::<G>()? })
    }

    fn write_response(z: &G::Scalar, w: &mut Writer) {
        w.scalar::<G>(z);
    }

    fn read_response(r: &mut Reader<'_>) -> Result<G::Scalar, CodecError> {
        r.scalar::<G>()
    }
}
