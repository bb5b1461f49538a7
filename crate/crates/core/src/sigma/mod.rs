// SPDX-License-Identifier: Apache-2.0

//! Three-move sigma protocols and their Fiat-Shamir transforms.
//!
//! Each protocol implements [`SigmaProtocol`], which exposes the interactive
//! moves (`commit`, `respond`, `verify_with_challenge`) alongside the
//! special-HVZK simulator and the special-soundness extractor. The
//! non-interactive [`prove`] / [`verify`] pair derives the challenge from a
//! SHA-256 transcript over a per-protocol domain tag, the statement, and the
//! commitment, in that order.

mod ddh;
mod enc;
mod encdlog;

use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};

use crate::group::Group;
use crate::wire::{CodecError, Encode, Reader, Writer};

pub use ddh::{Ddh, DdhCommitment, DdhProof, DdhStatement};
pub use enc::{Enc, EncCommitment, EncProof, EncStatement};
pub use encdlog::{EncDlog, EncDlogCommitment, EncDlogProof, EncDlogStatement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SigmaError {
    #[error("transcripts share the same challenge")]
    DivByZero,
}

/// Hash transcript producing Fiat-Shamir challenges.
#[derive(Clone)]
pub struct Transcript {
    hasher: Sha256,
}

impl Transcript {
    pub fn new(domain_tag: &[u8]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(domain_tag);
        Transcript { hasher }
    }

    pub fn absorb(&mut self, bytes: &[u8]) -> &mut Self {
        self.hasher.update(bytes);
        self
    }

    pub fn absorb_point<G: Group>(&mut self, p: &G::Point) -> &mut Self {
        self.absorb(&G::encode_point(p))
    }

    pub fn absorb_scalar<G: Group>(&mut self, k: &G::Scalar) -> &mut Self {
        self.absorb(&G::encode_scalar(k))
    }

    pub fn digest(self) -> [u8; 32] {
        self.hasher.finalize().into()
    }

    /// Big-endian digest reduced mod `q`.
    pub fn challenge<G: Group>(self) -> G::Scalar {
        G::scalar_from_digest(&self.digest())
    }
}

/// An interactive proof of knowledge with special soundness and special HVZK.
pub trait SigmaProtocol<G: Group> {
    const DOMAIN: &'static [u8];

    type Statement;
    type Witness;
    type Commitment: Clone + PartialEq + std::fmt::Debug;
    type Nonce;
    type Response: Clone + PartialEq + std::fmt::Debug;

    /// First move. Does not check that the witness satisfies the relation.
    fn commit<R: RngCore + CryptoRng>(
        stmt: &Self::Statement,
        rng: &mut R,
    ) -> (Self::Commitment, Self::Nonce);

    fn respond(witness: &Self::Witness, nonce: &Self::Nonce, e: &G::Scalar) -> Self::Response;

    fn verify_with_challenge(
        stmt: &Self::Statement,
        commitment: &Self::Commitment,
        e: &G::Scalar,
        response: &Self::Response,
    ) -> bool;

    /// Accepting transcript for challenge `e` produced without a witness.
    fn simulate<R: RngCore + CryptoRng>(
        stmt: &Self::Statement,
        e: &G::Scalar,
        rng: &mut R,
    ) -> (Self::Commitment, Self::Response);

    /// Witness from two accepting transcripts sharing a commitment.
    fn extract(
        first: (&G::Scalar, &Self::Response),
        second: (&G::Scalar, &Self::Response),
    ) -> Result<Self::Witness, SigmaError>;

    fn absorb_statement(stmt: &Self::Statement, t: &mut Transcript);
    fn absorb_commitment(commitment: &Self::Commitment, t: &mut Transcript);

    fn write_commitment(c: &Self::Commitment, w: &mut Writer);
    fn read_commitment(r: &mut Reader<'_>) -> Result<Self::Commitment, CodecError>;
    fn write_response(z: &Self::Response, w: &mut Writer);
    fn read_response(r: &mut Reader<'_>) -> Result<Self::Response, CodecError>;

    fn challenge(stmt: &Self::Statement, commitment: &Self::Commitment) -> G::Scalar {
        let mut t = Transcript::new(Self::DOMAIN);
        Self::absorb_statement(stmt, &mut t);
        Self::absorb_commitment(commitment, &mut t);
        t.challenge::<G>()
    }
}

/// Non-interactive proof: commitment followed by response.
#[derive(Debug, Clone, PartialEq)]
pub struct Proof<G: Group, P: SigmaProtocol<G>> {
    pub commitment: P::Commitment,
    pub response: P::Response,
}

impl<G: Group, P: SigmaProtocol<G>> Encode<G> for Proof<G, P> {
    fn write(&self, w: &mut Writer) {
        P::write_commitment(&self.commitment, w);
        P::write_response(&self.response, w);
    }

    fn read(r: &mut Reader<'_>) -> Result<Self, CodecError> {
        Ok(Proof { commitment: P::read_commitment(r)?, response: P::read_response(r)? })
    }
}

pub fn prove<G: Group, P: SigmaProtocol<G>, R: RngCore + CryptoRng>(
    stmt: &P::Statement,
    witness: &P::Witness,
    rng: &mut R,
) -> Proof<G, P> {
    let (commitment, nonce) = P::commit(stmt, rng);
    let e = P::challenge(stmt, &commitment);
    let response = P::respond(witness, &nonce, &e);
    Proof { commitment, response }
}

pub fn verify<G: Group, P: SigmaProtocol<G>>(stmt: &P::Statement, proof: &Proof<G, P>) -> bool {
    let e = P::challenge(stmt, &proof.commitment);
    P::verify_with_challenge(stmt, &proof.commitment, &e, &proof.response)
}

/// `(a - b) / (c - d)`, failing when `c == d`.
pub(crate) fn div_diff<G: Group>(
    a: &G::Scalar,
    b: &G::Scalar,
    c: &G::Scalar,
    d: &G::Scalar,
) -> Result<G::Scalar, SigmaError> {
    let inv = G::invert(&(*c - *d)).map_err(|_| SigmaError::DivByZero)?;
    Ok((*a - *b) * inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Secp256k1;

    #[test]
    fn challenge_depends_on_every_byte() {
        let base = {
            let mut t = Transcript::new(b"JUGGLE/TEST/v1");
            t.absorb(&[1, 2, 3]);
            t.challenge::<Secp256k1>()
        };
        let again = {
            let mut t = Transcript::new(b"JUGGLE/TEST/v1");
            t.absorb(&[1, 2, 3]);
            t.challenge::<Secp256k1>()
        };
        assert_eq!(base, again);
        let flipped = {
            let mut t = Transcript::new(b"JUGGLE/TEST/v1");
            t.absorb(&[1, 2, 2]);
            t.challenge::<Secp256k1>()
        };
        assert_ne!(base, flipped);
        let retagged = {
            let mut t = Transcript::new(b"JUGGLE/TEST/v2");
            t.absorb(&[1, 2, 3]);
            t.challenge::<Secp256k1>()
        };
        assert_ne!(base, retagged);
    }

    #[test]
    fn challenge_is_big_endian_sha256_mod_q() {
        let mut t = Transcript::new(b"abc");
        t.absorb(b"");
        let digest = t.clone().digest();
        // SHA-256("abc")
        assert_eq!(
            hex::encode(digest),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(t.challenge::<Secp256k1>(), Secp256k1::scalar_from_digest(&digest));
    }
}
