// SPDX-License-Identifier: Apache-2.0

//! {n,n} additive key generation and Schnorr multi-signatures.
//!
//! Key generation is commit-then-reveal: every party publishes
//! `H(Q_i || blind)` before any `Q_i` is opened. Signing runs three rounds
//! (nonce commitment, nonce reveal, partial response) so no party can choose
//! its nonce after seeing the others. Partial responses are checked against
//! each slot's public share before aggregation.
//!
//! Parties are plain state machines; [`thresh_keygen`] and [`thresh_sign`]
//! drive a full set in process.

use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};

use crate::group::Group;
use crate::sigma::Transcript;
use crate::wire::{CodecError, Encode, Reader, Writer};

pub const SCHNORR_DOMAIN: &[u8] = b"JUGGLE/SCHNORR/v1";
const KEYGEN_COMMIT_DOMAIN: &[u8] = b"JUGGLE/KEYGEN/v1";
const NONCE_COMMIT_DOMAIN: &[u8] = b"JUGGLE/NONCE/v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThresholdError {
    #[error("need at least two parties, got {0}")]
    TooFewParties(usize),
    #[error("party {0} is not a participant")]
    UnknownParty(usize),
    #[error("party {0} opened a key that does not match its commitment")]
    CommitmentMismatch(usize),
    #[error("party {0} revealed a nonce that does not match its commitment")]
    NonceCommitMismatch(usize),
    #[error("party {0} sent an invalid partial signature")]
    PartialSignatureInvalid(usize),
    #[error("no message from party {0}")]
    MissingParty(usize),
    #[error("duplicate message from party {0}")]
    Duplicate(usize),
    #[error("learned share does not match the public share of party {0}")]
    ShareMismatch(usize),
}

/// Output of key generation for one party.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdKeyShare<G: Group> {
    pub party_id: usize,
    pub x_i: G::Scalar,
    pub q_i: G::Point,
    pub q: G::Point,
    /// Every party's local public key, indexed by party id.
    pub all_q: Vec<G::Point>,
}

impl<G: Group> ThresholdKeyShare<G> {
    pub fn n(&self) -> usize {
        self.all_q.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeygenReveal<G: Group> {
    pub q_i: G::Point,
    pub blind: [u8; 32],
}

/// Hash commitment to a keygen share, checkable by any observer.
pub fn keygen_commitment<G: Group>(id: usize, q_i: &G::Point, blind: &[u8; 32]) -> [u8; 32] {
    Sha256::new()
        .chain_update(KEYGEN_COMMIT_DOMAIN)
        .chain_update([id as u8])
        .chain_update(G::encode_point(q_i))
        .chain_update(blind)
        .finalize()
        .into()
}

fn put<T>(slots: &mut [Option<T>], from: usize, v: T) -> Result<(), ThresholdError> {
    let slot = slots.get_mut(from).ok_or(ThresholdError::UnknownParty(from))?;
    if slot.is_some() {
        return Err(ThresholdError::Duplicate(from));
    }
    *slot = Some(v);
    Ok(())
}

fn all<T: Clone>(slots: &[Option<T>]) -> Result<Vec<T>, ThresholdError> {
    slots
        .iter()
        .enumerate()
        .map(|(i, s)| s.clone().ok_or(ThresholdError::MissingParty(i)))
        .collect()
}

/// One party's key generation state.
#[derive(Debug, Clone)]
pub struct KeygenParty<G: Group> {
    id: usize,
    x_i: G::Scalar,
    own: KeygenReveal<G>,
    commits: Vec<Option<[u8; 32]>>,
    reveals: Vec<Option<G::Point>>,
}

impl<G: Group> KeygenParty<G> {
    /// Starts with a fresh uniform share; returns the commitment to broadcast.
    pub fn new<R: RngCore + CryptoRng>(
        id: usize,
        n: usize,
        rng: &mut R,
    ) -> Result<(Self, [u8; 32]), ThresholdError> {
        let x_i = G::random_scalar(rng);
        Self::with_secret(id, n, x_i, rng)
    }

    /// Starts with a caller-chosen share, e.g. one meeting a bit bound.
    pub fn with_secret<R: RngCore + CryptoRng>(
        id: usize,
        n: usize,
        x_i: G::Scalar,
        rng: &mut R,
    ) -> Result<(Self, [u8; 32]), ThresholdError> {
        if n < 2 {
            return Err(ThresholdError::TooFewParties(n));
        }
        if id >= n {
            return Err(ThresholdError::UnknownParty(id));
        }
        let mut blind = [0u8; 32];
        rng.fill_bytes(&mut blind);
        let own = KeygenReveal { q_i: G::mul_base(&x_i), blind };
        let commit = keygen_commitment::<G>(id, &own.q_i, &blind);
        let mut commits = vec![None; n];
        commits[id] = Some(commit);
        let mut reveals = vec![None; n];
        reveals[id] = Some(own.q_i);
        Ok((KeygenParty { id, x_i, own, commits, reveals }, commit))
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn receive_commit(&mut self, from: usize, commit: [u8; 32]) -> Result<(), ThresholdError> {
        put(&mut self.commits, from, commit)
    }

    /// Opens the local key; only after every commitment has arrived.
    pub fn reveal(&self) -> Result<KeygenReveal<G>, ThresholdError> {
        all(&self.commits)?;
        Ok(self.own)
    }

    pub fn receive_reveal(&mut self, from: usize, reveal: &KeygenReveal<G>) -> Result<(), ThresholdError> {
        let commit = self
            .commits
            .get(from)
            .ok_or(ThresholdError::UnknownParty(from))?
            .ok_or(ThresholdError::MissingParty(from))?;
        if keygen_commitment::<G>(from, &reveal.q_i, &reveal.blind) != commit {
            return Err(ThresholdError::CommitmentMismatch(from));
        }
        put(&mut self.reveals, from, reveal.q_i)
    }

    pub fn finish(&self) -> Result<ThresholdKeyShare<G>, ThresholdError> {
        let all_q = all(&self.reveals)?;
        let q = all_q.iter().fold(G::identity(), |acc, p| acc + *p);
        Ok(ThresholdKeyShare { party_id: self.id, x_i: self.x_i, q_i: self.own.q_i, q, all_q })
    }
}

/// Runs key generation for `n` honest parties, one generator each.
pub fn thresh_keygen<G: Group, R: RngCore + CryptoRng>(
    rngs: &mut [R],
) -> Result<Vec<ThresholdKeyShare<G>>, ThresholdError> {
    let n = rngs.len();
    let (mut parties, commits): (Vec<KeygenParty<G>>, Vec<[u8; 32]>) = rngs
        .iter_mut()
        .enumerate()
        .map(|(i, rng)| KeygenParty::new(i, n, rng))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .unzip();
    run_keygen(&mut parties, &commits)
}

pub(crate) fn run_keygen<G: Group>(
    parties: &mut [KeygenParty<G>],
    commits: &[[u8; 32]],
) -> Result<Vec<ThresholdKeyShare<G>>, ThresholdError> {
    for p in parties.iter_mut() {
        for (j, c) in commits.iter().enumerate() {
            if j != p.id {
                p.receive_commit(j, *c)?;
            }
        }
    }
    let reveals = parties.iter().map(|p| p.reveal()).collect::<Result<Vec<_>, _>>()?;
    for p in parties.iter_mut() {
        for (j, r) in reveals.iter().enumerate() {
            if j != p.id {
                p.receive_reveal(j, r)?;
            }
        }
    }
    parties.iter().map(|p| p.finish()).collect()
}

/// A plain Schnorr signature `(R, s)` with `sG = R + cQ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiSignature<G: Group> {
    pub r: G::Point,
    pub s: G::Scalar,
}

pub fn schnorr_challenge<G: Group>(r: &G::Point, q: &G::Point, msg: &[u8]) -> G::Scalar {
    let mut t = Transcript::new(SCHNORR_DOMAIN);
    t.absorb_point::<G>(r).absorb_point::<G>(q).absorb(msg);
    t.challenge::<G>()
}

pub fn schnorr_verify<G: Group>(q: &G::Point, msg: &[u8], sig: &MultiSignature<G>) -> bool {
    let c = schnorr_challenge::<G>(&sig.r, q, msg);
    G::mul_base(&sig.s) == sig.r + G::mul(q, &c)
}

impl<G: Group> Encode<G> for MultiSignature<G> {
    fn write(&self, w: &mut Writer) {
        w.point::<G>(&self.r).scalar::<G>(&self.s);
    }

    fn read(r: &mut Reader<'_>) -> Result<Self, CodecError> {
        Ok(MultiSignature { r: r.point::<G>()?, s: r.scalar::<G>()? })
    }
}

/// The secret for one signing slot plus the public key set it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigningShare<G: Group> {
    pub slot: usize,
    pub x: G::Scalar,
    pub q: G::Point,
    pub all_q: Vec<G::Point>,
}

impl<G: Group> From<&ThresholdKeyShare<G>> for SigningShare<G> {
    fn from(k: &ThresholdKeyShare<G>) -> Self {
        SigningShare { slot: k.party_id, x: k.x_i, q: k.q, all_q: k.all_q.clone() }
    }
}

/// Lets one party sign for its own slot and for a counterparty slot whose
/// secret it has learned. Fails if the learned secret does not open `Q_j`.
pub fn assemble_degenerate_share<G: Group>(
    own: &ThresholdKeyShare<G>,
    learned_slot: usize,
    learned_x: &G::Scalar,
) -> Result<[SigningShare<G>; 2], ThresholdError> {
    let q_j = own.all_q.get(learned_slot).ok_or(ThresholdError::UnknownParty(learned_slot))?;
    if learned_slot == own.party_id || G::mul_base(learned_x) != *q_j {
        return Err(ThresholdError::ShareMismatch(learned_slot));
    }
    let learned = SigningShare { slot: learned_slot, x: *learned_x, q: own.q, all_q: own.all_q.clone() };
    Ok([SigningShare::from(own), learned])
}

fn nonce_commitment<G: Group>(slot: usize, r_i: &G::Point, msg: &[u8]) -> [u8; 32] {
    Sha256::new()
        .chain_update(NONCE_COMMIT_DOMAIN)
        .chain_update([slot as u8])
        .chain_update(G::encode_point(r_i))
        .chain_update(msg)
        .finalize()
        .into()
}

/// Signing state for one slot.
#[derive(Debug, Clone)]
pub struct Signer<G: Group> {
    share: SigningShare<G>,
    msg: Vec<u8>,
    k: G::Scalar,
    r_i: G::Point,
    commits: Vec<Option<[u8; 32]>>,
    nonces: Vec<Option<G::Point>>,
    partials: Vec<Option<G::Scalar>>,
}

impl<G: Group> Signer<G> {
    /// Round one: draws a nonce and returns its commitment.
    pub fn new<R: RngCore + CryptoRng>(share: SigningShare<G>, msg: &[u8], rng: &mut R) -> (Self, [u8; 32]) {
        let n = share.all_q.len();
        let k = G::random_scalar(rng);
        let r_i = G::mul_base(&k);
        let commit = nonce_commitment::<G>(share.slot, &r_i, msg);
        let mut commits = vec![None; n];
        commits[share.slot] = Some(commit);
        let mut nonces = vec![None; n];
        nonces[share.slot] = Some(r_i);
        let signer = Signer { share, msg: msg.to_vec(), k, r_i, commits, nonces, partials: vec![None; n] };
        (signer, commit)
    }

    pub fn slot(&self) -> usize {
        self.share.slot
    }

    pub fn receive_commit(&mut self, from: usize, commit: [u8; 32]) -> Result<(), ThresholdError> {
        put(&mut self.commits, from, commit)
    }

    /// Round two: reveals `R_i` once every commitment is in.
    pub fn reveal(&self) -> Result<G::Point, ThresholdError> {
        all(&self.commits)?;
        Ok(self.r_i)
    }

    pub fn receive_nonce(&mut self, from: usize, r_j: &G::Point) -> Result<(), ThresholdError> {
        let commit = self
            .commits
            .get(from)
            .ok_or(ThresholdError::UnknownParty(from))?
            .ok_or(ThresholdError::MissingParty(from))?;
        if nonce_commitment::<G>(from, r_j, &self.msg) != commit {
            return Err(ThresholdError::NonceCommitMismatch(from));
        }
        put(&mut self.nonces, from, *r_j)
    }

    fn aggregate_nonce(&self) -> Result<(G::Point, G::Scalar), ThresholdError> {
        let r = all(&self.nonces)?.into_iter().fold(G::identity(), |acc, p| acc + p);
        Ok((r, schnorr_challenge::<G>(&r, &self.share.q, &self.msg)))
    }

    /// Round three: `s_i = k_i + c x_i`.
    pub fn respond(&mut self) -> Result<G::Scalar, ThresholdError> {
        let (_, c) = self.aggregate_nonce()?;
        let s_i = self.k + c * self.share.x;
        self.partials[self.share.slot] = Some(s_i);
        Ok(s_i)
    }

    pub fn receive_partial(&mut self, from: usize, s_j: &G::Scalar) -> Result<(), ThresholdError> {
        let (_, c) = self.aggregate_nonce()?;
        let r_j = self.nonces[from].ok_or(ThresholdError::MissingParty(from))?;
        if G::mul_base(s_j) != r_j + G::mul(&self.share.all_q[from], &c) {
            return Err(ThresholdError::PartialSignatureInvalid(from));
        }
        put(&mut self.partials, from, *s_j)
    }

    pub fn finish(&self) -> Result<MultiSignature<G>, ThresholdError> {
        let (r, _) = self.aggregate_nonce()?;
        let s = all(&self.partials)?.into_iter().fold(G::zero(), |acc, s| acc + s);
        Ok(MultiSignature { r, s })
    }
}

/// Runs all three signing rounds for a complete set of slots.
pub fn thresh_sign<G: Group, R: RngCore + CryptoRng>(
    shares: &[SigningShare<G>],
    msg: &[u8],
    rng: &mut R,
) -> Result<MultiSignature<G>, ThresholdError> {
    let n = shares.first().map(|s| s.all_q.len()).ok_or(ThresholdError::MissingParty(0))?;
    for slot in 0..n {
        if !shares.iter().any(|s| s.slot == slot) {
            return Err(ThresholdError::MissingParty(slot));
        }
    }
    let (mut signers, commits): (Vec<Signer<G>>, Vec<[u8; 32]>) =
        shares.iter().map(|s| Signer::new(s.clone(), msg, rng)).unzip();
    exchange(&mut signers, &commits, |s, from, c| s.receive_commit(from, *c))?;
    let nonces = signers.iter().map(|s| s.reveal()).collect::<Result<Vec<_>, _>>()?;
    exchange(&mut signers, &nonces, |s, from, r| s.receive_nonce(from, r))?;
    let partials = signers.iter_mut().map(|s| s.respond()).collect::<Result<Vec<_>, _>>()?;
    exchange(&mut signers, &partials, |s, from, z| s.receive_partial(from, z))?;
    signers[0].finish()
}

fn exchange<G: Group, T>(
    signers: &mut [Signer<G>],
    msgs: &[T],
    mut deliver: impl FnMut(&mut Signer<G>, usize, &T) -> Result<(), ThresholdError>,
) -> Result<(), ThresholdError> {
    let slots: Vec<usize> = signers.iter().map(|s| s.slot()).collect();
    for s in signers.iter_mut() {
        for (from, m) in slots.iter().zip(msgs) {
            if *from != s.slot() {
                deliver(s, *from, m)?;
            }
        }
    }
    Ok(())
}
