// SPDX-License-Identifier: Apache-2.0

//! Three-party cross-chain swap.
//!
//! Owners `P1` (trading `c_1` on chain `b_1`) and `P2` (trading `c_2` on
//! `b_2`) and the provider `S` run:
//!
//! 1. exchange of juggling encryption keys `Y_1`, `Y_2`;
//! 2. {3,3} key generation for address `a_1` on `b_1`;
//! 3. {3,3} key generation for address `a_2` on `b_2`;
//! 4. deposits `A_in -> a_i`, co-signed with `S` and submitted as a pair;
//! 5. two interleaved juggling sessions: `P1` releases its share of `a_1`
//!    to `P2`, `P2` releases its share of `a_2` to `P1`, alternating with
//!    `P1` first in every round while `S` verifies every proof;
//! 6. each owner signs for two slots (its own share plus the learned one)
//!    and, with `S`, withdraws the counterparty's deposit.
//!
//! [`SwapHarness`] runs all three roles in one thread. Roles own their
//! secrets; every message is encoded, appended to the transcript and decoded
//! again by its recipients. All randomness comes from per-role generators
//! seeded from `SHA-256("JUGGLE/SEED/v1" || seed || role)`.

pub mod audit;
pub mod transcript;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::elgamal::EncKeyPair;
use crate::group::{Group, GroupKind, Secp256k1, ToyGroup};
use crate::juggling::attack::{biased_setup, Bias};
use crate::juggling::{
    encryptor_setup, Decryptor, EncryptorState, JugglingError, SegmentRelease, SetupBundle, Verifier,
};
use crate::ledger::{atomic_pair_submit, Address, Chain, Transaction, TxBody};
use crate::segmentation::{random_secret, SegmentationParams};
use crate::threshold::{
    assemble_degenerate_share, run_keygen, KeygenParty, MultiSignature, Signer, SigningShare, ThresholdError,
    ThresholdKeyShare,
};
use crate::wire::Encode;

pub use audit::{audit_transcript, AuditError, Verdict};
pub use transcript::{ConfigMsg, Entry, Role, Transcript, TranscriptError};
use transcript::*;

const SEED_DOMAIN: &[u8] = b"JUGGLE/SEED/v1";
pub const MAX_SWAP_SEGMENT_BITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    P1,
    P2,
}

impl Party {
    pub const BOTH: [Party; 2] = [Party::P1, Party::P2];

    pub fn index(self) -> usize {
        match self {
            Party::P1 => 0,
            Party::P2 => 1,
        }
    }

    pub fn other(self) -> Party {
        match self {
            Party::P1 => Party::P2,
            Party::P2 => Party::P1,
        }
    }

    pub fn role(self) -> Role {
        match self {
            Party::P1 => Role::P1,
            Party::P2 => Role::P2,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.role().as_str())
    }
}

impl FromStr for Party {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "P1" | "p1" => Ok(Party::P1),
            "P2" | "p2" => Ok(Party::P2),
            _ => Err(format!("unknown party {s:?}")),
        }
    }
}

/// Scripted misbehavior injected into one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Adversary {
    #[default]
    None,
    /// `party` goes silent instead of sending its release `k`; `k = 0`
    /// withholds the setup bundle.
    AbortAtSegment { k: usize, party: Party },
    /// `party` sends release `k` with a broken correct-encryption proof.
    CorruptProof { k: usize, party: Party },
    /// `party` encrypts shifted limbs whose weighted sum is still its share.
    BiasedSegments(Party),
    /// The provider submits only the first deposit.
    ProviderWithhold,
    /// The provider co-signs only `P1`'s withdrawal.
    ProviderPartialSign,
}

impl fmt::Display for Adversary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Adversary::None => f.write_str("none"),
            Adversary::AbortAtSegment { k, party } => write!(f, "abort-at={k}:{party}"),
            Adversary::CorruptProof { k, party } => write!(f, "corrupt-proof={k}:{party}"),
            Adversary::BiasedSegments(p) => write!(f, "biased-segments={p}"),
            Adversary::ProviderWithhold => f.write_str("provider-withhold"),
            Adversary::ProviderPartialSign => f.write_str("provider-partial-sign"),
        }
    }
}

impl FromStr for Adversary {
    type Err = String;

    /// `none`, `abort-at=K:P`, `corrupt-proof=K:P`, `biased-segments=P`,
    /// `provider-withhold`, `provider-partial-sign`.
    fn from_str(s: &str) -> Result<Self, String> {
        let k_party = |v: &str| -> Result<(usize, Party), String> {
            let (k, p) = v.split_once(':').ok_or_else(|| format!("expected K:PARTY, got {v:?}"))?;
            Ok((k.parse().map_err(|_| format!("bad segment index {k:?}"))?, p.parse()?))
        };
        match s.split_once('=') {
            None if s == "none" => Ok(Adversary::None),
            None if s == "provider-withhold" => Ok(Adversary::ProviderWithhold),
            None if s == "provider-partial-sign" => Ok(Adversary::ProviderPartialSign),
            Some(("abort-at", v)) => k_party(v).map(|(k, party)| Adversary::AbortAtSegment { k, party }),
            Some(("corrupt-proof", v)) => k_party(v).map(|(k, party)| Adversary::CorruptProof { k, party }),
            Some(("biased-segments", p)) => Ok(Adversary::BiasedSegments(p.parse()?)),
            _ => Err(format!("unknown adversary {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapConfig {
    pub group: GroupKind,
    pub segment_bits: u32,
    /// `c_1`, `c_2`.
    pub amounts: [u64; 2],
    /// Genesis balances of `A_in` for each owner.
    pub initial: [u64; 2],
    pub chain_ids: [u32; 2],
    pub adversary: Adversary,
    pub seed: u64,
    /// Generate `a_1`, `a_2` between the owners only, without the provider.
    pub two_party_swap_keys: bool,
    /// After an abort, brute force missing limbs when at most this many
    /// unknown bits remain. Zero disables recovery.
    pub recovery_bits: u32,
}

impl Default for SwapConfig {
    fn default() -> Self {
        SwapConfig {
            group: GroupKind::Toy,
            segment_bits: 4,
            amounts: [40, 70],
            initial: [100, 100],
            chain_ids: [1, 2],
            adversary: Adversary::None,
            seed: 1,
            two_party_swap_keys: false,
            recovery_bits: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SwapError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no refund path: deposits stay locked after an abort")]
    NoRefund,
}

impl SwapConfig {
    pub fn validate(&self) -> Result<SegmentationParams, SwapError> {
        let l = self.segment_bits;
        if !(crate::segmentation::MIN_SEGMENT_BITS..=MAX_SWAP_SEGMENT_BITS).contains(&l) {
            return Err(SwapError::Config(format!("segment bits {l} outside [2, {MAX_SWAP_SEGMENT_BITS}]")));
        }
        for i in 0..2 {
            if self.initial[i] < self.amounts[i] {
                return Err(SwapError::Config(format!("P{} holds {} < amount {}", i + 1, self.initial[i], self.amounts[i])));
            }
        }
        if self.chain_ids[0] == self.chain_ids[1] {
            return Err(SwapError::Config("chains need distinct ids".into()));
        }
        let params = SegmentationParams::new(l, self.group.order_bits()).map_err(|e| SwapError::Config(e.to_string()))?;
        match self.adversary {
            Adversary::AbortAtSegment { k, .. } | Adversary::CorruptProof { k, .. } if k > params.m => {
                Err(SwapError::Config(format!("segment {k} beyond m = {}", params.m)))
            }
            Adversary::CorruptProof { k: 0, .. } => Err(SwapError::Config("releases are numbered from 1".into())),
            _ => Ok(params),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abort {
    /// Who stopped the protocol.
    pub by: Role,
    /// Who `by` holds responsible, if anyone.
    pub blamed: Option<Role>,
    pub reason: String,
}

impl fmt::Display for Abort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.blamed {
            Some(b) => write!(f, "{} aborted, blaming {b}: {}", self.by, self.reason),
            None => write!(f, "{} aborted: {}", self.by, self.reason),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    KeyExchange,
    Keygen1,
    Keygen2,
    Deposit,
    /// `Juggle(0)` exchanges setup bundles; `Juggle(k)` exchanges releases `k`.
    Juggle(usize),
    Withdraw,
    Done,
    Aborted(Abort),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::KeyExchange => f.write_str("key-exchange"),
            Step::Keygen1 => f.write_str("keygen-1"),
            Step::Keygen2 => f.write_str("keygen-2"),
            Step::Deposit => f.write_str("deposit"),
            Step::Juggle(k) => write!(f, "juggle({k})"),
            Step::Withdraw => f.write_str("withdraw"),
            Step::Done => f.write_str("done"),
            Step::Aborted(a) => write!(f, "aborted ({a})"),
        }
    }
}

/// How far each owner got at termination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FairnessReport {
    /// Segments of the counterparty's share each owner decrypted.
    pub decrypted: [usize; 2],
    pub advantage: usize,
    /// Whether each owner ended up with the full counterparty share.
    pub recovered: [bool; 2],
    pub withdrawn: [bool; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Balances {
    /// `A_in` of P1 on b_1 and of P2 on b_2.
    pub inputs: [u64; 2],
    /// `A_out` of P1 on b_2 and of P2 on b_1.
    pub outputs: [u64; 2],
    /// `a_1` on b_1 and `a_2` on b_2.
    pub swap: [u64; 2],
    /// Provider address on b_1 and b_2.
    pub provider: [u64; 2],
}

impl Balances {
    /// Tokens an owner controls across both chains.
    pub fn holdings(&self, p: Party) -> u64 {
        self.inputs[p.index()] + self.outputs[p.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub chain_id: u32,
    pub tx_count: usize,
    pub supply: u128,
    pub state_dump: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapOutcome {
    pub step: Step,
    pub report: FairnessReport,
    pub balances: Balances,
    pub chains: [ChainReport; 2],
    /// Owners the provider caught cheating.
    pub revoked: Vec<Party>,
    pub transcript: Transcript,
}

impl SwapOutcome {
    pub fn completed(&self) -> bool {
        self.step == Step::Done
    }
}

pub fn sub_seed(seed: u64, role: Role) -> [u8; 32] {
    Sha256::new()
        .chain_update(SEED_DOMAIN)
        .chain_update(seed.to_be_bytes())
        .chain_update(role.as_str())
        .finalize()
        .into()
}

pub fn run_swap(cfg: &SwapConfig) -> Result<SwapOutcome, SwapError> {
    match cfg.group {
        GroupKind::Toy => Ok(SwapHarness::<ToyGroup>::new(cfg)?.run()),
        GroupKind::Secp256k1 => Ok(SwapHarness::<Secp256k1>::new(cfg)?.run()),
    }
}

/// One row of an abort sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub party: Party,
    pub k: usize,
    pub report: FairnessReport,
    pub step: Step,
}

/// Runs `base` once per abort point `k` in `0..=m` for each owner.
pub fn abort_sweep(base: &SwapConfig) -> Result<Vec<SweepRow>, SwapError> {
    let m = base.validate()?.m;
    let mut rows = Vec::with_capacity(2 * (m + 1));
    for party in Party::BOTH {
        for k in 0..=m {
            let cfg = SwapConfig { adversary: Adversary::AbortAtSegment { k, party }, ..base.clone() };
            let out = run_swap(&cfg)?;
            rows.push(SweepRow { party, k, report: out.report, step: out.step });
        }
    }
    Ok(rows)
}

struct Owner<G: Group> {
    rng: ChaCha20Rng,
    enc: EncKeyPair<G>,
    peer_y: Option<G::Point>,
    wallet_in: ThresholdKeyShare<G>,
    wallet_out: G::Point,
    /// Shares of `a_1` and `a_2`.
    swap: [Option<ThresholdKeyShare<G>>; 2],
    encryptor: Option<EncryptorState<G>>,
    decryptor: Option<Decryptor<G>>,
    learned: Option<G::Scalar>,
    withdrawn: bool,
}

struct Provider<G: Group> {
    rng: ChaCha20Rng,
    address: Address,
    wallets_in: [ThresholdKeyShare<G>; 2],
    ys: [Option<G::Point>; 2],
    swap: [Option<ThresholdKeyShare<G>>; 2],
    /// Verifier of each owner's outgoing juggling session.
    verifiers: [Option<Verifier<G>>; 2],
    revoked: [bool; 2],
}

fn wallet_keygen<G: Group>(
    owner_rng: &mut ChaCha20Rng,
    provider_rng: &mut ChaCha20Rng,
) -> (ThresholdKeyShare<G>, ThresholdKeyShare<G>) {
    let (a, ca) = KeygenParty::<G>::new(0, 2, owner_rng).expect("two parties");
    let (b, cb) = KeygenParty::<G>::new(1, 2, provider_rng).expect("two parties");
    let mut shares = run_keygen(&mut [a, b], &[ca, cb]).expect("honest wallet keygen");
    let s = shares.pop().expect("two shares");
    (shares.pop().expect("two shares"), s)
}

fn rng_for<'a, G: Group>(
    owners: &'a mut [Owner<G>; 2],
    provider: &'a mut Provider<G>,
    role: Role,
) -> &'a mut ChaCha20Rng {
    match role {
        Role::P1 => &mut owners[0].rng,
        Role::P2 => &mut owners[1].rng,
        Role::Provider => &mut provider.rng,
        other => unreachable!("{other} holds no secrets"),
    }
}

/// Deterministic single-threaded driver for one swap over group `G`.
pub struct SwapHarness<G: Group> {
    cfg: SwapConfig,
    params: SegmentationParams,
    step: Step,
    net: Transcript,
    owners: [Owner<G>; 2],
    provider: Provider<G>,
    chains: [Chain<G>; 2],
    swap_addr: [Option<Address>; 2],
}

impl<G: Group> SwapHarness<G> {
    pub fn new(cfg: &SwapConfig) -> Result<Self, SwapError> {
        if cfg.group.name() != G::NAME {
            return Err(SwapError::Config(format!("harness for {} run with {}", G::NAME, cfg.group)));
        }
        let params = cfg.validate()?;
        let mut prng = ChaCha20Rng::from_seed(sub_seed(cfg.seed, Role::Provider));
        let mut s_in = Vec::new();
        let owners = Party::BOTH.map(|p| {
            let mut rng = ChaCha20Rng::from_seed(sub_seed(cfg.seed, p.role()));
            let enc = EncKeyPair::generate(&mut rng);
            // the input wallet is co-held with S; that keygen is off the record
            let (wallet_in, s) = wallet_keygen::<G>(&mut rng, &mut prng);
            s_in.push(s);
            let wallet_out = G::mul_base(&G::random_scalar(&mut rng));
            Owner {
                rng,
                enc,
                peer_y: None,
                wallet_in,
                wallet_out,
                swap: [None, None],
                encryptor: None,
                decryptor: None,
                learned: None,
                withdrawn: false,
            }
        });
        let provider_key = G::random_scalar(&mut prng);
        let s_p2 = s_in.pop().expect("two wallets");
        let s_p1 = s_in.pop().expect("two wallets");
        let provider = Provider {
            rng: prng,
            address: Address::from_pubkey::<G>(&G::mul_base(&provider_key)),
            wallets_in: [s_p1, s_p2],
            ys: [None, None],
            swap: [None, None],
            verifiers: [None, None],
            revoked: [false, false],
        };
        let inputs = owners.each_ref().map(|o| Address::from_pubkey::<G>(&o.wallet_in.q));
        let outputs = owners.each_ref().map(|o| Address::from_pubkey::<G>(&o.wallet_out));
        let chains = [0, 1].map(|i| Chain::new(cfg.chain_ids[i], &[(inputs[i], cfg.initial[i])]));
        let mut net = Transcript::default();
        let config = ConfigMsg {
            group: cfg.group,
            segment_bits: cfg.segment_bits,
            amounts: cfg.amounts,
            initial: cfg.initial,
            chain_ids: cfg.chain_ids,
            swap_parties: if cfg.two_party_swap_keys { 2 } else { 3 },
            inputs,
            outputs,
            provider: provider.address,
        };
        net.push(Role::Harness, KIND_CONFIG, config.encode());
        Ok(SwapHarness {
            cfg: cfg.clone(),
            params,
            step: Step::KeyExchange,
            net,
            owners,
            provider,
            chains,
            swap_addr: [None, None],
        })
    }

    pub fn step_state(&self) -> &Step {
        &self.step
    }

    pub fn params(&self) -> &SegmentationParams {
        &self.params
    }

    pub fn transcript(&self) -> &Transcript {
        &self.net
    }

    pub fn chain(&self, i: usize) -> &Chain<G> {
        &self.chains[i]
    }

    /// Releases `party` has sent so far.
    pub fn releases_sent(&self, party: Party) -> usize {
        self.net.count(party.role(), KIND_RELEASE)
    }

    pub fn run(mut self) -> SwapOutcome {
        while !matches!(self.step, Step::Done | Step::Aborted(_)) {
            self.step();
        }
        self.outcome()
    }

    /// Advances by one protocol step. A no-op once finished.
    pub fn step(&mut self) -> &Step {
        let result = match self.step.clone() {
            Step::KeyExchange => {
                self.key_exchange();
                Ok(Step::Keygen1)
            }
            Step::Keygen1 => self.swap_keygen(0).map(|_| Step::Keygen2),
            Step::Keygen2 => self.swap_keygen(1).map(|_| Step::Deposit),
            Step::Deposit => self.deposit().map(|_| Step::Juggle(0)),
            Step::Juggle(0) => self.exchange_setups().map(|_| Step::Juggle(1)),
            Step::Juggle(k) => self
                .exchange_releases(k)
                .map(|_| if k == self.params.m { Step::Withdraw } else { Step::Juggle(k + 1) }),
            Step::Withdraw => self.withdraw_all().map(|_| Step::Done),
            done @ (Step::Done | Step::Aborted(_)) => Ok(done),
        };
        self.step = match result {
            Ok(next) => next,
            Err(abort) => {
                self.net.push(abort.by, KIND_ABORT, abort.reason.clone().into_bytes());
                if matches!(self.step, Step::Juggle(_)) {
                    // whoever already holds a full share still withdraws
                    let _ = self.withdraw_all();
                }
                Step::Aborted(abort)
            }
        };
        &self.step
    }

    fn key_exchange(&mut self) {
        for p in Party::BOTH {
            let bytes = self.net.push(p.role(), KIND_ENC_KEY, encode_point::<G>(&self.owners[p.index()].enc.public)).to_vec();
            let y = decode_point::<G>(&bytes).expect("own encoding");
            self.owners[p.other().index()].peer_y = Some(y);
            self.provider.ys[p.index()] = Some(y);
        }
    }

    fn swap_roles(&self) -> Vec<Role> {
        if self.cfg.two_party_swap_keys {
            vec![Role::P1, Role::P2]
        } else {
            vec![Role::P1, Role::P2, Role::Provider]
        }
    }

    /// Logged {n,n} key generation for `a_{idx+1}`.
    fn swap_keygen(&mut self, idx: usize) -> Result<(), Abort> {
        let session = [SESSION_KEY_A1, SESSION_KEY_A2][idx];
        let roles = self.swap_roles();
        let n = roles.len();
        let mut parties = Vec::new();
        let mut commits = Vec::new();
        for (slot, role) in roles.iter().enumerate() {
            let rng = rng_for(&mut self.owners, &mut self.provider, *role);
            // owners' shares get juggled, so they meet the top-bit restriction
            let x = if *role == Role::Provider { G::random_scalar(rng) } else { random_secret::<G, _>(&self.params, rng) };
            let (party, commit) = KeygenParty::<G>::with_secret(slot, n, x, rng).expect("valid slot");
            let msg = CommitMsg { session, slot: slot as u8, commit };
            let bytes = self.net.push(*role, KIND_KEYGEN_COMMIT, msg.encode());
            commits.push(CommitMsg::decode(bytes).expect("own encoding").commit);
            parties.push(party);
        }
        for p in parties.iter_mut() {
            for (j, c) in commits.iter().enumerate() {
                if j != p.id() {
                    p.receive_commit(j, *c).expect("fresh slot");
                }
            }
        }
        let mut reveals = Vec::new();
        for (slot, role) in roles.iter().enumerate() {
            let rv = parties[slot].reveal().expect("all commitments in");
            let bytes = self.net.push(*role, KIND_KEYGEN_REVEAL, encode_reveal::<G>(session, slot as u8, &rv));
            reveals.push(decode_reveal::<G>(bytes).expect("own encoding").2);
        }
        for p in parties.iter_mut() {
            for (j, rv) in reveals.iter().enumerate() {
                if j != p.id() {
                    p.receive_reveal(j, rv).map_err(|e| Abort {
                        by: roles[p.id()],
                        blamed: Some(roles[j]),
                        reason: e.to_string(),
                    })?;
                }
            }
        }
        for (slot, role) in roles.iter().enumerate() {
            let share = parties[slot].finish().expect("complete");
            self.swap_addr[idx] = Some(Address::from_pubkey::<G>(&share.q));
            match role {
                Role::P1 => self.owners[0].swap[idx] = Some(share),
                Role::P2 => self.owners[1].swap[idx] = Some(share),
                _ => self.provider.swap[idx] = Some(share),
            }
        }
        Ok(())
    }

    /// Runs the three signing rounds among `signers`, logging every message.
    /// Roles in `silent` receive nothing and answer nothing.
    fn logged_sign(
        &mut self,
        session: u8,
        signers: Vec<(Role, SigningShare<G>)>,
        msg: &[u8],
    ) -> Result<MultiSignature<G>, ThresholdError> {
        let mut states = Vec::new();
        let mut commits = Vec::new();
        for (role, share) in signers {
            let slot = share.slot;
            let rng = rng_for(&mut self.owners, &mut self.provider, role);
            let (signer, commit) = Signer::new(share, msg, rng);
            let bytes = self.net.push(role, KIND_SIGN_COMMIT, CommitMsg { session, slot: slot as u8, commit }.encode());
            commits.push(CommitMsg::decode(bytes).expect("own encoding"));
            states.push((role, signer));
        }
        for (_, s) in states.iter_mut() {
            for c in &commits {
                if usize::from(c.slot) != s.slot() {
                    s.receive_commit(c.slot.into(), c.commit)?;
                }
            }
        }
        let mut nonces = Vec::new();
        for (role, s) in &states {
            let r_i = s.reveal()?;
            let bytes = self.net.push(*role, KIND_SIGN_NONCE, encode_nonce::<G>(session, s.slot() as u8, &r_i));
            nonces.push(decode_nonce::<G>(bytes).expect("own encoding"));
        }
        for (_, s) in states.iter_mut() {
            for (_, slot, r) in &nonces {
                if usize::from(*slot) != s.slot() {
                    s.receive_nonce((*slot).into(), r)?;
                }
            }
        }
        let mut partials = Vec::new();
        for (role, s) in states.iter_mut() {
            let s_i = s.respond()?;
            let bytes = self.net.push(*role, KIND_SIGN_PARTIAL, encode_partial::<G>(session, s.slot() as u8, &s_i));
            partials.push(decode_partial::<G>(bytes).expect("own encoding"));
        }
        for (_, s) in states.iter_mut() {
            for (_, slot, z) in &partials {
                if usize::from(*slot) != s.slot() {
                    s.receive_partial((*slot).into(), z)?;
                }
            }
        }
        states[0].1.finish()
    }

    fn chain_role(i: usize) -> Role {
        [Role::Chain1, Role::Chain2][i]
    }

    fn deposit(&mut self) -> Result<(), Abort> {
        let mut txs = Vec::new();
        for p in Party::BOTH {
            let i = p.index();
            let owner = &self.owners[i];
            let from = Address::from_pubkey::<G>(&owner.wallet_in.q);
            let to = self.swap_addr[i].expect("keys generated");
            let body = TxBody { from, to, amount: self.cfg.amounts[i], nonce: self.chains[i].next_nonce(&from) };
            let signers = vec![
                (p.role(), SigningShare::from(&owner.wallet_in)),
                (Role::Provider, SigningShare::from(&self.provider.wallets_in[i])),
            ];
            let pubkey = owner.wallet_in.q;
            let session = [SESSION_DEPOSIT_P1, SESSION_DEPOSIT_P2][i];
            let sig = self
                .logged_sign(session, signers, &body.signing_bytes(self.chains[i].chain_id()))
                .map_err(|e| Abort { by: p.role(), blamed: None, reason: format!("deposit signing failed: {e}") })?;
            txs.push(Transaction { body, pubkey, sig });
        }
        let tx2 = txs.pop().expect("two deposits");
        let tx1 = txs.pop().expect("two deposits");
        let (c1, c2) = self.chains.split_at_mut(1);
        if self.cfg.adversary == Adversary::ProviderWithhold {
            c1[0].submit(tx1.clone()).map_err(|e| Abort { by: Role::Provider, blamed: None, reason: e.to_string() })?;
            self.net.push(Role::Chain1, KIND_TX, tx1.to_bytes());
        } else {
            atomic_pair_submit(&mut c1[0], tx1.clone(), &mut c2[0], tx2.clone())
                .map_err(|e| Abort { by: Role::Provider, blamed: None, reason: format!("deposit rejected: {e}") })?;
            self.net.push(Role::Chain1, KIND_TX, tx1.to_bytes());
            self.net.push(Role::Chain2, KIND_TX, tx2.to_bytes());
        }
        // each owner waits for the counterparty deposit before juggling
        for p in Party::BOTH {
            let j = p.other().index();
            let a = self.swap_addr[j].expect("keys generated");
            if self.chains[j].balance(&a) < self.cfg.amounts[j] {
                return Err(Abort {
                    by: p.role(),
                    blamed: Some(Role::Provider),
                    reason: format!("deposit to a{} not confirmed", j + 1),
                });
            }
        }
        Ok(())
    }

    fn stops_at(&self, p: Party, k: usize) -> bool {
        self.cfg.adversary == Adversary::AbortAtSegment { k, party: p }
    }

    fn silence(p: Party, what: String) -> Abort {
        Abort { by: p.other().role(), blamed: Some(p.role()), reason: format!("no {what} from {p}") }
    }

    fn exchange_setups(&mut self) -> Result<(), Abort> {
        for p in Party::BOTH {
            self.send_setup(p)?;
        }
        Ok(())
    }

    fn send_setup(&mut self, p: Party) -> Result<(), Abort> {
        let (i, j) = (p.index(), p.other().index());
        if self.stops_at(p, 0) {
            return Err(Self::silence(p, "setup bundle".into()));
        }
        let params = self.params;
        let owner = &mut self.owners[i];
        let share = owner.swap[i].clone().expect("keys generated");
        let y = owner.peer_y.expect("keys exchanged");
        let (state, bundle) = if self.cfg.adversary == Adversary::BiasedSegments(p) {
            let bias = Bias::random(&params, &mut owner.rng);
            biased_setup(&share.x_i, &share.q_i, &y, &params, &bias, &mut owner.rng)
        } else {
            encryptor_setup(&share.x_i, &share.q_i, &y, &params, &mut owner.rng)
        }
        .expect("own share satisfies the bit restriction");
        owner.encryptor = Some(state);
        let bytes = self.net.push(p.role(), KIND_SETUP, bundle.to_bytes()).to_vec();

        // provider
        let q_s = self.provider.swap[i].as_ref().map(|s| s.all_q[i]).unwrap_or(share.q_i);
        let mut verifier = Verifier::new(params, q_s, self.provider.ys[j].expect("keys exchanged"));
        let s_ok = SetupBundle::<G>::from_bytes(&bytes)
            .map_err(|_| JugglingError::SetupRejected)
            .and_then(|b| verifier.accept_setup(b));
        if s_ok.is_err() {
            self.provider.revoked[i] = true;
        }
        self.provider.verifiers[i] = Some(verifier);

        // counterparty
        let peer = &mut self.owners[j];
        let q_p = peer.swap[i].as_ref().expect("keys generated").all_q[i];
        let mut dec = Decryptor::new(params, &peer.enc, q_p).expect("segment bits checked");
        let p_ok = SetupBundle::<G>::from_bytes(&bytes)
            .map_err(|_| JugglingError::SetupRejected)
            .and_then(|b| dec.accept_setup(b));
        peer.decryptor = Some(dec);
        p_ok.map_err(|e| Abort { by: p.other().role(), blamed: Some(p.role()), reason: format!("setup bundle: {e}") })
    }

    fn exchange_releases(&mut self, k: usize) -> Result<(), Abort> {
        for p in Party::BOTH {
            self.send_release(p, k)?;
        }
        Ok(())
    }

    fn send_release(&mut self, p: Party, k: usize) -> Result<(), Abort> {
        let (i, j) = (p.index(), p.other().index());
        // P1 opens round k; P2 answers only after receiving P1's segment k
        let heard = self.owners[i].decryptor.as_ref().map_or(0, |d| d.decrypted());
        let needed = if p == Party::P1 { k - 1 } else { k };
        if heard < needed {
            return Err(Abort { by: p.role(), blamed: Some(p.other().role()), reason: format!("counterparty behind at segment {k}") });
        }
        if self.stops_at(p, k) {
            return Err(Self::silence(p, format!("segment {k}")));
        }
        let owner = &mut self.owners[i];
        let mut rel = owner
            .encryptor
            .as_mut()
            .expect("setup sent")
            .release_segment(k, &mut owner.rng)
            .expect("releases follow the round counter");
        if self.cfg.adversary == (Adversary::CorruptProof { k, party: p }) {
            rel.enc_proof.response.0 = rel.enc_proof.response.0 + G::one();
        }
        let bytes = self.net.push(p.role(), KIND_RELEASE, rel.to_bytes()).to_vec();

        let decoded = SegmentRelease::<G>::from_bytes(&bytes);
        let verifier = self.provider.verifiers[i].as_mut().expect("setup verified");
        let s_ok = decoded.as_ref().map_err(|_| JugglingError::ProofRejected(k)).and_then(|r| verifier.accept_release(r));
        if s_ok.is_err() {
            self.provider.revoked[i] = true;
        }

        let dec = self.owners[j].decryptor.as_mut().expect("setup verified");
        match decoded.map_err(|_| JugglingError::ProofRejected(k)).and_then(|r| dec.accept_segment(&r)) {
            Ok(_) => Ok(()),
            Err(e @ (JugglingError::ExtractionFailed(_) | JugglingError::SoundnessViolation)) => {
                panic!("verified segment failed to decrypt: {e}")
            }
            Err(e) => Err(Abort { by: p.other().role(), blamed: Some(p.role()), reason: format!("segment {k}: {e}") }),
        }
    }

    /// Every owner holding the counterparty share withdraws; failures are
    /// reported as the first abort.
    fn withdraw_all(&mut self) -> Result<(), Abort> {
        let mut first_err = None;
        for p in Party::BOTH {
            if let Err(e) = self.withdraw(p) {
                if first_err.is_none() {
                    self.net.push(e.by, KIND_ABORT, e.reason.clone().into_bytes());
                    first_err = Some(e);
                }
            }
        }
        match first_err {
            None => Ok(()),
            Some(e) => Err(Abort { reason: format!("withdraw phase: {}", e.reason), ..e }),
        }
    }

    fn withdraw(&mut self, p: Party) -> Result<(), Abort> {
        let (i, w) = (p.index(), p.other().index());
        let fail = |reason: String, blamed: Option<Role>| Abort { by: p.role(), blamed, reason };
        let owner = &mut self.owners[i];
        if owner.withdrawn {
            return Ok(());
        }
        if owner.learned.is_none() {
            if let Some(dec) = &owner.decryptor {
                owner.learned = dec.finish().ok();
                if owner.learned.is_none() && self.cfg.recovery_bits > 0 && dec.verifier().has_setup() && !dec.verifier().is_poisoned() {
                    owner.learned = dec.recover_remaining(self.cfg.recovery_bits);
                }
            }
        }
        let learned = owner.learned.ok_or_else(|| fail("counterparty share unknown".into(), None))?;
        let own = owner.swap[w].clone().expect("keys generated");
        let from = self.swap_addr[w].expect("keys generated");
        let to = Address::from_pubkey::<G>(&owner.wallet_out);
        let body = TxBody { from, to, amount: self.chains[w].balance(&from), nonce: self.chains[w].next_nonce(&from) };
        let [mine, theirs] = assemble_degenerate_share(&own, w, &learned).map_err(|e| fail(e.to_string(), None))?;
        let mut signers = vec![(p.role(), mine), (p.role(), theirs)];
        let provider_refuses = self.provider.revoked[i] || (self.cfg.adversary == Adversary::ProviderPartialSign && p == Party::P2);
        if !self.cfg.two_party_swap_keys && !provider_refuses {
            let s_share = self.provider.swap[w].as_ref().expect("keys generated");
            signers.push((Role::Provider, SigningShare::from(s_share)));
        }
        let session = [SESSION_WITHDRAW_P1, SESSION_WITHDRAW_P2][i];
        let msg = body.signing_bytes(self.chains[w].chain_id());
        let sig = self.logged_sign(session, signers, &msg).map_err(|e| {
            let blamed = (!self.cfg.two_party_swap_keys).then_some(Role::Provider);
            fail(format!("withdraw of a{} not co-signed: {e}", w + 1), blamed)
        })?;
        let tx = Transaction { body, pubkey: own.q, sig };
        self.chains[w].submit(tx.clone()).map_err(|e| fail(format!("withdraw rejected: {e}"), None))?;
        self.net.push(Self::chain_role(w), KIND_TX, tx.to_bytes());
        self.owners[i].withdrawn = true;
        Ok(())
    }

    pub fn balances(&self) -> Balances {
        let addr = |k: &ThresholdKeyShare<G>| Address::from_pubkey::<G>(&k.q);
        let swap = [0, 1].map(|i| self.swap_addr[i].map_or(0, |a| self.chains[i].balance(&a)));
        Balances {
            inputs: [0, 1].map(|i| self.chains[i].balance(&addr(&self.owners[i].wallet_in))),
            outputs: [0, 1].map(|i| self.chains[1 - i].balance(&Address::from_pubkey::<G>(&self.owners[i].wallet_out))),
            swap,
            provider: [0, 1].map(|i| self.chains[i].balance(&self.provider.address)),
        }
    }

    pub fn outcome(&self) -> SwapOutcome {
        let decrypted = self.owners.each_ref().map(|o| o.decryptor.as_ref().map_or(0, |d| d.decrypted()));
        let report = FairnessReport {
            decrypted,
            advantage: decrypted[0].abs_diff(decrypted[1]),
            recovered: self.owners.each_ref().map(|o| o.learned.is_some()),
            withdrawn: self.owners.each_ref().map(|o| o.withdrawn),
        };
        let chains = [0, 1].map(|i| ChainReport {
            chain_id: self.chains[i].chain_id(),
            tx_count: self.chains[i].log().len(),
            supply: self.chains[i].total_supply(),
            state_dump: self.chains[i].state_dump(),
        });
        SwapOutcome {
            step: self.step.clone(),
            report,
            balances: self.balances(),
            chains,
            revoked: Party::BOTH.into_iter().filter(|p| self.provider.revoked[p.index()]).collect(),
            transcript: self.net.clone(),
        }
    }

    /// Refund hook for a deposit stranded by an abort. There are no
    /// timelocks, so it always fails and the funds stay in `a_1`/`a_2`.
    pub fn refund(&mut self, _p: Party) -> Result<(), SwapError> {
        Err(SwapError::NoRefund)
    }

    /// Tries to move `a_{own+1}` using only this owner's shares and the
    /// provider's, which must fail: the counterparty's share of its own
    /// deposit address is never released.
    pub fn try_steal_own_deposit(&mut self, p: Party) -> Result<MultiSignature<G>, ThresholdError> {
        let i = p.index();
        let own = self.owners[i].swap[i].clone().expect("keys generated");
        let mut shares = vec![SigningShare::from(&own)];
        if let Some(s) = &self.provider.swap[i] {
            shares.push(SigningShare::from(s));
        }
        let from = self.swap_addr[i].expect("keys generated");
        let body = TxBody { from, to: from, amount: 1, nonce: self.chains[i].next_nonce(&from) };
        crate::threshold::thresh_sign(&shares, &body.signing_bytes(self.chains[i].chain_id()), &mut self.owners[i].rng)
    }
}
