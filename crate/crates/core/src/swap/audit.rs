// SPDX-License-Identifier: Apache-2.0

//! Offline transcript audit.
//!
//! Uses only public data: the config frame, encryption keys, keygen
//! reveals, juggling proofs and confirmed transactions. Replays both chains,
//! re-verifies every juggling message and decides who, if anyone, deviated.

use std::collections::BTreeMap;
use std::fmt;

use super::transcript::*;
use crate::group::{Group, GroupKind, Secp256k1, ToyGroup};
use crate::juggling::{JugglingError, SegmentRelease, SetupBundle, Verifier};
use crate::ledger::{Address, Chain, Transaction};
use crate::segmentation::SegmentationParams;
use crate::threshold::keygen_commitment;
use crate::wire::Encode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Clean,
    Blame { role: Role, reason: String },
}

impl Verdict {
    pub fn blamed(&self) -> Option<Role> {
        match self {
            Verdict::Clean => None,
            Verdict::Blame { role, .. } => Some(*role),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Clean => f.write_str("clean"),
            Verdict::Blame { role, reason } => write!(f, "blame {role}: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AuditError {
    #[error("malformed transcript: {0}")]
    Malformed(String),
}

impl From<TranscriptError> for AuditError {
    fn from(TranscriptError::Malformed(m): TranscriptError) -> Self {
        AuditError::Malformed(m)
    }
}

impl From<crate::wire::CodecError> for AuditError {
    fn from(e: crate::wire::CodecError) -> Self {
        AuditError::Malformed(e.to_string())
    }
}

fn malformed(msg: impl Into<String>) -> AuditError {
    AuditError::Malformed(msg.into())
}

fn blame(role: Role, reason: impl Into<String>) -> Verdict {
    Verdict::Blame { role, reason: reason.into() }
}

pub fn audit_transcript(t: &Transcript) -> Result<Verdict, AuditError> {
    let first = t.entries.first().ok_or_else(|| malformed("empty transcript"))?;
    if first.sender != Role::Harness || first.kind != KIND_CONFIG {
        return Err(malformed("first entry must be the configuration"));
    }
    let cfg = ConfigMsg::decode(&first.payload)?;
    match cfg.group {
        GroupKind::Toy => audit::<ToyGroup>(t, &cfg),
        GroupKind::Secp256k1 => audit::<Secp256k1>(t, &cfg),
    }
}

fn slot_role(slot: u8) -> Role {
    match slot {
        0 => Role::P1,
        1 => Role::P2,
        _ => Role::Provider,
    }
}

fn audit<G: Group>(t: &Transcript, cfg: &ConfigMsg) -> Result<Verdict, AuditError> {
    let params = SegmentationParams::new(cfg.segment_bits, cfg.group.order_bits())
        .map_err(|e| malformed(format!("config: {e}")))?;
    let n = usize::from(cfg.swap_parties);
    if !(2..=3).contains(&n) {
        return Err(malformed("swap keys need two or three parties"));
    }
    let entries = &t.entries[1..];

    let mut ys: [Option<G::Point>; 2] = [None, None];
    for e in entries.iter().filter(|e| e.kind == KIND_ENC_KEY) {
        let i = match e.sender {
            Role::P1 => 0,
            Role::P2 => 1,
            other => return Err(malformed(format!("enc key from {other}"))),
        };
        ys[i] = Some(decode_point::<G>(&e.payload)?);
    }

    // keygen: check every reveal against its commitment
    let mut commits: BTreeMap<(u8, u8), [u8; 32]> = BTreeMap::new();
    let mut shares: BTreeMap<(u8, u8), G::Point> = BTreeMap::new();
    for e in entries {
        match e.kind {
            KIND_KEYGEN_COMMIT => {
                let c = CommitMsg::decode(&e.payload)?;
                if slot_role(c.slot) != e.sender {
                    return Err(malformed(format!("{} committed for slot {}", e.sender, c.slot)));
                }
                commits.insert((c.session, c.slot), c.commit);
            }
            KIND_KEYGEN_REVEAL => {
                let (session, slot, rv) = decode_reveal::<G>(&e.payload)?;
                let c = commits.get(&(session, slot)).ok_or_else(|| malformed("reveal before commitment"))?;
                if keygen_commitment::<G>(slot.into(), &rv.q_i, &rv.blind) != *c {
                    return Ok(blame(e.sender, format!("keygen reveal for session {session} does not open its commitment")));
                }
                shares.insert((session, slot), rv.q_i);
            }
            _ => {}
        }
    }
    let mut keys: [Option<(Vec<G::Point>, Address)>; 2] = [None, None];
    for (idx, session) in [SESSION_KEY_A1, SESSION_KEY_A2].into_iter().enumerate() {
        let all_q: Option<Vec<G::Point>> = (0..n as u8).map(|s| shares.get(&(session, s)).copied()).collect();
        if let Some(all_q) = all_q {
            let q = all_q.iter().fold(G::identity(), |acc, p| acc + *p);
            keys[idx] = Some((all_q, Address::from_pubkey::<G>(&q)));
        }
    }

    // replay both chains
    let mut chains =
        [0, 1].map(|i| Chain::<G>::new(cfg.chain_ids[i], &[(cfg.inputs[i], cfg.initial[i])]));
    let mut deposits = [false, false];
    let mut withdrawn = [false, false];
    for e in entries.iter().filter(|e| e.kind == KIND_TX) {
        let i = match e.sender {
            Role::Chain1 => 0,
            Role::Chain2 => 1,
            other => return Err(malformed(format!("transaction reported by {other}"))),
        };
        let tx = Transaction::<G>::from_bytes(&e.payload)?;
        let swap_addr = keys[i].as_ref().map(|k| k.1);
        if Some(tx.body.to) == swap_addr && tx.body.from == cfg.inputs[i] {
            deposits[i] = true;
        }
        if Some(tx.body.from) == swap_addr {
            withdrawn[i] = true;
        }
        chains[i].submit(tx).map_err(|r| malformed(format!("chain {} rejects a confirmed tx: {r}", i + 1)))?;
    }

    // juggling: P1 encrypts its a_1 share to Y_2, P2 its a_2 share to Y_1
    let mut verifiers: [Option<Verifier<G>>; 2] = [0, 1].map(|i| {
        let y = ys[1 - i]?;
        let q_i = keys[i].as_ref()?.0[i];
        Some(Verifier::new(params, q_i, y))
    });
    let mut progress = [0usize; 2];
    for e in entries.iter().filter(|e| e.kind == KIND_SETUP || e.kind == KIND_RELEASE) {
        let i = match e.sender {
            Role::P1 => 0,
            Role::P2 => 1,
            other => return Err(malformed(format!("juggling message from {other}"))),
        };
        let v = verifiers[i].as_mut().ok_or_else(|| malformed("juggling before keys are fixed"))?;
        let res = if e.kind == KIND_SETUP {
            SetupBundle::<G>::from_bytes(&e.payload)
                .map_err(|_| JugglingError::SetupRejected)
                .and_then(|b| v.accept_setup(b))
        } else {
            SegmentRelease::<G>::from_bytes(&e.payload)
                .map_err(|_| JugglingError::ProofRejected(v.verified() + 1))
                .and_then(|r| v.accept_release(&r).map(|_| ()))
        };
        if let Err(err) = res {
            return Ok(blame(e.sender, err.to_string()));
        }
        progress[i] += 1;
    }

    let keyed = keys.iter().all(Option::is_some);
    if keyed && deposits[0] != deposits[1] {
        return Ok(blame(Role::Provider, "only one deposit was submitted"));
    }
    if !deposits[0] {
        if !keyed {
            return Ok(blame(Role::Provider, "swap keys were never completed"));
        }
        return Ok(blame(Role::Provider, "deposits were never submitted"));
    }
    let full = params.m + 1;
    if progress[0] < full || progress[1] < full {
        // P1 moves first in every round
        let owes = if progress[0] == progress[1] { 0 } else { 1 };
        let role = [Role::P1, Role::P2][owes];
        return Ok(blame(role, format!("stopped juggling after {} messages", progress[owes])));
    }
    for (i, (session, owner)) in [(SESSION_WITHDRAW_P1, Role::P1), (SESSION_WITHDRAW_P2, Role::P2)].into_iter().enumerate() {
        let w = 1 - i;
        let tried = entries
            .iter()
            .filter(|e| e.kind == KIND_SIGN_COMMIT && e.sender == owner)
            .any(|e| CommitMsg::decode(&e.payload).is_ok_and(|c| c.session == session));
        if tried && !withdrawn[w] && n == 3 {
            return Ok(blame(Role::Provider, format!("did not co-sign the withdrawal of {owner}")));
        }
    }
    Ok(Verdict::Clean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swap::{run_swap, Adversary, Party, SwapConfig};

    fn verdict(adversary: Adversary) -> Verdict {
        let out = run_swap(&SwapConfig { adversary, ..SwapConfig::default() }).unwrap();
        let text = out.transcript.to_text();
        audit_transcript(&Transcript::parse(&text).unwrap()).unwrap()
    }

    #[test]
    fn honest_run_is_clean() {
        assert_eq!(verdict(Adversary::None), Verdict::Clean);
    }

    #[test]
    fn deviations_are_attributed() {
        let p1 = Party::P1;
        let p2 = Party::P2;
        let cases = [
            (Adversary::BiasedSegments(p1), Role::P1),
            (Adversary::BiasedSegments(p2), Role::P2),
            (Adversary::CorruptProof { k: 2, party: p2 }, Role::P2),
            (Adversary::AbortAtSegment { k: 0, party: p1 }, Role::P1),
            (Adversary::AbortAtSegment { k: 4, party: p2 }, Role::P2),
            (Adversary::ProviderWithhold, Role::Provider),
            (Adversary::ProviderPartialSign, Role::Provider),
        ];
        for (adv, who) in cases {
            assert_eq!(verdict(adv).blamed(), Some(who), "{adv}");
        }
    }

    #[test]
    fn tampered_transcripts() {
        let out = run_swap(&SwapConfig::default()).unwrap();
        let mut t = out.transcript.clone();
        t.entries.remove(0);
        assert!(audit_transcript(&t).is_err());

        // flip a byte inside a keygen reveal
        let mut t = out.transcript.clone();
        let e = t.entries.iter_mut().find(|e| e.kind == KIND_KEYGEN_REVEAL && e.sender == Role::P2).unwrap();
        let last = e.payload.len() - 1;
        e.payload[last] ^= 1;
        assert_eq!(audit_transcript(&t).unwrap().blamed(), Some(Role::P2));

        // drop a confirmed tx: the withdraw no longer replays
        let mut t = out.transcript;
        let pos = t.entries.iter().position(|e| e.kind == KIND_TX).unwrap();
        t.entries.remove(pos);
        assert!(audit_transcript(&t).is_err());
    }
}
