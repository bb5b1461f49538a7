// SPDX-License-Identifier: Apache-2.0

//! Swap transcript: every broadcast frame in order, with its sender.
//!
//! Text form is one entry per line, `ordinal sender type payload-hex`,
//! e.g. `7 P1 keygen-commit 0100a3f1...`. Empty payloads are written as `-`.

use std::fmt;
use std::str::FromStr;

use crate::group::{Group, GroupKind};
use crate::juggling::{FRAME_RELEASE, FRAME_SETUP};
use crate::ledger::Address;
use crate::threshold::KeygenReveal;
use crate::wire::{CodecError, Frame, Reader, Writer};

pub const KIND_CONFIG: u8 = 0x00;
pub const KIND_SETUP: u8 = FRAME_SETUP;
pub const KIND_RELEASE: u8 = FRAME_RELEASE;
pub const KIND_ENC_KEY: u8 = 0x03;
pub const KIND_KEYGEN_COMMIT: u8 = 0x10;
pub const KIND_KEYGEN_REVEAL: u8 = 0x11;
pub const KIND_SIGN_COMMIT: u8 = 0x20;
pub const KIND_SIGN_NONCE: u8 = 0x21;
pub const KIND_SIGN_PARTIAL: u8 = 0x22;
pub const KIND_TX: u8 = 0x30;
pub const KIND_ABORT: u8 = 0x40;

const KIND_NAMES: [(u8, &str); 11] = [
    (KIND_CONFIG, "config"),
    (KIND_SETUP, "setup"),
    (KIND_RELEASE, "release"),
    (KIND_ENC_KEY, "enc-key"),
    (KIND_KEYGEN_COMMIT, "keygen-commit"),
    (KIND_KEYGEN_REVEAL, "keygen-reveal"),
    (KIND_SIGN_COMMIT, "sign-commit"),
    (KIND_SIGN_NONCE, "sign-nonce"),
    (KIND_SIGN_PARTIAL, "sign-partial"),
    (KIND_TX, "tx"),
    (KIND_ABORT, "abort"),
];

pub fn kind_name(kind: u8) -> Option<&'static str> {
    KIND_NAMES.iter().find(|(k, _)| *k == kind).map(|(_, n)| *n)
}

fn kind_from_name(name: &str) -> Option<u8> {
    KIND_NAMES.iter().find(|(_, n)| *n == name).map(|(k, _)| *k)
}

/// Keygen sessions for the two swap addresses.
pub const SESSION_KEY_A1: u8 = 1;
pub const SESSION_KEY_A2: u8 = 2;
/// Signing sessions.
pub const SESSION_DEPOSIT_P1: u8 = 0;
pub const SESSION_DEPOSIT_P2: u8 = 1;
pub const SESSION_WITHDRAW_P1: u8 = 2;
pub const SESSION_WITHDRAW_P2: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// The harness itself (configuration only).
    Harness,
    P1,
    P2,
    Provider,
    /// Confirmation feed of chain b_1.
    Chain1,
    /// Confirmation feed of chain b_2.
    Chain2,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Harness => "H",
            Role::P1 => "P1",
            Role::P2 => "P2",
            Role::Provider => "S",
            Role::Chain1 => "B1",
            Role::Chain2 => "B2",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = TranscriptError;

    fn from_str(s: &str) -> Result<Self, TranscriptError> {
        Ok(match s {
            "H" => Role::Harness,
            "P1" => Role::P1,
            "P2" => Role::P2,
            "S" => Role::Provider,
            "B1" => Role::Chain1,
            "B2" => Role::Chain2,
            _ => return Err(TranscriptError::Malformed(format!("unknown role {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranscriptError {
    #[error("malformed transcript: {0}")]
    Malformed(String),
}

impl From<CodecError> for TranscriptError {
    fn from(e: CodecError) -> Self {
        TranscriptError::Malformed(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub ordinal: u64,
    pub sender: Role,
    pub kind: u8,
    pub payload: Vec<u8>,
}

impl Entry {
    pub fn frame(&self) -> Frame {
        Frame::new(self.kind, self.payload.clone())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub entries: Vec<Entry>,
}

impl Transcript {
    pub fn push(&mut self, sender: Role, kind: u8, payload: Vec<u8>) -> &[u8] {
        let ordinal = self.entries.len() as u64;
        self.entries.push(Entry { ordinal, sender, kind, payload });
        &self.entries.last().expect("just pushed").payload
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of payload lengths over all entries.
    pub fn message_bytes(&self) -> usize {
        self.entries.iter().map(|e| e.payload.len()).sum()
    }

    pub fn count(&self, sender: Role, kind: u8) -> usize {
        self.entries.iter().filter(|e| e.sender == sender && e.kind == kind).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let name = kind_name(e.kind).map(str::to_owned).unwrap_or_else(|| format!("{:02x}", e.kind));
            let hex = if e.payload.is_empty() { "-".to_owned() } else { hex::encode(&e.payload) };
            out.push_str(&format!("{} {} {} {}\n", e.ordinal, e.sender, name, hex));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, TranscriptError> {
        let mut t = Transcript::default();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = |what: &str| TranscriptError::Malformed(format!("line {}: {what}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [ord, sender, kind, hex] = fields[..] else {
                return Err(bad("expected four fields"));
            };
            let ordinal: u64 = ord.parse().map_err(|_| bad("bad ordinal"))?;
            if ordinal != t.entries.len() as u64 {
                return Err(bad("ordinals must count up from 0"));
            }
            let sender: Role = sender.parse()?;
            let kind = kind_from_name(kind)
                .or_else(|| u8::from_str_radix(kind, 16).ok())
                .ok_or_else(|| bad("unknown message type"))?;
            let payload = if hex == "-" { Vec::new() } else { hex::decode(hex).map_err(|_| bad("bad hex"))? };
            t.entries.push(Entry { ordinal, sender, kind, payload });
        }
        Ok(t)
    }
}

/// Public parameters every observer needs, broadcast first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigMsg {
    pub group: GroupKind,
    pub segment_bits: u32,
    pub amounts: [u64; 2],
    pub initial: [u64; 2],
    pub chain_ids: [u32; 2],
    /// 3 for the full flow, 2 under the two-owner relaxation.
    pub swap_parties: u8,
    pub inputs: [Address; 2],
    pub outputs: [Address; 2],
    pub provider: Address,
}

fn read_addr(r: &mut Reader<'_>) -> Result<Address, CodecError> {
    let mut a = [0u8; 20];
    a.copy_from_slice(r.take(20)?);
    Ok(Address(a))
}

impl ConfigMsg {
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.var_bytes(self.group.name().as_bytes()).u8(self.segment_bits as u8);
        for i in 0..2 {
            w.u64(self.amounts[i]).u64(self.initial[i]).u32(self.chain_ids[i]);
        }
        w.u8(self.swap_parties);
        for a in self.inputs.iter().chain(&self.outputs).chain([&self.provider]) {
            w.bytes(&a.0);
        }
        w.finish()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CodecError> {
        let mut r = Reader::new(bytes);
        let name = std::str::from_utf8(r.var_bytes()?).map_err(|_| CodecError::Invalid("group name".into()))?;
        let group: GroupKind = name.parse().map_err(|_| CodecError::Invalid(format!("group {name:?}")))?;
        let segment_bits = u32::from(r.u8()?);
        let mut amounts = [0; 2];
        let mut initial = [0; 2];
        let mut chain_ids = [0; 2];
        for i in 0..2 {
            amounts[i] = r.u64()?;
            initial[i] = r.u64()?;
            chain_ids[i] = r.u32()?;
        }
        let swap_parties = r.u8()?;
        let inputs = [read_addr(&mut r)?, read_addr(&mut r)?];
        let outputs = [read_addr(&mut r)?, read_addr(&mut r)?];
        let provider = read_addr(&mut r)?;
        r.finish()?;
        Ok(ConfigMsg { group, segment_bits, amounts, initial, chain_ids, swap_parties, inputs, outputs, provider })
    }
}

/// `session || slot || 32-byte hash`, used for both key and nonce commitments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommitMsg {
    pub session: u8,
    pub slot: u8,
    pub commit: [u8; 32],
}

impl CommitMsg {
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.u8(self.session).u8(self.slot).bytes(&self.commit);
        w.finish()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CodecError> {
        let mut r = Reader::new(bytes);
        let (session, slot) = (r.u8()?, r.u8()?);
        let mut commit = [0u8; 32];
        commit.copy_from_slice(r.take(32)?);
        r.finish()?;
        Ok(CommitMsg { session, slot, commit })
    }
}

pub fn encode_reveal<G: Group>(session: u8, slot: u8, rv: &KeygenReveal<G>) -> Vec<u8> {
    let mut w = Writer::new();
    w.u8(session).u8(slot).point::<G>(&rv.q_i).bytes(&rv.blind);
    w.finish()
}

pub fn decode_reveal<G: Group>(bytes: &[u8]) -> Result<(u8, u8, KeygenReveal<G>), CodecError> {
    let mut r = Reader::new(bytes);
    let (session, slot) = (r.u8()?, r.u8()?);
    let q_i = r.point::<G>()?;
    let mut blind = [0u8; 32];
    blind.copy_from_slice(r.take(32)?);
    r.finish()?;
    Ok((session, slot, KeygenReveal { q_i, blind }))
}

pub fn encode_nonce<G: Group>(session: u8, slot: u8, r_i: &G::Point) -> Vec<u8> {
    let mut w = Writer::new();
    w.u8(session).u8(slot).point::<G>(r_i);
    w.finish()
}

pub fn decode_nonce<G: Group>(bytes: &[u8]) -> Result<(u8, u8, G::Point), CodecError> {
    let mut r = Reader::new(bytes);
    let out = (r.u8()?, r.u8()?, r.point::<G>()?);
    r.finish()?;
    Ok(out)
}

pub fn encode_partial<G: Group>(session: u8, slot: u8, s_i: &G::Scalar) -> Vec<u8> {
    let mut w = Writer::new();
    w.u8(session).u8(slot).scalar::<G>(s_i);
    w.finish()
}

pub fn decode_partial<G: Group>(bytes: &[u8]) -> Result<(u8, u8, G::Scalar), CodecError> {
    let mut r = Reader::new(bytes);
    let out = (r.u8()?, r.u8()?, r.scalar::<G>()?);
    r.finish()?;
    Ok(out)
}

pub fn encode_point<G: Group>(p: &G::Point) -> Vec<u8> {
    let mut w = Writer::new();
    w.point::<G>(p);
    w.finish()
}

pub fn decode_point<G: Group>(bytes: &[u8]) -> Result<G::Point, CodecError> {
    let mut r = Reader::new(bytes);
    let p = r.point::<G>()?;
    r.finish()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut t = Transcript::default();
        t.push(Role::Harness, KIND_CONFIG, vec![1, 2, 3]);
        t.push(Role::P2, KIND_ABORT, Vec::new());
        t.push(Role::Chain1, 0x7f, vec![0xff]);
        let text = t.to_text();
        assert_eq!(text.lines().next().unwrap(), "0 H config 010203");
        assert_eq!(text.lines().nth(1).unwrap(), "1 P2 abort -");
        assert_eq!(Transcript::parse(&text).unwrap(), t);
        assert_eq!(t.message_bytes(), 4);
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["hello", "0 P9 tx 00", "1 P1 tx 00", "0 P1 tx zz", "0 P1 nonsense 00", "0 P1 tx"] {
            assert!(Transcript::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn config_round_trip() {
        let c = ConfigMsg {
            group: GroupKind::Secp256k1,
            segment_bits: 8,
            amounts: [5, 6],
            initial: [50, 60],
            chain_ids: [1, 2],
            swap_parties: 3,
            inputs: [Address([1; 20]), Address([2; 20])],
            outputs: [Address([3; 20]), Address([4; 20])],
            provider: Address([5; 20]),
        };
        assert_eq!(ConfigMsg::decode(&c.encode()).unwrap(), c);
        assert!(ConfigMsg::decode(&c.encode()[1..]).is_err());
    }
}
