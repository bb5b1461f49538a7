// SPDX-License-Identifier: Apache-2.0

//! Deterministic account-model chain.
//!
//! Transfers are authorized by a Schnorr signature over canonical bytes
//! `chain_id(4) || from(20) || to(20) || amount(8) || nonce(8)`, all big
//! endian. Finality is instant; every accepted transaction is appended to
//! the block log.

use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::group::Group;
use crate::threshold::{schnorr_verify, MultiSignature};
use crate::wire::{CodecError, Encode, Reader, Writer};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address(pub [u8; 20]);

impl Address {
    pub fn from_pubkey<G: Group>(q: &G::Point) -> Self {
        let digest = Sha256::digest(G::encode_point(q));
        let mut a = [0u8; 20];
        a.copy_from_slice(&digest[..20]);
        Address(a)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Address({self})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum TxRejection {
    #[error("signature does not verify")]
    BadSig,
    #[error("sender address does not match the public key")]
    SenderMismatch,
    #[error("balance {balance} below amount {amount}")]
    InsufficientFunds { balance: u64, amount: u64 },
    #[error("nonce {got}, expected {expected}")]
    BadNonce { expected: u64, got: u64 },
}

/// The signed fields of a transfer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TxBody {
    pub from: Address,
    pub to: Address,
    pub amount: u64,
    pub nonce: u64,
}

impl TxBody {
    pub fn signing_bytes(&self, chain_id: u32) -> Vec<u8> {
        let mut w = Writer::new();
        w.u32(chain_id).bytes(&self.from.0).bytes(&self.to.0).u64(self.amount).u64(self.nonce);
        w.finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction<G: Group> {
    pub body: TxBody,
    pub pubkey: G::Point,
    pub sig: MultiSignature<G>,
}

impl<G: Group> Encode<G> for Transaction<G> {
    fn write(&self, w: &mut Writer) {
        w.bytes(&self.body.from.0)
            .bytes(&self.body.to.0)
            .u64(self.body.amount)
            .u64(self.body.nonce)
            .point::<G>(&self.pubkey);
        self.sig.write(w);
    }

    fn read(r: &mut Reader<'_>) -> Result<Self, CodecError> {
        let mut addr = || -> Result<Address, CodecError> {
            let mut a = [0u8; 20];
            a.copy_from_slice(r.take(20)?);
            Ok(Address(a))
        };
        let from = addr()?;
        let to = addr()?;
        let body = TxBody { from, to, amount: r.u64()?, nonce: r.u64()? };
        Ok(Transaction { body, pubkey: r.point::<G>()?, sig: MultiSignature::read(r)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain<G: Group> {
    chain_id: u32,
    balances: BTreeMap<Address, u64>,
    nonces: BTreeMap<Address, u64>,
    log: Vec<Transaction<G>>,
}

impl<G: Group> Chain<G> {
    pub fn new(chain_id: u32, genesis: &[(Address, u64)]) -> Self {
        let mut balances = BTreeMap::new();
        for (a, v) in genesis {
            *balances.entry(*a).or_insert(0) += v;
        }
        Chain { chain_id, balances, nonces: BTreeMap::new(), log: Vec::new() }
    }

    pub fn chain_id(&self) -> u32 {
        self.chain_id
    }

    pub fn balance(&self, a: &Address) -> u64 {
        self.balances.get(a).copied().unwrap_or(0)
    }

    /// Next nonce the chain will accept from `a`.
    pub fn next_nonce(&self, a: &Address) -> u64 {
        self.nonces.get(a).copied().unwrap_or(0)
    }

    pub fn total_supply(&self) -> u128 {
        self.balances.values().map(|v| u128::from(*v)).sum()
    }

    pub fn log(&self) -> &[Transaction<G>] {
        &self.log
    }

    pub fn validate(&self, tx: &Transaction<G>) -> Result<(), TxRejection> {
        if Address::from_pubkey::<G>(&tx.pubkey) != tx.body.from {
            return Err(TxRejection::SenderMismatch);
        }
        if !schnorr_verify(&tx.pubkey, &tx.body.signing_bytes(self.chain_id), &tx.sig) {
            return Err(TxRejection::BadSig);
        }
        let expected = self.next_nonce(&tx.body.from);
        if tx.body.nonce != expected {
            return Err(TxRejection::BadNonce { expected, got: tx.body.nonce });
        }
        let balance = self.balance(&tx.body.from);
        if balance < tx.body.amount {
            return Err(TxRejection::InsufficientFunds { balance, amount: tx.body.amount });
        }
        Ok(())
    }

    pub fn submit(&mut self, tx: Transaction<G>) -> Result<(), TxRejection> {
        self.validate(&tx)?;
        self.apply(tx);
        Ok(())
    }

    fn apply(&mut self, tx: Transaction<G>) {
        let TxBody { from, to, amount, .. } = tx.body;
        *self.balances.entry(from).or_insert(0) -= amount;
        *self.balances.entry(to).or_insert(0) += amount;
        *self.nonces.entry(from).or_insert(0) += 1;
        self.log.push(tx);
    }

    /// One line per address with a nonzero balance or nonce, sorted.
    pub fn state_dump(&self) -> String {
        let mut out = format!("chain {}\n", self.chain_id);
        let addrs: std::collections::BTreeSet<&Address> =
            self.balances.keys().chain(self.nonces.keys()).collect();
        for a in addrs {
            out.push_str(&format!("{a} balance={} nonce={}\n", self.balance(a), self.next_nonce(a)));
        }
        out
    }

    pub fn state_hash(&self) -> [u8; 32] {
        Sha256::digest(self.state_dump().as_bytes()).into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PairRejection {
    #[error("first transaction: {0}")]
    First(TxRejection),
    #[error("second transaction: {0}")]
    Second(TxRejection),
}

/// Applies both transactions or neither.
pub fn atomic_pair_submit<G: Group>(
    c1: &mut Chain<G>,
    tx1: Transaction<G>,
    c2: &mut Chain<G>,
    tx2: Transaction<G>,
) -> Result<(), PairRejection> {
    c1.validate(&tx1).map_err(PairRejection::First)?;
    c2.validate(&tx2).map_err(PairRejection::Second)?;
    c1.apply(tx1);
    c2.apply(tx2);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ToyGroup;
    use crate::threshold::{thresh_keygen, thresh_sign, SigningShare, ThresholdKeyShare};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    type T = ToyGroup;

    fn wallet(seed: u64) -> Vec<ThresholdKeyShare<T>> {
        let mut rngs: Vec<ChaCha20Rng> = (0..2).map(|i| ChaCha20Rng::seed_from_u64(seed * 10 + i)).collect();
        thresh_keygen::<T, _>(&mut rngs).unwrap()
    }

    fn sign(chain_id: u32, w: &[ThresholdKeyShare<T>], body: TxBody, rng: &mut ChaCha20Rng) -> Transaction<T> {
        let shares: Vec<SigningShare<T>> = w.iter().map(SigningShare::from).collect();
        let sig = thresh_sign(&shares, &body.signing_bytes(chain_id), rng).unwrap();
        Transaction { body, pubkey: w[0].q, sig }
    }

    #[test]
    fn canonical_bytes_layout() {
        let body = TxBody { from: Address([1; 20]), to: Address([2; 20]), amount: 0x0102, nonce: 7 };
        let b = body.signing_bytes(0xa0b0c0d0);
        assert_eq!(b.len(), 60);
        assert_eq!(&b[..4], &[0xa0, 0xb0, 0xc0, 0xd0]);
        assert_eq!(&b[4..24], &[1; 20]);
        assert_eq!(&b[44..52], &[0, 0, 0, 0, 0, 0, 1, 2]);
        assert_eq!(&b[52..], &[0, 0, 0, 0, 0, 0, 0, 7]);
    }

    #[test]
    fn transfers_and_rejections() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let w = wallet(1);
        let from = Address::from_pubkey::<T>(&w[0].q);
        let to = Address([9; 20]);
        let mut chain = Chain::<T>::new(1, &[(from, 100)]);
        assert_eq!(chain.balance(&from), 100);
        assert_eq!(chain.balance(&to), 0);

        let tx = sign(1, &w, TxBody { from, to, amount: 10, nonce: 0 }, &mut rng);
        chain.submit(tx.clone()).unwrap();
        assert_eq!((chain.balance(&from), chain.balance(&to)), (90, 10));
        assert_eq!(chain.submit(tx).unwrap_err(), TxRejection::BadNonce { expected: 1, got: 0 });

        let big = sign(1, &w, TxBody { from, to, amount: 91, nonce: 1 }, &mut rng);
        assert_eq!(chain.submit(big).unwrap_err(), TxRejection::InsufficientFunds { balance: 90, amount: 91 });

        // signed for another chain
        let other = sign(2, &w, TxBody { from, to, amount: 1, nonce: 1 }, &mut rng);
        assert_eq!(chain.submit(other).unwrap_err(), TxRejection::BadSig);

        let mut spoof = sign(1, &w, TxBody { from, to, amount: 1, nonce: 1 }, &mut rng);
        spoof.pubkey = wallet(2)[0].q;
        assert_eq!(chain.submit(spoof).unwrap_err(), TxRejection::SenderMismatch);
        assert_eq!(chain.total_supply(), 100);
        assert_eq!(chain.log().len(), 1);
    }

    #[test]
    fn pair_submission_is_atomic() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (w1, w2) = (wallet(3), wallet(4));
        let (a1, a2) = (Address::from_pubkey::<T>(&w1[0].q), Address::from_pubkey::<T>(&w2[0].q));
        let mut b1 = Chain::<T>::new(1, &[(a1, 50)]);
        let mut b2 = Chain::<T>::new(2, &[(a2, 50)]);
        let tx1 = sign(1, &w1, TxBody { from: a1, to: Address([1; 20]), amount: 5, nonce: 0 }, &mut rng);
        let bad2 = sign(2, &w2, TxBody { from: a2, to: Address([2; 20]), amount: 500, nonce: 0 }, &mut rng);
        assert!(matches!(
            atomic_pair_submit(&mut b1, tx1.clone(), &mut b2, bad2),
            Err(PairRejection::Second(TxRejection::InsufficientFunds { .. }))
        ));
        assert!(b1.log().is_empty() && b2.log().is_empty());
        let tx2 = sign(2, &w2, TxBody { from: a2, to: Address([2; 20]), amount: 7, nonce: 0 }, &mut rng);
        atomic_pair_submit(&mut b1, tx1, &mut b2, tx2).unwrap();
        assert_eq!((b1.balance(&a1), b2.balance(&a2)), (45, 43));
    }

    #[test]
    fn state_is_deterministic() {
        let run = || {
            let mut rng = ChaCha20Rng::seed_from_u64(5);
            let w = wallet(5);
            let from = Address::from_pubkey::<T>(&w[0].q);
            let mut chain = Chain::<T>::new(7, &[(from, 30)]);
            for nonce in 0..3 {
                chain.submit(sign(7, &w, TxBody { from, to: Address([nonce as u8; 20]), amount: 4, nonce }, &mut rng)).unwrap();
            }
            chain
        };
        let (a, b) = (run(), run());
        assert_eq!(a.state_hash(), b.state_hash());
        assert_eq!(a.state_dump(), b.state_dump());
        assert_eq!(a.state_dump().lines().count(), 5);
    }

    #[test]
    fn tx_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let w = wallet(6);
        let from = Address::from_pubkey::<T>(&w[0].q);
        let tx = sign(1, &w, TxBody { from, to: Address([3; 20]), amount: 12, nonce: 0 }, &mut rng);
        assert_eq!(Transaction::<T>::from_bytes(&tx.to_bytes()).unwrap(), tx);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mutated_tx_never_applies(byte in 0usize..60, bit in 0u8..8) {
            let mut rng = ChaCha20Rng::seed_from_u64(8);
            let w = wallet(8);
            let from = Address::from_pubkey::<T>(&w[0].q);
            let tx = sign(1, &w, TxBody { from, to: Address([4; 20]), amount: 3, nonce: 0 }, &mut rng);
            let mut bytes = tx.to_bytes();
            // mutate inside the signed body fields (from, to, amount, nonce)
            bytes[byte % 56] ^= 1 << bit;
            if let Ok(bad) = Transaction::<T>::from_bytes(&bytes) {
                let mut chain = Chain::<T>::new(1, &[(from, 100)]);
                prop_assert!(chain.submit(bad).is_err());
                prop_assert_eq!(chain.total_supply(), 100);
            }
        }

        #[test]
        fn supply_is_conserved(amounts in proptest::collection::vec(0u64..40, 1..8)) {
            let mut rng = ChaCha20Rng::seed_from_u64(9);
            let w = wallet(9);
            let from = Address::from_pubkey::<T>(&w[0].q);
            let mut chain = Chain::<T>::new(1, &[(from, 100), (Address([7; 20]), 5)]);
            for a in amounts {
                let nonce = chain.next_nonce(&from);
                let _ = chain.submit(sign(1, &w, TxBody { from, to: Address([a as u8; 20]), amount: a, nonce }, &mut rng));
                prop_assert_eq!(chain.total_supply(), 105);
            }
        }
    }
}
