// SPDX-License-Identifier: Apache-2.0

//! Segmented verifiable encryption of elliptic-curve discrete logs with
//! gradual release, {n,n} Schnorr multi-signatures, and a three-party
//! scriptless cross-chain swap run against two mock ledgers.

pub mod elgamal;
pub mod group;
pub mod juggling;
pub mod ledger;
pub mod rangeproof;
pub mod segmentation;
pub mod sigma;
pub mod swap;
pub mod threshold;
pub mod wire;
