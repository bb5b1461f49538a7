// SPDX-License-Identifier: Apache-2.0

//! Baby-step giant-step discrete log over a bounded range.

use std::collections::HashMap;

use super::{point_key, Group, GroupError};

pub const MAX_DLOG_BOUND: u64 = 1 << 32;

/// Precomputed baby-step table for solving `P = v*B` with `v < bound`.
///
/// The table holds `ceil(sqrt(bound))` entries and is reusable across
/// queries with the same base and bound.
#[derive(Debug, Clone)]
pub struct Bsgs<G: Group> {
    table: HashMap<Vec<u8>, u64>,
    giant_step: G::Point,
    step: u64,
    bound: u64,
}

impl<G: Group> Bsgs<G> {
    pub fn new(base: G::Point, bound: u64) -> Result<Self, GroupError> {
        if bound > MAX_DLOG_BOUND {
            return Err(GroupError::BoundTooLarge(bound));
        }
        let step = ceil_sqrt(bound).max(1);
        let mut table = HashMap::with_capacity(step as usize);
        let mut acc = G::identity();
        for j in 0..step {
            table.entry(point_key::<G>(&acc)).or_insert(j);
            acc = acc + base;
        }
        // acc == step * base
        Ok(Bsgs { table, giant_step: -acc, step, bound })
    }

    pub fn with_generator(bound: u64) -> Result<Self, GroupError> {
        Self::new(G::generator(), bound)
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn solve(&self, target: &G::Point) -> Result<u64, GroupError> {
        let giants = self.bound.div_ceil(self.step);
        let mut gamma = *target;
        for i in 0..giants {
            if let Some(j) = self.table.get(&point_key::<G>(&gamma)) {
                let v = i * self.step + j;
                if v < self.bound {
                    return Ok(v);
                }
                return Err(GroupError::NotFound);
            }
            gamma = gamma + self.giant_step;
        }
        Err(GroupError::NotFound)
    }
}

/// Finds `v < bound` with `v*G = target`.
pub fn brute_force_dlog<G: Group>(target: &G::Point, bound: u64) -> Result<u64, GroupError> {
    Bsgs::<G>::with_generator(bound)?.solve(target)
}

fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}
