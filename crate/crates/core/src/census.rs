//! Exhaustive census of `s(π)` over `B_n`, split by sign class.

use std::collections::BTreeMap;
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{s_via_circ, CycleCounter};
use crate::serde_big::biguint_string;
use crate::signed::{check_rank, order_bn, unrank_into, PermError, SignedPermutation};

/// Ranks above this are refused by the census unless overridden.
pub const CENSUS_RANK_LIMIT: usize = 8;

/// One element in this many is re-checked through `π°`.
pub const CROSS_CHECK_STRIDE: u64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("shard {start}..{end} is outside 0..{total}")]
    ShardOutOfRange { start: u64, end: u64, total: u64 },
    #[error("cannot merge census tables of ranks {left} and {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("graph and π° cycle counts disagree at {pi}: {graph} vs {circ}")]
    CrossCheckMismatch { pi: String, graph: usize, circ: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    #[serde(with = "biguint_string")]
    pub positive: BigUint,
    #[serde(with = "biguint_string")]
    pub nonpositive: BigUint,
}

impl ClassCounts {
    pub fn total(&self) -> BigUint {
        &self.positive + &self.nonpositive
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HultmanTable {
    pub n: usize,
    /// Keyed by cycle count `k`; only rows with a nonzero total are kept.
    pub counts: BTreeMap<usize, ClassCounts>,
}

impl HultmanTable {
    pub fn empty(n: usize) -> Self {
        HultmanTable { n, counts: BTreeMap::new() }
    }

    fn from_raw(n: usize, positive: &[u64], nonpositive: &[u64]) -> Self {
        let mut counts = BTreeMap::new();
        for k in 0..positive.len() {
            if positive[k] + nonpositive[k] > 0 {
                counts.insert(
                    k,
                    ClassCounts { positive: BigUint::from(positive[k]), nonpositive: BigUint::from(nonpositive[k]) },
                );
            }
        }
        HultmanTable { n, counts }
    }

    /// Adds `other` into `self`; rank must match.
    pub fn merge(&mut self, other: &HultmanTable) -> Result<(), CensusError> {
        if self.n != other.n {
            return Err(CensusError::RankMismatch { left: self.n, right: other.n });
        }
        for (k, c) in &other.counts {
            let row = self.counts.entry(*k).or_default();
            row.positive += &c.positive;
            row.nonpositive += &c.nonpositive;
        }
        Ok(())
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().map(ClassCounts::total).sum()
    }

    pub fn positive_total(&self) -> BigUint {
        self.counts.values().map(|c| c.positive.clone()).sum()
    }

    /// SH⁺(n, k) for each `k` with a nonzero positive count.
    pub fn unsigned(&self) -> BTreeMap<usize, BigUint> {
        self.counts
            .iter()
            .filter(|(_, c)| !c.positive.is_zero())
            .map(|(k, c)| (*k, c.positive.clone()))
            .collect()
    }

    /// CSV with header `n,k,positive,nonpositive,total`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "k", "positive", "nonpositive", "total"]).expect("in-memory write");
        for (k, c) in &self.counts {
            w.write_record([
                self.n.to_string(),
                k.to_string(),
                c.positive.to_string(),
                c.nonpositive.to_string(),
                c.total().to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
    }
}

/// Counts over the enumeration indices in `shard`.
///
/// Every [`CROSS_CHECK_STRIDE`]-th index is also counted through `π°`.
pub fn census_checkpoint(n: usize, shard: Range<u64>) -> Result<HultmanTable, CensusError> {
    if n == 0 {
        return Err(PermError::Empty.into());
    }
    let total = order_bn(n);
    if shard.start > shard.end || shard.end > total {
        return Err(CensusError::ShardOutOfRange { start: shard.start, end: shard.end, total });
    }
    let mut positive = vec![0u64; n + 2];
    let mut nonpositive = vec![0u64; n + 2];
    let mut counter = CycleCounter::new();
    let mut window = vec![0i32; n];
    for index in shard {
        unrank_into(n, index, &mut window);
        let s = counter.count(&window);
        if index % CROSS_CHECK_STRIDE == 0 {
            let pi = SignedPermutation::from_window_unchecked(window.clone());
            let circ = s_via_circ(&pi).map_err(|_| CensusError::CrossCheckMismatch {
                pi: pi.to_string(),
                graph: s,
                circ: pi.pi_circ().cycle_count(),
            })?;
            if circ != s {
                return Err(CensusError::CrossCheckMismatch { pi: pi.to_string(), graph: s, circ });
            }
        }
        if window.iter().all(|&v| v > 0) {
            positive[s] += 1;
        } else {
            nonpositive[s] += 1;
        }
    }
    Ok(HultmanTable::from_raw(n, &positive, &nonpositive))
}

/// Contiguous shards covering `0..total`, as even as possible.
pub fn shard_ranges(total: u64, shards: usize) -> Vec<Range<u64>> {
    let shards = shards.max(1) as u64;
    (0..shards).map(|i| (total * i / shards)..(total * (i + 1) / shards)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusOptions {
    pub allow_large: bool,
    /// Number of index shards; the result does not depend on it.
    pub shards: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { allow_large: false, shards: 64 }
    }
}

/// SH(n, k) split into the positive and nonpositive classes.
pub fn signed_hultman_table(n: usize, opts: CensusOptions) -> Result<HultmanTable, CensusError> {
    check_rank(n, CENSUS_RANK_LIMIT, opts.allow_large)?;
    let parts: Vec<HultmanTable> = shard_ranges(order_bn(n), opts.shards)
        .into_par_iter()
        .map(|r| census_checkpoint(n, r))
        .collect::<Result<_, _>>()?;
    let mut table = HultmanTable::empty(n);
    for p in &parts {
        table.merge(p)?;
    }
    Ok(table)
}

/// The positive column of [`signed_hultman_table`].
pub fn unsigned_hultman_table(n: usize, opts: CensusOptions) -> Result<BTreeMap<usize, BigUint>, CensusError> {
    Ok(signed_hultman_table(n, opts)?.unsigned())
}
