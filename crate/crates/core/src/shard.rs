//! Deterministic job splitting and machine-readable report records.
//!
//! A job is identified by its full specification; the derived seed fixes
//! every randomized choice downstream, so identical specifications give
//! bit-identical output. Sharding partitions records by index, and the
//! merged output over any shard count equals the unsharded output after
//! a canonical sort.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

/// One deterministic unit of work.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: String,
    pub inputs: Vec<String>,
    pub shard_index: u32,
    pub shard_count: u32,
    pub distance_threshold: usize,
    pub budget: u64,
    pub output: Option<String>,
}

impl JobSpec {
    pub fn new(command: &str) -> Self {
        JobSpec {
            command: command.to_string(),
            inputs: Vec::new(),
            shard_index: 0,
            shard_count: 1,
            distance_threshold: 0,
            budget: crate::enumeration_budget() as u64,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shard_count == 0 || self.shard_index >= self.shard_count {
            return Err(Error::Invalid(format!(
                "shard {}/{} out of range",
                self.shard_index, self.shard_count
            )));
        }
        Ok(())
    }

    /// Records are partitioned by index, round-robin.
    pub fn owns_record(&self, index: usize) -> bool {
        index as u32 % self.shard_count == self.shard_index
    }

    /// Seed for every randomized internal, derived from the whole spec.
    pub fn seed(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.command.hash(&mut h);
        self.inputs.hash(&mut h);
        self.shard_index.hash(&mut h);
        self.shard_count.hash(&mut h);
        self.distance_threshold.hash(&mut h);
        h.finish()
    }
}

/// Parses `i/N` shard syntax with 1-based or 0-based index: `2/10` means
/// shard index 2 of 10.
pub fn parse_shard(s: &str) -> Result<(u32, u32)> {
    let (i, n) = s
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("expected i/N shard syntax, got {s:?}")))?;
    let i: u32 = i
        .parse()
        .map_err(|_| Error::Parse(format!("bad shard index {i:?}")))?;
    let n: u32 = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad shard count {n:?}")))?;
    if n == 0 || i >= n {
        return Err(Error::Invalid(format!("shard {i}/{n} out of range")));
    }
    Ok((i, n))
}

/// One verdict line of an extension sweep, emitted as JSON lines.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerdictRecord {
    pub source: String,
    pub subspace_or_coset_id: String,
    pub dim: usize,
    pub doubly_even: bool,
    pub min_distance_or_bound: String,
    pub verdict: String,
}

/// One line of the additive-dataset filter report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FilterLine {
    pub index: usize,
    pub m: usize,
    pub d_phi: String,
    pub status: String,
}

impl FilterLine {
    /// The plain-text form `index m d_phi status`.
    pub fn to_text(&self) -> String {
        format!("{} {} {} {}", self.index, self.m, self.d_phi, self.status)
    }
}
