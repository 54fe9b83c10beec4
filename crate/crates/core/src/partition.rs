// Copyright 2026 The adhash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Subject-hash sharding of the encoded dataset.

use std::fmt;

use thiserror::Error;

use crate::rdf::{EncodedTriple, TermId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("a cluster needs at least one worker")]
pub struct NoWorkers;

/// Hash function from a subject id to a worker index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubjectHash {
    /// `id mod N`.
    #[default]
    Modulo,
    /// Seeded multiplicative (Fibonacci) hashing, for id layouts that are
    /// correlated with the worker count.
    Multiplicative { seed: u64 },
}

impl fmt::Display for SubjectHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubjectHash::Modulo => f.write_str("mod"),
            SubjectHash::Multiplicative { seed } => write!(f, "mult:{seed}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterConfig {
    num_workers: usize,
    hash: SubjectHash,
}

impl ClusterConfig {
    pub fn new(num_workers: usize, hash: SubjectHash) -> Result<Self, NoWorkers> {
        if num_workers == 0 {
            return Err(NoWorkers);
        }
        Ok(ClusterConfig { num_workers, hash })
    }

    pub fn modulo(num_workers: usize) -> Result<Self, NoWorkers> {
        Self::new(num_workers, SubjectHash::Modulo)
    }

    pub fn num_workers(&self) -> usize {
        self.num_workers
    }

    pub fn hash(&self) -> SubjectHash {
        self.hash
    }

    /// Worker that owns every triple whose subject is `id`.
    #[inline]
    pub fn worker_of(&self, id: TermId) -> usize {
        let n = self.num_workers as u64;
        let h = match self.hash {
            SubjectHash::Modulo => u64::from(id.0),
            SubjectHash::Multiplicative { seed } => {
                (u64::from(id.0) ^ seed).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 17
            }
        };
        (h % n) as usize
    }
}

/// Places every triple on worker `hash(t.s)`; no replication.
pub fn shard(triples: &[EncodedTriple], cfg: &ClusterConfig) -> Vec<Vec<EncodedTriple>> {
    let mut shards = vec![Vec::new(); cfg.num_workers()];
    for t in triples {
        shards[cfg.worker_of(t.s)].push(*t);
    }
    shards
}

/// Max, min and population standard deviation of shard sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceReport {
    pub max: usize,
    pub min: usize,
    pub stddev: f64,
}

impl BalanceReport {
    pub fn from_sizes(sizes: &[usize]) -> Self {
        if sizes.is_empty() {
            return BalanceReport { max: 0, min: 0, stddev: 0.0 };
        }
        let n = sizes.len() as f64;
        let mean = sizes.iter().sum::<usize>() as f64 / n;
        let var = sizes.iter().map(|&s| (s as f64 - mean).powi(2)).sum::<f64>() / n;
        BalanceReport {
            max: *sizes.iter().max().unwrap(),
            min: *sizes.iter().min().unwrap(),
            stddev: var.sqrt(),
        }
    }

    pub fn to_tsv(&self) -> String {
        format!("max\tmin\tstddev\n{}\t{}\t{:.3}\n", self.max, self.min, self.stddev)
    }
}

pub fn balance_report<T>(shards: &[Vec<T>]) -> BalanceReport {
    let sizes: Vec<usize> = shards.iter().map(Vec::len).collect();
    BalanceReport::from_sizes(&sizes)
}
