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

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::partition::{shard, ClusterConfig};
use crate::planner::PatternStats;
use crate::query::{Term, TriplePattern};
use crate::rdf::{EncodedTriple, TermId};
use crate::storage::{StorePattern, WorkerStore};

use super::table::bind_triple;
use super::trace::{Endpoint, ExecTrace, MessageKind};

/// Anything a worker can match triple patterns against.
pub trait TripleSource: Sync {
    fn visit(&self, pattern: StorePattern, f: &mut dyn FnMut(EncodedTriple));

    fn count(&self, pattern: StorePattern) -> usize {
        let mut n = 0;
        self.visit(pattern, &mut |_| n += 1);
        n
    }
}

impl TripleSource for WorkerStore {
    fn visit(&self, pattern: StorePattern, f: &mut dyn FnMut(EncodedTriple)) {
        self.for_each_match(pattern, f);
    }

    fn count(&self, pattern: StorePattern) -> usize {
        self.count_matches(pattern)
    }
}

/// Where a worker matches one pattern: its main index, or the replica
/// storage module of a pattern-index edge. A module holds the edge's
/// replicated triples plus, separately, the matching triples the worker
/// already owned.
#[derive(Debug, Clone, Copy)]
pub enum PatternSource<'a> {
    Main(&'a WorkerStore),
    Module { replicas: &'a WorkerStore, resident: &'a WorkerStore },
}

impl TripleSource for PatternSource<'_> {
    fn visit(&self, pattern: StorePattern, f: &mut dyn FnMut(EncodedTriple)) {
        match self {
            PatternSource::Main(store) => store.for_each_match(pattern, f),
            PatternSource::Module { replicas, resident } => {
                replicas.for_each_match(pattern, &mut *f);
                resident.for_each_match(pattern, f);
            }
        }
    }

    fn count(&self, pattern: StorePattern) -> usize {
        match self {
            PatternSource::Main(store) => store.count_matches(pattern),
            PatternSource::Module { replicas, resident } => {
                replicas.count_matches(pattern) + resident.count_matches(pattern)
            }
        }
    }
}

/// The workers' main indexes under one subject-hash configuration.
#[derive(Debug, Clone)]
pub struct Cluster {
    config: ClusterConfig,
    workers: Vec<WorkerStore>,
}

impl Cluster {
    /// Shards `triples` by subject and indexes each shard; duplicates are
    /// dropped.
    pub fn load(triples: &[EncodedTriple], config: ClusterConfig) -> Self {
        let workers = shard(triples, &config)
            .into_par_iter()
            .map(WorkerStore::from_triples)
            .collect();
        Cluster { config, workers }
    }

    pub fn config(&self) -> &ClusterConfig {
        &self.config
    }

    pub fn num_workers(&self) -> usize {
        self.workers.len()
    }

    pub fn worker(&self, w: usize) -> &WorkerStore {
        &self.workers[w]
    }

    pub fn workers(&self) -> &[WorkerStore] {
        &self.workers
    }

    pub fn worker_of(&self, id: TermId) -> usize {
        self.config.worker_of(id)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.workers.iter().map(WorkerStore::len).collect()
    }

    pub fn total_triples(&self) -> usize {
        self.workers.iter().map(WorkerStore::len).sum()
    }

    /// Asks every worker for the matches of `pattern` and combines the
    /// counts. Distinct subjects add up exactly since each subject lives on
    /// one worker; distinct objects and predicates are upper bounds.
    pub fn probe(&self, pattern: &TriplePattern<TermId>, trace: Option<&mut ExecTrace>) -> PatternStats {
        let lookup = StorePattern {
            s: pattern.s.constant().copied(),
            p: pattern.p.constant().copied(),
            o: pattern.o.constant().copied(),
        };
        let vars = pattern.variables();
        let replies: Vec<[usize; 4]> = self
            .workers
            .par_iter()
            .map(|store| {
                let mut card = 0;
                let mut seen: [FxHashSet<TermId>; 3] = Default::default();
                store.for_each_match(lookup, |t| {
                    if bind_triple(pattern, &t, &vars).is_some() {
                        card += 1;
                        seen[0].insert(t.s);
                        seen[1].insert(t.p);
                        seen[2].insert(t.o);
                    }
                });
                [card, seen[0].len(), seen[1].len(), seen[2].len()]
            })
            .collect();
        if let Some(trace) = trace {
            for w in 0..self.workers.len() {
                trace.send(MessageKind::CardinalityProbe, Endpoint::Master, Endpoint::Worker(w), 0, None);
                trace.send(MessageKind::CardinalityReply, Endpoint::Worker(w), Endpoint::Master, 0, None);
            }
        }
        let sum = |i: usize| replies.iter().map(|r| r[i]).sum::<usize>() as f64;
        let distinct = |i: usize, t: &Term<TermId>| if t.is_var() { sum(i + 1) } else { 1.0f64.min(sum(0)) };
        PatternStats::new(sum(0), distinct(0, &pattern.s), distinct(1, &pattern.p), distinct(2, &pattern.o))
    }
}
