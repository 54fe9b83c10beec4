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

use rustc_hash::FxHashMap;

use crate::storage::WorkerStore;

use super::index::EdgeId;

/// Cap on replicated triples per worker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    Unlimited,
    /// Percentage of the worker's own triple count.
    Percent(f64),
    Triples(usize),
}

impl Default for Budget {
    fn default() -> Self {
        Budget::Percent(20.0)
    }
}

impl Budget {
    /// Replica limit for a worker holding `base` triples; `None` when
    /// unlimited.
    pub fn limit(&self, base: usize) -> Option<usize> {
        match *self {
            Budget::Unlimited => None,
            Budget::Percent(pct) => Some((pct.max(0.0) / 100.0 * base as f64).floor() as usize),
            Budget::Triples(n) => Some(n),
        }
    }
}

/// The data one worker holds for one pattern-index edge: triples shipped in
/// from other workers, and matching triples it already owned. Only the
/// former count against the budget.
#[derive(Debug, Clone, Default)]
pub struct StorageModule {
    pub replicas: WorkerStore,
    pub resident: WorkerStore,
}

impl StorageModule {
    pub fn len(&self) -> usize {
        self.replicas.len() + self.resident.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Per-worker storage modules keyed by pattern-index edge.
#[derive(Debug, Clone)]
pub struct ReplicaIndex {
    workers: Vec<FxHashMap<EdgeId, StorageModule>>,
    replica_counts: Vec<usize>,
}

impl ReplicaIndex {
    pub fn new(num_workers: usize) -> Self {
        ReplicaIndex { workers: vec![FxHashMap::default(); num_workers], replica_counts: vec![0; num_workers] }
    }

    pub fn module(&self, worker: usize, edge: EdgeId) -> Option<&StorageModule> {
        self.workers[worker].get(&edge)
    }

    pub fn insert(&mut self, worker: usize, edge: EdgeId, module: StorageModule) {
        self.replica_counts[worker] += module.replicas.len();
        if let Some(old) = self.workers[worker].insert(edge, module) {
            self.replica_counts[worker] -= old.replicas.len();
        }
    }

    /// Drops the modules of `edge` everywhere; returns the replicas freed.
    pub fn remove(&mut self, edge: EdgeId) -> usize {
        let mut freed = 0;
        for (w, modules) in self.workers.iter_mut().enumerate() {
            if let Some(m) = modules.remove(&edge) {
                self.replica_counts[w] -= m.replicas.len();
                freed += m.replicas.len();
            }
        }
        freed
    }

    pub fn replica_count(&self, worker: usize) -> usize {
        self.replica_counts[worker]
    }

    pub fn replica_counts(&self) -> &[usize] {
        &self.replica_counts
    }

    pub fn total_replicas(&self) -> usize {
        self.replica_counts.iter().sum()
    }

    pub fn module_count(&self, worker: usize) -> usize {
        self.workers[worker].len()
    }
}
