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

use std::fmt::Write as _;

use log::{debug, info, warn};
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::exec::{Cluster, Endpoint, ExecTrace, MessageKind, PatternSource, TripleSource};
use crate::query::EncodedQuery;
use crate::rdf::{Dictionary, EncodedTriple, TermId};
use crate::storage::{StorePattern, WorkerStore};

use super::heatmap::{HeatMap, HotPattern};
use super::index::{EdgeId, PatternIndex};
use super::pattern::{Label, PatternTree};
use super::replica::{Budget, ReplicaIndex, StorageModule};
use super::score::{score_vertices, PredicateScores};
use super::tree::{build_redistribution_tree, Direction, RedistributionTree};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptivityConfig {
    /// Edge frequency at which a template region becomes hot.
    pub threshold: u64,
    pub budget: Budget,
}

impl Default for AdaptivityConfig {
    fn default() -> Self {
        AdaptivityConfig { threshold: 10, budget: Budget::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eviction {
    pub epoch: u64,
    pub edge: EdgeId,
    pub triples_freed: usize,
}

/// A template edge that could not be materialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Skipped {
    pub epoch: u64,
    pub predicate: TermId,
    pub direction: Direction,
    /// Largest per-worker replica need of the edge.
    pub needed: usize,
}

/// Outcome of one redistribution run.
#[derive(Debug, Clone, Default)]
pub struct IrdReport {
    pub epoch: u64,
    /// Pattern-index edges created by the run.
    pub added: Vec<EdgeId>,
    pub evicted: usize,
    pub skipped: usize,
    pub trace: ExecTrace,
}

impl IrdReport {
    pub fn payload_rows(&self) -> usize {
        self.trace.payload_rows()
    }
}

/// A query matched against the pattern index: for each query pattern, the
/// pattern-index edge serving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMatch {
    pub pattern_edges: Vec<EdgeId>,
}

/// Workload monitor, pattern index and replica storage of one cluster.
#[derive(Debug, Clone)]
pub struct Adaptivity {
    config: AdaptivityConfig,
    scores: PredicateScores,
    heat: HeatMap,
    index: PatternIndex,
    replicas: ReplicaIndex,
    limits: Vec<Option<usize>>,
    clock: u64,
    epoch: u64,
    evictions: Vec<Eviction>,
    skipped: Vec<Skipped>,
}

impl Adaptivity {
    pub fn new(cluster: &Cluster, scores: PredicateScores, config: AdaptivityConfig) -> Self {
        let limits = cluster.sizes().into_iter().map(|base| config.budget.limit(base)).collect();
        Adaptivity {
            config,
            scores,
            heat: HeatMap::new(),
            index: PatternIndex::new(),
            replicas: ReplicaIndex::new(cluster.num_workers()),
            limits,
            clock: 0,
            epoch: 0,
            evictions: Vec::new(),
            skipped: Vec::new(),
        }
    }

    pub fn config(&self) -> &AdaptivityConfig {
        &self.config
    }

    pub fn scores(&self) -> &PredicateScores {
        &self.scores
    }

    pub fn heat_map(&self) -> &HeatMap {
        &self.heat
    }

    pub fn pattern_index(&self) -> &PatternIndex {
        &self.index
    }

    pub fn replica_index(&self) -> &ReplicaIndex {
        &self.replicas
    }

    /// Replica cap per worker; `None` when unlimited.
    pub fn limits(&self) -> &[Option<usize>] {
        &self.limits
    }

    pub fn evictions(&self) -> &[Eviction] {
        &self.evictions
    }

    pub fn skipped(&self) -> &[Skipped] {
        &self.skipped
    }

    /// Advances the logical clock; called once per admitted query.
    pub fn tick(&mut self) -> u64 {
        self.clock += 1;
        self.clock
    }

    pub fn redistribution_tree(&self, q: &EncodedQuery) -> Option<RedistributionTree> {
        build_redistribution_tree(q, &score_vertices(q, &self.scores))
    }

    /// Looks the query's tree up in the pattern index and refreshes the
    /// matched edges.
    pub fn match_query(&mut self, tree: &RedistributionTree) -> Option<IndexMatch> {
        let pattern = PatternTree::from_query_tree(tree);
        let mapping = self.index.match_and_touch(&pattern, self.clock)?;
        let mut pattern_edges = vec![usize::MAX; tree.nodes.len() - 1];
        for i in tree.edge_nodes() {
            pattern_edges[tree.nodes[i].edge.expect("non-root node").pattern] = mapping[i];
        }
        Some(IndexMatch { pattern_edges })
    }

    /// Where worker `w` matches query pattern `i` of a matched query.
    pub fn source<'a>(&'a self, cluster: &'a Cluster, m: &IndexMatch, w: usize, i: usize) -> PatternSource<'a> {
        let edge = m.pattern_edges[i];
        if self.index.is_core_subject_edge(edge) {
            return PatternSource::Main(cluster.worker(w));
        }
        let module = self.replicas.module(w, edge).expect("every materialized edge has a module on every worker");
        PatternSource::Module { replicas: &module.replicas, resident: &module.resident }
    }

    /// Counts the query in the heat map. Returns the hot part of its
    /// template when that is not yet fully materialized.
    pub fn record(&mut self, tree: &RedistributionTree) -> Option<HotPattern> {
        let nodes = self.heat.record(tree);
        let hot = self.heat.hot_region_within(self.config.threshold, &nodes)?;
        self.index.find_match(&hot.tree).is_none().then_some(hot)
    }

    /// Materializes `hot` edge by edge in preorder. Edges already in the
    /// pattern index are reused; edges that cannot fit the budget are
    /// skipped along with their descendants.
    pub fn redistribute(&mut self, hot: &HotPattern, cluster: &Cluster) -> IrdReport {
        self.epoch += 1;
        let now = self.clock;
        let mut report = IrdReport { epoch: self.epoch, trace: ExecTrace::new(false), ..Default::default() };
        let tree = &hot.tree;
        let root_label = tree.nodes[0].label;
        let root = {
            let mut roots: Vec<EdgeId> =
                self.index.roots().iter().copied().filter(|&r| self.index.node(r).label.covers(root_label)).collect();
            roots.sort_by_key(|&r| self.index.node(r).label == Label::Var);
            match roots.first() {
                Some(&r) => r,
                None => self.index.root_for(root_label, now),
            }
        };
        let mut protected: FxHashSet<EdgeId> = FxHashSet::default();
        protected.insert(root);
        let mut pi_of: Vec<Option<EdgeId>> = vec![None; tree.nodes.len()];
        pi_of[0] = Some(root);

        for t in tree.preorder().into_iter().skip(1) {
            let node = &tree.nodes[t];
            let parent = node.parent.expect("non-root node");
            let Some(parent_pi) = pi_of[parent] else { continue };
            let (p, d) = node.edge.expect("non-root node");
            if let Some(c) = self.index.covering_child(parent_pi, p, d, node.label) {
                self.index.touch(&[c], now);
                protected.insert(c);
                pi_of[t] = Some(c);
                continue;
            }
            if parent == 0 && d == Direction::Out {
                let id = self.index.add_child(parent_pi, p, d, node.label, now);
                protected.insert(id);
                pi_of[t] = Some(id);
                report.added.push(id);
                continue;
            }
            report.trace.begin_step(format!("IRD {}", t));
            let candidates = if parent == 0 {
                self.core_candidates(cluster, tree.nodes[0].label, p, node.label, &mut report.trace)
            } else {
                self.collocate(cluster, parent_pi, p, d, node.label, &mut report.trace)
            };
            let modules: Vec<StorageModule> = candidates
                .into_par_iter()
                .enumerate()
                .map(|(w, cands)| {
                    let main = cluster.worker(w);
                    let mut m = StorageModule::default();
                    for c in cands {
                        if main.contains(&c) {
                            m.resident.insert(c);
                        } else {
                            m.replicas.insert(c);
                        }
                    }
                    m
                })
                .collect();
            let needed: Vec<usize> = modules.iter().map(|m| m.replicas.len()).collect();
            if !self.make_room(&needed, &protected, &mut report) {
                let worst = needed.iter().copied().max().unwrap_or(0);
                warn!("pattern edge {t} needs {worst} replicas on one worker and does not fit the budget; skipped");
                self.heat.mark_too_large(hot.heat_nodes[t]);
                self.skipped.push(Skipped { epoch: self.epoch, predicate: p, direction: d, needed: worst });
                report.skipped += 1;
                continue;
            }
            let id = self.index.add_child(parent_pi, p, d, node.label, now);
            for (w, m) in modules.into_iter().enumerate() {
                self.replicas.insert(w, id, m);
            }
            protected.insert(id);
            pi_of[t] = Some(id);
            report.added.push(id);
        }
        self.index.prune_empty_roots();
        info!(
            "redistribution epoch {}: {} edges added, {} evicted, {} skipped, {} rows shipped",
            self.epoch,
            report.added.len(),
            report.evicted,
            report.skipped,
            report.payload_rows()
        );
        report
    }

    fn fits(&self, needed: &[usize]) -> bool {
        needed
            .iter()
            .enumerate()
            .all(|(w, &n)| self.limits[w].is_none_or(|lim| self.replicas.replica_count(w) + n <= lim))
    }

    /// Evicts least recently used subtrees until `needed` fits. Returns
    /// false when it cannot be made to fit.
    fn make_room(&mut self, needed: &[usize], protected: &FxHashSet<EdgeId>, report: &mut IrdReport) -> bool {
        if needed.iter().enumerate().any(|(w, &n)| self.limits[w].is_some_and(|lim| n > lim)) {
            return false;
        }
        while !self.fits(needed) {
            let Some(victim) = self.index.lru_victim(&|e| protected.contains(&e)) else {
                return false;
            };
            let removed = self.index.remove_subtree(victim);
            let freed: usize = removed.iter().map(|&e| self.replicas.remove(e)).sum();
            debug!("evicted pattern edge {victim} ({} edges, {freed} replicas)", removed.len());
            self.evictions.push(Eviction { epoch: self.epoch, edge: victim, triples_freed: freed });
            report.evicted += 1;
        }
        true
    }

    /// Phase one: triples on an incoming core edge go to the owner of their
    /// object.
    fn core_candidates(
        &self,
        cluster: &Cluster,
        core: Label,
        p: TermId,
        child: Label,
        trace: &mut ExecTrace,
    ) -> Vec<Vec<EncodedTriple>> {
        let n = cluster.num_workers();
        let lookup = StorePattern { s: child.constant(), p: Some(p), o: core.constant() };
        let outboxes: Vec<Vec<Vec<EncodedTriple>>> = cluster
            .workers()
            .par_iter()
            .map(|store| {
                let mut out = vec![Vec::new(); n];
                store.for_each_match(lookup, |t| out[cluster.worker_of(t.o)].push(t));
                out
            })
            .collect();
        let mut inbox = vec![Vec::new(); n];
        for (from, out) in outboxes.into_iter().enumerate() {
            for (to, triples) in out.into_iter().enumerate() {
                if triples.is_empty() {
                    continue;
                }
                trace.send(MessageKind::Redistribution, Endpoint::Worker(from), Endpoint::Worker(to), triples.len(), None);
                inbox[to].extend(triples);
            }
        }
        inbox
    }

    /// Values of the vertex below `edge` held by worker `w`.
    fn vertex_values(&self, cluster: &Cluster, edge: EdgeId, w: usize) -> Vec<TermId> {
        let node = self.index.node(edge);
        let (p, d) = node.edge.expect("non-root edge");
        let parent_label = self.index.node(node.parent.expect("non-root edge")).label;
        let (s, o) = match d {
            Direction::Out => (parent_label.constant(), node.label.constant()),
            Direction::In => (node.label.constant(), parent_label.constant()),
        };
        let lookup = StorePattern { s, p: Some(p), o };
        let mut values = FxHashSet::default();
        let mut take = |t: EncodedTriple| {
            values.insert(if d == Direction::Out { t.o } else { t.s });
        };
        if self.index.is_core_subject_edge(edge) {
            cluster.worker(w).visit(lookup, &mut take);
        } else if let Some(m) = self.replicas.module(w, edge) {
            PatternSource::Module { replicas: &m.replicas, resident: &m.resident }.visit(lookup, &mut take);
        }
        let mut values: Vec<TermId> = values.into_iter().collect();
        values.sort_unstable();
        values
    }

    /// Phase two: collocates the triples of a deeper edge with the parent
    /// vertex values by a semi-join. The values go to their owner when the
    /// parent is the subject of the new edge and to every worker otherwise.
    fn collocate(
        &self,
        cluster: &Cluster,
        parent: EdgeId,
        p: TermId,
        d: Direction,
        child: Label,
        trace: &mut ExecTrace,
    ) -> Vec<Vec<EncodedTriple>> {
        let n = cluster.num_workers();
        let values: Vec<Vec<TermId>> = (0..n).into_par_iter().map(|w| self.vertex_values(cluster, parent, w)).collect();
        let mut inbox: Vec<Vec<(usize, Vec<TermId>)>> = vec![Vec::new(); n];
        let kind = if d == Direction::Out { MessageKind::ProjectionHash } else { MessageKind::ProjectionBroadcast };
        for (from, vals) in values.into_iter().enumerate() {
            if vals.is_empty() {
                continue;
            }
            let mut per: Vec<Vec<TermId>> = vec![Vec::new(); n];
            match d {
                Direction::Out => vals.into_iter().for_each(|v| per[cluster.worker_of(v)].push(v)),
                Direction::In => per.iter_mut().for_each(|slot| slot.clone_from(&vals)),
            }
            for (to, vals) in per.into_iter().enumerate() {
                if vals.is_empty() {
                    continue;
                }
                trace.send(kind, Endpoint::Worker(from), Endpoint::Worker(to), vals.len(), None);
                inbox[to].push((from, vals));
            }
        }
        let replies: Vec<Vec<(usize, Vec<EncodedTriple>)>> = inbox
            .par_iter()
            .enumerate()
            .map(|(r, received)| {
                let store: &WorkerStore = cluster.worker(r);
                received
                    .iter()
                    .map(|(from, vals)| {
                        let mut out = Vec::new();
                        for &v in vals {
                            let lookup = match d {
                                Direction::Out => StorePattern { s: Some(v), p: Some(p), o: child.constant() },
                                Direction::In => StorePattern { s: child.constant(), p: Some(p), o: Some(v) },
                            };
                            store.for_each_match(lookup, |t| out.push(t));
                        }
                        (*from, out)
                    })
                    .collect()
            })
            .collect();
        let mut candidates = vec![Vec::new(); n];
        for (r, out) in replies.into_iter().enumerate() {
            for (to, triples) in out {
                if triples.is_empty() {
                    continue;
                }
                trace.send(MessageKind::CandidateTriples, Endpoint::Worker(r), Endpoint::Worker(to), triples.len(), None);
                candidates[to].extend(triples);
            }
        }
        candidates
    }

    /// Pattern-index tree, per-worker replica counts and the eviction log.
    pub fn report(&self, dict: &Dictionary) -> String {
        let mut out = String::from("# pattern index\n");
        out.push_str(&self.index.dump(dict));
        out.push_str("# replicas\nworker\treplicas\tlimit\tmodules\n");
        for w in 0..self.limits.len() {
            let limit = self.limits[w].map_or_else(|| "-".to_owned(), |l| l.to_string());
            let _ = writeln!(out, "{w}\t{}\t{limit}\t{}", self.replicas.replica_count(w), self.replicas.module_count(w));
        }
        out.push_str("# evictions\nepoch\tpattern_id\ttriples_freed\n");
        for e in &self.evictions {
            let _ = writeln!(out, "{}\t{}\t{}", e.epoch, e.edge, e.triples_freed);
        }
        out
    }
}
