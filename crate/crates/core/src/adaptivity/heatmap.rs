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

use rustc_hash::{FxHashMap, FxHashSet};

use crate::rdf::TermId;

use super::pattern::{Label, PatternNode, PatternTree, VertexMeta};
use super::tree::{Direction, RedistributionTree};

#[derive(Debug, Clone, Default)]
struct HeatNode {
    /// How many queries used the edge above this node.
    count: u64,
    children: FxHashMap<(TermId, Direction), usize>,
    meta: VertexMeta,
    /// Set once the edge could not be materialized within the budget.
    too_large: bool,
}

/// Prefix tree of query templates. Every recorded query is reduced to its
/// redistribution tree with constants turned into variables and merged in
/// from the root; edges count the queries that used them and vertices keep
/// the constants they were seen with.
#[derive(Debug, Clone)]
pub struct HeatMap {
    nodes: Vec<HeatNode>,
}

impl Default for HeatMap {
    fn default() -> Self {
        HeatMap { nodes: vec![HeatNode::default()] }
    }
}

/// A hot region of the heat map with dominant constants filled in.
/// `heat_nodes[i]` is the heat-map vertex behind `tree.nodes[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HotPattern {
    pub tree: PatternTree,
    pub heat_nodes: Vec<usize>,
}

impl HeatMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Merges one query. Each heat-map edge is counted at most once per
    /// query. Returns the heat-map vertex of every tree node.
    pub fn record(&mut self, tree: &RedistributionTree) -> Vec<usize> {
        let mut mapped = vec![0usize; tree.nodes.len()];
        let mut labels: FxHashMap<usize, Label> = FxHashMap::default();
        labels.insert(0, Label::of(&tree.nodes[0].term));
        let mut counted: FxHashSet<usize> = FxHashSet::default();
        for i in tree.edge_nodes() {
            let node = &tree.nodes[i];
            let edge = node.edge.expect("non-root node");
            let key = (edge.predicate, edge.direction);
            let parent = mapped[node.parent.expect("non-root node")];
            let h = match self.nodes[parent].children.get(&key) {
                Some(&h) => h,
                None => {
                    let h = self.nodes.len();
                    self.nodes.push(HeatNode::default());
                    self.nodes[parent].children.insert(key, h);
                    h
                }
            };
            if counted.insert(h) {
                self.nodes[h].count += 1;
            }
            mapped[i] = h;
            let label = Label::of(&node.term);
            labels
                .entry(h)
                .and_modify(|l| {
                    if *l != label {
                        *l = Label::Var;
                    }
                })
                .or_insert(label);
        }
        for (h, label) in labels {
            self.nodes[h].meta.vote(label);
        }
        mapped
    }

    pub fn edge_count(&self, node: usize) -> u64 {
        self.nodes[node].count
    }

    pub fn meta(&self, node: usize) -> &VertexMeta {
        &self.nodes[node].meta
    }

    /// Heat-map vertex reached from `node` by `(predicate, direction)`.
    pub fn child(&self, node: usize, predicate: TermId, direction: Direction) -> Option<usize> {
        self.nodes[node].children.get(&(predicate, direction)).copied()
    }

    pub fn mark_too_large(&mut self, node: usize) {
        self.nodes[node].too_large = true;
    }

    pub fn is_too_large(&self, node: usize) -> bool {
        self.nodes[node].too_large
    }

    /// The region reachable from the root over edges used at least
    /// `threshold` times, skipping edges known not to fit the budget.
    /// Vertices carry their dominant constant. `None` when no edge is hot.
    pub fn hot_region(&self, threshold: u64) -> Option<HotPattern> {
        self.region(threshold, |_| true)
    }

    /// [`HeatMap::hot_region`] limited to the heat-map vertices in `nodes`,
    /// typically those one query was recorded under.
    pub fn hot_region_within(&self, threshold: u64, nodes: &[usize]) -> Option<HotPattern> {
        let allowed: FxHashSet<usize> = nodes.iter().copied().collect();
        self.region(threshold, |h| allowed.contains(&h))
    }

    fn region(&self, threshold: u64, allowed: impl Fn(usize) -> bool) -> Option<HotPattern> {
        let mut tree = PatternTree {
            nodes: vec![PatternNode { label: self.nodes[0].meta.dominant(), parent: None, edge: None, children: Vec::new() }],
        };
        let mut heat_nodes = vec![0];
        let mut i = 0;
        while i < tree.nodes.len() {
            let h = heat_nodes[i];
            let mut children: Vec<(&(TermId, Direction), &usize)> = self.nodes[h].children.iter().collect();
            children.sort();
            for (&key, &c) in children {
                let child = &self.nodes[c];
                if child.count < threshold || child.too_large || !allowed(c) {
                    continue;
                }
                let idx = tree.nodes.len();
                tree.nodes.push(PatternNode { label: child.meta.dominant(), parent: Some(i), edge: Some(key), children: Vec::new() });
                tree.nodes[i].children.push(idx);
                heat_nodes.push(c);
            }
            i += 1;
        }
        (tree.nodes.len() > 1).then_some(HotPattern { tree, heat_nodes })
    }
}
