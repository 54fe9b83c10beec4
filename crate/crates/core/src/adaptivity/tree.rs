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

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rustc_hash::FxHashSet;

use crate::query::{EncodedQuery, Term};
use crate::rdf::TermId;

use super::score::VertexScores;

/// Orientation of a tree edge relative to its parent vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// The parent is the subject of the triple.
    Out,
    /// The parent is the object of the triple.
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdge {
    /// Index of the query pattern this edge stands for.
    pub pattern: usize,
    pub predicate: TermId,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub term: Term<TermId>,
    pub score: f64,
    pub parent: Option<usize>,
    /// Edge to the parent; `None` for the root.
    pub edge: Option<TreeEdge>,
    /// A copy of a vertex already in the tree, made to break a cycle.
    pub duplicate: bool,
    pub children: Vec<usize>,
}

/// Edge-spanning tree of a query rooted at its core vertex. Node 0 is the
/// root; every other node hangs off its parent by exactly one query
/// pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct RedistributionTree {
    pub nodes: Vec<TreeNode>,
}

impl RedistributionTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    /// Non-root node indices.
    pub fn edge_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        1..self.nodes.len()
    }

    pub fn depth(&self, mut i: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.nodes[i].parent {
            d += 1;
            i = p;
        }
        d
    }

    /// Triple pattern of the edge above node `i`, as (subject, predicate,
    /// object) terms.
    pub fn edge_triple(&self, i: usize) -> (Term<TermId>, TermId, Term<TermId>) {
        let node = &self.nodes[i];
        let edge = node.edge.expect("non-root node");
        let parent = &self.nodes[node.parent.expect("non-root node")].term;
        match edge.direction {
            Direction::Out => (parent.clone(), edge.predicate, node.term.clone()),
            Direction::In => (node.term.clone(), edge.predicate, parent.clone()),
        }
    }
}

struct Pending {
    score: f64,
    predicate: TermId,
    name: String,
    seq: usize,
    node: usize,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Pending {
    /// Max-heap order: higher score first, then the smaller predicate, then
    /// the smaller vertex name, then insertion order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then(other.predicate.cmp(&self.predicate))
            .then_with(|| other.name.cmp(&self.name))
            .then(other.seq.cmp(&self.seq))
    }
}

fn vertex_name(q: &EncodedQuery, t: &Term<TermId>) -> String {
    match t {
        Term::Var(v) => q.var_name(*v).to_owned(),
        Term::Const(c) => format!("#{}", c.0),
    }
}

/// Turns `q` into a redistribution tree rooted at its highest-scoring
/// vertex. Traversal is breadth-first over a priority queue of pending
/// vertices; an edge reaching a vertex that is already in the tree or
/// pending ends in a duplicated leaf instead.
///
/// Returns `None` for queries with a variable predicate or no patterns.
pub fn build_redistribution_tree(q: &EncodedQuery, scores: &VertexScores) -> Option<RedistributionTree> {
    if q.patterns.is_empty() || q.has_variable_predicate() {
        return None;
    }
    let core = scores.core()?.clone();
    let adjacency = |v: &Term<TermId>| {
        let mut out = Vec::new();
        for (i, p) in q.patterns.iter().enumerate() {
            let pred = *p.p.constant().expect("constant predicate");
            if &p.s == v {
                out.push((i, p.o.clone(), pred, Direction::Out));
            } else if &p.o == v {
                out.push((i, p.s.clone(), pred, Direction::In));
            }
        }
        out
    };

    let mut nodes = vec![TreeNode {
        term: core.clone(),
        score: scores.get(&core),
        parent: None,
        edge: None,
        duplicate: false,
        children: Vec::new(),
    }];
    let mut used = vec![false; q.patterns.len()];
    let mut visited: FxHashSet<Term<TermId>> = FxHashSet::default();
    let mut pending: FxHashSet<Term<TermId>> = FxHashSet::default();
    let mut heap = BinaryHeap::new();
    let mut seq = 0;

    let mut current = 0;
    visited.insert(core);
    loop {
        let vertex = nodes[current].term.clone();
        for (i, nbr, pred, direction) in adjacency(&vertex) {
            if used[i] {
                continue;
            }
            used[i] = true;
            let duplicate = visited.contains(&nbr) || pending.contains(&nbr);
            let child = nodes.len();
            nodes.push(TreeNode {
                term: nbr.clone(),
                score: scores.get(&nbr),
                parent: Some(current),
                edge: Some(TreeEdge { pattern: i, predicate: pred, direction }),
                duplicate,
                children: Vec::new(),
            });
            nodes[current].children.push(child);
            if !duplicate {
                heap.push(Pending { score: scores.get(&nbr), predicate: pred, name: vertex_name(q, &nbr), seq, node: child });
                seq += 1;
                pending.insert(nbr);
            }
        }
        let Some(next) = heap.pop() else { break };
        current = next.node;
        let term = nodes[current].term.clone();
        pending.remove(&term);
        visited.insert(term);
    }
    Some(RedistributionTree { nodes })
}
