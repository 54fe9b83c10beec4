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

use crate::query::Term;
use crate::rdf::TermId;

use super::tree::{Direction, RedistributionTree};

/// Vertex label in workload templates: any value, or one fixed constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Var,
    Const(TermId),
}

impl Label {
    pub fn of(term: &Term<TermId>) -> Self {
        match term {
            Term::Var(_) => Label::Var,
            Term::Const(c) => Label::Const(*c),
        }
    }

    /// True when data materialized for `self` serves a query vertex
    /// labelled `query`.
    pub fn covers(self, query: Label) -> bool {
        self == Label::Var || self == query
    }

    pub fn constant(self) -> Option<TermId> {
        match self {
            Label::Var => None,
            Label::Const(c) => Some(c),
        }
    }
}

/// Streaming majority vote over the labels seen at one template vertex,
/// with exact counts to confirm the candidate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VertexMeta {
    pub visits: u64,
    pub constants: FxHashMap<TermId, u64>,
    candidate: Option<Label>,
    lead: u64,
}

impl VertexMeta {
    pub fn vote(&mut self, label: Label) {
        self.visits += 1;
        if let Label::Const(c) = label {
            *self.constants.entry(c).or_default() += 1;
        }
        match self.candidate {
            Some(c) if c == label => self.lead += 1,
            _ if self.lead == 0 => {
                self.candidate = Some(label);
                self.lead = 1;
            }
            _ => self.lead -= 1,
        }
    }

    /// The constant held by a strict majority of visits, if any.
    pub fn dominant(&self) -> Label {
        match self.candidate {
            Some(Label::Const(c)) if 2 * self.constants.get(&c).copied().unwrap_or(0) > self.visits => Label::Const(c),
            _ => Label::Var,
        }
    }
}

/// Labelled tree with `(predicate, direction)` edges. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTree {
    pub nodes: Vec<PatternNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternNode {
    pub label: Label,
    pub parent: Option<usize>,
    pub edge: Option<(TermId, Direction)>,
    pub children: Vec<usize>,
}

impl PatternTree {
    /// The tree with the query's own labels.
    pub fn from_query_tree(tree: &RedistributionTree) -> Self {
        PatternTree {
            nodes: tree
                .nodes
                .iter()
                .map(|n| PatternNode {
                    label: Label::of(&n.term),
                    parent: n.parent,
                    edge: n.edge.map(|e| (e.predicate, e.direction)),
                    children: n.children.clone(),
                })
                .collect(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    /// Node indices in depth-first preorder.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            out.push(i);
            stack.extend(self.nodes[i].children.iter().rev());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_needs_more_than_half() {
        let a = Label::Const(TermId(1));
        let b = Label::Const(TermId(2));
        let mut m = VertexMeta::default();
        for l in [a, a, b] {
            m.vote(l);
        }
        assert_eq!(m.dominant(), a);
        let mut m = VertexMeta::default();
        for l in [a, b, Label::Const(TermId(3))] {
            m.vote(l);
        }
        assert_eq!(m.dominant(), Label::Var);
        let mut m = VertexMeta::default();
        for l in [a, Label::Var] {
            m.vote(l);
        }
        assert_eq!(m.dominant(), Label::Var);
    }

    #[test]
    fn candidate_survives_interleaving() {
        let a = Label::Const(TermId(1));
        let mut m = VertexMeta::default();
        for l in [Label::Var, a, a, Label::Var, a] {
            m.vote(l);
        }
        assert_eq!(m.dominant(), a);
        assert_eq!(m.constants[&TermId(1)], 3);
    }

    #[test]
    fn covers_is_var_or_equal() {
        let c = Label::Const(TermId(4));
        assert!(Label::Var.covers(c));
        assert!(c.covers(c));
        assert!(!c.covers(Label::Var));
        assert!(!c.covers(Label::Const(TermId(5))));
    }
}
