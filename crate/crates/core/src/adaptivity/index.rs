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

use crate::rdf::{Dictionary, TermId};

use super::pattern::{Label, PatternTree};
use super::tree::Direction;

/// Identifier of a pattern-index edge (and of the node below it).
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiNode {
    pub label: Label,
    pub parent: Option<EdgeId>,
    pub edge: Option<(TermId, Direction)>,
    pub children: Vec<EdgeId>,
    /// Logical time of the last query or redistribution that used the edge.
    pub last_access: u64,
}

/// The redistributed patterns: a forest whose roots are core vertices and
/// whose edges each own one replica storage module on every worker.
#[derive(Debug, Clone, Default)]
pub struct PatternIndex {
    nodes: Vec<Option<PiNode>>,
    roots: Vec<EdgeId>,
}

impl PatternIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn node(&self, id: EdgeId) -> &PiNode {
        self.nodes[id].as_ref().expect("live pattern-index node")
    }

    pub fn contains_node(&self, id: EdgeId) -> bool {
        self.nodes.get(id).is_some_and(Option::is_some)
    }

    pub fn roots(&self) -> &[EdgeId] {
        &self.roots
    }

    /// Live edges (non-root nodes).
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.as_ref().filter(|n| n.parent.is_some()).map(|_| i))
    }

    pub fn depth(&self, mut id: EdgeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.node(id).parent {
            d += 1;
            id = p;
        }
        d
    }

    /// True for an edge whose parent is a root and whose root is the
    /// subject: its triples already sit with the core's owner.
    pub fn is_core_subject_edge(&self, id: EdgeId) -> bool {
        let n = self.node(id);
        n.parent.is_some_and(|p| self.node(p).parent.is_none()) && n.edge.is_some_and(|e| e.1 == Direction::Out)
    }

    fn push(&mut self, node: PiNode) -> EdgeId {
        self.nodes.push(Some(node));
        self.nodes.len() - 1
    }

    /// Root with exactly `label`, created when absent.
    pub fn root_for(&mut self, label: Label, now: u64) -> EdgeId {
        if let Some(&r) = self.roots.iter().find(|&&r| self.node(r).label == label) {
            return r;
        }
        let r = self.push(PiNode { label, parent: None, edge: None, children: Vec::new(), last_access: now });
        self.roots.push(r);
        r
    }

    /// Child of `parent` over `(predicate, direction)` whose label serves
    /// `label`; an exact label is preferred over a variable.
    pub fn covering_child(&self, parent: EdgeId, predicate: TermId, direction: Direction, label: Label) -> Option<EdgeId> {
        let candidates = || {
            self.node(parent)
                .children
                .iter()
                .copied()
                .filter(move |&c| self.node(c).edge == Some((predicate, direction)))
        };
        candidates()
            .find(|&c| self.node(c).label == label)
            .or_else(|| candidates().find(|&c| self.node(c).label.covers(label)))
    }

    pub fn add_child(&mut self, parent: EdgeId, predicate: TermId, direction: Direction, label: Label, now: u64) -> EdgeId {
        let id = self.push(PiNode {
            label,
            parent: Some(parent),
            edge: Some((predicate, direction)),
            children: Vec::new(),
            last_access: now,
        });
        self.nodes[parent].as_mut().expect("live parent").children.push(id);
        id
    }

    /// Maps every node of `tree` to a pattern-index node serving it, or
    /// `None` when some edge is missing. Query constants are served by equal
    /// constants or by variables; query variables only by variables.
    pub fn find_match(&self, tree: &PatternTree) -> Option<Vec<EdgeId>> {
        let root_label = tree.nodes[0].label;
        let mut roots: Vec<EdgeId> = self.roots.iter().copied().filter(|&r| self.node(r).label.covers(root_label)).collect();
        roots.sort_by_key(|&r| self.node(r).label == Label::Var);
        for r in roots {
            let mut mapping = vec![usize::MAX; tree.nodes.len()];
            if self.match_below(tree, 0, r, &mut mapping) {
                return Some(mapping);
            }
        }
        None
    }

    fn match_below(&self, tree: &PatternTree, t: usize, x: EdgeId, mapping: &mut Vec<EdgeId>) -> bool {
        mapping[t] = x;
        for &c in &tree.nodes[t].children {
            let (p, d) = tree.nodes[c].edge.expect("non-root node");
            let label = tree.nodes[c].label;
            let mut options: Vec<EdgeId> = self
                .node(x)
                .children
                .iter()
                .copied()
                .filter(|&y| self.node(y).edge == Some((p, d)) && self.node(y).label.covers(label))
                .collect();
            options.sort_by_key(|&y| self.node(y).label == Label::Var);
            if !options.into_iter().any(|y| self.match_below(tree, c, y, mapping)) {
                return false;
            }
        }
        true
    }

    /// Boolean form of [`PatternIndex::find_match`] that also refreshes the
    /// timestamps of the matched edges.
    pub fn match_and_touch(&mut self, tree: &PatternTree, now: u64) -> Option<Vec<EdgeId>> {
        let mapping = self.find_match(tree)?;
        self.touch(&mapping, now);
        Some(mapping)
    }

    pub fn touch(&mut self, ids: &[EdgeId], now: u64) {
        for &id in ids {
            if let Some(n) = self.nodes[id].as_mut() {
                n.last_access = n.last_access.max(now);
            }
        }
    }

    /// Removes `id` and everything below it; returns the removed ids.
    pub fn remove_subtree(&mut self, id: EdgeId) -> Vec<EdgeId> {
        if let Some(p) = self.node(id).parent {
            self.nodes[p].as_mut().expect("live parent").children.retain(|&c| c != id);
        } else {
            self.roots.retain(|&r| r != id);
        }
        let mut removed = Vec::new();
        let mut stack = vec![id];
        while let Some(i) = stack.pop() {
            let node = self.nodes[i].take().expect("live node");
            stack.extend(node.children);
            removed.push(i);
        }
        removed
    }

    /// Roots left without edges are dropped.
    pub fn prune_empty_roots(&mut self) {
        let empty: Vec<EdgeId> = self.roots.iter().copied().filter(|&r| self.node(r).children.is_empty()).collect();
        for r in empty {
            self.remove_subtree(r);
        }
    }

    /// Least recently used edge outside `protected` whose subtree holds no
    /// protected edge. Ties go to the deeper edge, then the lower id.
    pub fn lru_victim(&self, protected: &dyn Fn(EdgeId) -> bool) -> Option<EdgeId> {
        self.edges()
            .filter(|&e| !self.subtree(e).into_iter().any(protected))
            .min_by_key(|&e| (self.node(e).last_access, std::cmp::Reverse(self.depth(e)), e))
    }

    pub fn subtree(&self, id: EdgeId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(i) = stack.pop() {
            out.push(i);
            stack.extend(self.node(i).children.iter().copied());
        }
        out
    }

    /// Indented listing: one line per node with its edge, label and last
    /// access time.
    pub fn dump(&self, dict: &Dictionary) -> String {
        let name = |l: Label| match l {
            Label::Var => "?".to_owned(),
            Label::Const(c) => dict.decode(c).unwrap_or("<?>").to_owned(),
        };
        let mut out = String::new();
        for &r in &self.roots {
            let mut stack = vec![(r, 0usize)];
            while let Some((i, depth)) = stack.pop() {
                let n = self.node(i);
                let indent = "  ".repeat(depth);
                match n.edge {
                    None => {
                        let _ = writeln!(out, "{indent}root {} [{}]", i, name(n.label));
                    }
                    Some((p, d)) => {
                        let arrow = match d {
                            Direction::Out => "->",
                            Direction::In => "<-",
                        };
                        let pred = dict.decode(p).unwrap_or("<?>");
                        let _ = writeln!(out, "{indent}{arrow} {pred} {} [{}] t={}", i, name(n.label), n.last_access);
                    }
                }
                stack.extend(n.children.iter().rev().map(|&c| (c, depth + 1)));
            }
        }
        out
    }
}
