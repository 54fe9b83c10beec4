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

use std::fmt;

use rustc_hash::FxHashSet;

use crate::rdf::{Dictionary, Position, TermId};

/// Index of a variable in [`QueryGraph::variables`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u16);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A pattern position: a variable or a constant of type `C`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term<C> {
    Var(VarId),
    Const(C),
}

impl<C> Term<C> {
    pub fn var(&self) -> Option<VarId> {
        match self {
            Term::Var(v) => Some(*v),
            Term::Const(_) => None,
        }
    }

    pub fn constant(&self) -> Option<&C> {
        match self {
            Term::Var(_) => None,
            Term::Const(c) => Some(c),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern<C> {
    pub s: Term<C>,
    pub p: Term<C>,
    pub o: Term<C>,
}

impl<C> TriplePattern<C> {
    pub fn new(s: Term<C>, p: Term<C>, o: Term<C>) -> Self {
        TriplePattern { s, p, o }
    }

    pub fn term(&self, pos: Position) -> &Term<C> {
        match pos {
            Position::Subject => &self.s,
            Position::Predicate => &self.p,
            Position::Object => &self.o,
        }
    }

    /// Distinct variables in subject, predicate, object order.
    pub fn variables(&self) -> Vec<VarId> {
        let mut out = Vec::with_capacity(3);
        for pos in Position::ALL {
            if let Term::Var(v) = self.term(pos) {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
        }
        out
    }

    pub fn mentions(&self, v: VarId) -> bool {
        Position::ALL.iter().any(|&pos| self.term(pos).var() == Some(v))
    }

    /// First position holding variable `v`, preferring the subject, then the
    /// object, then the predicate.
    pub fn position_of(&self, v: VarId) -> Option<Position> {
        [Position::Subject, Position::Object, Position::Predicate]
            .into_iter()
            .find(|&pos| self.term(pos).var() == Some(v))
    }

    pub fn has_constant(&self) -> bool {
        !(self.s.is_var() && self.p.is_var() && self.o.is_var())
    }
}

/// A parsed BGP: patterns in textual order, the variable table and the
/// projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryGraph<C = TermId> {
    pub patterns: Vec<TriplePattern<C>>,
    pub variables: Vec<String>,
    pub projection: Vec<VarId>,
}

/// Query with constants still in textual form.
pub type ParsedQuery = QueryGraph<String>;
/// Query with constants resolved against the dictionary.
pub type EncodedQuery = QueryGraph<TermId>;

impl<C> QueryGraph<C> {
    pub fn var_name(&self, v: VarId) -> &str {
        &self.variables[v.index()]
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// True when the patterns form one component over shared variables.
    pub fn is_connected(&self) -> bool {
        let n = self.patterns.len();
        if n <= 1 {
            return true;
        }
        let vars: Vec<Vec<VarId>> = self.patterns.iter().map(TriplePattern::variables).collect();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && vars[i].iter().any(|v| vars[j].contains(v)) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Variables occurring in the patterns indexed by `mask`.
    pub fn variables_of(&self, mask: u64) -> FxHashSet<VarId> {
        let mut out = FxHashSet::default();
        for (i, p) in self.patterns.iter().enumerate() {
            if mask & (1 << i) != 0 {
                out.extend(p.variables());
            }
        }
        out
    }

    pub fn has_variable_predicate(&self) -> bool {
        self.patterns.iter().any(|p| p.p.is_var())
    }
}

impl ParsedQuery {
    /// Resolves constants; `None` when some constant is absent from the
    /// dictionary, in which case the query has no answers.
    pub fn resolve(&self, dict: &Dictionary) -> Option<EncodedQuery> {
        let term = |t: &Term<String>| -> Option<Term<TermId>> {
            Some(match t {
                Term::Var(v) => Term::Var(*v),
                Term::Const(c) => Term::Const(dict.lookup(c)?),
            })
        };
        let patterns = self
            .patterns
            .iter()
            .map(|p| Some(TriplePattern::new(term(&p.s)?, term(&p.p)?, term(&p.o)?)))
            .collect::<Option<Vec<_>>>()?;
        Some(QueryGraph {
            patterns,
            variables: self.variables.clone(),
            projection: self.projection.clone(),
        })
    }
}

impl EncodedQuery {
    /// Decodes constants back to their strings (for display and workload
    /// logs).
    pub fn decode(&self, dict: &Dictionary) -> ParsedQuery {
        let term = |t: &Term<TermId>| match t {
            Term::Var(v) => Term::Var(*v),
            Term::Const(c) => Term::Const(dict.decode(*c).unwrap_or("<?>").to_owned()),
        };
        QueryGraph {
            patterns: self
                .patterns
                .iter()
                .map(|p| TriplePattern::new(term(&p.s), term(&p.p), term(&p.o)))
                .collect(),
            variables: self.variables.clone(),
            projection: self.projection.clone(),
        }
    }
}

impl ParsedQuery {
    /// Pattern `i` in SPARQL syntax, without the terminating dot.
    pub fn pattern_text(&self, i: usize) -> String {
        let p = &self.patterns[i];
        let term = |t: &Term<String>| match t {
            Term::Var(v) => format!("?{}", self.var_name(*v)),
            Term::Const(c) => c.clone(),
        };
        format!("{} {} {}", term(&p.s), term(&p.p), term(&p.o))
    }
}

impl fmt::Display for ParsedQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT")?;
        for v in &self.projection {
            write!(f, " ?{}", self.var_name(*v))?;
        }
        if self.projection.is_empty() {
            f.write_str(" *")?;
        }
        f.write_str(" WHERE {")?;
        for i in 0..self.patterns.len() {
            write!(f, " {} .", self.pattern_text(i))?;
        }
        f.write_str(" }")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryShape {
    /// Every pattern has the same subject and every join is on it.
    SubjectStar,
    General,
}

/// A query is a subject star when all patterns share one subject term and no
/// other variable is shared between patterns.
pub fn classify<C: PartialEq>(q: &QueryGraph<C>) -> QueryShape {
    let Some(first) = q.patterns.first() else {
        return QueryShape::SubjectStar;
    };
    if q.patterns.iter().any(|p| p.s != first.s) {
        return QueryShape::General;
    }
    let center = first.s.var();
    let mut seen: FxHashSet<VarId> = FxHashSet::default();
    for p in &q.patterns {
        for v in p.variables() {
            if Some(v) == center {
                continue;
            }
            if !seen.insert(v) {
                return QueryShape::General;
            }
        }
    }
    QueryShape::SubjectStar
}
