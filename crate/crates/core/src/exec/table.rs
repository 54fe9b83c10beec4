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

use crate::query::{EncodedQuery, Term, TriplePattern, VarId};
use crate::rdf::{Dictionary, EncodedTriple, TermId};
use crate::storage::StorePattern;

/// Rows of variable bindings. Rows within one table are distinct.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BindingTable {
    pub columns: Vec<VarId>,
    pub rows: Vec<Vec<TermId>>,
}

impl BindingTable {
    pub fn new(columns: Vec<VarId>) -> Self {
        BindingTable { columns, rows: Vec::new() }
    }

    /// The join identity: no columns, one empty row.
    pub fn unit() -> Self {
        BindingTable { columns: Vec::new(), rows: vec![Vec::new()] }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, v: VarId) -> Option<usize> {
        self.columns.iter().position(|&c| c == v)
    }

    /// Keeps `columns` in the given order. Rows are deduplicated when a
    /// column is dropped.
    pub fn project(&self, columns: &[VarId]) -> BindingTable {
        let idx: Vec<usize> = columns
            .iter()
            .map(|&v| self.column_index(v).expect("projected variable is bound"))
            .collect();
        let drops = self.columns.iter().any(|c| !columns.contains(c));
        let mut seen = FxHashSet::default();
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let out: Vec<TermId> = idx.iter().map(|&i| row[i]).collect();
            if !drops || seen.insert(out.clone()) {
                rows.push(out);
            }
        }
        BindingTable { columns: columns.to_vec(), rows }
    }

    /// Appends the rows of `other`, which must have the same columns.
    pub fn append(&mut self, other: BindingTable) {
        debug_assert_eq!(self.columns, other.columns);
        self.rows.extend(other.rows);
    }

    /// Rows sorted, for order-insensitive comparison.
    pub fn sorted_rows(&self) -> Vec<Vec<TermId>> {
        let mut rows = self.rows.clone();
        rows.sort_unstable();
        rows
    }

    /// Distinct values of column `v`.
    pub fn distinct_values(&self, v: VarId) -> Vec<TermId> {
        let Some(i) = self.column_index(v) else {
            return Vec::new();
        };
        let mut seen = FxHashSet::default();
        self.rows.iter().map(|r| r[i]).filter(|x| seen.insert(*x)).collect()
    }

    pub fn decode(&self, dict: &Dictionary) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&t| dict.decode(t).unwrap_or("<?>").to_owned()).collect())
            .collect()
    }

    pub fn header(&self, q: &EncodedQuery) -> Vec<String> {
        self.columns.iter().map(|&v| format!("?{}", q.var_name(v))).collect()
    }
}

/// Lookup key for `pattern` given a row of `columns`: constants and bound
/// variables become fixed positions.
pub(crate) fn bound_lookup(pattern: &TriplePattern<TermId>, columns: &[VarId], row: &[TermId]) -> StorePattern {
    let value = |t: &Term<TermId>| match t {
        Term::Const(c) => Some(*c),
        Term::Var(v) => columns.iter().position(|c| c == v).map(|i| row[i]),
    };
    StorePattern { s: value(&pattern.s), p: value(&pattern.p), o: value(&pattern.o) }
}

/// Values a matching triple gives to `vars`, or `None` when a repeated
/// variable is bound inconsistently.
pub(crate) fn bind_triple(pattern: &TriplePattern<TermId>, t: &EncodedTriple, vars: &[VarId]) -> Option<Vec<TermId>> {
    let mut out = Vec::with_capacity(vars.len());
    for &v in vars {
        let mut value = None;
        for (term, x) in [(&pattern.s, t.s), (&pattern.p, t.p), (&pattern.o, t.o)] {
            if term.var() == Some(v) {
                match value {
                    None => value = Some(x),
                    Some(prev) if prev != x => return None,
                    Some(_) => {}
                }
            }
        }
        out.push(value.expect("variable occurs in pattern"));
    }
    Some(out)
}

/// Hash join of `left` with candidate triples for `next` on variable `on`.
/// Every other shared column is checked as a residual predicate.
pub(crate) fn hash_join(
    left: &BindingTable,
    next: &TriplePattern<TermId>,
    on: VarId,
    candidates: &[EncodedTriple],
) -> BindingTable {
    let vars = next.variables();
    let new_vars: Vec<VarId> = vars.iter().copied().filter(|v| left.column_index(*v).is_none()).collect();
    let mut columns = left.columns.clone();
    columns.extend(&new_vars);
    let mut out = BindingTable::new(columns);
    let Some(key_col) = left.column_index(on) else {
        return out;
    };
    let on_pos = vars.iter().position(|&v| v == on).expect("join variable in pattern");
    let shared: Vec<(usize, usize)> = vars
        .iter()
        .enumerate()
        .filter_map(|(i, v)| left.column_index(*v).map(|c| (i, c)))
        .collect();
    let new_pos: Vec<usize> = vars
        .iter()
        .enumerate()
        .filter(|(_, v)| new_vars.contains(v))
        .map(|(i, _)| i)
        .collect();

    let mut build: FxHashMap<TermId, Vec<Vec<TermId>>> = FxHashMap::default();
    for t in candidates {
        if let Some(values) = bind_triple(next, t, &vars) {
            build.entry(values[on_pos]).or_default().push(values);
        }
    }
    for row in &left.rows {
        let Some(matches) = build.get(&row[key_col]) else {
            continue;
        };
        for values in matches {
            if shared.iter().all(|&(i, c)| values[i] == row[c]) {
                let mut r = row.clone();
                r.extend(new_pos.iter().map(|&i| values[i]));
                out.rows.push(r);
            }
        }
    }
    out
}
