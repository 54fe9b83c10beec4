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

use crate::rdf::{EncodedTriple, TermId};

#[derive(Debug, Clone, Default)]
struct PredicateBucket {
    pairs: Vec<(TermId, TermId)>,
    by_subject: FxHashMap<TermId, Vec<TermId>>,
    by_object: FxHashMap<TermId, Vec<TermId>>,
}

/// A triple lookup with optional bound positions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TriplePattern {
    pub s: Option<TermId>,
    pub p: Option<TermId>,
    pub o: Option<TermId>,
}

/// In-memory triple store: a predicate index whose buckets are further
/// hashed by subject (PS-index) and by object (PO-index).
///
/// Every lookup requires a predicate; a variable predicate iterates over all
/// predicate buckets.
#[derive(Debug, Clone, Default)]
pub struct WorkerStore {
    predicates: FxHashMap<TermId, PredicateBucket>,
    members: FxHashSet<EncodedTriple>,
}

impl WorkerStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_triples<I: IntoIterator<Item = EncodedTriple>>(triples: I) -> Self {
        let mut store = Self::new();
        for t in triples {
            store.insert(t);
        }
        store
    }

    /// Inserts `t` into all three indexes. Returns `false` for a duplicate.
    pub fn insert(&mut self, t: EncodedTriple) -> bool {
        if !self.members.insert(t) {
            return false;
        }
        let bucket = self.predicates.entry(t.p).or_default();
        bucket.pairs.push((t.s, t.o));
        bucket.by_subject.entry(t.s).or_default().push(t.o);
        bucket.by_object.entry(t.o).or_default().push(t.s);
        true
    }

    pub fn contains(&self, t: &EncodedTriple) -> bool {
        self.members.contains(t)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// All `(s, o)` pairs with predicate `p`.
    pub fn scan(&self, p: TermId) -> &[(TermId, TermId)] {
        self.predicates.get(&p).map_or(&[], |b| &b.pairs)
    }

    /// Objects `o` with `<s, p, o>` stored.
    pub fn lookup_ps(&self, s: TermId, p: TermId) -> &[TermId] {
        self.predicates
            .get(&p)
            .and_then(|b| b.by_subject.get(&s))
            .map_or(&[], Vec::as_slice)
    }

    /// Subjects `s` with `<s, p, o>` stored.
    pub fn lookup_po(&self, o: TermId, p: TermId) -> &[TermId] {
        self.predicates
            .get(&p)
            .and_then(|b| b.by_object.get(&o))
            .map_or(&[], Vec::as_slice)
    }

    pub fn predicates(&self) -> impl Iterator<Item = TermId> + '_ {
        self.predicates.keys().copied()
    }

    /// Number of distinct subjects and objects under predicate `p`.
    pub fn distinct_counts(&self, p: TermId) -> (usize, usize) {
        self.predicates
            .get(&p)
            .map_or((0, 0), |b| (b.by_subject.len(), b.by_object.len()))
    }

    pub fn subjects_of(&self, p: TermId) -> impl Iterator<Item = TermId> + '_ {
        self.predicates
            .get(&p)
            .into_iter()
            .flat_map(|b| b.by_subject.keys().copied())
    }

    pub fn objects_of(&self, p: TermId) -> impl Iterator<Item = TermId> + '_ {
        self.predicates
            .get(&p)
            .into_iter()
            .flat_map(|b| b.by_object.keys().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = EncodedTriple> + '_ {
        self.predicates
            .iter()
            .flat_map(|(&p, b)| b.pairs.iter().map(move |&(s, o)| EncodedTriple::new(s, p, o)))
    }

    /// Visits every stored triple matching `pattern`, picking the PS-index
    /// when the subject is bound, the PO-index when only the object is bound
    /// and a predicate scan otherwise.
    pub fn for_each_match<F: FnMut(EncodedTriple)>(&self, pattern: TriplePattern, mut f: F) {
        match pattern.p {
            Some(p) => {
                if let Some(bucket) = self.predicates.get(&p) {
                    Self::match_bucket(p, bucket, pattern, &mut f);
                }
            }
            None => {
                for (&p, bucket) in &self.predicates {
                    Self::match_bucket(p, bucket, pattern, &mut f);
                }
            }
        }
    }

    fn match_bucket<F: FnMut(EncodedTriple)>(
        p: TermId,
        bucket: &PredicateBucket,
        pattern: TriplePattern,
        f: &mut F,
    ) {
        match (pattern.s, pattern.o) {
            (Some(s), Some(o)) => {
                let hit = bucket.by_subject.get(&s).is_some_and(|os| os.contains(&o));
                if hit {
                    f(EncodedTriple::new(s, p, o));
                }
            }
            (Some(s), None) => {
                for &o in bucket.by_subject.get(&s).map_or(&[][..], Vec::as_slice) {
                    f(EncodedTriple::new(s, p, o));
                }
            }
            (None, Some(o)) => {
                for &s in bucket.by_object.get(&o).map_or(&[][..], Vec::as_slice) {
                    f(EncodedTriple::new(s, p, o));
                }
            }
            (None, None) => {
                for &(s, o) in &bucket.pairs {
                    f(EncodedTriple::new(s, p, o));
                }
            }
        }
    }

    /// Number of triples matching `pattern`.
    pub fn count_matches(&self, pattern: TriplePattern) -> usize {
        match (pattern.s, pattern.p, pattern.o) {
            (None, Some(p), None) => self.scan(p).len(),
            (Some(s), Some(p), None) => self.lookup_ps(s, p).len(),
            (None, Some(p), Some(o)) => self.lookup_po(o, p).len(),
            _ => {
                let mut n = 0;
                self.for_each_match(pattern, |_| n += 1);
                n
            }
        }
    }
}
