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

use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::rdf::{Dictionary, EncodedTriple, TermId};

use super::WorkerStore;

/// In-degree plus out-degree of every term, indexed by [`TermId`].
#[derive(Debug, Clone, Default)]
pub struct Degrees(Vec<u32>);

impl Degrees {
    /// One pass over a deduplicated triple set.
    pub fn from_triples<'a, I>(triples: I, num_terms: usize) -> Self
    where
        I: IntoIterator<Item = &'a EncodedTriple>,
    {
        let mut deg = vec![0u32; num_terms];
        for t in triples {
            deg[t.s.index()] += 1;
            deg[t.o.index()] += 1;
        }
        Degrees(deg)
    }

    pub fn get(&self, id: TermId) -> u32 {
        self.0.get(id.index()).copied().unwrap_or(0)
    }
}

/// Statistics for one predicate `p`.
///
/// Scores are kept as degree sums so that partial statistics from workers
/// merge without loss on the subject side.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PredicateStat {
    /// `|p|`
    pub count: u64,
    /// `|p.s|`
    pub distinct_subjects: u64,
    /// `|p.o|`
    pub distinct_objects: u64,
    pub subject_degree_sum: u64,
    pub object_degree_sum: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl PredicateStat {
    /// Average degree over the distinct subjects of `p`.
    pub fn subject_score(&self) -> f64 {
        ratio(self.subject_degree_sum, self.distinct_subjects)
    }

    /// Average degree over the distinct objects of `p`.
    pub fn object_score(&self) -> f64 {
        ratio(self.object_degree_sum, self.distinct_objects)
    }

    /// `P_ps = |p| / |p.s|`
    pub fn per_subject(&self) -> f64 {
        ratio(self.count, self.distinct_subjects)
    }

    /// `P_po = |p| / |p.o|`
    pub fn per_object(&self) -> f64 {
        ratio(self.count, self.distinct_objects)
    }

    fn merge(&mut self, other: &PredicateStat) {
        self.count += other.count;
        self.distinct_subjects += other.distinct_subjects;
        self.distinct_objects += other.distinct_objects;
        self.subject_degree_sum += other.subject_degree_sum;
        self.object_degree_sum += other.object_degree_sum;
    }
}

/// Per-predicate statistics table, local to a worker or aggregated at the
/// master.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PredicateStats {
    entries: BTreeMap<TermId, PredicateStat>,
}

impl PredicateStats {
    pub fn get(&self, p: TermId) -> Option<&PredicateStat> {
        self.entries.get(&p)
    }

    pub fn insert(&mut self, p: TermId, stat: PredicateStat) {
        self.entries.insert(p, stat);
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermId, &PredicateStat)> {
        self.entries.iter().map(|(&p, s)| (p, s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum over all predicates, used for patterns with a variable predicate.
    pub fn total(&self) -> PredicateStat {
        let mut acc = PredicateStat::default();
        for s in self.entries.values() {
            acc.merge(s);
        }
        acc
    }

    /// Tab-separated dump: predicate, |p|, |p.s|, |p.o|, subject score,
    /// object score, P_ps, P_po.
    pub fn write_tsv<W: Write>(&self, dict: &Dictionary, mut out: W) -> io::Result<()> {
        for (&p, s) in &self.entries {
            let name = dict.decode(p).unwrap_or("?");
            writeln!(
                out,
                "{name}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
                s.count,
                s.distinct_subjects,
                s.distinct_objects,
                s.subject_score(),
                s.object_score(),
                s.per_subject(),
                s.per_object()
            )?;
        }
        Ok(())
    }
}

/// Computes the predicate statistics of one worker's local triples.
pub fn compute_local_stats(store: &WorkerStore, degrees: &Degrees) -> PredicateStats {
    let mut stats = PredicateStats::default();
    for p in store.predicates() {
        let (ds, dob) = store.distinct_counts(p);
        let stat = PredicateStat {
            count: store.scan(p).len() as u64,
            distinct_subjects: ds as u64,
            distinct_objects: dob as u64,
            subject_degree_sum: store.subjects_of(p).map(|s| degrees.get(s) as u64).sum(),
            object_degree_sum: store.objects_of(p).map(|o| degrees.get(o) as u64).sum(),
        };
        stats.insert(p, stat);
    }
    stats
}

/// Merges worker statistics.
///
/// Subject-side figures are exact because subject-hash partitioning makes
/// subject sets disjoint. Object-side figures sum per-worker distinct
/// counts and are an upper bound when an object occurs on several workers.
pub fn aggregate_stats(partials: &[PredicateStats]) -> PredicateStats {
    let mut merged = PredicateStats::default();
    for part in partials {
        for (&p, s) in &part.entries {
            merged.entries.entry(p).or_default().merge(s);
        }
    }
    merged
}
