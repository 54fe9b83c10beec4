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

use crate::query::{EncodedQuery, Term};
use crate::rdf::TermId;
use crate::storage::PredicateStats;

/// Flags the values rejected by Chauvenet's criterion: `x` is an outlier
/// when `n * erfc(|x - mean| / (sd * sqrt 2)) / 2 < 0.5`, with `sd` the
/// sample standard deviation. Fewer than two values, or no spread, yield
/// no outliers.
pub fn chauvenet_outliers(values: &[f64]) -> Vec<bool> {
    let n = values.len();
    if n < 2 {
        return vec![false; n];
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    if sd == 0.0 || !sd.is_finite() {
        return vec![false; n];
    }
    values
        .iter()
        .map(|x| n as f64 * libm::erfc((x - mean).abs() / (sd * std::f64::consts::SQRT_2)) / 2.0 < 0.5)
        .collect()
}

/// Subject and object scores per predicate after outlier filtering.
#[derive(Debug, Clone, Default)]
pub struct PredicateScores {
    scores: FxHashMap<TermId, (f64, f64)>,
}

impl PredicateScores {
    /// Runs Chauvenet's criterion over all subject scores, then over all
    /// object scores. A predicate flagged by either gets `-inf` on both
    /// sides.
    pub fn from_stats(stats: &PredicateStats) -> Self {
        let entries: Vec<(TermId, f64, f64)> =
            stats.iter().map(|(p, st)| (p, st.subject_score(), st.object_score())).collect();
        let subj: Vec<f64> = entries.iter().map(|e| e.1).collect();
        let obj: Vec<f64> = entries.iter().map(|e| e.2).collect();
        let out_s = chauvenet_outliers(&subj);
        let out_o = chauvenet_outliers(&obj);
        let scores = entries
            .iter()
            .enumerate()
            .map(|(i, &(p, s, o))| {
                if out_s[i] || out_o[i] {
                    (p, (f64::NEG_INFINITY, f64::NEG_INFINITY))
                } else {
                    (p, (s, o))
                }
            })
            .collect();
        PredicateScores { scores }
    }

    /// Scores taken as given, without filtering.
    pub fn unfiltered(stats: &PredicateStats) -> Self {
        let scores = stats.iter().map(|(p, st)| (p, (st.subject_score(), st.object_score()))).collect();
        PredicateScores { scores }
    }

    pub fn from_pairs<I: IntoIterator<Item = (TermId, f64, f64)>>(pairs: I) -> Self {
        PredicateScores { scores: pairs.into_iter().map(|(p, s, o)| (p, (s, o))).collect() }
    }

    /// `p̄_S`, or `-inf` for unknown or filtered predicates.
    pub fn subject(&self, p: TermId) -> f64 {
        self.scores.get(&p).map_or(f64::NEG_INFINITY, |s| s.0)
    }

    /// `p̄_O`, or `-inf` for unknown or filtered predicates.
    pub fn object(&self, p: TermId) -> f64 {
        self.scores.get(&p).map_or(f64::NEG_INFINITY, |s| s.1)
    }

    pub fn is_outlier(&self, p: TermId) -> bool {
        self.scores.get(&p).is_some_and(|s| s.0 == f64::NEG_INFINITY)
    }
}

/// Query vertices (subject and object terms) in order of first appearance
/// with their scores: the best `p̄_S` over outgoing edges and `p̄_O` over
/// incoming edges.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexScores {
    pub vertices: Vec<(Term<TermId>, f64)>,
}

impl VertexScores {
    pub fn get(&self, v: &Term<TermId>) -> f64 {
        self.vertices.iter().find(|(t, _)| t == v).map_or(f64::NEG_INFINITY, |e| e.1)
    }

    /// Highest-scoring vertex; the earliest one on ties.
    pub fn core(&self) -> Option<&Term<TermId>> {
        let mut best: Option<&(Term<TermId>, f64)> = None;
        for e in &self.vertices {
            if best.is_none_or(|b| e.1 > b.1) {
                best = Some(e);
            }
        }
        best.map(|e| &e.0)
    }
}

/// Scores every vertex of `q`. Patterns with a variable predicate
/// contribute nothing.
pub fn score_vertices(q: &EncodedQuery, scores: &PredicateScores) -> VertexScores {
    let mut vertices: Vec<(Term<TermId>, f64)> = Vec::new();
    let mut bump = |v: &Term<TermId>, x: f64| match vertices.iter_mut().find(|(t, _)| t == v) {
        Some(e) => e.1 = e.1.max(x),
        None => vertices.push((v.clone(), x)),
    };
    for pat in &q.patterns {
        let (s, o) = match pat.p {
            Term::Const(p) => (scores.subject(p), scores.object(p)),
            Term::Var(_) => (f64::NEG_INFINITY, f64::NEG_INFINITY),
        };
        bump(&pat.s, s);
        bump(&pat.o, o);
    }
    VertexScores { vertices }
}
