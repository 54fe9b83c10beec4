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
use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::query::{EncodedQuery, Term};
use crate::rdf::{Dictionary, TermId};

use super::cost::{expand, initial_state, DpState, JoinChoice, PatternStats};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("query has no patterns")]
    EmptyQuery,
    #[error("query has more than 64 patterns")]
    TooManyPatterns,
    #[error("pattern shares no variable with the patterns before it")]
    NoSharedVariable,
    #[error("ordering is not a permutation of the query patterns")]
    InvalidOrdering,
}

/// One step of a left-deep plan.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanStep {
    pub pattern: usize,
    /// Join column and mode; `None` for the first pattern.
    pub join: Option<JoinChoice>,
    /// Estimated communication of this step.
    pub cost: f64,
    /// Estimated cumulative cardinality after this step.
    pub cum_card: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionPlan {
    pub steps: Vec<PlanStep>,
    /// Subject of the first pattern; results stay partitioned on it.
    pub pinned_subject: Term<TermId>,
    pub cost: f64,
    pub cum_card: f64,
}

impl ExecutionPlan {
    pub fn ordering(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.pattern).collect()
    }

    /// Human-readable plan, one tab-separated line per step.
    pub fn explain(&self, q: &EncodedQuery, dict: &Dictionary) -> String {
        let parsed = q.decode(dict);
        let pinned = match &self.pinned_subject {
            Term::Var(v) => format!("?{}", q.var_name(*v)),
            Term::Const(c) => dict.decode(*c).unwrap_or("<?>").to_owned(),
        };
        let mut out = format!(
            "plan\tcost={:.4}\tcum_card={:.4}\tpinned={}\n",
            self.cost, self.cum_card, pinned
        );
        out.push_str("step\tpattern\tmode\tjoin_var\tcost\tcum_card\n");
        for (i, step) in self.steps.iter().enumerate() {
            let (mode, var) = match step.join {
                Some(j) => (j.mode.to_string(), format!("?{}", q.var_name(j.var))),
                None => ("Scan".to_owned(), "-".to_owned()),
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{:.4}\t{:.4}",
                i + 1,
                parsed.pattern_text(step.pattern),
                mode,
                var,
                step.cost,
                step.cum_card
            );
        }
        out
    }
}

fn check_query(q: &EncodedQuery, stats: &[PatternStats]) -> Result<(), PlanError> {
    assert_eq!(q.patterns.len(), stats.len(), "one PatternStats per pattern");
    match q.patterns.len() {
        0 => Err(PlanError::EmptyQuery),
        n if n > 64 => Err(PlanError::TooManyPatterns),
        _ => Ok(()),
    }
}

/// Plan for a fixed pattern order, with the modes and estimates the cost
/// model assigns to it.
pub fn plan_ordering(
    q: &EncodedQuery,
    ordering: &[usize],
    stats: &[PatternStats],
    workers: usize,
) -> Result<ExecutionPlan, PlanError> {
    check_query(q, stats)?;
    let mut seen = vec![false; q.patterns.len()];
    if ordering.len() != q.patterns.len()
        || ordering.iter().any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
    {
        return Err(PlanError::InvalidOrdering);
    }
    let first = ordering[0];
    let mut state = initial_state(q, first, &stats[first]);
    let mut steps = vec![PlanStep { pattern: first, join: None, cost: 0.0, cum_card: state.cum_card }];
    for &j in &ordering[1..] {
        let (next, choice, step_cost) = expand(&state, q, j, &stats[j], workers)?;
        steps.push(PlanStep { pattern: j, join: Some(choice), cost: step_cost, cum_card: next.cum_card });
        state = next;
    }
    Ok(ExecutionPlan {
        steps,
        pinned_subject: state.pinned_subject,
        cost: state.cost,
        cum_card: state.cum_card,
    })
}

/// Plan preference: lower cost, then lower cumulative cardinality, then the
/// lexicographically smaller ordering.
/// Estimates that differ only by rounding compare equal.
fn better(a: &DpState, b: &DpState) -> Ordering {
    compare_estimates(a.cost, b.cost)
        .then(compare_estimates(a.cum_card, b.cum_card))
        .then_with(|| a.ordering.cmp(&b.ordering))
}

const REL_EPS: f64 = 1e-9;

pub(crate) fn compare_estimates(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= REL_EPS * a.abs().max(b.abs()) {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

fn exceeds(cost: f64, bound: f64) -> bool {
    compare_estimates(cost, bound) == Ordering::Greater
}

/// Seeds in exploration order: patterns whose subject has the most outgoing
/// edges first, ties broken by variable name and then position.
fn seed_order(q: &EncodedQuery) -> Vec<usize> {
    let out_degree = |s: &Term<TermId>| q.patterns.iter().filter(|p| &p.s == s).count();
    let name = |s: &Term<TermId>| s.var().map(|v| q.var_name(v).to_owned());
    let mut seeds: Vec<usize> = (0..q.patterns.len()).collect();
    seeds.sort_by(|&a, &b| {
        let (pa, pb) = (&q.patterns[a].s, &q.patterns[b].s);
        out_degree(pb)
            .cmp(&out_degree(pa))
            .then_with(|| match (name(pa), name(pb)) {
                (Some(x), Some(y)) => x.cmp(&y),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            })
            .then(a.cmp(&b))
    });
    seeds
}

fn joinable(q: &EncodedQuery, state: &DpState, j: usize) -> bool {
    !state.covers(j) && q.patterns[j].variables().iter().any(|v| state.binding(*v).is_some())
}

/// Cost of the greedy completion from `seed`, used as the first bound.
fn greedy_bound(q: &EncodedQuery, seed: usize, stats: &[PatternStats], workers: usize) -> Option<f64> {
    let mut state = initial_state(q, seed, &stats[seed]);
    for _ in 1..q.patterns.len() {
        let next = (0..q.patterns.len())
            .filter(|&j| joinable(q, &state, j))
            .filter_map(|j| expand(&state, q, j, &stats[j], workers).ok().map(|(s, _, _)| s))
            .min_by(better)?;
        state = next;
    }
    Some(state.cost)
}

/// States that agree on the covered patterns, the pinned subject and every
/// binding estimate have identical completions, so only the best of them is
/// kept. Larger queries fall back to merging on the first two only.
const EXACT_MERGE_LIMIT: usize = 12;

type StateKey = (u64, Term<TermId>, Vec<Option<u64>>);

fn key_of(state: &DpState, exact: bool) -> StateKey {
    let bindings = if exact {
        state.bindings.iter().map(|b| b.map(f64::to_bits)).collect()
    } else {
        Vec::new()
    };
    (state.subgraph, state.pinned_subject.clone(), bindings)
}

/// Finds the cheapest left-deep plan under the communication cost model.
///
/// Subgraphs grow one pattern at a time; any partial plan whose cost
/// already exceeds the best complete plan is dropped.
pub fn optimize(q: &EncodedQuery, stats: &[PatternStats], workers: usize) -> Result<ExecutionPlan, PlanError> {
    check_query(q, stats)?;
    let n = q.patterns.len();
    let exact = n <= EXACT_MERGE_LIMIT;
    let seeds = seed_order(q);
    let mut bound = seeds
        .iter()
        .filter_map(|&s| greedy_bound(q, s, stats, workers))
        .fold(f64::INFINITY, f64::min);

    let mut level: FxHashMap<StateKey, DpState> = FxHashMap::default();
    for &s in &seeds {
        let state = initial_state(q, s, &stats[s]);
        level.insert(key_of(&state, exact), state);
    }
    for size in 1..n {
        let mut next_level: FxHashMap<StateKey, DpState> = FxHashMap::default();
        for state in level.values() {
            if exceeds(state.cost, bound) {
                continue;
            }
            for (j, st) in stats.iter().enumerate() {
                if !joinable(q, state, j) {
                    continue;
                }
                let (expanded, _, _) = expand(state, q, j, st, workers)?;
                if exceeds(expanded.cost, bound) {
                    continue;
                }
                if size + 1 == n {
                    bound = bound.min(expanded.cost);
                }
                let key = key_of(&expanded, exact);
                match next_level.get(&key) {
                    Some(existing) if better(existing, &expanded) != Ordering::Greater => {}
                    _ => {
                        next_level.insert(key, expanded);
                    }
                }
            }
        }
        if next_level.is_empty() {
            return Err(PlanError::NoSharedVariable);
        }
        level = next_level;
    }
    let best = level
        .into_values()
        .filter(|s| !exceeds(s.cost, bound))
        .min_by(better)
        .ok_or(PlanError::NoSharedVariable)?;
    plan_ordering(q, &best.ordering, stats, workers)
}
