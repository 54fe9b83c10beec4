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

use crate::query::{EncodedQuery, Term, TriplePattern, VarId};
use crate::rdf::{Position, TermId};
use crate::storage::PredicateStat;

use super::dp::PlanError;

/// How a join step moves data between workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JoinMode {
    /// The join column is the pinned subject: every worker joins locally.
    NoComm,
    /// The join column is the subject of the new pattern: projected values
    /// go to the single worker owning them.
    HashDistribute,
    /// The join column is an object or predicate: projected values go to
    /// every worker.
    Broadcast,
}

impl fmt::Display for JoinMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JoinMode::NoComm => "NoComm",
            JoinMode::HashDistribute => "HashDistribute",
            JoinMode::Broadcast => "Broadcast",
        })
    }
}

/// Join column picked for a new pattern and the resulting mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JoinChoice {
    pub var: VarId,
    pub column: Position,
    pub mode: JoinMode,
}

/// Cardinality figures for one triple pattern: `|P|` and the number of
/// distinct bindings at each position.
///
/// For a pattern `?s p ?o` these are the global predicate statistics; for
/// patterns carrying constants or a variable predicate the master refines
/// them by probing the workers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternStats {
    pub card: f64,
    pub distinct: [f64; 3],
}

impl PatternStats {
    pub fn new(card: f64, subjects: f64, predicates: f64, objects: f64) -> Self {
        PatternStats { card, distinct: [subjects, predicates, objects] }
    }

    pub fn from_predicate(stat: &PredicateStat) -> Self {
        PatternStats::new(
            stat.count as f64,
            stat.distinct_subjects as f64,
            1.0,
            stat.distinct_objects as f64,
        )
    }

    pub fn empty() -> Self {
        PatternStats::new(0.0, 0.0, 0.0, 0.0)
    }

    /// `|p.v|` for the column at `pos`.
    pub fn distinct(&self, pos: Position) -> f64 {
        self.distinct[pos.index()]
    }

    /// `P_pv = |P| / |p.v|`; 1 for an empty pattern.
    pub fn per(&self, pos: Position) -> f64 {
        let d = self.distinct(pos);
        if d > 0.0 {
            self.card / d
        } else {
            1.0
        }
    }
}

/// A dynamic-programming state: a connected set of patterns, the best
/// ordering found for it and its estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct DpState {
    /// Bit `i` set when pattern `i` is covered.
    pub subgraph: u64,
    pub ordering: Vec<usize>,
    pub cost: f64,
    pub cum_card: f64,
    /// Estimated binding count per variable, indexed by [`VarId`].
    pub bindings: Vec<Option<f64>>,
    pub pinned_subject: Term<TermId>,
}

impl DpState {
    pub fn binding(&self, v: VarId) -> Option<f64> {
        self.bindings.get(v.index()).copied().flatten()
    }

    pub fn covers(&self, i: usize) -> bool {
        self.subgraph & (1 << i) != 0
    }
}

fn initial_binding(pattern: &TriplePattern<TermId>, stats: &PatternStats, v: VarId) -> f64 {
    Position::ALL
        .iter()
        .filter(|&&pos| pattern.term(pos).var() == Some(v))
        .map(|&pos| stats.distinct(pos))
        .fold(f64::INFINITY, f64::min)
}

/// Single-pattern state: zero cost, cumulative cardinality `|P|`, bindings
/// from the pattern's distinct counts.
pub fn initial_state(q: &EncodedQuery, i: usize, stats: &PatternStats) -> DpState {
    let pattern = &q.patterns[i];
    let mut bindings = vec![None; q.variables.len()];
    for v in pattern.variables() {
        bindings[v.index()] = Some(initial_binding(pattern, stats, v));
    }
    DpState {
        subgraph: 1 << i,
        ordering: vec![i],
        cost: 0.0,
        cum_card: stats.card,
        bindings,
        pinned_subject: pattern.s.clone(),
    }
}

/// Picks the join column of `next` against the variables already bound in
/// `state`. A shared subject wins; otherwise the object, then the
/// predicate. Remaining shared columns are verified when the join is
/// finalized.
pub fn join_choice(state: &DpState, next: &TriplePattern<TermId>) -> Result<JoinChoice, PlanError> {
    let shared = |t: &Term<TermId>| t.var().filter(|v| state.binding(*v).is_some());
    if let Some(v) = shared(&next.s) {
        let mode = if state.pinned_subject == Term::Var(v) {
            JoinMode::NoComm
        } else {
            JoinMode::HashDistribute
        };
        return Ok(JoinChoice { var: v, column: Position::Subject, mode });
    }
    if let Some(v) = shared(&next.o) {
        return Ok(JoinChoice { var: v, column: Position::Object, mode: JoinMode::Broadcast });
    }
    if let Some(v) = shared(&next.p) {
        return Ok(JoinChoice { var: v, column: Position::Predicate, mode: JoinMode::Broadcast });
    }
    Err(PlanError::NoSharedVariable)
}

pub fn join_mode(state: &DpState, next: &TriplePattern<TermId>) -> Result<JoinMode, PlanError> {
    join_choice(state, next).map(|c| c.mode)
}

/// Communication cost of joining `next` into `state`:
///
/// * `0` on the pinned subject,
/// * `B + ν·B·P_ps` when the projected column is hash distributed,
/// * `B·N + ν·N·B·P_po` when it is broadcast,
///
/// where `B` is the binding estimate of the join variable and `ν` the number
/// of variables of `next`.
pub fn expansion_cost(
    state: &DpState,
    next: &TriplePattern<TermId>,
    choice: &JoinChoice,
    stats: &PatternStats,
    workers: usize,
) -> f64 {
    let b = state.binding(choice.var).unwrap_or(0.0);
    let nu = next.variables().len() as f64;
    let n = workers as f64;
    match choice.mode {
        JoinMode::NoComm => 0.0,
        JoinMode::HashDistribute => b + nu * b * stats.per(Position::Subject),
        JoinMode::Broadcast => b * n + nu * n * b * stats.per(Position::Object),
    }
}

/// New binding estimates and cumulative cardinality after joining `next`.
///
/// A constant subject or object caps the fan-out at one row per input row.
pub fn reestimate_bindings(
    state: &DpState,
    next: &TriplePattern<TermId>,
    choice: &JoinChoice,
    stats: &PatternStats,
) -> (Vec<Option<f64>>, f64) {
    let vars = next.variables();
    let nu = vars.len();
    let mut bindings = state.bindings.clone();
    for v in vars {
        let pos = next.position_of(v).expect("variable of the pattern");
        let prev = state.binding(v).unwrap_or_else(|| initial_binding(next, stats, v));
        let est = if nu == 1 {
            prev.min(stats.card)
        } else if v == choice.var {
            prev.min(stats.distinct(pos))
        } else {
            prev.min(prev * stats.per(pos)).min(stats.distinct(pos))
        };
        bindings[v.index()] = Some(est);
    }
    let bound_end = !next.s.is_var() || !next.o.is_var();
    let fan_out = if bound_end { 1.0 } else { stats.per(choice.column) };
    (bindings, state.cum_card * (1.0 + fan_out))
}

/// Extends `state` with pattern `j`.
pub fn expand(
    state: &DpState,
    q: &EncodedQuery,
    j: usize,
    stats: &PatternStats,
    workers: usize,
) -> Result<(DpState, JoinChoice, f64), PlanError> {
    let next = &q.patterns[j];
    let choice = join_choice(state, next)?;
    let step_cost = expansion_cost(state, next, &choice, stats, workers);
    let (bindings, cum_card) = reestimate_bindings(state, next, &choice, stats);
    let mut ordering = state.ordering.clone();
    ordering.push(j);
    let expanded = DpState {
        subgraph: state.subgraph | (1 << j),
        ordering,
        cost: state.cost + step_cost,
        cum_card,
        bindings,
        pinned_subject: state.pinned_subject.clone(),
    };
    Ok((expanded, choice, step_cost))
}
