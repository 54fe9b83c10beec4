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

use crate::query::EncodedQuery;

use super::cost::{join_choice, DpState, JoinChoice, JoinMode};
use super::dp::{ExecutionPlan, PlanError, PlanStep};

/// Local join order for a worker: start from the pattern with the fewest
/// local candidates and keep adding the smallest pattern connected to what
/// is already joined. All joins are local.
pub fn local_plan(q: &EncodedQuery, local_cards: &[usize]) -> Result<ExecutionPlan, PlanError> {
    assert_eq!(q.patterns.len(), local_cards.len(), "one count per pattern");
    let n = q.patterns.len();
    if n == 0 {
        return Err(PlanError::EmptyQuery);
    }
    if n > 64 {
        return Err(PlanError::TooManyPatterns);
    }
    let first = (0..n).min_by_key(|&i| (local_cards[i], i)).expect("non-empty");
    let mut state = DpState {
        subgraph: 1 << first,
        ordering: vec![first],
        cost: 0.0,
        cum_card: local_cards[first] as f64,
        bindings: vec![None; q.variables.len()],
        pinned_subject: q.patterns[first].s.clone(),
    };
    for v in q.patterns[first].variables() {
        state.bindings[v.index()] = Some(1.0);
    }
    let mut steps = vec![PlanStep { pattern: first, join: None, cost: 0.0, cum_card: state.cum_card }];
    for _ in 1..n {
        let (j, choice) = (0..n)
            .filter(|&j| !state.covers(j))
            .filter_map(|j| join_choice(&state, &q.patterns[j]).ok().map(|c| (j, c)))
            .min_by_key(|&(j, _)| (local_cards[j], j))
            .ok_or(PlanError::NoSharedVariable)?;
        for v in q.patterns[j].variables() {
            state.bindings[v.index()] = Some(1.0);
        }
        state.subgraph |= 1 << j;
        state.ordering.push(j);
        steps.push(PlanStep {
            pattern: j,
            join: Some(JoinChoice { mode: JoinMode::NoComm, ..choice }),
            cost: 0.0,
            cum_card: local_cards[j] as f64,
        });
    }
    Ok(ExecutionPlan { steps, pinned_subject: state.pinned_subject, cost: 0.0, cum_card: 0.0 })
}

/// Convenience for callers that only need the order.
pub fn local_ordering(q: &EncodedQuery, local_cards: &[usize]) -> Result<Vec<usize>, PlanError> {
    local_plan(q, local_cards).map(|p| p.ordering())
}
