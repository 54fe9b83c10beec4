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

use rayon::prelude::*;

use crate::planner::{ExecutionPlan, JoinChoice, JoinMode, local_plan};
use crate::query::{EncodedQuery, Term, TriplePattern, VarId};
use crate::rdf::{EncodedTriple, Position, TermId};
use crate::storage::StorePattern;

use super::cluster::{Cluster, PatternSource, TripleSource};
use super::table::{bind_triple, bound_lookup, hash_join, BindingTable};
use super::trace::{Endpoint, ExecTrace, MessageKind};

#[derive(Debug, Clone, Copy, Default)]
pub struct ExecOptions {
    /// Keep the shipped join values in the message log.
    pub record_values: bool,
}

/// Result of one query: the rows each worker reported, their projected
/// union and the message trace.
#[derive(Debug, Clone)]
pub struct DistributedResult {
    pub per_worker: Vec<BindingTable>,
    pub table: BindingTable,
    pub trace: ExecTrace,
}

/// Extends every row of `left` with the matches of `next`, probing `source`
/// with all constants and already bound variables fixed.
pub fn extend_rows<S: TripleSource + ?Sized>(left: &BindingTable, next: &TriplePattern<TermId>, source: &S) -> BindingTable {
    let new_vars: Vec<_> = next.variables().into_iter().filter(|v| left.column_index(*v).is_none()).collect();
    let mut columns = left.columns.clone();
    columns.extend(&new_vars);
    let mut out = BindingTable::new(columns);
    for row in &left.rows {
        let lookup = bound_lookup(next, &left.columns, row);
        source.visit(lookup, &mut |t| {
            if let Some(values) = bind_triple(next, &t, &new_vars) {
                let mut r = row.clone();
                r.extend(values);
                out.rows.push(r);
            }
        });
    }
    out
}

/// Joins on the pinned subject: each worker probes its own PS-index.
pub fn local_join_step(left: &[BindingTable], next: &TriplePattern<TermId>, cluster: &Cluster) -> Vec<BindingTable> {
    left.par_iter()
        .enumerate()
        .map(|(w, table)| extend_rows(table, next, cluster.worker(w)))
        .collect()
}

/// Distributed semi-join of the per-worker tables `left` with `next`.
///
/// 1. Each worker projects its rows on the join variable and ships the
///    distinct values to the owner of each value (hash) or to every
///    worker (broadcast), itself included.
/// 2. Receivers look the values up in their indexes and reply with the
///    matching triples.
/// 3. Each worker joins its rows with the candidates it got back.
pub fn dsj_step(
    left: &[BindingTable],
    next: &TriplePattern<TermId>,
    choice: JoinChoice,
    cluster: &Cluster,
    trace: &mut ExecTrace,
) -> Vec<BindingTable> {
    assert_ne!(choice.mode, JoinMode::NoComm, "semi-join needs a communicating mode");
    let n = cluster.num_workers();

    // project and route
    let outboxes: Vec<Vec<(usize, Vec<TermId>)>> = left
        .par_iter()
        .map(|table| {
            let values = table.distinct_values(choice.var);
            if values.is_empty() {
                return Vec::new();
            }
            match choice.mode {
                JoinMode::HashDistribute => {
                    let mut per: Vec<Vec<TermId>> = vec![Vec::new(); n];
                    for v in values {
                        per[cluster.worker_of(v)].push(v);
                    }
                    per.into_iter().enumerate().filter(|(_, v)| !v.is_empty()).collect()
                }
                _ => (0..n).map(|to| (to, values.clone())).collect(),
            }
        })
        .collect();
    let kind = match choice.mode {
        JoinMode::HashDistribute => MessageKind::ProjectionHash,
        _ => MessageKind::ProjectionBroadcast,
    };
    let mut inbox: Vec<Vec<(usize, Vec<TermId>)>> = vec![Vec::new(); n];
    for (from, out) in outboxes.into_iter().enumerate() {
        for (to, values) in out {
            trace.send(kind, Endpoint::Worker(from), Endpoint::Worker(to), values.len(), Some(values.clone()));
            inbox[to].push((from, values));
        }
    }

    // semi-join against the local index
    let vars = next.variables();
    let replies: Vec<Vec<(usize, Vec<EncodedTriple>)>> = inbox
        .par_iter()
        .enumerate()
        .map(|(r, received)| {
            let store = cluster.worker(r);
            received
                .iter()
                .map(|(from, values)| {
                    let mut candidates = Vec::new();
                    for &v in values {
                        let lookup = column_lookup(next, choice.column, v);
                        store.for_each_match(lookup, |t| {
                            if bind_triple(next, &t, &vars).is_some() {
                                candidates.push(t);
                            }
                        });
                    }
                    (*from, candidates)
                })
                .collect()
        })
        .collect();
    let mut candidates: Vec<Vec<EncodedTriple>> = vec![Vec::new(); n];
    for (r, out) in replies.into_iter().enumerate() {
        for (to, triples) in out {
            if triples.is_empty() {
                continue;
            }
            trace.send(MessageKind::CandidateTriples, Endpoint::Worker(r), Endpoint::Worker(to), triples.len(), None);
            candidates[to].extend(triples);
        }
    }

    // finalize
    left.par_iter()
        .zip(candidates.par_iter())
        .map(|(table, cands)| hash_join(table, next, choice.var, cands))
        .collect()
}

fn column_lookup(next: &TriplePattern<TermId>, column: Position, value: TermId) -> StorePattern {
    let fixed = |pos: Position, t: &Term<TermId>| if pos == column { Some(value) } else { t.constant().copied() };
    StorePattern {
        s: fixed(Position::Subject, &next.s),
        p: fixed(Position::Predicate, &next.p),
        o: fixed(Position::Object, &next.o),
    }
}

fn collect_results(q: &EncodedQuery, per_worker: Vec<BindingTable>, mut trace: ExecTrace) -> DistributedResult {
    let columns = per_worker.first().map(|t| t.columns.clone()).unwrap_or_default();
    let mut union = BindingTable::new(columns);
    for (w, table) in per_worker.iter().enumerate() {
        trace.send(MessageKind::LocalResults, Endpoint::Worker(w), Endpoint::Master, table.len(), None);
        union.append(table.clone());
    }
    let table = union.project(&q.projection);
    DistributedResult { per_worker, table, trace }
}

/// Runs `plan` with DSJ steps for communicating joins and local joins on
/// the pinned subject.
pub fn execute_distributed(q: &EncodedQuery, plan: &ExecutionPlan, cluster: &Cluster, opts: ExecOptions) -> DistributedResult {
    let mut trace = ExecTrace::new(opts.record_values);
    let n = cluster.num_workers();
    for w in 0..n {
        trace.send(MessageKind::PlanBroadcast, Endpoint::Master, Endpoint::Worker(w), 0, None);
    }
    let first = &q.patterns[plan.steps[0].pattern];
    trace.begin_step("Scan");
    let mut tables: Vec<BindingTable> = (0..n)
        .into_par_iter()
        .map(|w| extend_rows(&BindingTable::unit(), first, cluster.worker(w)))
        .collect();
    for step in &plan.steps[1..] {
        let next = &q.patterns[step.pattern];
        let choice = step.join.expect("joined step carries its join column");
        trace.begin_step(choice.mode.to_string());
        tables = match choice.mode {
            JoinMode::NoComm => local_join_step(&tables, next, cluster),
            _ => dsj_step(&tables, next, choice, cluster, &mut trace),
        };
    }
    collect_results(q, tables, trace)
}

/// Evaluates `q` on every worker without communication. `source_of(w, i)`
/// names the data worker `w` matches pattern `i` against; each worker picks
/// its own join order from local counts.
pub fn execute_parallel<'a, F>(q: &EncodedQuery, cluster: &'a Cluster, source_of: F, opts: ExecOptions) -> DistributedResult
where
    F: Fn(usize, usize) -> PatternSource<'a> + Sync,
{
    let mut trace = ExecTrace::new(opts.record_values);
    let n = cluster.num_workers();
    for w in 0..n {
        trace.send(MessageKind::PlanBroadcast, Endpoint::Master, Endpoint::Worker(w), 0, None);
    }
    trace.begin_step("Parallel");
    let per_worker: Vec<BindingTable> = (0..n)
        .into_par_iter()
        .map(|w| {
            let sources: Vec<PatternSource<'a>> = (0..q.patterns.len()).map(|i| source_of(w, i)).collect();
            let counts: Vec<usize> = q
                .patterns
                .iter()
                .zip(&sources)
                .map(|(p, s)| s.count(bound_lookup(p, &[], &[])))
                .collect();
            let plan = local_plan(q, &counts).expect("parsed queries are connected");
            let mut table = BindingTable::unit();
            for i in plan.ordering() {
                table = extend_rows(&table, &q.patterns[i], &sources[i]);
                if table.is_empty() {
                    break;
                }
            }
            table
        })
        .collect();
    // local plans differ per worker, so columns are put in variable order
    let columns: Vec<VarId> = (0..q.variables.len()).map(|i| VarId(i as u16)).collect();
    let per_worker = per_worker
        .into_iter()
        .map(|t| if t.is_empty() { BindingTable::new(columns.clone()) } else { t.project(&columns) })
        .collect();
    collect_results(q, per_worker, trace)
}
