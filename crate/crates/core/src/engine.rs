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

//! The master: loads data onto the workers, keeps the dictionary and
//! statistics, and routes each query to parallel or distributed execution.

use std::fmt;
use std::io::BufRead;
use std::time::{Duration, Instant};

use log::{debug, info, warn};
use rayon::prelude::*;
use thiserror::Error;

use crate::adaptivity::{Adaptivity, AdaptivityConfig, IrdReport, PredicateScores};
use crate::exec::{
    execute_distributed, execute_parallel, BindingTable, Cluster, ExecOptions, ExecTrace, PatternSource,
};
use crate::partition::{BalanceReport, ClusterConfig, NoWorkers, SubjectHash};
use crate::planner::{optimize, ExecutionPlan, PatternStats, PlanError};
use crate::query::{classify, parse_query, split_workload, EncodedQuery, ParsedQuery, QueryError, QueryShape, Term};
use crate::rdf::{parse_ntriples, Dictionary, EncodedTriple, NTriplesError};
use crate::storage::{aggregate_stats, compute_local_stats, Degrees, PredicateStats};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Data(#[from] NTriplesError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Workers(#[from] NoWorkers),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub workers: usize,
    pub hash: SubjectHash,
    pub adaptive: bool,
    pub adaptivity: AdaptivityConfig,
    /// Keep shipped join values in message traces.
    pub record_values: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            workers: 1,
            hash: SubjectHash::Modulo,
            adaptive: true,
            adaptivity: AdaptivityConfig::default(),
            record_values: false,
        }
    }
}

/// How a query was answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExecMode {
    /// Subject star on the main indexes.
    ParallelStar,
    /// Served by redistributed patterns.
    ParallelIndexed,
    Distributed,
    /// A constant is not in the dataset, so nothing can match.
    NoMatch,
}

impl ExecMode {
    pub fn is_parallel(self) -> bool {
        matches!(self, ExecMode::ParallelStar | ExecMode::ParallelIndexed)
    }
}

impl fmt::Display for ExecMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExecMode::ParallelStar => "parallel-star",
            ExecMode::ParallelIndexed => "parallel-indexed",
            ExecMode::Distributed => "distributed",
            ExecMode::NoMatch => "no-match",
        })
    }
}

#[derive(Debug, Clone)]
pub struct QueryOutcome {
    pub query: ParsedQuery,
    /// Projected result rows.
    pub table: BindingTable,
    /// Rows reported by each worker before projection.
    pub per_worker: Vec<BindingTable>,
    pub mode: ExecMode,
    pub plan: Option<ExecutionPlan>,
    pub trace: ExecTrace,
    /// Redistribution triggered by this query, if any.
    pub redistribution: Option<IrdReport>,
}

impl QueryOutcome {
    /// Inter-worker payload rows spent answering the query.
    pub fn payload_rows(&self) -> usize {
        self.trace.payload_rows()
    }

    /// Payload rows of the redistribution the query triggered.
    pub fn redistribution_rows(&self) -> usize {
        self.redistribution.as_ref().map_or(0, IrdReport::payload_rows)
    }

    pub fn header(&self) -> Vec<String> {
        self.query.projection.iter().map(|&v| format!("?{}", self.query.var_name(v))).collect()
    }
}

/// Totals over a replayed workload.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WorkloadSummary {
    pub queries: usize,
    pub errors: usize,
    pub parallel_star: usize,
    pub parallel_indexed: usize,
    pub distributed: usize,
    pub no_match: usize,
    pub result_rows: usize,
    pub query_payload_rows: usize,
    pub redistribution_rows: usize,
    pub redistributions: usize,
    pub evictions: usize,
    pub replication_ratio: f64,
    pub elapsed: Duration,
}

impl WorkloadSummary {
    pub fn payload_rows(&self) -> usize {
        self.query_payload_rows + self.redistribution_rows
    }

    fn count(&mut self, outcome: &QueryOutcome) {
        self.queries += 1;
        match outcome.mode {
            ExecMode::ParallelStar => self.parallel_star += 1,
            ExecMode::ParallelIndexed => self.parallel_indexed += 1,
            ExecMode::Distributed => self.distributed += 1,
            ExecMode::NoMatch => self.no_match += 1,
        }
        self.result_rows += outcome.table.len();
        self.query_payload_rows += outcome.payload_rows();
        if let Some(r) = &outcome.redistribution {
            self.redistributions += 1;
            self.evictions += r.evicted;
            self.redistribution_rows += r.payload_rows();
        }
    }

    /// Key/value lines without timings, so equal runs print equal text.
    pub fn to_tsv(&self) -> String {
        format!(
            "queries\t{}\nerrors\t{}\nparallel_star\t{}\nparallel_indexed\t{}\ndistributed\t{}\nno_match\t{}\n\
             result_rows\t{}\nquery_payload_rows\t{}\nredistribution_rows\t{}\npayload_rows\t{}\n\
             redistributions\t{}\nevictions\t{}\nreplication_ratio\t{:.6}\n",
            self.queries,
            self.errors,
            self.parallel_star,
            self.parallel_indexed,
            self.distributed,
            self.no_match,
            self.result_rows,
            self.query_payload_rows,
            self.redistribution_rows,
            self.payload_rows(),
            self.redistributions,
            self.evictions,
            self.replication_ratio,
        )
    }
}

#[derive(Debug, Clone)]
pub struct Engine {
    config: EngineConfig,
    dict: Dictionary,
    cluster: Cluster,
    stats: PredicateStats,
    adaptivity: Option<Adaptivity>,
    load_time: Duration,
}

impl Engine {
    /// Parses N-Triples and loads them.
    pub fn load_ntriples<R: BufRead>(reader: R, config: EngineConfig) -> Result<Self, EngineError> {
        let start = Instant::now();
        let mut dict = Dictionary::new();
        let triples = parse_ntriples(reader, &mut dict)?;
        let mut engine = Self::from_triples(dict, triples, config)?;
        engine.load_time = start.elapsed();
        Ok(engine)
    }

    /// Shards `triples`, builds the worker indexes and gathers statistics.
    pub fn from_triples(dict: Dictionary, mut triples: Vec<EncodedTriple>, config: EngineConfig) -> Result<Self, EngineError> {
        let start = Instant::now();
        let cluster_config = ClusterConfig::new(config.workers, config.hash)?;
        triples.par_sort_unstable();
        triples.dedup();
        let degrees = Degrees::from_triples(&triples, dict.len());
        let cluster = Cluster::load(&triples, cluster_config);
        let partials: Vec<PredicateStats> =
            cluster.workers().par_iter().map(|w| compute_local_stats(w, &degrees)).collect();
        let stats = aggregate_stats(&partials);
        let adaptivity = config
            .adaptive
            .then(|| Adaptivity::new(&cluster, PredicateScores::from_stats(&stats), config.adaptivity));
        info!(
            "loaded {} triples, {} terms, {} predicates on {} workers",
            triples.len(),
            dict.len(),
            stats.len(),
            config.workers
        );
        Ok(Engine { config, dict, cluster, stats, adaptivity, load_time: start.elapsed() })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dict
    }

    pub fn cluster(&self) -> &Cluster {
        &self.cluster
    }

    pub fn stats(&self) -> &PredicateStats {
        &self.stats
    }

    pub fn adaptivity(&self) -> Option<&Adaptivity> {
        self.adaptivity.as_ref()
    }

    pub fn load_time(&self) -> Duration {
        self.load_time
    }

    pub fn balance(&self) -> BalanceReport {
        BalanceReport::from_sizes(&self.cluster.sizes())
    }

    /// Replicated triples over base triples.
    pub fn replication_ratio(&self) -> f64 {
        let base = self.cluster.total_triples();
        match &self.adaptivity {
            Some(a) if base > 0 => a.replica_index().total_replicas() as f64 / base as f64,
            _ => 0.0,
        }
    }

    fn options(&self) -> ExecOptions {
        ExecOptions { record_values: self.config.record_values }
    }

    /// Cardinality estimates per pattern: global statistics for a plain
    /// `?s p ?o`, a worker probe otherwise.
    fn pattern_stats(&self, q: &EncodedQuery, trace: &mut ExecTrace) -> Vec<PatternStats> {
        q.patterns
            .iter()
            .map(|pat| match (&pat.s, &pat.p, &pat.o) {
                (Term::Var(s), Term::Const(p), Term::Var(o)) if s != o => {
                    self.stats.get(*p).map_or_else(PatternStats::empty, PatternStats::from_predicate)
                }
                _ => self.cluster.probe(pat, Some(trace)),
            })
            .collect()
    }

    /// The estimates the optimizer sees for each pattern of `q`.
    pub fn estimates(&self, q: &EncodedQuery) -> Vec<PatternStats> {
        self.pattern_stats(q, &mut ExecTrace::new(false))
    }

    /// The distributed plan the optimizer picks for `q`.
    pub fn plan(&self, q: &EncodedQuery) -> Result<ExecutionPlan, PlanError> {
        optimize(q, &self.estimates(q), self.cluster.num_workers())
    }

    /// Plan listing for a query text; `None` when a constant is unknown.
    pub fn explain(&self, text: &str) -> Result<Option<String>, EngineError> {
        let parsed = parse_query(text)?;
        let Some(q) = parsed.resolve(&self.dict) else { return Ok(None) };
        Ok(Some(self.plan(&q)?.explain(&q, &self.dict)))
    }

    pub fn execute_text(&mut self, text: &str) -> Result<QueryOutcome, EngineError> {
        let parsed = parse_query(text)?;
        self.execute(parsed)
    }

    pub fn execute(&mut self, parsed: ParsedQuery) -> Result<QueryOutcome, EngineError> {
        let Some(q) = parsed.resolve(&self.dict) else {
            debug!("query mentions an unknown constant; no matches");
            let columns = parsed.projection.clone();
            return Ok(QueryOutcome {
                query: parsed,
                table: BindingTable::new(columns),
                per_worker: Vec::new(),
                mode: ExecMode::NoMatch,
                plan: None,
                trace: ExecTrace::new(false),
                redistribution: None,
            });
        };
        let opts = self.options();
        let shape = classify(&q);
        let tree = match (&mut self.adaptivity, shape) {
            (Some(ad), QueryShape::General) if !q.has_variable_predicate() => {
                ad.tick();
                ad.redistribution_tree(&q)
            }
            _ => None,
        };
        let matched = match (&mut self.adaptivity, &tree) {
            (Some(ad), Some(tree)) => ad.match_query(tree),
            _ => None,
        };

        let (mode, plan, result) = if shape == QueryShape::SubjectStar {
            let cluster = &self.cluster;
            let r = execute_parallel(&q, cluster, |w, _| PatternSource::Main(cluster.worker(w)), opts);
            (ExecMode::ParallelStar, None, r)
        } else if let (Some(m), Some(ad)) = (&matched, &self.adaptivity) {
            let cluster = &self.cluster;
            let r = execute_parallel(&q, cluster, |w, i| ad.source(cluster, m, w, i), opts);
            (ExecMode::ParallelIndexed, None, r)
        } else {
            let mut probes = ExecTrace::new(false);
            let stats = self.pattern_stats(&q, &mut probes);
            let plan = optimize(&q, &stats, self.cluster.num_workers())?;
            let mut r = execute_distributed(&q, &plan, &self.cluster, opts);
            r.trace.messages.splice(0..0, probes.messages);
            (ExecMode::Distributed, Some(plan), r)
        };

        let mut redistribution = None;
        if let (Some(ad), Some(tree)) = (&mut self.adaptivity, &tree) {
            if let Some(hot) = ad.record(tree) {
                redistribution = Some(ad.redistribute(&hot, &self.cluster));
            }
        }
        Ok(QueryOutcome {
            query: parsed,
            table: result.table,
            per_worker: result.per_worker,
            mode,
            plan,
            trace: result.trace,
            redistribution,
        })
    }

    /// Runs every query of a `;`-separated workload in order. Failing
    /// queries are logged and counted; the replay goes on.
    pub fn run_workload(&mut self, text: &str) -> WorkloadSummary {
        self.run_workload_with(text, |_, _| {})
    }

    /// [`Engine::run_workload`] with a callback after each query.
    pub fn run_workload_with<F>(&mut self, text: &str, mut each: F) -> WorkloadSummary
    where
        F: FnMut(&Engine, &Result<QueryOutcome, EngineError>),
    {
        let start = Instant::now();
        let mut summary = WorkloadSummary::default();
        for (i, query) in split_workload(text).into_iter().enumerate() {
            let result = self.execute_text(query);
            match &result {
                Ok(outcome) => summary.count(outcome),
                Err(e) => {
                    warn!("workload query {}: {e}", i + 1);
                    summary.errors += 1;
                }
            }
            each(self, &result);
        }
        summary.elapsed = start.elapsed();
        summary.replication_ratio = self.replication_ratio();
        summary
    }
}
