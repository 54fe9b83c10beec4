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
use std::io::{self, Write};

use crate::rdf::TermId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MessageKind {
    ProjectionHash,
    ProjectionBroadcast,
    CandidateTriples,
    LocalResults,
    PlanBroadcast,
    CardinalityProbe,
    CardinalityReply,
    /// Triples shipped by an incremental redistribution run.
    Redistribution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Master,
    Worker(usize),
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Master => f.write_str("master"),
            Endpoint::Worker(w) => write!(f, "w{w}"),
        }
    }
}

/// One delivered message. `rows` is the payload size; `values` holds the
/// shipped join values when value recording is on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageRecord {
    pub step: usize,
    pub kind: MessageKind,
    pub from: Endpoint,
    pub to: Endpoint,
    pub rows: usize,
    pub values: Option<Vec<TermId>>,
}

impl MessageRecord {
    /// True for payload moving between two different workers.
    pub fn is_inter_worker(&self) -> bool {
        matches!((self.from, self.to), (Endpoint::Worker(a), Endpoint::Worker(b)) if a != b)
    }
}

/// Per-step totals. `rows_sent` counts projected join values and
/// `rows_received` candidate triples, both only between distinct workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTrace {
    pub step: usize,
    pub mode: String,
    pub rows_sent: usize,
    pub rows_received: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExecTrace {
    pub steps: Vec<StepTrace>,
    pub messages: Vec<MessageRecord>,
    pub record_values: bool,
}

impl ExecTrace {
    pub fn new(record_values: bool) -> Self {
        ExecTrace { record_values, ..Default::default() }
    }

    pub fn begin_step(&mut self, mode: impl Into<String>) -> usize {
        let step = self.steps.len() + 1;
        self.steps.push(StepTrace { step, mode: mode.into(), rows_sent: 0, rows_received: 0 });
        step
    }

    /// Records a message and adds inter-worker payload to the current step.
    pub fn send(&mut self, kind: MessageKind, from: Endpoint, to: Endpoint, rows: usize, values: Option<Vec<TermId>>) {
        let step = self.steps.len();
        let record = MessageRecord {
            step,
            kind,
            from,
            to,
            rows,
            values: if self.record_values { values } else { None },
        };
        if record.is_inter_worker() {
            if let Some(s) = self.steps.last_mut() {
                match kind {
                    MessageKind::CandidateTriples => s.rows_received += rows,
                    _ => s.rows_sent += rows,
                }
            }
        }
        self.messages.push(record);
    }

    /// Inter-worker payload rows over all steps.
    pub fn payload_rows(&self) -> usize {
        self.steps.iter().map(|s| s.rows_sent + s.rows_received).sum()
    }

    pub fn inter_worker_messages(&self) -> impl Iterator<Item = &MessageRecord> {
        self.messages.iter().filter(|m| m.is_inter_worker())
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "step\tmode\trows_sent\trows_received")?;
        for s in &self.steps {
            writeln!(out, "{}\t{}\t{}\t{}", s.step, s.mode, s.rows_sent, s.rows_received)?;
        }
        Ok(())
    }
}
