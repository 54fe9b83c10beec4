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

//! Query execution over the simulated cluster.
//!
//! Workers are plain in-process stores. Every phase of a distributed step
//! runs on all workers at once and ends at a barrier; anything that crosses
//! workers goes through the message trace so communication can be audited.

mod cluster;
mod distributed;
mod table;
mod trace;

pub use cluster::{Cluster, PatternSource, TripleSource};
pub use distributed::{
    dsj_step, execute_distributed, execute_parallel, extend_rows, local_join_step, DistributedResult, ExecOptions,
};
pub use table::BindingTable;
pub use trace::{Endpoint, ExecTrace, MessageKind, MessageRecord, StepTrace};
