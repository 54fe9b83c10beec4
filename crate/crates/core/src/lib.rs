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

//! An in-memory master/worker RDF engine for conjunctive SPARQL queries.
//!
//! Triples are sharded across workers by a hash of their subject, so any
//! star of patterns joined on a common subject is answered by every worker
//! in isolation. Other queries are planned at the master by a cost-based
//! dynamic program that tracks which joins can stay local, and run as a
//! sequence of distributed semi-joins. The master also watches the
//! workload: templates that become hot are redistributed around a core
//! vertex into per-worker replica storage, after which matching queries
//! run in parallel with no inter-worker traffic.

pub mod rdf;
pub mod storage;
pub mod partition;
pub mod query;
pub mod planner;
pub mod exec;
pub mod adaptivity;
pub mod engine;
