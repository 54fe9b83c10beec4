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

//! Conjunctive basic graph pattern queries.

mod graph;
mod parser;

pub use graph::{classify, EncodedQuery, ParsedQuery, QueryGraph, QueryShape, Term, TriplePattern, VarId};
pub use parser::{expand_prefixed, parse_query, split_workload, QueryError, PREFIXES};
