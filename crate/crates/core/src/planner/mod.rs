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

//! Locality-aware join ordering.
//!
//! The master orders the patterns of a general query into a left-deep plan
//! with a dynamic program over pattern subsets; the cost model counts the
//! rows shipped by distributed semi-joins and is zero for joins on the
//! pinned subject. Workers order subject stars and pattern-index matches on
//! their own from local candidate counts.

mod cost;
mod dp;
mod local;

pub use cost::{
    expand, expansion_cost, initial_state, join_choice, join_mode, reestimate_bindings, DpState,
    JoinChoice, JoinMode, PatternStats,
};
pub use dp::{optimize, plan_ordering, ExecutionPlan, PlanError, PlanStep};
pub use local::{local_ordering, local_plan};
