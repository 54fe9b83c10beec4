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

//! Workload-driven redistribution of hot query patterns.

mod controller;
mod heatmap;
mod index;
mod pattern;
mod replica;
mod score;
mod tree;

pub use controller::{Adaptivity, AdaptivityConfig, Eviction, IndexMatch, IrdReport, Skipped};
pub use heatmap::{HeatMap, HotPattern};
pub use index::{EdgeId, PatternIndex, PiNode};
pub use pattern::{Label, PatternNode, PatternTree, VertexMeta};
pub use replica::{Budget, ReplicaIndex, StorageModule};
pub use score::{chauvenet_outliers, score_vertices, PredicateScores, VertexScores};
pub use tree::{build_redistribution_tree, Direction, RedistributionTree, TreeEdge, TreeNode};
