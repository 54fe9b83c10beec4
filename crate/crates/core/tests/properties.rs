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

mod common;

use std::collections::BTreeSet;

use adhash_core::adaptivity::{AdaptivityConfig, Budget};
use adhash_core::engine::{Engine, EngineConfig, ExecMode};
use adhash_core::query::{classify, QueryShape};
use adhash_core::rdf::TermId;
use common::{nested_loop, random_graph, random_query, seeded, Dataset};
use proptest::prelude::*;

fn engine(data: &Dataset, workers: usize, threshold: u64, budget: Budget) -> Engine {
    let config = EngineConfig {
        workers,
        adaptive: true,
        adaptivity: AdaptivityConfig { threshold, budget },
        ..EngineConfig::default()
    };
    Engine::from_triples(data.dict.clone(), data.triples.clone(), config).unwrap()
}

fn rows(e: &mut Engine, text: &str) -> BTreeSet<Vec<TermId>> {
    e.execute_text(text).unwrap().table.rows.into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn replicas_never_exceed_the_budget(seed in any::<u64>(), workers in 1usize..5, percent in 1.0f64..30.0) {
        let mut rng = seeded(seed);
        let data = random_graph(&mut rng, 600, 120, 6);
        let mut e = engine(&data, workers, 1, Budget::Percent(percent));
        let limits: Vec<usize> = e.adaptivity().unwrap().limits().iter().map(|l| l.unwrap()).collect();
        for _ in 0..12 {
            let text = random_query(&mut rng, &data, 3, 0.3, 0.0);
            let q = data.encode(&text).unwrap();
            prop_assert_eq!(rows(&mut e, &text), nested_loop(&q, &data.triples));
            for (w, &c) in e.adaptivity().unwrap().replica_index().replica_counts().iter().enumerate() {
                prop_assert!(c <= limits[w], "worker {} holds {} replicas over {}", w, c, limits[w]);
            }
        }
    }

    #[test]
    fn repeated_query_stays_indexed(seed in any::<u64>(), workers in 2usize..5) {
        let mut rng = seeded(seed);
        let data = random_graph(&mut rng, 500, 100, 5);
        let text = random_query(&mut rng, &data, 3, 0.3, 0.0);
        let q = data.encode(&text).unwrap();
        prop_assume!(classify(&q) != QueryShape::SubjectStar);
        let expect = nested_loop(&q, &data.triples);
        let mut e = engine(&data, workers, 1, Budget::Unlimited);
        prop_assert_eq!(rows(&mut e, &text), expect.clone());
        for _ in 0..3 {
            let o = e.execute_text(&text).unwrap();
            prop_assert_eq!(o.mode, ExecMode::ParallelIndexed);
            prop_assert_eq!(o.payload_rows(), 0);
            prop_assert_eq!(o.table.rows.into_iter().collect::<BTreeSet<_>>(), expect.clone());
        }
    }

    #[test]
    fn unlimited_replicas_only_grow(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let data = random_graph(&mut rng, 500, 100, 5);
        let mut e = engine(&data, 3, 1, Budget::Unlimited);
        let mut before = 0;
        for _ in 0..10 {
            let text = random_query(&mut rng, &data, 3, 0.3, 0.0);
            rows(&mut e, &text);
            let now = e.adaptivity().unwrap().replica_index().total_replicas();
            prop_assert!(now >= before);
            prop_assert!(e.adaptivity().unwrap().evictions().is_empty());
            before = now;
        }
    }
}
