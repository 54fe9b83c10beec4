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

//! Shared fixtures, data generators and a centralized reference evaluator.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use adhash_core::query::{parse_query, EncodedQuery, Term};
use adhash_core::rdf::{parse_ntriples, Dictionary, EncodedTriple, TermId};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Zipf};

pub const CAMPUS: &str = include_str!("../fixtures/campus.nt");
pub const EX: &str = "http://example.org/";

pub struct Dataset {
    pub dict: Dictionary,
    pub triples: Vec<EncodedTriple>,
}

impl Dataset {
    pub fn campus() -> Self {
        let mut dict = Dictionary::new();
        let triples = parse_ntriples(CAMPUS.as_bytes(), &mut dict).unwrap();
        Dataset { dict, triples }
    }

    pub fn id(&self, local: &str) -> TermId {
        self.dict.lookup(&iri(local)).unwrap_or_else(|| panic!("{local} not in dictionary"))
    }

    pub fn encode(&self, text: &str) -> Option<EncodedQuery> {
        parse_query(text).unwrap().resolve(&self.dict)
    }

    pub fn oracle(&self) -> Oracle {
        Oracle::new(&self.triples)
    }
}

pub fn iri(local: &str) -> String {
    format!("<{EX}{local}>")
}

/// Builds a dataset from `(s, p, o)` local names.
pub fn dataset_from<I: IntoIterator<Item = (String, String, String)>>(rows: I) -> Dataset {
    let mut dict = Dictionary::new();
    let mut triples: Vec<EncodedTriple> = rows
        .into_iter()
        .map(|(s, p, o)| EncodedTriple::new(dict.encode(&iri(&s)), dict.encode(&iri(&p)), dict.encode(&iri(&o))))
        .collect();
    triples.sort();
    triples.dedup();
    Dataset { dict, triples }
}

/// Centralized index nested-loop evaluation over the whole dataset. At each
/// level it extends the partial binding with the remaining pattern that has
/// the most bound positions.
pub struct Oracle {
    all: Vec<EncodedTriple>,
    by_p: HashMap<TermId, Vec<EncodedTriple>>,
    by_ps: HashMap<(TermId, TermId), Vec<EncodedTriple>>,
    by_po: HashMap<(TermId, TermId), Vec<EncodedTriple>>,
}

impl Oracle {
    pub fn new(triples: &[EncodedTriple]) -> Self {
        let mut all = triples.to_vec();
        all.sort();
        all.dedup();
        let mut by_p: HashMap<TermId, Vec<EncodedTriple>> = HashMap::new();
        let mut by_ps: HashMap<(TermId, TermId), Vec<EncodedTriple>> = HashMap::new();
        let mut by_po: HashMap<(TermId, TermId), Vec<EncodedTriple>> = HashMap::new();
        for &t in &all {
            by_p.entry(t.p).or_default().push(t);
            by_ps.entry((t.p, t.s)).or_default().push(t);
            by_po.entry((t.p, t.o)).or_default().push(t);
        }
        Oracle { all, by_p, by_ps, by_po }
    }

    /// Distinct projected rows of `q`.
    pub fn evaluate(&self, q: &EncodedQuery) -> BTreeSet<Vec<TermId>> {
        let mut out = BTreeSet::new();
        let mut env = vec![None; q.variables.len()];
        let mut used = vec![false; q.patterns.len()];
        self.extend(q, &mut env, &mut used, &mut out);
        out
    }

    fn extend(&self, q: &EncodedQuery, env: &mut Vec<Option<TermId>>, used: &mut [bool], out: &mut BTreeSet<Vec<TermId>>) {
        let value = |t: &Term<TermId>, env: &[Option<TermId>]| match t {
            Term::Const(c) => Some(*c),
            Term::Var(v) => env[v.index()],
        };
        let next = (0..q.patterns.len()).filter(|&i| !used[i]).max_by_key(|&i| {
            let p = &q.patterns[i];
            let bound = [&p.s, &p.p, &p.o].iter().filter(|t| value(t, env).is_some()).count();
            (bound, std::cmp::Reverse(i))
        });
        let Some(i) = next else {
            out.insert(q.projection.iter().map(|v| env[v.index()].expect("all variables bound")).collect());
            return;
        };
        let pat = &q.patterns[i];
        let (s, p, o) = (value(&pat.s, env), value(&pat.p, env), value(&pat.o, env));
        let candidates: &[EncodedTriple] = match (s, p, o) {
            (Some(s), Some(p), _) => self.by_ps.get(&(p, s)).map_or(&[], Vec::as_slice),
            (_, Some(p), Some(o)) => self.by_po.get(&(p, o)).map_or(&[], Vec::as_slice),
            (_, Some(p), _) => self.by_p.get(&p).map_or(&[], Vec::as_slice),
            _ => &self.all,
        };
        used[i] = true;
        for t in candidates {
            let saved = env.clone();
            let ok = [(&pat.s, t.s), (&pat.p, t.p), (&pat.o, t.o)].into_iter().all(|(term, x)| match term {
                Term::Const(c) => *c == x,
                Term::Var(v) => match env[v.index()] {
                    Some(b) => b == x,
                    None => {
                        env[v.index()] = Some(x);
                        true
                    }
                },
            });
            if ok {
                self.extend(q, env, used, out);
            }
            *env = saved;
        }
        used[i] = false;
    }
}

/// Plain nested loops over every triple, in pattern order.
pub fn nested_loop(q: &EncodedQuery, data: &[EncodedTriple]) -> BTreeSet<Vec<TermId>> {
    fn go(q: &EncodedQuery, data: &[EncodedTriple], i: usize, env: &mut Vec<Option<TermId>>, out: &mut BTreeSet<Vec<TermId>>) {
        if i == q.patterns.len() {
            out.insert(q.projection.iter().map(|v| env[v.index()].unwrap()).collect());
            return;
        }
        let p = &q.patterns[i];
        for t in data {
            let saved = env.clone();
            let ok = [(&p.s, t.s), (&p.p, t.p), (&p.o, t.o)].into_iter().all(|(term, x)| match term {
                Term::Const(c) => *c == x,
                Term::Var(v) => match env[v.index()] {
                    Some(b) => b == x,
                    None => {
                        env[v.index()] = Some(x);
                        true
                    }
                },
            });
            if ok {
                go(q, data, i + 1, env, out);
            }
            *env = saved;
        }
    }
    let mut out = BTreeSet::new();
    go(q, data, 0, &mut vec![None; q.variables.len()], &mut out);
    out
}

/// Random graph over `entities` vertices and `predicates` labels with a
/// mildly skewed subject choice.
pub fn random_graph(rng: &mut StdRng, triples: usize, entities: usize, predicates: usize) -> Dataset {
    let rows = (0..triples).map(|_| {
        let s = if rng.random_bool(0.3) { rng.random_range(0..entities.div_ceil(10)) } else { rng.random_range(0..entities) };
        let o = rng.random_range(0..entities);
        let p = rng.random_range(0..predicates);
        (format!("e{s}"), format!("p{p}"), format!("e{o}"))
    });
    dataset_from(rows.collect::<Vec<_>>())
}

/// A connected query grown from a random walk over the data, as text.
/// Vertices shared by several patterns are always variables; the others
/// become constants with probability `const_prob`. A predicate is a fresh
/// variable with probability `var_pred_prob`.
pub fn random_query(rng: &mut StdRng, data: &Dataset, size: usize, const_prob: f64, var_pred_prob: f64) -> String {
    let mut incident: HashMap<TermId, Vec<usize>> = HashMap::new();
    for (i, t) in data.triples.iter().enumerate() {
        incident.entry(t.s).or_default().push(i);
        incident.entry(t.o).or_default().push(i);
    }
    let mut chosen = vec![rng.random_range(0..data.triples.len())];
    for _ in 0..size * 8 {
        if chosen.len() == size {
            break;
        }
        let t = data.triples[*chosen.choose(rng).unwrap()];
        let v = if rng.random_bool(0.5) { t.s } else { t.o };
        let next = *incident[&v].choose(rng).unwrap();
        if !chosen.contains(&next) {
            chosen.push(next);
        }
    }
    let mut uses: HashMap<TermId, usize> = HashMap::new();
    for &i in &chosen {
        let t = data.triples[i];
        *uses.entry(t.s).or_default() += 1;
        if t.o != t.s {
            *uses.entry(t.o).or_default() += 1;
        }
    }
    let mut names: HashMap<TermId, String> = HashMap::new();
    let mut fresh = 0;
    let mut vertex = |v: TermId, rng: &mut StdRng| -> String {
        if let Some(n) = names.get(&v) {
            return n.clone();
        }
        let n = if uses[&v] == 1 && rng.random_bool(const_prob) {
            data.dict.decode(v).unwrap().to_owned()
        } else {
            fresh += 1;
            format!("?v{fresh}")
        };
        names.insert(v, n.clone());
        n
    };
    let mut body = Vec::new();
    for (k, &i) in chosen.iter().enumerate() {
        let t = data.triples[i];
        let s = vertex(t.s, rng);
        let o = vertex(t.o, rng);
        let p = if rng.random_bool(var_pred_prob) { format!("?pred{k}") } else { data.dict.decode(t.p).unwrap().to_owned() };
        body.push(format!("{s} {p} {o}"));
    }
    format!("SELECT * WHERE {{ {} }}", body.join(" . "))
}

/// University-style data: departments with faculty and students, courses,
/// advisors and degrees. Roughly `14 * students_per_dept` triples per
/// department.
pub struct University {
    pub universities: usize,
    pub departments: usize,
    pub faculty_per_dept: usize,
    pub students_per_dept: usize,
    pub courses_per_dept: usize,
}

impl University {
    pub fn sized(target_triples: usize) -> Self {
        let departments = (target_triples / 330).max(1);
        University {
            universities: (departments / 4).max(2),
            departments,
            faculty_per_dept: 6,
            students_per_dept: 40,
            courses_per_dept: 10,
        }
    }

    pub fn generate(&self, rng: &mut StdRng) -> Dataset {
        let mut rows: Vec<(String, String, String)> = Vec::new();
        let mut add = |s: String, p: &str, o: String| rows.push((s, p.to_owned(), o));
        for d in 0..self.departments {
            let dept = format!("Dept{d}");
            add(dept.clone(), "subOrganizationOf", format!("Univ{}", d % self.universities));
            for f in 0..self.faculty_per_dept {
                let fac = format!("Prof{d}_{f}");
                add(fac.clone(), "type", "Professor".into());
                add(fac.clone(), "worksFor", dept.clone());
                add(fac.clone(), "gradFrom", format!("Univ{}", rng.random_range(0..self.universities)));
                for c in 0..self.courses_per_dept {
                    if c % self.faculty_per_dept == f {
                        add(fac.clone(), "teacherOf", format!("Course{d}_{c}"));
                    }
                }
            }
            for s in 0..self.students_per_dept {
                let stud = format!("Stud{d}_{s}");
                let grad = s % 3 == 0;
                add(stud.clone(), "type", if grad { "GradStudent".into() } else { "UndergradStudent".into() });
                add(stud.clone(), "memberOf", dept.clone());
                add(stud.clone(), "name", format!("Name{d}_{s}"));
                add(stud.clone(), "email", format!("Mail{d}_{s}"));
                for _ in 0..3 {
                    add(stud.clone(), "takesCourse", format!("Course{d}_{}", rng.random_range(0..self.courses_per_dept)));
                }
                if grad {
                    // advisors mostly in the department, sometimes elsewhere
                    let ad = if rng.random_bool(0.9) { d } else { rng.random_range(0..self.departments) };
                    add(stud.clone(), "advisor", format!("Prof{ad}_{}", rng.random_range(0..self.faculty_per_dept)));
                    add(stud.clone(), "uGradFrom", format!("Univ{}", rng.random_range(0..self.universities)));
                }
            }
        }
        dataset_from(rows)
    }
}

/// `n` triples with uniformly drawn subjects and Zipf-distributed objects.
pub fn zipf_objects(rng: &mut StdRng, n: usize, subjects: usize, objects: usize, exponent: f64) -> Vec<EncodedTriple> {
    let zipf = Zipf::new(objects as f64, exponent).unwrap();
    let p = TermId(0);
    (0..n)
        .map(|_| {
            let s = rng.random_range(0..subjects) as u32;
            let o = zipf.sample(rng) as u32 - 1;
            // subjects and objects get disjoint id ranges
            EncodedTriple::new(TermId(1 + s), p, TermId(1 + subjects as u32 + o))
        })
        .collect()
}

pub fn seeded(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
