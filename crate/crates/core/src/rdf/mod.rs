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

//! Terms, the string dictionary and N-Triples ingestion.

mod dictionary;
pub(crate) mod ntriples;

pub use dictionary::{Dictionary, UnknownId};
pub use ntriples::{parse_ntriples, split_terms, NTriplesError};

use std::fmt;

/// Dense numeric identifier of an RDF term (IRI, literal or blank node).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TermId(pub u32);

impl TermId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A triple of encoded terms; the unit of storage and exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EncodedTriple {
    pub s: TermId,
    pub p: TermId,
    pub o: TermId,
}

impl EncodedTriple {
    pub fn new(s: TermId, p: TermId, o: TermId) -> Self {
        EncodedTriple { s, p, o }
    }
}

/// Position of a term inside a triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Subject,
    Predicate,
    Object,
}

impl Position {
    pub const ALL: [Position; 3] = [Position::Subject, Position::Predicate, Position::Object];

    #[inline]
    pub fn of(self, t: &EncodedTriple) -> TermId {
        match self {
            Position::Subject => t.s,
            Position::Predicate => t.p,
            Position::Object => t.o,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Position::Subject => 0,
            Position::Predicate => 1,
            Position::Object => 2,
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::Subject => "subject",
            Position::Predicate => "predicate",
            Position::Object => "object",
        })
    }
}
