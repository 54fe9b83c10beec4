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

use rustc_hash::FxHashMap;
use thiserror::Error;

use super::TermId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("unknown term id {0}")]
pub struct UnknownId(pub TermId);

/// Bi-directional mapping between term strings and dense [`TermId`]s.
///
/// Ids are handed out in first-seen order starting at zero, so the reverse
/// direction is a plain vector.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    forward: FxHashMap<Box<str>, TermId>,
    reverse: Vec<Box<str>>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `term`, assigning the next dense id if it is new.
    pub fn encode(&mut self, term: &str) -> TermId {
        if let Some(&id) = self.forward.get(term) {
            return id;
        }
        let id = TermId(u32::try_from(self.reverse.len()).expect("dictionary exceeds u32 ids"));
        let boxed: Box<str> = term.into();
        self.reverse.push(boxed.clone());
        self.forward.insert(boxed, id);
        id
    }

    /// Id lookup without insertion.
    pub fn lookup(&self, term: &str) -> Option<TermId> {
        self.forward.get(term).copied()
    }

    pub fn decode(&self, id: TermId) -> Result<&str, UnknownId> {
        self.reverse.get(id.index()).map(|s| &**s).ok_or(UnknownId(id))
    }

    pub fn len(&self) -> usize {
        self.reverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reverse.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermId, &str)> {
        self.reverse
            .iter()
            .enumerate()
            .map(|(i, s)| (TermId(i as u32), &**s))
    }
}
