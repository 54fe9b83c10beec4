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

//! Session files: where the data lives and how it is sharded. Commands
//! reload the data from the session on every run.

use std::fs;
use std::path::{Path, PathBuf};

use adhash_core::partition::SubjectHash;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub data: PathBuf,
    pub workers: usize,
    /// `mod` or `mult:<seed>`.
    pub hash: String,
}

pub fn parse_hash(text: &str) -> Result<SubjectHash, String> {
    match text {
        "mod" => Ok(SubjectHash::Modulo),
        _ => text
            .strip_prefix("mult:")
            .and_then(|seed| seed.parse().ok())
            .map(|seed| SubjectHash::Multiplicative { seed })
            .ok_or_else(|| format!("expected `mod` or `mult:<seed>`, got `{text}`")),
    }
}

impl Session {
    pub fn subject_hash(&self) -> Result<SubjectHash, CliError> {
        parse_hash(&self.hash).map_err(CliError::Session)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Session(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("session serializes");
        fs::write(path, text + "\n").map_err(|e| CliError::Io(path.to_owned(), e))
    }
}
