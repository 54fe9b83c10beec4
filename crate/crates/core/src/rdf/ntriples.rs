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

//! Line-oriented N-Triples subset: `<iri>`, `"literal"` (with optional
//! `@lang` / `^^<datatype>` suffix) and `_:blank` tokens, one statement per
//! line, terminated by `.`.

use std::io::BufRead;

use thiserror::Error;

use super::{Dictionary, EncodedTriple};

#[derive(Debug, Error)]
pub enum NTriplesError {
    #[error("malformed N-Triples statement at line {line}")]
    MalformedLine { line: usize },
    #[error("invalid UTF-8 at line {line}")]
    InvalidUtf8 { line: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Length in bytes of the term token at the start of `s`, if any.
pub(crate) fn scan_term(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    match *bytes.first()? {
        b'<' => s.find('>').map(|end| end + 1),
        b'"' => {
            let mut i = 1;
            loop {
                match *bytes.get(i)? {
                    b'\\' => i += 2,
                    b'"' => break,
                    _ => i += 1,
                }
            }
            i += 1;
            match bytes.get(i) {
                Some(b'@') => {
                    let rest = &s[i + 1..];
                    let len = rest
                        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
                        .unwrap_or(rest.len());
                    (len > 0).then_some(i + 1 + len)
                }
                Some(b'^') if bytes.get(i + 1) == Some(&b'^') => {
                    let rest = &s[i + 2..];
                    rest.starts_with('<')
                        .then(|| rest.find('>'))
                        .flatten()
                        .map(|end| i + 2 + end + 1)
                }
                _ => Some(i),
            }
        }
        b'_' if bytes.get(1) == Some(&b':') => {
            let len = s.find(char::is_whitespace).unwrap_or(s.len());
            // a '.' glued to the label is the statement terminator
            let label = &s[..len];
            let trimmed = label.strip_suffix('.').unwrap_or(label);
            (trimmed.len() > 2).then_some(trimmed.len())
        }
        _ => None,
    }
}

/// Splits one statement line into its three term tokens.
///
/// Returns `None` for anything that is not exactly three terms followed by
/// a terminating `.` (and optionally a trailing comment).
pub fn split_terms(line: &str) -> Option<[&str; 3]> {
    let mut rest = line.trim_start();
    let mut terms = [""; 3];
    for slot in terms.iter_mut() {
        let len = scan_term(rest)?;
        *slot = &rest[..len];
        rest = rest[len..].trim_start();
    }
    let rest = rest.strip_prefix('.')?.trim_start();
    (rest.is_empty() || rest.starts_with('#')).then_some(terms)
}

/// Parses an N-Triples stream, extending `dict` with every new term.
///
/// Triples come back in stream order; duplicates are preserved here and
/// removed by the storage layer.
pub fn parse_ntriples<R: BufRead>(
    reader: R,
    dict: &mut Dictionary,
) -> Result<Vec<EncodedTriple>, NTriplesError> {
    let mut triples = Vec::new();
    for (idx, line) in reader.split(b'\n').enumerate() {
        let line_no = idx + 1;
        let raw = line?;
        let text = std::str::from_utf8(&raw).map_err(|_| NTriplesError::InvalidUtf8 { line: line_no })?;
        let text = text.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let [s, p, o] = split_terms(text).ok_or(NTriplesError::MalformedLine { line: line_no })?;
        triples.push(EncodedTriple::new(dict.encode(s), dict.encode(p), dict.encode(o)));
    }
    Ok(triples)
}
