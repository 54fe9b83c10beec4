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

//! `SELECT ?a ?b WHERE { s p o . s p o }` front end.

use thiserror::Error;

use super::graph::{ParsedQuery, QueryGraph, Term, TriplePattern, VarId};
use crate::rdf::ntriples::scan_term;

/// Prefixes understood in prefixed names.
pub const PREFIXES: &[(&str, &str)] = &[
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
    ("xsd", "http://www.w3.org/2001/XMLSchema#"),
    ("owl", "http://www.w3.org/2002/07/owl#"),
    ("ex", "http://example.org/"),
    ("ub", "http://swat.cse.lehigh.edu/onto/univ-bench.owl#"),
];

const RDF_TYPE: &str = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("query patterns do not form a connected graph")]
    DisconnectedQuery,
    #[error("unknown prefix `{0}:`")]
    UnknownPrefix(String),
    #[error("projected variable ?{0} does not occur in any pattern")]
    UnboundProjection(String),
}

/// Expands `pfx:local` into `<iri>` using [`PREFIXES`].
pub fn expand_prefixed(name: &str) -> Result<String, QueryError> {
    let (pfx, local) = name
        .split_once(':')
        .ok_or_else(|| QueryError::UnknownPrefix(name.to_owned()))?;
    let base = PREFIXES
        .iter()
        .find(|(p, _)| *p == pfx)
        .map(|(_, iri)| *iri)
        .ok_or_else(|| QueryError::UnknownPrefix(pfx.to_owned()))?;
    Ok(format!("<{base}{local}>"))
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                break;
            }
        }
    }

    fn error(&self, message: impl Into<String>) -> QueryError {
        QueryError::Syntax { position: self.pos, message: message.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        let matches = rest.len() >= kw.len()
            && rest[..kw.len()].eq_ignore_ascii_case(kw)
            && !rest[kw.len()..].starts_with(|c: char| c.is_alphanumeric() || c == '_');
        if matches {
            self.pos += kw.len();
        }
        matches
    }

    fn name(&mut self) -> &'a str {
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn variable(&mut self) -> Option<&'a str> {
        self.skip_ws();
        if self.rest().starts_with(['?', '$']) {
            self.pos += 1;
            Some(self.name())
        } else {
            None
        }
    }
}

enum RawTerm {
    Var(String),
    Const(String),
}

fn term(lx: &mut Lexer<'_>) -> Result<RawTerm, QueryError> {
    lx.skip_ws();
    let start = lx.pos;
    if let Some(name) = lx.variable() {
        if name.is_empty() {
            return Err(QueryError::Syntax { position: start, message: "empty variable name".into() });
        }
        return Ok(RawTerm::Var(name.to_owned()));
    }
    let rest = lx.rest();
    if rest.starts_with('<') || rest.starts_with("_:") {
        let len = scan_term(rest).ok_or_else(|| lx.error("unterminated term"))?;
        lx.pos += len;
        return Ok(RawTerm::Const(rest[..len].to_owned()));
    }
    if rest.starts_with('"') {
        // datatype given as a prefixed name is expanded to match N-Triples
        if let Some(close) = literal_end(rest) {
            let after = &rest[close..];
            if let Some(dt) = after.strip_prefix("^^") {
                if !dt.starts_with('<') {
                    let len = prefixed_len(dt);
                    let iri = expand_prefixed(&dt[..len])?;
                    lx.pos += close + 2 + len;
                    return Ok(RawTerm::Const(format!("{}^^{iri}", &rest[..close])));
                }
            }
        }
        let len = scan_term(rest).ok_or_else(|| lx.error("unterminated literal"))?;
        lx.pos += len;
        return Ok(RawTerm::Const(rest[..len].to_owned()));
    }
    let len = prefixed_len(rest);
    if len == 0 {
        return Err(lx.error("expected a term"));
    }
    let word = &rest[..len];
    lx.pos += len;
    if word == "a" {
        return Ok(RawTerm::Const(RDF_TYPE.to_owned()));
    }
    if !word.contains(':') {
        return Err(QueryError::Syntax { position: start, message: format!("unexpected `{word}`") });
    }
    expand_prefixed(word).map(RawTerm::Const)
}

fn literal_end(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    let mut i = 1;
    loop {
        match *bytes.get(i)? {
            b'\\' => i += 2,
            b'"' => return Some(i + 1),
            _ => i += 1,
        }
    }
}

/// Length of a prefixed name or bare word; a trailing `.` is left for the
/// pattern separator.
fn prefixed_len(s: &str) -> usize {
    let len = s
        .find(|c: char| !(c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '.')))
        .unwrap_or(s.len());
    s[..len].trim_end_matches('.').len()
}

/// Parses one query.
pub fn parse_query(text: &str) -> Result<ParsedQuery, QueryError> {
    let mut lx = Lexer { src: text, pos: 0 };
    if !lx.keyword("SELECT") {
        return Err(lx.error("expected SELECT"));
    }
    let mut projected_names = Vec::new();
    let star = lx.eat('*');
    if !star {
        while let Some(v) = lx.variable() {
            if v.is_empty() {
                return Err(lx.error("empty variable name"));
            }
            projected_names.push(v.to_owned());
        }
        if projected_names.is_empty() {
            return Err(lx.error("expected projection variables or *"));
        }
    }
    lx.keyword("WHERE");
    if !lx.eat('{') {
        return Err(lx.error("expected `{`"));
    }

    let mut variables: Vec<String> = Vec::new();
    let intern = |name: String, variables: &mut Vec<String>| -> VarId {
        match variables.iter().position(|v| *v == name) {
            Some(i) => VarId(i as u16),
            None => {
                variables.push(name);
                VarId((variables.len() - 1) as u16)
            }
        }
    };
    let mut patterns = Vec::new();
    loop {
        if lx.eat('}') {
            break;
        }
        let mut slots = Vec::with_capacity(3);
        for _ in 0..3 {
            slots.push(match term(&mut lx)? {
                RawTerm::Var(name) => Term::Var(intern(name, &mut variables)),
                RawTerm::Const(c) => Term::Const(c),
            });
        }
        let o = slots.pop().unwrap();
        let p = slots.pop().unwrap();
        let s = slots.pop().unwrap();
        patterns.push(TriplePattern::new(s, p, o));
        if lx.eat('.') {
            continue;
        }
        if lx.eat('}') {
            break;
        }
        return Err(lx.error("expected `.` or `}`"));
    }
    lx.skip_ws();
    if !lx.rest().is_empty() {
        return Err(lx.error("trailing input after `}`"));
    }
    if patterns.is_empty() {
        return Err(lx.error("empty group pattern"));
    }
    if patterns.len() > 64 {
        return Err(lx.error("at most 64 triple patterns are supported"));
    }

    let projection = if star {
        (0..variables.len()).map(|i| VarId(i as u16)).collect()
    } else {
        let mut proj = Vec::with_capacity(projected_names.len());
        for name in projected_names {
            let v = variables
                .iter()
                .position(|x| *x == name)
                .ok_or(QueryError::UnboundProjection(name))?;
            proj.push(VarId(v as u16));
        }
        proj
    };

    let q = QueryGraph { patterns, variables, projection };
    if !q.is_connected() {
        return Err(QueryError::DisconnectedQuery);
    }
    Ok(q)
}

/// Splits a workload into queries at `;` outside IRIs and literals.
pub fn split_workload(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'<' => {
                // only an IRI when it closes before whitespace
                if let Some(end) = text[i..].find(|c: char| c == '>' || c.is_whitespace()) {
                    if bytes[i + end] == b'>' {
                        i += end;
                    }
                }
            }
            b'"' => {
                if let Some(len) = literal_end(&text[i..]) {
                    i += len - 1;
                }
            }
            b'#' => {
                i += text[i..].find('\n').unwrap_or(text.len() - i);
                continue;
            }
            b';' => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&text[start..]);
    out.into_iter()
        .map(str::trim)
        .filter(|q| !q.is_empty() && !q.lines().all(|l| l.trim().is_empty() || l.trim_start().starts_with('#')))
        .collect()
}
