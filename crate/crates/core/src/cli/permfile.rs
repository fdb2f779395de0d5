//! The `.perm` text format.
//!
//! ```text
//! # comment
//! degree 3
//! 1 2 3
//! 2 3 1
//! ```
//!
//! Each data line after the header is a one-line image word. Files written by
//! [`write`] list codewords in increasing rank, so a parse/write round trip is
//! byte-stable.

use std::collections::HashSet;

use crate::code::Code;
use crate::error::{Error, Result};
use crate::perm::{Permutation, MAX_RANK_DEGREE};

pub fn parse(text: &str) -> Result<Code> {
    let mut degree = None;
    let mut ranks = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let data = raw.trim();
        if data.is_empty() || data.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let Some(n) = degree else {
            let mut parts = data.split_whitespace();
            if parts.next() != Some("degree") {
                return Err(err("expected `degree <n>` header".into()));
            }
            let n: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("degree must be a positive integer".into()))?;
            if parts.next().is_some() {
                return Err(err("trailing text after degree".into()));
            }
            if n == 0 || n > MAX_RANK_DEGREE {
                return Err(err(format!("degree must lie in 1..={MAX_RANK_DEGREE}")));
            }
            degree = Some(n);
            continue;
        };
        let word = data
            .split_whitespace()
            .map(|s| s.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| err(format!("bad integer: {e}")))?;
        if word.len() != n {
            return Err(err(format!("expected {n} entries, found {}", word.len())));
        }
        let p = Permutation::from_word(&word).map_err(|e| err(e.to_string()))?;
        let rank = p.rank();
        if !seen.insert(rank) {
            return Err(Error::DuplicateCodeword { line });
        }
        ranks.push(rank);
    }
    let n = degree.ok_or(Error::Parse {
        line: 0,
        message: "missing `degree <n>` header".into(),
    })?;
    Code::from_ranks(n, ranks)
}

pub fn write(code: &Code) -> String {
    let mut out = format!("# {} codewords\ndegree {}\n", code.len(), code.degree());
    for p in code.perms() {
        let word: Vec<String> = p.word().iter().map(usize::to_string).collect();
        out.push_str(&word.join(" "));
        out.push('\n');
    }
    out
}
