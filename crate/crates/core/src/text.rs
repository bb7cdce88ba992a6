//! Line-oriented tokenizer shared by the text formats.
//!
//! Every format in the crate is a header line followed by fixed-width record
//! lines. Blank lines and comment lines are skipped; errors carry the 1-based
//! line and column of the offending token.

use crate::error::{Error, Result};
use std::str::FromStr;

#[derive(Debug, Clone)]
pub struct Line<'a> {
    pub number: usize,
    fields: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn field(&self, i: usize) -> Option<&'a str> {
        self.fields.get(i).map(|&(_, s)| s)
    }

    pub fn error(&self, i: usize, message: impl Into<String>) -> Error {
        let column = self
            .fields
            .get(i)
            .map(|&(c, _)| c)
            .unwrap_or_else(|| self.fields.last().map(|&(c, s)| c + s.len()).unwrap_or(1));
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    pub fn parse<T: FromStr>(&self, i: usize, what: &str) -> Result<T> {
        let raw = self
            .field(i)
            .ok_or_else(|| self.error(i, format!("missing {what}")))?;
        raw.parse::<T>()
            .map_err(|_| self.error(i, format!("invalid {what} {raw:?}")))
    }

    pub fn expect_len(&self, n: usize, what: &str) -> Result<()> {
        if self.fields.len() == n {
            Ok(())
        } else if self.fields.len() < n {
            Err(self.error(
                self.fields.len(),
                format!("{what}: expected {n} fields, found {}", self.fields.len()),
            ))
        } else {
            Err(self.error(
                n,
                format!("{what}: expected {n} fields, found {}", self.fields.len()),
            ))
        }
    }

    pub fn expect_len_between(&self, lo: usize, hi: usize, what: &str) -> Result<()> {
        if (lo..=hi).contains(&self.fields.len()) {
            Ok(())
        } else {
            Err(self.error(
                self.fields.len().min(hi),
                format!(
                    "{what}: expected {lo} to {hi} fields, found {}",
                    self.fields.len()
                ),
            ))
        }
    }
}

/// Significant lines of a document.
pub struct Lines<'a> {
    lines: std::vec::IntoIter<Line<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Splits `src`, dropping blank lines and lines whose first non-blank
    /// character is `comment`.
    pub fn new(src: &'a str, comment: char) -> Self {
        let mut out = Vec::new();
        let mut last = 0;
        for (idx, raw) in src.lines().enumerate() {
            last = idx + 1;
            let trimmed = raw.trim_start();
            if trimmed.is_empty() || trimmed.starts_with(comment) {
                continue;
            }
            let mut fields = Vec::new();
            let mut start = None;
            for (pos, ch) in raw.char_indices() {
                if ch.is_whitespace() {
                    if let Some(s) = start.take() {
                        fields.push((s + 1, &raw[s..pos]));
                    }
                } else if start.is_none() {
                    start = Some(pos);
                }
            }
            if let Some(s) = start {
                fields.push((s + 1, &raw[s..]));
            }
            out.push(Line {
                number: idx + 1,
                fields,
            });
        }
        Lines {
            lines: out.into_iter(),
            last,
        }
    }

    pub fn next_line(&mut self, what: &str) -> Result<Line<'a>> {
        self.lines.next().ok_or_else(|| Error::Parse {
            line: self.last + 1,
            column: 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }

    pub fn expect_end(&mut self) -> Result<()> {
        match self.lines.next() {
            None => Ok(()),
            Some(line) => Err(line.error(0, "unexpected trailing data")),
        }
    }

    /// Remaining fields of all remaining lines, in order.
    pub fn rest(self) -> Vec<Line<'a>> {
        self.lines.collect()
    }
}
