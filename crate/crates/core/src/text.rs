//! Shared helpers for the line-oriented text formats.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Non-comment lines with their 1-based line numbers. Blank lines are kept
/// only when `keep_blank` is set.
pub(crate) fn content_lines(text: &str, keep_blank: bool) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'))
        .filter(|(_, l)| keep_blank || !l.is_empty())
        .collect()
}

pub(crate) fn parse_numbers<T: std::str::FromStr>(
    line: usize,
    s: &str,
) -> Result<Vec<T>, ParseError> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<T>().map_err(|_| {
                ParseError::new(
                    line,
                    format!("expected a non-negative integer, found `{tok}`"),
                )
            })
        })
        .collect()
}

pub(crate) fn header<const N: usize>(
    lines: &[(usize, &str)],
    what: &str,
) -> Result<[usize; N], ParseError> {
    let (line, text) = *lines
        .first()
        .ok_or_else(|| ParseError::new(0, format!("missing {what} header")))?;
    let nums: Vec<usize> = parse_numbers(line, text)?;
    nums.try_into()
        .map_err(|_| ParseError::new(line, format!("{what} header must have {N} fields")))
}
