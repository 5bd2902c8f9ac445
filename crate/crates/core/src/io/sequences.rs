//! The plain-text series format.
//!
//! One series per line, as comma-separated category labels. A header line
//! `#alphabet: a,b,c` fixes the alphabet for all series on the following
//! lines, until the next header. Other lines starting with `#` are
//! comments; blank lines are ignored.
//!
//! Files without a header are accepted by inferring an alphabet from the
//! data: when every token is a positive integer the alphabet is
//! `1..=max` (unseen intermediate categories stay part of the alphabet),
//! otherwise it is the distinct labels in sorted order.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{Alphabet, CategoricalSeries};

/// Largest category index accepted when inferring a numeric alphabet.
const MAX_INFERRED_CATEGORIES: u64 = 10_000;

enum Line {
    Header { number: usize, labels: Vec<String> },
    Series { number: usize, tokens: Vec<String> },
}

fn scan(text: &str) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(spec) = rest.trim_start().strip_prefix("alphabet:") {
                let labels: Vec<String> =
                    spec.split(',').map(|t| t.trim().to_string()).collect();
                out.push(Line::Header { number, labels });
            }
            // Any other '#' line is a comment.
            continue;
        }
        let tokens: Vec<String> = line.split(',').map(|t| t.trim().to_string()).collect();
        if let Some(pos) = tokens.iter().position(String::is_empty) {
            return Err(Error::Parse {
                line: number,
                msg: format!("empty token at position {}", pos + 1),
            });
        }
        out.push(Line::Series { number, tokens });
    }
    Ok(out)
}

fn infer_alphabet(series: &[(usize, &[String])]) -> Result<Alphabet> {
    let mut numeric_max: Option<u64> = Some(0);
    let mut distinct = BTreeSet::new();
    for (_, tokens) in series {
        for t in *tokens {
            distinct.insert(t.clone());
            numeric_max = match (numeric_max, t.parse::<u64>()) {
                (Some(max), Ok(v)) if (1..=MAX_INFERRED_CATEGORIES).contains(&v) => {
                    Some(max.max(v))
                }
                _ => None,
            };
        }
    }
    let first_line = series[0].0;
    if let Some(max) = numeric_max {
        return Alphabet::indexed(max.max(2) as usize);
    }
    if distinct.len() < 2 {
        return Err(Error::Parse {
            line: first_line,
            msg: "cannot infer an alphabet from a single distinct label; \
                  add a '#alphabet:' header"
                .into(),
        });
    }
    Alphabet::new(distinct.into_iter().collect())
}

fn series_from_tokens(
    number: usize,
    tokens: &[String],
    alphabet: &Alphabet,
) -> Result<CategoricalSeries> {
    let values = tokens
        .iter()
        .map(|t| {
            alphabet.index_of(t).ok_or_else(|| Error::Parse {
                line: number,
                msg: format!("label {t:?} is not in the current alphabet"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CategoricalSeries::from_indices(values, alphabet.clone())
}

/// Parse a whole file of series. Lines before the first `#alphabet:`
/// header share one inferred alphabet; every header governs the lines
/// after it.
pub fn parse_sequences(text: &str) -> Result<Vec<CategoricalSeries>> {
    let lines = scan(text)?;
    let mut out = Vec::new();

    // Leading block without a header: infer a shared alphabet.
    let leading: Vec<(usize, &[String])> = lines
        .iter()
        .take_while(|l| matches!(l, Line::Series { .. }))
        .map(|l| match l {
            Line::Series { number, tokens } => (*number, tokens.as_slice()),
            Line::Header { .. } => unreachable!(),
        })
        .collect();
    if !leading.is_empty() {
        let alphabet = infer_alphabet(&leading)?;
        for (number, tokens) in &leading {
            out.push(series_from_tokens(*number, tokens, &alphabet)?);
        }
    }

    let mut current: Option<Alphabet> = None;
    for line in lines.iter().skip(leading.len()) {
        match line {
            Line::Header { number, labels } => {
                let alphabet = Alphabet::new(labels.clone())
                    .map_err(|e| Error::Parse { line: *number, msg: e.to_string() })?;
                current = Some(alphabet);
            }
            Line::Series { number, tokens } => {
                let alphabet = current.as_ref().expect("headers precede these lines");
                out.push(series_from_tokens(*number, tokens, alphabet)?);
            }
        }
    }
    Ok(out)
}

/// Render series in the canonical form: an `#alphabet:` header whenever
/// the alphabet changes from the previous line, then one line per series.
pub fn format_sequences(series: &[CategoricalSeries]) -> String {
    let mut out = String::new();
    let mut current: Option<&Alphabet> = None;
    for s in series {
        if current != Some(s.alphabet()) {
            out.push_str("#alphabet: ");
            out.push_str(&s.alphabet().labels().join(","));
            out.push('\n');
            current = Some(s.alphabet());
        }
        out.push_str(&s.labels().join(","));
        out.push('\n');
    }
    out
}

/// Read and parse a sequence file.
pub fn read_sequences(path: &Path) -> Result<Vec<CategoricalSeries>> {
    parse_sequences(&fs::read_to_string(path)?)
}

/// Write series to a file in canonical form.
pub fn write_sequences(path: &Path, series: &[CategoricalSeries]) -> Result<()> {
    fs::write(path, format_sequences(series))?;
    Ok(())
}
