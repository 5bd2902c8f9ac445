//! FASTA ingestion and residue-class encoding.
//!
//! Protein sequences are turned into categorical series by mapping each
//! amino acid to a class. The built-in mapping is the common three-group
//! hydrophobicity scheme; a replacement can be loaded from a plain-text
//! table with one `label: LETTERS` line per class.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::series::{Alphabet, CategoricalSeries};

/// One FASTA record: the header text after `>` and the concatenated
/// residue letters (uppercased, whitespace removed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub name: String,
    pub residues: String,
}

/// Parse FASTA text. Sequence lines may wrap; only ASCII letters are
/// accepted as residues, and every record must be nonempty.
pub fn parse_fasta(text: &str) -> Result<Vec<FastaRecord>> {
    let mut records: Vec<FastaRecord> = Vec::new();
    let mut current: Option<(usize, FastaRecord)> = None;

    let mut flush = |current: &mut Option<(usize, FastaRecord)>| -> Result<()> {
        if let Some((start, record)) = current.take() {
            if record.residues.is_empty() {
                return Err(Error::Parse {
                    line: start,
                    msg: format!("record {:?} has an empty sequence", record.name),
                });
            }
            records.push(record);
        }
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            flush(&mut current)?;
            current = Some((
                number,
                FastaRecord { name: header.trim().to_string(), residues: String::new() },
            ));
            continue;
        }
        let Some((_, record)) = current.as_mut() else {
            return Err(Error::Parse {
                line: number,
                msg: "sequence data before the first '>' header".into(),
            });
        };
        for ch in line.chars() {
            if ch.is_whitespace() {
                continue;
            }
            if !ch.is_ascii_alphabetic() {
                return Err(Error::Parse {
                    line: number,
                    msg: format!(
                        "record {:?}: invalid character {ch:?} in sequence",
                        record.name
                    ),
                });
            }
            record.residues.push(ch.to_ascii_uppercase());
        }
    }
    flush(&mut current)?;
    Ok(records)
}

/// A mapping from residue letters to category labels.
#[derive(Debug, Clone)]
pub struct ResidueClasses {
    alphabet: Alphabet,
    classes: HashMap<char, usize>,
}

impl Default for ResidueClasses {
    /// The three-group hydrophobicity scheme: class 1 hydrophobic, class
    /// 2 neutral, class 3 polar.
    fn default() -> Self {
        ResidueClasses::from_groups(&[
            ("1", "CLVIMFW"),
            ("2", "GASTPHY"),
            ("3", "RKEDQN"),
        ])
        .expect("built-in mapping is valid")
    }
}

impl ResidueClasses {
    fn from_groups(groups: &[(&str, &str)]) -> Result<Self> {
        let labels: Vec<String> = groups.iter().map(|(l, _)| l.to_string()).collect();
        let alphabet = Alphabet::new(labels)?;
        let mut classes = HashMap::new();
        for (index, (label, letters)) in groups.iter().enumerate() {
            if letters.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "class {label:?} maps no residues"
                )));
            }
            for ch in letters.chars() {
                if !ch.is_ascii_alphabetic() {
                    return Err(Error::InvalidInput(format!(
                        "class {label:?}: {ch:?} is not a residue letter"
                    )));
                }
                let upper = ch.to_ascii_uppercase();
                if classes.insert(upper, index).is_some() {
                    return Err(Error::InvalidInput(format!(
                        "residue {upper:?} is assigned to more than one class"
                    )));
                }
            }
        }
        Ok(ResidueClasses { alphabet, classes })
    }

    /// Parse a mapping table: one `label: LETTERS` line per class, in
    /// output order; `#` comments and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut groups: Vec<(String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((label, letters)) = line.split_once(':') else {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: "expected 'label: LETTERS'".into(),
                });
            };
            groups.push((
                label.trim().to_string(),
                letters.split_whitespace().collect::<String>(),
            ));
        }
        if groups.len() < 2 {
            return Err(Error::InvalidInput(
                "a class mapping needs at least two classes".into(),
            ));
        }
        let borrowed: Vec<(&str, &str)> =
            groups.iter().map(|(l, s)| (l.as_str(), s.as_str())).collect();
        ResidueClasses::from_groups(&borrowed)
    }

    /// The class labels, as the alphabet of encoded series.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Encode one record; residues outside the mapping are an error that
    /// names the record.
    pub fn encode(&self, record: &FastaRecord) -> Result<CategoricalSeries> {
        let values = record
            .residues
            .chars()
            .map(|ch| {
                self.classes.get(&ch).copied().ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "record {:?}: residue {ch:?} is not covered by the class mapping",
                        record.name
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CategoricalSeries::from_indices(values, self.alphabet.clone())
    }

    /// Render the mapping in its canonical form, classes in alphabet
    /// order with sorted residue letters.
    pub fn format(&self) -> String {
        let mut rows: Vec<Vec<char>> = vec![Vec::new(); self.alphabet.size()];
        for (&ch, &index) in &self.classes {
            rows[index].push(ch);
        }
        let mut out = String::new();
        for (label, mut letters) in self.alphabet.labels().iter().zip(rows) {
            letters.sort_unstable();
            let letters: String = letters.into_iter().collect();
            let _ = writeln!(out, "{label}: {letters}");
        }
        out
    }
}

/// Parse FASTA text and encode every record under one mapping.
pub fn encode_fasta(
    text: &str,
    classes: &ResidueClasses,
) -> Result<Vec<(String, CategoricalSeries)>> {
    parse_fasta(text)?
        .into_iter()
        .map(|record| Ok((record.name.clone(), classes.encode(&record)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_wrapped_records() {
        let text = ">sp|P1|first protein\nMKV\nLW\n\n>second\ngast\n";
        let records = parse_fasta(text).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].name, "sp|P1|first protein");
        assert_eq!(records[0].residues, "MKVLW");
        // Lowercase residues are uppercased.
        assert_eq!(records[1].residues, "GAST");
    }

    #[test]
    fn rejects_data_before_a_header() {
        let err = parse_fasta("MKV\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn rejects_empty_records() {
        let err = parse_fasta(">a\n>b\nMK\n").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 1);
                assert!(msg.contains("\"a\""));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_non_letter_characters() {
        assert!(parse_fasta(">a\nMK*\n").unwrap_err().to_string().contains("'*'"));
    }

    #[test]
    fn default_mapping_encodes_by_hydrophobicity() {
        let classes = ResidueClasses::default();
        let record = FastaRecord { name: "x".into(), residues: "RGL".into() };
        let series = classes.encode(&record).unwrap();
        assert_eq!(series.labels(), vec!["3", "2", "1"]);
        let record = FastaRecord { name: "x".into(), residues: "LLL".into() };
        assert_eq!(classes.encode(&record).unwrap().labels(), vec!["1", "1", "1"]);
    }

    #[test]
    fn default_mapping_covers_all_twenty_amino_acids() {
        let classes = ResidueClasses::default();
        let record =
            FastaRecord { name: "x".into(), residues: "ACDEFGHIKLMNPQRSTVWY".into() };
        assert!(classes.encode(&record).is_ok());
    }

    #[test]
    fn unmapped_residues_name_the_record() {
        let classes = ResidueClasses::default();
        let record = FastaRecord { name: "odd".into(), residues: "MXK".into() };
        let msg = classes.encode(&record).unwrap_err().to_string();
        assert!(msg.contains("\"odd\"") && msg.contains("'X'"));
    }

    #[test]
    fn custom_mappings_parse_and_apply() {
        let classes = ResidueClasses::parse(
            "# two-way split\nsmall: GAS\nbig: MKVRLW\n",
        )
        .unwrap();
        assert_eq!(classes.alphabet().labels(), &["small", "big"]);
        let record = FastaRecord { name: "x".into(), residues: "GM".into() };
        assert_eq!(classes.encode(&record).unwrap().labels(), vec!["small", "big"]);
    }

    #[test]
    fn duplicate_letters_are_rejected() {
        let err = ResidueClasses::parse("a: MK\nb: KL\n").unwrap_err();
        assert!(err.to_string().contains("'K'"));
    }

    #[test]
    fn mapping_round_trips_through_format() {
        let classes = ResidueClasses::default();
        let reparsed = ResidueClasses::parse(&classes.format()).unwrap();
        assert_eq!(reparsed.alphabet(), classes.alphabet());
        assert_eq!(reparsed.format(), classes.format());
    }
}
