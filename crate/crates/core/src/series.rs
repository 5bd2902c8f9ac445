//! Finite-alphabet categorical series.
//!
//! A [`CategoricalSeries`] stores category *indices* `0..r` internally;
//! the [`Alphabet`] maps those indices to display labels. All feature,
//! distance, and bootstrap code works on indices, so two series are only
//! comparable when they share an alphabet.

use crate::error::{Error, Result};

/// An ordered set of at least two distinct category labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    /// Build an alphabet from labels. Labels must be distinct, nonempty,
    /// free of commas and line breaks, already trimmed, and must not start
    /// with `#` (all of which would break the text serialisation).
    pub fn new<S: Into<String>>(labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "alphabet needs at least 2 categories, got {}",
                labels.len()
            )));
        }
        for label in &labels {
            if label.is_empty() {
                return Err(Error::InvalidInput("empty alphabet label".into()));
            }
            if label.contains(',') || label.contains('\n') || label.contains('\r') {
                return Err(Error::InvalidInput(format!(
                    "label {label:?} contains a comma or line break"
                )));
            }
            if label != label.trim() {
                return Err(Error::InvalidInput(format!(
                    "label {label:?} has leading or trailing whitespace"
                )));
            }
            if label.starts_with('#') {
                return Err(Error::InvalidInput(format!("label {label:?} starts with '#'")));
            }
        }
        for i in 1..labels.len() {
            if labels[..i].contains(&labels[i]) {
                return Err(Error::InvalidInput(format!("duplicate label {:?}", labels[i])));
            }
        }
        Ok(Alphabet { labels })
    }

    /// The numeric alphabet `1, 2, …, r` used by simulated series.
    pub fn indexed(r: usize) -> Result<Self> {
        Alphabet::new((1..=r).map(|i| i.to_string()).collect::<Vec<_>>())
    }

    /// Number of categories `r`.
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Display labels in index order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of a label, if present.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A categorical time series: indices into a shared [`Alphabet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoricalSeries {
    values: Vec<usize>,
    alphabet: Alphabet,
}

impl CategoricalSeries {
    /// Build a series from 0-based category indices.
    pub fn from_indices(values: Vec<usize>, alphabet: Alphabet) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("series must contain at least one value".into()));
        }
        let r = alphabet.size();
        if let Some(&bad) = values.iter().find(|&&v| v >= r) {
            return Err(Error::InvalidInput(format!(
                "index {bad} out of range for alphabet of size {r}"
            )));
        }
        Ok(CategoricalSeries { values, alphabet })
    }

    /// Build a series by looking labels up in the alphabet.
    pub fn from_labels(labels: &[&str], alphabet: Alphabet) -> Result<Self> {
        let values = labels
            .iter()
            .map(|l| {
                alphabet
                    .index_of(l)
                    .ok_or_else(|| Error::InvalidInput(format!("label {l:?} not in alphabet")))
            })
            .collect::<Result<Vec<_>>>()?;
        CategoricalSeries::from_indices(values, alphabet)
    }

    /// Length `T`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True only for the (disallowed) empty series; present for idiom.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 0-based category indices.
    pub fn indices(&self) -> &[usize] {
        &self.values
    }

    /// The alphabet shared by the values.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of categories `r`.
    pub fn num_categories(&self) -> usize {
        self.alphabet.size()
    }

    /// Re-label this series with another alphabet of the same size.
    /// Used when resampled or simulated values should inherit the
    /// alphabet of the observed data.
    pub fn with_alphabet(mut self, alphabet: Alphabet) -> Result<Self> {
        if alphabet.size() != self.alphabet.size() {
            return Err(Error::Mismatch(format!(
                "alphabet sizes differ: {} vs {}",
                self.alphabet.size(),
                alphabet.size()
            )));
        }
        self.alphabet = alphabet;
        Ok(self)
    }

    /// Display labels of the values, in order.
    pub fn labels(&self) -> Vec<&str> {
        self.values.iter().map(|&v| self.alphabet.labels()[v].as_str()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(vec!["a", "b"]).is_ok());
        assert!(Alphabet::new(vec!["a"]).is_err());
        assert!(Alphabet::new(vec!["a", "a"]).is_err());
        assert!(Alphabet::new(vec!["a", ""]).is_err());
        assert!(Alphabet::new(vec!["a", "b,c"]).is_err());
        assert!(Alphabet::new(vec!["a", " b"]).is_err());
        assert!(Alphabet::new(vec!["a", "#b"]).is_err());
    }

    #[test]
    fn indexed_alphabet_labels() {
        let a = Alphabet::indexed(3).unwrap();
        assert_eq!(a.labels(), &["1", "2", "3"]);
        assert_eq!(a.index_of("2"), Some(1));
        assert_eq!(a.index_of("4"), None);
    }

    #[test]
    fn series_validation() {
        let a = Alphabet::indexed(2).unwrap();
        assert!(CategoricalSeries::from_indices(vec![], a.clone()).is_err());
        assert!(CategoricalSeries::from_indices(vec![0, 2], a.clone()).is_err());
        let s = CategoricalSeries::from_indices(vec![0, 1, 0], a).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.labels(), vec!["1", "2", "1"]);
    }

    #[test]
    fn from_labels_roundtrip() {
        let a = Alphabet::new(vec!["lo", "mid", "hi"]).unwrap();
        let s = CategoricalSeries::from_labels(&["hi", "lo", "lo"], a).unwrap();
        assert_eq!(s.indices(), &[2, 0, 0]);
    }

    #[test]
    fn with_alphabet_requires_same_size() {
        let a = Alphabet::indexed(2).unwrap();
        let b = Alphabet::new(vec!["x", "y"]).unwrap();
        let c = Alphabet::indexed(3).unwrap();
        let s = CategoricalSeries::from_indices(vec![0, 1], a).unwrap();
        assert!(s.clone().with_alphabet(b).is_ok());
        assert!(s.with_alphabet(c).is_err());
    }
}
