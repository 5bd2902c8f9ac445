//! TOML configuration files: experiment grids and model specifications.

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::bootstrap::Method;
use crate::distances::DistanceKind;
use crate::error::{Error, Result};
use crate::experiments::GridConfig;
use crate::models::{HiddenMarkov, MarkovChain, ModelSpec, NdarmaModel};

/// An experiment grid as read from a TOML file. Every key is optional;
/// omitted keys fall back to the defaults of [`GridConfig`]. `runs`,
/// `replicates`, and `lengths` also accept the conventional shorthands
/// `N`, `B`, and `T`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenarios: Option<Vec<u8>>,
    pub deltas: Option<Vec<f64>>,
    #[serde(alias = "T")]
    pub lengths: Option<Vec<usize>>,
    pub metrics: Option<Vec<String>>,
    pub methods: Option<Vec<String>>,
    #[serde(alias = "N")]
    pub runs: Option<usize>,
    #[serde(alias = "B")]
    pub replicates: Option<usize>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
    pub lags: Option<Vec<usize>>,
    pub block_sizes: Option<Vec<usize>>,
    pub cont_probs: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Merge onto the default grid.
    pub fn to_grid(&self) -> Result<GridConfig> {
        let mut grid = GridConfig::default();
        if let Some(s) = &self.scenarios {
            grid.scenarios = s.clone();
        }
        grid.deltas = self.deltas.clone().or(grid.deltas);
        if let Some(l) = &self.lengths {
            grid.series_lens = l.clone();
        }
        if let Some(m) = &self.metrics {
            grid.metrics = m.iter().map(|s| DistanceKind::parse(s)).collect::<Result<_>>()?;
        }
        if let Some(m) = &self.methods {
            grid.methods = m.iter().map(|s| Method::parse(s)).collect::<Result<_>>()?;
        }
        if let Some(n) = self.runs {
            grid.runs = n;
        }
        if let Some(b) = self.replicates {
            grid.replicates = b;
        }
        if let Some(a) = self.alpha {
            grid.alpha = a;
        }
        if let Some(s) = self.seed {
            grid.seed = s;
        }
        grid.lags = self.lags.clone().or(grid.lags);
        grid.block_sizes = self.block_sizes.clone().or(grid.block_sizes);
        grid.cont_probs = self.cont_probs.clone().or(grid.cont_probs);
        Ok(grid)
    }
}

/// A generating model as read from a TOML file.
///
/// `family` selects the shape: `"mc"` needs `transition`; `"hmm"` needs
/// `transition` (hidden states) and `emission`; `"ndarma"` needs
/// `marginal`, `mixing`, and `ar` (plus optional `ma`, default 0).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub family: String,
    pub transition: Option<Vec<Vec<f64>>>,
    pub emission: Option<Vec<Vec<f64>>>,
    pub marginal: Option<Vec<f64>>,
    pub mixing: Option<Vec<f64>>,
    pub ar: Option<usize>,
    pub ma: Option<usize>,
}

fn rows_to_matrix(name: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if rows.is_empty() {
        return Err(Error::InvalidConfig(format!("{name} has no rows")));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidConfig(format!("{name} rows differ in length")));
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

impl ModelFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_spec(&self) -> Result<ModelSpec> {
        fn required<'a>(
            field: &'a Option<Vec<Vec<f64>>>,
            family: &str,
            name: &str,
        ) -> Result<&'a Vec<Vec<f64>>> {
            field.as_ref().ok_or_else(|| {
                Error::InvalidConfig(format!("family {family:?} needs {name}"))
            })
        }
        let unused = |set: bool, name: &str| {
            if set {
                Err(Error::InvalidConfig(format!(
                    "{name} is not used by family {:?}",
                    self.family
                )))
            } else {
                Ok(())
            }
        };
        match self.family.as_str() {
            "mc" | "markov" => {
                unused(self.emission.is_some(), "emission")?;
                unused(self.marginal.is_some(), "marginal")?;
                unused(self.mixing.is_some(), "mixing")?;
                unused(self.ar.is_some() || self.ma.is_some(), "ar/ma")?;
                let t = rows_to_matrix("transition", required(&self.transition, &self.family, "transition")?)?;
                Ok(ModelSpec::MarkovChain(MarkovChain::new(t)?))
            }
            "hmm" | "hidden-markov" => {
                unused(self.marginal.is_some(), "marginal")?;
                unused(self.mixing.is_some(), "mixing")?;
                unused(self.ar.is_some() || self.ma.is_some(), "ar/ma")?;
                let t = rows_to_matrix("transition", required(&self.transition, &self.family, "transition")?)?;
                let e = rows_to_matrix("emission", required(&self.emission, &self.family, "emission")?)?;
                Ok(ModelSpec::HiddenMarkov(HiddenMarkov::new(t, e)?))
            }
            "ndarma" => {
                unused(self.transition.is_some(), "transition")?;
                unused(self.emission.is_some(), "emission")?;
                let pi = self.marginal.clone().ok_or_else(|| {
                    Error::InvalidConfig("family \"ndarma\" needs marginal".into())
                })?;
                let mixing = self.mixing.clone().ok_or_else(|| {
                    Error::InvalidConfig("family \"ndarma\" needs mixing".into())
                })?;
                let ar = self.ar.ok_or_else(|| {
                    Error::InvalidConfig("family \"ndarma\" needs ar".into())
                })?;
                Ok(ModelSpec::Ndarma(NdarmaModel::new(pi, mixing, ar, self.ma.unwrap_or(0))?))
            }
            other => Err(Error::InvalidConfig(format!(
                "unknown model family {other:?} (expected mc, hmm, or ndarma)"
            ))),
        }
    }
}
