//! Atomic parameter measures, datasets and error metrics.

use std::path::Path;

use crate::features::FeatureSpec;
use crate::{Error, Result, C64};

/// Whether atom weights (and feature values) are real or complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Real,
    Complex,
}

/// A weighted point mass `w δ_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub weight: C64,
    pub location: Vec<f64>,
}

impl Atom {
    pub fn new(weight: C64, location: Vec<f64>) -> Result<Self> {
        if !(weight.re.is_finite() && weight.im.is_finite()) {
            return Err(Error::Argument(format!("atom weight {weight} is not finite")));
        }
        if let Some(x) = location.iter().find(|x| !x.is_finite()) {
            return Err(Error::Argument(format!("atom location has non-finite entry {x}")));
        }
        Ok(Self { weight, location })
    }

    pub fn real(weight: f64, location: Vec<f64>) -> Result<Self> {
        Self::new(C64::new(weight, 0.0), location)
    }
}

/// Finite signed (or complex) measure `Σ_j w_j δ_{v_j}`.
///
/// Atom order is part of the value; duplicate locations are kept as separate
/// atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
    mode: Mode,
}

impl AtomicMeasure {
    pub fn empty(mode: Mode) -> Self {
        Self {
            atoms: Vec::new(),
            mode,
        }
    }

    pub fn new(atoms: Vec<Atom>, mode: Mode) -> Result<Self> {
        if mode == Mode::Real {
            if let Some(a) = atoms.iter().find(|a| a.weight.im != 0.0) {
                return Err(Error::Argument(format!(
                    "real-mode measure has complex weight {}",
                    a.weight
                )));
            }
        }
        Ok(Self { atoms, mode })
    }

    /// Real-mode measure from parallel weight and location lists.
    pub fn from_real(weights: &[f64], locations: Vec<Vec<f64>>) -> Result<Self> {
        if weights.len() != locations.len() {
            return Err(Error::Argument(format!(
                "{} weights for {} locations",
                weights.len(),
                locations.len()
            )));
        }
        let atoms = weights
            .iter()
            .zip(locations)
            .map(|(&w, v)| Atom::real(w, v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms, Mode::Real)
    }

    /// Measure from complex weights; the mode is `Real` when every imaginary
    /// part is exactly zero.
    pub fn from_parts(weights: &[C64], locations: Vec<Vec<f64>>, mode: Mode) -> Result<Self> {
        if weights.len() != locations.len() {
            return Err(Error::Argument(format!(
                "{} weights for {} locations",
                weights.len(),
                locations.len()
            )));
        }
        let atoms = weights
            .iter()
            .zip(locations)
            .map(|(&w, v)| {
                let w = if mode == Mode::Real { C64::new(w.re, 0.0) } else { w };
                Atom::new(w, v)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms, mode)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = C64> + '_ {
        self.atoms.iter().map(|a| a.weight)
    }

    pub fn locations(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.atoms.iter().map(|a| a.location.as_slice())
    }

    /// `c · μ`. A non-real factor promotes the measure to complex mode.
    pub fn scaled(&self, c: C64) -> Self {
        let mode = if c.im != 0.0 { Mode::Complex } else { self.mode };
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    weight: a.weight * c,
                    location: a.location.clone(),
                })
                .collect(),
            mode,
        }
    }

    /// `μ + ν` as atom concatenation (no merging of duplicate locations).
    pub fn concat(&self, other: &Self) -> Self {
        let mode = if self.mode == Mode::Complex || other.mode == Mode::Complex {
            Mode::Complex
        } else {
            Mode::Real
        };
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Self { atoms, mode }
    }

    /// `μ − ν` as atom concatenation.
    pub fn difference(&self, other: &Self) -> Self {
        self.concat(&other.scaled(C64::new(-1.0, 0.0)))
    }

    pub fn push(&mut self, atom: Atom) -> Result<()> {
        if self.mode == Mode::Real && atom.weight.im != 0.0 {
            return Err(Error::Argument("complex weight pushed to real measure".into()));
        }
        self.atoms.push(atom);
        Ok(())
    }
}

/// Total variation `Σ_j |w_j|`.
pub fn tv_norm(measure: &AtomicMeasure) -> f64 {
    measure.atoms.iter().map(|a| a.weight.norm()).sum()
}

/// `S[μ](x) = Σ_j w_j φ(x; v_j)`, summed left to right.
pub fn eval_model(measure: &AtomicMeasure, features: &FeatureSpec, x: &[f64]) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for atom in &measure.atoms {
        acc += atom.weight * features.eval(x, &atom.location)?;
    }
    Ok(acc)
}

/// `S[μ](x_i)` for every input of a dataset.
pub fn eval_model_on(measure: &AtomicMeasure, features: &FeatureSpec, data: &Dataset) -> Result<Vec<C64>> {
    data.inputs()
        .iter()
        .map(|x| eval_model(measure, features, x))
        .collect()
}

/// Supervised sample `{(x_i, y_i)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    inputs: Vec<Vec<f64>>,
    targets: Vec<f64>,
}

impl Dataset {
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::Argument("dataset must hold at least one point".into()));
        }
        if inputs.len() != targets.len() {
            return Err(Error::Argument(format!(
                "{} inputs but {} targets",
                inputs.len(),
                targets.len()
            )));
        }
        let dim = inputs[0].len();
        if dim == 0 || inputs.iter().any(|x| x.len() != dim) {
            return Err(Error::Argument("inputs must share one positive dimension".into()));
        }
        let finite = inputs.iter().flatten().chain(&targets).all(|v| v.is_finite());
        if !finite {
            return Err(Error::Argument("dataset has non-finite entries".into()));
        }
        Ok(Self { inputs, targets })
    }

    /// One-dimensional dataset from paired columns.
    pub fn from_columns(xs: &[f64], ys: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| vec![x]).collect(), ys.to_vec())
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.inputs[0].len()
    }

    /// Same inputs with replaced targets.
    pub fn with_targets(&self, targets: Vec<f64>) -> Result<Self> {
        Self::new(self.inputs.clone(), targets)
    }

    /// Reads a two-column `x,y` CSV (one-dimensional inputs, header row).
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::Reader::from_path(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (line, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            if rec.len() != 2 {
                return Err(Error::Parse(format!(
                    "{}: record {} has {} fields, expected 2",
                    path.display(),
                    line + 1,
                    rec.len()
                )));
            }
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| {
                    Error::Parse(format!("{}: record {}: {e}", path.display(), line + 1))
                })
            };
            xs.push(parse(&rec[0])?);
            ys.push(parse(&rec[1])?);
        }
        Self::from_columns(&xs, &ys)
    }

    /// Writes the two-column `x,y` CSV read by [`Dataset::read_csv`].
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        if self.input_dim() != 1 {
            return Err(Error::Argument("CSV output supports one-dimensional inputs only".into()));
        }
        let mut out = String::from("x,y\n");
        for (x, y) in self.inputs.iter().zip(&self.targets) {
            out.push_str(&format!("{},{}\n", x[0], y));
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// Root mean squared and maximum absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub rmse: f64,
    pub max_err: f64,
}

pub fn metrics(predictions: &[f64], targets: &[f64]) -> Result<Metrics> {
    if predictions.is_empty() || predictions.len() != targets.len() {
        return Err(Error::Argument(format!(
            "metrics need equal non-empty sequences (got {} and {})",
            predictions.len(),
            targets.len()
        )));
    }
    let mut sq = 0.0;
    let mut max_err: f64 = 0.0;
    for (p, t) in predictions.iter().zip(targets) {
        let r = (p - t).abs();
        sq += r * r;
        max_err = max_err.max(r);
    }
    Ok(Metrics {
        rmse: (sq / predictions.len() as f64).sqrt(),
        max_err,
    })
}
