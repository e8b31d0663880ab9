//! Plug-in entropy and mutual information over finite categorical systems.
//!
//! Every quantity here is computed from empirical frequencies with the
//! `0 log 0 = 0` convention and no smoothing. Logarithms are base 2.

use crate::lexicon::InstanceSet;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum InfoError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("unknown axis `{0}`")]
    UnknownAxis(String),
    #[error("axis `{0}` appears more than once in the query")]
    RepeatedAxis(String),
    #[error("joint table is empty")]
    EmptyTable,
    #[error("normalizer `{0}` is not positive")]
    ZeroNormalizer(String),
    #[error("alignment mismatch: {0}")]
    AlignmentMismatch(String),
}

pub type Result<T> = std::result::Result<T, InfoError>;

const SUM_TOLERANCE: f64 = 1e-9;

/// `-p log2 p` with the convention that it vanishes at `p = 0`.
fn surprisal_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Entropy in bits of the empirical distribution given by `counts`.
pub fn entropy_of_counts(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts.iter().map(|&c| surprisal_term(c as f64 / n)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalDistribution {
    labels: Vec<String>,
    probabilities: Vec<f64>,
}

impl CategoricalDistribution {
    pub fn new(labels: Vec<String>, probabilities: Vec<f64>) -> Result<Self> {
        if labels.len() != probabilities.len() {
            return Err(InfoError::InvalidDistribution(format!(
                "{} labels but {} probabilities",
                labels.len(),
                probabilities.len()
            )));
        }
        if let Some(p) = probabilities
            .iter()
            .find(|p| !(**p >= 0.0) || !p.is_finite())
        {
            return Err(InfoError::InvalidDistribution(format!(
                "bad probability {p}"
            )));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(InfoError::InvalidDistribution(format!("sums to {sum}")));
        }
        Ok(CategoricalDistribution {
            labels,
            probabilities,
        })
    }

    /// Distribution over anonymous labels `0..n`.
    pub fn from_probabilities(probabilities: Vec<f64>) -> Result<Self> {
        let labels = (0..probabilities.len()).map(|i| i.to_string()).collect();
        Self::new(labels, probabilities)
    }

    pub fn from_counts(labels: Vec<String>, counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(InfoError::EmptyTable);
        }
        let probs = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self::new(labels, probs)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

pub fn entropy(dist: &CategoricalDistribution) -> f64 {
    dist.probabilities.iter().map(|&p| surprisal_term(p)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub labels: Vec<String>,
}

impl Axis {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Self {
        Axis {
            name: name.into(),
            labels,
        }
    }
}

/// Dense joint count table over named categorical axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointTable {
    axes: Vec<Axis>,
    counts: Vec<u64>,
}

impl JointTable {
    pub fn new(axes: Vec<Axis>) -> Self {
        let cells = axes.iter().map(|a| a.labels.len()).product();
        JointTable {
            axes,
            counts: vec![0; cells],
        }
    }

    /// Table over `C` (instance label), `E` (etymology) and `G` (gender).
    pub fn from_instances(set: &InstanceSet) -> Self {
        use crate::lexicon::{Etymology, Gender};
        let mut table = JointTable::new(vec![
            Axis::new("C", set.label_space.clone()),
            Axis::new(
                "E",
                Etymology::ALL
                    .iter()
                    .map(|e| e.as_str().to_string())
                    .collect(),
            ),
            Axis::new(
                "G",
                Gender::ALL.iter().map(|g| g.code().to_string()).collect(),
            ),
        ]);
        for (inst, label) in set.instances.iter().zip(set.label_indices()) {
            table.increment(&[label, inst.etymology.index(), inst.gender.index()]);
        }
        table
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    fn offset(&self, cell: &[usize]) -> usize {
        assert_eq!(cell.len(), self.axes.len(), "cell arity");
        cell.iter().zip(&self.axes).fold(0, |acc, (&i, axis)| {
            assert!(
                i < axis.labels.len(),
                "index {i} out of range for {}",
                axis.name
            );
            acc * axis.labels.len() + i
        })
    }

    pub fn increment(&mut self, cell: &[usize]) {
        self.add(cell, 1);
    }

    pub fn add(&mut self, cell: &[usize], count: u64) {
        let off = self.offset(cell);
        self.counts[off] += count;
    }

    pub fn count(&self, cell: &[usize]) -> u64 {
        self.counts[self.offset(cell)]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| InfoError::UnknownAxis(name.to_string()))
    }

    fn resolve(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for name in names {
            let idx = self.axis_index(name)?;
            if out.contains(&idx) {
                return Err(InfoError::RepeatedAxis(name.to_string()));
            }
            out.push(idx);
        }
        Ok(out)
    }

    /// Counts marginalized onto `keep` (axis indices), in row-major order
    /// of the kept axes.
    pub fn marginal_counts(&self, keep: &[usize]) -> Vec<u64> {
        let dims: Vec<usize> = self.axes.iter().map(|a| a.labels.len()).collect();
        let out_len = keep.iter().map(|&k| dims[k]).product();
        let mut out = vec![0u64; out_len];
        let mut cell = vec![0usize; dims.len()];
        for &c in &self.counts {
            if c > 0 {
                let off = keep.iter().fold(0, |acc, &k| acc * dims[k] + cell[k]);
                out[off] += c;
            }
            // odometer increment, last axis fastest
            for d in (0..dims.len()).rev() {
                cell[d] += 1;
                if cell[d] < dims[d] {
                    break;
                }
                cell[d] = 0;
            }
        }
        out
    }

    /// Joint entropy of the named axes, in bits.
    pub fn joint_entropy(&self, names: &[&str]) -> Result<f64> {
        let idx = self.resolve(names)?;
        if self.total() == 0 {
            return Err(InfoError::EmptyTable);
        }
        Ok(entropy_of_counts(&self.marginal_counts(&idx)))
    }

    pub fn marginal(&self, name: &str) -> Result<CategoricalDistribution> {
        let idx = self.axis_index(name)?;
        CategoricalDistribution::from_counts(
            self.axes[idx].labels.clone(),
            &self.marginal_counts(&[idx]),
        )
    }
}

fn check_disjoint(target: &[&str], given: &[&str]) -> Result<()> {
    match target.iter().find(|t| given.contains(t)) {
        Some(t) => Err(InfoError::RepeatedAxis(t.to_string())),
        None => Ok(()),
    }
}

/// `H(target | given)` in bits.
pub fn conditional_entropy(joint: &JointTable, target: &str, given: &[&str]) -> Result<f64> {
    check_disjoint(&[target], given)?;
    let mut all = given.to_vec();
    all.push(target);
    Ok(joint.joint_entropy(&all)? - joint.joint_entropy(given)?)
}

/// `MI(a; b | given) = H(a | given) - H(a | b, given)` in bits.
pub fn mutual_information(joint: &JointTable, a: &str, b: &str, given: &[&str]) -> Result<f64> {
    if a == b {
        return Err(InfoError::RepeatedAxis(a.to_string()));
    }
    check_disjoint(&[a, b], given)?;
    let mut with_b = given.to_vec();
    with_b.push(b);
    Ok(conditional_entropy(joint, a, given)? - conditional_entropy(joint, a, &with_b)?)
}

/// Interaction information `MI(C;E;W) = MI(C;W) - MI(C;W|E)`. Signed.
pub fn tripartite_mi(mi_cw: f64, mi_cw_given_e: f64) -> f64 {
    mi_cw - mi_cw_given_e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Bits,
    Dimensionless,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Bits => "bits",
            Unit::Dimensionless => "dimensionless",
        })
    }
}

/// A named information measure, e.g. `H(C|G)` or `NMI(C;W|G)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub name: String,
    pub value: f64,
    pub unit: Unit,
    pub normalizer: Option<String>,
    /// Set for cross-entropy estimates, which bound the named entropy from above.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub upper_bound: bool,
}

impl MeasureValue {
    pub fn bits(name: impl Into<String>, value: f64) -> Self {
        MeasureValue {
            name: name.into(),
            value,
            unit: Unit::Bits,
            normalizer: None,
            upper_bound: false,
        }
    }
}

/// `mi / normalizer`, tagged with the normalizer's name.
pub fn nmi(mi: &MeasureValue, normalizer: &MeasureValue) -> Result<MeasureValue> {
    if !(normalizer.value > 0.0) {
        return Err(InfoError::ZeroNormalizer(normalizer.name.clone()));
    }
    Ok(MeasureValue {
        name: format!("N{}", mi.name),
        value: mi.value / normalizer.value,
        unit: Unit::Dimensionless,
        normalizer: Some(normalizer.name.clone()),
        upper_bound: false,
    })
}

/// Empirical `p(c | g)` over an instance set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassGivenGender {
    /// `probs[gender][class]`; all zeros for an unattested gender.
    pub probs: Vec<Vec<f64>>,
}

impl ClassGivenGender {
    pub fn from_instances(set: &InstanceSet) -> Self {
        let k = set.label_space.len();
        let mut counts = vec![vec![0u64; k]; 2];
        for (inst, label) in set.instances.iter().zip(set.label_indices()) {
            counts[inst.gender.index()][label] += 1;
        }
        let probs = counts
            .into_iter()
            .map(|row| {
                let n: u64 = row.iter().sum();
                row.iter()
                    .map(|&c| if n == 0 { 0.0 } else { c as f64 / n as f64 })
                    .collect()
            })
            .collect();
        ClassGivenGender { probs }
    }
}

/// Per-class share of the model-based estimate of `MI(C;W|G)`.
///
/// For class `c` the value is
/// `(1/M) * sum over instances i labelled c of [log2 q(c|w_i,g_i) - log2 p(c|g_i)]`,
/// so the values sum to `H(C|G) - CE`, where `CE` is the model's mean
/// cross-entropy over the same instances. This is an additive decomposition
/// of the model-based MI by true class.
pub fn per_class_pmi(
    instances: &InstanceSet,
    model_probs: &[Vec<f64>],
    class_marginal: &ClassGivenGender,
) -> Result<Vec<f64>> {
    let k = instances.label_space.len();
    if model_probs.len() != instances.len() {
        return Err(InfoError::AlignmentMismatch(format!(
            "{} predictions for {} instances",
            model_probs.len(),
            instances.len()
        )));
    }
    if class_marginal.probs.iter().any(|row| row.len() != k) {
        return Err(InfoError::AlignmentMismatch(
            "class marginal does not match label space".into(),
        ));
    }
    let m = instances.len() as f64;
    let mut parts = vec![0.0; k];
    for ((inst, label), probs) in instances
        .instances
        .iter()
        .zip(instances.label_indices())
        .zip(model_probs)
    {
        if probs.len() != k {
            return Err(InfoError::AlignmentMismatch(format!(
                "prediction over {} labels, expected {k}",
                probs.len()
            )));
        }
        let prior = class_marginal.probs[inst.gender.index()][label];
        if !(prior > 0.0) {
            return Err(InfoError::AlignmentMismatch(format!(
                "class `{}` has zero marginal probability for its own gender",
                inst.label
            )));
        }
        parts[label] += (probs[label].log2() - prior.log2()) / m;
    }
    Ok(parts)
}
