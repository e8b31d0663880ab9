use super::folds::{make_folds, FoldPlan};
use super::{ExperimentError, Result};
use crate::infotheory::MeasureValue;
use crate::lexicon::InstanceSet;
use crate::neural::{derive_seed, ClassifierModel, ModelConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Held-out predictions pooled over all folds of a cross-validation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub labels: Vec<String>,
    /// Mean per-instance held-out surprisal, in bits.
    pub cross_entropy_bits: f64,
    pub accuracy: f64,
    /// `confusion[true][predicted]`
    pub confusion: Vec<Vec<u64>>,
    pub per_instance_probs: Vec<Vec<f64>>,
    /// Fold in which each instance was held out.
    pub fold_of: Vec<usize>,
}

/// Index of the largest probability; ties go to the lowest index.
pub fn predicted_label(probs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in probs.iter().enumerate().skip(1) {
        if p > probs[best] {
            best = i;
        }
    }
    best
}

impl EvalResult {
    pub fn from_predictions(
        labels: Vec<String>,
        targets: &[usize],
        per_instance_probs: Vec<Vec<f64>>,
        fold_of: Vec<usize>,
    ) -> Self {
        let k = labels.len();
        let mut confusion = vec![vec![0u64; k]; k];
        let mut surprisal = 0.0;
        for (probs, &t) in per_instance_probs.iter().zip(targets) {
            confusion[t][predicted_label(probs)] += 1;
            surprisal -= probs[t].log2();
        }
        let m = targets.len().max(1) as f64;
        let correct: u64 = (0..k).map(|i| confusion[i][i]).sum();
        EvalResult {
            labels,
            cross_entropy_bits: surprisal / m,
            accuracy: correct as f64 / m,
            confusion,
            per_instance_probs,
            fold_of,
        }
    }

    pub fn total(&self) -> u64 {
        self.confusion.iter().flatten().sum()
    }

    pub fn confusion_csv(&self) -> String {
        let mut out = String::from("true\\predicted");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.confusion) {
            out.push_str(l);
            for c in row {
                out.push_str(&format!(",{c}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Evaluates one trained model on `instances`.
pub fn evaluate(model: &ClassifierModel, instances: &InstanceSet) -> Result<EvalResult> {
    let probs = model.predict(&instances.instances)?;
    Ok(EvalResult::from_predictions(
        instances.label_space.clone(),
        &instances.label_indices(),
        probs,
        vec![0; instances.len()],
    ))
}

/// Stratified k-fold cross-validation. The fold plan and per-fold training
/// seeds are derived from `config.seed`.
pub fn run_cv(
    instances: &InstanceSet,
    config: &ModelConfig,
    k: usize,
    include_etymology: bool,
) -> Result<EvalResult> {
    let plan = make_folds(instances, k, config.seed)?;
    run_cv_with_plan(instances, config, &plan, include_etymology)
}

/// Trains one model per fold (vocabulary from the training part only) and
/// pools the held-out predictions.
pub fn run_cv_with_plan(
    instances: &InstanceSet,
    config: &ModelConfig,
    plan: &FoldPlan,
    include_etymology: bool,
) -> Result<EvalResult> {
    config.validate()?;
    if plan.assignments.len() != instances.len() {
        return Err(ExperimentError::PlanMismatch {
            plan: plan.assignments.len(),
            instances: instances.len(),
        });
    }
    let per_fold: Vec<(Vec<usize>, Vec<Vec<f64>>)> = (0..plan.k)
        .into_par_iter()
        .map(|fold| {
            let held_out = plan.held_out(fold);
            let train = instances.subset(&plan.training(fold));
            let test = instances.subset(&held_out);
            let fold_config = config.with_seed(derive_seed(config.seed, fold as u64));
            let mut model = ClassifierModel::for_training(&fold_config, &train, include_etymology)?;
            model.fit(&train)?;
            Ok((held_out, model.predict(&test.instances)?))
        })
        .collect::<Result<_>>()?;

    let mut probs = vec![Vec::new(); instances.len()];
    for (indices, fold_probs) in per_fold {
        for (i, p) in indices.into_iter().zip(fold_probs) {
            probs[i] = p;
        }
    }
    Ok(EvalResult::from_predictions(
        instances.label_space.clone(),
        &instances.label_indices(),
        probs,
        plan.assignments.clone(),
    ))
}

/// Accuracy of always predicting the most frequent label.
pub fn majority_baseline(instances: &InstanceSet) -> Result<f64> {
    if instances.is_empty() {
        return Err(ExperimentError::EmptyInstances);
    }
    let max = instances.label_counts().into_iter().max().unwrap_or(0);
    Ok(max as f64 / instances.len() as f64)
}

/// Cross-entropy of a CV run as an upper bound on the entropy named `name`,
/// e.g. `H(C|W,G)`.
pub fn estimate_upper_bound(eval: &EvalResult, name: &str) -> MeasureValue {
    MeasureValue {
        upper_bound: true,
        ..MeasureValue::bits(name, eval.cross_entropy_bits)
    }
}
