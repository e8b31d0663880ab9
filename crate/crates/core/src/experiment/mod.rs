//! Cross-validated estimation: fold plans, CV runs, baselines and search.

mod cv;
mod folds;
mod search;

pub use cv::{
    estimate_upper_bound, evaluate, majority_baseline, predicted_label, run_cv, run_cv_with_plan,
    EvalResult,
};
pub use folds::{make_folds, FoldPlan};
pub use search::{search, search_candidates, SearchOutcome, SearchSpace, Trial};

use crate::lexicon::InstanceSet;
use crate::neural::{derive_seed, ClassifierModel, NeuralError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("k must be at least 2, got {0}")]
    InvalidFolds(usize),
    #[error("{instances} instances cannot fill {k} folds")]
    TooFewInstances { instances: usize, k: usize },
    #[error("fold plan covers {plan} instances but the set has {instances}")]
    PlanMismatch { plan: usize, instances: usize },
    #[error("instance set is empty")]
    EmptyInstances,
    #[error("invalid search space: {0}")]
    InvalidSearchSpace(String),
    #[error("every search trial failed")]
    AllTrialsFailed,
    #[error(transparent)]
    Neural(#[from] NeuralError),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// Search results for one outer fold of a nested run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldSearch {
    pub fold: usize,
    pub search: SearchOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedResult {
    pub eval: EvalResult,
    pub folds: Vec<FoldSearch>,
}

/// Nested cross-validation: for every outer fold, hyperparameters are
/// searched with an inner (k-1)-fold CV over the training part only, then a
/// model with the winning config is trained on the whole training part and
/// scored on the held-out fold.
pub fn run_cv_nested(
    instances: &InstanceSet,
    space: &SearchSpace,
    k: usize,
    include_etymology: bool,
) -> Result<NestedResult> {
    let plan = make_folds(instances, k, space.seed)?;
    let inner_k = (k - 1).max(2);
    let per_fold: Vec<(Vec<usize>, Vec<Vec<f64>>, FoldSearch)> = (0..k)
        .into_par_iter()
        .map(|fold| {
            let held_out = plan.held_out(fold);
            let train = instances.subset(&plan.training(fold));
            let test = instances.subset(&held_out);
            let inner_space = SearchSpace {
                seed: derive_seed(space.seed, fold as u64),
                ..space.clone()
            };
            let outcome = search(&inner_space, &train, inner_k, include_etymology)?;
            let mut model =
                ClassifierModel::for_training(&outcome.best, &train, include_etymology)?;
            model.fit(&train)?;
            let probs = model.predict(&test.instances)?;
            Ok((
                held_out,
                probs,
                FoldSearch {
                    fold,
                    search: outcome,
                },
            ))
        })
        .collect::<Result<_>>()?;

    let mut probs = vec![Vec::new(); instances.len()];
    let mut folds = Vec::with_capacity(k);
    for (indices, fold_probs, fold_search) in per_fold {
        for (i, p) in indices.into_iter().zip(fold_probs) {
            probs[i] = p;
        }
        folds.push(fold_search);
    }
    let eval = EvalResult::from_predictions(
        instances.label_space.clone(),
        &instances.label_indices(),
        probs,
        plan.assignments.clone(),
    );
    Ok(NestedResult { eval, folds })
}
