//! Seeded random hyperparameter search scored by cross-validated cross-entropy.

use super::cv::{run_cv_with_plan, EvalResult};
use super::folds::make_folds;
use super::{ExperimentError, Result};
use crate::lexicon::InstanceSet;
use crate::neural::{derive_seed, ModelConfig};
use rand::distributions::{Distribution, Uniform};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    /// Inclusive range.
    pub char_embedding_dim: (usize, usize),
    /// Allowed numbers of stacked layers.
    pub layer_counts: Vec<usize>,
    /// Inclusive range, sampled independently per layer.
    pub hidden_dim: (usize, usize),
    /// Inclusive range.
    pub epochs: (usize, usize),
    /// Sampled log-uniformly.
    pub learning_rate: (f64, f64),
    pub batch_sizes: Vec<usize>,
    pub budget: usize,
    pub seed: u64,
}

impl Default for SearchSpace {
    fn default() -> Self {
        SearchSpace {
            char_embedding_dim: (16, 128),
            layer_counts: vec![1, 2],
            hidden_dim: (32, 256),
            epochs: (10, 100),
            learning_rate: (1e-4, 1e-2),
            batch_sizes: vec![16, 32, 64],
            budget: 20,
            seed: 0,
        }
    }
}

impl SearchSpace {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(ExperimentError::InvalidSearchSpace(m.to_string()));
        let range_ok = |(lo, hi): (usize, usize)| lo >= 1 && lo <= hi;
        if self.budget == 0 {
            return bad("budget must be at least 1");
        }
        if !range_ok(self.char_embedding_dim)
            || !range_ok(self.hidden_dim)
            || !range_ok(self.epochs)
        {
            return bad("integer ranges must be non-empty and positive");
        }
        if self.layer_counts.is_empty() || self.layer_counts.contains(&0) {
            return bad("layer counts must be non-empty and positive");
        }
        if self.batch_sizes.is_empty() || self.batch_sizes.contains(&0) {
            return bad("batch sizes must be non-empty and positive");
        }
        let (lo, hi) = self.learning_rate;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return bad("learning-rate range must be positive and ordered");
        }
        Ok(())
    }

    fn sample(&self, rng: &mut ChaCha8Rng, seed: u64) -> ModelConfig {
        let pick = |rng: &mut ChaCha8Rng, (lo, hi): (usize, usize)| rng.gen_range(lo..=hi);
        let char_embedding_dim = pick(rng, self.char_embedding_dim);
        let layers = *self.layer_counts.choose(rng).expect("validated");
        let hidden_dims: Vec<usize> = (0..layers).map(|_| pick(rng, self.hidden_dim)).collect();
        let epochs = pick(rng, self.epochs);
        let (lo, hi) = self.learning_rate;
        let learning_rate = if lo == hi {
            lo
        } else {
            Uniform::new(lo.ln(), hi.ln()).sample(rng).exp()
        };
        let batch_size = *self.batch_sizes.choose(rng).expect("validated");
        ModelConfig {
            char_embedding_dim,
            gender_embedding_dim: hidden_dims[0],
            hidden_dims,
            epochs,
            learning_rate,
            batch_size,
            seed,
        }
    }

    /// The `budget` configurations this space yields, in trial order.
    pub fn candidates(&self) -> Result<Vec<ModelConfig>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok((0..self.budget)
            .map(|t| self.sample(&mut rng, derive_seed(self.seed, t as u64)))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub index: usize,
    pub config: ModelConfig,
    /// `None` when training failed (for example on divergence).
    pub cross_entropy_bits: Option<f64>,
    pub accuracy: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best: ModelConfig,
    pub best_cross_entropy_bits: f64,
    pub trials: Vec<Trial>,
}

/// Random search: samples `space.budget` configs and keeps the one with the
/// lowest k-fold cross-entropy on `instances`.
pub fn search(
    space: &SearchSpace,
    instances: &InstanceSet,
    k: usize,
    include_etymology: bool,
) -> Result<SearchOutcome> {
    search_candidates(
        &space.candidates()?,
        instances,
        k,
        include_etymology,
        space.seed,
    )
}

/// Scores explicit candidates on one shared fold plan seeded by `seed`.
/// Ties go to the earlier candidate.
pub fn search_candidates(
    candidates: &[ModelConfig],
    instances: &InstanceSet,
    k: usize,
    include_etymology: bool,
    seed: u64,
) -> Result<SearchOutcome> {
    if candidates.is_empty() {
        return Err(ExperimentError::InvalidSearchSpace("no candidates".into()));
    }
    let plan = make_folds(instances, k, seed)?;
    let trials: Vec<Trial> = candidates
        .par_iter()
        .enumerate()
        .map(|(index, config)| {
            let outcome: Result<EvalResult> =
                run_cv_with_plan(instances, config, &plan, include_etymology);
            match outcome {
                Ok(eval) if eval.cross_entropy_bits.is_finite() => Trial {
                    index,
                    config: config.clone(),
                    cross_entropy_bits: Some(eval.cross_entropy_bits),
                    accuracy: Some(eval.accuracy),
                    error: None,
                },
                Ok(eval) => Trial {
                    index,
                    config: config.clone(),
                    cross_entropy_bits: None,
                    accuracy: Some(eval.accuracy),
                    error: Some("held-out cross-entropy is not finite".into()),
                },
                Err(e) => Trial {
                    index,
                    config: config.clone(),
                    cross_entropy_bits: None,
                    accuracy: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let best = trials
        .iter()
        .filter_map(|t| t.cross_entropy_bits.map(|s| (s, t)))
        .fold(None::<(f64, &Trial)>, |acc, (s, t)| match acc {
            Some((best, _)) if best <= s => acc,
            _ => Some((s, t)),
        });
    let (score, trial) = best.ok_or(ExperimentError::AllTrialsFailed)?;
    Ok(SearchOutcome {
        best: trial.config.clone(),
        best_cross_entropy_bits: score,
        trials,
    })
}
