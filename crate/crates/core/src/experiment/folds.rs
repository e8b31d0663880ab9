use super::{ExperimentError, Result};
use crate::lexicon::InstanceSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Assignment of every instance to one of `k` folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn held_out(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == fold)
            .collect()
    }

    pub fn training(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] != fold)
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Stratified k-fold assignment.
///
/// Each label's instances are shuffled and dealt round-robin. The dealer's
/// position carries over from one label to the next, so total fold sizes
/// also differ by at most one. Labels with fewer than `k` instances simply
/// land in whichever folds come up next.
pub fn make_folds(instances: &InstanceSet, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(ExperimentError::InvalidFolds(k));
    }
    if instances.len() < k {
        return Err(ExperimentError::TooFewInstances {
            instances: instances.len(),
            k,
        });
    }
    let labels = instances.label_indices();
    let mut strata = vec![Vec::new(); instances.label_space.len()];
    for (i, &l) in labels.iter().enumerate() {
        strata[l].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0; instances.len()];
    let mut dealer = 0;
    for stratum in &mut strata {
        stratum.shuffle(&mut rng);
        for &i in stratum.iter() {
            assignments[i] = dealer % k;
            dealer += 1;
        }
    }
    Ok(FoldPlan {
        k,
        assignments,
        seed,
    })
}
