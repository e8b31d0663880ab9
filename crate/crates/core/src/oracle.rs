//! Brute-force self-checks behind `plurinfo oracle-check`.
//!
//! Information measures are recomputed as explicit sums over a probability
//! cube rather than through entropy identities, and gradients are compared
//! against central finite differences on randomly shaped models.

use crate::infotheory::{conditional_entropy, mutual_information, Axis, JointTable};
use crate::lexicon::{Etymology, Gender, Instance, InstanceSet, LexemeId, Task};
use crate::neural::{compare_gradients, ClassifierModel, ModelConfig};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.worst < self.tolerance
    }
}

/// `p[c][e][g]` with marginal sums taken by hand.
struct Cube {
    p: Vec<Vec<Vec<f64>>>,
}

impl Cube {
    fn dims(&self) -> (usize, usize, usize) {
        (self.p.len(), self.p[0].len(), self.p[0][0].len())
    }

    fn p_c(&self, c: usize) -> f64 {
        self.p[c].iter().flatten().sum()
    }

    fn p_g(&self, g: usize) -> f64 {
        self.p.iter().flatten().map(|row| row[g]).sum()
    }

    fn p_cg(&self, c: usize, g: usize) -> f64 {
        self.p[c].iter().map(|row| row[g]).sum()
    }

    fn p_eg(&self, e: usize, g: usize) -> f64 {
        self.p.iter().map(|plane| plane[e][g]).sum()
    }

    fn p_ce(&self, c: usize, e: usize) -> f64 {
        self.p[c][e].iter().sum()
    }

    fn p_e(&self, e: usize) -> f64 {
        self.p
            .iter()
            .map(|plane| plane[e].iter().sum::<f64>())
            .sum()
    }

    fn h_c(&self) -> f64 {
        let (nc, _, _) = self.dims();
        -(0..nc).map(|c| xlogx(self.p_c(c))).sum::<f64>()
    }

    fn h_c_given_g(&self) -> f64 {
        let (nc, _, ng) = self.dims();
        let mut h = 0.0;
        for c in 0..nc {
            for g in 0..ng {
                let j = self.p_cg(c, g);
                if j > 0.0 {
                    h -= j * (j / self.p_g(g)).log2();
                }
            }
        }
        h
    }

    fn h_c_given_eg(&self) -> f64 {
        let (nc, ne, ng) = self.dims();
        let mut h = 0.0;
        for c in 0..nc {
            for e in 0..ne {
                for g in 0..ng {
                    let j = self.p[c][e][g];
                    if j > 0.0 {
                        h -= j * (j / self.p_eg(e, g)).log2();
                    }
                }
            }
        }
        h
    }

    fn mi_ce(&self) -> f64 {
        let (nc, ne, _) = self.dims();
        let mut mi = 0.0;
        for c in 0..nc {
            for e in 0..ne {
                let j = self.p_ce(c, e);
                if j > 0.0 {
                    mi += j * (j / (self.p_c(c) * self.p_e(e))).log2();
                }
            }
        }
        mi
    }

    fn mi_ce_given_g(&self) -> f64 {
        let (nc, ne, ng) = self.dims();
        let mut mi = 0.0;
        for c in 0..nc {
            for e in 0..ne {
                for g in 0..ng {
                    let j = self.p[c][e][g];
                    if j > 0.0 {
                        mi += j * (j * self.p_g(g) / (self.p_cg(c, g) * self.p_eg(e, g))).log2();
                    }
                }
            }
        }
        mi
    }
}

fn xlogx(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Largest absolute disagreement between [`JointTable`] measures and the
/// brute-force sums over `cases` random joints.
pub fn joint_suite(cases: usize, seed: u64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let (nc, ne, ng) = (
            rng.gen_range(1..=5),
            rng.gen_range(1..=5),
            rng.gen_range(1..=5),
        );
        let samples = rng.gen_range(1..=500);
        let mut table = JointTable::new(vec![
            Axis::new("C", labels("c", nc)),
            Axis::new("E", labels("e", ne)),
            Axis::new("G", labels("g", ng)),
        ]);
        let mut counts = vec![vec![vec![0u64; ng]; ne]; nc];
        for _ in 0..samples {
            let (c, e, g) = (
                rng.gen_range(0..nc),
                rng.gen_range(0..ne),
                rng.gen_range(0..ng),
            );
            counts[c][e][g] += 1;
            table.increment(&[c, e, g]);
        }
        let cube = Cube {
            p: counts
                .iter()
                .map(|plane| {
                    plane
                        .iter()
                        .map(|row| row.iter().map(|&n| n as f64 / samples as f64).collect())
                        .collect()
                })
                .collect(),
        };
        let pairs = [
            (table.joint_entropy(&["C"]).unwrap(), cube.h_c()),
            (
                conditional_entropy(&table, "C", &["G"]).unwrap(),
                cube.h_c_given_g(),
            ),
            (
                conditional_entropy(&table, "C", &["E", "G"]).unwrap(),
                cube.h_c_given_eg(),
            ),
            (
                mutual_information(&table, "C", "E", &[]).unwrap(),
                cube.mi_ce(),
            ),
            (
                mutual_information(&table, "C", "E", &["G"]).unwrap(),
                cube.mi_ce_given_g(),
            ),
        ];
        for (ours, oracle) in pairs {
            worst = worst.max((ours - oracle).abs());
        }
    }
    SuiteResult {
        name: "plug-in measures vs brute-force sums".into(),
        cases,
        worst,
        tolerance: 1e-9,
    }
}

/// A small model with random shape and weights plus one instance it can
/// encode, together with a valid target index.
pub fn random_small_model(rng: &mut ChaCha8Rng) -> (ClassifierModel, Instance, usize) {
    let layers = rng.gen_range(1..=2);
    let hidden_dims: Vec<usize> = (0..layers).map(|_| rng.gen_range(2..=6)).collect();
    let classes = rng.gen_range(2..=5);
    let alphabet: Vec<char> = "abcdefgh".chars().collect();
    let instances: Vec<Instance> = (0..classes)
        .map(|k| {
            let len = rng.gen_range(1..=6);
            let form: String = (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect();
            Instance {
                lexeme: LexemeId(format!("{form}/{k}")),
                form_symbols: form.chars().collect(),
                gender: if rng.gen_bool(0.5) {
                    Gender::Masculine
                } else {
                    Gender::Feminine
                },
                etymology: if rng.gen_bool(0.5) {
                    Etymology::Semitic
                } else {
                    Etymology::NonSemitic
                },
                label: format!("k{k}"),
            }
        })
        .collect();
    let config = ModelConfig {
        char_embedding_dim: rng.gen_range(2..=5),
        gender_embedding_dim: hidden_dims[0],
        hidden_dims,
        epochs: 1,
        learning_rate: 0.01,
        batch_size: 1,
        seed: rng.gen(),
    };
    let set = InstanceSet::new(Task::Allomorph, instances);
    let model =
        ClassifierModel::for_training(&config, &set, rng.gen_bool(0.5)).expect("valid config");
    let pick = rng.gen_range(0..set.len());
    let target = set.label_index(&set.instances[pick].label).unwrap();
    (model, set.instances[pick].clone(), target)
}

/// Worst relative error between backpropagated and finite-difference
/// gradients over `cases` random small models.
pub fn gradient_suite(cases: usize, seed: u64, epsilon: f64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let (model, instance, target) = random_small_model(&mut rng);
        let enc = model.encode(&instance);
        let (_, grads) = model
            .loss_and_gradients(&[&enc], &[target])
            .expect("forward");
        let report = compare_gradients(&model, &enc, target, epsilon, &grads).expect("compare");
        worst = worst.max(report.max_relative_error);
    }
    SuiteResult {
        name: "backprop vs finite differences".into(),
        cases,
        worst,
        tolerance: 1e-4,
    }
}
