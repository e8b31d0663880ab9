//! Finite-difference verification of the analytic backward pass.

use super::model::{ClassifierModel, Parameters};
use super::vocab::Encoded;
use super::Result;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Coordinates compared per tensor; smaller tensors are checked exhaustively.
const SAMPLES_PER_TENSOR: usize = 128;
/// Gradients smaller than this are compared in absolute terms.
const RELATIVE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct GradientReport {
    pub max_relative_error: f64,
    /// (tensor name, coordinates checked, worst relative error)
    pub per_tensor: Vec<(String, usize, f64)>,
}

fn relative_error(analytic: f64, numeric: f64) -> f64 {
    let diff = (analytic - numeric).abs();
    if diff == 0.0 {
        return 0.0;
    }
    diff / analytic.abs().max(numeric.abs()).max(RELATIVE_FLOOR)
}

/// Compares `analytic` against central differences of the single-instance
/// loss (natural log) with step `epsilon`.
pub fn compare_gradients(
    model: &ClassifierModel,
    instance: &Encoded,
    target: usize,
    epsilon: f64,
    analytic: &Parameters,
) -> Result<GradientReport> {
    assert!(
        (1e-6..=1e-3).contains(&epsilon),
        "epsilon must lie in [1e-6, 1e-3]"
    );
    let mut probe = model.clone();
    let items = [instance];
    let targets = [target];
    let mut rng = ChaCha8Rng::seed_from_u64(0x6772_6164);
    let shapes: Vec<(String, usize)> = model
        .parameters
        .tensors()
        .iter()
        .map(|(n, t)| (n.clone(), t.len()))
        .collect();
    let analytic_flat: Vec<Vec<f64>> = analytic
        .tensors()
        .iter()
        .map(|(_, t)| t.iter().copied().collect())
        .collect();

    let mut per_tensor = Vec::with_capacity(shapes.len());
    let mut worst = 0.0f64;
    for (k, (name, len)) in shapes.iter().enumerate() {
        let coords: Vec<usize> = if *len <= SAMPLES_PER_TENSOR {
            (0..*len).collect()
        } else {
            let mut c = sample(&mut rng, *len, SAMPLES_PER_TENSOR).into_vec();
            c.sort_unstable();
            c
        };
        let mut tensor_worst = 0.0f64;
        for &idx in &coords {
            let original = nth_mut(&mut probe.parameters, k, idx);
            let saved = *original;
            *original = saved + epsilon;
            let plus = probe.loss_nats(&items, &targets)?;
            *nth_mut(&mut probe.parameters, k, idx) = saved - epsilon;
            let minus = probe.loss_nats(&items, &targets)?;
            *nth_mut(&mut probe.parameters, k, idx) = saved;
            let numeric = (plus - minus) / (2.0 * epsilon);
            let err = relative_error(analytic_flat[k][idx], numeric);
            tensor_worst = tensor_worst.max(err);
        }
        worst = worst.max(tensor_worst);
        per_tensor.push((name.clone(), coords.len(), tensor_worst));
    }
    Ok(GradientReport {
        max_relative_error: worst,
        per_tensor,
    })
}

fn nth_mut(params: &mut Parameters, tensor: usize, idx: usize) -> &mut f64 {
    let (_, t) = params.tensors_mut().swap_remove(tensor);
    t.iter_mut().nth(idx).expect("coordinate in range")
}

/// Max relative error between backpropagated and finite-difference gradients.
pub fn gradient_check(
    model: &ClassifierModel,
    instance: &Encoded,
    target: usize,
    epsilon: f64,
) -> Result<f64> {
    let (_, grads) = model.loss_and_gradients(&[instance], &[target])?;
    Ok(compare_gradients(model, instance, target, epsilon, &grads)?.max_relative_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{Etymology, Gender, Instance, InstanceSet, LexemeId, Task};
    use crate::neural::ModelConfig;

    fn model(hidden: &[usize], etym: bool) -> (ClassifierModel, InstanceSet) {
        let inst = |form: &str, g, label: &str| Instance {
            lexeme: LexemeId(form.into()),
            form_symbols: form.chars().collect(),
            gender: g,
            etymology: Etymology::Semitic,
            label: label.into(),
        };
        let set = InstanceSet::new(
            Task::Allomorph,
            vec![
                inst("triq", Gender::Feminine, "-at"),
                inst("sid", Gender::Feminine, "-ien"),
                inst("kbir", Gender::Feminine, "CCVVC"),
            ],
        );
        let cfg = ModelConfig {
            char_embedding_dim: 3,
            gender_embedding_dim: hidden[0],
            hidden_dims: hidden.to_vec(),
            epochs: 1,
            learning_rate: 0.01,
            batch_size: 2,
            seed: 5,
        };
        (
            ClassifierModel::for_training(&cfg, &set, etym).unwrap(),
            set,
        )
    }

    #[test]
    fn backward_matches_finite_differences() {
        for hidden in [&[4][..], &[3, 5]] {
            let (m, set) = model(hidden, true);
            let enc = m.encode(&set.instances[0]);
            let err = gradient_check(&m, &enc, 1, 1e-4).unwrap();
            assert!(err < 1e-4, "{hidden:?}: {err}");
        }
    }

    #[test]
    fn corrupted_output_gradient_is_caught() {
        let (m, set) = model(&[4], false);
        let enc = m.encode(&set.instances[1]);
        let (_, mut grads) = m.loss_and_gradients(&[&enc], &[2]).unwrap();
        grads.output_weight.mapv_inplace(|g| g * 1.5);
        let report = compare_gradients(&m, &enc, 2, 1e-4, &grads).unwrap();
        assert!(report.max_relative_error > 1e-2);
        let worst = report
            .per_tensor
            .iter()
            .find(|(n, _, _)| n == "output.weight")
            .unwrap();
        assert!(worst.2 > 1e-2);
    }

    #[test]
    fn unused_gender_row_has_exact_zero_gradient() {
        // all instances are feminine, so the masculine row is never read
        let (m, set) = model(&[4], false);
        let enc = m.encode(&set.instances[0]);
        let (_, grads) = m.loss_and_gradients(&[&enc], &[0]).unwrap();
        assert!(grads.gender_embedding.row(0).iter().all(|&g| g == 0.0));
        assert!(grads.gender_embedding.row(1).iter().any(|&g| g != 0.0));
        let report = compare_gradients(&m, &enc, 0, 1e-4, &grads).unwrap();
        let gender = &report.per_tensor[1];
        assert_eq!(gender.0, "gender_embedding");
        assert!(gender.2 < 1e-4);
    }
}
