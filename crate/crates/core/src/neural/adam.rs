use super::model::Parameters;
use serde::{Deserialize, Serialize};

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;

/// Adam moment estimates, one pair of tensors per parameter tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub first_moment: Parameters,
    pub second_moment: Parameters,
    pub step: u64,
}

impl AdamState {
    pub fn new(like: &Parameters) -> Self {
        AdamState {
            first_moment: like.zeros_like(),
            second_moment: like.zeros_like(),
            step: 0,
        }
    }

    /// One bias-corrected Adam step.
    pub fn update(&mut self, params: &mut Parameters, grads: &Parameters, learning_rate: f64) {
        self.step += 1;
        let t = self.step as i32;
        let bias1 = 1.0 - ADAM_BETA1.powi(t);
        let bias2 = 1.0 - ADAM_BETA2.powi(t);
        let moments = self
            .first_moment
            .tensors_mut()
            .into_iter()
            .zip(self.second_moment.tensors_mut());
        for (((_, p), (_, g)), ((_, m), (_, v))) in params
            .tensors_mut()
            .into_iter()
            .zip(grads.tensors())
            .zip(moments)
        {
            ndarray::Zip::from(p)
                .and(g)
                .and(m)
                .and(v)
                .for_each(|p, &g, m, v| {
                    *m = ADAM_BETA1 * *m + (1.0 - ADAM_BETA1) * g;
                    *v = ADAM_BETA2 * *v + (1.0 - ADAM_BETA2) * g * g;
                    let m_hat = *m / bias1;
                    let v_hat = *v / bias2;
                    *p -= learning_rate * m_hat / (v_hat.sqrt() + ADAM_EPSILON);
                });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn params(value: f64) -> Parameters {
        Parameters {
            char_embedding: Array2::from_elem((2, 1), value),
            gender_embedding: Array2::from_elem((2, 1), value),
            layers: vec![],
            output_weight: Array2::from_elem((1, 2), value),
            output_bias: Array2::from_elem((1, 2), value),
        }
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        // with bias correction the first step is lr * g / (|g| + eps)
        let mut p = params(1.0);
        let mut adam = AdamState::new(&p);
        adam.update(&mut p, &params(0.5), 0.01);
        let expected = 1.0 - 0.01 * 0.5 / (0.5 + ADAM_EPSILON);
        assert!((p.output_bias[[0, 0]] - expected).abs() < 1e-15);
        assert_eq!(adam.step, 1);
    }

    #[test]
    fn zero_learning_rate_is_a_no_op() {
        let mut p = params(0.3);
        let before = p.clone();
        let mut adam = AdamState::new(&p);
        adam.update(&mut p, &params(2.0), 0.0);
        assert_eq!(p, before);
    }
}
