use super::adam::AdamState;
use super::vocab::{Encoded, Vocabulary};
use super::{derive_seed, ModelConfig, NeuralError, Result};
use crate::infotheory::CategoricalDistribution;
use crate::lexicon::{Gender, Instance, InstanceSet};
use ndarray::{concatenate, s, Array2, ArrayView2, Axis};
use rand::distributions::{Distribution, Uniform};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

const INIT_RANGE: f64 = 0.1;
const FORGET_BIAS: f64 = 1.0;
const PREDICT_CHUNK: usize = 256;

/// Weights of one LSTM layer. Gate blocks along the columns are ordered
/// input, forget, candidate, output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmLayer {
    /// `input_dim x 4H`
    pub w_input: Array2<f64>,
    /// `H x 4H`
    pub w_hidden: Array2<f64>,
    /// `1 x 4H`
    pub bias: Array2<f64>,
}

impl LstmLayer {
    pub fn hidden_dim(&self) -> usize {
        self.w_hidden.nrows()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    /// `symbols x char_embedding_dim`
    pub char_embedding: Array2<f64>,
    /// `2 x hidden_dims[0]`, one row per gender.
    pub gender_embedding: Array2<f64>,
    pub layers: Vec<LstmLayer>,
    /// `hidden_dims.last() x labels`
    pub output_weight: Array2<f64>,
    /// `1 x labels`
    pub output_bias: Array2<f64>,
}

impl Parameters {
    fn init(config: &ModelConfig, symbols: usize, labels: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let dist = Uniform::new_inclusive(-INIT_RANGE, INIT_RANGE);
        let mut uniform = |rows: usize, cols: usize| {
            Array2::from_shape_simple_fn((rows, cols), || dist.sample(&mut rng))
        };
        let char_embedding = uniform(symbols, config.char_embedding_dim);
        let gender_embedding = uniform(Gender::ALL.len(), config.gender_embedding_dim);
        let mut input_dim = config.char_embedding_dim;
        let mut layers = Vec::with_capacity(config.hidden_dims.len());
        for &h in &config.hidden_dims {
            let w_input = uniform(input_dim, 4 * h);
            let w_hidden = uniform(h, 4 * h);
            let mut bias = uniform(1, 4 * h);
            bias.slice_mut(s![.., h..2 * h]).fill(FORGET_BIAS);
            layers.push(LstmLayer {
                w_input,
                w_hidden,
                bias,
            });
            input_dim = h;
        }
        let output_weight = uniform(input_dim, labels);
        let output_bias = uniform(1, labels);
        Parameters {
            char_embedding,
            gender_embedding,
            layers,
            output_weight,
            output_bias,
        }
    }

    pub fn zeros_like(&self) -> Self {
        let z = |a: &Array2<f64>| Array2::zeros(a.raw_dim());
        Parameters {
            char_embedding: z(&self.char_embedding),
            gender_embedding: z(&self.gender_embedding),
            layers: self
                .layers
                .iter()
                .map(|l| LstmLayer {
                    w_input: z(&l.w_input),
                    w_hidden: z(&l.w_hidden),
                    bias: z(&l.bias),
                })
                .collect(),
            output_weight: z(&self.output_weight),
            output_bias: z(&self.output_bias),
        }
    }

    /// All tensors with stable names, in a fixed order.
    pub fn tensors(&self) -> Vec<(String, &Array2<f64>)> {
        let mut out = vec![
            ("char_embedding".to_string(), &self.char_embedding),
            ("gender_embedding".to_string(), &self.gender_embedding),
        ];
        for (i, l) in self.layers.iter().enumerate() {
            out.push((format!("lstm{i}.w_input"), &l.w_input));
            out.push((format!("lstm{i}.w_hidden"), &l.w_hidden));
            out.push((format!("lstm{i}.bias"), &l.bias));
        }
        out.push(("output.weight".to_string(), &self.output_weight));
        out.push(("output.bias".to_string(), &self.output_bias));
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<(String, &mut Array2<f64>)> {
        let mut out = vec![
            ("char_embedding".to_string(), &mut self.char_embedding),
            ("gender_embedding".to_string(), &mut self.gender_embedding),
        ];
        for (i, l) in self.layers.iter_mut().enumerate() {
            out.push((format!("lstm{i}.w_input"), &mut l.w_input));
            out.push((format!("lstm{i}.w_hidden"), &mut l.w_hidden));
            out.push((format!("lstm{i}.bias"), &mut l.bias));
        }
        out.push(("output.weight".to_string(), &mut self.output_weight));
        out.push(("output.bias".to_string(), &mut self.output_bias));
        out
    }

    fn check_shapes(&self, config: &ModelConfig, symbols: usize, labels: usize) -> Result<()> {
        let mismatch = |what: &str, got: (usize, usize), want: (usize, usize)| {
            Err(NeuralError::ShapeMismatch(format!(
                "{what}: {got:?}, expected {want:?}"
            )))
        };
        let dim = |a: &Array2<f64>| (a.nrows(), a.ncols());
        if dim(&self.char_embedding) != (symbols, config.char_embedding_dim) {
            return mismatch(
                "char_embedding",
                dim(&self.char_embedding),
                (symbols, config.char_embedding_dim),
            );
        }
        if dim(&self.gender_embedding) != (2, config.gender_embedding_dim) {
            return mismatch(
                "gender_embedding",
                dim(&self.gender_embedding),
                (2, config.gender_embedding_dim),
            );
        }
        if self.layers.len() != config.hidden_dims.len() {
            return Err(NeuralError::ShapeMismatch(format!(
                "{} layers, expected {}",
                self.layers.len(),
                config.hidden_dims.len()
            )));
        }
        let mut input_dim = config.char_embedding_dim;
        for (l, &h) in self.layers.iter().zip(&config.hidden_dims) {
            if dim(&l.w_input) != (input_dim, 4 * h) {
                return mismatch("w_input", dim(&l.w_input), (input_dim, 4 * h));
            }
            if dim(&l.w_hidden) != (h, 4 * h) {
                return mismatch("w_hidden", dim(&l.w_hidden), (h, 4 * h));
            }
            if dim(&l.bias) != (1, 4 * h) {
                return mismatch("bias", dim(&l.bias), (1, 4 * h));
            }
            input_dim = h;
        }
        if dim(&self.output_weight) != (input_dim, labels) {
            return mismatch(
                "output.weight",
                dim(&self.output_weight),
                (input_dim, labels),
            );
        }
        if dim(&self.output_bias) != (1, labels) {
            return mismatch("output.bias", dim(&self.output_bias), (1, labels));
        }
        Ok(())
    }
}

/// Sequences padded at the end to a common length.
pub(crate) struct PaddedBatch {
    /// `tokens[t][b]`
    tokens: Vec<Vec<usize>>,
    /// `T x B`, 1.0 at real positions and 0.0 at padding.
    mask: Array2<f64>,
    genders: Vec<usize>,
}

impl PaddedBatch {
    pub(crate) fn new(items: &[&Encoded], min_len: usize) -> Result<Self> {
        let len = items
            .iter()
            .map(|e| e.tokens.len())
            .max()
            .unwrap_or(0)
            .max(min_len);
        if items.iter().any(|e| e.tokens.is_empty()) {
            return Err(NeuralError::ShapeMismatch("empty input sequence".into()));
        }
        let mut tokens = vec![vec![Vocabulary::PAD; items.len()]; len];
        let mut mask = Array2::zeros((len, items.len()));
        for (b, e) in items.iter().enumerate() {
            for (t, &tok) in e.tokens.iter().enumerate() {
                tokens[t][b] = tok;
                mask[[t, b]] = 1.0;
            }
        }
        Ok(PaddedBatch {
            tokens,
            mask,
            genders: items.iter().map(|e| e.gender).collect(),
        })
    }

    fn size(&self) -> usize {
        self.genders.len()
    }

    fn steps(&self) -> usize {
        self.tokens.len()
    }

    /// Mask for step `t` as a `B x 1` column.
    fn mask_column(&self, t: usize) -> Array2<f64> {
        self.mask.row(t).to_owned().insert_axis(Axis(1))
    }
}

struct StepCache {
    x: Array2<f64>,
    h_prev: Array2<f64>,
    c_prev: Array2<f64>,
    i: Array2<f64>,
    f: Array2<f64>,
    g: Array2<f64>,
    o: Array2<f64>,
    tanh_c: Array2<f64>,
}

struct ForwardPass {
    probs: Array2<f64>,
    final_hidden: Array2<f64>,
    /// `steps[layer][t]`, only kept when gradients are needed.
    steps: Vec<Vec<StepCache>>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn gather_rows(table: &Array2<f64>, rows: &[usize]) -> Array2<f64> {
    table.select(Axis(0), rows)
}

fn softmax_rows(logits: &Array2<f64>) -> Array2<f64> {
    let mut out = logits.clone();
    for mut row in out.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
    out
}

fn forward_pass(params: &Parameters, batch: &PaddedBatch, keep: bool) -> ForwardPass {
    let b = batch.size();
    let mut inputs: Vec<Array2<f64>> = batch
        .tokens
        .iter()
        .map(|row| gather_rows(&params.char_embedding, row))
        .collect();
    let masks: Vec<Array2<f64>> = (0..batch.steps()).map(|t| batch.mask_column(t)).collect();
    let mut steps = Vec::new();
    let mut last = Array2::zeros((b, 0));
    for (l, layer) in params.layers.iter().enumerate() {
        let hd = layer.hidden_dim();
        let mut h = if l == 0 {
            gather_rows(&params.gender_embedding, &batch.genders)
        } else {
            Array2::zeros((b, hd))
        };
        let mut c = Array2::<f64>::zeros((b, hd));
        let mut outputs = Vec::with_capacity(inputs.len());
        let mut cache = Vec::new();
        for (x, m) in inputs.into_iter().zip(&masks) {
            let z = x.dot(&layer.w_input) + h.dot(&layer.w_hidden) + &layer.bias;
            let i = z.slice(s![.., 0..hd]).mapv(sigmoid);
            let f = z.slice(s![.., hd..2 * hd]).mapv(sigmoid);
            let g = z.slice(s![.., 2 * hd..3 * hd]).mapv(f64::tanh);
            let o = z.slice(s![.., 3 * hd..4 * hd]).mapv(sigmoid);
            let c_new = &f * &c + &i * &g;
            let tanh_c = c_new.mapv(f64::tanh);
            let h_new = &o * &tanh_c;
            let keep_m = m.mapv(|v| 1.0 - v);
            let h_next = &h_new * m + &h * &keep_m;
            let c_next = &c_new * m + &c * &keep_m;
            if keep {
                cache.push(StepCache {
                    x,
                    h_prev: h,
                    c_prev: c,
                    i,
                    f,
                    g,
                    o,
                    tanh_c,
                });
            }
            outputs.push(h_next.clone());
            h = h_next;
            c = c_next;
        }
        steps.push(cache);
        last = h;
        inputs = outputs;
    }
    let logits = last.dot(&params.output_weight) + &params.output_bias;
    ForwardPass {
        probs: softmax_rows(&logits),
        final_hidden: last,
        steps,
    }
}

/// Gradient of the mean natural-log cross-entropy over the batch.
fn backward_pass(
    params: &Parameters,
    batch: &PaddedBatch,
    pass: &ForwardPass,
    targets: &[usize],
) -> Parameters {
    let b = batch.size();
    let t_len = batch.steps();
    let mut grads = params.zeros_like();

    let mut dlogits = pass.probs.clone();
    for (row, &target) in targets.iter().enumerate() {
        dlogits[[row, target]] -= 1.0;
    }
    dlogits /= b as f64;
    grads.output_weight = pass.final_hidden.t().dot(&dlogits);
    grads.output_bias = dlogits.sum_axis(Axis(0)).insert_axis(Axis(0));

    let top = params
        .layers
        .last()
        .expect("at least one layer")
        .hidden_dim();
    let mut dh_above: Vec<Array2<f64>> = vec![Array2::zeros((b, top)); t_len];
    dh_above[t_len - 1] = dlogits.dot(&params.output_weight.t());

    for l in (0..params.layers.len()).rev() {
        let layer = &params.layers[l];
        let hd = layer.hidden_dim();
        let mut dh_carry = Array2::<f64>::zeros((b, hd));
        let mut dc_carry = Array2::<f64>::zeros((b, hd));
        let mut dx = vec![Array2::<f64>::zeros((0, 0)); t_len];
        let grad_layer = &mut grads.layers[l];
        for t in (0..t_len).rev() {
            let st = &pass.steps[l][t];
            let m = batch.mask_column(t);
            let keep_m = m.mapv(|v| 1.0 - v);
            let dh = &dh_carry + &dh_above[t];
            let dh_new = &dh * &m;
            let dtanh = st.tanh_c.mapv(|v| 1.0 - v * v);
            let dc_new = &dc_carry * &m + &dh_new * &st.o * &dtanh;
            let d_o = &dh_new * &st.tanh_c;
            let d_i = &dc_new * &st.g;
            let d_g = &dc_new * &st.i;
            let d_f = &dc_new * &st.c_prev;
            dc_carry = &dc_new * &st.f + &dc_carry * &keep_m;

            let dz_i = d_i * &st.i.mapv(|v| v * (1.0 - v));
            let dz_f = d_f * &st.f.mapv(|v| v * (1.0 - v));
            let dz_g = d_g * &st.g.mapv(|v| 1.0 - v * v);
            let dz_o = d_o * &st.o.mapv(|v| v * (1.0 - v));
            let dz = concatenate(
                Axis(1),
                &[dz_i.view(), dz_f.view(), dz_g.view(), dz_o.view()],
            )
            .expect("gate blocks share the batch dimension");

            grad_layer.w_input += &st.x.t().dot(&dz);
            grad_layer.w_hidden += &st.h_prev.t().dot(&dz);
            grad_layer.bias += &dz.sum_axis(Axis(0)).insert_axis(Axis(0));
            dx[t] = dz.dot(&layer.w_input.t());
            dh_carry = dz.dot(&layer.w_hidden.t()) + &dh * &keep_m;
        }
        if l == 0 {
            for (row, &g) in batch.genders.iter().enumerate() {
                let mut target = grads.gender_embedding.row_mut(g);
                target += &dh_carry.row(row);
            }
            for (t, d) in dx.iter().enumerate() {
                for (row, &tok) in batch.tokens[t].iter().enumerate() {
                    if batch.mask[[t, row]] > 0.0 {
                        let mut target = grads.char_embedding.row_mut(tok);
                        target += &d.row(row);
                    }
                }
            }
        } else {
            dh_above = dx;
        }
    }
    grads
}

/// Surprisal of `target` under `predicted`, in bits.
pub fn loss_bits(predicted: &CategoricalDistribution, target: usize) -> f64 {
    -predicted.probabilities()[target].log2()
}

/// A trained or trainable classifier with its vocabulary and optimizer state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub config: ModelConfig,
    pub vocabulary: Vocabulary,
    pub include_etymology: bool,
    pub parameters: Parameters,
    pub optimizer: AdamState,
    pub epochs_trained: u64,
}

impl ClassifierModel {
    pub fn new(
        config: ModelConfig,
        vocabulary: Vocabulary,
        include_etymology: bool,
    ) -> Result<Self> {
        config.validate()?;
        if vocabulary.label_count() == 0 {
            return Err(NeuralError::InvalidConfig("empty label space".into()));
        }
        let parameters =
            Parameters::init(&config, vocabulary.symbol_count(), vocabulary.label_count());
        let optimizer = AdamState::new(&parameters);
        Ok(ClassifierModel {
            config,
            vocabulary,
            include_etymology,
            parameters,
            optimizer,
            epochs_trained: 0,
        })
    }

    /// Fresh model whose vocabulary is built from `train`.
    pub fn for_training(
        config: &ModelConfig,
        train: &InstanceSet,
        include_etymology: bool,
    ) -> Result<Self> {
        let vocab = Vocabulary::build(&train.instances, &train.label_space);
        Self::new(config.clone(), vocab, include_etymology)
    }

    pub fn encode(&self, instance: &Instance) -> Encoded {
        self.vocabulary.encode(instance, self.include_etymology)
    }

    fn check(&self) -> Result<()> {
        self.parameters.check_shapes(
            &self.config,
            self.vocabulary.symbol_count(),
            self.vocabulary.label_count(),
        )
    }

    /// Distribution over labels for one encoded form.
    pub fn forward(&self, encoded: &Encoded) -> Result<CategoricalDistribution> {
        self.check()?;
        let probs = self.forward_batch(&[encoded], 0)?;
        let row = probs.row(0).to_vec();
        CategoricalDistribution::new(self.vocabulary.labels().to_vec(), row)
            .map_err(|e| NeuralError::ShapeMismatch(e.to_string()))
    }

    /// Label probabilities for a batch, padded to at least `min_len` steps.
    pub fn forward_batch(&self, items: &[&Encoded], min_len: usize) -> Result<Array2<f64>> {
        if items.iter().any(|e| e.gender >= 2) {
            return Err(NeuralError::ShapeMismatch(
                "gender index out of range".into(),
            ));
        }
        if items
            .iter()
            .flat_map(|e| &e.tokens)
            .any(|&t| t >= self.vocabulary.symbol_count())
        {
            return Err(NeuralError::ShapeMismatch(
                "symbol index out of range".into(),
            ));
        }
        let batch = PaddedBatch::new(items, min_len)?;
        Ok(forward_pass(&self.parameters, &batch, false).probs)
    }

    /// Label probabilities for every instance, in order.
    pub fn predict(&self, instances: &[Instance]) -> Result<Vec<Vec<f64>>> {
        self.check()?;
        let encoded: Vec<Encoded> = instances.iter().map(|i| self.encode(i)).collect();
        let mut out = Vec::with_capacity(encoded.len());
        for chunk in encoded.chunks(PREDICT_CHUNK) {
            let refs: Vec<&Encoded> = chunk.iter().collect();
            let probs = self.forward_batch(&refs, 0)?;
            out.extend(probs.rows().into_iter().map(|r| r.to_vec()));
        }
        Ok(out)
    }

    /// Mean natural-log loss and its gradient over a batch.
    pub fn loss_and_gradients(
        &self,
        items: &[&Encoded],
        targets: &[usize],
    ) -> Result<(f64, Parameters)> {
        let batch = PaddedBatch::new(items, 0)?;
        let pass = forward_pass(&self.parameters, &batch, true);
        let loss = mean_nats(pass.probs.view(), targets);
        Ok((
            loss,
            backward_pass(&self.parameters, &batch, &pass, targets),
        ))
    }

    /// Mean natural-log loss over a batch, without gradients.
    pub fn loss_nats(&self, items: &[&Encoded], targets: &[usize]) -> Result<f64> {
        let probs = self.forward_batch(items, 0)?;
        Ok(mean_nats(probs.view(), targets))
    }

    fn targets(&self, instances: &InstanceSet) -> Result<Vec<usize>> {
        instances
            .instances
            .iter()
            .map(|i| {
                self.vocabulary
                    .label_index(&i.label)
                    .ok_or_else(|| NeuralError::UnknownLabel(i.label.clone()))
            })
            .collect()
    }

    /// One shuffled pass of minibatch Adam over `instances`. Returns the mean
    /// training loss in bits, measured on each batch before its update.
    pub fn train_epoch(&mut self, instances: &InstanceSet) -> Result<f64> {
        self.check()?;
        let targets = self.targets(instances)?;
        let encoded: Vec<Encoded> = instances.instances.iter().map(|i| self.encode(i)).collect();
        self.train_epoch_encoded(&encoded, &targets)
    }

    pub(crate) fn train_epoch_encoded(
        &mut self,
        encoded: &[Encoded],
        targets: &[usize],
    ) -> Result<f64> {
        if encoded.is_empty() {
            return Ok(0.0);
        }
        let mut order: Vec<usize> = (0..encoded.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.config.seed, self.epochs_trained));
        order.shuffle(&mut rng);

        let mut total_nats = 0.0;
        for chunk in order.chunks(self.config.batch_size) {
            let items: Vec<&Encoded> = chunk.iter().map(|&i| &encoded[i]).collect();
            let batch_targets: Vec<usize> = chunk.iter().map(|&i| targets[i]).collect();
            let (loss, grads) = self.loss_and_gradients(&items, &batch_targets)?;
            if !loss.is_finite()
                || grads
                    .tensors()
                    .iter()
                    .any(|(_, g)| g.iter().any(|v| !v.is_finite()))
            {
                return Err(NeuralError::NonFiniteLoss {
                    step: self.optimizer.step,
                });
            }
            total_nats += loss * chunk.len() as f64;
            self.optimizer
                .update(&mut self.parameters, &grads, self.config.learning_rate);
        }
        self.epochs_trained += 1;
        Ok(total_nats / encoded.len() as f64 / std::f64::consts::LN_2)
    }

    /// Trains for `config.epochs` epochs; returns the per-epoch training loss.
    pub fn fit(&mut self, instances: &InstanceSet) -> Result<Vec<f64>> {
        self.check()?;
        let targets = self.targets(instances)?;
        let encoded: Vec<Encoded> = instances.instances.iter().map(|i| self.encode(i)).collect();
        (0..self.config.epochs)
            .map(|_| self.train_epoch_encoded(&encoded, &targets))
            .collect()
    }

    /// Mean held-out surprisal in bits.
    pub fn evaluate_bits(&self, instances: &InstanceSet) -> Result<f64> {
        let targets = self.targets(instances)?;
        let probs = self.predict(&instances.instances)?;
        let total: f64 = probs.iter().zip(&targets).map(|(p, &t)| -p[t].log2()).sum();
        Ok(total / instances.len().max(1) as f64)
    }

    /// Reorders labels: new label `j` is old label `order[j]`.
    pub fn permute_labels(&self, order: &[usize]) -> Self {
        let mut out = self.clone();
        out.vocabulary = self.vocabulary.permute_labels(order);
        out.parameters.output_weight = self.parameters.output_weight.select(Axis(1), order);
        out.parameters.output_bias = self.parameters.output_bias.select(Axis(1), order);
        out.optimizer = AdamState::new(&out.parameters);
        out
    }

    pub fn save_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer(out, self)?;
        Ok(())
    }

    pub fn load_json<R: Read>(input: R) -> Result<Self> {
        let model: ClassifierModel = serde_json::from_reader(input)?;
        model.config.validate()?;
        model.check()?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.save_json(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::load_json(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

fn mean_nats(probs: ArrayView2<f64>, targets: &[usize]) -> f64 {
    let total: f64 = targets
        .iter()
        .enumerate()
        .map(|(row, &t)| -probs[[row, t]].ln())
        .sum();
    total / targets.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{Etymology, LexemeId, Task};

    fn config(hidden: &[usize]) -> ModelConfig {
        ModelConfig {
            char_embedding_dim: 4,
            gender_embedding_dim: hidden[0],
            hidden_dims: hidden.to_vec(),
            epochs: 1,
            learning_rate: 0.01,
            batch_size: 4,
            seed: 11,
        }
    }

    fn inst(form: &str, gender: Gender, label: &str) -> Instance {
        Instance {
            lexeme: LexemeId(form.into()),
            form_symbols: form.chars().collect(),
            gender,
            etymology: Etymology::NonSemitic,
            label: label.into(),
        }
    }

    fn toy() -> InstanceSet {
        InstanceSet::new(
            Task::Allomorph,
            vec![
                inst("karta", Gender::Feminine, "-i"),
                inst("rixa", Gender::Feminine, "-iet"),
                inst("kbir", Gender::Masculine, "CCVVC"),
                inst("sid", Gender::Masculine, "-ien"),
            ],
        )
    }

    #[test]
    fn zero_output_projection_gives_uniform() {
        let set = toy();
        let mut model = ClassifierModel::for_training(&config(&[5]), &set, false).unwrap();
        model.parameters.output_weight.fill(0.0);
        model.parameters.output_bias.fill(0.0);
        let dist = model.forward(&model.encode(&set.instances[0])).unwrap();
        assert!(dist
            .probabilities()
            .iter()
            .all(|&p| (p - 0.25).abs() < 1e-15));
    }

    #[test]
    fn outputs_are_normalized_and_interior() {
        let set = toy();
        let model = ClassifierModel::for_training(&config(&[6, 3]), &set, true).unwrap();
        for p in model.predict(&set.instances).unwrap() {
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-6);
            assert!(p.iter().all(|&v| v > 0.0 && v < 1.0));
        }
    }

    #[test]
    fn label_permutation_permutes_output() {
        let set = toy();
        let model = ClassifierModel::for_training(&config(&[5]), &set, false).unwrap();
        let order = [2, 0, 3, 1];
        let permuted = model.permute_labels(&order);
        let a = model.predict(&set.instances).unwrap();
        let b = permuted.predict(&set.instances).unwrap();
        for (pa, pb) in a.iter().zip(&b) {
            for (j, &old) in order.iter().enumerate() {
                assert!((pb[j] - pa[old]).abs() < 1e-12);
            }
        }
        assert_eq!(
            permuted.vocabulary.labels()[0],
            model.vocabulary.labels()[2]
        );
    }

    #[test]
    fn loss_examples() {
        let half = CategoricalDistribution::from_probabilities(vec![0.5, 0.5]).unwrap();
        assert_eq!(loss_bits(&half, 0), 1.0);
        let sure = CategoricalDistribution::from_probabilities(vec![1.0 - 1e-12, 1e-12]).unwrap();
        assert!(loss_bits(&sure, 0) < 1e-9);
        let u13 = CategoricalDistribution::from_probabilities(vec![1.0 / 13.0; 13]).unwrap();
        assert!((loss_bits(&u13, 5) - 13f64.log2()).abs() < 1e-12);
        assert!((13f64.log2() - 3.700).abs() < 1e-3);
    }

    #[test]
    fn padding_does_not_change_predictions() {
        let set = toy();
        let model = ClassifierModel::for_training(&config(&[5, 4]), &set, true).unwrap();
        let enc: Vec<Encoded> = set.instances.iter().map(|i| model.encode(i)).collect();
        let refs: Vec<&Encoded> = enc.iter().collect();
        let tight = model.forward_batch(&refs, 0).unwrap();
        let padded = model.forward_batch(&refs, 12).unwrap();
        for (a, b) in tight.iter().zip(padded.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
        for (row, e) in enc.iter().enumerate() {
            let alone = model.forward(e).unwrap();
            for (j, &p) in alone.probabilities().iter().enumerate() {
                assert!((p - tight[[row, j]]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_empty_sequence_and_bad_indices() {
        let set = toy();
        let model = ClassifierModel::for_training(&config(&[3]), &set, false).unwrap();
        let empty = Encoded {
            tokens: vec![],
            gender: 0,
        };
        assert!(matches!(
            model.forward(&empty),
            Err(NeuralError::ShapeMismatch(_))
        ));
        let bad = Encoded {
            tokens: vec![999],
            gender: 0,
        };
        assert!(model.forward(&bad).is_err());
    }

    #[test]
    fn zero_learning_rate_leaves_parameters_and_reports_eval_loss() {
        let set = toy();
        let mut cfg = config(&[4]);
        cfg.learning_rate = 0.0;
        let mut model = ClassifierModel::for_training(&cfg, &set, false).unwrap();
        let before = model.parameters.clone();
        let train_loss = model.train_epoch(&set).unwrap();
        assert_eq!(model.parameters, before);
        let eval = model.evaluate_bits(&set).unwrap();
        assert!((train_loss - eval).abs() < 1e-12);
    }

    #[test]
    fn memorizes_a_single_instance() {
        let set = InstanceSet {
            task: Task::Allomorph,
            instances: vec![inst("karta", Gender::Feminine, "-i")],
            label_space: vec!["-i".into(), "-iet".into(), "-s".into()],
        };
        let mut cfg = config(&[8]);
        cfg.epochs = 200;
        let mut model = ClassifierModel::for_training(&cfg, &set, false).unwrap();
        let losses = model.fit(&set).unwrap();
        assert!(*losses.last().unwrap() < 0.01, "{:?}", losses.last());
    }

    #[test]
    fn contradictory_labels_floor_at_one_bit() {
        let set = InstanceSet::new(
            Task::Allomorph,
            vec![
                inst("karta", Gender::Feminine, "-i"),
                inst("karta", Gender::Feminine, "-iet"),
            ],
        );
        let mut cfg = config(&[8]);
        cfg.epochs = 150;
        cfg.batch_size = 2;
        let mut model = ClassifierModel::for_training(&cfg, &set, false).unwrap();
        let losses = model.fit(&set).unwrap();
        assert!(losses.iter().all(|&l| l >= 1.0 - 1e-12));
        assert!(*losses.last().unwrap() < 1.01);
    }

    #[test]
    fn training_is_deterministic() {
        let set = toy();
        let mut cfg = config(&[5]);
        cfg.epochs = 5;
        let mut a = ClassifierModel::for_training(&cfg, &set, false).unwrap();
        let mut b = ClassifierModel::for_training(&cfg, &set, false).unwrap();
        a.fit(&set).unwrap();
        b.fit(&set).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn diverging_learning_rate_is_reported() {
        let set = toy();
        let mut cfg = config(&[5]);
        cfg.learning_rate = 1e300;
        cfg.epochs = 5;
        let mut model = ClassifierModel::for_training(&cfg, &set, false).unwrap();
        assert!(matches!(
            model.fit(&set),
            Err(NeuralError::NonFiniteLoss { .. })
        ));
    }

    #[test]
    fn checkpoint_round_trips_bitwise() {
        let set = toy();
        let mut cfg = config(&[5, 3]);
        cfg.epochs = 3;
        let mut model = ClassifierModel::for_training(&cfg, &set, true).unwrap();
        model.fit(&set).unwrap();
        let mut buf = Vec::new();
        model.save_json(&mut buf).unwrap();
        let back = ClassifierModel::load_json(buf.as_slice()).unwrap();
        assert_eq!(back, model);
        let bits = |m: &ClassifierModel| -> Vec<u64> {
            m.parameters
                .tensors()
                .iter()
                .flat_map(|(_, t)| t.iter().map(|v| v.to_bits()).collect::<Vec<_>>())
                .collect()
        };
        assert_eq!(bits(&back), bits(&model));
    }
}
