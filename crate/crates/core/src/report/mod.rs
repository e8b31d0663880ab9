//! Result tables: the NMI battery, accuracies, confusion matrix and
//! per-class PMI for one task, plus their serializations.

mod pipeline;

pub use pipeline::{
    estimate_all, plugin_measures, prepare, run_report, Estimates, ModelChoice, PipelineSettings,
    Prepared,
};

use crate::experiment::{EvalResult, ExperimentError};
use crate::infotheory::{per_class_pmi, ClassGivenGender, InfoError, MeasureValue, Unit};
use crate::lexicon::{InstanceSet, LexiconError, Task};
use crate::neural::ModelConfig;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("inputs come from different datasets: {0} vs {1}")]
    InconsistentProvenance(String, String),
    #[error("unsupported format `{0}` (expected json, csv or text)")]
    UnsupportedFormat(String),
    #[error("reports are built for the type or allomorph task, not {0}")]
    InvalidTask(Task),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ReportError>;

/// Plug-in quantities over the finite systems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PluginMeasures {
    pub dataset_hash: String,
    /// `H(C|G)` over the class instance set.
    pub h_c_g: f64,
    pub h_c_eg: f64,
    pub mi_ce_g: f64,
    /// `H(E|G)` over one instance per lexeme.
    pub h_e_g: f64,
}

/// Cross-validated predictions of one model variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedModel {
    pub dataset_hash: String,
    /// Config used in every fold, absent when each fold searched its own.
    pub config: Option<ModelConfig>,
    pub eval: EvalResult,
}

pub struct ReportInputs<'a> {
    pub task: Task,
    pub plugin: &'a PluginMeasures,
    /// Predicts `C` from form and gender.
    pub form: &'a EvaluatedModel,
    /// Predicts `C` from form, etymology and gender.
    pub form_etymology: &'a EvaluatedModel,
    /// Predicts `E` from form and gender.
    pub etymology: &'a EvaluatedModel,
    pub class_instances: &'a InstanceSet,
    pub etymology_instances: &'a InstanceSet,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub dataset_hash: String,
    pub settings: PipelineSettings,
    /// Instance counts per population, keyed by population name.
    pub populations: BTreeMap<String, usize>,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassPmi {
    pub class: String,
    pub count: u64,
    /// Mean `-log2 p(c|g)` over the class's instances.
    pub surprisal_bits: f64,
    pub pmi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub task: Task,
    pub entropy_c_given_g: f64,
    pub nmi_cw_g: f64,
    pub nmi_ce_g: f64,
    pub nmi_cew_g: f64,
    pub nmi_ew_g: f64,
    /// Every raw entropy, cross-entropy and MI the NMIs are derived from.
    pub measures: Vec<MeasureValue>,
    pub accuracies: BTreeMap<String, f64>,
    pub baselines: BTreeMap<String, f64>,
    pub labels: Vec<String>,
    /// Confusion of the form+gender model, `confusion[true][predicted]`.
    pub confusion: Vec<Vec<u64>>,
    /// In increasing class frequency.
    pub pmi_per_class: Vec<ClassPmi>,
    pub provenance: Provenance,
}

fn majority(set: &InstanceSet) -> f64 {
    let max = set.label_counts().into_iter().max().unwrap_or(0);
    max as f64 / set.len().max(1) as f64
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(InfoError::ZeroNormalizer(name.to_string()).into())
    }
}

/// Combines plug-in and cross-entropy estimates into the NMI battery.
///
/// Model-based MI estimates are `H - CE`; negative values (a model worse
/// than the marginal) are kept raw in `measures` and clipped to zero before
/// normalization.
pub fn assemble(inputs: ReportInputs<'_>) -> Result<MeasureReport> {
    if !matches!(inputs.task, Task::Type | Task::Allomorph) {
        return Err(ReportError::InvalidTask(inputs.task));
    }
    let hash = &inputs.provenance.dataset_hash;
    for other in [
        &inputs.plugin.dataset_hash,
        &inputs.form.dataset_hash,
        &inputs.form_etymology.dataset_hash,
        &inputs.etymology.dataset_hash,
    ] {
        if other != hash {
            return Err(ReportError::InconsistentProvenance(
                hash.clone(),
                other.clone(),
            ));
        }
    }
    let p = inputs.plugin;
    let h_c_g = positive("H(C|G)", p.h_c_g)?;
    let h_e_g = positive("H(E|G)", p.h_e_g)?;

    let ce_cw = inputs.form.eval.cross_entropy_bits;
    let ce_cwe = inputs.form_etymology.eval.cross_entropy_bits;
    let ce_ew = inputs.etymology.eval.cross_entropy_bits;
    let mi_cw_raw = h_c_g - ce_cw;
    let mi_cw_e_raw = p.h_c_eg - ce_cwe;
    let mi_ew_raw = h_e_g - ce_ew;
    let (mi_cw, mi_cw_e, mi_ew) = (mi_cw_raw.max(0.0), mi_cw_e_raw.max(0.0), mi_ew_raw.max(0.0));

    let nmi_cw_g = mi_cw / h_c_g;
    let nmi_ce_g = p.mi_ce_g / h_c_g;
    let nmi_cew_g = nmi_cw_g - mi_cw_e / h_c_g;
    let nmi_ew_g = mi_ew / h_e_g;

    let bound = |name: &str, v: f64| MeasureValue {
        upper_bound: true,
        ..MeasureValue::bits(name, v)
    };
    let normalized = |name: &str, v: f64, by: &str| MeasureValue {
        name: name.to_string(),
        value: v,
        unit: Unit::Dimensionless,
        normalizer: Some(by.to_string()),
        upper_bound: false,
    };
    let measures = vec![
        MeasureValue::bits("H(C|G)", h_c_g),
        MeasureValue::bits("H(C|E,G)", p.h_c_eg),
        MeasureValue::bits("H(E|G)", h_e_g),
        MeasureValue::bits("MI(C;E|G)", p.mi_ce_g),
        bound("H(C|W,G)", ce_cw),
        bound("H(C|W,E,G)", ce_cwe),
        bound("H(E|W,G)", ce_ew),
        MeasureValue::bits("MI(C;W|G) raw", mi_cw_raw),
        MeasureValue::bits("MI(C;W|G)", mi_cw),
        MeasureValue::bits("MI(C;W|E,G) raw", mi_cw_e_raw),
        MeasureValue::bits("MI(C;W|E,G)", mi_cw_e),
        MeasureValue::bits("MI(C;E;W|G)", mi_cw - mi_cw_e),
        MeasureValue::bits("MI(E;W|G) raw", mi_ew_raw),
        MeasureValue::bits("MI(E;W|G)", mi_ew),
        normalized("NMI(C;W|G)", nmi_cw_g, "H(C|G)"),
        normalized("NMI(C;E|G)", nmi_ce_g, "H(C|G)"),
        normalized("NMI(C;E;W|G)", nmi_cew_g, "H(C|G)"),
        normalized("NMI(E;W|G)", nmi_ew_g, "H(E|G)"),
    ];

    let accuracies = BTreeMap::from([
        ("MI(C;W|G)".to_string(), inputs.form.eval.accuracy),
        (
            "MI(C;E;W|G)".to_string(),
            inputs.form_etymology.eval.accuracy,
        ),
        ("MI(E;W|G)".to_string(), inputs.etymology.eval.accuracy),
    ]);
    let baselines = BTreeMap::from([
        (inputs.task.to_string(), majority(inputs.class_instances)),
        (
            Task::Etymology.to_string(),
            majority(inputs.etymology_instances),
        ),
    ]);

    let set = inputs.class_instances;
    let marginal = ClassGivenGender::from_instances(set);
    let pmi = per_class_pmi(set, &inputs.form.eval.per_instance_probs, &marginal)?;
    let counts = set.label_counts();
    let mut surprisal = vec![0.0; counts.len()];
    for (inst, label) in set.instances.iter().zip(set.label_indices()) {
        surprisal[label] -= marginal.probs[inst.gender.index()][label].log2();
    }
    let mut pmi_per_class: Vec<ClassPmi> = set
        .label_space
        .iter()
        .enumerate()
        .map(|(i, class)| ClassPmi {
            class: class.clone(),
            count: counts[i],
            surprisal_bits: surprisal[i] / counts[i].max(1) as f64,
            pmi: pmi[i],
        })
        .collect();
    pmi_per_class.sort_by(|a, b| a.count.cmp(&b.count).then_with(|| a.class.cmp(&b.class)));

    Ok(MeasureReport {
        task: inputs.task,
        entropy_c_given_g: h_c_g,
        nmi_cw_g,
        nmi_ce_g,
        nmi_cew_g,
        nmi_ew_g,
        measures,
        accuracies,
        baselines,
        labels: inputs.form.eval.labels.clone(),
        confusion: inputs.form.eval.confusion.clone(),
        pmi_per_class,
        provenance: inputs.provenance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" | "text-table" | "txt" => Ok(Format::Text),
            other => Err(ReportError::UnsupportedFormat(other.to_string())),
        }
    }
}

impl MeasureReport {
    pub fn measure(&self, name: &str) -> Option<&MeasureValue> {
        self.measures.iter().find(|m| m.name == name)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn confusion_csv(&self) -> String {
        let mut out = String::from("true\\predicted");
        for l in &self.labels {
            let _ = write!(out, ",{l}");
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.confusion) {
            out.push_str(l);
            for c in row {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        out
    }

    /// Figure data: one row per class in increasing frequency.
    pub fn pmi_csv(&self) -> String {
        let mut out = String::from("class,count,surprisal_bits,pmi\n");
        for c in &self.pmi_per_class {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                c.class, c.count, c.surprisal_bits, c.pmi
            );
        }
        out
    }
}

pub fn emit(report: &MeasureReport, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut out = String::from("name,value,unit,normalizer,upper_bound\n");
            for m in &report.measures {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    m.name,
                    m.value,
                    m.unit,
                    m.normalizer.as_deref().unwrap_or(""),
                    m.upper_bound
                );
            }
            Ok(out)
        }
        Format::Text => Ok(text_table(report)),
    }
}

fn text_table(r: &MeasureReport) -> String {
    let column = match r.task {
        Task::Type => "TYPE",
        _ => "ALLO.",
    };
    let mut out = String::new();
    let _ = writeln!(out, "{:<16}{:>8}", "", column);
    let rows = [
        ("H(C|G)", r.entropy_c_given_g),
        ("NMI(C;W|G)", r.nmi_cw_g),
        ("NMI(C;E|G)", r.nmi_ce_g),
        ("NMI(C;E;W|G)", r.nmi_cew_g),
        ("NMI(E;W|G)", r.nmi_ew_g),
    ];
    for (name, v) in rows {
        let _ = writeln!(out, "{name:<16}{v:>8.2}");
    }
    out.push('\n');
    let _ = writeln!(out, "{:<14}{:<14}{:>8}", "Target", "Model", "Accuracy");
    let target = match r.task {
        Task::Type => "Type (C)",
        _ => "Allomorph (C)",
    };
    let acc = |k: &str| r.accuracies.get(k).copied().unwrap_or(f64::NAN);
    let base = |k: &str| r.baselines.get(k).copied().unwrap_or(f64::NAN);
    let lines = [
        ("Etym. (E)", "MI(E;W|G)", acc("MI(E;W|G)")),
        ("", "Baseline", base("etymology")),
        (target, "MI(C;W|G)", acc("MI(C;W|G)")),
        ("", "MI(C;E;W|G)", acc("MI(C;E;W|G)")),
        ("", "Baseline", base(r.task.as_str())),
    ];
    for (t, m, v) in lines {
        let _ = writeln!(out, "{t:<14}{m:<14}{v:>8.2}");
    }
    out
}

/// Orderings expected within one report. Each entry is (description, holds).
pub fn ordering_checks(r: &MeasureReport) -> Vec<(String, bool)> {
    vec![
        (
            format!("{}: NMI(C;W|G) > NMI(C;E|G)", r.task),
            r.nmi_cw_g > r.nmi_ce_g,
        ),
        (
            format!("{}: NMI(C;E|G) > NMI(C;E;W|G)", r.task),
            r.nmi_ce_g > r.nmi_cew_g,
        ),
        (
            format!("{}: NMI(C;E;W|G) <= min(bipartite) + 0.02", r.task),
            r.nmi_cew_g <= r.nmi_cw_g.min(r.nmi_ce_g) + 0.02,
        ),
    ]
}

/// Allomorph-level NMIs should be at least `factor` times their type-level
/// counterparts.
pub fn cross_task_checks(
    allomorph: &MeasureReport,
    ty: &MeasureReport,
    factor: f64,
) -> Vec<(String, bool)> {
    [
        ("NMI(C;W|G)", allomorph.nmi_cw_g, ty.nmi_cw_g),
        ("NMI(C;E|G)", allomorph.nmi_ce_g, ty.nmi_ce_g),
        ("NMI(C;E;W|G)", allomorph.nmi_cew_g, ty.nmi_cew_g),
    ]
    .into_iter()
    .map(|(n, a, t)| (format!("allomorph {n} >= {factor} x type"), a >= factor * t))
    .collect()
}
