//! End-to-end estimation for one task: prune, build instance sets, compute
//! plug-in measures, cross-validate every model variant and assemble.

use super::{
    assemble, EvaluatedModel, MeasureReport, PluginMeasures, Provenance, ReportError, ReportInputs,
    Result,
};
use crate::experiment::{make_folds, run_cv_nested, run_cv_with_plan, SearchSpace};
use crate::infotheory::{conditional_entropy, mutual_information, JointTable, MeasureValue};
use crate::lexicon::{build_instances, prune_classes, InstanceSet, Lexicon, Task};
use crate::neural::{derive_seed, ModelConfig};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How each model variant gets its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    /// One config for every fold; its seed is replaced per variant.
    Fixed(ModelConfig),
    /// Nested random search inside every outer fold.
    Search(SearchSpace),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSettings {
    pub task: Task,
    pub seed: u64,
    pub k: usize,
    pub min_count: usize,
    pub model: ModelChoice,
}

impl Default for PipelineSettings {
    fn default() -> Self {
        PipelineSettings {
            task: Task::Allomorph,
            seed: 0,
            k: 10,
            min_count: 20,
            model: ModelChoice::Fixed(ModelConfig::default()),
        }
    }
}

/// Instance sets derived from one lexicon.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub dataset_hash: String,
    pub pruned: Lexicon,
    pub classes: InstanceSet,
    pub etymology: InstanceSet,
}

pub fn prepare(lexicon: &Lexicon, task: Task, min_count: usize) -> Result<Prepared> {
    if task == Task::Etymology {
        return Err(ReportError::InvalidTask(task));
    }
    let pruned = prune_classes(lexicon, min_count);
    Ok(Prepared {
        dataset_hash: lexicon.content_hash(),
        classes: build_instances(&pruned, task),
        etymology: build_instances(&pruned, Task::Etymology),
        pruned,
    })
}

pub fn plugin_measures(prepared: &Prepared) -> Result<PluginMeasures> {
    let joint = JointTable::from_instances(&prepared.classes);
    let etym = JointTable::from_instances(&prepared.etymology);
    Ok(PluginMeasures {
        dataset_hash: prepared.dataset_hash.clone(),
        h_c_g: conditional_entropy(&joint, "C", &["G"])?,
        h_c_eg: conditional_entropy(&joint, "C", &["E", "G"])?,
        mi_ce_g: mutual_information(&joint, "C", "E", &["G"])?,
        h_e_g: conditional_entropy(&etym, "E", &["G"])?,
    })
}

/// Cross-validated predictions for the three model variants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub form: EvaluatedModel,
    pub form_etymology: EvaluatedModel,
    pub etymology: EvaluatedModel,
}

fn estimate_one(
    set: &InstanceSet,
    settings: &PipelineSettings,
    include_etymology: bool,
    stream: u64,
    dataset_hash: &str,
) -> Result<EvaluatedModel> {
    let (config, eval) = match &settings.model {
        ModelChoice::Fixed(base) => {
            let plan = make_folds(set, settings.k, settings.seed)?;
            let config = base.with_seed(derive_seed(settings.seed, stream));
            let eval = run_cv_with_plan(set, &config, &plan, include_etymology)?;
            (Some(config), eval)
        }
        ModelChoice::Search(space) => {
            let space = SearchSpace {
                seed: settings.seed,
                ..space.clone()
            };
            (
                None,
                run_cv_nested(set, &space, settings.k, include_etymology)?.eval,
            )
        }
    };
    Ok(EvaluatedModel {
        dataset_hash: dataset_hash.to_string(),
        config,
        eval,
    })
}

pub fn estimate_all(prepared: &Prepared, settings: &PipelineSettings) -> Result<Estimates> {
    let hash = &prepared.dataset_hash;
    Ok(Estimates {
        form: estimate_one(&prepared.classes, settings, false, 0, hash)?,
        form_etymology: estimate_one(&prepared.classes, settings, true, 1, hash)?,
        etymology: estimate_one(&prepared.etymology, settings, false, 2, hash)?,
    })
}

/// Runs the whole pipeline for `settings.task` on an unpruned lexicon.
pub fn run_report(lexicon: &Lexicon, settings: &PipelineSettings) -> Result<MeasureReport> {
    let prepared = prepare(lexicon, settings.task, settings.min_count)?;
    let plugin = plugin_measures(&prepared)?;
    let estimates = estimate_all(&prepared, settings)?;
    let populations = BTreeMap::from([
        ("input_pairs".to_string(), lexicon.len()),
        ("input_lexemes".to_string(), lexicon.lexeme_count()),
        ("pruned_pairs".to_string(), prepared.pruned.len()),
        ("pruned_lexemes".to_string(), prepared.pruned.lexeme_count()),
        (
            format!("{}_instances", settings.task),
            prepared.classes.len(),
        ),
        ("etymology_instances".to_string(), prepared.etymology.len()),
        ("classes".to_string(), prepared.classes.label_space.len()),
    ]);
    let mut report = assemble(ReportInputs {
        task: settings.task,
        plugin: &plugin,
        form: &estimates.form,
        form_etymology: &estimates.form_etymology,
        etymology: &estimates.etymology,
        class_instances: &prepared.classes,
        etymology_instances: &prepared.etymology,
        provenance: Provenance {
            dataset_hash: prepared.dataset_hash.clone(),
            settings: settings.clone(),
            populations,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })?;
    if settings.task == Task::Type {
        // same measure over one instance per (lexeme, plural) pair
        let mut pairs = build_instances(&prepared.pruned, Task::Allomorph);
        for (inst, entry) in pairs.instances.iter_mut().zip(prepared.pruned.entries()) {
            inst.label = entry.concat_type.to_string();
        }
        let pairs = InstanceSet::new(Task::Type, pairs.instances);
        let h = conditional_entropy(&JointTable::from_instances(&pairs), "C", &["G"])?;
        report
            .measures
            .push(MeasureValue::bits("H(C|G) over plural pairs", h));
    }
    Ok(report)
}
