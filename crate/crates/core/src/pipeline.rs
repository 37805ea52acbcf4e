//! Modular word-pronunciation systems.
//!
//! A [`SystemSpec`] is an ordered list of modules, each one task learned
//! over a window of some base stream annotated with the outputs of earlier
//! modules. Training follows one of three regimes (see [`TrainingRegime`]);
//! at prediction time every module reads its predecessors' predictions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gain::compute_feature_order;
use crate::instance::InstanceBase;
use crate::lexicon::{
    derive_class, split_gs_class, window_features, window_instances_over, AlignedEntry,
    AnnotatedWord, Annotation, BaseStream, StreamSpec, TaskKind, WINDOW,
};
use crate::symbol::Symbol;
use crate::tree::{build_tree, IgTree};
use crate::tree_io::{parse_tree, serialize_tree};

pub const SYSTEM_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub task: TaskKind,
    pub input: StreamSpec,
}

impl ModuleSpec {
    pub fn new(
        task: TaskKind,
        base: BaseStream,
        annotations: impl IntoIterator<Item = Annotation>,
    ) -> Self {
        ModuleSpec {
            task,
            input: StreamSpec::new(base, annotations),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub name: String,
    pub modules: Vec<ModuleSpec>,
}

impl SystemSpec {
    /// Morphology, graphemic parsing, grapheme-phoneme conversion,
    /// syllabification, stress.
    pub fn magys() -> Self {
        use Annotation::*;
        use BaseStream::*;
        SystemSpec {
            name: "MAGYS".into(),
            modules: vec![
                ModuleSpec::new(TaskKind::M, Letters, []),
                ModuleSpec::new(TaskKind::A, Letters, [Morph]),
                ModuleSpec::new(TaskKind::G, Letters, [Morph, Grapheme]),
                ModuleSpec::new(TaskKind::Y, Phonemes, [Morph]),
                ModuleSpec::new(TaskKind::SOnPhonemes, Phonemes, [Morph, Syllable]),
            ],
        }
    }

    pub fn mgs() -> Self {
        use Annotation::*;
        use BaseStream::*;
        SystemSpec {
            name: "MGS".into(),
            modules: vec![
                ModuleSpec::new(TaskKind::M, Letters, []),
                ModuleSpec::new(TaskKind::G, Letters, [Morph]),
                ModuleSpec::new(TaskKind::SOnPhonemes, Phonemes, [Morph]),
            ],
        }
    }

    pub fn gs() -> Self {
        SystemSpec {
            name: "GS".into(),
            modules: vec![ModuleSpec::new(TaskKind::GS, BaseStream::Letters, [])],
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().replace('-', "").as_str() {
            "MAGYS" => Some(Self::magys()),
            "MGS" => Some(Self::mgs()),
            "GS" => Some(Self::gs()),
            _ => None,
        }
    }

    pub fn presets() -> Vec<Self> {
        vec![Self::magys(), Self::mgs(), Self::gs()]
    }

    /// Checks that every module reads only streams produced by strictly
    /// earlier modules and that the system ends up with phonemes and stress.
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSystem(format!("{}: {msg}", self.name)));
        if self.modules.is_empty() {
            return invalid("no modules".into());
        }
        let mut seen: Vec<TaskKind> = Vec::new();
        let produces_phonemes = |t: &TaskKind| matches!(t, TaskKind::G | TaskKind::GS);
        let produces_stress = |t: &TaskKind| t.is_stress() || *t == TaskKind::GS;
        for (k, m) in self.modules.iter().enumerate() {
            if seen.contains(&m.task) {
                return invalid(format!("task {} appears twice", m.task));
            }
            if m.input.base == BaseStream::Phonemes && !seen.iter().any(produces_phonemes) {
                return invalid(format!(
                    "module {k} ({}) reads phonemes before any G module",
                    m.task
                ));
            }
            for a in &m.input.annotations {
                if !seen.contains(&a.source_task()) {
                    return invalid(format!(
                        "module {k} ({}) reads {a:?} boundaries before any {} module",
                        m.task,
                        a.source_task()
                    ));
                }
            }
            seen.push(m.task);
        }
        if !seen.iter().any(produces_phonemes) || !seen.iter().any(produces_stress) {
            return invalid("modules must jointly produce phonemes and stress".into());
        }
        Ok(())
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.name)?;
        for (i, m) in self.modules.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}({})", m.task, m.input)?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrainingRegime {
    /// Every task on its own base stream, no annotations, gold throughout.
    Isolated,
    /// Modular inputs, gold-valued for training and for module testing.
    Ideal,
    /// Each module trained on its trained predecessors' predictions.
    #[serde(alias = "actual")]
    Adaptive,
}

impl TrainingRegime {
    pub const ALL: [TrainingRegime; 3] = [
        TrainingRegime::Isolated,
        TrainingRegime::Ideal,
        TrainingRegime::Adaptive,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TrainingRegime::Isolated => "isolated",
            TrainingRegime::Ideal => "ideal",
            TrainingRegime::Adaptive => "adaptive",
        }
    }

    /// Whether module tests read predecessor predictions rather than gold.
    pub fn cascades_at_test(&self) -> bool {
        *self == TrainingRegime::Adaptive
    }
}

impl fmt::Display for TrainingRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TrainingRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "isolated" => Ok(TrainingRegime::Isolated),
            "ideal" => Ok(TrainingRegime::Ideal),
            "adaptive" | "actual" => Ok(TrainingRegime::Adaptive),
            _ => Err(Error::InvalidSystem(format!("unknown regime {s:?}"))),
        }
    }
}

/// Where adaptive training takes predecessor outputs from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredecessorOutputs {
    /// Predictions of the modules just trained.
    Trained,
    /// Gold classes, as if every predecessor were perfect.
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModule {
    pub task: TaskKind,
    /// The stream spec the tree was actually trained on.
    pub input: StreamSpec,
    pub tree: IgTree,
}

impl TrainedModule {
    /// Classifies every position of `word`.
    pub fn predict(&self, word: &AnnotatedWord) -> Result<Vec<Symbol>> {
        window_features(word, &self.input)?
            .iter()
            .map(|x| self.tree.classify(x))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedSystem {
    pub spec: SystemSpec,
    pub regime: TrainingRegime,
    pub modules: Vec<TrainedModule>,
}

fn effective_input(module: &ModuleSpec, regime: TrainingRegime) -> StreamSpec {
    match regime {
        TrainingRegime::Isolated => StreamSpec::plain(module.task.isolated_base()),
        _ => module.input.clone(),
    }
}

pub(crate) fn learn(instances: InstanceBase) -> Result<IgTree> {
    let order = compute_feature_order(&instances)?;
    build_tree(&instances, &order)
}

pub fn train_system(
    spec: &SystemSpec,
    entries: &[AlignedEntry],
    regime: TrainingRegime,
) -> Result<TrainedSystem> {
    train_system_with(spec, entries, regime, PredecessorOutputs::Trained)
}

/// Like [`train_system`], choosing where adaptive training reads
/// predecessor outputs from. `outputs` is ignored by the gold regimes.
pub fn train_system_with(
    spec: &SystemSpec,
    entries: &[AlignedEntry],
    regime: TrainingRegime,
    outputs: PredecessorOutputs,
) -> Result<TrainedSystem> {
    spec.validate()?;
    if entries.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let gold: Vec<AnnotatedWord> = entries.iter().map(AnnotatedWord::gold).collect();
    let mut working: Vec<AnnotatedWord> = entries
        .iter()
        .map(|e| AnnotatedWord::from_letters(e.letters().to_vec()))
        .collect();
    let mut modules = Vec::with_capacity(spec.modules.len());
    for module in &spec.modules {
        let input = effective_input(module, regime);
        let words = if regime == TrainingRegime::Adaptive {
            &working
        } else {
            &gold
        };
        let mut base = InstanceBase::new(WINDOW.arity());
        for (word, entry) in words.iter().zip(entries) {
            for inst in window_instances_over(word, entry, module.task, &input)? {
                base.add(inst.features, inst.class)?;
            }
        }
        let trained = TrainedModule {
            task: module.task,
            input,
            tree: learn(base)?,
        };
        if regime == TrainingRegime::Adaptive {
            for (word, entry) in working.iter_mut().zip(entries) {
                let classes = match outputs {
                    PredecessorOutputs::Trained => trained.predict(word)?,
                    PredecessorOutputs::Oracle => (0..entry.len())
                        .map(|i| derive_class(entry, i, module.task))
                        .collect(),
                };
                propagate_stream(word, module.task, &classes)?;
            }
        }
        modules.push(trained);
    }
    Ok(TrainedSystem {
        spec: spec.clone(),
        regime,
        modules,
    })
}

/// Writes one module's per-position output into the word's streams.
pub fn propagate_stream(
    word: &mut AnnotatedWord,
    task: TaskKind,
    classes: &[Symbol],
) -> Result<()> {
    if classes.len() != word.len() {
        return Err(Error::LengthMismatch {
            expected: word.len(),
            actual: classes.len(),
        });
    }
    let stress_of = |c: &Symbol| match c.as_str() {
        "1" => 1,
        "2" => 2,
        _ => 0,
    };
    match task {
        TaskKind::M | TaskKind::A | TaskKind::Y => {
            let flags = classes.iter().map(|c| c.as_str() == "1").collect();
            let a = task.produces_annotation().expect("boundary task");
            *word.annotation_mut(a) = Some(flags);
        }
        TaskKind::G => word.phonemes = Some(classes.to_vec()),
        TaskKind::SOnLetters | TaskKind::SOnPhonemes => {
            word.stress = Some(classes.iter().map(stress_of).collect())
        }
        TaskKind::GS => {
            let (phonemes, stress) = classes
                .iter()
                .map(|&c| split_gs_class(c).unwrap_or((c, 0)))
                .unzip();
            word.phonemes = Some(phonemes);
            word.stress = Some(stress);
        }
    }
    Ok(())
}

/// Every module's output for one word plus the assembled transcription.
#[derive(Debug, Clone, PartialEq)]
pub struct WordTrace {
    pub module_outputs: Vec<Vec<Symbol>>,
    pub phonemes: Vec<Symbol>,
    pub stress: Vec<u8>,
}

impl TrainedSystem {
    /// Runs all modules on one word. With `gold` given, each module reads
    /// gold input streams; otherwise modules read predecessor predictions.
    pub fn trace(&self, letters: &[Symbol], gold: Option<&AlignedEntry>) -> Result<WordTrace> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        let gold_word = match gold {
            Some(entry) if entry.letters() != letters => {
                return Err(Error::InvalidEntry(
                    "gold entry does not match the letters".into(),
                ))
            }
            Some(entry) => Some(AnnotatedWord::gold(entry)),
            None => None,
        };
        let mut produced = AnnotatedWord::from_letters(letters.to_vec());
        let mut module_outputs = Vec::with_capacity(self.modules.len());
        for module in &self.modules {
            let classes = module.predict(gold_word.as_ref().unwrap_or(&produced))?;
            propagate_stream(&mut produced, module.task, &classes)?;
            module_outputs.push(classes);
        }
        let phonemes = produced
            .phonemes
            .ok_or_else(|| Error::InvalidSystem("no phoneme output".into()))?;
        let stress = produced
            .stress
            .ok_or_else(|| Error::InvalidSystem("no stress output".into()))?;
        Ok(WordTrace {
            module_outputs,
            phonemes,
            stress,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let artifact = SystemArtifact {
            format_version: SYSTEM_FORMAT_VERSION,
            spec: self.spec.clone(),
            regime: self.regime,
            modules: self
                .modules
                .iter()
                .map(|m| ModuleArtifact {
                    task: m.task,
                    input: m.input.clone(),
                    tree: serialize_tree(&m.tree),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&artifact)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let artifact: SystemArtifact = serde_json::from_str(text)?;
        if artifact.format_version != SYSTEM_FORMAT_VERSION {
            return Err(Error::InvalidSystem(format!(
                "unsupported format version {}",
                artifact.format_version
            )));
        }
        artifact.spec.validate()?;
        if artifact.modules.len() != artifact.spec.modules.len() {
            return Err(Error::InvalidSystem(
                "module count differs from spec".into(),
            ));
        }
        let modules = artifact
            .modules
            .into_iter()
            .map(|m| {
                Ok(TrainedModule {
                    task: m.task,
                    input: m.input,
                    tree: parse_tree(&m.tree)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TrainedSystem {
            spec: artifact.spec,
            regime: artifact.regime,
            modules,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct SystemArtifact {
    format_version: u32,
    spec: SystemSpec,
    regime: TrainingRegime,
    modules: Vec<ModuleArtifact>,
}

#[derive(Serialize, Deserialize)]
struct ModuleArtifact {
    task: TaskKind,
    input: StreamSpec,
    tree: String,
}

/// Transcribes one word as (phoneme, stress) pairs, one per letter.
pub fn predict_word(system: &TrainedSystem, letters: &[Symbol]) -> Result<Vec<(Symbol, u8)>> {
    let trace = system.trace(letters, None)?;
    Ok(trace.phonemes.into_iter().zip(trace.stress).collect())
}
