//! End-to-end orchestration: candidate pairs, rule sieve, one reasoning
//! pass, classifier sieve, causal extraction and post-editing. Also the
//! training-data preparation workflow and model bundles.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::allen::{
    check_document, deduce, fallback_chain, graph_from_document, predict_deducible, MappingProfile, ProfileError,
    RegressionCoefficients,
};
use crate::annotation::AnnotatedDocument;
use crate::causal::{add_clinks, extract_clinks, post_edit_tlinks, CausalClassifier};
use crate::features::{raw_features, FeatureEncoder, FeatureError, FeatureSet};
use crate::labels::TLinkLabel;
use crate::lexicon::Lexicons;
use crate::linear::{Classifier, Hyperparameters, LinearError, LinearModel};
use crate::pairs::{candidate_pairs, EntityPair, PairKind, Task};
use crate::rules::apply_rule_sieve;
use crate::timeml::{Document, IdAllocator, Provenance, TLink};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error("training the {model} model: {source}")]
    Training { model: &'static str, source: LinearError },
    #[error("bundle {}: {message}", .path.display())]
    Bundle { path: PathBuf, message: String },
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

/// When the reasoner runs between the rule sieve and the classifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReasoningMode {
    Always,
    Never,
    /// Only when the predicted number of deducible links is below the
    /// deduction threshold.
    OnDemand,
}

/// Pipeline settings. The TOML keys are the field names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Mapping profiles: built-in names or profile file paths. The first is
    /// the starting profile; its fallbacks and the rest follow.
    pub profiles: Vec<String>,
    pub reasoning: ReasoningMode,
    pub deduction_threshold: f64,
    pub coefficients: RegressionCoefficients,
    /// Minimum classifier margin for a CLINK to seed propagation.
    pub clink_threshold: f64,
    pub simplify_labels: bool,
    /// Train the CLINK model with the temporal label as a feature.
    pub clink_tlink_feature: bool,
    pub emit_tt: bool,
    pub emit_deduced: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            profiles: vec!["strict".into()],
            reasoning: ReasoningMode::OnDemand,
            deduction_threshold: 100.0,
            coefficients: RegressionCoefficients::default(),
            clink_threshold: 1.75,
            simplify_labels: true,
            clink_tlink_feature: true,
            emit_tt: false,
            emit_deduced: true,
        }
    }
}

impl PipelineConfig {
    pub fn parse(text: &str) -> Result<PipelineConfig, PipelineError> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<PipelineConfig, PipelineError> {
        let text = fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })?;
        PipelineConfig::parse(&text).map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.deduction_threshold.is_nan() || self.deduction_threshold < 0.0 {
            return Err(PipelineError::Config("deduction_threshold must be >= 0".into()));
        }
        let c = &self.coefficients;
        if ![c.intercept, c.tlinks, c.events, c.smcc, self.clink_threshold].iter().all(|v| v.is_finite()) {
            return Err(PipelineError::Config("coefficients and clink_threshold must be finite".into()));
        }
        if self.profiles.is_empty() {
            return Err(PipelineError::Config("at least one profile is required".into()));
        }
        Ok(())
    }

    /// The ordered profile chain. Relative file paths resolve against
    /// `base`.
    pub fn resolve_profiles(&self, base: Option<&Path>) -> Result<Vec<MappingProfile>, PipelineError> {
        let mut listed = Vec::new();
        for p in &self.profiles {
            listed.push(match MappingProfile::builtin(p) {
                Ok(b) => b,
                Err(_) => {
                    let path = match base {
                        Some(b) if Path::new(p).is_relative() => b.join(p),
                        _ => PathBuf::from(p),
                    };
                    MappingProfile::load(&path)?
                }
            });
        }
        let mut chain = fallback_chain(&listed[0], &listed[1..])?;
        for p in &listed[1..] {
            if !chain.iter().any(|q| q.name == p.name) {
                chain.push(p.clone());
            }
        }
        Ok(chain)
    }
}

/// The four trained models.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelBundle {
    pub ed: Classifier,
    pub et: Classifier,
    pub ee: Classifier,
    pub clink: CausalClassifier,
    pub simplify_labels: bool,
    pub seed: u64,
}

/// First line of a bundle manifest.
pub const BUNDLE_FORMAT: &str = "chronorel-bundle v1";

#[derive(Serialize, Deserialize)]
struct Manifest {
    format: String,
    seed: u64,
    simplify_labels: bool,
    clink_tlink_feature: bool,
    /// Model name to `[features file, model file]`.
    models: BTreeMap<String, [String; 2]>,
}

const MODEL_NAMES: [&str; 4] = ["ed", "et", "ee", "clink"];

impl ModelBundle {
    fn model(&self, name: &str) -> &Classifier {
        match name {
            "ed" => &self.ed,
            "et" => &self.et,
            "ee" => &self.ee,
            _ => &self.clink.classifier,
        }
    }

    pub fn classifier_for(&self, kind: PairKind) -> Option<&Classifier> {
        match kind {
            PairKind::ED => Some(&self.ed),
            PairKind::ET => Some(&self.et),
            PairKind::EE => Some(&self.ee),
            PairKind::TT => None,
        }
    }

    /// Writes `manifest.toml` plus a feature list and a model file per
    /// model into `dir`.
    pub fn save(&self, dir: &Path) -> Result<(), PipelineError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| PipelineError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let mut models = BTreeMap::new();
        for name in MODEL_NAMES {
            let c = self.model(name);
            let feats = format!("{name}.features");
            let model = format!("{name}.model");
            let mut names = c.encoder.names().join("\n");
            names.push('\n');
            fs::write(dir.join(&feats), names).map_err(io(&dir.join(&feats)))?;
            fs::write(dir.join(&model), c.model.to_text()).map_err(io(&dir.join(&model)))?;
            models.insert(name.to_string(), [feats, model]);
        }
        let manifest = Manifest {
            format: BUNDLE_FORMAT.into(),
            seed: self.seed,
            simplify_labels: self.simplify_labels,
            clink_tlink_feature: self.clink.with_tlink,
            models,
        };
        let path = dir.join("manifest.toml");
        fs::write(&path, toml::to_string(&manifest).expect("manifest serializes")).map_err(io(&path))
    }

    pub fn load(dir: &Path) -> Result<ModelBundle, PipelineError> {
        let bad = |message: String| PipelineError::Bundle { path: dir.to_path_buf(), message };
        let mpath = dir.join("manifest.toml");
        let text = fs::read_to_string(&mpath).map_err(|source| PipelineError::Io { path: mpath.clone(), source })?;
        let m: Manifest = toml::from_str(&text).map_err(|e| bad(e.to_string()))?;
        if m.format != BUNDLE_FORMAT {
            return Err(bad(format!("unsupported format `{}`", m.format)));
        }
        let mut loaded = HashMap::new();
        for name in MODEL_NAMES {
            let [feats, model] = m.models.get(name).ok_or_else(|| bad(format!("manifest lacks model `{name}`")))?;
            let fpath = dir.join(feats);
            let names = fs::read_to_string(&fpath).map_err(|source| PipelineError::Io { path: fpath, source })?;
            let encoder =
                FeatureEncoder::from_names(names.lines().filter(|l| !l.is_empty()).map(str::to_string).collect());
            let model = LinearModel::load(&dir.join(model)).map_err(|e| bad(e.to_string()))?;
            if model.dim != encoder.dim() {
                return Err(bad(format!("model `{name}` has dimension {} but {} features", model.dim, encoder.dim())));
            }
            loaded.insert(name, Classifier { encoder, model });
        }
        let mut take = |n| loaded.remove(n).expect("loaded");
        Ok(ModelBundle {
            ed: take("ed"),
            et: take("et"),
            ee: take("ee"),
            clink: CausalClassifier { classifier: take("clink"), with_tlink: m.clink_tlink_feature },
            simplify_labels: m.simplify_labels,
            seed: m.seed,
        })
    }
}

/// Pipeline output for one document.
#[derive(Clone, Debug, PartialEq)]
pub struct Annotation {
    pub doc: Document,
    /// The rule-sieve output was inconsistent under every profile.
    pub inconsistent: bool,
    /// Whether the reasoner ran.
    pub reasoned: bool,
    /// Profile under which the rule-sieve output closed.
    pub profile_used: Option<String>,
}

fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Runs the full pipeline over one document. Links already present in the
/// input are discarded, so the output depends only on its entities.
pub fn annotate(
    ad: &AnnotatedDocument,
    models: &ModelBundle,
    lex: &Lexicons,
    cfg: &PipelineConfig,
    profiles: &[MappingProfile],
) -> Result<Annotation, PipelineError> {
    let mut doc = ad.doc.clone();
    doc.tlinks.clear();
    doc.clinks.clear();
    let mut labeled: HashSet<(String, String)> = HashSet::new();

    let pairs = candidate_pairs(ad, Task::Temporal);
    let mut ids = IdAllocator::new(&doc, "l");
    for r in apply_rule_sieve(ad, &pairs, lex) {
        labeled.insert(key(&r.pair.e1, &r.pair.e2));
        doc.tlinks.push(TLink::new(ids.next_id(), &r.pair.e1, &r.pair.e2, r.label, Provenance::Rule));
    }

    let mut out = Annotation { doc, inconsistent: false, reasoned: false, profile_used: None };
    let run_reasoner = match cfg.reasoning {
        ReasoningMode::Always => true,
        ReasoningMode::Never => false,
        ReasoningMode::OnDemand => {
            let g = graph_from_document(&out.doc, &profiles[0]);
            predict_deducible(out.doc.tlinks.len(), out.doc.events.len(), g.smcc(), &cfg.coefficients)
                < cfg.deduction_threshold
        }
    };
    if run_reasoner && !out.doc.tlinks.is_empty() {
        out.reasoned = true;
        let report = check_document(&out.doc, profiles);
        match report.profile_used.as_deref().and_then(|n| profiles.iter().find(|p| p.name == n)) {
            Some(p) => {
                let deduced = deduce(&out.doc, p).expect("document closed under this profile");
                for l in deduced {
                    labeled.insert(key(&l.source, &l.target));
                    out.doc.tlinks.push(l);
                }
                out.profile_used = report.profile_used.clone();
            }
            None => out.inconsistent = true,
        }
    }

    let mut ids = IdAllocator::new(&out.doc, "l");
    let mut classified = Vec::new();
    for p in &pairs {
        if labeled.contains(&key(&p.e1, &p.e2)) {
            continue;
        }
        let Some(c) = models.classifier_for(p.kind) else { continue };
        let raw = raw_features(p, ad, lex, FeatureSet::Temporal)?;
        let Ok(label) = c.predict_raw(&raw).label.parse::<TLinkLabel>() else { continue };
        labeled.insert(key(&p.e1, &p.e2));
        classified.push(TLink::new(ids.next_id(), &p.e1, &p.e2, label, Provenance::Classifier));
    }
    out.doc.tlinks.extend(classified);

    let mut view = ad.clone();
    view.doc = out.doc.clone();
    let decisions = extract_clinks(&view, lex, Some(&models.clink))?;
    add_clinks(&mut out.doc, &decisions);
    post_edit_tlinks(&mut out.doc);

    let causal: HashSet<(String, String)> = out.doc.clinks.iter().map(|c| key(&c.source, &c.target)).collect();
    let keep: Vec<bool> = out
        .doc
        .tlinks
        .iter()
        .map(|l| {
            let tt = out.doc.timex(&l.source).is_some() && out.doc.timex(&l.target).is_some();
            let hidden_deduction = l.provenance == Provenance::Reasoner
                && !cfg.emit_deduced
                && !causal.contains(&key(&l.source, &l.target));
            !(tt && !cfg.emit_tt) && !hidden_deduction
        })
        .collect();
    let mut it = keep.into_iter();
    out.doc.tlinks.retain(|_| it.next().unwrap_or(true));
    Ok(out)
}

/// Counts from [`prepare_training`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PrepareReport {
    pub input: usize,
    /// Documents inconsistent under every profile.
    pub discarded: Vec<String>,
    /// Documents whose predicted deduction count reached the threshold.
    pub above_threshold: Vec<String>,
    /// Documents that went through deduction.
    pub deduced_docs: Vec<String>,
    pub added_links: usize,
    pub kept: usize,
}

impl std::fmt::Display for PrepareReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "input={}", self.input)?;
        writeln!(f, "discarded={}", self.discarded.len())?;
        for d in &self.discarded {
            writeln!(f, "  discarded {d}")?;
        }
        writeln!(f, "above_threshold={}", self.above_threshold.len())?;
        writeln!(f, "deduced_docs={}", self.deduced_docs.len())?;
        writeln!(f, "added_links={}", self.added_links)?;
        write!(f, "kept={}", self.kept)
    }
}

/// Drops documents inconsistent under every profile, then runs deduction on
/// each remaining document whose predicted deduction count is below
/// `threshold`, appending the deduced links.
pub fn prepare_training(
    corpus: &[Document],
    profiles: &[MappingProfile],
    threshold: f64,
    coeffs: &RegressionCoefficients,
) -> (Vec<Document>, PrepareReport) {
    let mut report = PrepareReport { input: corpus.len(), ..Default::default() };
    let mut out = Vec::new();
    for doc in corpus {
        let check = check_document(doc, profiles);
        let Some(profile) = check.profile_used.as_deref().and_then(|n| profiles.iter().find(|p| p.name == n)) else {
            report.discarded.push(doc.doc_id.clone());
            continue;
        };
        let mut doc = doc.clone();
        let smcc = graph_from_document(&doc, profile).smcc();
        if predict_deducible(doc.tlinks.len(), doc.events.len(), smcc, coeffs) < threshold {
            let deduced = deduce(&doc, profile).expect("document closed under this profile");
            report.added_links += deduced.len();
            report.deduced_docs.push(doc.doc_id.clone());
            doc.tlinks.extend(deduced);
        } else {
            report.above_threshold.push(doc.doc_id.clone());
        }
        out.push(doc);
    }
    report.kept = out.len();
    (out, report)
}

/// Per-model training-set sizes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainReport {
    pub instances: BTreeMap<String, usize>,
    pub labels: BTreeMap<String, Vec<String>>,
    pub epochs: BTreeMap<String, Vec<usize>>,
}

/// Training instances for the temporal model of `kind`: every candidate
/// pair of that kind with a gold TLINK, labeled as seen from `e1`.
pub fn temporal_training_data(
    docs: &[AnnotatedDocument],
    lex: &Lexicons,
    kind: PairKind,
    simplify: bool,
) -> Result<Vec<(Vec<String>, String)>, FeatureError> {
    let mut out = Vec::new();
    for ad in docs {
        for p in candidate_pairs(ad, Task::Temporal) {
            if p.kind != kind {
                continue;
            }
            let Some(label) = gold_label(&ad.doc, &p) else { continue };
            let label = if simplify { label.simplified() } else { label };
            out.push((raw_features(&p, ad, lex, FeatureSet::Temporal)?, label.as_str().to_string()));
        }
    }
    Ok(out)
}

fn gold_label(doc: &Document, p: &EntityPair) -> Option<TLinkLabel> {
    doc.tlinks.iter().find_map(|l| l.label_between(&p.e1, &p.e2))
}

/// Trains the E-D, E-T, E-E and CLINK models.
pub fn train_pipeline(
    corpus: &[AnnotatedDocument],
    lex: &Lexicons,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<(ModelBundle, TrainReport), PipelineError> {
    let hp = Hyperparameters { seed, ..Hyperparameters::default() };
    let mut report = TrainReport::default();
    let mut fit = |name: &'static str, data: Vec<(Vec<String>, String)>| -> Result<Classifier, PipelineError> {
        report.instances.insert(name.to_string(), data.len());
        let (c, log) = Classifier::fit(&data, hp).map_err(|source| PipelineError::Training { model: name, source })?;
        report.labels.insert(name.to_string(), c.model.labels.clone());
        report.epochs.insert(name.to_string(), log.epochs);
        Ok(c)
    };
    let ed = fit("E-D", temporal_training_data(corpus, lex, PairKind::ED, cfg.simplify_labels)?)?;
    let et = fit("E-T", temporal_training_data(corpus, lex, PairKind::ET, cfg.simplify_labels)?)?;
    let ee = fit("E-E", temporal_training_data(corpus, lex, PairKind::EE, cfg.simplify_labels)?)?;
    let clink_data = crate::causal::clink_training_data(corpus, lex, cfg.clink_tlink_feature)?;
    let clink = fit("CLINK", clink_data)?;
    Ok((
        ModelBundle {
            ed,
            et,
            ee,
            clink: CausalClassifier { classifier: clink, with_tlink: cfg.clink_tlink_feature },
            simplify_labels: cfg.simplify_labels,
            seed,
        },
        report,
    ))
}
