//! `chronorel` command-line tool.
//!
//! Exit status: 0 on success, 1 when a command reports findings (an
//! inconsistent document, unmatched evaluation files, unresolved questions),
//! 2 on usage, format and I/O errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use chronorel::allen::{check_document, deduce, fallback_chain, RegressionCoefficients};
use chronorel::causal::{add_clinks, extract_clinks, post_edit_tlinks, propagate_clinks, CorefPartition};
use chronorel::corpus::{load_corpus, load_file, write_document, write_sidecar, CorpusEntry};
use chronorel::eval::{clink_prf, dense_prf, parse_questions, qa_evaluate, stratified_folds, temporal_awareness};
use chronorel::pipeline::{prepare_training, train_pipeline, TrainReport};
use chronorel::synth::synthetic_corpus;
use chronorel::{
    annotate, serialize_timeml, AnnotatedDocument, Lexicons, MappingProfile, ModelBundle, PipelineConfig, ScoreReport,
};

/// Environment variable naming the default lexicon directory.
const LEXICON_ENV: &str = "CHRONOREL_LEXICON_DIR";

#[derive(Parser)]
#[command(name = "chronorel", version, about = "Temporal and causal relation extraction over TimeML")]
struct Cli {
    /// Lexicon directory; defaults to $CHRONOREL_LEXICON_DIR, then the bundled lexicons.
    #[arg(long, global = true, value_name = "DIR")]
    lexicons: Option<PathBuf>,
    /// Worker threads for document-level parallelism.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the E-D, E-T, E-E and CLINK models on an annotated corpus.
    Train(TrainArgs),
    /// Run the full pipeline over a corpus.
    Annotate(AnnotateArgs),
    /// Check a document's TLINKs for consistency or add deducible ones.
    Reason(ReasonArgs),
    /// Extract CLINKs and order causes before effects.
    Causal(CausalArgs),
    /// Score a system corpus against a reference corpus.
    Evaluate(EvaluateArgs),
    /// Answer yes/no temporal questions from TLINK closures.
    Qa(QaArgs),
    /// Print stratified document folds.
    Folds(FoldsArgs),
    /// Drop inconsistent documents and add deduced TLINKs to the rest.
    PrepareTraining(PrepareArgs),
    /// Write a synthetic annotated corpus.
    Synth(SynthArgs),
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long, value_name = "DIR")]
    corpus: PathBuf,
    #[arg(long, value_name = "BUNDLE")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Collapse rare TLINK labels before training.
    #[arg(long, overrides_with = "no_simplify_labels")]
    simplify_labels: bool,
    #[arg(long)]
    no_simplify_labels: bool,
    /// Train the CLINK model without the TLINK label feature.
    #[arg(long)]
    no_tlink_feature: bool,
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct AnnotateArgs {
    #[arg(long = "in", value_name = "DIR")]
    input: PathBuf,
    #[arg(long, value_name = "BUNDLE")]
    models: PathBuf,
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["check", "deduce"])))]
struct ReasonArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Built-in profile name or profile file.
    #[arg(long, default_value = "strict")]
    profile: String,
    #[arg(long)]
    check: bool,
    #[arg(long)]
    deduce: bool,
    /// Write the document with deduced links here instead of stdout.
    #[arg(long, value_name = "FILE", requires = "deduce")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CausalArgs {
    #[arg(long = "in", value_name = "DIR")]
    input: PathBuf,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Model bundle; without it only the verb rules run.
    #[arg(long, value_name = "BUNDLE")]
    models: Option<PathBuf>,
    /// Cross-document event coreference, one set per line as `doc:eiid` items.
    #[arg(long, value_name = "FILE")]
    coref: Option<PathBuf>,
    /// Minimum classifier margin for a CLINK to be propagated.
    #[arg(long, default_value_t = 1.75)]
    threshold: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Awareness,
    Clink,
    Dense,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long, value_name = "DIR")]
    sys: PathBuf,
    #[arg(long = "ref", value_name = "DIR")]
    reference: PathBuf,
    #[arg(long, value_enum, default_value = "awareness")]
    metric: Metric,
    /// Profile for the awareness metric.
    #[arg(long, default_value = "strict")]
    profile: String,
}

#[derive(Args)]
struct QaArgs {
    #[arg(long = "in", value_name = "DIR")]
    input: PathBuf,
    #[arg(long, value_name = "FILE")]
    questions: PathBuf,
    #[arg(long, default_value = "strict")]
    profile: String,
}

#[derive(Args)]
struct FoldsArgs {
    #[arg(long, value_name = "DIR")]
    corpus: PathBuf,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u16).range(2..))]
    k: u16,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PrepareArgs {
    #[arg(long, value_name = "DIR")]
    corpus: PathBuf,
    #[arg(long, default_value_t = 100.0)]
    threshold: f64,
    /// Regression coefficients as `tlinks,events,smcc,intercept`.
    #[arg(long, value_parser = RegressionCoefficients::parse_list, allow_hyphen_values = true)]
    coeffs: Option<RegressionCoefficients>,
    #[arg(long, default_value = "strict")]
    profile: String,
    /// Write the kept documents here.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    #[arg(long, default_value_t = 20)]
    docs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn lexicons(dir: Option<&Path>) -> Result<Lexicons> {
    let dir = dir.map(Path::to_path_buf).or_else(|| std::env::var_os(LEXICON_ENV).map(PathBuf::from));
    match dir {
        Some(d) if !d.is_dir() => bail!("lexicon directory {} does not exist", d.display()),
        Some(d) => Lexicons::load_dir(&d).with_context(|| format!("loading lexicons from {}", d.display())),
        None => Ok(Lexicons::bundled()),
    }
}

fn profile_chain(name: &str) -> Result<Vec<MappingProfile>> {
    let start = match MappingProfile::builtin(name) {
        Ok(p) => p,
        Err(_) if Path::new(name).is_file() => MappingProfile::load(Path::new(name))?,
        Err(e) => return Err(e.into()),
    };
    Ok(fallback_chain(&start, &[])?)
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    Ok(match path {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    })
}

fn annotated(entries: &[CorpusEntry]) -> Result<Vec<AnnotatedDocument>> {
    entries.par_iter().map(|e| e.annotated().map_err(Into::into)).collect()
}

/// Refuses to write into the directory being read.
fn distinct_output(input: &Path, out: &Path) -> Result<()> {
    let same = match (input.canonicalize(), out.canonicalize()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    if same {
        bail!("output directory {} is the input directory", out.display());
    }
    Ok(())
}

fn train(args: &TrainArgs, lex: &Lexicons) -> Result<u8> {
    let mut cfg = load_config(args.config.as_deref())?;
    if args.simplify_labels {
        cfg.simplify_labels = true;
    }
    if args.no_simplify_labels {
        cfg.simplify_labels = false;
    }
    if args.no_tlink_feature {
        cfg.clink_tlink_feature = false;
    }
    let corpus = annotated(&load_corpus(&args.corpus)?)?;
    let (bundle, report) = train_pipeline(&corpus, lex, &cfg, args.seed)?;
    bundle.save(&args.out)?;
    print_train_report(&report, corpus.len());
    Ok(0)
}

fn print_train_report(report: &TrainReport, docs: usize) {
    println!("documents={docs}");
    for (name, n) in &report.instances {
        let labels = report.labels.get(name).map(|l| l.join(",")).unwrap_or_default();
        println!("{name}: instances={n} labels={labels}");
    }
}

fn annotate_cmd(args: &AnnotateArgs, lex: &Lexicons) -> Result<u8> {
    let cfg = load_config(args.config.as_deref())?;
    distinct_output(&args.input, &args.out)?;
    let base = args.config.as_deref().and_then(Path::parent);
    let profiles = cfg.resolve_profiles(base)?;
    let models = ModelBundle::load(&args.models)?;
    let entries = load_corpus(&args.input)?;
    let docs = annotated(&entries)?;
    let results: Vec<_> =
        docs.par_iter().map(|ad| annotate(ad, &models, lex, &cfg, &profiles)).collect::<Result<_, _>>()?;
    let mut inconsistent = 0;
    for ((entry, ad), out) in entries.iter().zip(&docs).zip(&results) {
        let name = entry.file_name();
        write_document(&args.out, &name, &out.doc)?;
        write_sidecar(&args.out, &name, &ad.layer)?;
        inconsistent += usize::from(out.inconsistent);
        println!(
            "{name}: tlinks={} clinks={} reasoned={} profile={}{}",
            out.doc.tlinks.len(),
            out.doc.clinks.len(),
            out.reasoned,
            out.profile_used.as_deref().unwrap_or("-"),
            if out.inconsistent { " inconsistent" } else { "" }
        );
    }
    println!("documents={} inconsistent={inconsistent}", results.len());
    Ok(0)
}

fn reason(args: &ReasonArgs) -> Result<u8> {
    let chain = profile_chain(&args.profile)?;
    let entry = load_file(&args.input)?;
    let doc = &entry.doc;
    let report = check_document(doc, &chain);
    let Some(used) = report.profile_used.as_deref().and_then(|n| chain.iter().find(|p| p.name == n)) else {
        let c = report.culprit.as_ref();
        let triple = c.map(|t| format!("{} {} {}", t.0, t.1, t.2)).unwrap_or_else(|| "-".into());
        println!("{}: inconsistent under {}; culprit {triple}", args.input.display(), args.profile);
        return Ok(1);
    };
    if args.check {
        println!("{}: consistent under {}", args.input.display(), used.name);
        return Ok(0);
    }
    let deduced = deduce(doc, used)?;
    let mut out = doc.clone();
    let n = deduced.len();
    out.tlinks.extend(deduced);
    match &args.out {
        Some(path) => {
            fs::write(path, serialize_timeml(&out)).with_context(|| format!("writing {}", path.display()))?;
            println!("{}: {n} deduced links under {}", args.input.display(), used.name);
        }
        None => print!("{}", serialize_timeml(&out)),
    }
    Ok(0)
}

/// Reads coreference sets: one per line, whitespace-separated `doc:eiid`.
fn parse_coref(path: &Path) -> Result<CorefPartition> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut sets = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let set = line
            .split_whitespace()
            .map(|item| {
                item.split_once(':')
                    .map(|(d, e)| (d.to_string(), e.to_string()))
                    .ok_or_else(|| anyhow!("{}:{}: expected doc:eiid, got `{item}`", path.display(), i + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        sets.push(set);
    }
    Ok(sets)
}

fn causal(args: &CausalArgs, lex: &Lexicons) -> Result<u8> {
    distinct_output(&args.input, &args.out)?;
    let coref = args.coref.as_deref().map(parse_coref).transpose()?;
    let models = args.models.as_deref().map(ModelBundle::load).transpose()?;
    let entries = load_corpus(&args.input)?;
    let docs = annotated(&entries)?;
    let mut outs: Vec<_> = docs
        .par_iter()
        .map(|ad| -> Result<_> {
            let decisions = extract_clinks(ad, lex, models.as_ref().map(|m| &m.clink))?;
            let mut doc = ad.doc.clone();
            add_clinks(&mut doc, &decisions);
            Ok(doc)
        })
        .collect::<Result<_>>()?;
    if let Some(coref) = &coref {
        let added = propagate_clinks(&mut outs, coref, args.threshold);
        println!("propagated={}", added.iter().map(Vec::len).sum::<usize>());
    }
    for ((entry, ad), doc) in entries.iter().zip(&docs).zip(outs.iter_mut()) {
        post_edit_tlinks(doc);
        let name = entry.file_name();
        write_document(&args.out, &name, doc)?;
        write_sidecar(&args.out, &name, &ad.layer)?;
        println!("{name}: clinks={}", doc.clinks.len());
    }
    Ok(0)
}

fn evaluate(args: &EvaluateArgs) -> Result<u8> {
    let profile = MappingProfile::builtin(&args.profile).or_else(|e| {
        if Path::new(&args.profile).is_file() {
            MappingProfile::load(Path::new(&args.profile))
        } else {
            Err(e)
        }
    })?;
    let reference = load_corpus(&args.reference)?;
    let system: BTreeMap<String, CorpusEntry> =
        load_corpus(&args.sys)?.into_iter().map(|e| (e.file_name(), e)).collect();
    let mut missing = Vec::new();
    let mut pairs = Vec::new();
    for r in &reference {
        match system.get(&r.file_name()) {
            Some(s) => pairs.push((s, r)),
            None => missing.push(r.file_name()),
        }
    }
    let reports: Vec<ScoreReport> = pairs
        .par_iter()
        .map(|(s, r)| -> Result<ScoreReport> {
            let rep = match args.metric {
                Metric::Awareness => temporal_awareness(&s.doc, &r.doc, &profile),
                Metric::Clink => clink_prf(&s.doc, &r.doc),
                Metric::Dense => dense_prf(&s.doc, &r.doc),
            };
            rep.with_context(|| format!("scoring {}", s.path.display()))
        })
        .collect::<Result<_>>()?;
    for ((_, r), rep) in pairs.iter().zip(&reports) {
        println!("{}: {rep}", r.file_name());
    }
    for m in &missing {
        println!("{m}: missing from {}", args.sys.display());
    }
    println!("micro: {}", ScoreReport::micro(&reports));
    Ok(u8::from(!missing.is_empty()))
}

fn qa(args: &QaArgs) -> Result<u8> {
    let profile = MappingProfile::builtin(&args.profile)?;
    let text = fs::read_to_string(&args.questions).with_context(|| format!("reading {}", args.questions.display()))?;
    let questions = parse_questions(&text).with_context(|| format!("parsing {}", args.questions.display()))?;
    let docs: Vec<_> = load_corpus(&args.input)?.into_iter().map(|e| e.doc).collect();
    let rep = qa_evaluate(&docs, &questions, &profile);
    for &i in &rep.unresolved {
        let q = &questions[i];
        println!(
            "unresolved: question {} ({} {}-{} {} {}-{})",
            i + 1,
            q.doc_id,
            q.e1.start,
            q.e1.end,
            q.relation,
            q.e2.start,
            q.e2.end
        );
    }
    println!("{rep}");
    Ok(u8::from(!rep.unresolved.is_empty()))
}

fn folds(args: &FoldsArgs) -> Result<u8> {
    let entries = load_corpus(&args.corpus)?;
    let labels: Vec<bool> = entries.iter().map(|e| !e.doc.clinks.is_empty()).collect();
    let folds = stratified_folds(&labels, args.k as usize, args.seed)?;
    for (f, members) in folds.iter().enumerate() {
        let mut names: Vec<String> = members.iter().map(|&i| entries[i].file_name()).collect();
        names.sort();
        for n in names {
            println!("{f}\t{n}");
        }
    }
    Ok(0)
}

fn prepare(args: &PrepareArgs) -> Result<u8> {
    if args.threshold.is_nan() || args.threshold < 0.0 {
        bail!("--threshold must be a non-negative number");
    }
    if let Some(out) = &args.out {
        distinct_output(&args.corpus, out)?;
    }
    let chain = profile_chain(&args.profile)?;
    let coeffs = args.coeffs.unwrap_or_default();
    let entries = load_corpus(&args.corpus)?;
    let docs: Vec<_> = entries.iter().map(|e| e.doc.clone()).collect();
    let (kept, report) = prepare_training(&docs, &chain, args.threshold, &coeffs);
    println!("{report}");
    if let Some(out) = &args.out {
        for doc in &kept {
            let entry =
                entries.iter().find(|e| e.doc.doc_id == doc.doc_id).expect("kept documents come from the input");
            let name = entry.file_name();
            write_document(out, &name, doc)?;
            if let Some(layer) = &entry.layer {
                write_sidecar(out, &name, layer)?;
            }
        }
    }
    Ok(0)
}

fn synth(args: &SynthArgs) -> Result<u8> {
    for ad in synthetic_corpus(args.docs, args.seed) {
        let name = format!("{}.tml", ad.doc.doc_id);
        write_document(&args.out, &name, &ad.doc)?;
        write_sidecar(&args.out, &name, &ad.layer)?;
    }
    println!("wrote {} documents to {}", args.docs, args.out.display());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global()?;
    }
    let lex = || lexicons(cli.lexicons.as_deref());
    match &cli.command {
        Command::Train(a) => train(a, &lex()?),
        Command::Annotate(a) => annotate_cmd(a, &lex()?),
        Command::Reason(a) => reason(a),
        Command::Causal(a) => causal(a, &lex()?),
        Command::Evaluate(a) => evaluate(a),
        Command::Qa(a) => qa(a),
        Command::Folds(a) => folds(a),
        Command::PrepareTraining(a) => prepare(a),
        Command::Synth(a) => synth(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
