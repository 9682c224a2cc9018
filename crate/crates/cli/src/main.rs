//! `lexaug`: lexicon-based data augmentation pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or data-format error,
//! 3 validation error. Diagnostics go to stderr; data goes to files.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lexaug::align::{alignments_to_string, induce_from_parallel, AlignerConfig, Symmetrization};
use lexaug::corpus::{
    labeled_to_string, mono_to_string, read_labeled, read_mono, read_parallel, ColumnLayout,
    LabeledCorpus, LabeledFormat, Schema,
};
use lexaug::distill::apply_teacher_labels;
use lexaug::lexicon::{load_lexicon, merge, LoadMode, Provenance};
use lexaug::mix::{build_joint_labeled, concat_shuffle, upsample_to_match};
use lexaug::report::{lexicon_pos_distribution, PipelineSummary};
use lexaug::synth::{synth_labeled, synth_mono, CasePolicy, SynthesisConfig};
use lexaug::Execution;
use serde_json::Value;

use output::Outputs;

#[derive(Parser)]
#[command(name = "lexaug", version, about = "Synthesize training data for low-resource languages from bilingual lexicons")]
struct Cli {
    /// Worker threads for synthesis and alignment (output is identical for any value).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lexicon statistics, merging and induction from parallel text.
    #[command(subcommand)]
    Lex(LexCommand),
    /// Word-to-word synthesis of pseudo corpora.
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Label distillation with teacher predictions.
    #[command(subcommand)]
    Distill(DistillCommand),
    /// Corpus upsampling and mixing.
    #[command(subcommand)]
    Mix(MixCommand),
    /// Analytics and pipeline summaries.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Subcommand)]
enum LexCommand {
    /// Print entry counts of a lexicon.
    Stats {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Union of a base lexicon and extra (induced) entries.
    Merge {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        extra: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write lexicon statistics of the merged lexicon as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Induce lexicon entries from a line-aligned parallel corpus.
    Induce {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        tgt: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        iterations: usize,
        #[arg(long, default_value_t = 2)]
        min_count: usize,
        #[arg(long, value_enum, default_value_t = SymmetrizationArg::Intersection)]
        symmetrization: SymmetrizationArg,
        #[arg(long)]
        no_case_fold: bool,
        #[arg(long)]
        keep_punct: bool,
        /// Write the symmetrized alignments in `i-j` format.
        #[arg(long)]
        dump_alignments: Option<PathBuf>,
        /// Write lexicon statistics of the induced lexicon as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Pseudo monolingual text from tokenized source text.
    Mono {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Keep only the first N sentences of the corpus.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CaseArg::Lexicon)]
        case_policy: CaseArg,
    },
    /// Pseudo labeled data; labels are kept and only single-token entries are used.
    Labeled {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CaseArg::Lexicon)]
        case_policy: CaseArg,
    },
}

#[derive(Subcommand)]
enum DistillCommand {
    /// Replace pseudo labels with teacher predictions on the same tokens.
    Apply {
        #[arg(long)]
        pseudo: PathBuf,
        #[arg(long)]
        teacher: PathBuf,
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MixCommand {
    /// Repeat a gold corpus to exactly N sentences.
    Upsample {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        target_size: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Concatenate corpora, optionally shuffling.
    Concat {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        shuffle: bool,
    },
    /// Gold labeled data followed by pseudo labeled data.
    JointLabeled {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pseudo: PathBuf,
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReportCommand {
    /// POS distribution of lexicon sources against a POS-tagged reference.
    PosDist {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// Reference format; inferred from the extension when omitted.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        json: bool,
    },
    /// Collect stage reports into one JSON summary.
    Summary {
        /// `NAME` or `NAME=REPORT.json`, in pipeline order.
        #[arg(long = "stage")]
        stages: Vec<String>,
        #[arg(long = "seed")]
        seeds: Vec<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct LayoutArgs {
    /// Inferred from the file extension (`.conllu`) when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum, default_value_t = SchemaArg::Pos)]
    schema: SchemaArg,
    /// Override the token column (0-based).
    #[arg(long)]
    token_col: Option<usize>,
    /// Override the label column (0-based; DEP reads head here and relation next).
    #[arg(long)]
    label_col: Option<usize>,
}

impl LayoutArgs {
    fn resolve(&self, path: &Path) -> (Schema, ColumnLayout) {
        let format = self
            .format
            .map(FormatArg::into_format)
            .unwrap_or_else(|| infer_format(path));
        let schema = self.schema.into_schema();
        let mut layout = ColumnLayout::default_for(format, schema);
        if let Some(c) = self.token_col {
            layout.token_col = c;
        }
        if let Some(c) = self.label_col {
            layout.label_col = c;
        }
        (schema, layout)
    }
}

fn infer_format(path: &Path) -> LabeledFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("conllu") => LabeledFormat::Conllu,
        _ => LabeledFormat::TwoColumn,
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    #[value(name = "two-col")]
    TwoCol,
    Conllu,
}

impl FormatArg {
    fn into_format(self) -> LabeledFormat {
        match self {
            FormatArg::TwoCol => LabeledFormat::TwoColumn,
            FormatArg::Conllu => LabeledFormat::Conllu,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemaArg {
    Ner,
    Pos,
    Dep,
}

impl SchemaArg {
    fn into_schema(self) -> Schema {
        match self {
            SchemaArg::Ner => Schema::Ner,
            SchemaArg::Pos => Schema::Pos,
            SchemaArg::Dep => Schema::Dep,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SymmetrizationArg {
    Intersection,
    Forward,
    Backward,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    /// Emit lexicon targets verbatim.
    Lexicon,
    /// Capitalize targets of title-cased source tokens.
    Restore,
}

impl CaseArg {
    fn into_policy(self) -> CasePolicy {
        match self {
            CaseArg::Lexicon => CasePolicy::LexiconForm,
            CaseArg::Restore => CasePolicy::RestoreCase,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] lexaug::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("invalid argument: {0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Lib(e) if e.is_validation() => 3,
            CliError::Lib(_) => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn load_labeled(path: &Path, layout: &LayoutArgs) -> CliResult<LabeledCorpus> {
    let (schema, layout) = layout.resolve(path);
    Ok(read_labeled(path, schema, layout)?)
}

fn run_lex(cmd: LexCommand, exec: Execution, outputs: &mut Outputs) -> CliResult<()> {
    match cmd {
        LexCommand::Stats { lexicon, json } => {
            let (lex, _) = load_lexicon(&lexicon, LoadMode::AllowMultiToken)?;
            let stats = lex.stats();
            if json {
                print!("{}", to_json(&stats));
            } else {
                println!("entry_pairs\t{}", stats.entry_pairs);
                println!("distinct_sources\t{}", stats.distinct_sources);
                println!("multi_candidate_sources\t{}", stats.multi_candidate_sources);
                println!("multi_token_targets\t{}", stats.multi_token_targets);
            }
        }
        LexCommand::Merge {
            base,
            extra,
            out,
            report,
        } => {
            let (base, _) = load_lexicon(&base, LoadMode::AllowMultiToken)?;
            let (extra, _) = load_lexicon(&extra, LoadMode::AllowMultiToken)?;
            let merged = merge(&base, &extra.with_provenance(Provenance::Induced))?;
            eprintln!(
                "merged {} + {} pairs into {}",
                base.entry_count(),
                extra.entry_count(),
                merged.entry_count()
            );
            outputs.add(out, merged.to_tsv());
            if let Some(r) = report {
                outputs.add(r, to_json(&merged.stats()));
            }
        }
        LexCommand::Induce {
            src,
            tgt,
            out,
            iterations,
            min_count,
            symmetrization,
            no_case_fold,
            keep_punct,
            dump_alignments,
            report,
        } => {
            let cfg = AlignerConfig {
                iterations,
                min_count,
                symmetrization: match symmetrization {
                    SymmetrizationArg::Intersection => Symmetrization::Intersection,
                    SymmetrizationArg::Forward => Symmetrization::Forward,
                    SymmetrizationArg::Backward => Symmetrization::Backward,
                },
                case_fold: !no_case_fold,
                keep_punct,
                execution: exec,
            };
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let (corpus, dropped) = read_parallel(&src, &tgt)?;
            if dropped > 0 {
                eprintln!("warning: dropped {dropped} sentence pairs with an empty side");
            }
            let induction = induce_from_parallel(&corpus, &cfg)?;
            eprintln!(
                "trained on {} pairs; forward log-likelihood {:.4}; induced {} entries",
                corpus.len(),
                induction.forward.final_log_likelihood,
                induction.lexicon.entry_count()
            );
            outputs.add(out, induction.lexicon.to_tsv());
            if let Some(path) = dump_alignments {
                outputs.add(path, alignments_to_string(&induction.alignments));
            }
            if let Some(r) = report {
                outputs.add(r, to_json(&induction.lexicon.stats()));
            }
        }
    }
    Ok(())
}

fn run_synth(cmd: SynthCommand, exec: Execution, outputs: &mut Outputs) -> CliResult<()> {
    match cmd {
        SynthCommand::Mono {
            corpus,
            lexicon,
            out,
            seed,
            limit,
            report,
            case_policy,
        } => {
            let corpus = read_mono(&corpus, limit)?;
            let (lex, _) = load_lexicon(&lexicon, LoadMode::AllowMultiToken)?;
            let cfg = SynthesisConfig {
                seed,
                case_policy: case_policy.into_policy(),
                execution: exec,
                ..Default::default()
            };
            let (pseudo, coverage) = synth_mono(&corpus, &lex, &cfg);
            eprintln!(
                "synthesized {} sentences, replaced {}/{} tokens",
                pseudo.len(),
                coverage.replaced_tokens,
                coverage.total_tokens
            );
            outputs.add(out, mono_to_string(&pseudo));
            if let Some(r) = report {
                outputs.add(r, to_json(&coverage));
            }
        }
        SynthCommand::Labeled {
            input,
            layout,
            lexicon,
            out,
            seed,
            report,
            case_policy,
        } => {
            let corpus = load_labeled(&input, &layout)?;
            let (lex, dropped) = load_lexicon(&lexicon, LoadMode::SingleTokenOnly)?;
            if dropped > 0 {
                eprintln!("skipped {dropped} multi-token lexicon entries");
            }
            let cfg = SynthesisConfig {
                seed,
                case_policy: case_policy.into_policy(),
                execution: exec,
                ..Default::default()
            };
            let (pseudo, coverage) = synth_labeled(&corpus, &lex, &cfg)?;
            eprintln!(
                "synthesized {} labeled sentences, replaced {}/{} tokens",
                pseudo.len(),
                coverage.replaced_tokens,
                coverage.total_tokens
            );
            outputs.add(out, labeled_to_string(&pseudo));
            if let Some(r) = report {
                outputs.add(r, to_json(&coverage));
            }
        }
    }
    Ok(())
}

fn run_distill(cmd: DistillCommand, outputs: &mut Outputs) -> CliResult<()> {
    match cmd {
        DistillCommand::Apply {
            pseudo,
            teacher,
            layout,
            out,
            report,
        } => {
            let pseudo = load_labeled(&pseudo, &layout)?;
            let teacher = load_labeled(&teacher, &layout)?;
            let (distilled, summary) = apply_teacher_labels(&pseudo, &teacher)?;
            eprintln!(
                "relabeled {}/{} positions",
                summary.changed, summary.positions
            );
            outputs.add(out, labeled_to_string(&distilled));
            if let Some(r) = report {
                outputs.add(r, to_json(&summary));
            }
        }
    }
    Ok(())
}

fn run_mix(cmd: MixCommand, outputs: &mut Outputs) -> CliResult<()> {
    match cmd {
        MixCommand::Upsample {
            gold,
            target_size,
            out,
            seed,
        } => {
            let gold = read_mono(&gold, None)?;
            let up = upsample_to_match(&gold, target_size, seed)?;
            outputs.add(out, mono_to_string(&up));
        }
        MixCommand::Concat {
            inputs,
            out,
            seed,
            shuffle,
        } => {
            let corpora = inputs
                .iter()
                .map(|p| read_mono(p, None))
                .collect::<Result<Vec<_>, _>>()?;
            let mixed = concat_shuffle(&corpora, seed, shuffle);
            outputs.add(out, mono_to_string(&mixed));
        }
        MixCommand::JointLabeled {
            gold,
            pseudo,
            layout,
            out,
        } => {
            let gold = load_labeled(&gold, &layout)?;
            let pseudo = load_labeled(&pseudo, &layout)?;
            let joint = build_joint_labeled(&gold, &pseudo)?;
            outputs.add(out, labeled_to_string(&joint));
        }
    }
    Ok(())
}

fn run_report(cmd: ReportCommand, outputs: &mut Outputs) -> CliResult<()> {
    match cmd {
        ReportCommand::PosDist {
            lexicon,
            reference,
            format,
            json,
        } => {
            let (lex, _) = load_lexicon(&lexicon, LoadMode::AllowMultiToken)?;
            let layout_args = LayoutArgs {
                format,
                schema: SchemaArg::Pos,
                token_col: None,
                label_col: None,
            };
            let reference = load_labeled(&reference, &layout_args)?;
            let dist = lexicon_pos_distribution(&lex, &reference)?;
            if json {
                print!("{}", to_json(&dist));
            } else {
                for (tag, frac) in &dist.fractions {
                    println!("{tag}\t{}\t{frac:.4}", dist.counts[tag]);
                }
                println!("# found {} out_of_reference {}", dist.found, dist.out_of_reference);
            }
        }
        ReportCommand::Summary { stages, seeds, out } => {
            let mut summary = PipelineSummary::new();
            for seed in seeds {
                summary.add_seed(seed);
            }
            for stage in stages {
                match stage.split_once('=') {
                    Some((name, path)) => {
                        let text = std::fs::read_to_string(path)
                            .map_err(|e| CliError::Io(std::io::Error::new(e.kind(), format!("{path}: {e}"))))?;
                        let value: Value = serde_json::from_str(&text).map_err(|e| {
                            lexaug::Error::Format {
                                path: path.into(),
                                line: e.line(),
                                message: e.to_string(),
                            }
                        })?;
                        summary.add_stage_value(name, Some(value));
                    }
                    None => {
                        summary.add_stage_value(stage, None);
                    }
                }
            }
            outputs.add(out, summary.to_json());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let exec = Execution::Parallel;
    let mut outputs = Outputs::default();
    let command = cli.command;
    let dispatch = move |outputs: &mut Outputs| match command {
        Command::Lex(c) => run_lex(c, exec, outputs),
        Command::Synth(c) => run_synth(c, exec, outputs),
        Command::Distill(c) => run_distill(c, outputs),
        Command::Mix(c) => run_mix(c, outputs),
        Command::Report(c) => run_report(c, outputs),
    };
    match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        #[cfg(feature = "parallel")]
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            pool.install(|| dispatch(&mut outputs))?;
        }
        _ => dispatch(&mut outputs)?,
    }
    outputs.commit()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
