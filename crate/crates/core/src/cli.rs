//! Command-line front end. Every stage reads its inputs from files and
//! writes its outputs to the work directory, so later stages can be rerun
//! and inspected independently.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baselines::{to_data_graph, to_xml_tree, Nesting};
use crate::bench::{
    banks_adapter, extract_templates, lca_adapter, make_benchmark, mlca_adapter, parse_gold_map,
    qunit_adapter, run_comparison, ScoreReport,
};
use crate::derive::{
    derive_from_evidence, derive_from_log, derive_from_schema, parse_documents, parse_query_log,
    Derivation, DerivationConfig,
};
use crate::qunit::{
    enumerate_instances, parse_definitions, write_definitions, QunitDefinition, QunitInstance,
};
use crate::search::{Engine, SearchConfig};
use crate::store::{Dataset, Schema, ValueIndex};
use crate::{Error, Result};

/// What a command printed and how it ended.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

#[derive(Parser, Debug)]
#[command(
    name = "qunits",
    version,
    about = "Keyword search over relational data with qunits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct DataArgs {
    /// Schema description file.
    #[arg(long)]
    schema: PathBuf,
    /// Directory holding one `<table>.tsv` per table.
    #[arg(long)]
    data_dir: PathBuf,
    /// Where derived definitions and the index are kept.
    #[arg(long, default_value = ".qunits")]
    work_dir: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct RankArgs {
    /// Weight of the definition match against the text score.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 10)]
    top_k: usize,
}

impl RankArgs {
    fn config(&self) -> Result<SearchConfig<f64>> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Invalid(format!(
                "--alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        Ok(SearchConfig {
            alpha: self.alpha,
            top_k: self.top_k,
            ..SearchConfig::default()
        })
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Strategy {
    Schema,
    Log,
    Evidence,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate and load the dataset, printing row counts.
    Ingest {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Derive qunit definitions and write them to the work directory.
    Derive {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value_t = Strategy::All)]
        strategy: Strategy,
        /// Tab-separated `query<TAB>frequency` log.
        #[arg(long)]
        query_log: Option<PathBuf>,
        /// Indented external documents.
        #[arg(long)]
        docs: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        k1: usize,
        #[arg(long, default_value_t = 3)]
        k2: usize,
    },
    /// Materialize every instance of the definitions and index them.
    Index {
        #[command(flatten)]
        data: DataArgs,
        /// Definition files; defaults to every `.qunit` file in the work directory.
        #[arg(long)]
        defs: Vec<PathBuf>,
    },
    /// Rank qunit instances for a keyword query.
    Search {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        rank: RankArgs,
        query: String,
    },
    /// Show segmentations, definition matches and score parts for a query.
    Explain {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        rank: RankArgs,
        query: String,
    },
    /// Build a benchmark from a query log and score every algorithm on it.
    Bench {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        rank: RankArgs,
        #[arg(long)]
        query_log: PathBuf,
        /// Gold mapping: `template<TAB>definition<TAB>required:..<TAB>forbidden:..`.
        #[arg(long)]
        gold: PathBuf,
        #[arg(long, default_value_t = 3)]
        top_templates: usize,
        #[arg(long, default_value_t = 2)]
        per_template: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the inverted index, one token per line.
    DumpIndex {
        #[arg(long, default_value = ".qunits")]
        work_dir: PathBuf,
    },
}

const INDEX_DIR: &str = "index";
const INDEX_DEFS: &str = "definitions.qunit";
const INDEX_INSTANCES: &str = "instances.jsonl";

/// Parses `args` (program name first) and runs the command.
pub fn run_args(args: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        stdout: text,
                        ..Outcome::default()
                    }
                }
                _ => Outcome {
                    stderr: text,
                    status: 2,
                    ..Outcome::default()
                },
            };
        }
    };
    let mut out = Outcome::default();
    if let Err(e) = run(cli.command, &mut out) {
        let _ = writeln!(out.stderr, "error[{}]: {e}", e.class());
        out.status = 1;
    }
    out
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn load(data: &DataArgs) -> Result<Dataset> {
    let schema = Schema::parse(&read(&data.schema)?)?;
    if !data.data_dir.is_dir() {
        return Err(Error::NotFound(format!(
            "data directory {}",
            data.data_dir.display()
        )));
    }
    Dataset::load_dir(schema, &data.data_dir)
}

fn not_built(work_dir: &Path) -> Error {
    Error::NotFound(format!(
        "index not built in {} (run `qunits index` first)",
        work_dir.display()
    ))
}

fn read_instances(path: &Path) -> Result<Vec<QunitInstance>> {
    let source = path.display().to_string();
    read(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str::<QunitInstance>(l)
                .map_err(|e| Error::parse(&source, i + 1, e.to_string()))
        })
        .collect()
}

fn load_engine(data: &DataArgs, dataset: &Dataset) -> Result<Engine> {
    let dir = data.work_dir.join(INDEX_DIR);
    let (defs_path, inst_path) = (dir.join(INDEX_DEFS), dir.join(INDEX_INSTANCES));
    if !defs_path.is_file() || !inst_path.is_file() {
        return Err(not_built(&data.work_dir));
    }
    let definitions = parse_definitions(&read(&defs_path)?)?;
    let instances = read_instances(&inst_path)?;
    Engine::from_instances(ValueIndex::build(dataset), definitions, &instances)
}

fn run(command: Command, out: &mut Outcome) -> Result<()> {
    match command {
        Command::Ingest { data } => {
            let d = load(&data)?;
            for t in d.schema().tables() {
                let _ = writeln!(out.stdout, "{}\t{}", t.name, d.cardinality(&t.name));
            }
            let _ = writeln!(out.stdout, "total\t{}", d.total_rows());
        }
        Command::Derive {
            data,
            strategy,
            query_log,
            docs,
            k1,
            k2,
        } => {
            let d = load(&data)?;
            let config = DerivationConfig {
                k1,
                k2,
                ..DerivationConfig::default()
            };
            let mut runs: Vec<(&str, Derivation)> = Vec::new();
            if matches!(strategy, Strategy::Schema | Strategy::All) {
                runs.push(("schema", derive_from_schema(d.schema(), &d, &config)));
            }
            if matches!(strategy, Strategy::Log | Strategy::All) {
                match &query_log {
                    Some(p) => runs.push((
                        "log",
                        derive_from_log(&parse_query_log(&read(p)?)?, &d, &config),
                    )),
                    None if strategy == Strategy::Log => {
                        return Err(Error::Invalid("--strategy log needs --query-log".into()))
                    }
                    None => {}
                }
            }
            if matches!(strategy, Strategy::Evidence | Strategy::All) {
                match &docs {
                    Some(p) => runs.push((
                        "evidence",
                        derive_from_evidence(&parse_documents(&read(p)?)?, &d, &config),
                    )),
                    None if strategy == Strategy::Evidence => {
                        return Err(Error::Invalid("--strategy evidence needs --docs".into()))
                    }
                    None => {}
                }
            }
            for (name, derivation) in runs {
                for w in &derivation.warnings {
                    let _ = writeln!(out.stderr, "warning: {w}");
                }
                let text = write_definitions(&derivation.definitions);
                let path = data.work_dir.join(format!("{name}.qunit"));
                write(&path, &text)?;
                out.stdout.push_str(&text);
                let _ = writeln!(
                    out.stderr,
                    "wrote {} ({} definitions)",
                    path.display(),
                    derivation.definitions.len()
                );
            }
        }
        Command::Index { data, defs } => {
            let d = load(&data)?;
            let files = if defs.is_empty() {
                work_dir_definitions(&data.work_dir)?
            } else {
                defs
            };
            let mut definitions: Vec<QunitDefinition> = Vec::new();
            let mut ids = BTreeSet::new();
            for f in &files {
                for def in parse_definitions(&read(f)?)? {
                    if !ids.insert(def.id.clone()) {
                        return Err(Error::Invalid(format!(
                            "definition `{}` appears twice",
                            def.id
                        )));
                    }
                    def.validate(d.schema())?;
                    definitions.push(def);
                }
            }
            let instances: Vec<QunitInstance> = definitions
                .iter()
                .flat_map(|def| enumerate_instances(def, &d))
                .collect();
            let engine = Engine::from_instances(ValueIndex::build(&d), definitions, &instances)?;
            let mut lines = String::new();
            for inst in &instances {
                lines.push_str(&serde_json::to_string(inst).expect("instances serialize"));
                lines.push('\n');
            }
            let dir = data.work_dir.join(INDEX_DIR);
            write(
                &dir.join(INDEX_DEFS),
                &write_definitions(&engine.definitions),
            )?;
            write(&dir.join(INDEX_INSTANCES), &lines)?;
            let _ = writeln!(
                out.stdout,
                "indexed {} instances of {} definitions ({} tokens)",
                engine.index.doc_count(),
                engine.definitions.len(),
                engine.index.tokens().count()
            );
        }
        Command::Search { data, rank, query } => {
            let config = rank.config()?;
            let d = load(&data)?;
            let engine = load_engine(&data, &d)?;
            let results = engine.search(&query, &config);
            if results.is_empty() {
                let _ = writeln!(out.stderr, "no results");
            }
            for (i, r) in results.iter().enumerate() {
                let display = engine
                    .index
                    .doc_by_id(&r.instance_id)
                    .map(|doc| one_line(&doc.display))
                    .unwrap_or_default();
                let _ = writeln!(
                    out.stdout,
                    "{}\t{:.4}\t{}\t{}\t{}",
                    i + 1,
                    r.combined,
                    r.definition_id,
                    r.anchor_value,
                    display
                );
            }
        }
        Command::Explain { data, rank, query } => {
            let config = rank.config()?;
            let d = load(&data)?;
            let engine = load_engine(&data, &d)?;
            explain(&engine, &query, &config, &mut out.stdout);
        }
        Command::Bench {
            data,
            rank,
            query_log,
            gold,
            top_templates,
            per_template,
            seed,
        } => {
            let config = rank.config()?;
            let d = load(&data)?;
            let engine = load_engine(&data, &d)?;
            let log = parse_query_log(&read(&query_log)?)?;
            let gold = parse_gold_map(&read(&gold)?)?;
            let templates = extract_templates(&log, &engine.values);
            let bench = make_benchmark(
                &templates,
                &log,
                &engine.values,
                top_templates,
                per_template,
                seed,
                Some(&gold),
            )?;
            for w in &bench.warnings {
                let _ = writeln!(out.stderr, "warning: {w}");
            }
            let graph = to_data_graph(&d);
            let tree = to_xml_tree(&d, &Nesting::movie_centric())?;
            let qunit = qunit_adapter(&engine, &config);
            let banks = banks_adapter(&graph, &engine.values);
            let lca = lca_adapter(&tree, &engine.values);
            let mlca = mlca_adapter(&tree, &engine.values);
            let report: ScoreReport<f64> = run_comparison(
                &bench,
                &[
                    ("qunit", &qunit),
                    ("banks", &banks),
                    ("lca", &lca),
                    ("mlca", &mlca),
                ],
            );
            out.stdout.push_str(&report.to_tsv());
        }
        Command::DumpIndex { work_dir } => {
            let path = work_dir.join(INDEX_DIR).join(INDEX_INSTANCES);
            if !path.is_file() {
                return Err(not_built(&work_dir));
            }
            let instances = read_instances(&path)?;
            out.stdout
                .push_str(&crate::search::build_index(&instances)?.dump());
        }
    }
    Ok(())
}

fn work_dir_definitions(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "qunit"))
            .collect(),
        Err(_) => Vec::new(),
    };
    if files.is_empty() {
        return Err(Error::NotFound(format!(
            "no definitions in {} (run `qunits derive` or pass --defs)",
            dir.display()
        )));
    }
    files.sort();
    Ok(files)
}

fn one_line(display: &str) -> String {
    display
        .lines()
        .map(str::trim)
        .collect::<Vec<_>>()
        .join(" ; ")
}

fn explain(engine: &Engine, query: &str, config: &SearchConfig<f64>, out: &mut String) {
    let e = engine.explain(query, config);
    let _ = writeln!(out, "query: {query}");
    let _ = writeln!(out, "tokens: {}", e.tokens.join(" "));
    let _ = writeln!(out, "segmentations:");
    for (i, s) in e.segmentations.iter().enumerate() {
        let _ = writeln!(out, "  {}. {s}\tcoverage={:.4}", i + 1, s.score::<f64>());
    }
    let _ = writeln!(out, "definitions:");
    for m in &e.matches {
        let mark = if e.selected.contains(&m.definition_id) {
            "\tselected"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  {}\tjaccard={:.4}\tdefmatch={:.4}{mark}",
            m.definition_id, m.jaccard, m.score
        );
    }
    let _ = writeln!(out, "results:");
    for (i, r) in e.results.iter().enumerate() {
        let text = r.tfidf / (r.tfidf + 1.0);
        let _ = writeln!(
            out,
            "  {}\t{}\tcombined={:.4} = {:.2}*{:.4} + {:.2}*{:.4}\ttfidf={:.4}",
            i + 1,
            r.instance_id,
            r.combined,
            config.alpha,
            r.defmatch,
            1.0 - config.alpha,
            text,
            r.tfidf
        );
    }
}
