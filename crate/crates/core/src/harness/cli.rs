//! The `msolearn` command line.
//!
//! Exit codes: 0 success, 1 no consistent parameters (or, for `check`, the
//! given parameters are inconsistent), 2 usage or data error.

use std::error::Error;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;

use super::bench::{run_bench, BenchConfig, Suite};
use super::{load_index, save_index};
use crate::automata::compile_with_cap;
use crate::baselines::{oracle_learn, unary_examples, BaselineError};
use crate::corpus::{gen_adversarial, gen_random_word, AdversarialSpec, Labeller, Manifest};
use crate::formula::{parse_formula, Formula, WordStructure};
use crate::learner::{Caps, Index, LearnError, Pipeline, TrainingSet};
use crate::monoid::FiniteMonoid;

pub const STATE_CAP_VAR: &str = "MSOLEARN_STATE_CAP";
pub const MONOID_CAP_VAR: &str = "MSOLEARN_MONOID_CAP";

type Res<T> = Result<T, Box<dyn Error>>;

#[derive(Debug, Parser)]
#[command(name = "msolearn", version, about = "Learn parameters of MSO formulas over strings")]
struct Cli {
    /// Print machine-readable JSON instead of `key=value` lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Compile a formula and report automaton and monoid sizes.
    Compile {
        #[arg(long)]
        formula: PathBuf,
        /// Write the formula automaton in text form.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and save an index of a string.
    Index {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Learn parameters consistent with a training set.
    Learn {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        train: PathBuf,
    },
    /// Check given parameters against a training set.
    Check {
        #[arg(long, conflicts_with_all = ["formula", "input"])]
        index: Option<PathBuf>,
        #[arg(long, requires = "input")]
        formula: Option<PathBuf>,
        #[arg(long, requires = "formula")]
        input: Option<PathBuf>,
        #[arg(long)]
        train: PathBuf,
        /// Comma-separated parameter positions.
        #[arg(long, value_delimiter = ',')]
        params: Vec<usize>,
    },
    /// Brute-force learner: lexicographically least consistent parameters.
    Oracle {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        train: PathBuf,
    },
    /// Generate corpora.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Time indexing or learning over a range of string sizes.
    Bench {
        #[arg(long)]
        suite: Suite,
        /// Comma-separated sizes; scientific notation such as `1e5` is accepted.
        #[arg(long, value_delimiter = ',', value_parser = parse_size)]
        sizes: Vec<usize>,
        /// Defaults to `Ra(x) & x <= y` over `{a, b}`.
        #[arg(long)]
        formula: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a stored index: checksum, tree invariants and monoid laws.
    Verify {
        #[arg(long)]
        index: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// Alternating block family over {a, b, c}.
    Adversarial {
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Random string with a training set labelled by a formula.
    Random {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, value_parser = parse_size)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

/// Default formula for `bench`.
pub const DEFAULT_BENCH_FORMULA: &str = "instance: x; params: y; alphabet: a,b\nRa(x) & x <= y";

fn parse_size(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < 1e15 => Ok(x as usize),
        _ => Err(format!("`{s}` is not a size")),
    }
}

enum Outcome {
    Done,
    NotFound,
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::NotFound) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Caps from the environment, falling back to the defaults.
pub fn caps_from_env() -> Res<Caps> {
    let mut caps = Caps::default();
    for (var, slot) in [(STATE_CAP_VAR, &mut caps.states), (MONOID_CAP_VAR, &mut caps.monoid)] {
        if let Ok(v) = std::env::var(var) {
            *slot = parse_size(v.trim()).map_err(|e| format!("{var}: {e}"))?;
        }
    }
    Ok(caps)
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn write(path: &Path, bytes: &[u8]) -> Res<()> {
    std::fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_formula(path: &Path) -> Res<Formula> {
    Ok(parse_formula(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn read_word(phi: &Formula, path: &Path) -> Res<WordStructure> {
    let text = read(path)?;
    Ok(WordStructure::parse(phi.alphabet(), text.trim_end()).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn read_training(path: &Path) -> Res<TrainingSet> {
    Ok(TrainingSet::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn read_index(path: &Path) -> Res<Index> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(load_index(&bytes)?)
}

fn print_params(json: bool, phi: &Formula, params: &[usize], extra: serde_json::Value) {
    if json {
        let named: serde_json::Map<String, serde_json::Value> = phi
            .param_names()
            .iter()
            .zip(params)
            .map(|(n, p)| (n.to_string(), json!(p)))
            .collect();
        println!("{}", json!({"params": named, "stats": extra}));
    } else {
        for (name, p) in phi.param_names().iter().zip(params) {
            println!("{name}={p}");
        }
    }
}

fn print_kv(json: bool, value: serde_json::Value) {
    if json {
        println!("{value}");
    } else if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            println!("{k}={v}");
        }
    }
}

fn execute(cli: Cli) -> Res<Outcome> {
    let json = cli.json;
    match cli.cmd {
        Cmd::Compile { formula, out } => {
            let caps = caps_from_env()?;
            let phi = read_formula(&formula)?;
            if let Some(out) = out {
                write(&out, compile_with_cap(&phi, caps.states)?.to_text().as_bytes())?;
            }
            let p = Pipeline::with_caps(phi, caps)?;
            print_kv(
                json,
                json!({
                    "consistency_states": p.dfa().num_states(),
                    "tagged_monoid": p.mhat().len(),
                    "power_monoid": p.power().len(),
                }),
            );
        }
        Cmd::Index { formula, input, out } => {
            let phi = read_formula(&formula)?;
            let word = read_word(&phi, &input)?;
            let p = Arc::new(Pipeline::with_caps(phi, caps_from_env()?)?);
            let start = std::time::Instant::now();
            let index = Index::build(p, word)?;
            eprintln!("indexed in {:.3}s", start.elapsed().as_secs_f64());
            let bytes = save_index(&index);
            write(&out, &bytes)?;
            print_kv(
                json,
                json!({
                    "length": index.word().len(),
                    "nodes": index.tree().num_nodes(),
                    "height": index.tree().height(),
                    "bytes": bytes.len(),
                }),
            );
        }
        Cmd::Learn { index, train } => {
            let index = read_index(&index)?;
            let t = read_training(&train)?;
            match index.learn(&t) {
                Ok(l) => print_params(
                    json,
                    index.pipeline().formula(),
                    &l.params,
                    serde_json::to_value(l.stats)?,
                ),
                Err(LearnError::NoConsistentParameters) => {
                    report_none(json);
                    return Ok(Outcome::NotFound);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Cmd::Check {
            index,
            formula,
            input,
            train,
            params,
        } => {
            let t = read_training(&train)?;
            let ok = match (index, formula, input) {
                (Some(index), _, _) => read_index(&index)?.check_consistent(&params, &t)?,
                (None, Some(formula), Some(input)) => {
                    let phi = read_formula(&formula)?;
                    let word = read_word(&phi, &input)?;
                    Pipeline::with_caps(phi, caps_from_env()?)?.check_consistent(&word, &params, &t)?
                }
                _ => return Err("check needs --index or both --formula and --input".into()),
            };
            print_kv(json, json!({ "consistent": ok }));
            if !ok {
                return Ok(Outcome::NotFound);
            }
        }
        Cmd::Oracle { formula, input, train } => {
            let phi = read_formula(&formula)?;
            let word = read_word(&phi, &input)?;
            let t = read_training(&train)?;
            t.validate(word.len())?;
            match oracle_learn(&phi, &word, &unary_examples(&t)) {
                Ok(v) => print_params(json, &phi, &v, json!(null)),
                Err(BaselineError::NoConsistentParameters) => {
                    report_none(json);
                    return Ok(Outcome::NotFound);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Cmd::Gen { kind } => gen(json, kind)?,
        Cmd::Bench {
            suite,
            sizes,
            formula,
            repeats,
            seed,
            out,
        } => {
            let phi = match formula {
                Some(f) => read_formula(&f)?,
                None => parse_formula(DEFAULT_BENCH_FORMULA)?,
            };
            let p = Arc::new(Pipeline::with_caps(phi, caps_from_env()?)?);
            let cfg = BenchConfig {
                seed,
                repeats,
                ..BenchConfig::default()
            };
            let report = run_bench(&p, suite, &sizes, cfg)?;
            let text = serde_json::to_string_pretty(&report)?;
            if let Some(out) = out {
                write(&out, text.as_bytes())?;
            }
            // a closed pipe is not an error
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
        Cmd::Verify { index } => {
            let index = read_index(&index)?;
            index.verify()?;
            check_monoid_laws(index.pipeline().power())?;
            print_kv(json, json!({ "verified": true }));
        }
    }
    Ok(Outcome::Done)
}

fn report_none(json: bool) {
    if json {
        println!("{}", json!({ "params": null }));
    }
    eprintln!("no consistent parameters");
}

/// Identity laws for every element; associativity on all triples for small
/// monoids, otherwise on triples ending in a generator.
pub fn check_monoid_laws(m: &impl FiniteMonoid) -> Res<()> {
    let n = m.len() as u32;
    let e = m.identity();
    for a in 0..n {
        if m.mul(a, e) != a || m.mul(e, a) != a {
            return Err(format!("identity law fails at {a}").into());
        }
    }
    let thirds: Vec<u32> = if (n as u64).pow(3) <= 10_000_000 {
        (0..n).collect()
    } else {
        m.generators().to_vec()
    };
    for a in 0..n {
        for b in 0..n {
            let ab = m.mul(a, b);
            for &c in &thirds {
                if m.mul(ab, c) != m.mul(a, m.mul(b, c)) {
                    return Err(format!("associativity fails at ({a}, {b}, {c})").into());
                }
            }
        }
    }
    Ok(())
}

fn gen(json: bool, kind: GenKind) -> Res<()> {
    match kind {
        GenKind::Adversarial { l, s, r, i, out_dir } => {
            let spec = AdversarialSpec { l, s, r, i };
            let (word, v, t) = gen_adversarial(spec)?;
            std::fs::create_dir_all(&out_dir)?;
            let mut manifest = Manifest::new("adversarial", serde_json::to_value(spec)?, None);
            let files = [
                ("B.txt", format!("{}\n", word.text())),
                ("T.tsv", t.to_text()),
                ("params.txt", format!("{v}\n")),
            ];
            for (name, body) in &files {
                write(&out_dir.join(name), body.as_bytes())?;
                manifest.add_output(name, body.as_bytes());
            }
            write(&out_dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?.as_bytes())?;
            print_kv(json, json!({ "length": word.len(), "param": v, "examples": t.len() }));
        }
        GenKind::Random {
            formula,
            n,
            t,
            seed,
            out_dir,
        } => {
            let phi = read_formula(&formula)?;
            let word = gen_random_word(phi.alphabet(), n, seed);
            let (v, training) = Labeller::new(&phi)?.gen_random_consistent(&word, t, seed)?;
            std::fs::create_dir_all(&out_dir)?;
            let spec = json!({ "formula": phi.to_string(), "n": n, "t": t });
            let mut manifest = Manifest::new("random", spec, Some(seed));
            let params: String = v.iter().map(|p| format!("{p}\n")).collect();
            let files = [
                ("B.txt", format!("{}\n", word.text())),
                ("T.tsv", training.to_text()),
                ("params.txt", params),
            ];
            for (name, body) in &files {
                write(&out_dir.join(name), body.as_bytes())?;
                manifest.add_output(name, body.as_bytes());
            }
            write(&out_dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?.as_bytes())?;
            print_kv(json, json!({ "length": n, "examples": training.len() }));
        }
    }
    Ok(())
}
