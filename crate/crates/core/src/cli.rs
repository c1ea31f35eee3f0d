//! Command-line front end.
//!
//! Every subcommand writes canonical JSON (CSV for `slice`) to stdout or
//! `--out`. Exit codes: 0 on success (a "not a member" answer is a result,
//! not a failure), 2 on invalid input, 3 when a pivot or search ceiling
//! stops the computation.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::codes::{catalog, import_generator, systematic_hamming_ordered, CodeFile, ColumnOrder, LinearCode};
use crate::error::{Error, Result};
use crate::exactmath::{parse_rational, parse_rational_list, Rational};
use crate::hypergraph::{Hypergraph, HypergraphStats};
use crate::lp::LpOptions;
use crate::recovery::build_recovery_system_arc;
use crate::srr::{
    m3_brute, m3_closed_form, slice, verify_instance, waterfill, write_slice_csv, SliceSpec, SrrInstance,
    VerifyOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "srrham", version, about = "Exact service rate regions of Hamming-coded storage")]
pub struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Log verbosity (-v info, -vv debug, -vvv LP tableau dumps).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    /// Ceiling on simplex pivots per LP (overrides SRRHAM_PIVOT_LIMIT).
    #[arg(long, global = true)]
    pub pivot_limit: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

/// Where the code comes from: a JSON file, a preset, or `-r/-q`.
#[derive(Debug, Clone, Args)]
pub struct CodeSource {
    /// Code JSON file (as written by `gen` or `import`).
    pub code: Option<PathBuf>,
    /// Redundancy r of a generated systematic Ham(r, q).
    #[arg(short = 'r', long = "redundancy")]
    pub r: Option<usize>,
    /// Field size (prime).
    #[arg(short = 'q', long = "field", default_value_t = 2)]
    pub q: u32,
    /// Keep the parity-check columns in counting order when generating.
    #[arg(long)]
    pub natural_order: bool,
    /// Built-in code: ham32-natural or ham32-nonsystematic.
    #[arg(long)]
    pub preset: Option<String>,
    /// Largest recovery set size searched for non-systematic generators.
    #[arg(long)]
    pub search_cap: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct CapacityArg {
    /// Uniform node capacity μ.
    #[arg(long, default_value = "1")]
    pub capacity: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a systematic Ham(r, q) code.
    Gen {
        /// Redundancy r (number of parity symbols).
        #[arg(short = 'r', long = "redundancy")]
        r: usize,
        /// Field size q (prime).
        #[arg(short = 'q', long = "field", default_value_t = 2)]
        q: u32,
        /// Accepted for clarity; generated codes are always systematic.
        #[arg(long)]
        systematic: bool,
        /// Keep the parity-check columns in counting order.
        #[arg(long)]
        natural_order: bool,
    },
    /// Validate a generator matrix and write the canonical code JSON.
    Import {
        /// Code JSON, or a bare JSON array of generator rows.
        file: PathBuf,
        /// Field size for a bare generator array.
        #[arg(short = 'q', long = "field", default_value_t = 2)]
        q: u32,
    },
    /// Enumerate the minimum recovery system.
    Recovery {
        #[command(flatten)]
        source: CodeSource,
    },
    /// Matching, transversal and fractional matching numbers.
    Stats {
        #[command(flatten)]
        source: CodeSource,
        /// Restrict to the edges of these symbols (letters or 1-based).
        #[arg(long)]
        symbols: Option<String>,
    },
    /// Decide whether a demand vector lies in the service rate region.
    Check {
        #[command(flatten)]
        source: CodeSource,
        /// Demand vector, comma-separated rationals such as 1,1/2,0,3.
        #[arg(long)]
        demand: String,
        #[command(flatten)]
        capacity: CapacityArg,
    },
    /// Maximize a weighted total rate over the region.
    Max {
        #[command(flatten)]
        source: CodeSource,
        /// Objective weights; all ones when omitted.
        #[arg(long)]
        weights: Option<String>,
        #[command(flatten)]
        capacity: CapacityArg,
    },
    /// Largest servable rate of one symbol (all symbols when omitted).
    LambdaStar {
        #[command(flatten)]
        source: CodeSource,
        #[arg(long)]
        symbol: Option<String>,
        #[command(flatten)]
        capacity: CapacityArg,
    },
    /// Smallest single-symbol maximum, min_i λ_i*.
    Delta {
        #[command(flatten)]
        source: CodeSource,
        #[command(flatten)]
        capacity: CapacityArg,
    },
    /// Subset maximum next to its column-sum prediction.
    Subset {
        #[command(flatten)]
        source: CodeSource,
        /// Symbols of the subset (letters or 1-based).
        #[arg(long, required_unless_present = "all")]
        symbols: Option<String>,
        /// List the tight bound of every subset (k <= 4).
        #[arg(long)]
        all: bool,
    },
    /// Allocate a demand with the waterfilling policy.
    Waterfill {
        #[command(flatten)]
        source: CodeSource,
        /// Demand vector, comma-separated rationals such as 1,1/2,0,3.
        #[arg(long)]
        demand: String,
        #[command(flatten)]
        capacity: CapacityArg,
    },
    /// Count zero-sum parity-column triples, closed form and brute force.
    M3 {
        /// Redundancy r.
        #[arg(short = 'r', long = "redundancy")]
        r: usize,
    },
    /// Verify every claim for a code and report pass/fail per claim.
    Verify {
        #[command(flatten)]
        source: CodeSource,
        /// Seed for the sampled checks.
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        /// Random subsets with four or more symbols to check.
        #[arg(long, default_value_t = VerifyOptions::default().sampled_large)]
        samples: usize,
    },
    /// Sample membership on a grid cross-section (CSV).
    Slice {
        #[command(flatten)]
        source: CodeSource,
        /// Fixed rates, e.g. d=0 or 4=1/2 (comma separated).
        #[arg(long, default_value = "")]
        fix: String,
        /// One to three swept symbols, e.g. a,b,c.
        #[arg(long)]
        axes: String,
        /// Largest rate on each axis.
        #[arg(long)]
        max: String,
        /// Grid spacing, a positive rational.
        #[arg(long)]
        step: String,
        #[command(flatten)]
        capacity: CapacityArg,
    },
}

/// Parses a symbol given as a letter (`a` = first) or a 1-based index.
pub fn parse_symbol(s: &str, k: usize) -> Result<usize> {
    let s = s.trim();
    let idx = match s.parse::<usize>() {
        Ok(0) => return Err(Error::Parse("symbol indices are 1-based".into())),
        Ok(i) => i - 1,
        Err(_) => {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => c as usize - 'a' as usize,
                _ => return Err(Error::Parse(format!("bad symbol {s:?}"))),
            }
        }
    };
    if idx >= k {
        return Err(Error::IndexOutOfRange { index: idx + 1, bound: k });
    }
    Ok(idx)
}

fn parse_symbols(s: &str, k: usize) -> Result<Vec<usize>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_symbol(t, k)).collect()
}

fn symbol_label(i: usize, k: usize) -> String {
    if k <= 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        (i + 1).to_string()
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_code(source: &CodeSource) -> Result<LinearCode> {
    let chosen = [source.code.is_some(), source.r.is_some(), source.preset.is_some()]
        .iter()
        .filter(|&&x| x)
        .count();
    if chosen != 1 {
        return Err(Error::InvalidParameter(
            "give exactly one of a code file, -r/-q, or --preset".into(),
        ));
    }
    if let Some(path) = &source.code {
        let file: CodeFile = serde_json::from_value(read_json(path)?)?;
        return LinearCode::from_file(&file);
    }
    if let Some(name) = &source.preset {
        return catalog::preset(name).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown preset {name:?}; known: {}",
                catalog::PRESET_NAMES.join(", ")
            ))
        });
    }
    let order = if source.natural_order {
        ColumnOrder::Natural
    } else {
        ColumnOrder::Standard
    };
    systematic_hamming_ordered(source.r.expect("checked"), source.q, order)
}

fn code_json(code: &LinearCode) -> Result<Value> {
    let mut v = serde_json::to_value(code.to_file())?;
    v["d"] = serde_json::to_value(code.d())?;
    v["d_dual"] = serde_json::to_value(code.d_dual())?;
    Ok(v)
}

fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

struct Context {
    lp: LpOptions,
}

impl Context {
    fn instance(&self, source: &CodeSource, capacity: Option<&CapacityArg>) -> Result<SrrInstance> {
        let code = load_code(source)?;
        let system = build_recovery_system_arc(Arc::new(code), source.search_cap)?;
        let mu = match capacity {
            Some(c) => parse_rational(&c.capacity)?,
            None => Rational::one(),
        };
        Ok(SrrInstance::new(system, mu)?.with_lp_options(self.lp))
    }
}

enum Output {
    Json(Value),
    Text(Vec<u8>),
}

fn demand_vector(s: &str, k: usize) -> Result<Vec<Rational>> {
    let d = parse_rational_list(s)?;
    if d.len() != k {
        return Err(Error::DimensionMismatch(format!("{} demand entries for k = {k}", d.len())));
    }
    Ok(d)
}

fn execute(cli: &Cli) -> Result<Output> {
    let lp = match cli.pivot_limit {
        Some(0) => return Err(Error::InvalidParameter("--pivot-limit must be positive".into())),
        Some(limit) => LpOptions { pivot_limit: limit },
        None => LpOptions::from_env()?,
    };
    let ctx = Context { lp };
    let out = match &cli.command {
        Command::Gen { r, q, natural_order, .. } => {
            let order = if *natural_order {
                ColumnOrder::Natural
            } else {
                ColumnOrder::Standard
            };
            code_json(&systematic_hamming_ordered(*r, *q, order)?)?
        }
        Command::Import { file, q } => {
            let value = read_json(file)?;
            let code = if value.is_array() {
                let rows: Vec<Vec<u32>> = serde_json::from_value(value)?;
                import_generator(&rows, *q)?
            } else {
                LinearCode::from_file(&serde_json::from_value(value)?)?
            };
            code_json(&code)?
        }
        Command::Recovery { source } => {
            let inst = ctx.instance(source, None)?;
            let sys = inst.system();
            json!({
                "method": sys.method(),
                "minimality_cap": sys.minimality_cap(),
                "total_sets": sys.total_sets(),
                "symbols": serde_json::to_value(sys.to_file())?["symbols"],
            })
        }
        Command::Stats { source, symbols } => {
            let inst = ctx.instance(source, None)?;
            let mut graph = Hypergraph::from_recovery_system(inst.system());
            if let Some(s) = symbols {
                graph = graph.partial(&parse_symbols(s, inst.k())?);
            }
            let stats = HypergraphStats::compute(&graph, &ctx.lp)?;
            let mut v = stats.to_json(&graph);
            v["vertices"] = json!(graph.vertex_count());
            v["edges"] = json!(graph.edges().len());
            v
        }
        Command::Check { source, demand, capacity } => {
            let inst = ctx.instance(source, Some(capacity))?;
            let d = demand_vector(demand, inst.k())?;
            let m = inst.membership(&d)?;
            json!({
                "member": m.member,
                "demand": rationals(&d),
                "capacity": inst.capacity().to_string(),
                "allocation": m.allocation.map(|a| a.to_json(inst.system())),
            })
        }
        Command::Max { source, weights, capacity } => {
            let inst = ctx.instance(source, Some(capacity))?;
            let w = match weights {
                Some(s) => demand_vector(s, inst.k())?,
                None => vec![Rational::one(); inst.k()],
            };
            let best = inst.max_objective(&w)?;
            json!({
                "value": best.value.to_string(),
                "weights": rationals(&w),
                "demand": rationals(&best.demand),
                "allocation": best.allocation.to_json(inst.system()),
            })
        }
        Command::LambdaStar { source, symbol, capacity } => {
            let inst = ctx.instance(source, Some(capacity))?;
            match symbol {
                Some(s) => {
                    let i = parse_symbol(s, inst.k())?;
                    json!({ "symbol": i + 1, "lambda_star": inst.lambda_star(i)?.to_string() })
                }
                None => json!({ "lambda_star": rationals(&inst.lambda_star_vector()?) }),
            }
        }
        Command::Delta { source, capacity } => {
            let inst = ctx.instance(source, Some(capacity))?;
            let stars = inst.lambda_star_vector()?;
            let delta = stars.iter().min().cloned().unwrap_or_default();
            json!({
                "delta": delta.to_string(),
                "lambda_star": rationals(&stars),
                "d": inst.code().d().value,
            })
        }
        Command::Subset { source, symbols, all } => {
            let inst = ctx.instance(source, None)?;
            if *all {
                let rows: Vec<Value> = inst
                    .facet_list()?
                    .iter()
                    .map(|row| {
                        json!({
                            "subset": row.subset.iter().map(|i| i + 1).collect::<Vec<_>>(),
                            "bound": row.bound.to_string(),
                            "witness": rationals(&row.witness),
                        })
                    })
                    .collect();
                json!({ "constraints": rows })
            } else {
                let set = parse_symbols(symbols.as_deref().unwrap_or_default(), inst.k())?;
                inst.subset_bound(&set)?.to_json()
            }
        }
        Command::Waterfill { source, demand, capacity } => {
            let inst = ctx.instance(source, Some(capacity))?;
            let d = demand_vector(demand, inst.k())?;
            let res = waterfill(&inst, &d)?;
            json!({
                "demand": rationals(&d),
                "served": rationals(&res.served),
                "residual": rationals(&res.residual),
                "events": res.events,
                "loads": rationals(&res.allocation.loads(inst.system())),
                "allocation": res.allocation.to_json(inst.system()),
            })
        }
        Command::M3 { r } => {
            let closed = m3_closed_form(*r)?;
            let brute = match m3_brute(*r) {
                Ok(v) => Some(v),
                Err(e) if e.is_resource_limit() => None,
                Err(e) => return Err(e),
            };
            json!({
                "r": r,
                "closed_form": closed.to_string(),
                "brute_force": brute.map(|b| b.to_string()),
                "agree": brute.map(|b| b == closed),
            })
        }
        Command::Verify { source, seed, samples } => {
            let inst = ctx.instance(source, None)?;
            let options = VerifyOptions {
                seed: *seed,
                sampled_large: *samples,
                ..VerifyOptions::default()
            };
            serde_json::to_value(verify_instance(&inst, &options)?)?
        }
        Command::Slice {
            source,
            fix,
            axes,
            max,
            step,
            capacity,
        } => {
            let inst = ctx.instance(source, Some(capacity))?;
            let k = inst.k();
            let mut fixed = Vec::new();
            for part in fix.split(',').filter(|p| !p.trim().is_empty()) {
                let (sym, val) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("--fix entry {part:?} needs symbol=value")))?;
                let value = parse_rational(val)?;
                if value.is_negative() {
                    return Err(Error::InvalidParameter(format!("fixed rate {value} is negative")));
                }
                fixed.push((parse_symbol(sym, k)?, value));
            }
            let spec = SliceSpec {
                fixed,
                axes: parse_symbols(axes, k)?,
                max: parse_rational(max)?,
                step: parse_rational(step)?,
            };
            let points = slice(&inst, &spec)?;
            let labels: Vec<String> = spec.axes.iter().map(|&i| symbol_label(i, k)).collect();
            let mut buf = Vec::new();
            write_slice_csv(&mut buf, &labels, &points)?;
            return Ok(Output::Text(buf));
        }
    };
    Ok(Output::Json(out))
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    // A second initialization (e.g. repeated in-process runs) is harmless.
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Runs one invocation with explicit output streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    init_logging(cli.verbose);
    let result = execute(&cli).and_then(|output| {
        let bytes = match output {
            Output::Json(v) => {
                let mut s = serde_json::to_string_pretty(&v)?;
                s.push('\n');
                s.into_bytes()
            }
            Output::Text(b) => b,
        };
        match &cli.out {
            Some(path) => std::fs::write(path, bytes)?,
            None => stdout.write_all(&bytes)?,
        }
        Ok(())
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_resource_limit() {
                EXIT_LIMIT
            } else {
                EXIT_INPUT
            }
        }
    }
}

/// Runs with the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
