use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use khl_core::field::FieldKind;
use khl_core::hfk11::{build_cfk, OneOneDiagram};
use khl_core::homalg::{hfk_hat_groups, tau_from_cfk, Cfk};
use khl_core::invar::{
    run_report, skein_propagate, InvariantReport, ReportInput, ReportOptions, SkeinDeduction, SkeinInput, Task, FIXTURE_IDS,
};
use khl_core::scan::DEFAULT_MAX_GENERATORS;

/// Khovanov homology, Rasmussen's s and knot Floer invariants of
/// Whitehead doubles.
#[derive(Parser)]
#[command(name = "khl", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Independent tasks run concurrently on up to this many threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Report cache directory.
    #[arg(long, global = true, env = "KHL_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Abort a scan whose intermediate complex exceeds this many generators.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GENERATORS)]
    max_generators: usize,
    /// Print the JSON report instead of the summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Khovanov homology Poincaré polynomial.
    Kh {
        /// builder expression, PD code, or a file holding either
        input: String,
        #[arg(long, default_value = "q")]
        field: FieldKind,
    },
    /// Rasmussen's s via the Lee complex over Q.
    S { input: String },
    /// Knot Floer homology table of a (1,1) diagram, CFK file or fixture.
    Hfk { input: String },
    /// τ from a (1,1) diagram, CFK file, fixture, or a double of T(2,2n+1).
    Tau { input: String },
    /// τ(D_+(T(2,2n+1), t)) from the skein deduction.
    Skein {
        #[arg(long)]
        n: i64,
    },
    /// Combined report.
    Report {
        input: String,
        /// comma-separated subset of kh,s,hfk,tau,skein, or `all`
        #[arg(long, default_value = "all")]
        tasks: String,
        #[arg(long, default_value = "q")]
        field: FieldKind,
    },
    /// List the bundled fixtures.
    Fixtures,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let g = &cli.global;
    let opts = |field| ReportOptions { field, max_generators: g.max_generators, jobs: g.jobs, cache_dir: g.cache_dir.clone() };
    match &cli.cmd {
        Cmd::Kh { input, field } => {
            let r = report(input, &[Task::Kh], &opts(*field))?;
            if g.json {
                println!("{}", r.to_json());
            } else {
                println!("{}", r.results.kh.as_ref().unwrap().poincare);
            }
        }
        Cmd::S { input } => {
            let r = report(input, &[Task::S], &opts(FieldKind::Q))?;
            if g.json {
                println!("{}", r.to_json());
            } else {
                println!("s = {}", r.results.s.as_ref().unwrap().value);
            }
        }
        Cmd::Hfk { input } => {
            if let Some(r) = fixture_report(input, &[Task::Hfk], &opts(FieldKind::F2))? {
                let h = r.results.hfk.as_ref().unwrap();
                if g.json {
                    println!("{}", r.to_json());
                } else {
                    if h.maslov_doubled {
                        println!("# Maslov gradings doubled");
                    }
                    println!("{}", h.table);
                }
            } else {
                let groups = hfk_hat_groups(&load_cfk(input)?)?;
                if g.json {
                    println!("{}", serde_json::to_string_pretty(&groups)?);
                } else {
                    println!("{groups}");
                }
            }
        }
        Cmd::Tau { input } => {
            let (value, source) = if Path::new(input).is_file() {
                (tau_from_cfk(&load_cfk(input)?)?, format!("cfk:{input}"))
            } else {
                let r = report(input, &[Task::Tau], &opts(FieldKind::F2))?;
                let t = r.results.tau.unwrap();
                (t.value, t.source)
            };
            if g.json {
                println!("{}", serde_json::json!({ "tau": value, "source": source }));
            } else {
                println!("tau = {value} ({source})");
            }
        }
        Cmd::Skein { n } => {
            let d = skein_propagate(SkeinInput::for_torus(*n)?)?;
            if g.json {
                println!("{}", serde_json::to_string_pretty(&d)?);
            } else {
                print_skein(*n, &d);
            }
        }
        Cmd::Report { input, tasks, field } => {
            let parsed = parse_input(input)?;
            let set: BTreeSet<Task> = if tasks.trim() == "all" {
                Task::ALL.into_iter().filter(|t| t.applies_to(&parsed)).collect()
            } else {
                tasks.split(',').map(|t| t.parse::<Task>().map_err(anyhow::Error::msg)).collect::<Result<_>>()?
            };
            let (r, _) = run_report(&parsed, &set, &opts(*field))?;
            println!("{}", r.to_json());
        }
        Cmd::Fixtures => {
            for id in FIXTURE_IDS {
                println!("{id}");
            }
        }
    }
    Ok(())
}

/// Fixture id, builder expression, or a file containing an expression.
fn parse_input(input: &str) -> Result<ReportInput> {
    if Path::new(input).is_file() {
        let text = std::fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
        return ReportInput::parse(text.trim()).with_context(|| format!("parsing {input}"));
    }
    Ok(ReportInput::parse(input)?)
}

fn report(input: &str, tasks: &[Task], opts: &ReportOptions) -> Result<InvariantReport> {
    let parsed = parse_input(input)?;
    let (r, cached) = run_report(&parsed, &tasks.iter().copied().collect(), opts)?;
    log::info!("{} ({})", r.cache_key, if cached { "cached" } else { "computed" });
    Ok(r)
}

fn fixture_report(input: &str, tasks: &[Task], opts: &ReportOptions) -> Result<Option<InvariantReport>> {
    if Path::new(input).is_file() {
        return Ok(None);
    }
    match ReportInput::parse(input) {
        Ok(parsed) => Ok(Some(run_report(&parsed, &tasks.iter().copied().collect(), opts)?.0)),
        Err(_) => bail!("`{input}` is neither a file nor a known fixture or expression"),
    }
}

/// A (1,1) diagram file, or a CFK file.
fn load_cfk(path: &str) -> Result<Cfk> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    match text.parse::<OneOneDiagram>() {
        Ok(d) => Ok(build_cfk(&d).with_context(|| format!("diagram {path}"))?),
        Err(diag_err) => match text.parse::<Cfk>() {
            Ok(c) => {
                c.check()?;
                Ok(c)
            }
            Err(cfk_err) => bail!("{path}: not a (1,1) diagram ({diag_err}) nor a CFK file ({cfk_err})"),
        },
    }
}

fn print_skein(n: i64, d: &SkeinDeduction) {
    let i = &d.input;
    println!("K = T(2,{}), t_start = {}, e_start = {}, e_end = {}", 2 * n + 1, i.t_start, i.e_start, i.e_end);
    println!("{:>4}  {:<10}  tau(D(t))", "t", "f2");
    for &(t, tau) in &d.tau {
        let f2 = d.f2.iter().find(|e| e.0 == t).map_or("-", |e| match e.1 {
            khl_core::invar::F2Status::Trivial => "trivial",
            khl_core::invar::F2Status::Nontrivial => "nontrivial",
        });
        println!("{t:>4}  {f2:<10}  {tau}");
    }
    let nontrivial: Vec<String> = d.nontrivial().iter().map(|t| t.to_string()).collect();
    println!("nontrivial = {{{}}}", nontrivial.join(", "));
    println!("t_tau = {}", d.t_tau);
    println!("tau(D(t)) = 0 for t > {0}, 1 for t <= {0}", d.t_tau);
}
