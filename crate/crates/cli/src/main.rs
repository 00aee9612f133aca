//! `hats` -- evaluation, search, exact small-n optima, bound reports, curve
//! data, and verification suites for the two-player hat puzzle.
//!
//! Exit codes: 0 success, 1 verification violation, 2 input error.
//! Stdout is byte-identical for identical flags regardless of `--threads`;
//! timing goes to stderr.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use hats_core::bounds::{improved_theorem_bound, theorem_bound, write_figure_csv};
use hats_core::exec::run_with_threads;
use hats_core::game::{
    alternating_solve, brute_force_un, eval_direct, parse_strategy_file, write_strategy_file,
    GameValue, Strategy,
};
use hats_core::verify::{
    verify_bonus, verify_chang, verify_halfspace, verify_lemma7, verify_newlemma, verify_olem,
    verify_plancherel, verify_wht, SuiteReport,
};
use hats_core::{format_significant, Result};

#[derive(Parser)]
#[command(name = "hats", version, about = "Fourier toolkit for the two-player hat puzzle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a strategy pair from a JSON file
    Eval {
        /// Path to a {n, f, g} strategy file
        #[arg(long)]
        strategies: PathBuf,
    },
    /// Seeded alternating best-response search
    Solve {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 64)]
        restarts: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_rounds: u64,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
        /// Write the best pair as a strategy file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact optimum by exhaustive enumeration (n <= 3)
    Brute {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        threads: Option<usize>,
        /// Write the witnessing pair as a strategy file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recomputed bound reports and the bound-comparison curve
    Bounds {
        /// Print both bound reports (default unless only --figure is given)
        #[arg(long)]
        report: bool,
        /// Emit the reports as JSON instead of text
        #[arg(long)]
        json: bool,
        /// Write the curve CSV to this path
        #[arg(long)]
        figure: Option<PathBuf>,
        /// Curve grid step
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run verification suites; exits 1 on any violation
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        n: u32,
        /// Sample count for suites too large to exhaust
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Concentration threshold for the lemma7 suite
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Tail-probability budget for the lemma7 suite
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        /// Emit each report as JSON instead of text
        #[arg(long)]
        json: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Suite {
    Wht,
    Plancherel,
    Olem,
    Chang,
    Bonus,
    Newlemma,
    Halfspace,
    Lemma7,
    All,
}

fn print_value(v: &GameValue) {
    println!("w = {} = {}", v.w, format_significant(v.w.to_f64(), 12));
    println!("u = {} = {}", v.u, format_significant(v.u.to_f64(), 12));
}

fn table(s: &Strategy) -> String {
    let entries: Vec<String> = s.choices().iter().map(|c| c.to_string()).collect();
    format!("[{}]", entries.join(", "))
}

/// Each suite's dimension cap, so `--suite all` can run every suite at a
/// feasible size.
fn suite_cap(s: Suite) -> u32 {
    match s {
        Suite::Wht | Suite::Plancherel => 10,
        Suite::Olem | Suite::Lemma7 => 8,
        Suite::Chang => 6,
        Suite::Bonus | Suite::Newlemma | Suite::Halfspace => 4,
        Suite::All => unreachable!("expanded before dispatch"),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_suite(
    s: Suite,
    n: u32,
    samples: u64,
    seed: u64,
    k: u32,
    eps: f64,
) -> Result<SuiteReport> {
    match s {
        Suite::Wht => verify_wht(n, samples, seed),
        Suite::Plancherel => verify_plancherel(n, samples, seed),
        Suite::Olem => verify_olem(n, samples, seed),
        Suite::Chang => verify_chang(n, samples, seed),
        Suite::Bonus => verify_bonus(n),
        Suite::Newlemma => verify_newlemma(n),
        Suite::Halfspace => verify_halfspace(n),
        Suite::Lemma7 => verify_lemma7(n, k, eps, samples, seed),
        Suite::All => unreachable!("expanded before dispatch"),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval { strategies } => {
            let (f, g) = parse_strategy_file(&strategies)?;
            let v = eval_direct(&f, &g)?;
            println!("n = {}", f.n());
            print_value(&v);
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            n,
            restarts,
            seed,
            max_rounds,
            threads,
            out,
        } => {
            let start = Instant::now();
            let r = run_with_threads(threads, || alternating_solve(n, seed, restarts, max_rounds))?;
            eprintln!("solve: {} ms", start.elapsed().as_millis());
            println!("n = {n}, restarts = {restarts}, seed = {seed}");
            print_value(&r.value);
            println!("converged = {}, iterations = {}", r.converged, r.iterations);
            println!("f = {}", table(&r.f));
            println!("g = {}", table(&r.g));
            if let Some(path) = out {
                write_strategy_file(&path, &r.f, &r.g)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Brute { n, threads, out } => {
            let start = Instant::now();
            let r = run_with_threads(threads, || brute_force_un(n))?;
            eprintln!("brute: {} ms", start.elapsed().as_millis());
            println!(
                "U_{n} = {} = {}",
                r.value.u,
                format_significant(r.value.u.to_f64(), 12)
            );
            println!(
                "w = {}, distinct matrices = {}",
                r.value.w, r.distinct_matrices
            );
            println!("f = {}", table(&r.f));
            println!("g = {}", table(&r.g));
            if let Some(path) = out {
                write_strategy_file(&path, &r.f, &r.g)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds {
            report,
            json,
            figure,
            step,
            threads,
        } => {
            run_with_threads(threads, || -> Result<()> {
                if report || json || figure.is_none() {
                    let main = theorem_bound()?;
                    let improved = improved_theorem_bound()?;
                    if json {
                        let doc = serde_json::json!({
                            "reports": [main, improved],
                        });
                        println!("{}", serde_json::to_string_pretty(&doc)?);
                    } else {
                        print!("{main}");
                        print!("{improved}");
                    }
                }
                if let Some(path) = &figure {
                    let start = Instant::now();
                    write_figure_csv(path, step)?;
                    eprintln!("figure: {} ms", start.elapsed().as_millis());
                }
                Ok(())
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            n,
            samples,
            seed,
            k,
            eps,
            json,
            threads,
        } => {
            let suites: Vec<Suite> = if suite == Suite::All {
                vec![
                    Suite::Wht,
                    Suite::Plancherel,
                    Suite::Olem,
                    Suite::Chang,
                    Suite::Bonus,
                    Suite::Newlemma,
                    Suite::Halfspace,
                    Suite::Lemma7,
                ]
            } else {
                vec![suite]
            };
            let mut failed = false;
            for s in suites {
                let n_eff = if suite == Suite::All {
                    // clamp into each suite's feasible range
                    let capped = n.min(suite_cap(s));
                    if s == Suite::Lemma7 {
                        capped.max(k.max(2))
                    } else {
                        capped
                    }
                } else {
                    n
                };
                let start = Instant::now();
                let mut r =
                    run_with_threads(threads, || run_suite(s, n_eff, samples, seed, k, eps))?;
                eprintln!("{}: {} ms", r.suite, r.elapsed_ms);
                let _ = start;
                if json {
                    // stdout stays thread-count independent; timing is on stderr
                    r.elapsed_ms = 0;
                    println!("{}", serde_json::to_string(&r)?);
                } else {
                    println!("{r}");
                }
                failed |= !r.passed();
            }
            Ok(if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
