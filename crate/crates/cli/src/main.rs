use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use cornertree::algebra::{expand_tree, solve_for_target, span_dimension, SpanOptions};
use cornertree::corner::{enumerate_corner_trees, trees_up_to};
use cornertree::io::{parse_permutations, profile_to_json, read_csv_sample, CsvColumns};
use cornertree::perm::patterns_of_size;
use cornertree::profile::{count_pattern_fast_with, profile4_with, FourthCount, Profile4Options};
use cornertree::stats::{decimal_string, kendall_tau, rank_transform, tstar_pvalue_perm, tstar_with, TiePolicy};
use cornertree::{count_pattern_brute, k_profile_brute, profile3, CornerTree, Error, Execution, PatternSum, Permutation};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cornertree", version, about = "Count permutation patterns with corner trees")]
struct Cli {
    /// Cap on worker threads; 1 runs everything on the calling thread.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit JSON even where plain text is the default.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PermInput {
    /// Permutation in one-line notation, e.g. "2 3 6 4 7 5 1".
    perm: Option<String>,
    /// Read permutations from a file, one per line.
    #[arg(long, conflicts_with = "perm")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct FastOptions {
    /// Strip width for the #3241 / #3214 counters.
    #[arg(long)]
    m: Option<usize>,
    /// Algorithm for the 24th 4-profile equation.
    #[arg(long, default_value = "3241", value_parser = parse_algorithm)]
    algorithm: FourthCount,
}

#[derive(Args)]
struct SampleInput {
    /// CSV file with the sample; standard input when omitted.
    csv: Option<PathBuf>,
    #[arg(long, conflicts_with = "csv")]
    file: Option<PathBuf>,
    /// 0-based column holding x.
    #[arg(long, default_value_t = 0)]
    x_col: usize,
    /// 0-based column holding y.
    #[arg(long, default_value_t = 1)]
    y_col: usize,
    #[arg(long, default_value = "strict", value_parser = parse_ties)]
    ties: TiePolicy,
}

#[derive(Subcommand)]
enum Command {
    /// Count occurrences of a pattern.
    Count {
        pattern: String,
        #[command(flatten)]
        input: PermInput,
        /// Enumerate all subsets instead of using a fast path.
        #[arg(long)]
        brute: bool,
        #[command(flatten)]
        fast: FastOptions,
    },
    /// Print the 3- or 4-profile as JSON.
    Profile {
        k: usize,
        #[command(flatten)]
        input: PermInput,
        #[command(flatten)]
        fast: FastOptions,
    },
    /// Kendall's tau, T* and optionally a permutation-test p-value for a CSV sample.
    Tstar {
        #[command(flatten)]
        sample: SampleInput,
        /// Number of Monte-Carlo iterations for the p-value.
        #[arg(long)]
        pvalue: Option<u64>,
        /// Seed for the p-value; required with --pvalue.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Kendall's tau for a CSV sample.
    Tau {
        #[command(flatten)]
        sample: SampleInput,
    },
    /// List canonical corner trees with k vertices.
    Trees {
        k: usize,
        /// Include all trees with at most k vertices.
        #[arg(long)]
        up_to: bool,
    },
    /// Dimension of the corner-tree span in the k-patterns.
    Span {
        k: usize,
        /// Use only trees with exactly k vertices.
        #[arg(long)]
        exact_k: bool,
    },
    /// Expand a corner tree into pattern counts.
    Expand { tree: String },
    /// Find a corner-tree formula for a pattern or a JSON pattern combination.
    Solve { target: String, k: usize },
    /// Generate permutations.
    Gen {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value = "random", value_parser = ["random", "identity", "reverse"])]
        kind: String,
    },
    /// Brute-force pattern count, or the brute k-profile with --profile.
    Oracle {
        pattern: String,
        #[command(flatten)]
        input: PermInput,
        /// Treat the first argument as k and print the whole k-profile.
        #[arg(long)]
        profile: bool,
    },
    /// Compare fast and brute counts on seeded random inputs.
    #[command(hide = true)]
    SelfTest {
        #[arg(long, default_value_t = 30)]
        max_n: usize,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_algorithm(s: &str) -> Result<FourthCount, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ties(s: &str) -> Result<TiePolicy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::NoFastPath(_) | Error::BoundExceeded { .. } => 3,
            Error::TiesPresent(_) => 4,
            Error::DuplicateValue(_)
            | Error::OutOfRange { .. }
            | Error::Malformed(_)
            | Error::TreeSyntax(_)
            | Error::NonFinite
            | Error::NTooSmall { .. }
            | Error::KTooLarge { .. }
            | Error::Format(_) => 2,
            _ => 1,
        };
    }
    if err.downcast_ref::<io::Error>().is_some() {
        return 2;
    }
    1
}

fn read_stdin() -> anyhow::Result<String> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s).context("reading standard input")?;
    Ok(s)
}

fn permutations(input: &PermInput) -> anyhow::Result<Vec<Permutation>> {
    let text = match (&input.perm, &input.file) {
        (Some(p), _) => p.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        (None, None) => read_stdin()?,
    };
    let perms = parse_permutations(&text)?;
    if perms.is_empty() {
        bail!(Error::Malformed("no permutation given".into()));
    }
    Ok(perms)
}

fn sample_permutation(s: &SampleInput) -> anyhow::Result<Permutation> {
    let columns = CsvColumns { x: s.x_col, y: s.y_col };
    let sample = match s.csv.as_ref().or(s.file.as_ref()) {
        Some(path) => {
            let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            read_csv_sample(BufReader::new(f), columns)?
        }
        None => read_csv_sample(io::stdin().lock(), columns)?,
    };
    Ok(rank_transform(&sample, s.ties)?)
}

fn pattern(s: &str) -> anyhow::Result<Permutation> {
    Ok(Permutation::parse_pattern(s)?)
}

fn options(fast: &FastOptions, exec: Execution) -> Profile4Options {
    Profile4Options { algorithm: fast.algorithm, m: fast.m, exec }
}

fn tau_fields(pi: &Permutation) -> anyhow::Result<(f64, String)> {
    let tau = kendall_tau(pi)?;
    Ok((tau.to_f64().unwrap_or(f64::NAN), tau.to_string()))
}

fn configure_threads(threads: Option<usize>) -> anyhow::Result<Execution> {
    match threads {
        Some(0) => bail!(Error::Format("--threads must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(t) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => {
            eprintln!("warning: built without the parallel feature; --threads is ignored");
            Ok(Execution::Sequential)
        }
        None => Ok(Execution::default()),
    }
}

fn print(out: &mut impl Write, v: &Value) -> anyhow::Result<()> {
    writeln!(out, "{v}")?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let exec = configure_threads(cli.threads)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Count { pattern: p, input, brute, fast } => {
            let sigma = pattern(&p)?;
            if !brute && sigma.len() > 4 {
                eprintln!("no fast path for patterns of size {}; rerun with --brute", sigma.len());
                bail!(Error::NoFastPath(sigma.len()));
            }
            for pi in permutations(&input)? {
                let c = if brute {
                    count_pattern_brute(&sigma, &pi)
                } else {
                    count_pattern_fast_with(&sigma, &pi, options(&fast, exec))?
                };
                if cli.json {
                    print(&mut out, &json!({"pattern": p, "n": pi.len(), "count": c.to_string()}))?;
                } else {
                    writeln!(out, "{c}")?;
                }
            }
        }
        Command::Profile { k, input, fast } => {
            for pi in permutations(&input)? {
                let profile = match k {
                    3 => profile3(&pi),
                    4 => profile4_with(&pi, options(&fast, exec))?,
                    _ => bail!(Error::Format(format!("profile supports k = 3 or 4, got {k}"))),
                };
                print(&mut out, &profile_to_json(&profile))?;
            }
        }
        Command::Tstar { sample, pvalue, seed } => {
            let pi = sample_permutation(&sample)?;
            let (tau, tau_exact) = tau_fields(&pi)?;
            let t = tstar_with(&pi, exec)?;
            let mut doc = json!({
                "n": t.n,
                "tau": tau,
                "tau_exact": tau_exact,
                "tstar_raw": t.raw.to_string(),
                "tstar_normalized": t.normalized_f64(),
                "tstar_normalized_exact": t.normalized.to_string(),
                "tstar_normalized_decimal": decimal_string(&t.normalized, 12),
            });
            if let Some(iterations) = pvalue {
                let seed = seed.ok_or_else(|| Error::Format("--pvalue requires --seed".into()))?;
                let p = tstar_pvalue_perm(&pi, iterations, seed, exec)?;
                doc["pvalue"] = json!(p.value());
                doc["pvalue_iterations"] = json!(iterations);
                doc["pvalue_exceedances"] = json!(p.exceedances);
                doc["seed"] = json!(seed);
            }
            print(&mut out, &doc)?;
        }
        Command::Tau { sample } => {
            let pi = sample_permutation(&sample)?;
            let (tau, tau_exact) = tau_fields(&pi)?;
            print(&mut out, &json!({"n": pi.len(), "tau": tau, "tau_exact": tau_exact}))?;
        }
        Command::Trees { k, up_to } => {
            let limit = cornertree::algebra::DEFAULT_BOUND;
            if k > limit {
                bail!(Error::BoundExceeded { size: k, bound: limit });
            }
            let trees = if up_to { trees_up_to(k) } else { enumerate_corner_trees(k) };
            if cli.json {
                print(&mut out, &json!(trees.iter().map(ToString::to_string).collect::<Vec<_>>()))?;
            } else {
                for t in trees {
                    writeln!(out, "{t}")?;
                }
            }
        }
        Command::Span { k, exact_k } => {
            let span = span_dimension(k, SpanOptions { exact_k_only: exact_k, exec, ..SpanOptions::default() })?;
            if cli.json {
                print(
                    &mut out,
                    &json!({
                        "k": k,
                        "dimension": span.dimension,
                        "intersection_dimension": span.intersection_dimension,
                        "trees_considered": span.trees_considered,
                        "leading_basis": span.leading_basis.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "basis": span.basis.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
                    }),
                )?;
            } else {
                writeln!(out, "{}", span.dimension)?;
            }
        }
        Command::Expand { tree } => {
            let t: CornerTree = tree.parse()?;
            print(&mut out, &expand_tree(&t)?.to_json())?;
        }
        Command::Solve { target, k } => {
            let limit = cornertree::algebra::DEFAULT_BOUND;
            if k > limit {
                bail!(Error::BoundExceeded { size: k, bound: limit });
            }
            let target = if target.trim_start().starts_with('{') {
                let v: Value = serde_json::from_str(&target).map_err(|e| Error::Format(e.to_string()))?;
                PatternSum::from_json(&v)?
            } else {
                PatternSum::single(pattern(&target)?)
            };
            match solve_for_target(&target, &trees_up_to(k))? {
                Some(f) if cli.json => print(&mut out, &json!({"status": "Solved", "formula": f.to_json()}))?,
                Some(f) => print(&mut out, &f.to_json())?,
                None if cli.json => print(&mut out, &json!({"status": "NotInSpan"}))?,
                None => writeln!(out, "NotInSpan")?,
            }
        }
        Command::Gen { n, seed, count, kind } => {
            for i in 0..count {
                let pi = match kind.as_str() {
                    "identity" => Permutation::identity(n),
                    "reverse" => Permutation::reversed_identity(n),
                    _ => cornertree::stats::null_permutation(n, seed, i as u64),
                };
                writeln!(out, "{pi}")?;
            }
        }
        Command::Oracle { pattern: p, input, profile } => {
            let perms = permutations(&input)?;
            if profile {
                let k: usize = p.parse().map_err(|_| Error::Format(format!("expected k, got {p:?}")))?;
                for pi in perms {
                    print(&mut out, &profile_to_json(&k_profile_brute(&pi, k)?))?;
                }
            } else {
                let sigma = pattern(&p)?;
                for pi in perms {
                    writeln!(out, "{}", count_pattern_brute(&sigma, &pi))?;
                }
            }
        }
        Command::SelfTest { max_n, cases, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut failures = 0usize;
            for case in 0..cases {
                let pi = Permutation::random(case % (max_n + 1), &mut rng);
                for k in 1..=4 {
                    for sigma in patterns_of_size(k) {
                        let fast = count_pattern_fast_with(&sigma, &pi, Profile4Options { exec, ..Default::default() })?;
                        let brute = count_pattern_brute(&sigma, &pi);
                        if fast != brute {
                            failures += 1;
                            eprintln!("mismatch: #{sigma}({pi}) fast {fast} brute {brute}");
                        }
                    }
                }
            }
            print(&mut out, &json!({"cases": cases, "max_n": max_n, "failures": failures}))?;
            if failures > 0 {
                bail!("{failures} fast counts disagree with brute force");
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
