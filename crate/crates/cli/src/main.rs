//! Command-line front end: every analysis as a batch command over the text
//! formats, with exit codes scripts can branch on.
//!
//! Exit status: 0 = success (and, for `check`/`verify`, the inequality
//! holds); 1 = an inequality was violated or the tree does not compute the
//! function (a counterexample is printed); 2 = usage, file or parse error.

use bft_core::boolfn::{BooleanFunction, DEFAULT_TRANSFORM_GUARD, MAX_ARITY};
use bft_core::bounds::{self, BoundsError};
use bft_core::oracle::{self, SuiteConfig};
use bft_core::pdt::{LeafSummary, ParityDecisionTree};
use bft_core::rational::integer;
use clap::{Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bft",
    version,
    about = "Exact-arithmetic analysis of Boolean functions and parity decision trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the nonzero Fourier coefficients of a function, exactly
    Spectrum {
        /// Truth-table file, or builtin:{maj3|parity:n|dictator:n:i|recmaj:k|constant:n:s}
        function: String,
    },
    /// Depth, exact moment statistics and per-leaf analysis of a tree
    PdtStats {
        /// Parity-decision-tree file
        tree: PathBuf,
    },
    /// Refine a tree until no path fixes x_i ⊕ x_j without fixing both
    Refine {
        /// Parity-decision-tree file
        tree: PathBuf,
    },
    /// Check one registered inequality on a function and a tree computing it
    Check {
        /// Which inequality to check
        #[arg(long, value_enum)]
        which: WhichCheck,
        /// Truth-table file or builtin spec
        function: String,
        /// Parity-decision-tree file
        tree: PathBuf,
        /// Also write the structured report to this path
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact (3/2)^k linear-coefficient sums of recursive majority and the
    /// resulting depth lower bound; k <= 3 is re-verified from the table
    Recmaj {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// Exact minimum parity-decision-tree depth with a certificate (n <= 4)
    Solve {
        /// Truth-table file or builtin spec
        function: String,
    },
    /// Run the verification suites
    Verify {
        /// Seed for every randomized suite
        #[arg(long)]
        seed: Option<u64>,
        /// Trial scale: moment suite = N, other random suites = max(1, N/10),
        /// random Fourier comparisons = max(1, N/100)
        #[arg(long)]
        trials: Option<usize>,
        /// Also write the full report to this path
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichCheck {
    Theorem1,
    Theorem4,
    Lemma1,
    Lemma3,
    Entropy,
}

/// Failures that terminate the invocation, by exit code.
enum Failure {
    /// Exit 1: a checked property is false for these inputs.
    Violation(String),
    /// Exit 2: the invocation itself is unusable.
    Usage(String),
}

impl Failure {
    fn usage(err: impl std::fmt::Display) -> Failure {
        Failure::Usage(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(message)) => {
            println!("{message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Spectrum { function } => spectrum(&function),
        Command::PdtStats { tree } => pdt_stats(&tree),
        Command::Refine { tree } => refine(&tree),
        Command::Check {
            which,
            function,
            tree,
            report,
        } => check(which, &function, &tree, report.as_deref()),
        Command::Recmaj { k } => recmaj(k),
        Command::Solve { function } => solve(&function),
        Command::Verify {
            seed,
            trials,
            report,
        } => verify(seed, trials, report.as_deref()),
    }
}

fn load_function(spec: &str) -> Result<BooleanFunction, Failure> {
    if let Some(builtin) = spec.strip_prefix("builtin:") {
        return BooleanFunction::builtin(builtin).map_err(Failure::usage);
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| Failure::Usage(format!("cannot read function file {spec:?}: {e}")))?;
    BooleanFunction::parse(&text)
        .map_err(|e| Failure::Usage(format!("function file {spec:?}: {e}")))
}

fn load_tree(path: &Path) -> Result<ParityDecisionTree, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read tree file {path:?}: {e}")))?;
    ParityDecisionTree::parse(&text).map_err(|e| Failure::Usage(format!("tree file {path:?}: {e}")))
}

/// The full-transform memory guard, overridable via BFT_MAX_N (capped at
/// the packed-table arity limit).
fn transform_guard() -> Result<usize, Failure> {
    match std::env::var("BFT_MAX_N") {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_TRANSFORM_GUARD),
        Err(e) => Err(Failure::Usage(format!("BFT_MAX_N: {e}"))),
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .map(|n| n.min(MAX_ARITY))
            .map_err(|_| Failure::Usage(format!("BFT_MAX_N: {raw:?} is not an integer"))),
    }
}

fn mask_indices(mask: u64) -> String {
    let indices: Vec<String> = (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", indices.join(","))
}

fn spectrum(function: &str) -> Result<(), Failure> {
    let f = load_function(function)?;
    let guard = transform_guard()?;
    let sp = f.spectrum_within(guard).map_err(Failure::usage)?;
    println!("n: {}", sp.arity());
    for (mask, _) in sp.nonzero() {
        println!("coef {} = {}", mask_indices(mask), sp.coefficient(mask));
    }
    println!("degree: {}", sp.degree());
    println!("linear_sum: {}", sp.linear_sum());
    Ok(())
}

fn leaf_line(leaf: &LeafSummary) -> String {
    let vector: Vec<String> = leaf.vector.iter().map(|v| v.to_string()).collect();
    let mut line = format!(
        "  leaf \"{}\" label={} mass={} length={} vector=({}) sum={}",
        leaf.path,
        leaf.label,
        leaf.mass,
        leaf.path_length,
        vector.join(","),
        leaf.vector_sum()
    );
    if !leaf.summary.correlated_pairs.is_empty() {
        let pairs: Vec<String> = leaf
            .summary
            .correlated_pairs
            .iter()
            .map(|(i, j)| format!("{{{},{}}}", i + 1, j + 1))
            .collect();
        let _ = write!(line, " correlated={}", pairs.join(","));
    }
    if !leaf.summary.consistent {
        line.push_str(" dead");
    }
    line
}

fn pdt_stats(path: &Path) -> Result<(), Failure> {
    let tree = load_tree(path)?;
    let leaves = tree.leaf_summaries();
    println!("n: {}", tree.arity());
    println!("depth: {}", tree.depth());
    println!("average_depth: {}", tree.average_depth());
    println!(
        "second_moment: {}",
        bft_core::pdt::second_moment_of(&leaves)
    );
    println!(
        "first_abs_moment: {}",
        bft_core::pdt::first_abs_moment_of(&leaves)
    );
    match tree.correlation_witness() {
        None => println!("correlation_free: true"),
        Some((leaf, (i, j))) => {
            println!(
                "correlation_free: false (leaf \"{leaf}\" pair {{{},{}}})",
                i + 1,
                j + 1
            );
        }
    }
    println!("leaves: {}", leaves.len());
    for leaf in &leaves {
        println!("{}", leaf_line(leaf));
    }
    Ok(())
}

fn refine(path: &Path) -> Result<(), Failure> {
    let tree = load_tree(path)?;
    let refined = tree.refine_correlation_free();
    println!(
        "before: depth={} second_moment={} correlation_free={}",
        tree.depth(),
        tree.second_moment(),
        tree.is_correlation_free()
    );
    println!(
        "after:  depth={} second_moment={} correlation_free={}",
        refined.depth(),
        refined.second_moment(),
        refined.is_correlation_free()
    );
    println!("refined:");
    print!("{}", refined.serialize());
    Ok(())
}

fn map_bounds_error(err: BoundsError, f: &BooleanFunction, tree: &ParityDecisionTree) -> Failure {
    match err {
        BoundsError::DoesNotCompute { point } => Failure::Violation(format!(
            "tree does not compute the function: at point {point}, f = {} but the tree returns {}",
            f.sign_at(point),
            tree.value_at(point)
        )),
        other => Failure::usage(other),
    }
}

fn write_report(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    if let Some(path) = path {
        fs::write(path, contents)
            .map_err(|e| Failure::Usage(format!("cannot write report {path:?}: {e}")))?;
    }
    Ok(())
}

fn check(
    which: WhichCheck,
    function: &str,
    tree_path: &Path,
    report_path: Option<&Path>,
) -> Result<(), Failure> {
    let f = load_function(function)?;
    let tree = load_tree(tree_path)?;
    if let WhichCheck::Entropy = which {
        let report =
            bounds::entropy_chain(&f, &tree).map_err(|e| map_bounds_error(e, &f, &tree))?;
        for line in report.tsv_lines() {
            println!("{line}");
        }
        print!("{}", report.structured_text());
        write_report(report_path, &report.structured_text())?;
        if report.chain_holds {
            return Ok(());
        }
        return Err(Failure::Violation("entropy chain violated".to_string()));
    }
    let report = match which {
        WhichCheck::Theorem1 => bounds::theorem1_check(&f, &tree),
        WhichCheck::Theorem4 => bounds::theorem4_check(&f, &tree),
        WhichCheck::Lemma1 => bounds::lemma1_check(&f, &tree),
        WhichCheck::Lemma3 => bounds::lemma3_check(&f, &tree),
        WhichCheck::Entropy => unreachable!("handled above"),
    }
    .map_err(|e| map_bounds_error(e, &f, &tree))?;
    println!("{}", report.tsv_line());
    print!("{}", report.structured_text());
    if report.is_equality() {
        println!("note: equality case");
    }
    write_report(report_path, &report.structured_text())?;
    if report.holds {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "{} violated: {} > {}",
            report.name, report.lhs, report.rhs_bound
        )))
    }
}

fn recmaj(k: u32) -> Result<(), Failure> {
    let sum = bounds::recmaj_linear_sum(k);
    let bound = bounds::depth_bound_from_linear_sum(&sum, &integer(1));
    println!("k: {k}");
    println!("arity: 3^{k}");
    println!("linear_sum: {sum}");
    println!("depth_lower_bound: {bound}");
    if 3usize.pow(k) <= MAX_ARITY {
        let streamed = BooleanFunction::recursive_majority(k)
            .map_err(Failure::usage)?
            .linear_coefficient_sum();
        println!("streamed_sum: {streamed}");
        if streamed != sum {
            return Err(Failure::Violation(format!(
                "streamed truth-table sum {streamed} disagrees with the recursion {sum}"
            )));
        }
        println!("streamed_match: true");
    } else {
        println!("streamed_sum: skipped (arity 3^{k} exceeds the cap {MAX_ARITY})");
    }
    Ok(())
}

fn solve(function: &str) -> Result<(), Failure> {
    let f = load_function(function)?;
    let certificate = oracle::min_pdt_depth(&f).map_err(Failure::usage)?;
    println!("min_pdt_depth: {}", certificate.depth);
    println!("certificate:");
    print!("{}", certificate.tree.serialize());
    Ok(())
}

fn verify(
    seed: Option<u64>,
    trials: Option<usize>,
    report_path: Option<&Path>,
) -> Result<(), Failure> {
    let mut cfg = SuiteConfig::default();
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(n) = trials {
        cfg.lemma1_trials = n;
        cfg.entropy_trials = (n / 10).max(1);
        cfg.refine_trials = (n / 10).max(1);
        cfg.split_trials = (n / 10).max(1);
        cfg.fourier_trials = (n / 100).max(1);
    }
    let report = oracle::run_suite(&cfg);
    println!("{report}");
    write_report(report_path, &report.to_string())?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Violation(
            "verification suite reported failures".to_string(),
        ))
    }
}
