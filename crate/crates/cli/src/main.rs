use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use capable_core::oracle::{self, EnumSpec, SuiteOptions, SuiteReport, DEFAULT_CEILING};
use capable_core::{
    classify_4gen, closure, decide, is_raw_subspace, parse, parse_raw_subspace, to_subspace, Error,
    Fp, LinearMap, SpaceContext, Subspace, Verdict,
};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(
    name = "capable",
    version,
    about = "Decide capability of p-groups of class two and exponent p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,

    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide capability of the group given by a presentation file.
    Check {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Compute X*, X** for a presentation or raw subspace file.
    Closure {
        file: PathBuf,
        /// Prime for raw subspace files without a `p` line.
        #[arg(long)]
        p: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Classify a group on at most four generators.
    Classify4 {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run a verification suite.
    Verify {
        /// Suite name; `list` prints the available suites.
        suite: String,
        /// Generator count; required for every suite.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sampled instances when exhaustive enumeration is over
        /// the ceiling (also the instance count of randomized suites).
        #[arg(long)]
        sample: Option<usize>,
        /// Largest number of subspaces enumerated exhaustively.
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: u128,
        #[command(flatten)]
        output: Output,
    },
    /// List k-dimensional subspaces of V(n) (or of F_p^ambient).
    Enumerate {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long)]
        k: usize,
        /// Enumerate in F_p^ambient instead of V(n).
        #[arg(long)]
        ambient: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: u128,
        /// Print only the number of subspaces.
        #[arg(long)]
        count_only: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Print the ψ_i and φ_k matrices with their basis labels.
    DumpMaps {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[command(flatten)]
        output: Output,
    },
}

/// Input problems and infeasible requests exit with 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<(String, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn vector(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("({})", parts.join(" "))
}

fn verdict_text(v: &Verdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "capable: {}", if v.capable { "yes" } else { "no" });
    let _ = writeln!(s, "reason: {}", v.reason);
    let _ = writeln!(s, "n: {}  p: {}", v.n, v.p);
    let _ = write!(s, "dim X: {}", v.dim_x);
    match v.dim_x_closure {
        Some(d) => {
            let _ = writeln!(s, "  dim X**: {d}");
        }
        None => s.push('\n'),
    }
    if !v.trace.steps.is_empty() {
        s.push_str("trace:\n");
        for (i, step) in v.trace.steps.iter().enumerate() {
            let _ = writeln!(
                s,
                "  {}. {} (n = {}, dim X = {}): {}",
                i + 1,
                step.kind,
                step.n,
                step.dim_x,
                step.detail
            );
        }
    }
    if let Some(w) = &v.witness {
        let _ = writeln!(s, "witness: {}", vector(w));
    }
    s
}

fn cmd_check(file: &Path, output: &Output) -> CmdResult {
    let verdict = decide(&parse(&read(file)?)?)?;
    let text = if output.json {
        to_json(&verdict)
    } else {
        verdict_text(&verdict)
    };
    Ok((text, if verdict.capable { 0 } else { 1 }))
}

fn load_subspace(file: &Path, p: Option<u64>) -> Result<(SpaceContext, Subspace), Failure> {
    let text = read(file)?;
    if is_raw_subspace(&text) {
        Ok(parse_raw_subspace(&text, p)?)
    } else {
        Ok(to_subspace(&parse(&text)?)?)
    }
}

fn cmd_closure(file: &Path, p: Option<u64>, output: &Output) -> CmdResult {
    let (ctx, x) = load_subspace(file, p)?;
    let r = closure(&ctx, &x)?;
    let dims = r.dims();
    let text = if output.json {
        to_json(&json!({
            "n": ctx.n(),
            "p": ctx.p(),
            "dim_X": dims.dim_x,
            "dim_X_star": dims.dim_x_star,
            "dim_X_closure": dims.dim_x_closure,
            "closed": r.closed,
            "witness": r.witness,
        }))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "n: {}  p: {}", ctx.n(), ctx.p());
        let _ = writeln!(s, "dim X: {}", dims.dim_x);
        let _ = writeln!(s, "dim X*: {}", dims.dim_x_star);
        let _ = writeln!(s, "dim X**: {}", dims.dim_x_closure);
        let _ = writeln!(s, "closed: {}", if r.closed { "yes" } else { "no" });
        if let Some(w) = &r.witness {
            let _ = writeln!(s, "witness: {}", vector(w));
        }
        s
    };
    Ok((text, if r.closed { 0 } else { 1 }))
}

fn cmd_classify4(file: &Path, output: &Output) -> CmdResult {
    let label = classify_4gen(&parse(&read(file)?)?)?;
    let text = if output.json {
        to_json(&json!({ "classification": label }))
    } else {
        format!("{label}\n")
    };
    Ok((
        text,
        if label == capable_core::Classification::Capable {
            0
        } else {
            1
        },
    ))
}

fn report_text(r: &SuiteReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} n={} p={}: {} ({} checked, {} ms)",
        r.suite,
        r.n,
        r.p,
        if r.passed() { "PASS" } else { "FAIL" },
        r.checked,
        r.elapsed_ms
    );
    for (k, v) in &r.params {
        let _ = writeln!(s, "  param {k} = {v}");
    }
    if let Some(seed) = r.seed {
        let _ = writeln!(s, "  seed = {seed}");
    }
    for (k, v) in &r.stats {
        let _ = writeln!(s, "  {k} = {v}");
    }
    for v in &r.violations {
        let _ = writeln!(
            s,
            "  violation: input {} expected {} got {}",
            v.input, v.expected, v.got
        );
    }
    s
}

fn cmd_verify(
    suite: &str,
    n: Option<usize>,
    p: u64,
    opts: SuiteOptions,
    output: &Output,
) -> CmdResult {
    if suite == "list" {
        return Ok((oracle::SUITES.join("\n") + "\n", 0));
    }
    let n = n.ok_or_else(|| Failure("--n is required".into()))?;
    let report = oracle::run_suite(suite, n, p, &opts)?;
    let text = if output.json {
        to_json(&report)
    } else {
        report_text(&report)
    };
    Ok((text, if report.passed() { 0 } else { 1 }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_enumerate(
    n: Option<usize>,
    p: u64,
    k: usize,
    ambient: Option<usize>,
    seed: u64,
    sample: Option<usize>,
    ceiling: u128,
    count_only: bool,
    output: &Output,
) -> CmdResult {
    let field = Fp::new(p)?;
    let m = match (ambient, n) {
        (Some(m), _) => m,
        (None, Some(n)) => SpaceContext::with_field(field, n)?.dim_v(),
        (None, None) => return Err(Failure("one of --n or --ambient is required".into())),
    };
    let spec = EnumSpec {
        ambient_dim: m,
        dim_k: k,
        field,
        sample,
        seed,
        ceiling,
    };
    if count_only {
        let count = match sample {
            Some(s) => s as u128,
            None => spec.count(),
        };
        let text = if output.json {
            to_json(&json!({ "ambient": m, "k": k, "p": p, "count": count as u64 }))
        } else {
            format!("{count}\n")
        };
        return Ok((text, 0));
    }
    let subspaces: Vec<Vec<Vec<u32>>> = oracle::enumerate_subspaces(&spec)?
        .map(|x| x.basis_vectors().map(<[u32]>::to_vec).collect())
        .collect();
    let text = if output.json {
        to_json(&json!({
            "ambient": m,
            "k": k,
            "p": p,
            "count": subspaces.len(),
            "subspaces": subspaces,
        }))
    } else {
        let mut s = String::new();
        for basis in &subspaces {
            let rows: Vec<String> = basis.iter().map(|r| vector(r)).collect();
            let _ = writeln!(s, "{}", rows.join(" "));
        }
        s
    };
    Ok((text, 0))
}

fn grid(s: &mut String, name: &str, map: &LinearMap, row_labels: &[String], col_labels: &[String]) {
    let m = map.matrix();
    let _ = writeln!(s, "{name} {}x{}", m.rows(), m.cols());
    let _ = writeln!(
        s,
        "  {:>6} {}",
        "",
        col_labels
            .iter()
            .map(|l| format!("{l:>6}"))
            .collect::<String>()
    );
    for (r, label) in row_labels.iter().enumerate() {
        let entries: String = m.row(r).iter().map(|e| format!("{e:>6}")).collect();
        let _ = writeln!(s, "  {label:>6} {entries}");
    }
}

fn cmd_dump_maps(n: usize, p: u64, output: &Output) -> CmdResult {
    let ctx = SpaceContext::new(p, n)?;
    let u_labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let v_labels: Vec<String> = (0..ctx.dim_v()).map(|c| ctx.v_label(c)).collect();
    let w_labels: Vec<String> = (0..ctx.dim_w()).map(|c| ctx.w_label(c)).collect();
    let text = if output.json {
        let mats = |maps: &[LinearMap]| -> Vec<Vec<Vec<u32>>> {
            maps.iter()
                .map(|m| m.matrix().row_iter().map(<[u32]>::to_vec).collect())
                .collect()
        };
        to_json(&json!({
            "n": n,
            "p": ctx.p(),
            "u_basis": u_labels,
            "v_basis": v_labels,
            "w_basis": w_labels,
            "psi": mats(ctx.psi_maps()),
            "phi": mats(ctx.phi_maps()),
        }))
    } else {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "n = {n}, p = {}, dim U = {}, dim V = {}, dim W = {}",
            ctx.p(),
            n,
            ctx.dim_v(),
            ctx.dim_w()
        );
        let _ = writeln!(
            s,
            "columns are domain basis vectors, rows codomain basis vectors\n"
        );
        for (i, m) in ctx.psi_maps().iter().enumerate() {
            grid(&mut s, &format!("psi_{}", i + 1), m, &v_labels, &u_labels);
            s.push('\n');
        }
        for (k, m) in ctx.phi_maps().iter().enumerate() {
            grid(&mut s, &format!("phi_{}", k + 1), m, &w_labels, &v_labels);
            s.push('\n');
        }
        s
    };
    Ok((text, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = match &cli.command {
        Command::Check { file, output } => (cmd_check(file, output), output),
        Command::Closure { file, p, output } => (cmd_closure(file, *p, output), output),
        Command::Classify4 { file, output } => (cmd_classify4(file, output), output),
        Command::Verify {
            suite,
            n,
            p,
            seed,
            sample,
            ceiling,
            output,
        } => {
            let opts = SuiteOptions {
                ceiling: *ceiling,
                sample: *sample,
                seed: *seed,
            };
            (cmd_verify(suite, *n, *p, opts, output), output)
        }
        Command::Enumerate {
            n,
            p,
            k,
            ambient,
            seed,
            sample,
            ceiling,
            count_only,
            output,
        } => (
            cmd_enumerate(
                *n,
                *p,
                *k,
                *ambient,
                *seed,
                *sample,
                *ceiling,
                *count_only,
                output,
            ),
            output,
        ),
        Command::DumpMaps { n, p, output } => (cmd_dump_maps(*n, *p, output), output),
    };
    let outcome = result.and_then(|(text, code)| emit(output, &text).map(|_| code));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
