//! `cxint`: tables, classification, intersection reports, Monte Carlo
//! verification and the four-dimensional example.
//!
//! Exit codes: 0 success, 1 invalid input, 2 non-generic or flagged result,
//! 3 verification failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cxint::counts::sigma_table;
use cxint::experiments::{example_r4, example_r4_boundary, run_trials, ExperimentConfig, Mode};
use cxint::intersection::{common_invariant_planes, IntersectionOptions, IntersectionReport, Method, RelOrientation};
use cxint::io::{pair_to_json, parse_pair, parse_signature_spec};
use cxint::structures::{classify_orthogonal_pair_detailed, construct_canonical_pair, DEFAULT_CLUSTER_TOL};
use cxint::{Error, StructurePair};

#[derive(Parser)]
#[command(name = "cxint", version, about = "Common invariant planes of two complex structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Signature,
    Spectral,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Signature => Method::Signature,
            MethodArg::Spectral => Method::Spectral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    OrthSame,
    OrthOpposite,
    GeneralSame,
    GeneralOpposite,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::OrthSame => Mode::OrthSame,
            ModeArg::OrthOpposite => Mode::OrthOpposite,
            ModeArg::GeneralSame => Mode::GeneralSame,
            ModeArg::GeneralOpposite => Mode::GeneralOpposite,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the table of intersection numbers sigma(k, n).
    Sigma {
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        #[arg(long, default_value_t = 15)]
        nmax: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Classify an orthogonal pair read from a pair file.
    Classify {
        #[arg(long)]
        pair: PathBuf,
        /// Eigenvalue clustering tolerance.
        #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Write the canonical pair of a signature such as "1.5708:1;l=1;s=0".
    Canonical {
        #[arg(long)]
        signature: String,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Common invariant 2k-planes of a pair.
    Intersect {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long)]
        json: bool,
    },
    /// Seeded Monte Carlo check of the intersection counts.
    Verify {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Condition bound of the conjugators in general modes.
        #[arg(long, default_value_t = 50.0)]
        cond_bound: f64,
        #[arg(long)]
        json: bool,
    },
    /// Common lines of J0 and its conjugate by diag(1/a, a, 1/b, b) in R^4.
    ExampleR4 {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Boundary latitude of the image sphere cap for a = b.
    R4Boundary {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        json: bool,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::NotOrthogonal(_)
            | Error::NonGenericSpectrum(_)
            | Error::ClusterAmbiguity(_)
            | Error::NotTransverse(_)
            | Error::EmptySubspace => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

type CmdResult = Result<u8, Failure>;

fn read_pair(path: &Path) -> Result<StructurePair, Failure> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    Ok(parse_pair(&text)?)
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn cmd_sigma(kmax: usize, nmax: usize, format: Format) -> CmdResult {
    if kmax > nmax {
        return Err(invalid(format!("--kmax {kmax} exceeds --nmax {nmax}")));
    }
    if nmax > cxint::counts::MAX_N {
        return Err(invalid(format!("--nmax is limited to {}", cxint::counts::MAX_N)));
    }
    let table = sigma_table(kmax, nmax);
    match format {
        Format::Text => print!("{}", table.render_text()),
        Format::Json => print_json(&table.to_json()),
    }
    Ok(0)
}

fn cmd_classify(path: &Path, tol: f64, json: bool) -> CmdResult {
    let pair = read_pair(path)?;
    let c = classify_orthogonal_pair_detailed(&pair, tol)?;
    let sig = &c.signature;
    let verdict = if sig.same_orientation() { "same" } else { "opposite" };
    if json {
        print_json(&serde_json::json!({
            "signature": sig,
            "orientation": verdict,
            "near_degenerate": c.near_degenerate,
        }));
    } else {
        println!("{sig}");
        println!("orientation: {verdict} (s {})", if sig.s % 2 == 0 { "even" } else { "odd" });
        if c.near_degenerate {
            println!("warning: an angle is close to 0 or pi");
        }
    }
    Ok(if c.near_degenerate { 2 } else { 0 })
}

fn cmd_canonical(spec: &str, out: Option<&Path>) -> CmdResult {
    let sig = parse_signature_spec(spec)?;
    let text = pair_to_json(&construct_canonical_pair(&sig)?);
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| invalid(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn print_report(r: &IntersectionReport) {
    println!("n={} k={} method={:?}", r.n, r.k, r.method);
    if let Some(sig) = &r.signature {
        println!("signature: {}", sig.to_string().replace('\n', "; "));
    }
    for c in r.components.iter().filter(|c| !c.is_point()) {
        println!(
            "continuum component: t={:?} l'={} s'={} dim={} class={:?}",
            c.t, c.l_prime, c.s_prime, c.real_dim, c.orientation_class
        );
    }
    for f in &r.families {
        println!("continuum family: choices={:?} dim={} class={:?}", f.choices, f.real_dim, f.orientation_class);
    }
    for (i, p) in r.isolated_points.iter().enumerate() {
        let class = match p.relative_orientation {
            RelOrientation::Same => "same",
            RelOrientation::Opposite => "opposite",
        };
        let sign = p.local_sign.map_or("-".to_string(), |s| s.to_string());
        let gap = p.gap.map_or("-".to_string(), |g| format!("{g:.3e}"));
        println!("point {i}: {class} transverse={} gap={gap} sign={sign}", p.transverse);
    }
    let signed = |s: Option<i64>| s.map_or("-".to_string(), |v| v.to_string());
    println!(
        "raw counts: same={} opposite={}   signed: same={} opposite={}",
        r.raw_count_same,
        r.raw_count_opposite,
        signed(r.signed_count_same),
        signed(r.signed_count_opposite)
    );
    println!(
        "expected: same={} opposite={}   expected signed: same={} opposite={}",
        r.expected_same, r.expected_opposite, r.expected_signed_same, r.expected_signed_opposite
    );
    if !r.generic {
        println!("non-generic: {}", if r.continuum { "continuum" } else { "non-transverse point" });
    }
}

fn cmd_intersect(path: &Path, k: usize, method: MethodArg, json: bool) -> CmdResult {
    let pair = read_pair(path)?;
    if k == 0 || k > pair.n() {
        return Err(invalid(format!("--k must lie in 1..={}", pair.n())));
    }
    let opts = IntersectionOptions { method: method.into(), ..IntersectionOptions::default() };
    let r = common_invariant_planes(&pair, k, &opts)?;
    if json {
        print_json(&r);
    } else {
        print_report(&r);
    }
    Ok(if r.generic && !r.near_degenerate && !r.marginal { 0 } else { 2 })
}

fn cmd_verify(config: ExperimentConfig, json: bool) -> CmdResult {
    config.validate()?;
    let report = run_trials(&config)?;
    if json {
        print_json(&report);
    } else {
        print!("{}", report.summary());
    }
    Ok(if report.all_passed() { 0 } else { 3 })
}

fn cmd_example_r4(a: f64, b: f64, tol: f64, json: bool) -> CmdResult {
    let r = example_r4(a, b, tol)?;
    if json {
        print_json(&r);
    } else if r.degenerate {
        println!("degenerate parameters: a = b or a = 1/b");
    } else {
        let mut signs: Vec<i64> = r.planes.iter().filter_map(|p| p.local_sign.map(|s| s.value())).collect();
        signs.sort_by(|x, y| y.cmp(x));
        let signs: Vec<String> = signs.iter().map(|s| format!("{s:+}")).collect();
        let total = r.signed_total.map_or("-".to_string(), |t| t.to_string());
        println!("{} points, signs {}, signed total {total}", r.planes.len(), signs.join(" "));
        for p in &r.planes {
            let q = p.quaternion;
            println!("  quaternion ({:.6}, {:.6}, {:.6}, {:.6})", q.w, q.x, q.y, q.z);
        }
    }
    Ok(if r.degenerate { 2 } else { 0 })
}

fn cmd_r4_boundary(b: f64, json: bool) -> CmdResult {
    let r = example_r4_boundary(b)?;
    if json {
        print_json(&r);
    } else {
        println!("u_max = {:.9}", r.u_max);
        if !r.in_safe_interval {
            println!("note: b lies outside the interval where the image is known to be a proper cap");
        }
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Sigma { kmax, nmax, format } => cmd_sigma(kmax, nmax, format),
        Command::Classify { pair, tol, json } => cmd_classify(&pair, tol, json),
        Command::Canonical { signature, out } => cmd_canonical(&signature, out.as_deref()),
        Command::Intersect { pair, k, method, json } => cmd_intersect(&pair, k, method, json),
        Command::Verify { mode, n, k, trials, seed, cond_bound, json } => {
            let mut config = ExperimentConfig::new(mode.into(), n, k, trials, seed);
            config.cond_bound = cond_bound;
            cmd_verify(config, json)
        }
        Command::ExampleR4 { a, b, tol, json } => cmd_example_r4(a, b, tol, json),
        Command::R4Boundary { b, json } => cmd_r4_boundary(b, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
