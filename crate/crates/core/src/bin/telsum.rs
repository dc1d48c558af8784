//! Command-line front end for the telescoping engine.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::BigInt;

use telsum::certify;
use telsum::corpus::{self, CORPUS};
use telsum::denest::{estden, theorem_bound};
use telsum::error::{Error, Result};
use telsum::manifest::{CertificateDoc, OptionsDoc, ProblemManifest};
use telsum::telescope::bizeil;

#[derive(Parser)]
#[command(name = "telsum", about = "Exact telescoping for hypergeometric double sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the unit-shift quotients, the recurrence quotients and their
    /// common denominator.
    Quotients {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Recurrence order for the printed quotients.
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Print the estimated certificate denominators and the theoretical
    /// bounds.
    Estden {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Search for a telescoping certificate and emit it as JSON.
    Telescope {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Write the certificate to this path instead of stdout.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check a certificate file symbolically and numerically.
    Verify {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Certificate file produced by `telescope`.
        #[arg(long)]
        cert: PathBuf,
    },
    /// Check that the operator annihilates the actual double sum, and the
    /// identity against the manifest right-hand side when present.
    Sumcheck {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        cert: PathBuf,
        /// Parameter assignments, e.g. --set m=3 --set s=2.
        #[arg(long = "set", value_parser = parse_assign)]
        assignments: Vec<(String, i64)>,
    },
    /// Run the bundled examples against their golden data.
    Corpus {
        /// Also run the bundled high-order example (slow).
        #[arg(long)]
        include_slow: bool,
        /// Time the theoretical-bound and unreduced denominator pipelines on
        /// every example, not just the first.
        #[arg(long)]
        pipelines: bool,
    },
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// JSON problem manifest; inline flags below override its options.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Inline term source (requires --rec-var and --sum-vars).
    #[arg(long)]
    term: Option<String>,
    #[arg(long = "rec-var")]
    rec_var: Option<String>,
    /// Exactly two, comma separated.
    #[arg(long = "sum-vars", value_delimiter = ',')]
    sum_vars: Vec<String>,
    /// Comma separated parameter symbols.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    #[arg(long = "max-order")]
    max_order: Option<usize>,
    /// Use the unreduced denominator estimate directly.
    #[arg(long = "no-reduce")]
    no_reduce: bool,
    /// Input product for the w2 gcd: "algorithm" or "theorem".
    #[arg(long = "w2-variant")]
    w2_variant: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Trials for the randomized numeric verification.
    #[arg(long)]
    trials: Option<usize>,
    /// Inclusive recurrence-variable range for sum checks, e.g. 0..8.
    #[arg(long = "n-range")]
    n_range: Option<String>,
}

fn parse_assign(s: &str) -> std::result::Result<(String, i64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let value: i64 = value
        .parse()
        .map_err(|_| format!("`{value}` is not an integer"))?;
    Ok((name.to_string(), value))
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::Manifest(format!("expected lo..hi, got `{s}`")))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i64 = lo
        .parse()
        .map_err(|_| Error::Manifest(format!("bad range bound `{lo}`")))?;
    let hi: i64 = hi
        .parse()
        .map_err(|_| Error::Manifest(format!("bad range bound `{hi}`")))?;
    if lo > hi {
        return Err(Error::Manifest(format!("empty range `{s}`")));
    }
    Ok((lo, hi))
}

impl ProblemArgs {
    fn load(&self) -> Result<ProblemManifest> {
        let mut m = match &self.manifest {
            Some(path) => ProblemManifest::from_json(&fs::read_to_string(path)?)?,
            None => {
                let term = self.term.clone().ok_or_else(|| {
                    Error::Manifest("either --manifest or --term is required".into())
                })?;
                let rec_var = self.rec_var.clone().ok_or_else(|| {
                    Error::Manifest("--rec-var is required with --term".into())
                })?;
                if self.sum_vars.len() != 2 {
                    return Err(Error::Manifest(
                        "--sum-vars must name exactly two symbols".into(),
                    ));
                }
                ProblemManifest {
                    term,
                    rec_var,
                    sum_vars: [self.sum_vars[0].clone(), self.sum_vars[1].clone()],
                    params: self.params.clone(),
                    rhs: None,
                    options: OptionsDoc::default(),
                    n_range: None,
                    trials: None,
                    seed: None,
                }
            }
        };
        if let Some(v) = self.max_order {
            m.options.max_order = v;
        }
        if self.no_reduce {
            m.options.reduce = false;
        }
        if let Some(v) = &self.w2_variant {
            m.options.w2_variant = v.clone();
        }
        if let Some(v) = &self.n_range {
            m.n_range = Some(parse_range(v)?);
        }
        if let Some(v) = self.trials {
            m.trials = Some(v);
        }
        if let Some(v) = self.seed {
            m.seed = Some(v);
        }
        m.roles()?;
        Ok(m)
    }
}

fn cmd_quotients(problem: &ProblemArgs, order: usize) -> Result<bool> {
    let m = problem.load()?;
    let f = m.hyperterm()?;
    let qs = f.quotient_set(order)?;
    println!("r1 = {}", qs.r1);
    println!("s1 = {}", qs.s1);
    println!("r2 = {}", qs.r2);
    println!("s2 = {}", qs.s2);
    for (l, q) in qs.quotients()?.iter().enumerate() {
        println!("q{} = {}", l + 1, q);
    }
    println!("d  = {}", qs.d);
    Ok(true)
}

fn cmd_estden(problem: &ProblemArgs) -> Result<bool> {
    let m = problem.load()?;
    let f = m.hyperterm()?;
    let opts = m.solve_options()?;
    let est = estden(&f, opts.w2_variant)?;
    println!("estimate:");
    println!("{est}");
    let bound = theorem_bound(&f)?;
    println!("bounds:");
    println!("{bound}");
    Ok(true)
}

fn cmd_telescope(problem: &ProblemArgs, emit: Option<&PathBuf>) -> Result<bool> {
    let m = problem.load()?;
    let f = m.hyperterm()?;
    let opts = m.solve_options()?;
    let cert = bizeil(&f, &opts)?;
    let json = CertificateDoc::from_certificate(&cert).to_json()?;
    match emit {
        Some(path) => {
            fs::write(path, &json)?;
            println!(
                "order {} certificate written to {}",
                cert.order,
                path.display()
            );
        }
        None => println!("{json}"),
    }
    Ok(true)
}

fn cmd_verify(problem: &ProblemArgs, cert_path: &PathBuf) -> Result<bool> {
    let m = problem.load()?;
    let f = m.hyperterm()?;
    let doc = CertificateDoc::from_json(&fs::read_to_string(cert_path)?)?;
    let cert = doc.to_certificate(&m.roles()?)?;
    let (ok, residual) = certify::verify_certificate(&f, &cert)?;
    if !ok {
        println!("symbolic: FAIL residual = {residual}");
        return Ok(false);
    }
    println!("symbolic: ok");
    let trials = m.trials.unwrap_or(20);
    let seed = m.seed.unwrap_or(0);
    let ok = certify::verify_numeric(&f, &cert, trials, seed)?;
    println!("numeric ({trials} trials, seed {seed}): {}", status(ok));
    Ok(ok)
}

fn cmd_sumcheck(
    problem: &ProblemArgs,
    cert_path: &PathBuf,
    assignments: &[(String, i64)],
) -> Result<bool> {
    let m = problem.load()?;
    let f = m.hyperterm()?;
    let doc = CertificateDoc::from_json(&fs::read_to_string(cert_path)?)?;
    let cert = doc.to_certificate(&m.roles()?)?;
    let mut params: BTreeMap<String, BigInt> = BTreeMap::new();
    for (name, value) in assignments {
        if !f.roles.params.contains(name) {
            return Err(Error::Manifest(format!(
                "`{name}` is not a declared parameter"
            )));
        }
        params.insert(name.clone(), BigInt::from(*value));
    }
    for p in &f.roles.params {
        // default keeps parameterized inputs usable without flags
        params.entry(p.clone()).or_insert_with(|| BigInt::from(3));
    }
    let n_range = m.n_range.unwrap_or((0, 8));
    let mut all_ok = certify::sum_annihilation_check(&f, &cert, n_range, &params)?;
    println!("annihilation over {:?}: {}", n_range, status(all_ok));
    if let Some(rhs) = m.rhs_spec()? {
        let ok = certify::identity_numeric_check(&f, &rhs, n_range, &params)?;
        println!("identity over {:?}: {}", n_range, status(ok));
        all_ok &= ok;
    }
    Ok(all_ok)
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn cmd_corpus(include_slow: bool, pipelines: bool) -> Result<bool> {
    let opts = telsum::SolveOptions::default();
    let mut failures: Vec<String> = Vec::new();
    let mut ran = 0usize;
    for ex in &CORPUS {
        if ex.slow && !include_slow {
            println!("{:<28} skipped (slow; pass --include-slow)", ex.name);
            continue;
        }
        ran += 1;
        let report = corpus::run_example(ex, &opts);
        println!(
            "{:<28} {}  {:.2}s",
            report.name,
            status(report.pass),
            report.elapsed.as_secs_f64()
        );
        for line in &report.details {
            println!("    {line}");
        }
        if !report.pass {
            failures.push(ex.name.to_string());
        }
    }
    println!("{ran} run, {} failed", failures.len());

    // denominator-choice timing report: bounds vs unreduced vs reduced
    for ex in &CORPUS {
        if ex.slow || (!pipelines && ex.name != "andrews-paule") {
            continue;
        }
        let t = corpus::denominator_pipelines(ex)?;
        println!(
            "pipelines {:<18} bounds {:.2}s  unreduced {:.2}s  reduced {:.2}s",
            ex.name,
            t.theoretical.as_secs_f64(),
            t.unreduced.as_secs_f64(),
            t.reduced.as_secs_f64()
        );
        if ex.name == "andrews-paule"
            && t.reduced.as_secs_f64() > 10.0 * t.theoretical.as_secs_f64()
        {
            println!(
                "warning: reduced pipeline more than 10x slower than the bound pipeline"
            );
        }
    }

    if !failures.is_empty() {
        println!(
            "{}",
            serde_json::json!({ "status": "fail", "failures": failures })
        );
        return Ok(false);
    }
    Ok(true)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Quotients { problem, order } => cmd_quotients(problem, *order),
        Command::Estden { problem } => cmd_estden(problem),
        Command::Telescope { problem, emit } => cmd_telescope(problem, emit.as_ref()),
        Command::Verify { problem, cert } => cmd_verify(problem, cert),
        Command::Sumcheck {
            problem,
            cert,
            assignments,
        } => cmd_sumcheck(problem, cert, assignments),
        Command::Corpus {
            include_slow,
            pipelines,
        } => cmd_corpus(*include_slow, *pipelines),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "status": "error", "message": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}
