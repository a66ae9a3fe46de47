mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qch_core::classical::{classical_suite, parse_rational, BigRational};
use qch_core::qma::{appendix, Pair};
use qch_core::report::Outcome;
use qch_core::rmatrix::{Extent, QRMatrix};
use qch_core::scalar::{QField, QScalar};
use qch_core::suites::{calibration_suite, ideal_suite, qma_suite, rmatrix_suite, supplied_rmatrix_suite, QCheck, RCheck, Session, Settings, Target};
use qch_core::tensor::{DumpRecord, QOperator};
use qch_core::spectral;
use report::{Params, Sink};

#[derive(Parser)]
#[command(name = "qch", version, about = "Exact verification suites for symplectic-type quantum matrix algebras")]
struct Cli {
    /// Emit JSON Lines instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for prime-point and classical sampling.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Number of prime points for modular certification.
    #[arg(long, global = true, env = "QCH_PRIME_COUNT", default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=32))]
    primes: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// R-matrix certification.
    Rmatrix(RmatrixArgs),
    /// Identities in the quantum matrix algebra.
    Qma(QmaArgs),
    /// Ideal dimensions and witness export.
    Ideal(IdealArgs),
    /// Spectral parameterization identities.
    Spectral(SpectralArgs),
    /// Classical-limit identities on random similitudes.
    Classical(ClassicalArgs),
    /// Print the Sp(4) RTT relation set.
    Appendix(AppendixArgs),
    /// Every suite at one rank.
    All(KArg),
    /// Print a standard operator in the tensor dump format.
    Dump(DumpArgs),
}

#[derive(Args)]
struct KArg {
    /// Rank: the algebra is of Sp(2k) type.
    #[arg(long, default_value_t = 1, value_parser = parse_k)]
    k: usize,
}

#[derive(Args)]
struct RmatrixArgs {
    #[command(flatten)]
    k: KArg,
    #[arg(long, value_delimiter = ',', default_values = ["ybe", "bmw", "traces", "height"])]
    checks: Vec<RCheck>,
    /// Check a supplied R-matrix (tensor dump JSON) instead of the standard one.
    #[arg(long)]
    input: Option<PathBuf>,
    /// μ for the supplied R-matrix, in scalar text form; needed for bmw, traces and height.
    #[arg(long, requires = "input", allow_hyphen_values = true)]
    mu: Option<String>,
    /// Height search bound for a supplied R-matrix (default: dimension + 1).
    #[arg(long, requires = "input")]
    height_bound: Option<usize>,
}

#[derive(Args)]
struct QmaArgs {
    #[command(flatten)]
    k: KArg,
    #[arg(long, default_value = "rtt", value_parser = parse_pair)]
    pair: Pair,
    #[arg(long, value_delimiter = ',', default_values = ["parent", "ch", "cutting", "recursions", "structure"])]
    verify: Vec<QCheck>,
}

#[derive(Args)]
struct IdealArgs {
    #[command(flatten)]
    k: KArg,
    #[arg(long, default_value = "rtt", value_parser = parse_pair)]
    pair: Pair,
    /// Degrees to analyse (comma separated).
    #[arg(long, value_delimiter = ',', default_values = ["2"])]
    degree: Vec<usize>,
    /// Report component dimensions (implied unless --witness is given).
    #[arg(long)]
    stats: bool,
    /// Export exact witnesses for a target (parent, ch, tau2, ...).
    #[arg(long)]
    witness: Option<Target>,
    /// Write the witness export here instead of stdout; reports still stream.
    #[arg(long, requires = "witness")]
    witness_out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectralArgs {
    #[command(flatten)]
    k: KArg,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
}

#[derive(Args)]
struct ClassicalArgs {
    #[command(flatten)]
    k: KArg,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Fix the multiplier g (rational, e.g. -3/2); sampled when absent.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
}

#[derive(Args)]
struct AppendixArgs {
    /// Print the [B21,C12] relation in its displayed form instead of the corrected one.
    #[arg(long)]
    as_printed: bool,
    /// Run the calibration suite instead of printing.
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    /// The R-matrix.
    R,
    /// The computed rank-one projector K.
    K,
    /// D_R.
    D,
    /// The skew inverse Ψ_R.
    Psi,
    /// Defining relations of the algebra, one NCPoly per line.
    Relations,
}

#[derive(Args)]
struct DumpArgs {
    #[command(flatten)]
    k: KArg,
    #[arg(long, value_enum, default_value = "r")]
    what: What,
    /// Pair, for --what relations.
    #[arg(long, default_value = "rtt", value_parser = parse_pair)]
    pair: Pair,
}

fn parse_k(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(format!("'{s}' is not a positive integer")),
    }
}

fn parse_pair(s: &str) -> Result<Pair, String> {
    match s.parse::<Pair>()? {
        Pair::Custom => Err("custom pairs are not available from the command line".into()),
        p => Ok(p),
    }
}

/// A failure that is the caller's fault: reported like a usage error.
struct Usage(String);

struct Ctx {
    seed: u64,
    primes: usize,
    sink: Sink,
}

impl Ctx {
    fn params(&self, k: Option<usize>, pair: Option<Pair>, degrees: &[usize]) -> Params {
        Params { k, pair: pair.map(|p| p.to_string()), degrees: degrees.to_vec(), primes: self.primes, seed: self.seed }
    }

    fn settings(&self, k: usize) -> Settings {
        Settings::new(k, self.seed, self.primes)
    }

    /// Runs `f` and streams its outcomes.
    fn run(&mut self, params: Params, f: impl FnOnce() -> Vec<Outcome>) {
        let start = Instant::now();
        let outcomes = f();
        self.sink.emit(&params, &outcomes, start.elapsed());
    }

    fn rmatrix(&mut self, k: usize, checks: &[RCheck]) {
        let settings = self.settings(k);
        for &c in checks {
            self.run(self.params(Some(k), None, &[]), || {
                let parts = rmatrix_suite(k, &[c], &settings);
                vec![Outcome::merge(format!("k={k} rmatrix {}", c.name()), &parts)]
            });
        }
    }

    fn qma(&mut self, k: usize, pair: Pair, checks: &[QCheck]) {
        let settings = self.settings(k);
        self.run(self.params(Some(k), Some(pair), &[]), || match Session::new(k, pair, settings) {
            Ok(mut s) => qma_suite(&mut s, checks),
            Err(e) => vec![Outcome::fail(format!("k={k} {pair} session"), e.to_string())],
        });
    }

    fn ideal(&mut self, k: usize, pair: Pair, degrees: &[usize]) {
        let settings = self.settings(k);
        self.run(self.params(Some(k), Some(pair), degrees), || ideal_suite(k, pair, degrees, &settings));
    }

    fn spectral(&mut self, k: usize, max_n: usize) {
        let seed = self.seed;
        self.run(self.params(Some(k), None, &[]), || match spectral::suite(k, max_n, seed) {
            Ok(v) => v,
            Err(e) => vec![Outcome::fail(format!("k={k} spectral"), e.to_string())],
        });
    }

    fn classical(&mut self, k: usize, samples: usize, g: Option<&BigRational>) {
        let seed = self.seed;
        self.run(self.params(Some(k), None, &[]), || match classical_suite(k, samples, g, seed) {
            Ok(v) => v,
            Err(e) => vec![Outcome::fail(format!("k={k} classical"), e.to_string())],
        });
    }

    fn calibration(&mut self) {
        self.run(self.params(None, None, &[]), calibration_suite);
    }
}

fn supplied_rmatrix(ctx: &mut Ctx, args: &RmatrixArgs, path: &PathBuf) -> Result<(), Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let records: Vec<DumpRecord> = serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let n = records.iter().flat_map(|r| r.input.iter().chain(&r.output)).copied().max().unwrap_or(0);
    let op = QOperator::from_dump(n, &records).map_err(|e| Usage(e.to_string()))?;
    if op.arity() != 2 {
        return Err(Usage(format!("an R-matrix acts on V⊗V; the dump has arity {}", op.arity())));
    }
    let mu = match &args.mu {
        Some(s) => Some(s.parse::<QScalar>().map_err(|e| Usage(format!("--mu: {e}")))?),
        None => None,
    };
    let extent = Extent::of_operator(&op);
    let bound = args.height_bound.unwrap_or(n + 1);
    let params = ctx.params(None, None, &[]);
    let label = path.display().to_string();
    let checks = args.checks.clone();
    ctx.run(params, move || match QRMatrix::new(QField, op, mu, extent) {
        Ok(r) => checks
            .iter()
            .map(|&c| Outcome::merge(format!("{label} rmatrix {}", c.name()), &supplied_rmatrix_suite(&r, &[c], bound)))
            .collect(),
        Err(e) => vec![Outcome::fail(format!("{label} rmatrix"), e.to_string())],
    });
    Ok(())
}

fn witness_export(ctx: &mut Ctx, args: &IdealArgs, target: &Target) -> Result<(), Usage> {
    let k = args.k.k;
    let start = Instant::now();
    let mut session = Session::new(k, args.pair, ctx.settings(k)).map_err(|e| Usage(e.to_string()))?;
    let name = format!("k={k} {} witness export: {}", args.pair, target.name());
    let (export, outcome) = match session.witnesses(target) {
        Ok(entries) => {
            let ideal = session.exact_ideal().map_err(|e| Usage(e.to_string()))?;
            let n = ideal.n();
            let relations: Vec<String> = ideal.relations().iter().map(|p| p.display(n).to_string()).collect();
            let missing: Vec<&str> = entries.iter().filter(|e| !e.verified).map(|e| e.entry.as_str()).collect();
            let terms: usize = entries.iter().filter_map(|e| e.witness.as_ref()).map(|w| w.len()).sum();
            let outcome = if missing.is_empty() {
                Outcome::pass(name).with_detail(format!("{} entries, {terms} witness terms, all re-expanded exactly", entries.len()))
            } else {
                Outcome::fail(name, format!("no verified witness for entries {}", missing.join(" ")))
            };
            let export = serde_json::json!({
                "k": k,
                "pair": args.pair.to_string(),
                "target": target.name(),
                "relations": relations,
                "entries": entries,
            });
            (Some(export), outcome)
        }
        Err(e) => (None, Outcome::fail(name, e.to_string())),
    };
    let text = export.map(|e| serde_json::to_string_pretty(&e).expect("export serializes"));
    let params = ctx.params(Some(k), Some(args.pair), &args.degree);
    match &args.witness_out {
        Some(path) => {
            if let Some(t) = &text {
                std::fs::write(path, t).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            }
            ctx.sink.emit(&params, &[outcome], start.elapsed());
        }
        None => {
            if let Some(t) = &text {
                say(format_args!("{t}"));
            }
            ctx.sink.record(&params, &[outcome], start.elapsed());
        }
    }
    Ok(())
}

/// Line to stdout; a closed pipe just ends the output.
fn say(args: std::fmt::Arguments) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{args}");
}

fn appendix_lines(as_printed: bool, json: bool) {
    let mut rels = appendix::relations();
    if as_printed {
        let printed = appendix::bc_commutator_as_printed();
        let lead = vec![appendix::gen("B21"), appendix::gen("C12")];
        if let Some(r) = rels.iter_mut().find(|r| r.group == printed.group && r.poly.terms().any(|(w, _)| *w == lead)) {
            *r = printed;
        }
    }
    for (id, r) in rels.iter().enumerate() {
        let poly = r.poly.display(4).to_string();
        if json {
            say(format_args!("{}", serde_json::json!({ "id": id, "group": r.group, "poly": poly })));
        } else {
            say(format_args!("{id}\t{}\t{poly}", r.group));
        }
    }
}

fn dump(args: &DumpArgs) -> Result<(), Usage> {
    let k = args.k.k;
    let r = QRMatrix::standard_sp(k);
    let op = match args.what {
        What::R => r.r.clone(),
        What::K => r.k_op().map_err(|e| Usage(e.to_string()))?.clone(),
        What::D => r.d.clone(),
        What::Psi => r.psi.clone(),
        What::Relations => {
            let a = qch_core::qma::QAlgebra::standard(k, args.pair).map_err(|e| Usage(e.to_string()))?;
            for (id, p) in a.relations().iter().enumerate() {
                say(format_args!("{id}\t{}", p.display(a.n())));
            }
            return Ok(());
        }
    };
    say(format_args!("{}", serde_json::to_string(&op.to_dump()).expect("dump serializes")));
    Ok(())
}

fn execute(cli: Cli) -> Result<i32, Usage> {
    let mut ctx = Ctx { seed: cli.seed, primes: cli.primes as usize, sink: Sink::new(cli.json) };
    match cli.cmd {
        Cmd::Rmatrix(a) => match &a.input {
            Some(path) => supplied_rmatrix(&mut ctx, &a, path)?,
            None => ctx.rmatrix(a.k.k, &a.checks),
        },
        Cmd::Qma(a) => ctx.qma(a.k.k, a.pair, &a.verify),
        Cmd::Ideal(a) => {
            if a.degree.iter().any(|&d| d < 2) {
                return Err(Usage("--degree: relations are quadratic, degrees start at 2".into()));
            }
            if a.stats || a.witness.is_none() {
                ctx.ideal(a.k.k, a.pair, &a.degree);
            }
            if let Some(t) = &a.witness {
                witness_export(&mut ctx, &a, t)?;
            }
        }
        Cmd::Spectral(a) => ctx.spectral(a.k.k, a.max_n),
        Cmd::Classical(a) => {
            let g = match &a.g {
                Some(s) => Some(parse_rational(s).ok_or_else(|| Usage(format!("--g: '{s}' is not a rational number")))?),
                None => None,
            };
            ctx.classical(a.k.k, a.samples, g.as_ref());
        }
        Cmd::Appendix(a) => {
            if a.check {
                ctx.calibration();
            } else {
                appendix_lines(a.as_printed, cli.json);
            }
        }
        Cmd::All(a) => {
            let k = a.k;
            ctx.rmatrix(k, &RCheck::ALL);
            ctx.calibration();
            for pair in [Pair::Rtt, Pair::Re] {
                ctx.qma(k, pair, &QCheck::ALL);
            }
            let degrees: Vec<usize> = if k == 1 { vec![2, 3, 4] } else { vec![2, 3] };
            for pair in [Pair::Rtt, Pair::Re] {
                ctx.ideal(k, pair, &degrees);
            }
            ctx.spectral(k, 6);
            ctx.classical(k, 100, None);
        }
        Cmd::Dump(a) => dump(&a)?,
    }
    Ok(ctx.sink.finish())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
