mod config;
mod json;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use gln_voronoi::checks::{
    dual_identity_report, fe_reports, proof_chain_reports, seeded_alphas, seeded_points,
    summarize, verification_check, Acceptance, CheckReport, CRITERIA,
};
use gln_voronoi::coeffs::{CoefficientSource, EisensteinParams, EisensteinSource, FileSource};
use gln_voronoi::fields;
use gln_voronoi::kloosterman::{kl, KlMethod, KloostermanParams};
use gln_voronoi::mellin::TestFunction;
use gln_voronoi::voronoi::{Part, Verdict, VoronoiContext, VoronoiInstance, VoronoiSettings};
use gln_voronoi::{CharacterTable, PrimeModulus, C64};

#[derive(Parser, Debug)]
#[command(name = "gln-voronoi", version, about = "Kloosterman sums, twisted L-functions and GL(n) Voronoi formulae, checked numerically")]
#[command(args_override_self = true)]
struct Cli {
    /// `key = value` file of flags for the subcommand; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write reports here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed of randomized grids.
    #[arg(long, global = true, default_value_t = 20240601)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hyper-Kloosterman sum Kl_k(m, q).
    Kl(KlArgs),
    /// Characters modulo q with parities and Gauss sums.
    Chars(CharsArgs),
    /// Exact dual Hecke-polynomial identity.
    Lemma(LemmaArgs),
    /// Coefficients A(m_1, …, m_{n−1}) of a source.
    Coeffs(CoeffsArgs),
    /// Functional-equation and pre-inversion residuals on a seeded grid.
    Fe(FeArgs),
    /// Both sides of a summation formula.
    Verify(VerifyArgs),
    /// The acceptance matrix.
    Suite(SuiteArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KlChoice {
    Direct,
    Chars,
    Both,
}

#[derive(Args, Debug)]
struct KlArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, allow_negative_numbers = true)]
    m: i64,
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value_t = KlChoice::Both)]
    method: KlChoice,
    /// Largest number of tuples enumerated directly.
    #[arg(long, default_value_t = gln_voronoi::kloosterman::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args, Debug)]
struct CharsArgs {
    #[arg(long)]
    q: u64,
}

#[derive(Args, Debug)]
struct LemmaArgs {
    #[arg(long, required_unless_present = "all")]
    n: Option<u32>,
    #[arg(long, required_unless_present = "all")]
    k: Option<u32>,
    /// Every 2 ≤ n ≤ nmax and 1 ≤ k ≤ n − 1.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 8)]
    nmax: u32,
}

/// Imaginary parts of the spectral data.
#[derive(Clone, Debug)]
struct Alphas(Vec<f64>);

/// Comma-separated coefficient index.
#[derive(Clone, Debug)]
struct Tuple(Vec<u64>);

/// Spectral data: `re,im;re,im;…` with zero real parts and zero sum.
fn parse_alphas(text: &str) -> Result<Alphas, String> {
    let mut out = Vec::new();
    for pair in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (re, im) = pair
            .split_once(',')
            .ok_or_else(|| format!("'{pair}' is not of the form re,im"))?;
        let re: f64 = re.trim().parse().map_err(|e| format!("'{re}': {e}"))?;
        let im: f64 = im.trim().parse().map_err(|e| format!("'{im}': {e}"))?;
        if re != 0.0 {
            return Err(format!("alpha {re},{im} must be purely imaginary"));
        }
        out.push(im);
    }
    Ok(Alphas(out))
}

fn parse_tuple(text: &str) -> Result<Tuple, String> {
    text.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<_, _>>()
        .map(Tuple)
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// Degree; needed when `--alphas` is absent (seeded parameters are used).
    #[arg(long)]
    n: Option<u32>,
    /// Spectral shifts as `re,im;re,im;…`, purely imaginary and summing to 0.
    #[arg(long, value_parser = parse_alphas, allow_hyphen_values = true)]
    alphas: Option<Alphas>,
}

impl SourceArgs {
    fn parts(&self, seed: u64) -> Result<Vec<f64>, String> {
        match (&self.alphas, self.n) {
            (Some(a), Some(n)) if a.0.len() != n as usize => {
                Err(format!("--n {n} disagrees with {} alphas", a.0.len()))
            }
            (Some(a), _) => Ok(a.0.clone()),
            (None, Some(n)) if n >= 2 => Ok(seeded_alphas(n, 1, seed).remove(0)),
            (None, Some(n)) => Err(format!("--n {n} must be at least 2")),
            (None, None) => Err("one of --n or --alphas is required".into()),
        }
    }
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Coefficient file instead of the Eisenstein source.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Comma-separated tuple m_1,…,m_{n−1}.
    #[arg(long, value_parser = parse_tuple)]
    tuple: Option<Tuple>,
    /// Print A(1, …, 1, m) for m ≤ this bound.
    #[arg(long)]
    last_slot: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FeKindArg {
    Standard,
    Even,
    Odd,
    Chain,
    All,
}

#[derive(Args, Debug)]
struct FeArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value_t = FeKindArg::All)]
    kind: FeKindArg,
    /// Restrict twisted kinds to this k (all k when absent).
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    q: u64,
    /// Fix `a` for the pre-inversion identities (drawn at random otherwise).
    #[arg(long)]
    a: Option<i64>,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PartArg {
    Even,
    Odd,
    Combined,
}

impl From<PartArg> for Part {
    fn from(p: PartArg) -> Self {
        match p {
            PartArg::Even => Part::Even,
            PartArg::Odd => Part::Odd,
            PartArg::Combined => Part::Combined,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Coefficient file instead of the Eisenstein source.
    #[arg(long, value_name = "PATH")]
    coeff_file: Option<PathBuf>,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    q: u64,
    #[arg(long, allow_negative_numbers = true)]
    a: i64,
    #[arg(long, value_enum, default_value_t = PartArg::Combined)]
    part: PartArg,
    #[arg(long, default_value_t = 40.0)]
    omega_center: f64,
    #[arg(long, default_value_t = 30.0)]
    omega_radius: f64,
    /// Envelope line `Re s = −σ` of the m-sum bound; must exceed 1.
    #[arg(long, default_value_t = 2.0)]
    sigma: f64,
    /// Fixed height of the continuation integral (adaptive when absent).
    #[arg(long)]
    height: Option<f64>,
    /// Quadrature nodes per unit of `Im s`.
    #[arg(long, default_value_t = 10)]
    nodes: u32,
    /// Fixed m-sum cutoff (from the envelope bound when absent).
    #[arg(long)]
    m_cutoff: Option<usize>,
    /// Relative tolerance of the chosen part.
    #[arg(long)]
    tol: Option<f64>,
    /// Also re-run with doubled cutoff and height.
    #[arg(long)]
    refine: bool,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// Comma-separated criterion numbers (all when absent).
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<u32>,
}

/// A usage error (exit 2) or a library error.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] gln_voronoi::Error),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

type Out<'a> = dyn FnMut(CheckReport) -> std::io::Result<()> + 'a;

fn run_kl(a: &KlArgs, out: &mut Out) -> Result<(), CliError> {
    let p = KloostermanParams::new(a.k, a.m, a.q)?;
    let params = fields!["k" => a.k, "m" => a.m, "q" => a.q];
    let direct = || kl::<f64>(p, KlMethod::Direct, a.budget);
    let chars = || kl::<f64>(p, KlMethod::Chars, a.budget);
    let report = match a.method {
        KlChoice::Both => CheckReport::absolute("kl", params, direct()?, chars()?, a.tol),
        KlChoice::Direct | KlChoice::Chars => {
            let v = if a.method == KlChoice::Direct { direct()? } else { chars()? };
            let mut r = CheckReport::residual("kl", params, 0.0, a.tol);
            r.lhs = Some(v);
            r
        }
    };
    Ok(out(report)?)
}

fn run_chars(a: &CharsArgs, out: &mut Out) -> Result<(), CliError> {
    let md = PrimeModulus::shared(a.q)?;
    let table = CharacterTable::<f64>::new(md.clone());
    for t in 0..md.order() as u32 {
        let tau = table.gauss_sum(t);
        let parity = if t % 2 == 0 { "even" } else { "odd" };
        // |τ|² = q for nontrivial characters, τ = −1 for the trivial one.
        let expected = if t == 0 { C64::new(-1.0, 0.0) } else { C64::new(a.q as f64, 0.0) };
        let got = if t == 0 { tau } else { C64::new(tau.norm_sqr(), 0.0) };
        let mut r = CheckReport::absolute(
            "character",
            fields!["q" => a.q, "t" => t, "parity" => parity, "primitive_root" => md.primitive_root()],
            got,
            expected,
            1e-10,
        );
        r.diagnostics.extend(fields!["gauss_re" => tau.re, "gauss_im" => tau.im]);
        out(r)?;
    }
    Ok(())
}

fn run_lemma(a: &LemmaArgs, out: &mut Out) -> Result<(), CliError> {
    let cases: Vec<(u32, u32)> = if a.all {
        (2..=a.nmax).flat_map(|n| (1..n).map(move |k| (n, k))).collect()
    } else {
        vec![(a.n.expect("required"), a.k.expect("required"))]
    };
    for (n, k) in cases {
        out(dual_identity_report(n, k)?)?;
    }
    Ok(())
}

fn eisenstein(parts: &[f64]) -> Result<EisensteinSource<f64>, CliError> {
    Ok(EisensteinSource::new(EisensteinParams::from_imaginary(parts)?))
}

fn run_coeffs(a: &CoeffsArgs, seed: u64, out: &mut Out) -> Result<(), CliError> {
    let src: Box<dyn CoefficientSource<f64>> = match &a.file {
        Some(p) => Box::new(FileSource::load(p)?),
        None => Box::new(eisenstein(&a.source.parts(seed).map_err(CliError::Usage)?)?),
    };
    let n = src.degree();
    let mut tuples: Vec<Vec<u64>> = Vec::new();
    if let Some(Tuple(t)) = &a.tuple {
        if t.len() != n as usize - 1 {
            return Err(CliError::Usage(format!("--tuple needs {} entries", n - 1)));
        }
        tuples.push(t.clone());
    }
    if let Some(last) = a.last_slot {
        for m in 1..=last {
            let mut t = vec![1; n as usize - 1];
            t[n as usize - 2] = m;
            tuples.push(t);
        }
    }
    if tuples.is_empty() {
        return Err(CliError::Usage("give --tuple or --last-slot".into()));
    }
    for t in tuples {
        let v = src.coefficient(&t)?;
        let label = t.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let mut r = CheckReport::residual("coefficient", fields!["n" => n, "tuple" => label], 0.0, 0.0);
        r.lhs = Some(v);
        out(r)?;
    }
    Ok(())
}

fn run_fe(a: &FeArgs, seed: u64, out: &mut Out) -> Result<(), CliError> {
    let parts = a.source.parts(seed).map_err(CliError::Usage)?;
    let n = parts.len() as u32;
    if let Some(k) = a.k {
        if k < 1 || k >= n {
            return Err(CliError::Usage(format!("--k {k} must lie in [1, {}]", n - 1)));
        }
    }
    if let Some(av) = a.a {
        if av.rem_euclid(a.q as i64) == 0 {
            return Err(CliError::Usage(format!("--a {av} is not a unit modulo {}", a.q)));
        }
    }
    let points = seeded_points(&parts, a.points, seed ^ a.q);
    let keep_k = |r: &CheckReport| match (a.k, r.params.iter().find(|(k, _)| k == "k")) {
        (Some(k), Some((_, gln_voronoi::checks::Field::Int(v)))) => *v == i64::from(k),
        _ => true,
    };
    let wants = |name: &str| match a.kind {
        FeKindArg::All => true,
        FeKindArg::Standard => name == "fe_standard",
        FeKindArg::Even => name == "fe_even",
        FeKindArg::Odd => name == "fe_odd",
        FeKindArg::Chain => name.starts_with("proof_chain"),
    };
    if a.kind != FeKindArg::Chain {
        for r in fe_reports(&parts, a.q, &points, a.tol)? {
            if wants(&r.check) && keep_k(&r) {
                out(r)?;
            }
        }
    }
    if matches!(a.kind, FeKindArg::Chain | FeKindArg::All) {
        let reports = match a.a {
            None => proof_chain_reports(&parts, a.q, &points, seed ^ a.q, a.tol)?,
            Some(av) => fixed_unit_chain(&parts, a.q, av, &points, a.tol)?,
        };
        for r in reports {
            if keep_k(&r) {
                out(r)?;
            }
        }
    }
    Ok(())
}

fn fixed_unit_chain(parts: &[f64], q: u64, a: i64, points: &[C64], tol: f64) -> Result<Vec<CheckReport>, CliError> {
    use gln_voronoi::lfun::{proof_chain_residual, TwistedFamily};
    let src: Arc<dyn CoefficientSource<f64>> = Arc::new(eisenstein(parts)?);
    let n = src.degree();
    let fam = TwistedFamily::new(src, q)?;
    let mut out = Vec::new();
    for k in 1..n {
        for &s in points {
            let r = proof_chain_residual(s, k, a, &fam)?;
            for (name, v) in [("proof_chain_even", r.even), ("proof_chain_odd", r.odd)] {
                out.push(CheckReport::residual(
                    name,
                    fields![
                        "n" => n, "q" => q, "k" => k, "a" => a, "s_re" => s.re, "s_im" => s.im,
                        "alphas" => parts.to_vec(),
                    ],
                    v,
                    tol,
                ));
            }
        }
    }
    Ok(out)
}

fn run_verify(a: &VerifyArgs, seed: u64, out: &mut Out) -> Result<(), CliError> {
    let (src, parts): (Arc<dyn CoefficientSource<f64>>, Vec<f64>) = match &a.coeff_file {
        Some(p) => (Arc::new(FileSource::load(p)?), Vec::new()),
        None => {
            let parts = a.source.parts(seed).map_err(CliError::Usage)?;
            (Arc::new(eisenstein(&parts)?), parts)
        }
    };
    let n = src.degree();
    let inst = VoronoiInstance::new(n, a.q, a.k, a.a)?;
    let omega = TestFunction::unit(a.omega_center, a.omega_radius)?;
    if a.nodes == 0 {
        return Err(CliError::Usage("--nodes must be positive".into()));
    }
    let mut settings = VoronoiSettings {
        sigma: a.sigma,
        height: a.height,
        m_cutoff: a.m_cutoff,
        step: 1.0 / f64::from(a.nodes),
        ..VoronoiSettings::default()
    };
    if let Some(t) = a.tol {
        match a.part {
            PartArg::Odd => settings.tol_odd = t,
            _ => settings.tol_even = t,
        }
    }
    let mut ctx = VoronoiContext::new(src, a.q, omega, settings)?;
    let part = Part::from(a.part);
    let rep = ctx.verify(&inst, part)?;
    let check = verification_check(&rep, &parts);
    let params = check.params.clone();
    out(check)?;
    if a.refine && rep.verdict != Verdict::Approximate {
        let fine = ctx.verify_refined(&inst, part, &rep)?;
        out(gln_voronoi::checks::doubling_report(&rep, &fine, params))?;
    }
    Ok(())
}

fn run_suite(a: &SuiteArgs, seed: u64, out: &mut Out) -> Result<(), CliError> {
    if let Some(bad) = a.criteria.iter().find(|&&c| c < 1 || c as usize > CRITERIA.len()) {
        return Err(CliError::Usage(format!("no criterion {bad}")));
    }
    let acc = Acceptance { seed, ..Acceptance::default() };
    let mut all = Vec::new();
    let mut write_err = None;
    acc.run(&a.criteria, &mut |r| {
        if write_err.is_none() {
            if let Err(e) = out(r.clone()) {
                write_err = Some(e);
            }
        }
        all.push(r);
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    for c in CRITERIA.iter().filter(|c| a.criteria.is_empty() || a.criteria.contains(&c.id)) {
        let s = summarize(*c, &all);
        let mut r = CheckReport::residual(
            "criterion",
            fields!["id" => c.id, "title" => c.title, "condition" => c.tolerance],
            s.worst_abs,
            f64::INFINITY,
        );
        r.rel_err = s.worst_rel;
        r.verdict = if s.passed() { Verdict::Pass } else { Verdict::Fail };
        r.diagnostics = fields!["reports" => s.total, "failed" => s.failed];
        out(r)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cmd = Cli::command();
    let args = match config::merge(&cmd, std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match cmd.try_get_matches_from(args).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut sink: Box<dyn Write> = match &cli.output {
        Some(p) => match std::fs::File::create(p) {
            Ok(f) => Box::new(std::io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(std::io::stdout().lock()),
    };
    let mut failed = false;
    let format = cli.format;
    let mut out = |r: CheckReport| -> std::io::Result<()> {
        failed |= r.verdict != Verdict::Pass;
        let line = match format {
            Format::Json => json::to_line(&r),
            Format::Text => json::to_text(&r),
        };
        writeln!(sink, "{line}")?;
        sink.flush()
    };
    let seed = cli.seed;
    let result = match &cli.command {
        Command::Kl(a) => run_kl(a, &mut out),
        Command::Chars(a) => run_chars(a, &mut out),
        Command::Lemma(a) => run_lemma(a, &mut out),
        Command::Coeffs(a) => run_coeffs(a, seed, &mut out),
        Command::Fe(a) => run_fe(a, seed, &mut out),
        Command::Verify(a) => run_verify(a, seed, &mut out),
        Command::Suite(a) => run_suite(a, seed, &mut out),
    };
    match result {
        Ok(()) if failed => ExitCode::from(1),
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
