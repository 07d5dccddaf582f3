//! Command-line driver. `run` parses arguments, executes one subcommand and
//! returns the process exit status: 0 when every check passes, 1 on a check
//! failure or runtime error, 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::codebook::{
    bch_code, ebch_code, extended_qr_code, parse_code_file, qr_code, repetition_code, rm_code,
    single_parity_check_code, write_code_file, LinearCode,
};
use crate::error::Error;
use crate::exit::{
    block_capacity_certificate, erasure_prob_bounds, low_rate_gap, rate_rational,
    recommended_low_rate_epsilon, width_bound, width_bound_from_window, CertificateMode,
    ExactAnalyzer, ExactLimits, ExitPolynomial,
};
use crate::simulate::{estimate_curve, figure1_experiment, CurveEstimate, Grid, CSV_HEADER};
use crate::symmetry::{
    certify_doubly_transitive_with, certify_transitive_with, SymmetryOptions, Verdict,
};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "erasure-exit", version)]
#[command(about = "EXIT functions of binary linear codes on the erasure channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generator matrix in the code file format
    Construct {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Omega enumerators, EXIT values on a grid, and the area check
    ExitExact {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 64)]
        exact_cap: usize,
    },
    /// Monte Carlo EXIT and erasure-probability curve as CSV
    ExitMc {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transition widths, exact or estimated
    Width {
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated levels in (0, 1/2)
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.25")]
        eps: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Grid step for Monte Carlo widths
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, default_value_t = 64)]
        exact_cap: usize,
    },
    /// Exact rational area under the average EXIT function
    AreaCheck {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 64)]
        exact_cap: usize,
    },
    /// Transitivity certificates
    SymmetryCheck {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value_t = PropertyArg::Both)]
        property: PropertyArg,
        /// Witnesses sampled for long codes
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Erasure-probability orderings, width bounds and block certificates
    BoundsCheck {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = 64)]
        exact_cap: usize,
    },
    /// Rate-1/2 Reed-Muller EXIT curves for several n
    Figure1 {
        #[arg(long, value_delimiter = ',', default_value = "5,7,9")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 20_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Rm,
    Bch,
    Ebch,
    Qr,
    Eqr,
    Rep,
    Spc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Exact,
    Mc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    Transitive,
    DoublyTransitive,
    Both,
}

#[derive(Args, Debug)]
struct CodeArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Order (RM) or designed-distance parameter (BCH)
    #[arg(long)]
    v: Option<usize>,
    /// Number of variables / extension degree
    #[arg(long)]
    n: Option<usize>,
    /// Prime length for QR codes
    #[arg(long)]
    prime: Option<usize>,
    /// Length for repetition and single-parity-check codes
    #[arg(long)]
    len: Option<usize>,
    /// Read the code from a file instead
    #[arg(long, conflicts_with = "family")]
    code_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long, default_value_t = 1.0)]
    stop: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// Failure classes, each with its own diagnostic prefix.
enum Failure {
    Usage(String),
    Runtime(Error),
    Io(std::io::Error),
    /// Checks ran and at least one failed; details are already printed.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn need(x: Option<usize>, flag: &str, family: &str) -> std::result::Result<usize, Failure> {
    x.ok_or_else(|| usage(format!("--{flag} is required for --family {family}")))
}

impl CodeArgs {
    fn build(&self) -> std::result::Result<LinearCode, Failure> {
        if let Some(path) = &self.code_file {
            let text = std::fs::read_to_string(path)?;
            return Ok(parse_code_file(&text)?);
        }
        let family = self
            .family
            .ok_or_else(|| usage("one of --family or --code-file is required"))?;
        let code = match family {
            Family::Rm => rm_code(need(self.v, "v", "rm")?, need(self.n, "n", "rm")?),
            Family::Bch => bch_code(need(self.v, "v", "bch")?, need(self.n, "n", "bch")?),
            Family::Ebch => ebch_code(need(self.v, "v", "ebch")?, need(self.n, "n", "ebch")?),
            Family::Qr => qr_code(need(self.prime, "prime", "qr")?),
            Family::Eqr => extended_qr_code(need(self.prime, "prime", "eqr")?),
            Family::Rep => repetition_code(need(self.len, "len", "rep")?),
            Family::Spc => single_parity_check_code(need(self.len, "len", "spc")?),
        };
        code.map_err(|e| match e {
            Error::InvalidArgument(m) | Error::Unsupported(m) => usage(m),
            other => Failure::Runtime(other),
        })
    }
}

impl GridArgs {
    fn points(&self) -> std::result::Result<Vec<f64>, Failure> {
        Grid::new(self.start, self.stop, self.step)
            .map(|g| g.points())
            .map_err(|e| usage(e.to_string()))
    }
}

fn check_trials(mc: &McArgs) -> Outcome {
    if mc.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    Ok(())
}

fn limits(cap: usize) -> std::result::Result<ExactLimits, Failure> {
    if cap == 0 || cap > 64 {
        return Err(usage(format!("--exact-cap must lie in 1..=64, got {cap}")));
    }
    Ok(ExactLimits {
        sweep_max_n: cap.min(ExactLimits::default().sweep_max_n),
        trellis_max_n: cap,
    })
}

fn exact_exit(code: &LinearCode, cap: usize) -> std::result::Result<ExitPolynomial, Failure> {
    let an = ExactAnalyzer::with_limits(code, limits(cap)?)?;
    Ok(ExitPolynomial::average(&an.all_omega()?)?)
}

fn area_line(code: &LinearCode, area: &BigRational) -> (String, bool) {
    let rate = rate_rational(code);
    if *area == rate {
        (format!("area = {area} = K/N PASS"), true)
    } else {
        (format!("area = {area} != K/N = {rate} FAIL"), false)
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn provenance(args: &[String]) -> String {
    format!("# erasure-exit {} {}", env!("CARGO_PKG_VERSION"), args.join(" "))
}

fn emit(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn curve_csv(code: &LinearCode, curve: &CurveEstimate, trials: u64, seed: u64) -> String {
    use crate::codebook::CodeFamily;
    let n = match code.family() {
        CodeFamily::ReedMuller { n, .. } | CodeFamily::Bch { n, .. } | CodeFamily::ExtendedBch { n, .. } => *n,
        _ => 0,
    };
    let s = crate::simulate::sig10;
    let mut text = format!("{CSV_HEADER}\n");
    for pt in &curve.points {
        let _ = writeln!(
            text,
            "{n},{},{},{},{},{},{},{},{},{},{trials},{seed}",
            code.n(),
            s(code.rate()),
            s(pt.p),
            s(pt.exit.mean),
            s(pt.exit.stderr),
            s(pt.erasure.bit.mean),
            s(pt.erasure.bit.stderr),
            s(pt.erasure.block.mean),
            s(pt.erasure.block.stderr),
        );
    }
    text
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let echo: Vec<String> = args[1..].iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli.command, &provenance(&echo), out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = match f {
                Failure::Usage(m) => {
                    let _ = writeln!(err, "error[config]: {m}");
                    return 2;
                }
                Failure::Check => Ok(()),
                Failure::Io(e) => writeln!(err, "error[io]: {e}"),
                Failure::Runtime(e) => {
                    let class = match e {
                        Error::CapacityExceeded { .. } => "cap",
                        Error::DegenerateCode(_) => "degenerate",
                        Error::OutOfRange(_) => "range",
                        Error::Parse(_) => "parse",
                        _ => "runtime",
                    };
                    writeln!(err, "error[{class}]: {e}")
                }
            };
            1
        }
    }
}

fn execute(cmd: Command, prov: &str, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Construct { code, out: path } => {
            let c = code.build()?;
            writeln!(err, "{prov}")?;
            emit(&path, &write_code_file(&c), out)
        }
        Command::ExitExact { code, grid, exact_cap } => {
            let c = code.build()?;
            let pts = grid.points()?;
            let an = ExactAnalyzer::with_limits(&c, limits(exact_cap)?)?;
            let omegas = an.all_omega()?;
            let poly = ExitPolynomial::average(&omegas)?;
            writeln!(out, "{prov}")?;
            writeln!(out, "code: {} {} {}", c.n(), c.k(), c.label())?;
            for (i, w) in omegas.iter().enumerate() {
                let counts: Vec<String> = w.counts().iter().map(u64::to_string).collect();
                writeln!(out, "omega {i}: {}", counts.join(" "))?;
            }
            writeln!(out, "p,h,dh_dp")?;
            for p in pts {
                writeln!(out, "{},{},{}", p, poly.eval(p)?, poly.derivative(p)?)?;
            }
            let (line, ok) = area_line(&c, &poly.area());
            writeln!(out, "{line}")?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::ExitMc { code, grid, mc, out: path } => {
            let c = code.build()?;
            let pts = grid.points()?;
            check_trials(&mc)?;
            let curve = estimate_curve(&c, &pts, mc.trials, mc.seed)?;
            let text = format!("{prov} seed={}\n{}", mc.seed, curve_csv(&c, &curve, mc.trials, mc.seed));
            emit(&path, &text, out)
        }
        Command::Width { code, eps, method, step, mc, exact_cap } => {
            let c = code.build()?;
            check_trials(&mc)?;
            if let Some(e) = eps.iter().find(|e| !(**e > 0.0 && **e < 0.5)) {
                return Err(usage(format!("--eps values must lie in (0, 1/2), got {e}")));
            }
            let exact = match method {
                Method::Exact => true,
                Method::Mc => false,
                Method::Auto => c.n() <= exact_cap.min(64),
            };
            writeln!(out, "{prov}")?;
            let doubly = certify_doubly_transitive_with(&c, &SymmetryOptions::default()).verdict
                == Verdict::Certified;
            let mut all_ok = true;
            let widths: Vec<(f64, f64, f64, f64, f64)> = if exact {
                let poly = exact_exit(&c, exact_cap)?;
                eps.iter()
                    .map(|&e| -> std::result::Result<_, Failure> {
                        let w = poly.width(e)?;
                        Ok((e, poly.inverse(e), poly.inverse(1.0 - e), w, 0.0))
                    })
                    .collect::<std::result::Result<_, _>>()?
            } else {
                let grid = Grid::unit(step).map_err(|e| usage(e.to_string()))?.points();
                let curve = estimate_curve(&c, &grid, mc.trials, mc.seed)?;
                eps.iter()
                    .map(|&e| {
                        let w = curve.width(e)?;
                        Ok((e, w.p_low, w.p_high, w.width, w.uncertainty))
                    })
                    .collect::<std::result::Result<_, Failure>>()?
            };
            for (e, lo, hi, w, unc) in widths {
                let mut line = format!(
                    "eps = {e} p_low = {lo:.10} p_high = {hi:.10} width = {w:.10}"
                );
                if !exact {
                    let _ = write!(line, " +- {unc:.10}");
                }
                if doubly && c.n() > 2 {
                    let b = width_bound(c.n() - 1, e, 1.0)?;
                    let ok = w <= b;
                    all_ok &= ok;
                    let _ = write!(line, " bound(C=1) = {b:.10} {}", verdict(ok));
                } else {
                    line.push_str(" bound n/a (double transitivity not certified)");
                }
                writeln!(out, "{line}")?;
            }
            if all_ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::AreaCheck { code, exact_cap } => {
            let c = code.build()?;
            let poly = exact_exit(&c, exact_cap)?;
            writeln!(out, "{prov}")?;
            let (line, ok) = area_line(&c, &poly.area());
            writeln!(out, "{line}")?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::SymmetryCheck { code, property, samples, seed } => {
            let c = code.build()?;
            let opts = SymmetryOptions {
                samples,
                seed,
                ..SymmetryOptions::default()
            };
            writeln!(out, "{prov}")?;
            let mut certs = Vec::new();
            if property != PropertyArg::DoublyTransitive {
                certs.push(certify_transitive_with(&c, &opts));
            }
            if property != PropertyArg::Transitive {
                certs.push(certify_doubly_transitive_with(&c, &opts));
            }
            for cert in &certs {
                write!(out, "{}", cert.dump())?;
            }
            if certs.iter().all(|c| c.verdict == Verdict::Certified) {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::BoundsCheck { code, mc, step, exact_cap } => {
            let c = code.build()?;
            check_trials(&mc)?;
            let grid = Grid::unit(step).map_err(|e| usage(e.to_string()))?.points();
            writeln!(out, "{prov}")?;
            let ok = bounds_report(&c, &grid, &mc, exact_cap, out)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Figure1 { n, trials, seed, step, out: path } => {
            if trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            if let Some(bad) = n.iter().find(|&&x| !(2..=16).contains(&x)) {
                return Err(usage(format!("--n values must lie in 2..=16, got {bad}")));
            }
            let grid = Grid::unit(step).map_err(|e| usage(e.to_string()))?;
            let fig = figure1_experiment(&n, &grid, trials, seed)?;
            emit(&path, &format!("{prov}\n{}", fig.to_csv()), out)?;
            let summary: &mut dyn Write = if path.is_some() { out } else { err };
            let mut widths = Vec::new();
            for s in &fig.codes {
                let half = match &s.p_half {
                    Ok(p) => format!("{p:.6}"),
                    Err(e) => format!("n/a ({e})"),
                };
                let width = match &s.width {
                    Ok(w) => {
                        widths.push(w.width);
                        format!("{:.6} +- {:.6}", w.width, w.uncertainty)
                    }
                    Err(e) => format!("n/a ({e})"),
                };
                writeln!(
                    summary,
                    "n = {} N = {} RM({},{}) rate = {} p_half = {half} width(0.1) = {width}",
                    s.n, s.len, s.v, s.n, s.rate
                )?;
            }
            let decreasing = widths.len() == fig.codes.len() && widths.windows(2).all(|w| w[1] < w[0]);
            writeln!(summary, "widths strictly decreasing {}", verdict(decreasing))?;
            if decreasing {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn bounds_report(
    c: &LinearCode,
    grid: &[f64],
    mc: &McArgs,
    exact_cap: usize,
    out: &mut dyn Write,
) -> std::result::Result<bool, Failure> {
    let n = c.n();
    let dmin = c.dmin_info().value();
    let mut all = true;
    let mut check = |out: &mut dyn Write, name: String, ok: bool| -> std::io::Result<()> {
        all &= ok;
        writeln!(out, "{name} {}", verdict(ok))
    };

    let curve = estimate_curve(c, grid, mc.trials, mc.seed)?;
    let ordered = curve.points.iter().all(|pt| {
        let (pb, pbb) = (pt.erasure.bit.mean, pt.erasure.block.mean);
        pb <= pbb && dmin as f64 * pbb <= n as f64 * pb + 1e-12
    });
    check(out, format!("P_b <= P_B <= (N/d_min) P_b on {} Monte Carlo points (d_min >= {dmin})", grid.len()), ordered)?;

    let implied = grid.iter().zip(&curve.fit).all(|(&p, &h)| {
        erasure_prob_bounds(n, c.k(), dmin, p, h.clamp(0.0, 1.0))
            .map(|b| b.bit <= b.block_dmin && b.block_dmin <= b.block_union)
            .unwrap_or(false)
    });
    check(out, "p h(p) <= (N/d_min) p h(p) <= N p h(p) on the fitted curve".into(), implied)?;

    let doubly = certify_doubly_transitive_with(c, &SymmetryOptions::default()).verdict == Verdict::Certified;
    if n > 2 {
        for eps in [0.05, 0.1, 0.25] {
            let direct = width_bound(n - 1, eps, 1.0)?;
            let window = width_bound_from_window(0.0, 1.0, ((n - 1) as f64).ln(), eps, 1.0 - eps)?;
            check(
                out,
                format!("window bound (0, 1, ln(N-1)) = {window:.12} matches width bound {direct:.12} at eps = {eps}"),
                (window - direct).abs() <= 1e-12,
            )?;
        }
    }
    if doubly && n > 2 && n <= exact_cap.min(64) {
        let poly = exact_exit(c, exact_cap)?;
        for eps in [0.05, 0.1, 0.25] {
            let w = poly.width(eps)?;
            let b = width_bound(n - 1, eps, 1.0)?;
            check(out, format!("exact width {w:.10} <= {b:.10} at eps = {eps}"), w <= b)?;
        }
    } else {
        writeln!(out, "exact width bound skipped (needs certified double transitivity and N <= {})", exact_cap.min(64))?;
    }

    for (mode, name) in [(CertificateMode::BchStyle, "d_min/(N ln N)"), (CertificateMode::RmStyle, "1/N^2")] {
        let cert = block_capacity_certificate(n, dmin, None, mode)?;
        let nf = n as f64;
        let want = match mode {
            CertificateMode::BchStyle => 1.0 / nf.ln(),
            CertificateMode::RmStyle => 1.0 / nf,
        };
        check(
            out,
            format!("block certificate eps_n = {name} = {:.6e}, P_B bound = {:.10}", cert.eps_n, cert.block_bound),
            (cert.block_bound - want).abs() <= 1e-12,
        )?;
    }

    let r = c.rate();
    match recommended_low_rate_epsilon(r, n) {
        Some(eps) => {
            let gap = low_rate_gap(r, n, eps)?;
            writeln!(out, "low-rate gap at eps_n = {eps:.6}: delta_n = {gap:.6}")?;
        }
        None => writeln!(out, "low-rate gap: r ln N <= e, no recommended eps_n")?,
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["erasure-exit"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn construct_header() {
        let (code, out, err) = call(&["construct", "--family", "rm", "--v", "1", "--n", "3"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("8 4 RM(1,3)\n"));
        assert!(err.starts_with("# erasure-exit"));
    }

    #[test]
    fn area_verdict() {
        let (code, out, _) = call(&["area-check", "--family", "rm", "--v", "1", "--n", "4"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l == "area = 5/16 = K/N PASS"), "{out}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["construct"]).0, 2);
        assert_eq!(call(&["construct", "--family", "rm", "--v", "1"]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["exit-mc", "--family", "rep", "--len", "3", "--step", "0"]).0, 2);
        assert_eq!(call(&["construct", "--family", "qr", "--prime", "11"]).0, 2);
    }

    #[test]
    fn capacity_error_exits_1() {
        let (code, _, err) = call(&["area-check", "--family", "rm", "--v", "1", "--n", "5", "--exact-cap", "16"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error[cap]"));
    }

    #[test]
    fn symmetry_certificate_passes() {
        let (code, out, _) = call(&["symmetry-check", "--family", "rm", "--v", "1", "--n", "3"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("verdict: certified"));
    }
}
