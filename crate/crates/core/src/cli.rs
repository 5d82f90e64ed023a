//! Command line front end.
//!
//! Every subcommand writes one table (CSV, the default) or one JSON document
//! to standard output or to `--output`. Relative output paths are resolved
//! against `$FLNCS_OUTPUT_DIR` when that variable is set. Exit status is 0 on
//! success, 1 for rejected input, 2 for numerical failures.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::algebra::{energy_spectrum, Branch, ModelParams};
use crate::error::{Error, Result};
use crate::format::{round_sig, sig};
use crate::generation::{plan, simulate, uniform_schedule, DEFAULT_GTAU};
use crate::identity::{log_space, moments_csv, moments_json, verify_moments, WeightEvaluator};
use crate::states::{flncs, qfunction_grid, FockVector, Window};
use crate::statistics::{photon_stats, quadrature_report, scan, Observable, Sampling, ScanSpec};

pub const OUTPUT_DIR_ENV: &str = "FLNCS_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "flncs",
    version,
    about = "Nonlinear coherent states of the Fokas-Lagerstrom oscillator",
    long_about = "Nonlinear coherent states of the Fokas-Lagerstrom oscillator.\n\n\
        Pairs: 1 -> (A,B) = (2/3,4/3), 2 -> (2/3,1/3), 3 -> (5/3,4/3).\n\
        Complex labels are written as a, a+bi or a-bi. Numbers are printed with\n\
        12 significant digits. Exit status: 0 ok, 1 invalid input, 2 numerical failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted. Relative paths are placed
    /// under $FLNCS_OUTPUT_DIR when it is set.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Energy shell index N; the Fock space holds levels 0..=N.
    #[arg(short = 'N', long = "shell")]
    pub n: usize,
    /// Branch pair index (1, 2 or 3).
    #[arg(long, default_value_t = 2)]
    pub pair: u8,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams::new(self.n, Branch::from_index(self.pair)?))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Amplitudes of the coherent state |z> (columns n,re,im).
    ///
    /// Figure data: none directly; the amplitudes underlie every figure.
    State {
        #[command(flatten)]
        model: ModelArgs,
        /// Coherent-state label z.
        #[arg(short = 'z', long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Photon statistics and quadrature variances of |z>.
    ///
    /// Reports P(n), the mean photon number, its variance, the Mandel
    /// parameter ("undefined" for the vacuum) and the quadrature report at
    /// phase --phi. Figure data: single points of the fig2-fig5 curves.
    Stats {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'z', long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        /// Quadrature phase in radians.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample an observable over |z| or over the quadrature phase.
    ///
    /// Figure data: p<n> gives the photon-number probability curves
    /// (fig2), mean the mean photon number curves (fig3), mandel the Mandel
    /// parameter curves (fig4), s1/s2 the squeezing parameter curves over the
    /// phase (fig5). |z| scans sample the closed range [--from, --to]; phase
    /// scans sample [--from, --to) and default to 720 points on [0, 2pi).
    Scan {
        /// mandel, mean, s1, s2 or p<n>.
        observable: String,
        #[command(flatten)]
        model: ModelArgs,
        /// Coherent-state label for phase scans; for |z| scans only its
        /// argument is used.
        #[arg(short = 'z', long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "1")]
        z: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Husimi Q-function on a grid of the alpha plane (columns re,im,q).
    ///
    /// Figure data (fig1): with --step k the state is the cavity field after
    /// the k-th atom of the synthesis protocol for target |z> (default
    /// z = 1, g*tau = pi/5); without it the target state itself.
    Qfunc {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'z', long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "1")]
        z: Complex64,
        /// Protocol step whose intermediate field is plotted (0..=N).
        #[arg(long)]
        step: Option<usize>,
        /// Uniform interaction parameter g*tau used with --step.
        #[arg(long, default_value_t = DEFAULT_GTAU)]
        gtau: f64,
        /// Window re_min,re_max,im_min,im_max; default [-(sqrt N + 3), sqrt N + 3]^2.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<Window>,
        #[arg(long, default_value_t = 101)]
        nx: usize,
        #[arg(long, default_value_t = 101)]
        ny: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the moment identity of the resolution-of-identity weight.
    ///
    /// Integrates x^n w(x) for n = 0..=max-n with w from Mellin-Barnes
    /// inversion and compares with rho(n) (columns n,numeric,analytic,rel_error).
    /// With --profile, prints the weight itself on log-spaced points (x,w).
    /// Figure data: none; this is a numerical check of the measure.
    IdentityCheck {
        #[command(flatten)]
        model: ModelArgs,
        /// Highest moment order; defaults to N.
        #[arg(long)]
        max_n: Option<usize>,
        /// Contour abscissa c, strictly inside the pole-free strip.
        #[arg(long)]
        abscissa: Option<f64>,
        /// Emit the weight profile instead of the moment table.
        #[arg(long)]
        profile: bool,
        #[arg(long, default_value_t = 1e-3)]
        x_min: f64,
        #[arg(long, default_value_t = 1e2)]
        x_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Plan and simulate the atom-by-atom cavity synthesis of |z>.
    ///
    /// CSV output lists the atomic parameters (k,gtau,eps_re,eps_im);
    /// fidelity and success probability go to standard error. JSON holds
    /// the full plan and the simulation summary. Figure data (fig1): with
    /// --intermediates the field after each atom is printed instead
    /// (k,n,re,im).
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'z', long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        /// Interaction parameters: one value for a uniform schedule or a
        /// comma-separated list of N values.
        #[arg(long, value_parser = parse_schedule)]
        gtau: Option<Schedule>,
        #[arg(long)]
        intermediates: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The three shell energies E_N with their branch index (columns branch,energy).
    ///
    /// Figure data: none; tabulates the spectrum branches.
    Spectrum {
        #[arg(short = 'N', long = "shell")]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    Uniform(f64),
    List(Vec<f64>),
}

/// Parse `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {s:?}; use a, a+bi or a-bi");
    let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        let re = num(&t)?;
        return if re.is_finite() {
            Ok(Complex64::new(re, 0.0))
        } else {
            Err(bad())
        };
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |p: &str| match p {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => num(p),
    };
    let z = match split {
        Some(i) => Complex64::new(num(&body[..i])?, imag(&body[i..])?),
        None => Complex64::new(0.0, imag(body)?),
    };
    if !z.is_finite() {
        return Err(format!("complex number {s:?} is not finite"));
    }
    Ok(z)
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| format!("bad window {s:?}: {e}"))?;
    if v.len() != 4 {
        return Err(format!(
            "window needs four values re_min,re_max,im_min,im_max, got {s:?}"
        ));
    }
    Window::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_schedule(s: &str) -> std::result::Result<Schedule, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| format!("bad schedule {s:?}: {e}"))?;
    match v.as_slice() {
        [g] => Ok(Schedule::Uniform(*g)),
        _ => Ok(Schedule::List(v)),
    }
}

impl Schedule {
    fn resolve(&self, atoms: usize) -> Vec<f64> {
        match self {
            Schedule::Uniform(g) => uniform_schedule(atoms, *g),
            Schedule::List(v) => v.clone(),
        }
    }
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("flncs: {e}");
            e.exit_code()
        }
    }
}

/// Rendered output of one invocation, before it is written anywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub body: String,
    /// Human-readable notes for the error stream.
    pub notes: Vec<String>,
}

pub fn run(cli: &Cli) -> Result<()> {
    let rendered = render(&cli.command)?;
    for note in &rendered.notes {
        eprintln!("{note}");
    }
    let out = output_args(&cli.command);
    match &out.output {
        Some(path) => {
            let path = match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, rendered.body)?;
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(rendered.body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::State { out, .. }
        | Command::Stats { out, .. }
        | Command::Scan { out, .. }
        | Command::Qfunc { out, .. }
        | Command::IdentityCheck { out, .. }
        | Command::Generate { out, .. }
        | Command::Spectrum { out, .. } => out,
    }
}

fn json_body(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values always serialize");
    s.push('\n');
    s
}

fn complex_json(z: Complex64) -> serde_json::Value {
    serde_json::json!([round_sig(z.re), round_sig(z.im)])
}

fn amplitudes_csv(state: &FockVector) -> String {
    let mut out = String::from("n,re,im\n");
    for (n, a) in state.amplitudes().iter().enumerate() {
        let _ = writeln!(out, "{n},{},{}", sig(a.re), sig(a.im));
    }
    out
}

/// Compute the output of one subcommand.
pub fn render(cmd: &Command) -> Result<Rendered> {
    let mut notes = Vec::new();
    let body = match cmd {
        Command::State { model, z, out } => {
            let params = model.params()?;
            let state = flncs(&params, *z);
            match out.format {
                Format::Csv => amplitudes_csv(&state),
                Format::Json => json_body(serde_json::json!({
                    "params": params.to_string(),
                    "z": complex_json(*z),
                    "amplitudes": state.amplitudes().iter().map(|&a| complex_json(a)).collect::<Vec<_>>(),
                })),
            }
        }
        Command::Stats { model, z, phi, out } => {
            let params = model.params()?;
            let state = flncs(&params, *z);
            let stats = photon_stats(&state);
            let quad = quadrature_report(&state, *phi);
            match out.format {
                Format::Csv => {
                    let mut s = String::from("quantity,value\n");
                    let mut row = |k: &str, v: String| {
                        let _ = writeln!(s, "{k},{v}");
                    };
                    row("mean", sig(stats.mean));
                    row("variance", sig(stats.variance));
                    row("mandel", stats.mandel.to_string());
                    row("phi", sig(quad.phi));
                    row("var1", sig(quad.var1));
                    row("var2", sig(quad.var2));
                    row("s1", sig(quad.s1));
                    row("s2", sig(quad.s2));
                    row("product", sig(quad.product));
                    for (n, p) in stats.p.iter().enumerate() {
                        row(&format!("p{n}"), sig(*p));
                    }
                    s
                }
                Format::Json => json_body(serde_json::json!({
                    "params": params.to_string(),
                    "z": complex_json(*z),
                    "p": stats.p.iter().map(|&p| round_sig(p)).collect::<Vec<_>>(),
                    "mean": round_sig(stats.mean),
                    "variance": round_sig(stats.variance),
                    "mandel": stats.mandel.value().map(round_sig),
                    "quadrature": {
                        "phi": round_sig(quad.phi),
                        "var1": round_sig(quad.var1),
                        "var2": round_sig(quad.var2),
                        "s1": round_sig(quad.s1),
                        "s2": round_sig(quad.s2),
                        "product": round_sig(quad.product),
                    },
                })),
            }
        }
        Command::Scan {
            observable,
            model,
            z,
            from,
            to,
            points,
            out,
        } => {
            let observable: Observable = observable.parse()?;
            let params = model.params()?;
            let sampling = if observable.scans_phase() {
                let d = Sampling::default_phase();
                Sampling {
                    lo: from.unwrap_or(d.lo),
                    hi: to.unwrap_or(d.hi),
                    points: points.unwrap_or(d.points),
                    inclusive: false,
                }
            } else {
                Sampling::closed(
                    from.unwrap_or(0.0),
                    to.unwrap_or(10.0),
                    points.unwrap_or(201),
                )
            };
            let table = scan(&ScanSpec {
                observable,
                params,
                sampling,
                z: *z,
            })?;
            match out.format {
                Format::Csv => table.to_csv(),
                Format::Json => {
                    let mut v = table.to_json();
                    v["params"] = params.to_string().into();
                    json_body(v)
                }
            }
        }
        Command::Qfunc {
            model,
            z,
            step,
            gtau,
            window,
            nx,
            ny,
            out,
        } => {
            let params = model.params()?;
            let target = flncs(&params, *z);
            let state = match step {
                None => target,
                Some(k) => {
                    if *k > params.n() {
                        return Err(Error::Domain(format!(
                            "step {k} exceeds the number of atoms N = {}",
                            params.n()
                        )));
                    }
                    let p = plan(&target, &uniform_schedule(params.n(), *gtau))?;
                    simulate(&p)?.intermediates.swap_remove(*k)
                }
            };
            let window = window.unwrap_or_else(|| Window::default_for(&params));
            let grid = qfunction_grid(&state, &window, *nx, *ny)?;
            match out.format {
                Format::Csv => grid.to_csv(),
                Format::Json => json_body(grid.to_json()),
            }
        }
        Command::IdentityCheck {
            model,
            max_n,
            abscissa,
            profile,
            x_min,
            x_max,
            points,
            out,
        } => {
            let params = model.params()?;
            let evaluator = match abscissa {
                Some(c) => WeightEvaluator::with_abscissa(params, *c)?,
                None => WeightEvaluator::new(params)?,
            };
            if *profile {
                if !(*x_min > 0.0 && x_min < x_max) || *points < 2 {
                    return Err(Error::Config(format!(
                        "profile needs 0 < x_min < x_max and points >= 2 (got {x_min}, {x_max}, {points})"
                    )));
                }
                let prof = evaluator.profile(&log_space(*x_min, *x_max, *points))?;
                let negative = prof.negative_points(1e-9);
                if !negative.is_empty() {
                    notes.push(format!(
                        "warning: w(x) < -1e-9 at {} of {} sampled points",
                        negative.len(),
                        prof.rows.len()
                    ));
                }
                match out.format {
                    Format::Csv => prof.to_csv(),
                    Format::Json => json_body(serde_json::json!({
                        "params": params.to_string(),
                        "abscissa": round_sig(evaluator.abscissa()),
                        "x": prof.rows.iter().map(|r| round_sig(r.0)).collect::<Vec<_>>(),
                        "w": prof.rows.iter().map(|r| round_sig(r.1)).collect::<Vec<_>>(),
                    })),
                }
            } else {
                let reports = verify_moments(&evaluator, max_n.unwrap_or(params.n()))?;
                match out.format {
                    Format::Csv => moments_csv(&reports),
                    Format::Json => json_body(moments_json(&params, &reports)),
                }
            }
        }
        Command::Generate {
            model,
            z,
            gtau,
            intermediates,
            out,
        } => {
            let params = model.params()?;
            let target = flncs(&params, *z);
            let schedule = gtau
                .clone()
                .unwrap_or(Schedule::Uniform(DEFAULT_GTAU))
                .resolve(params.n());
            let p = plan(&target, &schedule)?;
            let sim = simulate(&p)?;
            notes.push(format!(
                "fidelity={} success_prob={}",
                sig(sim.fidelity),
                sig(sim.success_prob)
            ));
            match (out.format, intermediates) {
                (Format::Csv, true) => sim.intermediates_csv(),
                (Format::Csv, false) => p.to_csv(),
                (Format::Json, true) => json_body(serde_json::json!({
                    "params": params.to_string(),
                    "states": sim.intermediates.iter()
                        .map(|s| s.amplitudes().iter().map(|&a| complex_json(a)).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })),
                (Format::Json, false) => {
                    let mut v = p.to_json();
                    v["params"] = params.to_string().into();
                    v["simulation"] = serde_json::json!({
                        "fidelity": round_sig(sim.fidelity),
                        "success_prob": round_sig(sim.success_prob),
                    });
                    json_body(v)
                }
            }
        }
        Command::Spectrum { n, out } => {
            let levels = energy_spectrum(*n);
            match out.format {
                Format::Csv => {
                    let mut s = String::from("branch,energy\n");
                    for l in levels {
                        let _ = writeln!(s, "{},{}", l.branch.index(), sig(l.energy));
                    }
                    s
                }
                Format::Json => json_body(serde_json::json!({
                    "N": n,
                    "levels": levels.iter().map(|l| {
                        let (a, b) = l.branch.pair();
                        serde_json::json!({
                            "branch": l.branch.index(),
                            "a": format!("{}/{}", a.numer(), a.denom()),
                            "b": format!("{}/{}", b.numer(), b.denom()),
                            "energy": round_sig(l.energy),
                        })
                    }).collect::<Vec<_>>(),
                })),
            }
        }
    };
    Ok(Rendered { body, notes })
}
