mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hrtlab_core::contfrac::{parse_rational, DEFAULT_PRECISION_BITS};
use hrtlab_core::fracsum::BandConfig;
use hrtlab_core::hrtlab::{CertificateParams, PlanePoint, SymbolPair};
use hrtlab_core::numeric::Fx;
use hrtlab_core::unitprod::Coef;
use hrtlab_core::Error;
use num_rational::BigRational;

use commands::{delta, point, real, OrbitArgs, SCHEMAS};
use report::{Format, Report};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "hrtlab", version, about = "Continued fractions, lacunary products and orbit experiments")]
#[command(allow_negative_numbers = true)]
struct RunConfig {
    /// Print the column documentation of every command and exit.
    #[arg(long)]
    schema: bool,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Precision for `dec:` specs given without `@bits`.
    #[arg(long, global = true, env = "HRTLAB_PRECISION_BITS", default_value_t = DEFAULT_PRECISION_BITS)]
    precision_bits: u32,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Defaults to json for `certify` and csv otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convergent table with M_k and membership in E.
    Cf {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Balancing constant D of the set E.
        #[arg(long, default_value = "2")]
        balance: String,
    },
    /// Ratio of the alpha product to |e(Nx) - 1| over sampled admissible x.
    Prop1 {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "1/128")]
        delta: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Separated fractional-part sum and its band decomposition.
    Sums {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "1/128")]
        delta: String,
        #[arg(long)]
        k: usize,
        /// Base point; a sampled admissible point when absent.
        #[arg(long)]
        x: Option<String>,
        /// Threshold factor for the sets C_l.
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        /// The largest scale satisfies M_l >= l1_scale * M^4.
        #[arg(long, default_value_t = 0.05)]
        l1_scale: f64,
    },
    /// One-sided products of A + B e(alpha x) on a stratified grid.
    Corollary {
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        coefs: Coefs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        /// Grid size.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Trace of ln|f(x+n)| along the recurrence f(x+1) P(x) = f(x) Q(x).
    Orbit {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 50)]
        back: u64,
        #[arg(long, default_value_t = 50)]
        fwd: u64,
        /// Also check the conjugate product identity with this L.
        #[arg(long)]
        identity: Option<u64>,
        /// Interval for gamma as `lo,hi`.
        #[arg(long, default_value = "0,1")]
        interval: String,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
    },
    /// Map a (2,2) configuration to (0,0), (1,0), (0,alpha), (1,beta).
    Normalize {
        /// A point `t,xi`; give exactly four.
        #[arg(long = "point", num_args = 1, required = true)]
        points: Vec<String>,
    },
    /// Contradiction certificate for the recurrence with Q = 1 + e(theta) e(beta x).
    Certify {
        #[command(flatten)]
        pair: Pair,
        /// One index or a comma-separated list.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, default_value = "1/128")]
        delta: String,
        #[arg(long, default_value_t = 0.2)]
        epsilon3: f64,
        /// Grid size.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 1_000_000)]
        n_max: u64,
    },
}

#[derive(Args, Debug)]
struct Coefs {
    /// Coefficient A: `re`, `re+imi` or `e:<turns>`.
    #[arg(long = "a", default_value = "1")]
    a: String,
    /// Coefficient B.
    #[arg(long = "b", default_value = "1")]
    b: String,
}

#[derive(Args, Debug)]
struct Pair {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    #[arg(long, default_value = "1/4")]
    theta: String,
    #[command(flatten)]
    coefs: Coefs,
}

enum Failure {
    Input(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let input = matches!(
            e,
            Error::Parse { .. }
                | Error::InvalidSpec(_)
                | Error::InvalidParameter(_)
                | Error::DepthUnavailable { .. }
                | Error::EvenIndex(_)
                | Error::InadmissibleX
                | Error::DuplicatePoints
                | Error::NotTwoTwo
                | Error::DegenerateCollinear
                | Error::EqualModuli
        );
        if input {
            Failure::Input(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(format!("cannot write output: {e}"))
    }
}

fn coefs(c: &Coefs) -> Result<(Coef, Coef), Error> {
    Ok((c.a.parse()?, c.b.parse()?))
}

fn symbol_pair(p: &Pair, bits: u32) -> Result<SymbolPair, Error> {
    let (a, b) = coefs(&p.coefs)?;
    SymbolPair::new(a, b, real(&p.alpha, bits)?, real(&p.beta, bits)?, parse_rational(&p.theta)?)
}

fn plane_point(s: &str, bits: u32) -> Result<PlanePoint, Error> {
    let Some((t, xi)) = s.split_once(',') else {
        return Err(Error::Parse { position: 0, expected: "a point 't,xi'".into() });
    };
    let coord = |c: &str| -> Result<(BigRational, bool), Error> {
        if c.contains(':') {
            let r = real(c, bits)?;
            let p = PlanePoint::from_reals(&r, &r);
            Ok((p.t, p.exact))
        } else {
            Ok((parse_rational(c)?, true))
        }
    };
    let ((t, et), (xi, ex)) = (coord(t.trim())?, coord(xi.trim())?);
    Ok(PlanePoint { t, xi, exact: et && ex })
}

fn interval(s: &str) -> Result<(BigRational, BigRational), Error> {
    let Some((lo, hi)) = s.split_once(',') else {
        return Err(Error::Parse { position: 0, expected: "an interval 'lo,hi'".into() });
    };
    Ok((parse_rational(lo.trim())?, parse_rational(hi.trim())?))
}

fn run(cfg: &RunConfig, cmd: &Command) -> Result<(Report, Format), Failure> {
    let bits = cfg.precision_bits;
    let base = |r: &mut Report| {
        r.param("seed", cfg.seed);
        r.param("precision_bits", bits);
    };
    let (report, default_format) = match cmd {
        Command::Cf { alpha, depth, balance } => {
            let mut r = Report::new("cf", commands::CF_SCHEMA);
            r.param("alpha", alpha);
            r.param("depth", depth);
            r.param("balance", balance);
            base(&mut r);
            let d = parse_rational(balance)?;
            if d < BigRational::from_integer(1.into()) {
                return Err(Error::InvalidParameter(format!("D must be at least 1, got {d}")).into());
            }
            commands::cf(&real(alpha, bits)?, *depth, &d, &mut r)?;
            (r, Format::Csv)
        }
        Command::Prop1 { alpha, delta: ds, k, samples } => {
            let mut r = Report::new("prop1", commands::PROP1_SCHEMA);
            r.param("alpha", alpha);
            r.param("delta", ds);
            r.param("k", k);
            r.param("samples", samples);
            base(&mut r);
            commands::prop1(&real(alpha, bits)?, &delta(ds)?, *k, *samples, cfg.seed, &mut r)?;
            (r, Format::Csv)
        }
        Command::Sums { alpha, delta: ds, k, x, theta, l1_scale } => {
            let mut r = Report::new("sums", commands::SUMS_SCHEMA);
            r.param("alpha", alpha);
            r.param("delta", ds);
            r.param("k", k);
            r.param("x", x.as_deref().unwrap_or("sampled"));
            r.param("theta", theta);
            r.param("l1_scale", l1_scale);
            base(&mut r);
            let x = x.as_deref().map(parse_rational).transpose()?.map(|v| Fx::from_rational(&v));
            let config = BandConfig { theta: *theta, l1_scale: *l1_scale };
            commands::sums(&real(alpha, bits)?, &delta(ds)?, *k, x, config, cfg.seed, &mut r)?;
            (r, Format::Csv)
        }
        Command::Corollary { alpha, coefs: c, k, epsilon, samples } => {
            let mut r = Report::new("corollary", commands::COROLLARY_SCHEMA);
            r.param("alpha", alpha);
            r.param("A", &c.a);
            r.param("B", &c.b);
            r.param("k", k);
            r.param("epsilon", epsilon);
            r.param("samples", samples);
            base(&mut r);
            let (a, b) = coefs(c)?;
            commands::corollary(&real(alpha, bits)?, a, b, *k, *epsilon, *samples, cfg.seed, &mut r)?;
            (r, Format::Csv)
        }
        Command::Orbit { pair, x, back, fwd, identity, interval: iv, n_max } => {
            let mut r = Report::new("orbit", commands::ORBIT_SCHEMA);
            r.param("alpha", &pair.alpha);
            r.param("beta", &pair.beta);
            r.param("theta", &pair.theta);
            r.param("A", &pair.coefs.a);
            r.param("B", &pair.coefs.b);
            r.param("x", x);
            r.param("back", back);
            r.param("fwd", fwd);
            if let Some(l) = identity {
                r.param("identity_L", l);
                r.param("interval", iv);
                r.param("n_max", n_max);
            }
            base(&mut r);
            let args = OrbitArgs {
                pair: symbol_pair(pair, bits)?,
                beta: real(&pair.beta, bits)?,
                x: point(x, bits)?,
                back: *back,
                fwd: *fwd,
                identity: match identity {
                    Some(l) => Some((*l, interval(iv)?, *n_max)),
                    None => None,
                },
            };
            commands::orbit(&args, &mut r)?;
            (r, Format::Csv)
        }
        Command::Normalize { points } => {
            let mut r = Report::new("normalize", commands::NORMALIZE_SCHEMA);
            for p in points {
                r.param("point", p);
            }
            base(&mut r);
            let pts: Vec<PlanePoint> =
                points.iter().map(|p| plane_point(p, bits)).collect::<Result<_, _>>()?;
            let pts: [PlanePoint; 4] = pts.try_into().map_err(|v: Vec<_>| {
                Failure::Input(format!("exactly four points are required, got {}", v.len()))
            })?;
            commands::normalize(pts, &mut r)?;
            (r, Format::Csv)
        }
        Command::Certify { pair, k, delta: ds, epsilon3, samples, n_max } => {
            let mut r = Report::new("certify", commands::CERTIFY_SCHEMA);
            r.param("alpha", &pair.alpha);
            r.param("beta", &pair.beta);
            r.param("theta", &pair.theta);
            r.param("A", &pair.coefs.a);
            r.param("B", &pair.coefs.b);
            r.param("k", k.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","));
            r.param("delta", ds);
            r.param("epsilon3", epsilon3);
            r.param("samples", samples);
            r.param("n_max", n_max);
            base(&mut r);
            let (a, b) = coefs(&pair.coefs)?;
            let theta = parse_rational(&pair.theta)?;
            let mut params = CertificateParams::new(
                real(&pair.alpha, bits)?,
                real(&pair.beta, bits)?,
                theta,
                k[0],
                cfg.seed,
            );
            params.a = a;
            params.b = b;
            params.delta = delta(ds)?;
            params.epsilon3 = *epsilon3;
            params.grid_size = *samples;
            params.n_max = *n_max;
            commands::certify(&params, k, &mut r)?;
            (r, Format::Json)
        }
    };
    Ok((report, cfg.format.unwrap_or(default_format)))
}

fn emit(cfg: &RunConfig, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<()> {
    match &cfg.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write(&mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()
        }
    }
}

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    if cfg.schema {
        return match emit(&cfg, |w| report::write_schema(SCHEMAS, w)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(EXIT_INPUT)
            }
        };
    }
    let Some(cmd) = &cfg.command else {
        eprintln!("error: a command is required (see --help)");
        return ExitCode::from(EXIT_INPUT);
    };
    let outcome = run(&cfg, cmd).and_then(|(report, format)| {
        emit(&cfg, |w| report.write(format, w))?;
        Ok(report)
    });
    match outcome {
        Ok(report) if report.passed() => ExitCode::SUCCESS,
        Ok(report) => {
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {} ({})", c.name, c.detail);
            }
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
    }
}
