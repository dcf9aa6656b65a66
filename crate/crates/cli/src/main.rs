use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eprmol::dataset::{
    quarter_pi_betas, DecompositionReport, InversionReport, LimitReport, ParamsEcho, SweepDataset,
    TrajectoryDataset,
};
use eprmol::figure::{figure_by_id, render_svg, FigureOptions};
use eprmol::limits::{decade_sequence, LimitSide};
use eprmol::trajectory::DEFAULT_GRID_STEP;
use eprmol::{ModelError, ModelParams};

const EXIT_ARGUMENT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "eprmol",
    version,
    about = "Trajectories of the entangled two-particle molecule"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, global = true, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    m: f64,
    #[arg(long, global = true, default_value_t = 0.5)]
    alpha: f64,
    #[arg(
        long,
        global = true,
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    beta: f64,
    #[arg(long, global = true, default_value_t = PI / 2.0)]
    k: f64,
    #[arg(
        long,
        global = true,
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    tau: f64,
    #[arg(
        long,
        global = true,
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    xmin: f64,
    #[arg(
        long,
        global = true,
        default_value_t = 4.0,
        allow_negative_numbers = true
    )]
    xmax: f64,
    #[arg(long, global = true, default_value_t = 2001)]
    samples: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sampled t(x) with slope, branch and direction, plus turning points and events.
    Trajectory,
    /// One curve per phase with the wedge bounds.
    Sweep {
        /// Comma-separated phases; accepts numbers and forms like `pi/4` or `3pi/2`.
        #[arg(long, allow_hyphen_values = true)]
        betas: Option<String>,
    },
    /// SVG figure: 1 for beta = 0 and pi, 2 for beta = j pi/4.
    Figure {
        id: u32,
        /// Mark creation and annihilation events.
        #[arg(long)]
        events: bool,
    },
    /// Particle and entanglon contributions to the elapsed time.
    Decompose,
    /// Approach to alpha = 1 from one side.
    Limit {
        #[arg(long, default_value = "below")]
        side: String,
        /// Comma-separated alpha values; defaults to 1 -+ 10^-j for j = 1..6.
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        x: f64,
    },
    /// All positions occupied at time t.
    Invert {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Parameter set with derived energy and mass.
    Params,
}

#[derive(Debug)]
enum Failure {
    Argument(String),
    Numerical(String),
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Argument(e.to_string())
        }
    }
}

fn parse_phase(token: &str) -> Result<f64, Failure> {
    let s = token.trim();
    let bad = || Failure::Argument(format!("invalid phase '{token}'"));
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (s, 1.0),
    };
    let coef = num.strip_suffix("pi").ok_or_else(bad)?;
    let coef = match coef.trim_end_matches('*') {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(coef * PI / den)
}

fn parse_list(
    raw: &str,
    what: &str,
    item: impl Fn(&str) -> Result<f64, Failure>,
) -> Result<Vec<f64>, Failure> {
    let tokens: Vec<&str> = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(Failure::Argument(format!("{what} list must not be empty")));
    }
    tokens.into_iter().map(item).collect()
}

fn pick_format(requested: Option<Format>, allowed: &[Format]) -> Result<Format, Failure> {
    match requested {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Failure::Argument(
            format!("format {f:?} is not available for this subcommand").to_lowercase(),
        )),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let c = &cli.common;
    let p = ModelParams::new(c.hbar, c.m, c.alpha, c.beta, c.k)?.with_tau(c.tau)?;
    use Format::*;
    let text = match &cli.command {
        Command::Trajectory => {
            let f = pick_format(c.format, &[Csv, Json])?;
            let d = TrajectoryDataset::build(&p, c.xmin, c.xmax, c.samples, DEFAULT_GRID_STEP)?;
            if f == Csv {
                d.to_csv()
            } else {
                d.to_json()
            }
        }
        Command::Sweep { betas } => {
            let f = pick_format(c.format, &[Csv, Json])?;
            let betas = match betas {
                Some(raw) => parse_list(raw, "beta", parse_phase)?,
                None => quarter_pi_betas(),
            };
            let d = SweepDataset::build(&p, &betas, c.xmin, c.xmax, c.samples)?;
            if f == Csv {
                d.to_csv()
            } else {
                d.to_json()
            }
        }
        Command::Figure { id, events } => {
            pick_format(c.format, &[Svg])?;
            let opts = FigureOptions {
                x_max: c.xmax,
                samples: c.samples,
                markers: *events,
            };
            render_svg(&figure_by_id(*id, &p, &opts)?)
        }
        Command::Decompose => {
            let f = pick_format(c.format, &[Csv, Json])?;
            let d = DecompositionReport::build(&p, c.xmin, c.xmax, c.samples)?;
            if f == Csv {
                d.to_csv()
            } else {
                d.to_json()
            }
        }
        Command::Limit { side, alphas, x } => {
            let f = pick_format(c.format, &[Csv, Json])?;
            let side: LimitSide = side.parse()?;
            let alphas = match alphas {
                Some(raw) => parse_list(raw, "alpha", |s| {
                    s.parse::<f64>()
                        .map_err(|_| Failure::Argument(format!("invalid alpha '{s}'")))
                })?,
                None => decade_sequence(side, 6),
            };
            let d = LimitReport::build(&p, *x, side, &alphas)?;
            if f == Csv {
                d.to_csv()
            } else {
                d.to_json()
            }
        }
        Command::Invert { t } => {
            let f = pick_format(c.format, &[Csv, Json])?;
            let d = InversionReport::build(&p, *t, c.xmin, c.xmax, DEFAULT_GRID_STEP)?;
            if f == Csv {
                d.to_csv()
            } else {
                d.to_json()
            }
        }
        Command::Params => {
            let f = pick_format(c.format, &[Csv, Json])?;
            let echo = ParamsEcho::from(&p);
            if f == Csv {
                echo.to_csv()
            } else {
                echo.to_json()
            }
        }
    };
    match &c.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Argument(format!("cannot write {}: {e}", path.display()))),
        None => match io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                Err(Failure::Argument(format!("cannot write output: {e}")))
            }
            _ => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ARGUMENT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Argument(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ARGUMENT)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases() {
        assert_eq!(parse_phase("0.5").unwrap(), 0.5);
        assert_eq!(parse_phase("pi").unwrap(), PI);
        assert_eq!(parse_phase("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_phase("3pi/2").unwrap(), 3.0 * PI / 2.0);
        assert_eq!(parse_phase("-pi/2").unwrap(), -PI / 2.0);
        assert!(parse_phase("tau").is_err());
        assert!(parse_phase("pi/x").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(
            parse_list("0, pi", "beta", parse_phase).unwrap(),
            vec![0.0, PI]
        );
        assert!(parse_list(" , ", "beta", parse_phase).is_err());
    }

    #[test]
    fn formats() {
        assert_eq!(pick_format(None, &[Format::Svg]).unwrap(), Format::Svg);
        assert!(pick_format(Some(Format::Csv), &[Format::Svg]).is_err());
    }
}
