//! Command-line front end behind the `gkcs` binary.
//!
//! Every physical input is a flag; an optional `key = value` file supplies
//! defaults and explicit flags win over it. Tables are comma separated with
//! a header row and 17 significant digits per number.

mod figure;
mod sweep;
mod verify;

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{invalid, Result};
use crate::observables::EvalMode;
use crate::states::{ModelParams, StateLabel};

pub use figure::{figure_table, FigureId};
pub use sweep::{sweep_table, Quantity, SweepSpec};
pub use verify::{run_suite, Check, Suite};

/// Exit code for a run in which every check passed.
pub const EXIT_OK: i32 = 0;
/// Exit code when at least one verification check failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for malformed invocations and unusable inputs.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gkcs",
    version,
    about = "Continuous-spectrum coherent states: figure data, sweeps and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the data behind one of the six figures.
    Figure {
        /// Figure number, 1 to 6.
        #[arg(value_parser = clap::value_parser!(u8).range(1..=6))]
        id: u8,
        #[command(flatten)]
        axis: AxisArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate one quantity against s.
    Sweep {
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Closed forms only, or closed forms next to the truncated-domain values (default).
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        axis: AxisArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a verification suite and report PASS/FAIL per check.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Formal,
    Exact,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Formal => EvalMode::Formal,
            ModeArg::Exact => EvalMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Default, Args)]
pub struct AxisArgs {
    /// First value of s.
    #[arg(long)]
    pub s_min: Option<f64>,
    /// Last value of s.
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Number of rows, at least 2.
    #[arg(long)]
    pub points: Option<usize>,
    /// Spacing of the s values.
    #[arg(long, value_enum)]
    pub scale: Option<Scale>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Gaussian width parameter α > 0.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Ladder step ε > 0.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Energy scale ω > 0.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Excitation order.
    #[arg(long)]
    pub m: Option<u32>,
    /// State label s > 0 used by verify.
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Phase label γ.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Relative tolerance for the oracle comparisons.
    #[arg(long)]
    pub tol: Option<f64>,
    /// `key = value` file with defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Values from a `key = value` file. Blank lines and `#` comments are skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                invalid("config", format!("line {}: expected key = value", n + 1))
            })?;
            values.insert(key.trim().replace('-', "_"), value.trim().to_owned());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &'static str) -> Result<Option<T>> {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| invalid(key, format!("cannot parse config value `{v}`")))
            })
            .transpose()
    }
}

/// Flags merged over the config file, with recipe defaults still to apply.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub omega: Option<f64>,
    pub m: Option<u32>,
    pub s: Option<f64>,
    pub gamma: Option<f64>,
    pub tol: Option<f64>,
    pub s_min: Option<f64>,
    pub s_max: Option<f64>,
    pub points: Option<usize>,
    pub scale: Option<Scale>,
    pub mode: Option<EvalMode>,
}

impl Settings {
    fn merge(common: &CommonArgs, axis: Option<&AxisArgs>, mode: Option<ModeArg>) -> Result<Self> {
        let file = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let axis = axis.cloned().unwrap_or_default();
        let scale = match axis.scale {
            Some(s) => Some(s),
            None => file
                .get::<String>("scale")?
                .map(|v| Scale::from_str(&v, true).map_err(|_| invalid("scale", v)))
                .transpose()?,
        };
        let mode = match mode {
            Some(m) => Some(m.into()),
            None => file.get::<EvalMode>("mode")?,
        };
        Ok(Self {
            alpha: common.alpha.or(file.get("alpha")?),
            epsilon: common.epsilon.or(file.get("epsilon")?),
            omega: common.omega.or(file.get("omega")?),
            m: common.m.or(file.get("m")?),
            s: common.s.or(file.get("s")?),
            gamma: common.gamma.or(file.get("gamma")?),
            tol: common.tol.or(file.get("tol")?),
            s_min: axis.s_min.or(file.get("s_min")?),
            s_max: axis.s_max.or(file.get("s_max")?),
            points: axis.points.or(file.get("points")?),
            scale,
            mode,
        })
    }

    /// Model parameters with fallbacks for `α` and `ε`; `ω` defaults to 1.
    pub fn params(&self, alpha: f64, epsilon: f64) -> Result<ModelParams> {
        ModelParams::new(
            self.alpha.unwrap_or(alpha),
            self.epsilon.unwrap_or(epsilon),
            self.omega.unwrap_or(1.0),
        )
    }

    pub fn label(&self, m: u32) -> Result<StateLabel> {
        StateLabel::new(
            self.s.unwrap_or(1.0),
            self.gamma.unwrap_or(0.0),
            self.m.unwrap_or(m),
        )
    }
}

/// Sample points of an `s` axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub s_min: f64,
    pub s_max: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Axis {
    pub fn new(s_min: f64, s_max: f64, points: usize, scale: Scale) -> Result<Self> {
        if !(s_min > 0.0 && s_max.is_finite() && s_min < s_max) {
            return Err(invalid(
                "s_min/s_max",
                format!("need 0 < s_min < s_max, got {s_min}, {s_max}"),
            ));
        }
        if points < 2 {
            return Err(invalid("points", format!("need at least 2, got {points}")));
        }
        Ok(Self {
            s_min,
            s_max,
            points,
            scale,
        })
    }

    fn with_overrides(self, settings: &Settings) -> Result<Self> {
        Self::new(
            settings.s_min.unwrap_or(self.s_min),
            settings.s_max.unwrap_or(self.s_max),
            settings.points.unwrap_or(self.points),
            settings.scale.unwrap_or(self.scale),
        )
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                if i == 0 {
                    return self.s_min;
                }
                if i == self.points - 1 {
                    return self.s_max;
                }
                match self.scale {
                    Scale::Linear => self.s_min + (self.s_max - self.s_min) * t,
                    Scale::Log => (self.s_min.ln() + (self.s_max / self.s_min).ln() * t).exp(),
                }
            })
            .collect()
    }
}

/// A comma-separated table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

fn emit(out_path: Option<&Path>, stdout: &mut dyn Write, body: &[u8]) -> io::Result<()> {
    match out_path {
        Some(path) => fs::write(path, body),
        None => stdout.write_all(body),
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok((body, out, code)) => match emit(out.as_deref(), stdout, &body) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli) -> Result<(Vec<u8>, Option<PathBuf>, i32)> {
    let mut body = Vec::new();
    let (out, code) = match &cli.command {
        Command::Figure { id, axis, common } => {
            let settings = Settings::merge(common, Some(axis), None)?;
            let id = FigureId::new(*id)?;
            let table = figure_table(id, &settings)?;
            table.write_csv(&mut body).expect("write to memory");
            (common.out.clone(), EXIT_OK)
        }
        Command::Sweep {
            quantity,
            mode,
            axis,
            common,
        } => {
            let settings = Settings::merge(common, Some(axis), *mode)?;
            let spec = SweepSpec::from_settings(*quantity, &settings)?;
            sweep_table(&spec)?
                .write_csv(&mut body)
                .expect("write to memory");
            (common.out.clone(), EXIT_OK)
        }
        Command::Verify { suite, common } => {
            let settings = Settings::merge(common, None, None)?;
            let checks = run_suite(*suite, &settings)?;
            for c in &checks {
                writeln!(body, "{c}").expect("write to memory");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            writeln!(body, "{} checks, {} failed", checks.len(), failed).expect("write to memory");
            let code = if failed == 0 { EXIT_OK } else { EXIT_FAIL };
            (common.out.clone(), code)
        }
    };
    Ok((body, out, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let c = ConfigFile::parse("alpha = 3\n# comment\n s-min=0.5 # trailing\n\n").unwrap();
        assert_eq!(c.get::<f64>("alpha").unwrap(), Some(3.0));
        assert_eq!(c.get::<f64>("s_min").unwrap(), Some(0.5));
        assert_eq!(c.get::<f64>("epsilon").unwrap(), None);
        assert!(c.get::<u32>("alpha").is_ok());
        assert!(ConfigFile::parse("alpha 3").is_err());
        assert!(ConfigFile::parse("alpha = x")
            .unwrap()
            .get::<f64>("alpha")
            .is_err());
    }

    #[test]
    fn axis_values() {
        let lin = Axis::new(0.05, 20.0, 400, Scale::Linear).unwrap().values();
        assert_eq!(lin.len(), 400);
        assert!((lin[0] - 0.05).abs() < 1e-15 && (lin[399] - 20.0).abs() < 1e-12);
        let log = Axis::new(1e-2, 1e2, 5, Scale::Log).unwrap().values();
        assert!((log[2] - 1.0).abs() < 1e-14);
        assert!(Axis::new(1.0, 1.0, 10, Scale::Log).is_err());
        assert!(Axis::new(0.0, 1.0, 10, Scale::Linear).is_err());
        assert!(Axis::new(0.1, 1.0, 1, Scale::Linear).is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["gkcs", "figure", "9"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["gkcs", "bogus"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(
            run(
                ["gkcs", "sweep", "--quantity", "mandel", "--alpha", "-1"],
                &mut out,
                &mut err
            ),
            EXIT_USAGE
        );
    }

    #[test]
    fn table_format() {
        let t = Table {
            header: vec!["s".into(), "v".into()],
            rows: vec![vec![1.0, -0.5]],
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "s,v\n1.0000000000000000e0,-5.0000000000000000e-1\n"
        );
    }
}
