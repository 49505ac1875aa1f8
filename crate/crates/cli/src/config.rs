//! Run configuration: defaults, `key=value` files and value parsing.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Quantum,
    Hybrid,
    Both,
}

impl Mode {
    pub fn includes(self, other: Mode) -> bool {
        self == Mode::Both || self == other
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "quantum" => Ok(Mode::Quantum),
            "hybrid" => Ok(Mode::Hybrid),
            "both" => Ok(Mode::Both),
            _ => Err(format!("mode must be quantum, hybrid or both, got {s:?}")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Quantum => "quantum",
            Mode::Hybrid => "hybrid",
            Mode::Both => "both",
        })
    }
}

/// Parameters of a sweep, all dimensionless: couplings κ, times ωt,
/// `epsilon` in units of ħω, `q0` and `sigma` in `√(ħ/mω)`, `p0` in `√(mωħ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub kappa: Vec<f64>,
    pub epsilon: f64,
    pub q0: f64,
    pub p0: f64,
    pub sigma: f64,
    pub t_max: f64,
    pub samples: usize,
    pub out_csv: PathBuf,
    pub out_svg: Option<PathBuf>,
    pub oracle: bool,
    pub oracle_grid: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Both,
            kappa: vec![1.0],
            epsilon: 0.0,
            q0: 0.0,
            p0: 0.0,
            sigma: 1.0,
            t_max: 8.0 * PI,
            samples: 401,
            out_csv: PathBuf::from("sweep.csv"),
            out_svg: None,
            oracle: false,
            oracle_grid: 201,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: String| Err(CliError::Usage(format!("invalid {field}: {why}")));
        if self.kappa.is_empty() {
            return bad("kappa", "empty list".into());
        }
        if let Some(k) = self.kappa.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
            return bad("kappa", format!("{k} is not a finite value >= 0"));
        }
        for (name, v) in [("epsilon", self.epsilon), ("q0", self.q0), ("p0", self.p0)] {
            if !v.is_finite() {
                return bad(name, format!("{v} is not finite"));
            }
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return bad("sigma", format!("{} is not positive", self.sigma));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return bad("t-max", format!("{} is not positive", self.t_max));
        }
        if self.samples < 2 {
            return bad("samples", format!("need at least 2, got {}", self.samples));
        }
        if self.oracle_grid < 3 {
            return bad("oracle-grid", format!("need at least 3 nodes, got {}", self.oracle_grid));
        }
        Ok(())
    }
}

/// Fields set by a config file or by command-line flags. Unset fields fall
/// through to the next source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub mode: Option<Mode>,
    pub kappa: Option<Vec<f64>>,
    pub epsilon: Option<f64>,
    pub q0: Option<f64>,
    pub p0: Option<f64>,
    pub sigma: Option<f64>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub out_csv: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub oracle: Option<bool>,
    pub oracle_grid: Option<usize>,
}

impl ConfigOverrides {
    /// Fields of `self` win over those of `lower`.
    pub fn or(self, lower: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            mode: self.mode.or(lower.mode),
            kappa: self.kappa.or(lower.kappa),
            epsilon: self.epsilon.or(lower.epsilon),
            q0: self.q0.or(lower.q0),
            p0: self.p0.or(lower.p0),
            sigma: self.sigma.or(lower.sigma),
            t_max: self.t_max.or(lower.t_max),
            samples: self.samples.or(lower.samples),
            out_csv: self.out_csv.or(lower.out_csv),
            out_svg: self.out_svg.or(lower.out_svg),
            oracle: self.oracle.or(lower.oracle),
            oracle_grid: self.oracle_grid.or(lower.oracle_grid),
        }
    }

    pub fn apply(self, base: RunConfig) -> RunConfig {
        RunConfig {
            mode: self.mode.unwrap_or(base.mode),
            kappa: self.kappa.unwrap_or(base.kappa),
            epsilon: self.epsilon.unwrap_or(base.epsilon),
            q0: self.q0.unwrap_or(base.q0),
            p0: self.p0.unwrap_or(base.p0),
            sigma: self.sigma.unwrap_or(base.sigma),
            t_max: self.t_max.unwrap_or(base.t_max),
            samples: self.samples.unwrap_or(base.samples),
            out_csv: self.out_csv.unwrap_or(base.out_csv),
            out_svg: self.out_svg.or(base.out_svg),
            oracle: self.oracle.unwrap_or(base.oracle),
            oracle_grid: self.oracle_grid.unwrap_or(base.oracle_grid),
        }
    }
}

/// Real number, optionally a fraction and optionally a multiple of π:
/// `0.25`, `1/4`, `pi`, `8pi`, `2*pi`, `pi/2`, `-3pi/4`.
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num = parse_pi_multiple(num).ok_or_else(|| format!("not a number: {s:?}"))?;
    let den = match den {
        Some(d) => d.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))?,
        None => 1.0,
    };
    let v = num / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

fn parse_pi_multiple(s: &str) -> Option<f64> {
    match s.strip_suffix("pi") {
        Some(head) => {
            let head = head.trim_end();
            let head = head.strip_suffix('*').unwrap_or(head).trim_end();
            let factor = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                h => h.parse::<f64>().ok()?,
            };
            Some(factor * PI)
        }
        None => s.parse::<f64>().ok(),
    }
}

/// Comma-separated list of [`parse_real`] values.
pub fn parse_real_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(parse_real).collect()
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("not a boolean: {s:?}")),
    }
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    s.parse::<usize>().map_err(|_| format!("not a non-negative integer: {s:?}"))
}

/// Parses `key=value` lines using the long flag names of `run`. Blank lines
/// and `#` comments are ignored; unknown or repeated keys are errors.
pub fn parse_config(text: &str) -> Result<ConfigOverrides> {
    let mut out = ConfigOverrides::default();
    let mut seen = std::collections::BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| CliError::Config { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key=value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(err(format!("duplicate key {key:?}")));
        }
        match key {
            "mode" => out.mode = Some(value.parse().map_err(err)?),
            "kappa" => out.kappa = Some(parse_real_list(value).map_err(err)?),
            "epsilon" => out.epsilon = Some(parse_real(value).map_err(err)?),
            "q0" => out.q0 = Some(parse_real(value).map_err(err)?),
            "p0" => out.p0 = Some(parse_real(value).map_err(err)?),
            "sigma" => out.sigma = Some(parse_real(value).map_err(err)?),
            "t-max" => out.t_max = Some(parse_real(value).map_err(err)?),
            "samples" => out.samples = Some(parse_count(value).map_err(err)?),
            "out" => out.out_csv = Some(PathBuf::from(value)),
            "svg" => out.out_svg = Some(PathBuf::from(value)),
            "oracle" => out.oracle = Some(parse_bool(value).map_err(err)?),
            "oracle-grid" => out.oracle_grid = Some(parse_count(value).map_err(err)?),
            _ => return Err(err(format!("unknown key {key:?}"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_with_pi_and_fractions() {
        assert_eq!(parse_real("0.25"), Ok(0.25));
        assert_eq!(parse_real("1/4"), Ok(0.25));
        assert_eq!(parse_real("pi"), Ok(PI));
        assert_eq!(parse_real("8pi"), Ok(8.0 * PI));
        assert_eq!(parse_real("2*pi"), Ok(2.0 * PI));
        assert_eq!(parse_real("pi/2"), Ok(PI / 2.0));
        assert_eq!(parse_real("-3pi/4"), Ok(-3.0 * PI / 4.0));
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("pie").is_err());
        assert!(parse_real("").is_err());
        assert_eq!(parse_real_list("1/4, 1/2,1"), Ok(vec![0.25, 0.5, 1.0]));
    }

    #[test]
    fn config_file_round_trip() {
        let cfg = parse_config(
            "# figure 2\nmode = quantum\nkappa=1/4,1\n\nt-max = 2pi  # one period\nsamples=3\noracle=true\nsvg=a.svg\n",
        )
        .unwrap();
        assert_eq!(cfg.mode, Some(Mode::Quantum));
        assert_eq!(cfg.kappa, Some(vec![0.25, 1.0]));
        assert_eq!(cfg.t_max, Some(2.0 * PI));
        assert_eq!(cfg.samples, Some(3));
        assert_eq!(cfg.oracle, Some(true));
        assert_eq!(cfg.out_svg, Some(PathBuf::from("a.svg")));
        assert_eq!(cfg.epsilon, None);
    }

    #[test]
    fn config_errors_name_the_line() {
        for (text, line) in [("mode=quantum\nbogus=1", 2), ("samples=-3", 1), ("x", 1), ("kappa=1\nkappa=2", 2)] {
            match parse_config(text) {
                Err(CliError::Config { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn flags_win_over_file() {
        let file = parse_config("kappa=1\nsamples=10").unwrap();
        let flags = ConfigOverrides { kappa: Some(vec![0.5]), ..Default::default() };
        let cfg = flags.or(file).apply(RunConfig::default());
        assert_eq!(cfg.kappa, vec![0.5]);
        assert_eq!(cfg.samples, 10);
        assert_eq!(cfg.sigma, 1.0);
    }

    #[test]
    fn validation_names_the_field() {
        let cfg = RunConfig { samples: 1, ..RunConfig::default() };
        assert!(matches!(cfg.validate(), Err(CliError::Usage(m)) if m.contains("samples")));
        let cfg = RunConfig { kappa: vec![-1.0], ..RunConfig::default() };
        assert!(matches!(cfg.validate(), Err(CliError::Usage(m)) if m.contains("kappa")));
        assert!(RunConfig::default().validate().is_ok());
    }
}
