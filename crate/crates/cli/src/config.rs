//! Parameters shared by every subcommand, merged from the command line and
//! an optional `key = value` file. Values given on the command line win.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use discrim_core::scenarios::{Format, StateSpec};

use crate::CliError;

/// `n:deg`, a mean photon number and a phase in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateArg(pub StateSpec);

impl FromStr for StateArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, deg) = s
            .split_once(':')
            .ok_or_else(|| format!("expected n:deg, got {s:?}"))?;
        let n: f64 = n.trim().parse().map_err(|e| format!("bad intensity {n:?}: {e}"))?;
        let deg: f64 = deg.trim().parse().map_err(|e| format!("bad phase {deg:?}: {e}"))?;
        if !(n >= 0.0 && n.is_finite() && deg.is_finite()) {
            return Err(format!("state {s:?} needs a finite intensity >= 0 and a finite phase"));
        }
        Ok(Self(StateSpec::new(n, deg)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Svg,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Svg => Format::Svg,
        }
    }
}

impl FromStr for FormatArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// key = value file; the command line overrides it
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Transmittance of the first splitter
    #[arg(long)]
    pub t0: Option<f64>,
    /// Efficiency of detector 1
    #[arg(long)]
    pub eta1: Option<f64>,
    /// Efficiency of detector 2
    #[arg(long)]
    pub eta2: Option<f64>,
    /// Mean dark counts per coincidence window
    #[arg(long)]
    pub dark: Option<f64>,
    /// Fringe visibility of interferometer 1
    #[arg(long)]
    pub vis1: Option<f64>,
    /// Fringe visibility of interferometer 2
    #[arg(long)]
    pub vis2: Option<f64>,
    /// First program state, n:deg
    #[arg(long, value_name = "N:DEG")]
    pub alpha1: Option<StateArg>,
    /// Second program state, n:deg
    #[arg(long, value_name = "N:DEG")]
    pub alpha2: Option<StateArg>,
    /// Trials per block
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub blocks: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Phase random-walk step per block, radians
    #[arg(long)]
    pub drift_sigma: Option<f64>,
    /// Lock the interferometers before every block
    #[arg(long)]
    pub stabilize: bool,
    /// Worker threads; output does not depend on it
    #[arg(long)]
    pub workers: Option<usize>,
    /// First sweep value
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    /// Last sweep value
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    /// Number of sweep values
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(skip)]
    pub stabilize_from_file: Option<bool>,
}

fn fill<T: FromStr>(slot: &mut Option<T>, key: &str, value: &str) -> Result<(), CliError>
where
    T::Err: std::fmt::Display,
{
    let parsed = value
        .parse()
        .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))?;
    if slot.is_none() {
        *slot = Some(parsed);
    }
    Ok(())
}

impl Common {
    /// Reads `--config` if given. Blank lines and `#` comments are skipped;
    /// keys are flag names with `-` or `_`.
    pub fn merge_file(&mut self) -> Result<(), CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(());
        };
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        self.merge_text(&text, &path)
    }

    fn merge_text(&mut self, text: &str, path: &Path) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("{}:{}: expected key = value", path.display(), lineno + 1))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "t0" => fill(&mut self.t0, &key, value)?,
                "eta1" => fill(&mut self.eta1, &key, value)?,
                "eta2" => fill(&mut self.eta2, &key, value)?,
                "dark" => fill(&mut self.dark, &key, value)?,
                "vis1" => fill(&mut self.vis1, &key, value)?,
                "vis2" => fill(&mut self.vis2, &key, value)?,
                "alpha1" => fill(&mut self.alpha1, &key, value)?,
                "alpha2" => fill(&mut self.alpha2, &key, value)?,
                "trials" => fill(&mut self.trials, &key, value)?,
                "blocks" => fill(&mut self.blocks, &key, value)?,
                "seed" => fill(&mut self.seed, &key, value)?,
                "out" => fill(&mut self.out, &key, value)?,
                "format" => fill(&mut self.format, &key, value)?,
                "drift-sigma" => fill(&mut self.drift_sigma, &key, value)?,
                "stabilize" => fill(&mut self.stabilize_from_file, &key, value)?,
                "workers" => fill(&mut self.workers, &key, value)?,
                "start" => fill(&mut self.start, &key, value)?,
                "stop" => fill(&mut self.stop, &key, value)?,
                "points" => fill(&mut self.points, &key, value)?,
                other => {
                    return Err(CliError::Usage(format!(
                        "{}:{}: unknown key {other:?}",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn stabilize(&self) -> bool {
        self.stabilize || self.stabilize_from_file.unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_parsing() {
        let s: StateArg = "1.33:180".parse().unwrap();
        assert_eq!(s.0, StateSpec::new(1.33, 180.0));
        assert!("1.33".parse::<StateArg>().is_err());
        assert!("-1:0".parse::<StateArg>().is_err());
        assert!("x:0".parse::<StateArg>().is_err());
    }

    #[test]
    fn command_line_wins_over_file() {
        let mut c = Common {
            eta1: Some(0.9),
            ..Common::default()
        };
        let text = "# detector\neta1 = 0.1\ndrift_sigma=0.2  # trailing\n\nstabilize = true\nformat = svg\n";
        c.merge_text(text, Path::new("f")).unwrap();
        assert_eq!(c.eta1, Some(0.9));
        assert_eq!(c.drift_sigma, Some(0.2));
        assert!(c.stabilize());
        assert_eq!(c.format, Some(FormatArg::Svg));
    }

    #[test]
    fn bad_lines_are_usage_errors() {
        for text in ["nonsense\n", "colour = red\n", "t0 = half\n"] {
            let err = Common::default().merge_text(text, Path::new("f")).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}");
        }
    }
}
