//! Run configuration: flag parsing, angle expressions, tolerance files and
//! seed resolution.

use std::path::{Path, PathBuf};

use qham_core::weyl::AlcovePoint;
use qham_core::{SolverConfig, SpaceSpec, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SEED_ENV: &str = "QHAM_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceChoice {
    Classes,
    Double,
}

/// Everything a subcommand needs, echoed verbatim into its report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub group: usize,
    pub space: SpaceChoice,
    /// Normalized class angles, one tuple per class.
    pub classes: Vec<Vec<f64>>,
    pub samples: usize,
    pub fixed_samples: usize,
    pub seed: u64,
    pub grid_res: usize,
    pub tolerances: Tolerances,
    pub solver: SolverConfig,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub wall_clock: bool,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl RunConfig {
    pub fn spec(&self) -> Result<SpaceSpec, CliError> {
        let spec = match self.space {
            SpaceChoice::Double => SpaceSpec::double(self.group),
            SpaceChoice::Classes => SpaceSpec::class_product(
                self.classes
                    .iter()
                    .map(|a| AlcovePoint::new(a.clone()))
                    .collect::<Result<_, _>>()
                    .map_err(|e| CliError::Config(e.to_string()))?,
            ),
        };
        spec.map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Parses `su<n>`.
pub fn parse_group(s: &str) -> Result<usize, CliError> {
    let lower = s.trim().to_ascii_lowercase();
    let n = lower
        .strip_prefix("su")
        .and_then(|r| r.parse::<usize>().ok())
        .ok_or_else(|| CliError::Config(format!("group must look like su<n>, got {s:?}")))?;
    if n < 2 {
        return Err(CliError::Config(format!("rank must be at least 2, got {n}")));
    }
    Ok(n)
}

/// Parses a real number or a multiple of π: `0.5`, `pi`, `-pi/4`, `2pi/3`,
/// `2*pi/3`, `π/6`, `0.5*pi`.
pub fn parse_angle(s: &str) -> Result<f64, CliError> {
    let bad = || CliError::Config(format!("malformed angle {s:?}"));
    let t: String = s.trim().to_ascii_lowercase().replace('π', "pi").replace(' ', "");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(at) = t.find("pi") else {
        return t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad);
    };
    let head = t[..at].trim_end_matches('*');
    let tail = &t[at + 2..];
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let value = if tail.is_empty() {
        coef * std::f64::consts::PI
    } else if let Some(d) = tail.strip_prefix('/') {
        let d: f64 = d.parse().map_err(|_| bad())?;
        if d == 0.0 {
            return Err(bad());
        }
        coef * std::f64::consts::PI / d
    } else if let Some(m) = tail.strip_prefix('*') {
        coef * std::f64::consts::PI * m.parse::<f64>().map_err(|_| bad())?
    } else {
        return Err(bad());
    };
    value.is_finite().then_some(value).ok_or_else(bad)
}

/// Parses `"a1,a2,...;b1,b2,..."`. Tuples with `n − 1` entries are completed
/// to zero sum; tuples are sorted and centred, with a warning when that
/// changed them.
pub fn parse_classes(s: &str, n: usize) -> Result<(Vec<Vec<f64>>, Vec<String>), CliError> {
    let mut classes = Vec::new();
    let mut warnings = Vec::new();
    for (k, tuple) in s.split(';').map(str::trim).filter(|t| !t.is_empty()).enumerate() {
        let mut angles: Vec<f64> = tuple.split(',').map(parse_angle).collect::<Result<_, _>>()?;
        if angles.len() == n - 1 {
            angles.push(-angles.iter().sum::<f64>());
        } else if angles.len() != n {
            return Err(CliError::Config(format!(
                "class {} has {} angles, expected {} or {}",
                k + 1,
                angles.len(),
                n - 1,
                n
            )));
        }
        let (point, changed) =
            AlcovePoint::normalized(angles).map_err(|e| CliError::Config(format!("class {}: {e}", k + 1)))?;
        if changed {
            warnings.push(format!("class {} normalized to {:?}", k + 1, point.angles()));
        }
        classes.push(point.angles().to_vec());
    }
    if classes.is_empty() {
        return Err(CliError::Config("no classes given".into()));
    }
    Ok((classes, warnings))
}

/// Optional `[tolerances]` and `[solver]` tables; missing keys keep their
/// defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TolFile {
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    solver: SolverConfig,
}

pub fn load_tol_file(path: &Path) -> Result<(Tolerances, SolverConfig), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let parsed: TolFile =
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok((parsed.tolerances, parsed.solver))
}

/// `--seed`, else `QHAM_SEED`, else 0.
pub fn resolve_seed(flag: Option<u64>, env: Option<String>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        None => Ok(0),
    }
}

pub fn check_out_dir(out: Option<PathBuf>) -> Result<PathBuf, CliError> {
    let dir = out.unwrap_or_else(|| PathBuf::from("."));
    if !dir.is_dir() {
        return Err(CliError::Config(format!(
            "output directory {} does not exist",
            dir.display()
        )));
    }
    Ok(dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle(" π/6 ").unwrap(), PI / 6.0);
        assert_eq!(parse_angle("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("pi*0.25").unwrap(), 0.25 * PI);
        for bad in ["", "abc", "pi/0", "pi/x", "2pix", "nan", "inf"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn classes() {
        let (c, w) = parse_classes("pi/2;pi/3", 2).unwrap();
        assert_eq!(c, vec![vec![PI / 2.0, -PI / 2.0], vec![PI / 3.0, -PI / 3.0]]);
        assert!(w.is_empty());
        let (c, w) = parse_classes("-0.3,0.5", 2).unwrap();
        assert_eq!(c, vec![vec![0.4, -0.4]]);
        assert_eq!(w.len(), 1);
        assert!(parse_classes("1,2,3,4", 3).is_err());
        assert!(parse_classes("4,-4", 2).is_err());
        assert!(parse_classes("", 2).is_err());
        assert!(parse_classes("1,x", 2).is_err());
    }

    #[test]
    fn groups_and_seeds() {
        assert_eq!(parse_group("su3").unwrap(), 3);
        assert_eq!(parse_group("SU2").unwrap(), 2);
        assert!(parse_group("so3").is_err());
        assert!(parse_group("su1").is_err());
        assert_eq!(resolve_seed(Some(5), Some("7".into())).unwrap(), 5);
        assert_eq!(resolve_seed(None, Some("7".into())).unwrap(), 7);
        assert_eq!(resolve_seed(None, None).unwrap(), 0);
        assert!(resolve_seed(None, Some("x".into())).is_err());
    }

    #[test]
    fn tol_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tol.toml");
        std::fs::write(&path, "[tolerances]\nhausdorff = 0.1\n[solver]\nmax_iters = 10\n").unwrap();
        let (t, s) = load_tol_file(&path).unwrap();
        assert_eq!(t.hausdorff, 0.1);
        assert_eq!(t.convexity, Tolerances::default().convexity);
        assert_eq!(s.max_iters, 10);
        std::fs::write(&path, "[tolerances]\nbogus = 1\n").unwrap();
        assert!(load_tol_file(&path).is_err());
        assert!(load_tol_file(&dir.path().join("missing.toml")).is_err());
    }
}
