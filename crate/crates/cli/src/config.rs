//! Run configuration: command-line flags layered over an optional `key=value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use bhlab_core::{Bc, LatticeSpec, Parity};
use clap::{Args, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorArg {
    Odd,
    Even,
    Both,
}

impl SectorArg {
    pub fn parities(self) -> Vec<Parity> {
        match self {
            SectorArg::Odd => vec![Parity::Odd],
            SectorArg::Even => vec![Parity::Even],
            SectorArg::Both => vec![Parity::Odd, Parity::Even],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BcArg {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum ParamArg {
    V,
    U,
}

/// Flags shared by every verb. Everything is optional so that a config file can fill gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Number of lattice sites (odd, at least 3).
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// On-site interaction.
    #[arg(long = "U", allow_hyphen_values = true)]
    pub u: Option<f64>,
    /// Impurity potential at site 0.
    #[arg(long = "V", allow_hyphen_values = true)]
    pub v: Option<f64>,
    #[arg(long, value_enum)]
    pub bc: Option<BcArg>,
    #[arg(long, value_enum)]
    pub sector: Option<SectorArg>,
    /// Working precision in decimal digits for refined eigenvectors.
    #[arg(long)]
    pub digits: Option<u32>,
    /// Pick the eigenstate(s) closest to these energies (comma separated).
    #[arg(long = "select-energy", allow_hyphen_values = true)]
    pub select_energy: Option<String>,
    /// Pick eigenstates by ascending index within the sector (comma separated).
    #[arg(long)]
    pub state: Option<String>,
    /// Sweep or scan grid `from:to:points`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Second grid for two-dimensional scans (U axis of the bound-state scan).
    #[arg(long = "grid2", allow_hyphen_values = true)]
    pub grid2: Option<String>,
    /// Swept parameter of `spectrum`.
    #[arg(long, value_enum)]
    pub param: Option<ParamArg>,
    /// Energy-matching tolerance for completeness.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub overwrite: bool,
    /// `key=value` file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            1 => vec![self.from],
            n => (0..n)
                .map(|i| self.from + (self.to - self.from) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid `{s}` is not from:to:points"));
    }
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|e| format!("grid `{s}`: {e}"))
    };
    let points = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("grid `{s}`: {e}"))?;
    if points == 0 {
        return Err(format!("grid `{s}` has no points"));
    }
    Ok(Grid {
        from: num(parts[0])?,
        to: num(parts[1])?,
        points,
    })
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|e| format!("{what} `{x}`: {e}"))
        })
        .collect()
}

/// Validated configuration handed to a command.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub bc: BcArg,
    pub sector: SectorArg,
    pub digits: u32,
    pub select_energy: Vec<f64>,
    pub state: Vec<usize>,
    pub grid: Option<Grid>,
    pub grid2: Option<Grid>,
    pub param: ParamArg,
    pub tol: Option<f64>,
    pub out: PathBuf,
    pub overwrite: bool,
}

impl RunConfig {
    pub fn spec(&self) -> LatticeSpec {
        let bc = match self.bc {
            BcArg::Open => Bc::Open,
            BcArg::Periodic => Bc::Periodic,
        };
        LatticeSpec {
            m: self.m,
            u: self.u,
            v: self.v,
            bc,
        }
    }
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), n + 1))?;
        map.insert(
            k.trim().trim_start_matches("--").to_string(),
            v.trim().to_string(),
        );
    }
    Ok(map)
}

/// Fills unset flags from the file, then validates.
pub fn resolve(flags: &Flags, verb: &str) -> Result<RunConfig, String> {
    let mut f = flags.clone();
    if let Some(path) = &flags.config {
        for (key, val) in read_config_file(path)? {
            let bad = |e: String| format!("config key `{key}`: {e}");
            match key.as_str() {
                "M" if f.m.is_none() => f.m = Some(val.parse().map_err(|e| bad(format!("{e}")))?),
                "U" if f.u.is_none() => f.u = Some(val.parse().map_err(|e| bad(format!("{e}")))?),
                "V" if f.v.is_none() => f.v = Some(val.parse().map_err(|e| bad(format!("{e}")))?),
                "bc" if f.bc.is_none() => f.bc = Some(BcArg::from_str(&val, true).map_err(bad)?),
                "sector" if f.sector.is_none() => {
                    f.sector = Some(SectorArg::from_str(&val, true).map_err(bad)?)
                }
                "digits" if f.digits.is_none() => {
                    f.digits = Some(val.parse().map_err(|e| bad(format!("{e}")))?)
                }
                "select-energy" if f.select_energy.is_none() => f.select_energy = Some(val),
                "state" if f.state.is_none() => f.state = Some(val),
                "grid" if f.grid.is_none() => f.grid = Some(val),
                "grid2" if f.grid2.is_none() => f.grid2 = Some(val),
                "param" if f.param.is_none() => {
                    f.param = Some(ParamArg::from_str(&val, true).map_err(bad)?)
                }
                "tol" if f.tol.is_none() => {
                    f.tol = Some(val.parse().map_err(|e| bad(format!("{e}")))?)
                }
                "out" if f.out.is_none() => f.out = Some(PathBuf::from(val)),
                "overwrite" => f.overwrite |= matches!(val.as_str(), "true" | "1" | "yes"),
                "M" | "U" | "V" | "bc" | "sector" | "digits" | "select-energy" | "state"
                | "grid" | "grid2" | "param" | "tol" | "out" => {}
                _ => return Err(format!("unknown config key `{key}`")),
            }
        }
    }
    let m = f.m.ok_or("--M is required")?;
    let cfg = RunConfig {
        m,
        u: f.u.unwrap_or(0.0),
        v: f.v.unwrap_or(0.0),
        bc: f.bc.unwrap_or(BcArg::Periodic),
        sector: f.sector.unwrap_or(SectorArg::Both),
        digits: f.digits.unwrap_or(40),
        select_energy: f
            .select_energy
            .as_deref()
            .map(|s| parse_list(s, "energy"))
            .transpose()?
            .unwrap_or_default(),
        state: f
            .state
            .as_deref()
            .map(|s| parse_list(s, "state"))
            .transpose()?
            .unwrap_or_default(),
        grid: f.grid.as_deref().map(parse_grid).transpose()?,
        grid2: f.grid2.as_deref().map(parse_grid).transpose()?,
        param: f.param.unwrap_or(ParamArg::V),
        tol: f.tol,
        out: f
            .out
            .unwrap_or_else(|| PathBuf::from(format!("bhlab-{verb}"))),
        overwrite: f.overwrite,
    };
    cfg.spec().validate().map_err(|e| e.to_string())?;
    if !(15..=2000).contains(&cfg.digits) {
        return Err(format!("--digits {} outside 15..=2000", cfg.digits));
    }
    if let Some(t) = cfg.tol {
        if !(t > 0.0) {
            return Err("--tol must be positive".into());
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("-4:0:5").unwrap();
        assert_eq!(g.values(), vec![-4.0, -3.0, -2.0, -1.0, 0.0]);
        assert_eq!(parse_grid("1:2:1").unwrap().values(), vec![1.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("1:2:0").is_err());
    }

    #[test]
    fn flags_beat_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "# demo\nM = 11\nU=3\nV=-2\nbc=open\ngrid=0:1:3\n").unwrap();
        let flags = Flags {
            u: Some(1.5),
            config: Some(path),
            ..Default::default()
        };
        let cfg = resolve(&flags, "spectrum").unwrap();
        assert_eq!((cfg.m, cfg.u, cfg.v, cfg.bc), (11, 1.5, -2.0, BcArg::Open));
        assert_eq!(cfg.grid.unwrap().points, 3);
    }

    #[test]
    fn validation() {
        let even = Flags {
            m: Some(10),
            ..Default::default()
        };
        assert!(resolve(&even, "x").is_err());
        assert!(resolve(&Flags::default(), "x").is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.cfg");
        std::fs::write(&path, "M=11\ncolour=blue\n").unwrap();
        assert!(resolve(
            &Flags {
                config: Some(path),
                ..Default::default()
            },
            "x"
        )
        .is_err());
    }
}
