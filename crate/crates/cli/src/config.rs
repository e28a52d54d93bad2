use crate::{Command, Failure};
use slitmap::io::{read_input, InputSpec};
use slitmap::Error;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// `START:END:COUNT`, equispaced and inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid {s:?} is not START:END:COUNT"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("grid value {p:?}: {e}"));
        let start = num(parts[0])?;
        let end = num(parts[1])?;
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("grid count {:?}: {e}", parts[2]))?;
        if !(start.is_finite() && end.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        Ok(Self { start, end, count })
    }
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| if k + 1 == self.count { self.end } else { self.start + step * k as f64 })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub input: Option<PathBuf>,
    pub nodes: usize,
    pub grid: Option<GridSpec>,
    pub out: PathBuf,
    pub tol: Option<f64>,
    pub seed: u64,
}

/// Validated command line.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub nodes: usize,
    pub grid: Option<GridSpec>,
    pub out: PathBuf,
    pub tol: Option<f64>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command, o: Options) -> Result<Self, Failure> {
        let bad = |m: String| Failure::Core(Error::Input(m));
        if o.nodes < 16 || o.nodes % 2 != 0 {
            return Err(bad(format!("--nodes {} must be even and >= 16", o.nodes)));
        }
        if let Some(t) = o.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(bad(format!("--tol {t} must be positive")));
            }
        }
        if let Some(g) = o.grid {
            if g.count < 2 {
                return Err(bad(format!("--grid count {} must be at least 2", g.count)));
            }
            if !(g.start < g.end) {
                return Err(bad(format!("--grid start {} must be below end {}", g.start, g.end)));
            }
        }
        if command == Command::Sweep && o.grid.is_none() {
            return Err(bad("sweep needs --grid START:END:COUNT".into()));
        }
        Ok(Self {
            command,
            input: o.input,
            nodes: o.nodes,
            grid: o.grid,
            out: o.out,
            tol: o.tol,
            seed: o.seed,
        })
    }

    pub fn spec(&self) -> Result<InputSpec, Failure> {
        match &self.input {
            Some(p) => Ok(read_input(p)?),
            None => Err(Failure::Core(Error::Input(format!(
                "{:?} needs --input PATH",
                self.command
            ).to_lowercase()))),
        }
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, Failure> {
        std::fs::create_dir_all(&self.out)?;
        let path = self.out.join(name);
        std::fs::write(&path, contents)?;
        Ok(path)
    }

    pub fn out_dir(&self) -> &Path {
        &self.out
    }
}
