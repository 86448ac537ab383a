//! Phase-diagram sweeps over the `(α, β)` plane.
//!
//! Each grid point fixes `q = N^−α`, `K = round(N^β)` and `p = c·q`, then
//! estimates the Type-I and Type-II error of one detector by Monte Carlo.

mod svg;

pub use svg::{render_svg, RegimeMap};

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detectors::{combined_test, estimate_errors, linear_test, scan_test, ScanMode, DEFAULT_SCAN_BUDGET};
use crate::error::{Error, Result};
use crate::graphs::{gen_er, gen_pds_random_size, Graph, PdsParams};
use crate::randkit::Seed;
use crate::reduction::regime_classify;

/// Header of the sweep CSV. Changing it is a schema change.
pub const CSV_HEADER: &str = "alpha,beta,N,K,q,p,test,scan_mode,type1,type2,trials,seed,regime";

/// Above this many vertices the sweep defaults to the heuristic scan.
pub const EXACT_SCAN_MAX_VERTICES: usize = 60;

pub const DEFAULT_RESTARTS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Lin,
    Scan,
    Combined,
}

impl TestKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TestKind::Lin => "lin",
            TestKind::Scan => "scan",
            TestKind::Combined => "combined",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanKind {
    Exact,
    Heuristic,
}

impl ScanKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanKind::Exact => "exact",
            ScanKind::Heuristic => "heuristic",
        }
    }
}

fn default_c() -> f64 {
    2.0
}

fn default_restarts() -> usize {
    DEFAULT_RESTARTS
}

fn default_budget() -> u64 {
    DEFAULT_SCAN_BUDGET
}

/// Sweep configuration, read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub alpha_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    #[serde(rename = "N", alias = "n")]
    pub n: usize,
    #[serde(default = "default_c")]
    pub c: f64,
    pub trials: usize,
    pub test: TestKind,
    /// Defaults to heuristic above [`EXACT_SCAN_MAX_VERTICES`] vertices.
    #[serde(default)]
    pub scan_mode: Option<ScanKind>,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_budget")]
    pub scan_budget: u64,
    pub master_seed: u64,
    /// CSV destination.
    pub output_path: String,
    /// Detection map destination; defaults to `output_path` with an `svg`
    /// extension. The recovery map goes next to it as `<stem>.recovery.svg`.
    #[serde(default)]
    pub svg_path: Option<String>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: SweepConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn scan_kind(&self) -> ScanKind {
        self.scan_mode.unwrap_or(if self.n > EXACT_SCAN_MAX_VERTICES {
            ScanKind::Heuristic
        } else {
            ScanKind::Exact
        })
    }

    pub fn scan(&self) -> ScanMode {
        match self.scan_kind() {
            ScanKind::Exact => ScanMode::Exact {
                budget: self.scan_budget,
            },
            ScanKind::Heuristic => ScanMode::Heuristic {
                restarts: self.restarts,
            },
        }
    }

    pub fn svg_path(&self) -> PathBuf {
        match &self.svg_path {
            Some(p) => PathBuf::from(p),
            None => Path::new(&self.output_path).with_extension("svg"),
        }
    }

    pub fn recovery_svg_path(&self) -> PathBuf {
        self.svg_path().with_extension("recovery.svg")
    }

    /// Grid points in row order: `alpha_grid` outer, `beta_grid` inner.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.alpha_grid
            .iter()
            .flat_map(|&a| self.beta_grid.iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Parameters at one grid point.
    pub fn params_at(&self, alpha: f64, beta: f64) -> Result<PdsParams> {
        let n = self.n as f64;
        let q = n.powf(-alpha);
        let p = self.c * q;
        if p > 1.0 {
            return Err(Error::Config(format!(
                "p = c·q = {p} exceeds 1 at alpha={alpha} (c={}, N={})",
                self.c, self.n
            )));
        }
        let k = (n.powf(beta).round() as usize).clamp(1, self.n);
        PdsParams::new(self.n, k, p, q).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_grid.is_empty() || self.beta_grid.is_empty() {
            return Err(Error::Config("alpha_grid and beta_grid must be nonempty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::Config(format!("N must be at least 2, got {}", self.n)));
        }
        if !(self.c.is_finite() && self.c >= 1.0) {
            return Err(Error::Config(format!("c must be finite and at least 1, got {}", self.c)));
        }
        if self.scan_kind() == ScanKind::Heuristic && self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        for (alpha, beta) in self.points() {
            regime_classify(alpha, beta, None).map_err(|e| Error::Config(e.to_string()))?;
            self.params_at(alpha, beta)?;
        }
        Ok(())
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub q: f64,
    pub p: f64,
    pub test: TestKind,
    pub scan_mode: ScanKind,
    pub type1: f64,
    pub type2: f64,
    pub trials: usize,
    /// Master of the seed handed to the error estimator for this point.
    pub seed: u64,
    pub regime: String,
}

impl SweepRow {
    pub fn total_error(&self) -> f64 {
        self.type1 + self.type2
    }
}

/// Seed master used at grid point `index`.
pub fn point_seed(master_seed: u64, index: usize) -> u64 {
    Seed::with_stream(master_seed, index as u64).key()
}

/// Runs one test on one graph.
pub fn run_test(g: &Graph, params: &PdsParams, test: TestKind, mode: &ScanMode, seed: Seed) -> Result<bool> {
    Ok(match test {
        TestKind::Lin => linear_test(g, params).decision.is_h1(),
        TestKind::Scan => scan_test(g, params, mode, seed)?.decision.is_h1(),
        TestKind::Combined => combined_test(g, params, mode, seed)?.decision.is_h1(),
    })
}

/// Estimates the errors at every grid point. Rows come back in grid order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let mode = config.scan();
    let points = config.points();
    points
        .par_iter()
        .enumerate()
        .map(|(index, &(alpha, beta))| {
            let params = config.params_at(alpha, beta)?;
            let seed = point_seed(config.master_seed, index);
            let estimate = estimate_errors(
                |s| gen_er(params.n, params.q, s),
                |s| gen_pds_random_size(&params, s).map(|inst| inst.graph),
                |g: &Graph, s| run_test(g, &params, config.test, &mode, s).map(Into::into),
                config.trials,
                Seed::new(seed),
            )?;
            Ok(SweepRow {
                alpha,
                beta,
                n: params.n,
                k: params.k,
                q: params.q,
                p: params.p,
                test: config.test,
                scan_mode: config.scan_kind(),
                type1: estimate.type1,
                type2: estimate.type2,
                trials: estimate.trials,
                seed,
                regime: regime_classify(alpha, beta, None)?.as_str().to_owned(),
            })
        })
        .collect()
}

pub fn rows_to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))
        .map_err(std::io::Error::from)?;
    for row in rows {
        w.serialize(row).map_err(std::io::Error::from)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(std::io::Error::from)?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected header {header:?}"),
        });
    }
    r.deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Parse {
                line: i + 2,
                msg: e.to_string(),
            })
        })
        .collect()
}

/// Runs the sweep and writes the CSV and both SVG maps.
pub fn run_sweep_to_files(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let rows = run_sweep(config)?;
    fs::write(&config.output_path, rows_to_csv(&rows)?)?;
    fs::write(config.svg_path(), render_svg(RegimeMap::Detection, &rows))?;
    fs::write(config.recovery_svg_path(), render_svg(RegimeMap::Recovery, &rows))?;
    Ok(rows)
}
