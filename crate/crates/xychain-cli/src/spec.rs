//! Request resolution: config-file merge, grid parsing, and validation.
//!
//! Every command reads its parameters from the same resolved bundle. A
//! plain-text `key=value` config file fills in whatever the command line
//! left unset; flags always win. Grids come in three spellings: a single
//! number, a comma list, or `start:stop:count[:log]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use xychain::{ChainLength, ModelParams};

/// Failure category, mirrored in the process exit code: validation problems
/// exit 2, numerical failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "{m}"),
            CliError::Numerical(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

/// Numerical-stage errors map to exit 3; anything the caller could have
/// written differently maps to exit 2.
pub fn from_xy(e: xychain::XyError) -> CliError {
    use xychain::XyError::*;
    match e {
        InvalidParams(_) | InsufficientRange(_) | ReferenceMissing(_) => {
            CliError::Validation(e.to_string())
        }
        _ => CliError::Numerical(e.to_string()),
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Parse one grid spelling into an explicit list.
pub fn parse_grid(text: &str, what: &str) -> CliResult<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(bad(format!("{what}: empty range")));
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 && parts.len() != 4 {
            return Err(bad(format!(
                "{what}: expected start:stop:count[:log], got '{text}'"
            )));
        }
        let start: f64 =
            parts[0].parse().map_err(|_| bad(format!("{what}: bad start '{}'", parts[0])))?;
        let stop: f64 =
            parts[1].parse().map_err(|_| bad(format!("{what}: bad stop '{}'", parts[1])))?;
        let count: usize =
            parts[2].parse().map_err(|_| bad(format!("{what}: bad count '{}'", parts[2])))?;
        let log = match parts.get(3) {
            None => false,
            Some(&"log") => true,
            Some(&"lin") => false,
            Some(other) => {
                return Err(bad(format!("{what}: scale must be lin or log, got '{other}'")))
            }
        };
        if count == 0 {
            return Err(bad(format!("{what}: count must be positive")));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        if log && (start <= 0.0 || stop <= 0.0) {
            return Err(bad(format!("{what}: log spacing needs positive endpoints")));
        }
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let t = i as f64 / (count - 1) as f64;
            out.push(if log {
                10f64.powf(start.log10() + (stop.log10() - start.log10()) * t)
            } else {
                start + (stop - start) * t
            });
        }
        Ok(out)
    } else {
        text.split(',')
            .map(|p| {
                p.trim().parse::<f64>().map_err(|_| bad(format!("{what}: bad number '{p}'")))
            })
            .collect()
    }
}

/// Chain-length column: `bulk`, one even integer, or a comma list of them.
pub fn parse_lengths(text: &str) -> CliResult<Vec<ChainLength>> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("bulk") {
        return Ok(vec![ChainLength::Bulk]);
    }
    text.split(',')
        .map(|p| {
            let p = p.trim();
            if p.eq_ignore_ascii_case("bulk") {
                Ok(ChainLength::Bulk)
            } else {
                p.parse::<usize>()
                    .map(ChainLength::Finite)
                    .map_err(|_| bad(format!("length: bad value '{p}' (want 'bulk' or an integer)")))
            }
        })
        .collect()
}

pub fn parse_radii(text: &str) -> CliResult<Vec<usize>> {
    let radii: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad(format!("r: bad value '{p}'"))))
        .collect::<CliResult<_>>()?;
    if radii.is_empty() || radii.iter().any(|&r| r == 0) {
        return Err(bad("r: distances must be positive"));
    }
    Ok(radii)
}

/// State convention of a request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Convention {
    Symmetric,
    Broken,
    Thermal,
}

impl Convention {
    pub fn parse(text: &str) -> CliResult<Self> {
        match text {
            "symmetric" => Ok(Convention::Symmetric),
            "broken" => Ok(Convention::Broken),
            "thermal" => Ok(Convention::Thermal),
            other => Err(bad(format!(
                "state: '{other}' is not one of symmetric, broken, thermal"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Symmetric => "symmetric",
            Convention::Broken => "broken",
            Convention::Thermal => "thermal",
        }
    }
}

/// Longitudinal-field choice for broken-sector runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HxFlag {
    Adaptive,
    Fixed(f64),
}

impl HxFlag {
    pub fn parse(text: &str) -> CliResult<Self> {
        if text.eq_ignore_ascii_case("adaptive") {
            return Ok(HxFlag::Adaptive);
        }
        text.parse::<f64>()
            .map(HxFlag::Fixed)
            .map_err(|_| bad(format!("hx: want 'adaptive' or a number, got '{text}'")))
    }
}

/// Everything a command needs, after the config file and the flags are
/// merged. Single-point commands read the first grid entry; `sweep` crosses
/// the grids.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub gamma: f64,
    pub h_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub lengths: Vec<ChainLength>,
    pub radii: Vec<usize>,
    pub convention: Convention,
    pub hx: HxFlag,
    pub engine: Option<String>,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub workers: usize,
    pub tol: f64,
}

/// Raw option bundle as parsed from flags; `None` falls back to the config
/// file and then to the defaults.
#[derive(Debug, Default, Clone)]
pub struct RawOpts {
    pub gamma: Option<String>,
    pub h: Option<String>,
    pub h_range: Option<String>,
    pub temp: Option<String>,
    pub temp_range: Option<String>,
    pub length: Option<String>,
    pub r: Option<String>,
    pub state: Option<String>,
    pub hx: Option<String>,
    pub engine: Option<String>,
    pub out: Option<String>,
    pub cache_dir: Option<String>,
    pub workers: Option<String>,
    pub tol: Option<String>,
}

/// `key = value` lines; `#` starts a comment. Keys use the flag spelling
/// without the leading dashes.
pub fn read_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| bad(format!("config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("config line {}: expected key=value", ln + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

const KNOWN_KEYS: [&str; 14] = [
    "gamma", "h", "h-range", "temp", "temp-range", "L", "r", "state", "hx", "engine", "out",
    "cache-dir", "workers", "tol",
];

impl RawOpts {
    /// Fill unset fields from the config map, then resolve with defaults.
    pub fn resolve(mut self, config: &BTreeMap<String, String>) -> CliResult<Resolved> {
        for key in config.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(bad(format!("config: unknown key '{key}'")));
            }
        }
        let take = |slot: &mut Option<String>, key: &str| {
            if slot.is_none() {
                *slot = config.get(key).cloned();
            }
        };
        take(&mut self.gamma, "gamma");
        take(&mut self.h, "h");
        take(&mut self.h_range, "h-range");
        take(&mut self.temp, "temp");
        take(&mut self.temp_range, "temp-range");
        take(&mut self.length, "L");
        take(&mut self.r, "r");
        take(&mut self.state, "state");
        take(&mut self.hx, "hx");
        take(&mut self.engine, "engine");
        take(&mut self.out, "out");
        take(&mut self.cache_dir, "cache-dir");
        take(&mut self.workers, "workers");
        take(&mut self.tol, "tol");

        let gamma: f64 = self
            .gamma
            .as_deref()
            .unwrap_or("0.7")
            .parse()
            .map_err(|_| bad("gamma: not a number"))?;
        let h_grid = match (&self.h, &self.h_range) {
            (Some(_), Some(_)) => return Err(bad("give either --h or --h-range, not both")),
            (Some(v), None) => parse_grid(v, "h")?,
            (None, Some(v)) => parse_grid(v, "h-range")?,
            (None, None) => vec![0.5],
        };
        let t_grid = match (&self.temp, &self.temp_range) {
            (Some(_), Some(_)) => {
                return Err(bad("give either --temp or --temp-range, not both"))
            }
            (Some(v), None) => parse_grid(v, "temp")?,
            (None, Some(v)) => parse_grid(v, "temp-range")?,
            (None, None) => vec![0.0],
        };
        let lengths = parse_lengths(self.length.as_deref().unwrap_or("bulk"))?;
        let radii = parse_radii(self.r.as_deref().unwrap_or("1"))?;
        let convention = Convention::parse(self.state.as_deref().unwrap_or("symmetric"))?;
        let hx = HxFlag::parse(self.hx.as_deref().unwrap_or("adaptive"))?;
        let workers: usize = self
            .workers
            .as_deref()
            .unwrap_or("0")
            .parse()
            .map_err(|_| bad("workers: not an integer"))?;
        let tol: f64 =
            self.tol.as_deref().unwrap_or("1e-9").parse().map_err(|_| bad("tol: not a number"))?;
        if tol <= 0.0 {
            return Err(bad("tol: must be positive"));
        }

        let resolved = Resolved {
            gamma,
            h_grid,
            t_grid,
            lengths,
            radii,
            convention,
            hx,
            engine: self.engine,
            out: self.out.map(PathBuf::from),
            cache_dir: self.cache_dir.map(PathBuf::from),
            workers,
            tol,
        };
        resolved.validate()?;
        Ok(resolved)
    }
}

impl Resolved {
    fn validate(&self) -> CliResult<()> {
        if self.h_grid.is_empty() {
            return Err(bad("h: empty range"));
        }
        if self.t_grid.is_empty() {
            return Err(bad("temp: empty range"));
        }
        if self.lengths.is_empty() {
            return Err(bad("L: empty list"));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(bad(format!("gamma must be in (0, 1], got {}", self.gamma)));
        }
        if self.t_grid.iter().any(|&t| t < 0.0) {
            return Err(bad("temp: temperatures must be >= 0"));
        }
        match self.convention {
            Convention::Broken => {
                for l in &self.lengths {
                    match l.finite() {
                        None => {
                            return Err(bad(
                                "state=broken needs a finite chain (L <= 20), not bulk",
                            ))
                        }
                        Some(n) if n > 20 => {
                            return Err(bad(format!(
                                "state=broken supports L <= 20, got {n}"
                            )))
                        }
                        _ => {}
                    }
                }
            }
            Convention::Thermal => {
                if self.t_grid.iter().any(|&t| t <= 0.0) {
                    return Err(bad("state=thermal needs temp > 0"));
                }
            }
            Convention::Symmetric => {}
        }
        Ok(())
    }

    /// First grid entry of each axis, for single-point commands.
    pub fn point(&self) -> CliResult<(f64, f64, ChainLength)> {
        if self.h_grid.len() != 1 || self.t_grid.len() != 1 || self.lengths.len() != 1 {
            return Err(bad(
                "this command takes a single parameter point; use `sweep` for grids",
            ));
        }
        Ok((self.h_grid[0], self.t_grid[0], self.lengths[0]))
    }

    pub fn params_at(&self, h: f64, t: f64, l: ChainLength) -> ModelParams {
        ModelParams { gamma: self.gamma, h, temperature: t, length: l }
    }

    /// Canonical text form of the request; the cache key and the sidecar
    /// both derive from this string, so field order never changes.
    pub fn canonical(&self, operation: &str, extra: &[(&str, String)]) -> String {
        let mut s = String::new();
        let _ = write!(s, "version={};op={operation};gamma={:.17e}", version(), self.gamma);
        let join = |v: &[f64]| {
            v.iter().map(|x| format!("{x:.17e}")).collect::<Vec<_>>().join(",")
        };
        let _ = write!(s, ";h={}", join(&self.h_grid));
        let _ = write!(s, ";T={}", join(&self.t_grid));
        let ls: Vec<String> = self
            .lengths
            .iter()
            .map(|l| match l.finite() {
                None => "bulk".to_string(),
                Some(n) => n.to_string(),
            })
            .collect();
        let _ = write!(s, ";L={}", ls.join(","));
        let rs: Vec<String> = self.radii.iter().map(|r| r.to_string()).collect();
        let _ = write!(s, ";r={}", rs.join(","));
        let _ = write!(s, ";state={}", self.convention.name());
        match self.hx {
            HxFlag::Adaptive => s.push_str(";hx=adaptive"),
            HxFlag::Fixed(v) => {
                let _ = write!(s, ";hx={v:.17e}");
            }
        }
        if let Some(e) = &self.engine {
            let _ = write!(s, ";engine={e}");
        }
        let _ = write!(s, ";tol={:.17e}", self.tol);
        for (k, v) in extra {
            let _ = write!(s, ";{k}={v}");
        }
        s
    }
}

pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
