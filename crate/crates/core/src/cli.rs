//! Command-line runs: configuration layering, the three commands, exit
//! codes, and output files.
//!
//! Every run writes a `metadata.json` carrying the fully resolved
//! configuration (defaults included), the seed, and the software version —
//! enough to reproduce the run's outputs exactly. Randomness flows from the
//! single `seed`; per-stage sub-seeds are derived from it deterministically.
//!
//! Output files per command, inside the output directory:
//! * `plum`    — `draws.csv`, `chronology.csv`, `metadata.json`
//! * `crs`     — `chronology.csv`, `metadata.json`
//! * `simulate`— `dataset.csv`, `metadata.json`

use std::fs;
use std::path::{Path, PathBuf};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::agedepth::{SectionGrid, SlopeMemory};
use crate::crs::{crs_ages_with, CrsOptions, CrsResult};
use crate::data::{
    parse_dataset, parse_supported_csv, split_supported, tail_supported_estimate, CoreDataset,
    FormatOptions, SupportedDatum,
};
use crate::inference::{PlumModel, PriorConfig};
use crate::physics::DecayConstants;
use crate::simulator::{scenario_filter, simulate, Scenario, SigmaSpec, SimulationSpec};
use crate::summary::{
    chronology_to_csv, diagnostics, draws_to_csv, summarize, ChronologySummary, Diagnostics,
    PosteriorEnsemble, RunMetadata,
};
use crate::twalk::{initial_points_for, run_twalk_with, TwalkOptions};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Exit code for an error, per the documented mapping.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidInput(_) => EXIT_INPUT,
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::Numeric(_) | Error::Io(_) => EXIT_INTERNAL,
    }
}

/// The machine-readable error document printed on failure.
pub fn error_json(e: &Error) -> String {
    serde_json::json!({
        "error": e.to_string(),
        "exit_code": exit_code_for(e),
    })
    .to_string()
}

/// Which dating model a `run` invocation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Model {
    Plum,
    Crs,
}

impl Model {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plum" => Ok(Model::Plum),
            "crs" => Ok(Model::Crs),
            other => Err(Error::invalid(format!("unknown model `{other}` (plum|crs)"))),
        }
    }
}

/// Summary depth grid `lo:hi:step`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("grid `{s}` is not lo:hi:step")));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(format!("bad grid number `{p}`")))
            })
            .collect::<Result<_>>()?;
        let g = GridSpec {
            lo: nums[0],
            hi: nums[1],
            step: nums[2],
        };
        if g.lo < 0.0 || g.hi < g.lo || !(g.step > 0.0) {
            return Err(Error::invalid(format!("grid `{s}` out of order or non-positive step")));
        }
        Ok(g)
    }

    pub fn depths(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step).round() as usize;
        let mut v: Vec<f64> = (0..=n).map(|i| self.lo + i as f64 * self.step).collect();
        if let Some(last) = v.last_mut() {
            if (*last - self.hi).abs() < 1e-9 {
                *last = self.hi;
            }
        }
        v.retain(|d| *d <= self.hi + 1e-9);
        v
    }
}

/// Layered run configuration. Every field is optional; defaults are applied
/// (and recorded) when a command resolves it. Sources layer as
/// defaults < config file < command-line flags.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub supported_tail: Option<usize>,
    pub supported_file: Option<PathBuf>,
    pub model: Option<Model>,
    pub dc: Option<f64>,
    pub iters: Option<usize>,
    pub seed: Option<u64>,
    pub al: Option<f64>,
    pub out: Option<PathBuf>,
    pub grid: Option<GridSpec>,
    pub scenario: Option<Scenario>,
    pub n_mc: Option<usize>,
    pub extrapolate: Option<bool>,
    pub burn_in: Option<f64>,
    pub thin: Option<usize>,
    pub label: Option<String>,
    pub slope_memory: Option<SlopeMemory>,
    pub phi_shape: Option<f64>,
    pub phi_mean: Option<f64>,
    pub ps_shape: Option<f64>,
    pub ps_mean: Option<f64>,
    pub omega_a: Option<f64>,
    pub omega_b: Option<f64>,
    pub alpha_shape: Option<f64>,
    pub alpha_mean: Option<f64>,
}

impl RunConfig {
    /// Reads a flat `key = value` file (`#` starts a comment).
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: (i + 1) as u64,
                msg: format!("expected key = value, got `{line}`"),
            })?;
            cfg.set(key.trim(), value.trim()).map_err(|e| Error::Parse {
                line: (i + 1) as u64,
                msg: e.to_string(),
            })?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad_num = |k: &str, v: &str| Error::invalid(format!("bad number `{v}` for {k}"));
        match key {
            "input" => self.input = Some(PathBuf::from(value)),
            "supported_tail" => {
                self.supported_tail =
                    Some(value.parse().map_err(|_| bad_num(key, value))?)
            }
            "supported_file" => self.supported_file = Some(PathBuf::from(value)),
            "model" => self.model = Some(Model::parse(value)?),
            "dc" => self.dc = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "iters" => self.iters = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "seed" => self.seed = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "al" => self.al = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "out" => self.out = Some(PathBuf::from(value)),
            "grid" => self.grid = Some(GridSpec::parse(value)?),
            "scenario" => self.scenario = Some(Scenario::parse(&[value.to_string()])?),
            "n_mc" => self.n_mc = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "extrapolate" => {
                self.extrapolate = Some(value.parse().map_err(|_| {
                    Error::invalid(format!("bad boolean `{value}` for extrapolate"))
                })?)
            }
            "burn_in" => self.burn_in = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "thin" => self.thin = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "label" => self.label = Some(value.to_string()),
            "slope_memory" => self.slope_memory = Some(SlopeMemory::parse(value)?),
            "phi_shape" => self.phi_shape = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "phi_mean" => self.phi_mean = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "ps_shape" => self.ps_shape = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "ps_mean" => self.ps_mean = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "omega_a" => self.omega_a = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "omega_b" => self.omega_b = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "alpha_shape" => {
                self.alpha_shape = Some(value.parse().map_err(|_| bad_num(key, value))?)
            }
            "alpha_mean" => self.alpha_mean = Some(value.parse().map_err(|_| bad_num(key, value))?),
            other => return Err(Error::invalid(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Returns `over` where set, `self` otherwise (flags over config file).
    pub fn overlay(mut self, over: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(
            input, supported_tail, supported_file, model, dc, iters, seed, al, out, grid,
            scenario, n_mc, extrapolate, burn_in, thin, label, slope_memory, phi_shape,
            phi_mean, ps_shape, ps_mean, omega_a, omega_b, alpha_shape, alpha_mean
        );
        self
    }

    fn priors(&self, defaults_applied: &mut Vec<String>) -> PriorConfig {
        let base = PriorConfig::default();
        let mut pick = |name: &str, v: Option<f64>, d: f64| match v {
            Some(x) => x,
            None => {
                defaults_applied.push(format!("{name}={d}"));
                d
            }
        };
        PriorConfig {
            phi_shape: pick("phi_shape", self.phi_shape, base.phi_shape),
            phi_mean: pick("phi_mean", self.phi_mean, base.phi_mean),
            ps_shape: pick("ps_shape", self.ps_shape, base.ps_shape),
            ps_mean: pick("ps_mean", self.ps_mean, base.ps_mean),
            omega_a: pick("omega_a", self.omega_a, base.omega_a),
            omega_b: pick("omega_b", self.omega_b, base.omega_b),
            alpha_shape: pick("alpha_shape", self.alpha_shape, base.alpha_shape),
            alpha_mean: pick("alpha_mean", self.alpha_mean, base.alpha_mean),
            a_l: pick("al", self.al, base.a_l),
        }
    }
}

fn read_input(cfg: &RunConfig) -> Result<(CoreDataset, Vec<String>)> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::invalid("no input file given (--input)"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read input {}: {e}", path.display())))?;
    let label = cfg.label.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "core".into())
    });
    let parsed = parse_dataset(
        &text,
        &FormatOptions {
            default_thickness: 1.0,
            label,
        },
    )?;
    Ok((parsed.dataset, parsed.warnings))
}

/// Resolves the supported-activity source: tail split or separate file.
fn resolve_supported(
    cfg: &RunConfig,
    ds: &CoreDataset,
) -> Result<(CoreDataset, Vec<SupportedDatum>, String)> {
    match (cfg.supported_tail, &cfg.supported_file) {
        (Some(_), Some(_)) => Err(Error::invalid(
            "--supported-tail and --supported-file are mutually exclusive",
        )),
        (None, None) => Err(Error::invalid(
            "a supported-activity source is required: --supported-tail N or --supported-file PATH",
        )),
        (Some(n), None) => {
            let (chron, sup) = split_supported(ds, n)?;
            Ok((chron, sup, format!("tail:{n}")))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::invalid(format!("cannot read supported file {}: {e}", path.display()))
            })?;
            let sup = parse_supported_csv(&text)?;
            let full = CoreDataset::new(
                ds.measurements().to_vec(),
                sup.clone(),
                ds.label().to_string(),
            )?;
            Ok((full, sup, format!("file:{}", path.display())))
        }
    }
}

fn out_dir(cfg: &RunConfig, defaults_applied: &mut Vec<String>) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| {
        defaults_applied.push("out=.".into());
        PathBuf::from(".")
    })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Outputs of a Bayesian run.
#[derive(Debug)]
pub struct PlumArtifacts {
    pub summary: ChronologySummary,
    pub diagnostics: Diagnostics,
    pub metadata: RunMetadata,
    pub draws_path: PathBuf,
    pub chronology_path: PathBuf,
    pub metadata_path: PathBuf,
}

/// The Bayesian chronology command.
pub fn cmd_plum(cfg: &RunConfig) -> Result<PlumArtifacts> {
    let mut defaults_applied = Vec::new();
    let (input_ds, mut warnings) = read_input(cfg)?;
    let (chron, _sup, supported_source) = resolve_supported(cfg, &input_ds)?;

    let dc = cfg.dc.unwrap_or_else(|| {
        defaults_applied.push("dc=1".into());
        1.0
    });
    let priors = self_priors(cfg, &mut defaults_applied)?;
    let seed = cfg.seed.unwrap_or_else(|| {
        defaults_applied.push("seed=0".into());
        0
    });

    // The model extends to the deepest chronology sample, or deeper when the
    // requested summary grid asks for ages below it (those sections are
    // prior-driven).
    let mut model_depth = chron.max_depth();
    if let Some(g) = &cfg.grid {
        if g.hi > model_depth {
            warnings.push(format!(
                "summary grid extends {} cm past the deepest dated sample; \
                 ages there are extrapolated by the accumulation prior",
                g.hi - model_depth
            ));
            model_depth = g.hi;
        }
    }
    let grid = SectionGrid::covering(model_depth, dc)?;
    let dim = 3 + grid.num_sections();

    let iters = cfg.iters.unwrap_or_else(|| {
        let n = 2500 * dim;
        defaults_applied.push(format!("iters={n}"));
        n
    });
    let burn_in_frac = cfg.burn_in.unwrap_or_else(|| {
        defaults_applied.push("burn_in=0.2".into());
        0.2
    });
    let thin = match cfg.thin {
        Some(t) => t,
        None => {
            defaults_applied.push(format!("thin={dim}"));
            dim
        }
    };

    let slope_memory = cfg.slope_memory.unwrap_or_else(|| {
        defaults_applied.push("slope_memory=deep".into());
        SlopeMemory::default()
    });
    let model = PlumModel::with_slope_memory(
        &chron,
        grid,
        priors,
        DecayConstants::pb210(),
        slope_memory,
    )?;

    // Sub-seeds derived from the master seed.
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let init_seed: u64 = master.gen();
    let twalk_seed: u64 = master.gen();
    let mut init_rng = ChaCha8Rng::seed_from_u64(init_seed);
    let (x0, x1) = initial_points_for(&model, &priors, &mut init_rng)?;

    let chain = run_twalk_with(
        |x| model.energy_flat(x),
        |x| model.in_support_flat(x),
        x0,
        x1,
        iters,
        twalk_seed,
        &TwalkOptions {
            burn_in_frac,
            thin: Some(thin),
        },
    )?;

    let metadata = RunMetadata {
        software: "pbchron".into(),
        version: VERSION.into(),
        label: chron.label().to_string(),
        model: "plum".into(),
        seed,
        iterations: chain.iterations,
        burn_in: chain.burn_in,
        thin: chain.thin,
        stored_draws: chain.draws.len(),
        dc,
        num_sections: grid.num_sections(),
        slope_memory: slope_memory.name().into(),
        priors,
        acceptance_rate: chain.acceptance_rate,
        defaults_applied: defaults_applied.clone(),
        warnings: warnings.clone(),
    };
    let ensemble = PosteriorEnsemble::from_chain(&chain, grid, slope_memory, metadata.clone())?;

    let depths = match &cfg.grid {
        Some(g) => g.depths(),
        None => GridSpec {
            lo: 0.0,
            hi: grid.max_depth(),
            step: dc,
        }
        .depths(),
    };
    let summary = summarize(&ensemble, &depths)?;
    let diag = diagnostics(&ensemble)?;

    let dir = out_dir(cfg, &mut Vec::new());
    let draws_path = write_file(&dir, "draws.csv", &draws_to_csv(&ensemble))?;
    let chronology_path = write_file(&dir, "chronology.csv", &chronology_to_csv(&summary.bands))?;
    let doc = serde_json::json!({
        "run": metadata,
        "config": cfg,
        "supported_source": supported_source,
        "phi": summary.phi,
        "p_s": summary.p_s,
        "diagnostics": diag,
    });
    let metadata_path = write_file(&dir, "metadata.json", &serde_json::to_string_pretty(&doc)?)?;

    Ok(PlumArtifacts {
        summary,
        diagnostics: diag,
        metadata,
        draws_path,
        chronology_path,
        metadata_path,
    })
}

// PriorConfig::validate is deferred to PlumModel::new; this wrapper only
// resolves defaults.
fn self_priors(cfg: &RunConfig, defaults_applied: &mut Vec<String>) -> Result<PriorConfig> {
    let p = cfg.priors(defaults_applied);
    p.validate()?;
    Ok(p)
}

/// Outputs of a CRS run.
#[derive(Debug)]
pub struct CrsArtifacts {
    pub result: CrsResult,
    pub chronology_path: PathBuf,
    pub metadata_path: PathBuf,
}

/// The classical CRS command.
pub fn cmd_crs(cfg: &RunConfig) -> Result<CrsArtifacts> {
    let mut defaults_applied = Vec::new();
    let (input_ds, mut warnings) = read_input(cfg)?;
    let (chron, sup, supported_source) = resolve_supported(cfg, &input_ds)?;
    let est = tail_supported_estimate(&sup)?;
    if est.is_degenerate() {
        warnings.push("single supported datum: supported sd is 0".into());
    }

    let n_mc = cfg.n_mc.unwrap_or_else(|| {
        defaults_applied.push("n_mc=5000".into());
        5000
    });
    let seed = cfg.seed.unwrap_or_else(|| {
        defaults_applied.push("seed=0".into());
        0
    });
    let extrapolate = cfg.extrapolate.unwrap_or(false);

    let result = crs_ages_with(
        &chron,
        est.mean,
        est.sd,
        &CrsOptions {
            n_mc,
            seed,
            extrapolate_tail: extrapolate,
            decay: DecayConstants::pb210(),
        },
    )?;

    let bands: Vec<crate::summary::DepthBand> = result
        .records
        .iter()
        .map(|r| crate::summary::DepthBand {
            depth: r.depth,
            mean: r.age_mean,
            lo95: r.age_lo95,
            hi95: r.age_hi95,
        })
        .collect();

    let all_warnings: Vec<String> = warnings
        .iter()
        .chain(result.warnings.iter())
        .cloned()
        .collect();
    let dir = out_dir(cfg, &mut defaults_applied);
    let chronology_path = write_file(&dir, "chronology.csv", &chronology_to_csv(&bands))?;
    let doc = serde_json::json!({
        "run": {
            "software": "pbchron",
            "version": VERSION,
            "label": chron.label(),
            "model": "crs",
            "seed": seed,
            "n_mc": n_mc,
            "supported_mean": result.supported_mean,
            "supported_sd": result.supported_sd,
            "a0": result.a0,
            "dropped_depths": result.dropped_depths,
            "extrapolated": result.extrapolated,
            "inventory": "per-slice rectangle sums; unmeasured spans bridged by exponential interpolation",
            "point_ages": result.point_ages,
            "defaults_applied": defaults_applied,
            "warnings": all_warnings,
        },
        "config": cfg,
        "supported_source": supported_source,
    });
    let metadata_path = write_file(&dir, "metadata.json", &serde_json::to_string_pretty(&doc)?)?;

    Ok(CrsArtifacts {
        result,
        chronology_path,
        metadata_path,
    })
}

/// Outputs of a simulation run.
#[derive(Debug)]
pub struct SimArtifacts {
    pub dataset: CoreDataset,
    pub dataset_path: PathBuf,
    pub metadata_path: PathBuf,
}

/// Generates a synthetic dataset for the requested scenario.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<SimArtifacts> {
    let mut defaults_applied = Vec::new();
    let seed = cfg.seed.unwrap_or_else(|| {
        defaults_applied.push("seed=0".into());
        0
    });
    let scenario = cfg.scenario.clone().unwrap_or_else(|| {
        defaults_applied.push("scenario=full".into());
        Scenario::Full
    });
    let spec = SimulationSpec {
        seed,
        label: cfg.label.clone().unwrap_or_else(|| "simulated-core".into()),
        sigma: SigmaSpec::SteppedDefault,
        ..SimulationSpec::default()
    };
    let full = simulate(&spec)?;
    let filtered = scenario_filter(&full, &scenario)?;

    let dir = out_dir(cfg, &mut defaults_applied);
    let dataset_path = write_file(&dir, "dataset.csv", &crate::data::dataset_to_csv(&filtered))?;
    let doc = serde_json::json!({
        "run": {
            "software": "pbchron",
            "version": VERSION,
            "model": "simulate",
            "seed": seed,
            "scenario": scenario.name(),
            "spec": spec,
            "rows": filtered.measurements().len(),
            "defaults_applied": defaults_applied,
        },
        "config": cfg,
    });
    let metadata_path = write_file(&dir, "metadata.json", &serde_json::to_string_pretty(&doc)?)?;

    Ok(SimArtifacts {
        dataset: filtered,
        dataset_path,
        metadata_path,
    })
}

/// Config-file-driven entry: dispatches on the resolved model.
pub fn cmd_run(cfg: &RunConfig) -> Result<()> {
    match cfg.model {
        Some(Model::Plum) => cmd_plum(cfg).map(|_| ()),
        Some(Model::Crs) => cmd_crs(cfg).map(|_| ()),
        None => Err(Error::invalid("no model selected (--model plum|crs)")),
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Numeric(format!("JSON serialization failed: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parses_and_expands() {
        let g = GridSpec::parse("0:30:1").unwrap();
        assert_eq!(g.depths().len(), 31);
        assert_eq!(g.depths()[30], 30.0);
        let g = GridSpec::parse("2.5:4:0.5").unwrap();
        assert_eq!(g.depths(), vec![2.5, 3.0, 3.5, 4.0]);
        assert!(GridSpec::parse("5:1:1").is_err());
        assert!(GridSpec::parse("0:10:0").is_err());
        assert!(GridSpec::parse("0:10").is_err());
        assert!(GridSpec::parse("-1:10:1").is_err());
    }

    #[test]
    fn model_parses() {
        assert_eq!(Model::parse("plum").unwrap(), Model::Plum);
        assert_eq!(Model::parse("CRS").unwrap(), Model::Crs);
        assert!(Model::parse("bacon").is_err());
    }

    #[test]
    fn config_file_layering() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(
            &path,
            "# a comment\nmodel = plum\nseed = 9\ndc = 2.0\nscenario = top_n:23\nal = 0.05\n",
        )
        .unwrap();
        let file_cfg = RunConfig::from_file(&path).unwrap();
        assert_eq!(file_cfg.seed, Some(9));
        assert_eq!(file_cfg.dc, Some(2.0));
        assert_eq!(file_cfg.scenario, Some(Scenario::TopN(23)));
        let flags = RunConfig {
            seed: Some(42),
            ..RunConfig::default()
        };
        let merged = file_cfg.overlay(flags);
        assert_eq!(merged.seed, Some(42));
        assert_eq!(merged.dc, Some(2.0));
        assert_eq!(merged.al, Some(0.05));
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.conf");
        fs::write(&path, "bogus = 1\n").unwrap();
        assert!(RunConfig::from_file(&path).is_err());
    }

    #[test]
    fn exit_codes_map_by_variant() {
        assert_eq!(exit_code_for(&Error::invalid("x")), EXIT_INPUT);
        assert_eq!(
            exit_code_for(&Error::Parse {
                line: 1,
                msg: "x".into()
            }),
            EXIT_INPUT
        );
        assert_eq!(exit_code_for(&Error::infeasible("x")), EXIT_INFEASIBLE);
        assert_eq!(exit_code_for(&Error::Numeric("x".into())), EXIT_INTERNAL);
        let io = Error::Io(std::io::Error::new(std::io::ErrorKind::Other, "x"));
        assert_eq!(exit_code_for(&io), EXIT_INTERNAL);
        let j: serde_json::Value = serde_json::from_str(&error_json(&io)).unwrap();
        assert_eq!(j["exit_code"], 4);
    }

    #[test]
    fn missing_input_is_input_error() {
        let cfg = RunConfig {
            input: Some(PathBuf::from("/no/such/file.csv")),
            supported_tail: Some(3),
            ..RunConfig::default()
        };
        let err = cmd_crs(&cfg).unwrap_err();
        assert_eq!(exit_code_for(&err), EXIT_INPUT);
        let err = cmd_plum(&cfg).unwrap_err();
        assert_eq!(exit_code_for(&err), EXIT_INPUT);
    }

    #[test]
    fn supported_sources_are_exclusive_and_required() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.csv");
        fs::write(&input, crate::fixtures::SIM30_CSV).unwrap();
        let base = RunConfig {
            input: Some(input),
            out: Some(dir.path().join("out")),
            ..RunConfig::default()
        };
        let both = RunConfig {
            supported_tail: Some(3),
            supported_file: Some(dir.path().join("sup.csv")),
            ..base.clone()
        };
        assert!(cmd_crs(&both).is_err());
        assert!(cmd_crs(&base).is_err());
    }
}
