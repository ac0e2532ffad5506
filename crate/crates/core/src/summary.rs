//! Posterior post-processing: quantile bands, marginals, diagnostics,
//! serialization.
//!
//! Quantiles everywhere use linear interpolation between order statistics
//! (see [`crate::stats`]), so band endpoints can be recomputed exactly from
//! the stored draws CSV.

use crate::agedepth::{AgeDepthFunction, SectionGrid, SlopeMemory};
use crate::inference::{PlumParameters, PriorConfig};
use crate::stats;
use crate::twalk::Chain;
use crate::{Error, Result};

/// Everything needed to reproduce a run, stored next to its outputs.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RunMetadata {
    pub software: String,
    pub version: String,
    pub label: String,
    pub model: String,
    pub seed: u64,
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub stored_draws: usize,
    pub dc: f64,
    pub num_sections: usize,
    pub slope_memory: String,
    pub priors: PriorConfig,
    pub acceptance_rate: f64,
    /// Defaults that were applied because the user did not set them.
    pub defaults_applied: Vec<String>,
    pub warnings: Vec<String>,
}

/// Stored posterior draws with their derived age-depth slopes.
#[derive(Debug, Clone)]
pub struct PosteriorEnsemble {
    pub draws: Vec<PlumParameters>,
    /// Per-draw section slopes (same order as `draws`).
    pub slopes: Vec<Vec<f64>>,
    pub energies: Vec<f64>,
    pub grid: SectionGrid,
    pub acceptance_rate: f64,
    pub metadata: RunMetadata,
}

impl PosteriorEnsemble {
    /// Unflattens a finished chain; every draw must carry a finite energy.
    pub fn from_chain(
        chain: &Chain,
        grid: SectionGrid,
        slope_memory: SlopeMemory,
        metadata: RunMetadata,
    ) -> Result<Self> {
        if chain.draws.is_empty() {
            return Err(Error::invalid("chain stored no draws"));
        }
        if chain.dim != 3 + grid.num_sections() {
            return Err(Error::invalid(format!(
                "chain dimension {} does not match grid with {} sections",
                chain.dim,
                grid.num_sections()
            )));
        }
        let mut draws = Vec::with_capacity(chain.draws.len());
        let mut slopes = Vec::with_capacity(chain.draws.len());
        for (x, u) in chain.draws.iter().zip(&chain.energies) {
            if !u.is_finite() {
                return Err(Error::Numeric("stored draw with non-finite energy".into()));
            }
            let p = PlumParameters::from_flat(x)?;
            slopes.push(slope_memory.slopes(&p.alpha, p.omega)?);
            draws.push(p);
        }
        Ok(PosteriorEnsemble {
            draws,
            slopes,
            energies: chain.energies.clone(),
            grid,
            acceptance_rate: chain.acceptance_rate,
            metadata,
        })
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    fn age_model(&self, i: usize) -> AgeDepthFunction {
        AgeDepthFunction::new(self.grid, self.slopes[i].clone(), self.draws[i].omega)
            .expect("ensemble slopes validated at construction")
    }
}

/// Posterior mean/spread of a scalar parameter.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ParamMarginal {
    pub mean: f64,
    pub sd: f64,
    pub lo95: f64,
    pub hi95: f64,
}

fn marginal(values: &mut Vec<f64>) -> ParamMarginal {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ParamMarginal {
        mean: stats::mean(values),
        sd: stats::sample_sd(values),
        lo95: stats::quantile_sorted(values, 0.025),
        hi95: stats::quantile_sorted(values, 0.975),
    }
}

/// Mean and equal-tailed 95% band of the age at one depth.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DepthBand {
    pub depth: f64,
    pub mean: f64,
    pub lo95: f64,
    pub hi95: f64,
}

/// Chronology bands on a depth grid plus supply/supported marginals.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChronologySummary {
    pub bands: Vec<DepthBand>,
    pub phi: ParamMarginal,
    pub p_s: ParamMarginal,
}

/// Evaluates every draw's age at every requested depth and reports the mean
/// and equal-tailed 95% interval, plus marginals for phi and p_s.
pub fn summarize(ens: &PosteriorEnsemble, depth_grid: &[f64]) -> Result<ChronologySummary> {
    if ens.is_empty() {
        return Err(Error::invalid("empty posterior ensemble"));
    }
    if depth_grid.is_empty() {
        return Err(Error::invalid("empty depth grid"));
    }
    for &d in depth_grid {
        if !ens.grid.contains(d) {
            return Err(Error::invalid(format!(
                "summary depth {d} outside the modeled range [0, {}]",
                ens.grid.max_depth()
            )));
        }
    }
    let models: Vec<AgeDepthFunction> = (0..ens.len()).map(|i| ens.age_model(i)).collect();
    let mut bands = Vec::with_capacity(depth_grid.len());
    let mut ages = vec![0.0; ens.len()];
    for &d in depth_grid {
        for (slot, m) in ages.iter_mut().zip(&models) {
            *slot = m.age_at(d)?;
        }
        let mean = stats::mean(&ages);
        ages.sort_by(|a, b| a.partial_cmp(b).unwrap());
        bands.push(DepthBand {
            depth: d,
            mean,
            lo95: stats::quantile_sorted(&ages, 0.025),
            hi95: stats::quantile_sorted(&ages, 0.975),
        });
    }
    let mut phis: Vec<f64> = ens.draws.iter().map(|p| p.phi).collect();
    let mut pss: Vec<f64> = ens.draws.iter().map(|p| p.p_s).collect();
    Ok(ChronologySummary {
        bands,
        phi: marginal(&mut phis),
        p_s: marginal(&mut pss),
    })
}

/// Integrated autocorrelation time by the initial-positive-sequence rule:
/// sum adjacent autocorrelation pairs until a pair goes non-positive.
///
/// Returns `(iat, degenerate)`; a (numerically) constant series is reported
/// as `iat = len` with the degenerate flag set.
pub fn integrated_autocorrelation_time(series: &[f64]) -> (f64, bool) {
    let n = series.len();
    if n < 2 {
        return (n as f64, true);
    }
    let lo = series.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = series.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()) {
        return (n as f64, true);
    }
    let m = stats::mean(series);
    let gamma = |lag: usize| -> f64 {
        let mut acc = 0.0;
        for t in 0..n - lag {
            acc += (series[t] - m) * (series[t + lag] - m);
        }
        acc / n as f64
    };
    let g0 = gamma(0);
    if g0 <= 0.0 {
        return (n as f64, true);
    }
    let mut tau = -1.0;
    let mut lag = 0;
    while lag + 1 < n {
        let pair = (gamma(lag) + gamma(lag + 1)) / g0;
        if pair <= 0.0 {
            break;
        }
        tau += 2.0 * pair;
        lag += 2;
    }
    (tau.max(1.0 / n as f64), false)
}

/// Convergence diagnostics per parameter.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Diagnostics {
    pub names: Vec<String>,
    pub iat: Vec<f64>,
    pub ess: Vec<f64>,
    pub acceptance_rate: f64,
    /// Parameters whose trace is (numerically) constant.
    pub degenerate: Vec<String>,
}

/// IAT and effective sample size for every parameter in the ensemble.
pub fn diagnostics(ens: &PosteriorEnsemble) -> Result<Diagnostics> {
    if ens.len() < 100 {
        return Err(Error::invalid(format!(
            "need at least 100 stored draws for diagnostics, have {}",
            ens.len()
        )));
    }
    let k = ens.grid.num_sections();
    let mut names = vec!["phi".to_string(), "p_s".to_string(), "omega".to_string()];
    names.extend((1..=k).map(|j| format!("alpha_{j}")));

    let series = |idx: usize| -> Vec<f64> {
        match idx {
            0 => ens.draws.iter().map(|p| p.phi).collect(),
            1 => ens.draws.iter().map(|p| p.p_s).collect(),
            2 => ens.draws.iter().map(|p| p.omega).collect(),
            j => ens.draws.iter().map(|p| p.alpha[j - 3]).collect(),
        }
    };

    let mut iat = Vec::with_capacity(names.len());
    let mut ess = Vec::with_capacity(names.len());
    let mut degenerate = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let (tau, degen) = integrated_autocorrelation_time(&series(i));
        if degen {
            degenerate.push(name.clone());
        }
        iat.push(tau);
        ess.push(ens.len() as f64 / tau);
    }
    Ok(Diagnostics {
        names,
        iat,
        ess,
        acceptance_rate: ens.acceptance_rate,
        degenerate,
    })
}

/// Raw draws as CSV: `phi,p_s,omega,alpha_1..alpha_K,energy`.
pub fn draws_to_csv(ens: &PosteriorEnsemble) -> String {
    let k = ens.grid.num_sections();
    let mut out = String::from("phi,p_s,omega");
    for j in 1..=k {
        out.push_str(&format!(",alpha_{j}"));
    }
    out.push_str(",energy\n");
    for (p, u) in ens.draws.iter().zip(&ens.energies) {
        out.push_str(&format!("{},{},{}", p.phi, p.p_s, p.omega));
        for a in &p.alpha {
            out.push_str(&format!(",{a}"));
        }
        out.push_str(&format!(",{u}\n"));
    }
    out
}

/// Chronology bands as CSV: `depth,mean,lo95,hi95`.
pub fn chronology_to_csv(bands: &[DepthBand]) -> String {
    let mut out = String::from("depth,mean,lo95,hi95\n");
    for b in bands {
        out.push_str(&format!("{},{},{},{}\n", b.depth, b.mean, b.lo95, b.hi95));
    }
    out
}
