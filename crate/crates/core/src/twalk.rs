//! Self-adjusting MCMC: the t-walk.
//!
//! The sampler keeps a pair of points (x, x') and targets the product
//! density exp(-U(x)) exp(-U(x')). Each iteration proposes a replacement for
//! one point of the pair using the other as a helper, through one of four
//! scale-free kernels (walk, traverse, blow, hop) with fixed published
//! weights and shape constants — there is nothing to tune per problem. The
//! recorded chain is the trajectory of the first point.
//!
//! Kernel weights 0.4918/0.4918/0.0082/0.0082, walk parameter a_w = 1.5,
//! traverse parameter a_t = 6, and an average of 4 coordinates moved per
//! proposal are the reference values; they are deliberately not exposed as
//! configuration.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::data::CoreDataset;
use crate::inference::{PlumModel, PlumParameters, PriorConfig};
use crate::agedepth::SectionGrid;
use crate::physics::DecayConstants;
use crate::{Error, Result};

const AW: f64 = 1.5;
const AT: f64 = 6.0;
const N1PHI: f64 = 4.0;
/// Cumulative kernel weights: walk, traverse, blow, hop.
const KERNEL_CUM: [f64; 4] = [0.4918, 0.9836, 0.9918, 1.0];

/// How many prior draws `initial_points` will try per point before giving up.
const INIT_RETRY_CAP: usize = 1000;

/// Burn-in and thinning applied to the recorded trajectory.
#[derive(Debug, Clone, Copy)]
pub struct TwalkOptions {
    /// Fraction of iterations discarded from the front.
    pub burn_in_frac: f64,
    /// Keep every n-th post-burn-in draw; `None` means every (dimension)-th.
    pub thin: Option<usize>,
}

impl Default for TwalkOptions {
    fn default() -> Self {
        TwalkOptions {
            burn_in_frac: 0.2,
            thin: None,
        }
    }
}

/// A finished run: stored draws plus bookkeeping.
#[derive(Debug, Clone)]
pub struct Chain {
    pub draws: Vec<Vec<f64>>,
    pub energies: Vec<f64>,
    pub dim: usize,
    pub seed: u64,
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub acceptance_rate: f64,
}

/// The two live points and their energies.
struct PairState {
    x: Vec<f64>,
    xp: Vec<f64>,
    u: f64,
    up: f64,
}

struct Proposal {
    y: Vec<f64>,
    nphi: usize,
    /// Everything in the log acceptance probability except -U(y) + U(old).
    log_correction: f64,
    /// Proposal must additionally differ from the helper in every coordinate.
    needs_distinct: bool,
}

fn walk_z(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen();
    (AW / (1.0 + AW)) * (AW * u * u + 2.0 * u - 1.0)
}

fn traverse_beta(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    if u < (AT - 1.0) / (2.0 * AT) {
        v.powf(1.0 / (AT + 1.0))
    } else {
        v.powf(1.0 / (1.0 - AT))
    }
}

/// One t-walk proposal for replacing `old` while `helper` stays fixed.
fn propose(rng: &mut ChaCha8Rng, old: &[f64], helper: &[f64], pphi: f64) -> Proposal {
    let n = old.len();
    let kernel: f64 = rng.gen();
    let phi: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < pphi).collect();
    let nphi = phi.iter().filter(|b| **b).count();

    if kernel < KERNEL_CUM[0] {
        // Walk: slide along the difference, coordinatewise random scale.
        let mut y = old.to_vec();
        for j in 0..n {
            if phi[j] {
                y[j] = old[j] + (old[j] - helper[j]) * walk_z(rng);
            }
        }
        Proposal {
            y,
            nphi,
            log_correction: 0.0,
            needs_distinct: true,
        }
    } else if kernel < KERNEL_CUM[1] {
        // Traverse: reflect through the helper, scaled by beta.
        let beta = traverse_beta(rng);
        let mut y = old.to_vec();
        for j in 0..n {
            if phi[j] {
                y[j] = helper[j] + beta * (helper[j] - old[j]);
            }
        }
        let log_correction = if nphi == 0 {
            0.0
        } else {
            (nphi as f64 - 2.0) * beta.ln()
        };
        Proposal {
            y,
            nphi,
            log_correction,
            needs_distinct: false,
        }
    } else if kernel < KERNEL_CUM[2] {
        // Blow: gaussian jump centered at the helper, scaled by the current
        // separation of the pair over the moved coordinates.
        let sigma = max_abs_diff(&phi, helper, old);
        let mut y = old.to_vec();
        if nphi > 0 && sigma > 0.0 {
            for j in 0..n {
                if phi[j] {
                    let z: f64 = rng.sample(StandardNormal);
                    y[j] = helper[j] + sigma * z;
                }
            }
        }
        let log_correction = if nphi == 0 || sigma == 0.0 {
            0.0
        } else {
            let w_forward = gauss_neg_log(&phi, nphi, sigma, &y, helper);
            let sigma_rev = max_abs_diff(&phi, helper, &y);
            let w_reverse = gauss_neg_log(&phi, nphi, sigma_rev, old, helper);
            w_forward - w_reverse
        };
        Proposal {
            y,
            nphi,
            log_correction,
            needs_distinct: true,
        }
    } else {
        // Hop: small gaussian jump centered at the old point, scale a third
        // of the pair separation.
        let sigma = max_abs_diff(&phi, helper, old) / 3.0;
        let mut y = old.to_vec();
        if nphi > 0 && sigma > 0.0 {
            for j in 0..n {
                if phi[j] {
                    let z: f64 = rng.sample(StandardNormal);
                    y[j] = old[j] + sigma * z;
                }
            }
        }
        let log_correction = if nphi == 0 || sigma == 0.0 {
            0.0
        } else {
            let w_forward = gauss_neg_log(&phi, nphi, sigma, &y, old);
            let sigma_rev = max_abs_diff(&phi, helper, &y) / 3.0;
            let w_reverse = gauss_neg_log(&phi, nphi, sigma_rev, old, &y);
            w_forward - w_reverse
        };
        Proposal {
            y,
            nphi,
            log_correction,
            needs_distinct: true,
        }
    }
}

fn max_abs_diff(phi: &[bool], a: &[f64], b: &[f64]) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.len() {
        if phi[j] {
            m = m.max((a[j] - b[j]).abs());
        }
    }
    m
}

/// -log of an isotropic gaussian over the moved coordinates, mean `center`.
fn gauss_neg_log(phi: &[bool], nphi: usize, sigma: f64, point: &[f64], center: &[f64]) -> f64 {
    if sigma <= 0.0 {
        return f64::INFINITY;
    }
    let mut quad = 0.0;
    for j in 0..point.len() {
        if phi[j] {
            let d = point[j] - center[j];
            quad += d * d;
        }
    }
    0.5 * nphi as f64 * (2.0 * std::f64::consts::PI).ln()
        + nphi as f64 * sigma.ln()
        + 0.5 * quad / (sigma * sigma)
}

fn distinct_everywhere(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x != y)
}

/// Runs the t-walk with default burn-in (20%) and thinning (dimension).
pub fn run_twalk<E, S>(
    energy: E,
    support: S,
    x0: Vec<f64>,
    x1: Vec<f64>,
    n_iter: usize,
    seed: u64,
) -> Result<Chain>
where
    E: Fn(&[f64]) -> f64,
    S: Fn(&[f64]) -> bool,
{
    run_twalk_with(energy, support, x0, x1, n_iter, seed, &TwalkOptions::default())
}

/// Runs the t-walk with explicit burn-in/thinning options.
pub fn run_twalk_with<E, S>(
    energy: E,
    support: S,
    x0: Vec<f64>,
    x1: Vec<f64>,
    n_iter: usize,
    seed: u64,
    opts: &TwalkOptions,
) -> Result<Chain>
where
    E: Fn(&[f64]) -> f64,
    S: Fn(&[f64]) -> bool,
{
    let dim = x0.len();
    if dim == 0 || x1.len() != dim {
        return Err(Error::invalid("initial points empty or of unequal dimension"));
    }
    if n_iter == 0 {
        return Err(Error::invalid("iteration count must be positive"));
    }
    if x0 == x1 {
        return Err(Error::invalid(
            "the two initial points are identical; they must differ \
             (ideally in every coordinate)",
        ));
    }
    if !(0.0..1.0).contains(&opts.burn_in_frac) {
        return Err(Error::invalid("burn-in fraction must be in [0,1)"));
    }
    let check_energy = |x: &[f64], what: &str| -> Result<f64> {
        if !support(x) {
            return Err(Error::invalid(format!("{what} outside the support")));
        }
        let u = energy(x);
        if u.is_nan() {
            return Err(Error::Numeric(format!("energy is NaN at the {what}")));
        }
        if u.is_infinite() {
            return Err(Error::invalid(format!("{what} has infinite energy")));
        }
        Ok(u)
    };
    let u0 = check_energy(&x0, "first initial point")?;
    let u1 = check_energy(&x1, "second initial point")?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pphi = N1PHI.min(dim as f64) / dim as f64;
    let mut state = PairState {
        x: x0,
        xp: x1,
        u: u0,
        up: u1,
    };

    let burn_in = (opts.burn_in_frac * n_iter as f64).floor() as usize;
    let thin = opts.thin.unwrap_or(dim).max(1);
    let mut draws = Vec::with_capacity((n_iter - burn_in) / thin + 1);
    let mut energies = Vec::with_capacity(draws.capacity());
    let mut accepted = 0usize;

    for it in 0..n_iter {
        let move_primary = rng.gen_bool(0.5);
        let (old, helper, u_old) = if move_primary {
            (&state.x, &state.xp, state.u)
        } else {
            (&state.xp, &state.x, state.up)
        };
        let prop = propose(&mut rng, old, helper, pphi);

        let mut log_a = f64::NEG_INFINITY;
        let mut u_new = f64::INFINITY;
        if prop.nphi == 0 {
            // No coordinate moved: the proposal equals the current point.
            log_a = 0.0;
            u_new = u_old;
        } else if support(&prop.y) && (!prop.needs_distinct || distinct_everywhere(&prop.y, helper))
        {
            u_new = energy(&prop.y);
            if u_new.is_nan() {
                return Err(Error::Numeric(format!(
                    "energy returned NaN at iteration {it}"
                )));
            }
            if u_new.is_finite() {
                log_a = (u_old - u_new) + prop.log_correction;
            }
        }

        if log_a >= 0.0 || rng.gen::<f64>() < log_a.exp() {
            accepted += 1;
            if move_primary {
                state.x = prop.y;
                state.u = u_new;
            } else {
                state.xp = prop.y;
                state.up = u_new;
            }
        }

        if it >= burn_in && (it - burn_in) % thin == 0 {
            draws.push(state.x.clone());
            energies.push(state.u);
        }
    }

    Ok(Chain {
        draws,
        energies,
        dim,
        seed,
        iterations: n_iter,
        burn_in,
        thin,
        acceptance_rate: accepted as f64 / n_iter as f64,
    })
}

/// Draws two distinct in-support starting points from the priors,
/// retrying up to a cap. Uses the default (deep-anchored) slope memory;
/// see [`initial_points_for`] to match a configured model.
pub fn initial_points(
    cfg: &PriorConfig,
    grid: SectionGrid,
    ds: &CoreDataset,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let model = PlumModel::new(ds, grid, *cfg, DecayConstants::pb210())?;
    initial_points_for(&model, cfg, rng)
}

/// [`initial_points`] against an already-built model (whatever its
/// slope-memory anchor).
pub fn initial_points_for(
    model: &PlumModel,
    cfg: &PriorConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut points = Vec::with_capacity(2);
    let mut pair_attempts = 0;
    while points.len() < 2 {
        pair_attempts += 1;
        if pair_attempts > 10 {
            return Err(Error::infeasible(
                "could not find two coordinatewise-distinct starting points",
            ));
        }
        let mut found = None;
        for _ in 0..INIT_RETRY_CAP {
            let p = sample_prior(cfg, model.grid().num_sections(), rng)?;
            if model.in_support(&p) && model.energy(&p).is_finite() {
                found = Some(p.to_vec());
                break;
            }
        }
        let candidate = found.ok_or_else(|| {
            Error::infeasible(format!(
                "no in-support starting point in {INIT_RETRY_CAP} prior draws; \
                 the detection threshold a_l={} may be infeasible for these priors",
                cfg.a_l
            ))
        })?;
        // The pair must differ coordinatewise; prior draws collide with
        // probability zero, but check anyway.
        if points
            .first()
            .map(|first: &Vec<f64>| distinct_everywhere(first, &candidate))
            .unwrap_or(true)
        {
            points.push(candidate);
        }
    }
    let second = points.pop().unwrap();
    let first = points.pop().unwrap();
    Ok((first, second))
}

/// One draw of the full parameter vector from the priors.
fn sample_prior(cfg: &PriorConfig, k: usize, rng: &mut ChaCha8Rng) -> Result<PlumParameters> {
    use rand_distr::{Beta as BetaDist, Gamma as GammaDist};
    let gamma = |shape: f64, mean: f64| {
        GammaDist::new(shape, mean / shape)
            .map_err(|e| Error::invalid(format!("bad gamma prior: {e}")))
    };
    let phi_d = gamma(cfg.phi_shape, cfg.phi_mean)?;
    let ps_d = gamma(cfg.ps_shape, cfg.ps_mean)?;
    let alpha_d = gamma(cfg.alpha_shape, cfg.alpha_mean)?;
    let omega_d = BetaDist::new(cfg.omega_a, cfg.omega_b)
        .map_err(|e| Error::invalid(format!("bad beta prior: {e}")))?;
    Ok(PlumParameters {
        phi: rng.sample(phi_d),
        p_s: rng.sample(ps_d),
        omega: rng.sample(omega_d),
        alpha: (0..k).map(|_| rng.sample(alpha_d)).collect(),
    })
}
