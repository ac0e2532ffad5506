//! Piecewise-linear age-depth function over equal-length sections.
//!
//! Depth is divided into K sections of length `dc` starting at the surface.
//! Each section has a positive accumulation slope (yr/cm); the age at any
//! depth is the running sum of full sections plus the partial section above
//! the query depth. Age at depth 0 is 0 (years before core collection).
//!
//! Slopes come from a gamma-autoregressive process over innovations
//! `alpha_j` with a memory parameter `omega`, anchored at the deepest
//! section: `m_K = alpha_K`, then `m_j = omega m_{j+1} + (1-omega) alpha_j`
//! moving up. The reversed recursion (anchored at the top) exists in related
//! chronology software; [`slopes_from_innovations_reversed`] provides it as a
//! documented switch, but nothing in this crate uses it by default.

use crate::{Error, Result};

/// Uniform section grid: boundaries `0, dc, 2 dc, ..., K dc`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SectionGrid {
    dc: f64,
    k: usize,
}

impl SectionGrid {
    pub fn new(dc: f64, k: usize) -> Result<Self> {
        if !(dc > 0.0) {
            return Err(Error::invalid("section length must be positive"));
        }
        if k == 0 {
            return Err(Error::invalid("grid needs at least one section"));
        }
        Ok(SectionGrid { dc, k })
    }

    /// Smallest grid of `dc`-length sections whose deepest boundary reaches
    /// `max_depth`.
    pub fn covering(max_depth: f64, dc: f64) -> Result<Self> {
        if !(dc > 0.0) {
            return Err(Error::invalid("section length must be positive"));
        }
        if !(max_depth > 0.0) {
            return Err(Error::invalid("maximum depth must be positive"));
        }
        let k = (max_depth / dc).ceil() as usize;
        SectionGrid::new(dc, k.max(1))
    }

    pub fn dc(&self) -> f64 {
        self.dc
    }

    /// Number of sections K.
    pub fn num_sections(&self) -> usize {
        self.k
    }

    /// Deepest boundary `c_K`.
    pub fn max_depth(&self) -> f64 {
        self.k as f64 * self.dc
    }

    /// Boundary `c_i`.
    pub fn boundary(&self, i: usize) -> f64 {
        i as f64 * self.dc
    }

    pub fn contains(&self, depth: f64) -> bool {
        (0.0..=self.max_depth()).contains(&depth)
    }
}

/// Which end of the core anchors the slope-memory recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SlopeMemory {
    /// `m_K = alpha_K`, then `m_j = omega m_{j+1} + (1-omega) alpha_j`
    /// moving toward the surface. The default.
    DeepAnchored,
    /// `m_1 = alpha_1`, then `m_j = omega m_{j-1} + (1-omega) alpha_j`
    /// moving downward, so fitted slopes propagate into deeper sections.
    TopAnchored,
}

impl Default for SlopeMemory {
    fn default() -> Self {
        SlopeMemory::DeepAnchored
    }
}

impl SlopeMemory {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "deep" => Ok(SlopeMemory::DeepAnchored),
            "top" => Ok(SlopeMemory::TopAnchored),
            other => Err(Error::invalid(format!(
                "unknown slope-memory anchor `{other}` (deep|top)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SlopeMemory::DeepAnchored => "deep",
            SlopeMemory::TopAnchored => "top",
        }
    }

    pub fn slopes(&self, alpha: &[f64], omega: f64) -> Result<Vec<f64>> {
        match self {
            SlopeMemory::DeepAnchored => slopes_from_innovations(alpha, omega),
            SlopeMemory::TopAnchored => slopes_from_innovations_reversed(alpha, omega),
        }
    }
}

/// Builds slopes from gamma-AR innovations, anchored at the deepest section.
pub fn slopes_from_innovations(alpha: &[f64], omega: f64) -> Result<Vec<f64>> {
    if alpha.is_empty() {
        return Err(Error::invalid("no innovations"));
    }
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::invalid(format!("memory parameter {omega} outside [0,1]")));
    }
    if let Some(bad) = alpha.iter().find(|a| !(**a > 0.0)) {
        return Err(Error::invalid(format!("non-positive innovation {bad}")));
    }
    let k = alpha.len();
    let mut m = vec![0.0; k];
    m[k - 1] = alpha[k - 1];
    for j in (0..k - 1).rev() {
        m[j] = omega * m[j + 1] + (1.0 - omega) * alpha[j];
    }
    Ok(m)
}

/// The reversed recursion (anchored at the top section): `m_1 = alpha_1`,
/// `m_j = omega m_{j-1} + (1-omega) alpha_j`.
pub fn slopes_from_innovations_reversed(alpha: &[f64], omega: f64) -> Result<Vec<f64>> {
    if alpha.is_empty() {
        return Err(Error::invalid("no innovations"));
    }
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::invalid(format!("memory parameter {omega} outside [0,1]")));
    }
    if let Some(bad) = alpha.iter().find(|a| !(**a > 0.0)) {
        return Err(Error::invalid(format!("non-positive innovation {bad}")));
    }
    let k = alpha.len();
    let mut m = vec![0.0; k];
    m[0] = alpha[0];
    for j in 1..k {
        m[j] = omega * m[j - 1] + (1.0 - omega) * alpha[j];
    }
    Ok(m)
}

/// An evaluated age-depth function: grid, per-section slopes, memory.
#[derive(Debug, Clone, PartialEq)]
pub struct AgeDepthFunction {
    grid: SectionGrid,
    slopes: Vec<f64>,
    omega: f64,
    /// cum_slopes[i] = sum of slopes[0..i]
    cum_slopes: Vec<f64>,
}

impl AgeDepthFunction {
    pub fn new(grid: SectionGrid, slopes: Vec<f64>, omega: f64) -> Result<Self> {
        if slopes.len() != grid.num_sections() {
            return Err(Error::invalid(format!(
                "{} slopes for {} sections",
                slopes.len(),
                grid.num_sections()
            )));
        }
        if let Some(bad) = slopes.iter().find(|m| !(**m > 0.0)) {
            return Err(Error::invalid(format!("non-positive slope {bad}")));
        }
        if !(0.0..=1.0).contains(&omega) {
            return Err(Error::invalid(format!("memory parameter {omega} outside [0,1]")));
        }
        let mut cum_slopes = Vec::with_capacity(slopes.len() + 1);
        let mut acc = 0.0;
        cum_slopes.push(0.0);
        for m in &slopes {
            acc += m;
            cum_slopes.push(acc);
        }
        Ok(AgeDepthFunction {
            grid,
            slopes,
            omega,
            cum_slopes,
        })
    }

    /// Builds the slopes from innovations first.
    pub fn from_innovations(grid: SectionGrid, alpha: &[f64], omega: f64) -> Result<Self> {
        let slopes = slopes_from_innovations(alpha, omega)?;
        AgeDepthFunction::new(grid, slopes, omega)
    }

    pub fn grid(&self) -> &SectionGrid {
        &self.grid
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Age (yr before collection) at depth `d` cm.
    pub fn age_at(&self, d: f64) -> Result<f64> {
        if !d.is_finite() || d < 0.0 || d > self.grid.max_depth() {
            return Err(Error::invalid(format!(
                "depth {d} outside the modeled range [0, {}]",
                self.grid.max_depth()
            )));
        }
        let dc = self.grid.dc();
        let idx = ((d / dc).floor() as usize).min(self.grid.num_sections() - 1);
        Ok(dc * self.cum_slopes[idx] + self.slopes[idx] * (d - idx as f64 * dc))
    }

    /// Age at the deepest boundary `c_K` (the model's full extent).
    pub fn age_at_max(&self) -> f64 {
        self.grid.dc() * self.cum_slopes[self.grid.num_sections()]
    }
}
