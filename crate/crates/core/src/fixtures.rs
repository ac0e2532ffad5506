//! Bundled reference datasets.
//!
//! * `hp1c` — the HP1C core (Havre-St-Pierre, Quebec; alpha spectrometry).
//!   29 contiguous 1-cm slices plus four deep background samples at 35, 40,
//!   45 and 50 cm; the usual run designates those last 4 as supported data.
//! * `sim30` — a frozen realization of the default simulation: 30 1-cm
//!   slices, constant supply 150, supported level 20, true age function
//!   `t(x) = x²/3 + x/2`. The noise realization is fixed, which is the point:
//!   tests and comparisons run against one immutable dataset, while
//!   [`crate::simulator`] generates fresh replicates. The usual run
//!   designates the last 3 samples as supported data.

use crate::data::{parse_dataset, CoreDataset, FormatOptions};

pub const HP1C_CSV: &str = include_str!("../data/hp1c.csv");
pub const SIM30_CSV: &str = include_str!("../data/sim30.csv");

/// Parsed HP1C dataset (thickness defaults to 1 cm; the 29→35 cm jump is an
/// expected gap warning).
pub fn hp1c() -> CoreDataset {
    parse_dataset(
        HP1C_CSV,
        &FormatOptions {
            default_thickness: 1.0,
            label: "HP1C".into(),
        },
    )
    .expect("bundled HP1C fixture parses")
    .dataset
}

/// Parsed frozen simulated dataset.
pub fn sim30() -> CoreDataset {
    parse_dataset(
        SIM30_CSV,
        &FormatOptions {
            default_thickness: 1.0,
            label: "sim30".into(),
        },
    )
    .expect("bundled simulated fixture parses")
    .dataset
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{split_supported, tail_supported_estimate};

    #[test]
    fn hp1c_shape_and_tail() {
        let ds = hp1c();
        assert_eq!(ds.measurements().len(), 33);
        assert_eq!(ds.max_depth(), 50.0);
        let (chron, sup) = split_supported(&ds, 4).unwrap();
        assert_eq!(chron.measurements().len(), 29);
        let vals: Vec<f64> = sup.iter().map(|s| s.value).collect();
        assert_eq!(vals, vec![11.040, 6.240, 10.150, 7.960]);
        let est = tail_supported_estimate(&sup).unwrap();
        assert!((est.mean - 8.8475).abs() < 1e-12);
        assert!((est.sd - 2.1672005752).abs() < 1e-9);
    }

    #[test]
    fn sim30_shape_and_tail() {
        let ds = sim30();
        assert_eq!(ds.measurements().len(), 30);
        let (chron, sup) = split_supported(&ds, 3).unwrap();
        assert_eq!(chron.max_depth(), 27.0);
        let vals: Vec<f64> = sup.iter().map(|s| s.value).collect();
        assert_eq!(vals, vec![23.349, 13.607, 16.825]);
        let est = tail_supported_estimate(&sup).unwrap();
        assert!((est.mean - 17.927).abs() < 1e-9);
    }

    /// The frozen noise realization must stay statistically consistent with
    /// the generating process: every value within 4 reported sigmas of the
    /// zero-noise truth.
    #[test]
    fn sim30_is_consistent_with_generating_process() {
        use crate::simulator::{simulate, SimulationSpec};
        let truth = simulate(&SimulationSpec {
            add_noise: false,
            ..SimulationSpec::default()
        })
        .unwrap();
        let fixture = sim30();
        for (t, f) in truth.measurements().iter().zip(fixture.measurements()) {
            assert_eq!(t.depth_bottom, f.depth_bottom);
            let z = (f.total_pb - t.total_pb).abs() / f.sigma;
            assert!(z < 4.0, "depth {}: {} vs truth {} ({z} sigma)", f.depth_bottom, f.total_pb, t.total_pb);
        }
    }
}
