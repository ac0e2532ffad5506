//! Core-sample data types and CSV ingestion.
//!
//! Input schema (comma-separated, UTF-8, header required):
//! `depth_cm,pb210_bqkg,sigma_bqkg,density` with an optional `thickness_cm`
//! column. The depth column is the *bottom* of the measured slice; when the
//! thickness column is absent each slice is taken to be 1 cm thick and a
//! warning is emitted wherever consecutive depths imply an unmeasured gap.
//!
//! Supported-activity files use the two-column schema `value_bqkg,sigma_bqkg`.

use crate::stats;
use crate::{Error, Result};

/// Relative tolerance for depth comparisons (duplicates, overlaps, gaps).
const DEPTH_TOL: f64 = 1e-9;

/// One measured core slice: total lead-210 concentration over
/// `(depth_bottom - thickness, depth_bottom]`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Measurement {
    /// Bottom of the slice, cm.
    pub depth_bottom: f64,
    /// Slice thickness, cm.
    pub thickness: f64,
    /// Dry mass of the slice per unit area, g/cm².
    pub density: f64,
    /// Total lead-210 concentration, Bq/kg.
    pub total_pb: f64,
    /// Reported measurement error, Bq/kg.
    pub sigma: f64,
}

impl Measurement {
    pub fn depth_top(&self) -> f64 {
        self.depth_bottom - self.thickness
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thickness > 0.0) {
            return Err(Error::invalid(format!(
                "non-positive thickness {} at depth {}",
                self.thickness, self.depth_bottom
            )));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::invalid(format!(
                "non-positive sigma {} at depth {}",
                self.sigma, self.depth_bottom
            )));
        }
        if !(self.density > 0.0) {
            return Err(Error::invalid(format!(
                "non-positive density {} at depth {}",
                self.density, self.depth_bottom
            )));
        }
        if self.depth_top() < -DEPTH_TOL * self.depth_bottom.abs().max(1.0) {
            return Err(Error::invalid(format!(
                "slice at depth {} extends above the surface (thickness {})",
                self.depth_bottom, self.thickness
            )));
        }
        if !self.total_pb.is_finite() {
            return Err(Error::invalid(format!(
                "non-finite concentration at depth {}",
                self.depth_bottom
            )));
        }
        Ok(())
    }
}

/// One estimate of the supported lead-210 concentration.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SupportedDatum {
    /// Concentration, Bq/kg.
    pub value: f64,
    /// Reported error, Bq/kg.
    pub sigma: f64,
}

impl SupportedDatum {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::invalid(format!(
                "non-positive sigma {} in supported datum",
                self.sigma
            )));
        }
        if !self.value.is_finite() {
            return Err(Error::invalid("non-finite supported value"));
        }
        Ok(())
    }
}

/// A validated core dataset: measurements ordered by depth plus any
/// designated supported-activity data. Immutable after construction.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CoreDataset {
    measurements: Vec<Measurement>,
    supported: Vec<SupportedDatum>,
    label: String,
}

impl CoreDataset {
    /// Validates ordering (strictly increasing depths) and slice disjointness.
    pub fn new(
        measurements: Vec<Measurement>,
        supported: Vec<SupportedDatum>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if measurements.is_empty() {
            return Err(Error::invalid("dataset has no measurements"));
        }
        for m in &measurements {
            m.validate()?;
        }
        for s in &supported {
            s.validate()?;
        }
        for w in measurements.windows(2) {
            let (prev, next) = (&w[0], &w[1]);
            let tol = DEPTH_TOL * prev.depth_bottom.abs().max(1.0);
            if (next.depth_bottom - prev.depth_bottom).abs() <= tol {
                return Err(Error::invalid(format!(
                    "duplicate depth {}",
                    next.depth_bottom
                )));
            }
            if next.depth_bottom < prev.depth_bottom {
                return Err(Error::invalid("measurements not sorted by depth"));
            }
            if next.depth_top() < prev.depth_bottom - tol {
                return Err(Error::invalid(format!(
                    "slices overlap: ({}, {}] and ({}, {}]",
                    prev.depth_top(),
                    prev.depth_bottom,
                    next.depth_top(),
                    next.depth_bottom
                )));
            }
        }
        Ok(CoreDataset {
            measurements,
            supported,
            label: label.into(),
        })
    }

    pub fn measurements(&self) -> &[Measurement] {
        &self.measurements
    }

    pub fn supported(&self) -> &[SupportedDatum] {
        &self.supported
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max_depth(&self) -> f64 {
        self.measurements.last().map(|m| m.depth_bottom).unwrap_or(0.0)
    }

    /// Same supported data and label, different measurement subset.
    pub fn with_measurements(&self, measurements: Vec<Measurement>) -> Result<Self> {
        CoreDataset::new(measurements, self.supported.clone(), self.label.clone())
    }
}

/// Options for [`parse_dataset`].
#[derive(Debug, Clone)]
pub struct FormatOptions {
    /// Thickness assumed when the CSV has no `thickness_cm` column, cm.
    pub default_thickness: f64,
    /// Label given to the parsed dataset.
    pub label: String,
}

impl Default for FormatOptions {
    fn default() -> Self {
        FormatOptions {
            default_thickness: 1.0,
            label: String::new(),
        }
    }
}

/// A parsed dataset plus non-fatal findings (e.g. unmeasured gaps).
#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub dataset: CoreDataset,
    pub warnings: Vec<String>,
}

fn parse_field(record: &csv::StringRecord, idx: usize, name: &str, line: u64) -> Result<f64> {
    let raw = record.get(idx).ok_or(Error::Parse {
        line,
        msg: format!("missing column `{name}`"),
    })?;
    raw.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse `{raw}` as a number in column `{name}`"),
    })
}

/// Parses the four/five-column measurement CSV into a validated dataset,
/// sorted by depth.
pub fn parse_dataset(csv_text: &str, opts: &FormatOptions) -> Result<ParseOutcome> {
    if !(opts.default_thickness > 0.0) {
        return Err(Error::invalid("default thickness must be positive"));
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(csv_text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            msg: format!("cannot read header row: {e}"),
        })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (depth_i, pb_i, sigma_i, rho_i) = match (
        col("depth_cm"),
        col("pb210_bqkg"),
        col("sigma_bqkg"),
        col("density"),
    ) {
        (Some(d), Some(p), Some(s), Some(r)) => (d, p, s, r),
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: format!(
                    "header must contain depth_cm,pb210_bqkg,sigma_bqkg,density \
                     (optional thickness_cm); got `{}`",
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            })
        }
    };
    let thick_i = col("thickness_cm");

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::Parse {
                line,
                msg: format!("malformed row: {e}"),
            }
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let m = Measurement {
            depth_bottom: parse_field(&record, depth_i, "depth_cm", line)?,
            thickness: match thick_i {
                Some(i) => parse_field(&record, i, "thickness_cm", line)?,
                None => opts.default_thickness,
            },
            density: parse_field(&record, rho_i, "density", line)?,
            total_pb: parse_field(&record, pb_i, "pb210_bqkg", line)?,
            sigma: parse_field(&record, sigma_i, "sigma_bqkg", line)?,
        };
        m.validate().map_err(|e| Error::Parse {
            line,
            msg: e.to_string(),
        })?;
        rows.push(m);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no data rows".into(),
        });
    }

    rows.sort_by(|a, b| a.depth_bottom.partial_cmp(&b.depth_bottom).unwrap());

    let mut warnings = Vec::new();
    for w in rows.windows(2) {
        let tol = DEPTH_TOL * w[0].depth_bottom.abs().max(1.0);
        if w[1].depth_top() > w[0].depth_bottom + tol {
            warnings.push(format!(
                "unmeasured gap between {} and {} cm",
                w[0].depth_bottom,
                w[1].depth_top()
            ));
        }
    }

    let dataset = CoreDataset::new(rows, Vec::new(), opts.label.clone())?;
    Ok(ParseOutcome { dataset, warnings })
}

/// Serializes a dataset back to the input CSV schema (thickness written
/// explicitly so the round trip is exact).
pub fn dataset_to_csv(ds: &CoreDataset) -> String {
    let mut out = String::from("depth_cm,pb210_bqkg,sigma_bqkg,density,thickness_cm\n");
    for m in ds.measurements() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            m.depth_bottom, m.total_pb, m.sigma, m.density, m.thickness
        ));
    }
    out
}

/// Parses the two-column supported-activity CSV (`value_bqkg,sigma_bqkg`).
pub fn parse_supported_csv(csv_text: &str) -> Result<Vec<SupportedDatum>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(csv_text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            msg: format!("cannot read header row: {e}"),
        })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (val_i, sig_i) = match (col("value_bqkg"), col("sigma_bqkg")) {
        (Some(v), Some(s)) => (v, s),
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "header must contain value_bqkg,sigma_bqkg".into(),
            })
        }
    };
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::Parse {
                line,
                msg: format!("malformed row: {e}"),
            }
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let d = SupportedDatum {
            value: parse_field(&record, val_i, "value_bqkg", line)?,
            sigma: parse_field(&record, sig_i, "sigma_bqkg", line)?,
        };
        d.validate().map_err(|e| Error::Parse {
            line,
            msg: e.to_string(),
        })?;
        out.push(d);
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no supported data rows".into(),
        });
    }
    Ok(out)
}

/// Designates the deepest `n_tail` measurements as supported-activity
/// estimates and removes them from the chronology.
///
/// The returned dataset carries the converted tail as its supported data;
/// the same list is also returned separately.
pub fn split_supported(
    ds: &CoreDataset,
    n_tail: usize,
) -> Result<(CoreDataset, Vec<SupportedDatum>)> {
    let n = ds.measurements().len();
    if n_tail == 0 || n_tail >= n {
        return Err(Error::invalid(format!(
            "supported tail count {n_tail} out of range (need 1..{})",
            n - 1
        )));
    }
    let cut = n - n_tail;
    let chronology: Vec<Measurement> = ds.measurements()[..cut].to_vec();
    let supported: Vec<SupportedDatum> = ds.measurements()[cut..]
        .iter()
        .map(|m| SupportedDatum {
            value: m.total_pb,
            sigma: m.sigma,
        })
        .collect();
    let out = CoreDataset::new(chronology, supported.clone(), ds.label().to_string())?;
    Ok((out, supported))
}

/// Mean and sample standard deviation of supported-activity estimates.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SupportedEstimate {
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

impl SupportedEstimate {
    /// A single datum gives sd = 0; flag it so callers can warn.
    pub fn is_degenerate(&self) -> bool {
        self.n < 2
    }
}

/// Unweighted mean and sample standard deviation of the supported values.
pub fn tail_supported_estimate(supported: &[SupportedDatum]) -> Result<SupportedEstimate> {
    if supported.is_empty() {
        return Err(Error::invalid("no supported data to average"));
    }
    let values: Vec<f64> = supported.iter().map(|s| s.value).collect();
    Ok(SupportedEstimate {
        mean: stats::mean(&values),
        sd: stats::sample_sd(&values),
        n: values.len(),
    })
}
