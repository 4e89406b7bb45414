//! Range statistics that can be merged across adjacent sub-ranges.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytics::li::li;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Elliptic,
    EllipticShifted,
    Hyperbolic,
    Titchmarsh,
}

/// How the main term grows with the upper end of the range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// constant · x
    Linear,
    /// constant · li(x)
    Li,
    /// constant · x / log x
    XOverLogX,
}

/// Which accumulated quantity the ratio compares with the main term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Count,
    WeightedSum,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexSum {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexSum {
    fn from(z: Complex64) -> Self {
        ComplexSum { re: z.re, im: z.im }
    }
}

impl From<ComplexSum> for Complex64 {
    fn from(z: ComplexSum) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub x_lo: u64,
    pub x_hi: u64,
    pub mode: Mode,
    pub count: u64,
    pub weighted_sum: f64,
    pub complex_sum: ComplexSum,
    pub reference_constant: f64,
    pub scale: Scale,
    pub measure: Measure,
    pub main_term: f64,
    pub ratio: f64,
    /// |complex_sum| / count, or 0 for an empty range.
    pub normalized_magnitude: f64,
    pub metadata: BTreeMap<String, String>,
}

impl StatReport {
    pub fn new(mode: Mode, x_lo: u64, x_hi: u64, reference_constant: f64, scale: Scale, measure: Measure) -> Self {
        let mut r = StatReport {
            x_lo,
            x_hi,
            mode,
            count: 0,
            weighted_sum: 0.0,
            complex_sum: ComplexSum::default(),
            reference_constant,
            scale,
            measure,
            main_term: 0.0,
            ratio: 0.0,
            normalized_magnitude: 0.0,
            metadata: BTreeMap::new(),
        };
        r.finalize();
        r
    }

    pub fn complex(&self) -> Complex64 {
        self.complex_sum.into()
    }

    pub fn add(&mut self, count: u64, weighted: f64, z: Complex64) {
        self.count += count;
        self.weighted_sum += weighted;
        self.complex_sum.re += z.re;
        self.complex_sum.im += z.im;
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    /// Recomputes the main term, ratio and normalized magnitude from the
    /// accumulated totals.
    pub fn finalize(&mut self) {
        let x = self.x_hi as f64;
        self.main_term = self.reference_constant
            * match self.scale {
                Scale::Linear => x,
                Scale::Li => {
                    if x >= 2.0 {
                        li(x)
                    } else {
                        0.0
                    }
                }
                Scale::XOverLogX => {
                    if x > 1.0 {
                        x / x.ln()
                    } else {
                        0.0
                    }
                }
            };
        let value = match self.measure {
            Measure::Count => self.count as f64,
            Measure::WeightedSum => self.weighted_sum,
        };
        self.ratio = if self.main_term != 0.0 { value / self.main_term } else { 0.0 };
        self.normalized_magnitude = if self.count > 0 {
            self.complex().norm() / self.count as f64
        } else {
            0.0
        };
    }

    /// Combines reports over adjacent ranges (in either order).
    pub fn merge(&self, other: &StatReport) -> Result<StatReport> {
        if self.mode != other.mode
            || self.scale != other.scale
            || self.measure != other.measure
            || self.reference_constant.to_bits() != other.reference_constant.to_bits()
        {
            return Err(Error::Invariant("merging reports of different kinds".into()));
        }
        let (first, second) = if self.x_lo <= other.x_lo { (self, other) } else { (other, self) };
        if first.x_hi + 1 != second.x_lo {
            return Err(Error::Invariant(format!(
                "ranges [{}, {}] and [{}, {}] are not adjacent",
                first.x_lo, first.x_hi, second.x_lo, second.x_hi
            )));
        }
        let mut out = first.clone();
        out.x_hi = second.x_hi;
        out.add(second.count, second.weighted_sum, second.complex());
        for (k, v) in &second.metadata {
            out.metadata.entry(k.clone()).or_insert_with(|| v.clone());
        }
        out.finalize();
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<StatReport> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn write_csv<W: Write>(reports: &[StatReport], w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in reports {
            wr.serialize(CsvRow::from(r))?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Vec<StatReport>> {
        let mut rd = csv::Reader::from_reader(r);
        rd.deserialize::<CsvRow>()
            .map(|row| row.map_err(Error::from).and_then(StatReport::try_from))
            .collect()
    }
}

/// Flat CSV layout: one column per field, metadata as a JSON object string.
#[derive(Serialize, Deserialize)]
struct CsvRow {
    x_lo: u64,
    x_hi: u64,
    mode: Mode,
    count: u64,
    weighted_sum: f64,
    complex_re: f64,
    complex_im: f64,
    reference_constant: f64,
    scale: Scale,
    measure: Measure,
    main_term: f64,
    ratio: f64,
    normalized_magnitude: f64,
    metadata: String,
}

impl From<&StatReport> for CsvRow {
    fn from(r: &StatReport) -> Self {
        CsvRow {
            x_lo: r.x_lo,
            x_hi: r.x_hi,
            mode: r.mode,
            count: r.count,
            weighted_sum: r.weighted_sum,
            complex_re: r.complex_sum.re,
            complex_im: r.complex_sum.im,
            reference_constant: r.reference_constant,
            scale: r.scale,
            measure: r.measure,
            main_term: r.main_term,
            ratio: r.ratio,
            normalized_magnitude: r.normalized_magnitude,
            metadata: serde_json::to_string(&r.metadata).expect("string map serializes"),
        }
    }
}

impl TryFrom<CsvRow> for StatReport {
    type Error = Error;
    fn try_from(r: CsvRow) -> Result<Self> {
        Ok(StatReport {
            x_lo: r.x_lo,
            x_hi: r.x_hi,
            mode: r.mode,
            count: r.count,
            weighted_sum: r.weighted_sum,
            complex_sum: ComplexSum { re: r.complex_re, im: r.complex_im },
            reference_constant: r.reference_constant,
            scale: r.scale,
            measure: r.measure,
            main_term: r.main_term,
            ratio: r.ratio,
            normalized_magnitude: r.normalized_magnitude,
            metadata: serde_json::from_str(&r.metadata)?,
        })
    }
}
