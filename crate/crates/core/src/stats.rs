//! Descriptive statistics and least-squares fitting.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::model::{DerivedTrial, ShotKind};
use crate::variants::{model_design_row, ModelKind, PointingTrial, TrialRef};

pub fn mean(values: &[f64]) -> Result<f64> {
    let first = *values.first().ok_or(Error::Empty { what: "values" })?;
    if values.iter().all(|&v| v == first) {
        return Ok(first);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Standard deviation with divisor `n`.
pub fn population_sd(values: &[f64]) -> Result<f64> {
    let m = mean(values)?;
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return Ok(0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Ok(libm::sqrt(ss / values.len() as f64))
}

/// A group of trials; a `None` field is marginalized over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupKey {
    pub person_id: Option<u32>,
    pub shot: Option<ShotKind>,
}

impl GroupKey {
    pub fn new(person_id: Option<u32>, shot: Option<ShotKind>) -> Result<Self> {
        if person_id.is_none() && shot.is_none() {
            return Err(Error::Usage(String::from(
                "group key needs a person, a shot, or both",
            )));
        }
        Ok(GroupKey { person_id, shot })
    }

    fn matches(&self, t: &DerivedTrial) -> bool {
        self.person_id.is_none_or(|p| p == t.base.person_id)
            && self.shot.is_none_or(|s| s == t.base.shot)
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.person_id, self.shot) {
            (Some(p), Some(s)) => write!(f, "person {p} {s}"),
            (Some(p), None) => write!(f, "person {p}"),
            (None, Some(s)) => write!(f, "all players {s}"),
            (None, None) => f.write_str("all trials"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grouping {
    PersonShot,
    ShotOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupStats {
    pub key: GroupKey,
    pub n: usize,
    pub mean_id: f64,
    pub sd_id: f64,
    pub mean_mt: f64,
    pub sd_mt: f64,
    pub mean_ir: f64,
}

impl GroupStats {
    pub fn of(key: GroupKey, trials: &[DerivedTrial]) -> Result<Self> {
        let members: Vec<&DerivedTrial> = trials.iter().filter(|t| key.matches(t)).collect();
        if members.is_empty() {
            return Err(Error::Empty { what: "group" }.in_group(key.to_string()));
        }
        let ids: Vec<f64> = members.iter().map(|t| t.id_bits).collect();
        let mts: Vec<f64> = members.iter().map(|t| t.base.movement_time_s).collect();
        let irs: Vec<f64> = members.iter().map(|t| t.info_rate_bps).collect();
        Ok(GroupStats {
            key,
            n: members.len(),
            mean_id: mean(&ids)?,
            sd_id: population_sd(&ids)?,
            mean_mt: mean(&mts)?,
            sd_mt: population_sd(&mts)?,
            mean_ir: mean(&irs)?,
        })
    }
}

/// Aggregates per (person, shot) or per shot, ordered by person then
/// Drive, Drop, Lob, Boast.
pub fn group_stats(trials: &[DerivedTrial], grouping: Grouping) -> Result<Vec<GroupStats>> {
    if trials.is_empty() {
        return Err(Error::Empty { what: "trial set" });
    }
    let mut keys: BTreeMap<GroupKey, ()> = BTreeMap::new();
    for t in trials {
        let key = match grouping {
            Grouping::PersonShot => GroupKey {
                person_id: Some(t.base.person_id),
                shot: Some(t.base.shot),
            },
            Grouping::ShotOnly => GroupKey {
                person_id: None,
                shot: Some(t.base.shot),
            },
        };
        keys.insert(key, ());
    }
    keys.into_keys()
        .map(|k| GroupStats::of(k, trials))
        .collect()
}

/// A fitted line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub pearson_r: f64,
    pub r_squared: f64,
    pub n: usize,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WelfordFit {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
    pub r_squared: f64,
    pub n: usize,
}

impl WelfordFit {
    pub fn predict(&self, x1: f64, x2: f64) -> f64 {
        self.a + self.b1 * x1 + self.b2 * x2
    }
}

struct Moments {
    n: usize,
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    sxy: f64,
    syy: f64,
}

fn moments(points: &[(f64, f64)]) -> Result<Moments> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let mean_x = mean(&xs)?;
    let mean_y = mean(&ys)?;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    Ok(Moments {
        n: points.len(),
        mean_x,
        mean_y,
        sxx,
        sxy,
        syy,
    })
}

fn all_equal(values: impl Iterator<Item = f64>) -> bool {
    let mut it = values;
    match it.next() {
        Some(first) => it.all(|v| v == first),
        None => true,
    }
}

/// Least-squares line through `(x, y)` points.
///
/// When every `y` is identical the slope is zero and both `pearson_r` and
/// `r_squared` are reported as 0 (correlation is undefined there).
pub fn ols_simple(points: &[(f64, f64)]) -> Result<LinearFit> {
    let m = moments(points)?;
    if all_equal(points.iter().map(|p| p.0)) {
        return Err(Error::DegenerateDesign { column: "x" });
    }
    let slope = m.sxy / m.sxx;
    let intercept = m.mean_y - slope * m.mean_x;
    let r = if all_equal(points.iter().map(|p| p.1)) {
        0.0
    } else {
        (m.sxy / libm::sqrt(m.sxx * m.syy)).clamp(-1.0, 1.0)
    };
    Ok(LinearFit {
        slope,
        intercept,
        pearson_r: r,
        r_squared: r * r,
        n: m.n,
    })
}

pub fn pearson_r(points: &[(f64, f64)]) -> Result<f64> {
    let m = moments(points)?;
    if all_equal(points.iter().map(|p| p.0)) {
        return Err(Error::UndefinedCorrelation { axis: "x" });
    }
    if all_equal(points.iter().map(|p| p.1)) {
        return Err(Error::UndefinedCorrelation { axis: "y" });
    }
    Ok((m.sxy / libm::sqrt(m.sxx * m.syy)).clamp(-1.0, 1.0))
}

const COLUMN_NAMES: [&str; 3] = ["intercept", "x1", "x2"];

/// Least squares for `y = a + b1 * x1 + b2 * x2` by Householder QR of the
/// `[1, x1, x2]` design.
pub fn ols_two_predictor(rows: &[(f64, f64, f64)]) -> Result<WelfordFit> {
    let n = rows.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    // Column-major design and response.
    let mut cols: [Vec<f64>; 3] = [
        rows.iter().map(|_| 1.0).collect(),
        rows.iter().map(|r| r.0).collect(),
        rows.iter().map(|r| r.1).collect(),
    ];
    let mut y: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let norms: [f64; 3] = core::array::from_fn(|j| norm(&cols[j]));

    let mut r = [[0.0f64; 3]; 3];
    for j in 0..3 {
        // Householder reflector zeroing cols[j][j+1..].
        let alpha = norm(&cols[j][j..]);
        if alpha <= 1e-10 * norms[j] || alpha == 0.0 {
            return Err(Error::DegenerateDesign {
                column: COLUMN_NAMES[j],
            });
        }
        let alpha = if cols[j][j] > 0.0 { -alpha } else { alpha };
        let mut v: Vec<f64> = cols[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        let reflect = |target: &mut [f64]| {
            let dot: f64 = v.iter().zip(target.iter()).map(|(a, b)| a * b).sum();
            let scale = 2.0 * dot / vnorm2;
            for (t, vi) in target.iter_mut().zip(&v) {
                *t -= scale * vi;
            }
        };
        for col in cols.iter_mut().skip(j) {
            reflect(&mut col[j..]);
        }
        reflect(&mut y[j..]);
        for (k, col) in cols.iter().enumerate().skip(j) {
            r[j][k] = col[j];
        }
    }

    // Back substitution on R beta = Q^T y.
    let mut beta = [0.0f64; 3];
    for i in (0..3).rev() {
        let s: f64 = ((i + 1)..3).map(|k| r[i][k] * beta[k]).sum();
        beta[i] = (y[i] - s) / r[i][i];
    }

    let fit = WelfordFit {
        a: beta[0],
        b1: beta[1],
        b2: beta[2],
        r_squared: 0.0,
        n,
    };
    let ys: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let my = mean(&ys)?;
    let sst: f64 = ys.iter().map(|v| (v - my) * (v - my)).sum();
    let sse: f64 = rows
        .iter()
        .map(|&(x1, x2, y)| {
            let e = y - fit.predict(x1, x2);
            e * e
        })
        .sum();
    let r_squared = if sst > 0.0 {
        (1.0 - sse / sst).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(WelfordFit { r_squared, ..fit })
}

fn norm(v: &[f64]) -> f64 {
    // Scaled to avoid overflow on large coordinates.
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = v.iter().map(|x| (x / scale) * (x / scale)).sum();
    scale * libm::sqrt(s)
}

/// The result of fitting one model.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FitResult {
    Linear(LinearFit),
    Welford(WelfordFit),
}

impl FitResult {
    pub fn r_squared(&self) -> f64 {
        match self {
            FitResult::Linear(f) => f.r_squared,
            FitResult::Welford(f) => f.r_squared,
        }
    }
}

/// Trials a model can be fitted to.
#[derive(Debug, Clone, Copy)]
pub enum TrialSet<'a> {
    Pointing(&'a [PointingTrial]),
    Squash(&'a [DerivedTrial]),
}

impl<'a> TrialSet<'a> {
    fn refs(&self) -> Vec<TrialRef<'a>> {
        match *self {
            TrialSet::Pointing(ts) => ts.iter().map(TrialRef::Pointing).collect(),
            TrialSet::Squash(ts) => ts.iter().map(TrialRef::Squash).collect(),
        }
    }
}

/// Builds the design for `kind` and fits it by least squares.
pub fn fit_model(kind: ModelKind, trials: TrialSet<'_>) -> Result<FitResult> {
    let refs = trials.refs();
    if refs.is_empty() {
        return Err(Error::Empty { what: "trial set" });
    }
    let mut design = Vec::with_capacity(refs.len());
    for t in &refs {
        design.push((model_design_row(kind, *t)?, t.movement_time_s()));
    }
    match kind.predictor_count() {
        1 => {
            let points: Vec<(f64, f64)> = design.iter().map(|(x, y)| (x[0], *y)).collect();
            ols_simple(&points).map(FitResult::Linear)
        }
        _ => {
            let rows: Vec<(f64, f64, f64)> = design.iter().map(|(x, y)| (x[0], x[1], *y)).collect();
            ols_two_predictor(&rows).map(FitResult::Welford)
        }
    }
}
