//! Net benefit, decision curves and their comparison curves.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Priors};
use crate::error::{Error, Result};
use crate::roc::{Rates, RocCurve, ScoreIndex};

/// How the class utilities `u_P(t)` and `u_N(t)` depend on the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilityScheme {
    /// `u_P = 1`, `u_N = t / (1 - t)`. Undefined at `t = 1`.
    Dca,
    /// `u_P = 2(1 - t)`, `u_N = 2t`: the costs behind the Brier curve.
    BrierScaled,
    /// Threshold-independent class utilities.
    Explicit { u_pos: f64, u_neg: f64 },
}

impl UtilityScheme {
    pub fn explicit(u_pos: f64, u_neg: f64) -> Result<Self> {
        if !(u_pos >= 0.0 && u_neg >= 0.0) || u_pos + u_neg == 0.0 {
            return Err(Error::Domain(format!(
                "explicit utilities must be non-negative and not both zero, got ({u_pos}, {u_neg})"
            )));
        }
        Ok(UtilityScheme::Explicit { u_pos, u_neg })
    }

    /// `(u_P(t), u_N(t))`.
    pub fn utilities(&self, t: f64) -> Result<(f64, f64)> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("threshold {t} outside [0, 1]")));
        }
        match *self {
            UtilityScheme::Dca => {
                if t >= 1.0 {
                    return Err(Error::Domain(
                        "net benefit is undefined at t = 1 under the DCA scheme".into(),
                    ));
                }
                Ok((1.0, t / (1.0 - t)))
            }
            UtilityScheme::BrierScaled => Ok((2.0 * (1.0 - t), 2.0 * t)),
            UtilityScheme::Explicit { u_pos, u_neg } => Ok((u_pos, u_neg)),
        }
    }
}

/// Strictly increasing evaluation points in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ThresholdGrid {
    values: Vec<f64>,
}

impl ThresholdGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Grid("grid is empty".into()));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Grid(format!("grid value {v} outside [0, 1]")));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Grid(
                "grid values must be strictly increasing".into(),
            ));
        }
        Ok(Self { values })
    }

    /// `start, start + step, ...` up to `stop`, which is included when it is
    /// reached within 1e-12. Values are rounded to 12 decimals.
    pub fn range(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Grid(format!("step must be positive, got {step}")));
        }
        if !(start.is_finite() && stop.is_finite()) || stop < start {
            return Err(Error::Grid(format!("bad bounds {start}:{stop}")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        let mut values = Vec::with_capacity(count + 1);
        for k in 0..=count {
            let v = start + k as f64 * step;
            if v > stop + 1e-12 {
                break;
            }
            values.push(((v * 1e12).round() / 1e12).min(stop));
        }
        Self::new(values)
    }

    /// 0.00 to 0.99 in steps of 0.005.
    pub fn default_thresholds() -> Self {
        Self::range(0.0, 0.99, 0.005).expect("static grid is valid")
    }

    /// 0.0 to 1.0 in steps of 0.005.
    pub fn default_costs() -> Self {
        Self::range(0.0, 1.0, 0.005).expect("static grid is valid")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step_hint(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    Model,
    TreatAll,
    TreatNone,
    UpperEnvelope,
    Brier,
    LowerEnvelope,
    AllPositive,
    AllNegative,
    Component,
}

impl Series {
    pub fn name(self) -> &'static str {
        match self {
            Series::Model => "model",
            Series::TreatAll => "treat_all",
            Series::TreatNone => "treat_none",
            Series::UpperEnvelope => "upper_envelope",
            Series::Brier => "brier",
            Series::LowerEnvelope => "lower_envelope",
            Series::AllPositive => "all_positive",
            Series::AllNegative => "all_negative",
            Series::Component => "component",
        }
    }
}

/// A curve sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub series: Series,
    pub priors: Priors,
}

impl Curve {
    pub fn from_fn<F>(
        grid: &ThresholdGrid,
        series: Series,
        priors: Priors,
        mut f: F,
    ) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let ys = grid
            .values()
            .iter()
            .map(|&t| f(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            xs: grid.values().to_vec(),
            ys,
            series,
            priors,
        })
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Net benefit divided by the positive prior.
    pub fn standardized(&self) -> Curve {
        Curve {
            ys: self
                .ys
                .iter()
                .map(|&y| standardized_net_benefit(y, self.priors.pi_p))
                .collect(),
            ..self.clone()
        }
    }
}

/// `u_P(t) * pi_P * TPR - u_N(t) * pi_N * FPR`.
pub fn net_benefit(rates: Rates, priors: Priors, t: f64, scheme: UtilityScheme) -> Result<f64> {
    let (u_pos, u_neg) = scheme.utilities(t)?;
    Ok(u_pos * priors.pi_p * rates.tpr - u_neg * priors.pi_n * rates.fpr)
}

/// Net benefit of the model when thresholding at each grid value.
pub fn decision_curve(
    data: &Dataset,
    grid: &ThresholdGrid,
    scheme: UtilityScheme,
) -> Result<Curve> {
    let index = ScoreIndex::new(data);
    let priors = data.priors();
    Curve::from_fn(grid, Series::Model, priors, |t| {
        net_benefit(index.rates_at(t), priors, t, scheme)
    })
}

/// Returns `(treat_all, treat_none)`.
pub fn baseline_decision_curves(
    priors: Priors,
    grid: &ThresholdGrid,
    scheme: UtilityScheme,
) -> Result<(Curve, Curve)> {
    let treat_all = Curve::from_fn(grid, Series::TreatAll, priors, |t| {
        net_benefit(Rates::ALL_POSITIVE, priors, t, scheme)
    })?;
    let treat_none = Curve::from_fn(grid, Series::TreatNone, priors, |t| {
        scheme.utilities(t)?;
        Ok(0.0)
    })?;
    Ok((treat_all, treat_none))
}

/// Net benefit attainable at each threshold by a perfectly calibrated
/// version of the model: the best hull vertex at that threshold.
///
/// The maximum over every operating point is always attained on the hull,
/// so only hull vertices are scanned.
pub fn upper_envelope_decision_curve(
    hull: &RocCurve,
    priors: Priors,
    grid: &ThresholdGrid,
    scheme: UtilityScheme,
) -> Result<Curve> {
    if !hull.is_hull {
        return Err(Error::NotHull);
    }
    Curve::from_fn(grid, Series::UpperEnvelope, priors, |t| {
        let mut best = f64::NEG_INFINITY;
        for rates in hull.rates() {
            best = best.max(net_benefit(rates, priors, t, scheme)?);
        }
        Ok(best)
    })
}

pub fn standardized_net_benefit(nb: f64, pi_p: f64) -> f64 {
    nb / pi_p
}
