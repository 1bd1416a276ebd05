//! Expected loss in cost space: cost lines, the lower-envelope cost curve,
//! Brier curves and the refinement/calibration split of the Brier score.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Priors};
use crate::decision::{Curve, Series, ThresholdGrid};
use crate::error::{Error, Result};
use crate::roc::{convex_hull, operating_points, OperatingPoint, Rates, RocCurve, ScoreIndex};

/// Envelope ties closer than this are reported together.
const TIE_TOL: f64 = 1e-12;

/// Misclassification costs relative to correct classification:
/// `c_pos = C_FN - C_TP`, `c_neg = C_FP - C_TN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    pub c_pos: f64,
    pub c_neg: f64,
}

impl CostParams {
    pub fn new(c_pos: f64, c_neg: f64) -> Result<Self> {
        if !(c_pos >= 0.0 && c_neg >= 0.0) || c_pos + c_neg <= 0.0 {
            return Err(Error::Domain(format!(
                "costs must be non-negative with a positive sum, got ({c_pos}, {c_neg})"
            )));
        }
        Ok(Self { c_pos, c_neg })
    }

    /// Costs summing to 2 with cost proportion `c`.
    pub fn from_proportion(c: f64) -> Self {
        Self {
            c_pos: 2.0 * (1.0 - c),
            c_neg: 2.0 * c,
        }
    }

    /// `c_neg / (c_neg + c_pos)`.
    pub fn proportion(&self) -> f64 {
        self.c_neg / (self.c_neg + self.c_pos)
    }
}

/// `c_pos * pi_P * (1 - TPR) + c_neg * pi_N * FPR`.
pub fn expected_loss(rates: Rates, priors: Priors, costs: CostParams) -> f64 {
    costs.c_pos * priors.pi_p * (1.0 - rates.tpr) + costs.c_neg * priors.pi_n * rates.fpr
}

/// Expected loss with total cost 2 split by cost proportion `c`.
pub fn loss_cp(rates: Rates, priors: Priors, c: f64) -> f64 {
    2.0 * ((1.0 - c) * priors.pi_p * (1.0 - rates.tpr) + c * priors.pi_n * rates.fpr)
}

/// Loss of a fixed operating point as a function of cost proportion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostLine {
    pub slope: f64,
    pub intercept: f64,
    pub source: Rates,
}

impl CostLine {
    pub fn from_rates(rates: Rates, priors: Priors) -> Self {
        let missed = priors.pi_p * (1.0 - rates.tpr);
        Self {
            slope: 2.0 * (priors.pi_n * rates.fpr - missed),
            intercept: 2.0 * missed,
            source: rates,
        }
    }

    pub fn at(&self, c: f64) -> f64 {
        self.intercept + self.slope * c
    }

    /// Cost proportion where two lines meet, if they are not parallel.
    pub fn intersection(&self, other: &CostLine) -> Option<f64> {
        let ds = self.slope - other.slope;
        if ds == 0.0 {
            None
        } else {
            Some((other.intercept - self.intercept) / ds)
        }
    }
}

pub fn cost_line(point: &OperatingPoint, priors: Priors) -> CostLine {
    CostLine::from_rates(point.rates(), priors)
}

/// `(all_positive, all_negative)`: the duals of ROC points (1,1) and (0,0).
pub fn baseline_cost_lines(priors: Priors) -> (CostLine, CostLine) {
    (
        CostLine::from_rates(Rates::ALL_POSITIVE, priors),
        CostLine::from_rates(Rates::ALL_NEGATIVE, priors),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopePoint {
    pub value: f64,
    pub attained_by: Vec<OperatingPoint>,
}

/// Minimum cost-line value over the hull vertices at `c`, with every vertex
/// attaining it.
pub fn lower_envelope_at(hull: &RocCurve, priors: Priors, c: f64) -> Result<EnvelopePoint> {
    if !hull.is_hull {
        return Err(Error::NotHull);
    }
    let values: Vec<f64> = hull
        .points
        .iter()
        .map(|p| loss_cp(p.rates(), priors, c))
        .collect();
    let value = values.iter().copied().fold(f64::INFINITY, f64::min);
    let attained_by = hull
        .points
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v - value <= TIE_TOL)
        .map(|(p, _)| *p)
        .collect();
    Ok(EnvelopePoint { value, attained_by })
}

pub fn lower_envelope(hull: &RocCurve, priors: Priors, grid: &ThresholdGrid) -> Result<Curve> {
    if !hull.is_hull {
        return Err(Error::NotHull);
    }
    Curve::from_fn(grid, Series::LowerEnvelope, priors, |c| {
        Ok(hull
            .rates()
            .map(|r| loss_cp(r, priors, c))
            .fold(f64::INFINITY, f64::min))
    })
}

/// Exact area under the lower envelope over `c` in `[0, 1]`.
///
/// The envelope is piecewise linear with kinks where cost lines of adjacent
/// hull vertices cross, so trapezoids between those kinks are exact.
pub fn lower_envelope_area(hull: &RocCurve, priors: Priors) -> Result<f64> {
    if !hull.is_hull {
        return Err(Error::NotHull);
    }
    let lines: Vec<CostLine> = hull
        .rates()
        .map(|r| CostLine::from_rates(r, priors))
        .collect();
    let mut knots = vec![0.0, 1.0];
    knots.extend(
        lines
            .windows(2)
            .filter_map(|w| w[0].intersection(&w[1]))
            .filter(|c| (0.0..=1.0).contains(c)),
    );
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let envelope = |c: f64| lines.iter().map(|l| l.at(c)).fold(f64::INFINITY, f64::min);
    Ok(knots
        .windows(2)
        .map(|w| (w[1] - w[0]) * (envelope(w[0]) + envelope(w[1])) / 2.0)
        .sum())
}

/// Expected loss when the threshold is set equal to the cost proportion.
pub fn brier_curve(data: &Dataset, grid: &ThresholdGrid) -> Result<Curve> {
    let index = ScoreIndex::new(data);
    let priors = data.priors();
    Curve::from_fn(grid, Series::Brier, priors, |t| {
        Ok(loss_cp(index.rates_at(t), priors, t))
    })
}

/// Area under the Brier curve, integrated exactly.
///
/// Between consecutive distinct scores the rates are constant, so the curve
/// is linear there. The value at a score itself has measure zero, which makes
/// the result independent of how ties are thresholded.
pub fn brier_score(data: &Dataset) -> f64 {
    let mut scores: Vec<f64> = data.samples().iter().map(|s| s.score).collect();
    scores.push(0.0);
    scores.push(1.0);
    scores.sort_by(f64::total_cmp);
    scores.dedup();
    let index = ScoreIndex::new(data);
    let priors = data.priors();
    scores
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            // for t in (a, b) exactly the scores >= b are positive
            let rates = index.rates_at(b);
            (b - a) * (loss_cp(rates, priors, a) + loss_cp(rates, priors, b)) / 2.0
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossDecomposition {
    pub brier_score: f64,
    pub refinement: f64,
    pub calibration: f64,
    /// Brier curve minus lower envelope.
    pub gap_curve: Curve,
}

pub fn loss_decomposition(data: &Dataset, grid: &ThresholdGrid) -> Result<LossDecomposition> {
    let priors = data.priors();
    let hull = convex_hull(&operating_points(data));
    let brier = brier_curve(data, grid)?;
    let envelope = lower_envelope(&hull, priors, grid)?;
    let brier_score = brier_score(data);
    let refinement = lower_envelope_area(&hull, priors)?;
    let gap_curve = Curve {
        ys: brier
            .ys
            .iter()
            .zip(&envelope.ys)
            .map(|(b, e)| b - e)
            .collect(),
        series: Series::Component,
        ..brier
    };
    Ok(LossDecomposition {
        brier_score,
        refinement,
        calibration: brier_score - refinement,
        gap_curve,
    })
}

/// `(positive_component, negative_component)` of the Brier curve: the loss
/// from missed positives and from false alarms.
pub fn per_class_components(data: &Dataset, grid: &ThresholdGrid) -> Result<(Curve, Curve)> {
    let index = ScoreIndex::new(data);
    let priors = data.priors();
    let pos = Curve::from_fn(grid, Series::Component, priors, |t| {
        Ok(2.0 * (1.0 - t) * priors.pi_p * (1.0 - index.rates_at(t).tpr))
    })?;
    let neg = Curve::from_fn(grid, Series::Component, priors, |t| {
        Ok(2.0 * t * priors.pi_n * index.rates_at(t).fpr)
    })?;
    Ok((pos, neg))
}
