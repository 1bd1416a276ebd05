//! Identities linking net benefit and Brier loss, model comparison across
//! thresholds, and exhaustive envelope oracles.

use serde::Serialize;

use crate::cost::loss_cp;
use crate::dataset::{Dataset, Priors};
use crate::decision::{net_benefit, Curve, Series, ThresholdGrid, UtilityScheme};
use crate::error::{Error, Result};
use crate::roc::{Rates, ScoreIndex};

/// Deltas smaller than this count as ties.
pub const AGREEMENT_TOL: f64 = 1e-12;
const PRIOR_TOL: f64 = 1e-12;

/// DCA net benefit implied by a Brier loss at threshold `t`.
pub fn nb_from_brier_loss(bc: f64, t: f64, pi_p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Domain(format!("threshold {t} outside [0, 1)")));
    }
    Ok(pi_p - bc / (2.0 * (1.0 - t)))
}

/// One threshold of a two-model comparison. Deltas are oriented as the gain
/// of model B over model A: `delta_nb = nb_b - nb_a`, `delta_bc = bc_a - bc_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRecord {
    pub t: f64,
    pub nb_a: f64,
    pub nb_b: f64,
    pub bc_a: f64,
    pub bc_b: f64,
    pub delta_nb: f64,
    pub delta_bc: f64,
    /// Net benefit gain under the Brier-scaled utilities.
    pub delta_nb_scaled: f64,
    pub agree: bool,
}

impl ComparisonRecord {
    pub fn new(t: f64, a: Rates, b: Rates, priors: Priors) -> Result<Self> {
        let nb_a = net_benefit(a, priors, t, UtilityScheme::Dca)?;
        let nb_b = net_benefit(b, priors, t, UtilityScheme::Dca)?;
        let bc_a = loss_cp(a, priors, t);
        let bc_b = loss_cp(b, priors, t);
        let delta_nb = nb_b - nb_a;
        let delta_bc = bc_a - bc_b;
        let delta_nb_scaled = net_benefit(b, priors, t, UtilityScheme::BrierScaled)?
            - net_benefit(a, priors, t, UtilityScheme::BrierScaled)?;
        Ok(Self {
            t,
            nb_a,
            nb_b,
            bc_a,
            bc_b,
            delta_nb,
            delta_bc,
            delta_nb_scaled,
            agree: tol_sign(delta_nb) == tol_sign(delta_bc),
        })
    }
}

fn tol_sign(x: f64) -> i8 {
    if x > AGREEMENT_TOL {
        1
    } else if x < -AGREEMENT_TOL {
        -1
    } else {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub priors: Priors,
    pub grid: Vec<f64>,
    pub per_t: Vec<ComparisonRecord>,
    pub all_agree: bool,
    pub disagreements: usize,
}

impl ComparisonReport {
    fn from_records(priors: Priors, per_t: Vec<ComparisonRecord>) -> Self {
        let disagreements = per_t.iter().filter(|r| !r.agree).count();
        Self {
            priors,
            grid: per_t.iter().map(|r| r.t).collect(),
            per_t,
            all_agree: disagreements == 0,
            disagreements,
        }
    }
}

/// Compares two models scored on the same population at every grid value.
pub fn compare_models(a: &Dataset, b: &Dataset, grid: &ThresholdGrid) -> Result<ComparisonReport> {
    let (pa, pb) = (a.priors(), b.priors());
    if (pa.pi_p - pb.pi_p).abs() > PRIOR_TOL {
        return Err(Error::PriorMismatch {
            a: pa.pi_p,
            b: pb.pi_p,
        });
    }
    let (ia, ib) = (ScoreIndex::new(a), ScoreIndex::new(b));
    let per_t = grid
        .values()
        .iter()
        .map(|&t| ComparisonRecord::new(t, ia.rates_at(t), ib.rates_at(t), pa))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport::from_records(pa, per_t))
}

/// Comparison from operating points given directly per threshold.
pub fn compare_rates(priors: Priors, points: &[(f64, Rates, Rates)]) -> Result<ComparisonReport> {
    let per_t = points
        .iter()
        .map(|&(t, a, b)| ComparisonRecord::new(t, a, b, priors))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport::from_records(priors, per_t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeKind {
    /// Minimum cost line (`loss_cp`).
    LowerCost,
    /// Maximum DCA net benefit.
    UpperDecision,
}

/// Exhaustive envelope over every given operating point, for checking the
/// hull-based fast paths.
pub fn envelope_oracle(
    points: &[Rates],
    priors: Priors,
    grid: &ThresholdGrid,
    which: EnvelopeKind,
) -> Result<Curve> {
    match which {
        EnvelopeKind::LowerCost => Curve::from_fn(grid, Series::LowerEnvelope, priors, |c| {
            Ok(points
                .iter()
                .map(|&r| loss_cp(r, priors, c))
                .fold(f64::INFINITY, f64::min))
        }),
        EnvelopeKind::UpperDecision => Curve::from_fn(grid, Series::UpperEnvelope, priors, |t| {
            let mut best = f64::NEG_INFINITY;
            for &r in points {
                best = best.max(net_benefit(r, priors, t, UtilityScheme::Dca)?);
            }
            Ok(best)
        }),
    }
}
