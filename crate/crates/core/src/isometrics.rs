//! Lines of constant accuracy, net benefit or Brier loss in ROC space.

use serde::{Deserialize, Serialize};

use crate::cost::loss_cp;
use crate::dataset::Priors;
use crate::decision::{net_benefit, UtilityScheme};
use crate::error::{Error, Result};
use crate::roc::Rates;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Accuracy,
    NetBenefit,
    BrierLoss,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::NetBenefit => "net_benefit",
            Metric::BrierLoss => "brier_loss",
        }
    }
}

/// `tpr = gradient * fpr + intercept`, not clipped to the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocLine {
    pub gradient: f64,
    pub intercept: f64,
    pub metric: Metric,
    pub level: f64,
    pub t: Option<f64>,
}

impl RocLine {
    pub fn tpr_at(&self, fpr: f64) -> f64 {
        self.gradient * fpr + self.intercept
    }
}

fn open_threshold(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "isometrics need a threshold strictly inside (0, 1), got {t}"
        )))
    }
}

/// Value of `metric` at a point in ROC space. Net benefit uses DCA utilities;
/// `t` is ignored for accuracy.
pub fn metric_value(metric: Metric, rates: Rates, priors: Priors, t: f64) -> Result<f64> {
    match metric {
        Metric::Accuracy => Ok(priors.pi_p * rates.tpr + priors.pi_n * (1.0 - rates.fpr)),
        Metric::NetBenefit => net_benefit(rates, priors, t, UtilityScheme::Dca),
        Metric::BrierLoss => Ok(loss_cp(rates, priors, t)),
    }
}

/// `dTPR/dFPR` shared by net benefit and Brier loss isometrics at `t`.
pub fn isometric_gradient(t: f64, priors: Priors) -> Result<f64> {
    open_threshold(t)?;
    Ok(priors.pi_n * t / (priors.pi_p * (1.0 - t)))
}

pub fn isometric_line(
    metric: Metric,
    level: f64,
    t: Option<f64>,
    priors: Priors,
) -> Result<RocLine> {
    let (gradient, intercept, t) = match metric {
        Metric::Accuracy => (
            priors.pi_n / priors.pi_p,
            (level - priors.pi_n) / priors.pi_p,
            None,
        ),
        Metric::NetBenefit | Metric::BrierLoss => {
            let t = t.ok_or_else(|| {
                Error::Domain(format!("{} isometrics need a threshold", metric.name()))
            })?;
            let gradient = isometric_gradient(t, priors)?;
            let intercept = if metric == Metric::NetBenefit {
                level / priors.pi_p
            } else {
                1.0 - level / (2.0 * (1.0 - t) * priors.pi_p)
            };
            (gradient, intercept, Some(t))
        }
    };
    Ok(RocLine {
        gradient,
        intercept,
        metric,
        level,
        t,
    })
}

/// The isometric through `rates`.
pub fn isometric_through(
    metric: Metric,
    rates: Rates,
    t: Option<f64>,
    priors: Priors,
) -> Result<RocLine> {
    let level = metric_value(metric, rates, priors, t.unwrap_or(0.5))?;
    isometric_line(metric, level, t, priors)
}
