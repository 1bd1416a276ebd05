//! Evaluation of binary classifiers across operating conditions.
//!
//! Decision curves (net benefit) and cost or Brier curves (expected loss) are
//! computed from the same labeled scores, together with their comparison
//! curves:
//!
//! - [`roc`]: operating points, the ROC convex hull and dominance.
//! - [`decision`]: net benefit, treat-all/treat-none and the upper-envelope
//!   decision curve.
//! - [`cost`]: cost lines, the lower-envelope cost curve, Brier curves and
//!   the refinement/calibration split of the Brier score.
//! - [`isometrics`]: equal-metric lines in ROC space.
//! - [`relations`]: the linear map between net benefit and Brier loss and
//!   threshold-by-threshold model comparison.
//! - [`render`]: SVG output.
//!
//! Thresholds follow one rule throughout: a sample with `score >= t` is
//! classified positive.
//!
//! ```
//! use costdca::{cost, dataset::parse_dataset};
//!
//! let data = parse_dataset([("0.1", "N"), ("0.4", "P"), ("0.35", "N"), ("0.8", "P")]).unwrap();
//! let brier = cost::brier_score(&data);
//! assert!((brier - 0.133125).abs() < 1e-12);
//! ```

pub mod cost;
pub mod dataset;
pub mod decision;
pub mod error;
pub mod isometrics;
pub mod relations;
pub mod render;
pub mod roc;

pub use dataset::{Dataset, Label, LabeledSample, Priors, SimulationSpec};
pub use decision::{Curve, Series, ThresholdGrid, UtilityScheme};
pub use error::{Error, Result};
pub use roc::{OperatingPoint, Rates, RocCurve};
