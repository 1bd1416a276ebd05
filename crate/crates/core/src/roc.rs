//! ROC operating points, the ROC convex hull and hull dominance.
//!
//! Every threshold follows the rule `score >= t` classifies as positive.

use serde::Serialize;

use crate::dataset::{Dataset, Priors};

const HULL_EPS: f64 = 1e-12;
const DOMINANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn n_pos(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn n_neg(&self) -> usize {
        self.fp + self.tn
    }

    pub fn rates(&self) -> Rates {
        Rates {
            fpr: self.fp as f64 / self.n_neg() as f64,
            tpr: self.tp as f64 / self.n_pos() as f64,
        }
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / (self.n_pos() + self.n_neg()) as f64
    }
}

/// A point in ROC space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rates {
    pub fpr: f64,
    pub tpr: f64,
}

impl Rates {
    pub const ALL_POSITIVE: Rates = Rates { fpr: 1.0, tpr: 1.0 };
    pub const ALL_NEGATIVE: Rates = Rates { fpr: 0.0, tpr: 0.0 };

    pub fn new(fpr: f64, tpr: f64) -> Self {
        Self { fpr, tpr }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    /// Lowest score classified positive. `+inf` for the all-negative point.
    pub threshold: f64,
    pub counts: ConfusionCounts,
    pub fpr: f64,
    pub tpr: f64,
}

impl OperatingPoint {
    pub fn from_counts(threshold: f64, counts: ConfusionCounts) -> Self {
        let Rates { fpr, tpr } = counts.rates();
        Self {
            threshold,
            counts,
            fpr,
            tpr,
        }
    }

    pub fn rates(&self) -> Rates {
        Rates::new(self.fpr, self.tpr)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub points: Vec<OperatingPoint>,
    pub is_hull: bool,
}

impl RocCurve {
    pub fn rates(&self) -> impl Iterator<Item = Rates> + '_ {
        self.points.iter().map(OperatingPoint::rates)
    }

    /// Trapezoidal area under the curve.
    pub fn auc(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
            .sum()
    }

    /// Highest tpr reached on the piecewise-linear curve at `fpr`.
    pub fn tpr_at(&self, fpr: f64) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for w in self.points.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            if fpr < p.fpr || fpr > q.fpr {
                continue;
            }
            let v = if q.fpr == p.fpr {
                p.tpr.max(q.tpr)
            } else {
                p.tpr + (q.tpr - p.tpr) * (fpr - p.fpr) / (q.fpr - p.fpr)
            };
            best = best.max(v);
        }
        if best == f64::NEG_INFINITY {
            // single-point curve
            self.points
                .iter()
                .filter(|p| p.fpr == fpr)
                .map(|p| p.tpr)
                .fold(f64::NEG_INFINITY, f64::max)
        } else {
            best
        }
    }
}

/// One operating point per distinct score plus the all-negative point,
/// ordered by increasing fpr then tpr.
pub fn operating_points(data: &Dataset) -> RocCurve {
    let mut sorted: Vec<_> = data.samples().to_vec();
    sorted.sort_by(|a, b| b.score.total_cmp(&a.score));
    let (n_pos, n_neg) = (data.n_pos(), data.n_neg());
    let counts = |tp: usize, fp: usize| ConfusionCounts {
        tp,
        fp,
        tn: n_neg - fp,
        fn_: n_pos - tp,
    };

    let mut points = vec![OperatingPoint::from_counts(f64::INFINITY, counts(0, 0))];
    let (mut tp, mut fp) = (0, 0);
    let mut i = 0;
    while i < sorted.len() {
        let threshold = sorted[i].score;
        while i < sorted.len() && sorted[i].score == threshold {
            if sorted[i].label.is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(OperatingPoint::from_counts(threshold, counts(tp, fp)));
    }
    RocCurve {
        points,
        is_hull: false,
    }
}

fn cross(o: &OperatingPoint, a: &OperatingPoint, b: &OperatingPoint) -> f64 {
    (a.fpr - o.fpr) * (b.tpr - o.tpr) - (a.tpr - o.tpr) * (b.fpr - o.fpr)
}

/// Upper convex hull by monotone chain. Collinear interior points are
/// dropped and, among points sharing an fpr, only the highest tpr survives
/// (except the leftmost lowest point, which anchors the chain).
pub fn convex_hull(curve: &RocCurve) -> RocCurve {
    let mut pts = curve.points.clone();
    pts.sort_by(|a, b| a.fpr.total_cmp(&b.fpr).then(a.tpr.total_cmp(&b.tpr)));
    let mut hull: Vec<OperatingPoint> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) > -HULL_EPS
        {
            hull.pop();
        }
        if let Some(last) = hull.last() {
            if last.fpr == p.fpr && last.tpr == p.tpr {
                continue;
            }
        }
        hull.push(p);
    }
    RocCurve {
        points: hull,
        is_hull: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    First,
    Second,
    Equal,
    Neither,
}

/// Compares the convex hulls of two curves on the union of their fpr
/// breakpoints.
pub fn dominance(a: &RocCurve, b: &RocCurve) -> Dominance {
    let hull_a = if a.is_hull { a.clone() } else { convex_hull(a) };
    let hull_b = if b.is_hull { b.clone() } else { convex_hull(b) };
    let mut xs: Vec<f64> = hull_a
        .points
        .iter()
        .chain(hull_b.points.iter())
        .map(|p| p.fpr)
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let (mut a_above, mut b_above) = (false, false);
    for x in xs {
        let d = hull_a.tpr_at(x) - hull_b.tpr_at(x);
        if d > DOMINANCE_TOL {
            a_above = true;
        } else if d < -DOMINANCE_TOL {
            b_above = true;
        }
    }
    match (a_above, b_above) {
        (false, false) => Dominance::Equal,
        (true, false) => Dominance::First,
        (false, true) => Dominance::Second,
        (true, true) => Dominance::Neither,
    }
}

/// Sorted per-class scores for answering "rates at threshold t" queries in
/// logarithmic time.
#[derive(Debug, Clone)]
pub struct ScoreIndex {
    pos: Vec<f64>,
    neg: Vec<f64>,
}

impl ScoreIndex {
    pub fn new(data: &Dataset) -> Self {
        let mut pos = Vec::with_capacity(data.n_pos());
        let mut neg = Vec::with_capacity(data.n_neg());
        for s in data.samples() {
            if s.label.is_positive() {
                pos.push(s.score);
            } else {
                neg.push(s.score);
            }
        }
        pos.sort_by(f64::total_cmp);
        neg.sort_by(f64::total_cmp);
        Self { pos, neg }
    }

    fn at_least(sorted: &[f64], t: f64) -> usize {
        sorted.len() - sorted.partition_point(|&s| s < t)
    }

    pub fn counts_at(&self, t: f64) -> ConfusionCounts {
        let tp = Self::at_least(&self.pos, t);
        let fp = Self::at_least(&self.neg, t);
        ConfusionCounts {
            tp,
            fp,
            tn: self.neg.len() - fp,
            fn_: self.pos.len() - tp,
        }
    }

    pub fn rates_at(&self, t: f64) -> Rates {
        self.counts_at(t).rates()
    }

    pub fn priors(&self) -> Priors {
        let n = (self.pos.len() + self.neg.len()) as f64;
        Priors {
            pi_p: self.pos.len() as f64 / n,
            pi_n: self.neg.len() as f64 / n,
        }
    }
}
