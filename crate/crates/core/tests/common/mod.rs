#![allow(dead_code)]

use costdca::dataset::{parse_dataset, Dataset, Label, LabeledSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn toy() -> Dataset {
    let scores = [
        "0.03", "0.05", "0.1", "0.20", "0.70", "0.70", "0.90", "0.90", "0.95",
    ];
    let labels = ["N", "N", "N", "P", "N", "N", "P", "N", "P"];
    parse_dataset(scores.into_iter().zip(labels)).unwrap()
}

/// Class-dependent skewed uniform scores: positives `u^0.6`, negatives
/// `u^1.6`, scaled by `sharpness` towards the centre. Tie-free with
/// overwhelming probability.
pub fn random_dataset(seed: u64, n: usize, pi_p: f64) -> Dataset {
    random_dataset_with(seed, n, pi_p, 1.0)
}

pub fn random_dataset_with(seed: u64, n: usize, pi_p: f64, sharpness: f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_pos = ((n as f64) * pi_p).round() as usize;
    let samples = (0..n)
        .map(|i| {
            let u: f64 = rng.random();
            if i < n_pos {
                LabeledSample::new(u.powf(0.6 / sharpness), Label::Positive)
            } else {
                LabeledSample::new(u.powf(1.6 * sharpness), Label::Negative)
            }
        })
        .collect();
    Dataset::new(samples).unwrap()
}

/// Same as [`random_dataset`] with scores rounded to `decimals`, producing
/// many ties.
pub fn tied_dataset(seed: u64, n: usize, pi_p: f64, decimals: i32) -> Dataset {
    let scale = 10f64.powi(decimals);
    let samples = random_dataset(seed, n, pi_p)
        .samples()
        .iter()
        .map(|s| LabeledSample::new((s.score * scale).round() / scale, s.label))
        .collect();
    Dataset::new(samples).unwrap()
}

pub fn is_tie_free(data: &Dataset) -> bool {
    let mut scores: Vec<f64> = data.samples().iter().map(|s| s.score).collect();
    scores.sort_by(f64::total_cmp);
    scores.windows(2).all(|w| w[0] < w[1])
}

/// Replaces each score by the fraction of positives among samples sharing
/// its (rounded) score, giving a perfectly calibrated dataset.
pub fn calibrated_dataset(seed: u64, n: usize, pi_p: f64) -> Dataset {
    let base = tied_dataset(seed, n, pi_p, 1);
    let mut groups: std::collections::BTreeMap<u64, (usize, usize)> = Default::default();
    for s in base.samples() {
        let e = groups.entry(s.score.to_bits()).or_default();
        e.0 += 1;
        if s.label.is_positive() {
            e.1 += 1;
        }
    }
    let samples = base
        .samples()
        .iter()
        .map(|s| {
            let (count, pos) = groups[&s.score.to_bits()];
            LabeledSample::new(pos as f64 / count as f64, s.label)
        })
        .collect();
    Dataset::new(samples).unwrap()
}

/// Mean squared error of the scores against 0/1 labels.
pub fn mse(data: &Dataset) -> f64 {
    data.samples()
        .iter()
        .map(|s| {
            let y = if s.label.is_positive() { 1.0 } else { 0.0 };
            (s.score - y).powi(2)
        })
        .sum::<f64>()
        / data.len() as f64
}

/// `(tpr, fpr)` at `t` by scanning every sample.
pub fn brute_rates(data: &Dataset, t: f64) -> (f64, f64) {
    let (mut tp, mut fp) = (0usize, 0usize);
    for s in data.samples() {
        if s.score >= t {
            if s.label.is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
        }
    }
    (
        tp as f64 / data.n_pos() as f64,
        fp as f64 / data.n_neg() as f64,
    )
}

/// Brute-force DCA net benefit from a contingency table.
pub fn brute_nb(data: &Dataset, t: f64) -> f64 {
    let (tpr, fpr) = brute_rates(data, t);
    let n = data.len() as f64;
    let tp = tpr * data.n_pos() as f64;
    let fp = fpr * data.n_neg() as f64;
    tp / n - (t / (1.0 - t)) * fp / n
}

/// Brute-force Brier loss from a contingency table.
pub fn brute_bc(data: &Dataset, t: f64) -> f64 {
    let (tpr, fpr) = brute_rates(data, t);
    let n = data.len() as f64;
    let fn_ = (1.0 - tpr) * data.n_pos() as f64;
    let fp = fpr * data.n_neg() as f64;
    2.0 * ((1.0 - t) * fn_ / n + t * fp / n)
}
