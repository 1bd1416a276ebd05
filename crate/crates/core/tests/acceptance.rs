//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use costdca::cost::{
    baseline_cost_lines, brier_curve, brier_score, loss_decomposition, lower_envelope,
    lower_envelope_at,
};
use costdca::dataset::{simulate_gaussian, Dataset, Label, Priors, SimulationSpec};
use costdca::decision::{
    baseline_decision_curves, decision_curve, upper_envelope_decision_curve, ThresholdGrid,
    UtilityScheme,
};
use costdca::relations::{compare_models, compare_rates, envelope_oracle, EnvelopeKind};
use costdca::roc::{convex_hull, operating_points, Rates};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// The 100 random datasets shared by several criteria.
fn random_suite() -> Vec<Dataset> {
    let priors = [0.1, 0.33, 0.5];
    (0..100u64)
        .map(|seed| random_dataset(seed, 200, priors[seed as usize % 3]))
        .collect()
}

fn fig1_dataset() -> Dataset {
    simulate_gaussian(&SimulationSpec {
        n: 10_000,
        pi_p: 0.2,
        mu_n: 0.4,
        sigma_n: 0.12,
        mu_p: 0.6,
        sigma_p: 0.12,
        seed: 7,
    })
    .unwrap()
}

fn ac1_toy_hull() -> Outcome {
    let curve = operating_points(&toy());
    let start = Instant::now();
    let hull = convex_hull(&curve);
    let elapsed = start.elapsed();
    let interior: Vec<(f64, f64)> = hull.points[1..hull.points.len() - 1]
        .iter()
        .map(|p| (p.fpr, p.tpr))
        .collect();
    let expected = [(0.0, 1.0 / 3.0), (1.0 / 6.0, 2.0 / 3.0), (0.5, 1.0)];
    check(interior.len() == 3, format!("interior points {interior:?}"))?;
    for (g, e) in interior.iter().zip(expected) {
        check(
            close(g.0, e.0, 1e-12) && close(g.1, e.1, 1e-12),
            format!("{g:?} != {e:?}"),
        )?;
    }
    check(
        elapsed < Duration::from_millis(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("interior {interior:?} in {elapsed:?}"))
}

fn ac2_envelope_tie() -> Outcome {
    let data = toy();
    let hull = convex_hull(&operating_points(&data));
    let env = lower_envelope_at(&hull, data.priors(), 1.0 / 3.0).map_err(|e| e.to_string())?;
    check(
        close(env.value, 2.0 / 9.0, 1e-12),
        format!("value {}", env.value),
    )?;
    let attained: Vec<(f64, f64)> = env.attained_by.iter().map(|p| (p.fpr, p.tpr)).collect();
    for want in [(1.0 / 6.0, 2.0 / 3.0), (0.5, 1.0)] {
        check(
            attained
                .iter()
                .any(|a| close(a.0, want.0, 1e-12) && close(a.1, want.1, 1e-12)),
            format!("{want:?} missing from {attained:?}"),
        )?;
    }
    Ok(format!(
        "L(1/3) = {:.15}, attained by {attained:?}",
        env.value
    ))
}

fn ac3_identity() -> Outcome {
    let start = Instant::now();
    let grid = ThresholdGrid::default_thresholds();
    let mut worst = 0.0f64;
    for data in random_suite() {
        let nb = decision_curve(&data, &grid, UtilityScheme::Dca).map_err(|e| e.to_string())?;
        let bc = brier_curve(&data, &grid).map_err(|e| e.to_string())?;
        let pi_p = data.priors().pi_p;
        for (i, &t) in grid.values().iter().enumerate() {
            worst = worst.max((nb.ys[i] - (pi_p - bc.ys[i] / (2.0 * (1.0 - t)))).abs());
        }
    }
    let elapsed = start.elapsed();
    check(worst < 1e-12, format!("max residual {worst:e}"))?;
    check(
        elapsed < Duration::from_secs(5),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "max residual {worst:e} over 100 datasets in {elapsed:?}"
    ))
}

fn ac4_argmax_agreement() -> Outcome {
    let grid = ThresholdGrid::default_thresholds();
    let priors = [0.1, 0.33, 0.5];
    let mut violations = 0;
    let mut checked = 0;
    for seed in 0..100u64 {
        let pi_p = priors[seed as usize % 3];
        let a = random_dataset_with(seed, 200, pi_p, 1.0);
        let b = random_dataset_with(seed + 10_000, 200, pi_p, 1.5);
        let report = compare_models(&a, &b, &grid).map_err(|e| e.to_string())?;
        violations += report.disagreements;
        checked += report.per_t.len();
    }
    check(violations == 0, format!("{violations} disagreements"))?;
    Ok(format!("{checked} (pair, t) comparisons, 0 disagreements"))
}

fn ac5_area_is_brier_score() -> Outcome {
    let toy = toy();
    let toy_err = (brier_score(&toy) - mse(&toy)).abs();
    check(
        close(brier_score(&toy), 0.27288, 1e-5),
        format!("toy {}", brier_score(&toy)),
    )?;
    check(toy_err < 1e-9, format!("toy error {toy_err:e}"))?;

    let big = random_dataset(99, 10_000, 0.3);
    check(is_tie_free(&big), "n=1e4 dataset has ties")?;
    let start = Instant::now();
    let area = brier_score(&big);
    let elapsed = start.elapsed();
    let big_err = (area - mse(&big)).abs();
    check(big_err < 1e-9, format!("tie-free error {big_err:e}"))?;
    check(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;

    // ties only change the curve at isolated thresholds, so the bound is the same
    let mut tied_err = 0.0f64;
    for seed in 0..20 {
        let data = tied_dataset(seed, 1000, 0.3, 1);
        tied_err = tied_err.max((brier_score(&data) - mse(&data)).abs());
    }
    check(tied_err < 1e-9, format!("tied error {tied_err:e}"))?;
    Ok(format!(
        "toy {:.6} (err {toy_err:e}), n=1e4 err {big_err:e} in {elapsed:?}, tied err {tied_err:e}",
        brier_score(&toy)
    ))
}

fn ac6_decomposition() -> Outcome {
    let grid = ThresholdGrid::default_costs();
    let mut min_cal = f64::INFINITY;
    let mut sets = random_suite();
    sets.push(toy());
    sets.push(fig1_dataset());
    for seed in 0..10 {
        sets.push(tied_dataset(seed, 500, 0.2, 1));
    }
    for data in &sets {
        let d = loss_decomposition(data, &grid).map_err(|e| e.to_string())?;
        min_cal = min_cal.min(d.calibration);
        check(
            d.calibration >= 0.0,
            format!("negative calibration loss {:e}", d.calibration),
        )?;
    }
    let calibrated = calibrated_dataset(11, 5000, 0.3);
    let d = loss_decomposition(&calibrated, &grid).map_err(|e| e.to_string())?;
    check(
        d.calibration.abs() < 1e-9,
        format!("calibrated model loss {:e}", d.calibration),
    )?;
    let bc = brier_curve(&calibrated, &grid).map_err(|e| e.to_string())?;
    let hull = convex_hull(&operating_points(&calibrated));
    let env = lower_envelope(&hull, calibrated.priors(), &grid).map_err(|e| e.to_string())?;
    let gap = bc
        .ys
        .iter()
        .zip(&env.ys)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    check(gap < 1e-9, format!("calibrated Brier/envelope gap {gap:e}"))?;
    Ok(format!(
        "min calibration loss {min_cal:e} over {} datasets; calibrated: loss {:e}, max gap {gap:e}",
        sets.len(),
        d.calibration
    ))
}

fn ac7_upper_envelope_duality() -> Outcome {
    let grid = ThresholdGrid::default_thresholds();
    let mut sets = vec![toy(), fig1_dataset()];
    sets.extend(random_suite().into_iter().take(30));
    let (mut oracle_err, mut dual_err) = (0.0f64, 0.0f64);
    for data in &sets {
        let priors = data.priors();
        let curve = operating_points(data);
        let all: Vec<Rates> = curve.rates().collect();
        let hull = convex_hull(&curve);
        let upper = upper_envelope_decision_curve(&hull, priors, &grid, UtilityScheme::Dca)
            .map_err(|e| e.to_string())?;
        let oracle = envelope_oracle(&all, priors, &grid, EnvelopeKind::UpperDecision)
            .map_err(|e| e.to_string())?;
        let lower = lower_envelope(&hull, priors, &grid).map_err(|e| e.to_string())?;
        for (i, &t) in grid.values().iter().enumerate() {
            oracle_err = oracle_err.max((upper.ys[i] - oracle.ys[i]).abs());
            dual_err =
                dual_err.max((upper.ys[i] - (priors.pi_p - lower.ys[i] / (2.0 * (1.0 - t)))).abs());
        }
    }
    check(
        oracle_err < 1e-12,
        format!("oracle residual {oracle_err:e}"),
    )?;
    check(dual_err < 1e-12, format!("duality residual {dual_err:e}"))?;
    Ok(format!(
        "oracle residual {oracle_err:e}, duality residual {dual_err:e}"
    ))
}

fn ac8_baselines() -> Outcome {
    let grid = ThresholdGrid::default_thresholds();
    let step = grid.step_hint();
    for pi_p in [0.2, 1.0 / 3.0, 0.5] {
        let priors = Priors::new(pi_p).map_err(|e| e.to_string())?;
        let (all, none) = baseline_decision_curves(priors, &grid, UtilityScheme::Dca)
            .map_err(|e| e.to_string())?;
        check(
            none.ys.iter().all(|&y| y == 0.0),
            "treat_none not identically zero",
        )?;
        let root = all
            .points()
            .collect::<Vec<_>>()
            .windows(2)
            .find(|w| w[0].1 > 0.0 && w[1].1 <= 0.0)
            .map(|w| {
                if w[1].1 == 0.0 {
                    w[1].0
                } else {
                    (w[0].0 + w[1].0) / 2.0
                }
            })
            .ok_or("treat_all never crosses zero")?;
        check(
            (root - pi_p).abs() <= step,
            format!("root {root} vs pi_p {pi_p}"),
        )?;

        let (pos, neg) = baseline_cost_lines(priors);
        let c = pos.intersection(&neg).ok_or("baseline lines parallel")?;
        check(close(c, pi_p, 1e-12), format!("intersection at {c}"))?;
        check(
            close(pos.at(c), 2.0 * pi_p * (1.0 - pi_p), 1e-12),
            format!("value {}", pos.at(c)),
        )?;
    }
    let (pos, neg) = baseline_cost_lines(Priors::new(0.2).unwrap());
    let c = pos.intersection(&neg).unwrap();
    check(
        close(pos.at(c), 0.32, 1e-12),
        format!("pi_p=0.2 value {}", pos.at(c)),
    )?;
    Ok(format!(
        "treat_all roots within {step}, pi_p=0.2 lines meet at ({c}, {:.12})",
        pos.at(c)
    ))
}

fn fig6_datasets() -> (Dataset, Dataset) {
    // 50 positives and 50 negatives; A: 10/30/10 at 0.05/0.5/0.95 for both
    // classes. B: positives 40 at 0.5 and 10 at 0.95; negatives 10 at 0.05
    // and 40 at 0.5.
    let mut a = Vec::new();
    let mut b = Vec::new();
    for label in [Label::Positive, Label::Negative] {
        a.extend(std::iter::repeat_n((0.05, label), 10));
        a.extend(std::iter::repeat_n((0.5, label), 30));
        a.extend(std::iter::repeat_n((0.95, label), 10));
    }
    b.extend(std::iter::repeat_n((0.5, Label::Positive), 40));
    b.extend(std::iter::repeat_n((0.95, Label::Positive), 10));
    b.extend(std::iter::repeat_n((0.05, Label::Negative), 10));
    b.extend(std::iter::repeat_n((0.5, Label::Negative), 40));
    (
        Dataset::from_pairs(a).unwrap(),
        Dataset::from_pairs(b).unwrap(),
    )
}

fn ac9_fig6() -> Outcome {
    // pi_P = 0.5 follows from "10 additional positives" being a TPR gain of
    // 1/5 in a population of 100.
    let priors = Priors::new(0.5).unwrap();
    let direct = compare_rates(
        priors,
        &[
            (0.1, Rates::new(0.8, 0.8), Rates::new(0.8, 1.0)),
            (0.9, Rates::new(0.2, 0.2), Rates::new(0.0, 0.2)),
        ],
    )
    .map_err(|e| e.to_string())?;
    let (a, b) = fig6_datasets();
    let grid = ThresholdGrid::new(vec![0.1, 0.9]).unwrap();
    let from_data = compare_models(&a, &b, &grid).map_err(|e| e.to_string())?;
    for report in [&direct, &from_data] {
        let (lo, hi) = (&report.per_t[0], &report.per_t[1]);
        check(
            close(lo.delta_bc, 0.18, 1e-12) && close(hi.delta_bc, 0.18, 1e-12),
            format!("delta_bc {} {}", lo.delta_bc, hi.delta_bc),
        )?;
        check(
            close(lo.delta_nb, 0.1, 1e-12) && close(hi.delta_nb, 0.9, 1e-12),
            format!("delta_nb {} {}", lo.delta_nb, hi.delta_nb),
        )?;
        check(
            close(lo.delta_nb_scaled, 0.18, 1e-12) && close(hi.delta_nb_scaled, 0.18, 1e-12),
            format!(
                "scaled delta_nb {} {}",
                lo.delta_nb_scaled, hi.delta_nb_scaled
            ),
        )?;
        check(report.all_agree, "models disagree")?;
    }
    let (lo, hi) = (&direct.per_t[0], &direct.per_t[1]);
    Ok(format!(
        "delta_bc {:.3}/{:.3}, delta_nb {:.3}/{:.3}, scaled delta_nb {:.3}/{:.3}",
        lo.delta_bc, hi.delta_bc, lo.delta_nb, hi.delta_nb, lo.delta_nb_scaled, hi.delta_nb_scaled
    ))
}

/// Indices where `pred` holds, as maximal runs.
fn runs(flags: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, &f) in flags.iter().enumerate() {
        match (f, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, flags.len() - 1));
    }
    out
}

fn ac10_fig1() -> Outcome {
    let start = Instant::now();
    let data = fig1_dataset();
    let grid = ThresholdGrid::default_thresholds();
    let priors = data.priors();
    let nb = decision_curve(&data, &grid, UtilityScheme::Dca).map_err(|e| e.to_string())?;
    let (all, none) =
        baseline_decision_curves(priors, &grid, UtilityScheme::Dca).map_err(|e| e.to_string())?;
    let bc = brier_curve(&data, &grid).map_err(|e| e.to_string())?;
    let (all_pos, all_neg) = baseline_cost_lines(priors);

    let dca_band: Vec<bool> = (0..grid.len())
        .map(|i| nb.ys[i] > all.ys[i] && nb.ys[i] > none.ys[i])
        .collect();
    let bc_band: Vec<bool> = grid
        .values()
        .iter()
        .enumerate()
        .map(|(i, &t)| bc.ys[i] < all_pos.at(t) && bc.ys[i] < all_neg.at(t))
        .collect();
    // The uncalibrated scores beat treat-all by a sliver below t = pi_P and
    // beat treat-none again above roughly 0.5, so the winning set is two
    // runs. Every run must be mirrored in cost space and at least one must be
    // an interior band.
    let (dca_runs, bc_runs) = (runs(&dca_band), runs(&bc_band));
    check(!dca_runs.is_empty(), "model never beats both baselines")?;
    check(
        dca_runs.len() == bc_runs.len(),
        format!("band counts differ: {dca_runs:?} vs {bc_runs:?}"),
    )?;
    for (d, b) in dca_runs.iter().zip(&bc_runs) {
        check(
            d.0.abs_diff(b.0) <= 1 && d.1.abs_diff(b.1) <= 1,
            format!("bands differ: {d:?} vs {b:?}"),
        )?;
    }
    check(
        dca_runs.iter().any(|d| d.0 > 0 && d.1 < grid.len() - 1),
        format!("no interior band: {dca_runs:?}"),
    )?;
    let elapsed = start.elapsed();
    check(
        elapsed < Duration::from_secs(10),
        format!("took {elapsed:?}"),
    )?;
    let v = grid.values();
    let fmt = |rs: &[(usize, usize)]| {
        rs.iter()
            .map(|r| format!("[{}, {}]", v[r.0], v[r.1]))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(format!(
        "decision bands {}, Brier bands {} in {elapsed:?}",
        fmt(&dca_runs),
        fmt(&bc_runs)
    ))
}

fn ac11_bounds() -> Outcome {
    let grid = ThresholdGrid::default_thresholds();
    let mut violations = 0usize;
    let mut checked = 0usize;
    for data in random_suite() {
        let Priors { pi_p, pi_n } = data.priors();
        let nb = decision_curve(&data, &grid, UtilityScheme::Dca).map_err(|e| e.to_string())?;
        let bc = brier_curve(&data, &grid).map_err(|e| e.to_string())?;
        for (i, &t) in grid.values().iter().enumerate() {
            checked += 1;
            let ok = nb.ys[i] <= pi_p
                && nb.ys[i] >= -(t / (1.0 - t)) * pi_n
                && bc.ys[i] >= 0.0
                && bc.ys[i] <= 2.0 * ((1.0 - t) * pi_p + t * pi_n);
            if !ok {
                violations += 1;
            }
        }
    }
    check(violations == 0, format!("{violations} violations"))?;
    Ok(format!("{checked} grid points, 0 violations"))
}

fn ac12_class_swap() -> Outcome {
    let grid = ThresholdGrid::default_costs();
    let mut worst = 0.0f64;
    let mut used = 0usize;
    for seed in 0..30u64 {
        let data = random_dataset(seed, 200, [0.1, 0.33, 0.5][seed as usize % 3]);
        if !is_tie_free(&data) {
            return Err(format!("seed {seed} has ties"));
        }
        let swapped = data.class_swapped();
        let near_score = |t: f64| {
            data.samples()
                .iter()
                .any(|s| (s.score - t).abs() < 1e-9 || (s.score - (1.0 - t)).abs() < 1e-9)
        };
        let ts: Vec<f64> = grid
            .values()
            .iter()
            .copied()
            .filter(|&t| !near_score(t))
            .collect();
        let mirrored: Vec<f64> = ts.iter().rev().map(|t| 1.0 - t).collect();
        let g = ThresholdGrid::new(ts.clone()).map_err(|e| e.to_string())?;
        let gm = ThresholdGrid::new(mirrored).map_err(|e| e.to_string())?;
        let bc_swapped = brier_curve(&swapped, &g).map_err(|e| e.to_string())?;
        let bc_mirror = brier_curve(&data, &gm).map_err(|e| e.to_string())?;
        for (i, y) in bc_swapped.ys.iter().enumerate() {
            worst = worst.max((y - bc_mirror.ys[ts.len() - 1 - i]).abs());
            used += 1;
        }
    }
    check(worst < 1e-9, format!("max |BC'(t) - BC(1-t)| = {worst:e}"))?;
    Ok(format!(
        "max |BC'(t) - BC(1-t)| = {worst:e} over {used} points"
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("AC1 toy ROC hull", ac1_toy_hull),
        ("AC2 lower-envelope tie at c=1/3", ac2_envelope_tie),
        ("AC3 NB/BC identity", ac3_identity),
        ("AC4 argmax agreement", ac4_argmax_agreement),
        (
            "AC5 area under Brier curve = Brier score",
            ac5_area_is_brier_score,
        ),
        (
            "AC6 decomposition and calibrated collapse",
            ac6_decomposition,
        ),
        ("AC7 upper-envelope duality", ac7_upper_envelope_duality),
        ("AC8 baselines", ac8_baselines),
        ("AC9 cross-threshold comparability", ac9_fig6),
        ("AC10 simulated Gaussian scores", ac10_fig1),
        ("AC11 range bounds", ac11_bounds),
        ("AC12 class-swap symmetry", ac12_class_swap),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
