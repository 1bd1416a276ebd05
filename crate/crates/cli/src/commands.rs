use std::fs::File;
use std::path::Path;

use costdca::cost::{
    baseline_cost_lines, brier_curve, cost_line, loss_decomposition, lower_envelope,
    per_class_components,
};
use costdca::dataset::{read_csv, simulate_gaussian, Dataset, Priors, SimulationSpec};
use costdca::decision::{baseline_decision_curves, decision_curve, upper_envelope_decision_curve};
use costdca::isometrics::{isometric_line, isometric_through, Metric, RocLine};
use costdca::relations::compare_models;
use costdca::render::{render_svg, PlotSeries, PlotSpec, SeriesData, Style};
use costdca::roc::{convex_hull, operating_points};
use costdca::{Curve, Error, ThresholdGrid, UtilityScheme};
use serde::Serialize;

use crate::output::{curve_rows, emit, rows_to_csv, to_json, write_file, CurveRow};
use crate::{
    BrierArgs, CliError, Command, CompareArgs, CostArgs, DcaArgs, IsometricArgs, MetricArg,
    RocArgs, SchemeArg, ScoreArgs, SimulateArgs,
};

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Dca(args) => dca(args),
        Command::Brier(args) => brier(args),
        Command::Cost(args) => cost(args),
        Command::Roc(args) => roc(args),
        Command::Score(args) => score(args),
        Command::Simulate(args) => simulate(args),
        Command::Compare(args) => compare(args),
        Command::Isometrics(args) => isometrics(args),
    }
}

fn data_err(err: Error) -> CliError {
    match err {
        Error::Grid(_) => CliError::Usage(err.to_string()),
        other => CliError::Data(other.to_string()),
    }
}

fn load(path: &Path) -> Result<Dataset, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    read_csv(file).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Parses `start:stop:step`.
pub fn parse_grid(spec: &str, below_one: bool) -> Result<ThresholdGrid, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(CliError::Usage(format!(
            "grid {spec:?} is not start:stop:step"
        )));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("grid {spec:?}: {s:?} is not a number")))
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if below_one && stop >= 1.0 {
        return Err(CliError::Usage(format!(
            "grid {spec:?} reaches t = 1 where net benefit is undefined; use a stop below 1"
        )));
    }
    ThresholdGrid::range(start, stop, step).map_err(|e| CliError::Usage(e.to_string()))
}

fn scheme(arg: SchemeArg) -> UtilityScheme {
    match arg {
        SchemeArg::Dca => UtilityScheme::Dca,
        SchemeArg::BrierScaled => UtilityScheme::BrierScaled,
    }
}

fn maybe_svg(path: Option<&Path>, spec: PlotSpec) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, &render_svg(&spec).map_err(data_err)?),
        None => Ok(()),
    }
}

fn y_extent<'a>(curves: impl IntoIterator<Item = &'a Curve>) -> (f64, f64) {
    let (lo, hi) = curves
        .into_iter()
        .flat_map(|c| c.ys.iter().copied())
        .fold((0.0f64, 0.0f64), |(lo, hi), y| (lo.min(y), hi.max(y)));
    let pad = (hi - lo).max(1e-3) * 0.05;
    (lo - pad, hi + pad)
}

fn dca(args: DcaArgs) -> Result<(), CliError> {
    let scheme = scheme(args.scheme);
    let grid = parse_grid(&args.grid, scheme == UtilityScheme::Dca)?;
    let data = load(&args.input.input)?;
    let priors = data.priors();

    let model = decision_curve(&data, &grid, scheme).map_err(data_err)?;
    let (treat_all, treat_none) =
        baseline_decision_curves(priors, &grid, scheme).map_err(data_err)?;
    let mut curves = vec![model, treat_all, treat_none];
    if args.upper_envelope {
        let hull = convex_hull(&operating_points(&data));
        curves.push(upper_envelope_decision_curve(&hull, priors, &grid, scheme).map_err(data_err)?);
    }
    if args.standardized {
        curves = curves.iter().map(Curve::standardized).collect();
    }

    let rows: Vec<CurveRow> = curves
        .iter()
        .flat_map(|c| curve_rows(c, c.series.name()))
        .collect();
    emit(args.csv.as_deref(), &rows_to_csv(&rows))?;

    // the treat-all line dives towards -inf near t = 1; keep the view on the model
    let top = curves
        .iter()
        .flat_map(|c| c.ys.iter().copied())
        .fold(0.0f64, f64::max);
    let y_range = (-0.25 * top.max(1e-3), 1.1 * top.max(1e-3));
    let mut spec = PlotSpec::new(
        "Decision curve",
        "Threshold probability",
        if args.standardized {
            "Standardized net benefit"
        } else {
            "Net benefit"
        },
    )
    .with_ranges((grid.values()[0], *grid.values().last().unwrap()), y_range);
    for c in curves {
        let style = match c.series {
            costdca::Series::UpperEnvelope => Style::dashed(),
            _ => Style::default(),
        };
        spec = spec
            .with_series(PlotSeries::new(c.series.name(), SeriesData::Curve(c)).with_style(style));
    }
    maybe_svg(args.svg.as_deref(), spec)
}

#[derive(Serialize)]
struct DecompositionSummary {
    n: usize,
    priors: Priors,
    grid: ThresholdGrid,
    brier_score: f64,
    refinement: f64,
    calibration: f64,
}

fn brier(args: BrierArgs) -> Result<(), CliError> {
    let grid = parse_grid(&args.grid, false)?;
    let data = load(&args.input.input)?;
    let priors = data.priors();
    let hull = convex_hull(&operating_points(&data));

    let bc = brier_curve(&data, &grid).map_err(data_err)?;
    let envelope = lower_envelope(&hull, priors, &grid).map_err(data_err)?;
    let (all_pos, all_neg) = baseline_cost_lines(priors);
    let line_curve = |line: costdca::cost::CostLine, series| {
        Curve::from_fn(&grid, series, priors, |c| Ok(line.at(c))).map_err(data_err)
    };
    let all_pos_curve = line_curve(all_pos, costdca::Series::AllPositive)?;
    let all_neg_curve = line_curve(all_neg, costdca::Series::AllNegative)?;

    let mut rows = curve_rows(&bc, "brier");
    rows.extend(curve_rows(&envelope, "lower_envelope"));
    rows.extend(curve_rows(&all_pos_curve, "all_positive"));
    rows.extend(curve_rows(&all_neg_curve, "all_negative"));
    let components = if args.components {
        let (pos, neg) = per_class_components(&data, &grid).map_err(data_err)?;
        rows.extend(curve_rows(&pos, "positive_component"));
        rows.extend(curve_rows(&neg, "negative_component"));
        Some((pos, neg))
    } else {
        None
    };
    emit(args.csv.as_deref(), &rows_to_csv(&rows))?;

    if let Some(path) = &args.json {
        let d = loss_decomposition(&data, &grid).map_err(data_err)?;
        let summary = DecompositionSummary {
            n: data.len(),
            priors,
            grid: grid.clone(),
            brier_score: d.brier_score,
            refinement: d.refinement,
            calibration: d.calibration,
        };
        write_file(path, &to_json(&summary))?;
    }

    let y_range = (
        0.0,
        y_extent([&bc, &envelope])
            .1
            .max(2.0 * priors.pi_p * priors.pi_n)
            * 1.2,
    );
    let mut spec = PlotSpec::new("Brier curve", "Cost proportion / threshold", "Loss")
        .with_ranges((grid.values()[0], *grid.values().last().unwrap()), y_range)
        .with_series(PlotSeries::new("brier", SeriesData::Curve(bc)))
        .with_series(
            PlotSeries::new("lower_envelope", SeriesData::Curve(envelope))
                .with_style(Style::dashed()),
        )
        .with_series(PlotSeries::new(
            "all_positive",
            SeriesData::CostLine(all_pos),
        ))
        .with_series(PlotSeries::new(
            "all_negative",
            SeriesData::CostLine(all_neg),
        ));
    if let Some((pos, neg)) = components {
        spec = spec
            .with_series(
                PlotSeries::new("positive_component", SeriesData::Curve(pos))
                    .with_style(Style::dashed()),
            )
            .with_series(
                PlotSeries::new("negative_component", SeriesData::Curve(neg))
                    .with_style(Style::dashed()),
            );
    }
    maybe_svg(args.svg.as_deref(), spec)
}

fn cost(args: CostArgs) -> Result<(), CliError> {
    let grid = parse_grid(&args.grid, false)?;
    let data = load(&args.input.input)?;
    let priors = data.priors();
    let curve = operating_points(&data);
    let hull = convex_hull(&curve);
    let envelope = lower_envelope(&hull, priors, &grid).map_err(data_err)?;

    let mut rows = Vec::new();
    let mut spec = PlotSpec::new("Cost lines", "Cost proportion", "Loss").with_ranges(
        (grid.values()[0], *grid.values().last().unwrap()),
        (0.0, 2.0 * priors.pi_p.max(priors.pi_n)),
    );
    for (i, p) in curve.points.iter().enumerate() {
        let line = cost_line(p, priors);
        let name = format!("cost_line_{i}");
        for &c in grid.values() {
            rows.push(CurveRow {
                x: c,
                y: line.at(c),
                series: name.clone(),
            });
        }
        spec = spec.with_series(
            PlotSeries::new(name, SeriesData::CostLine(line)).with_style(Style {
                stroke_width: 1.0,
                ..Style::default()
            }),
        );
    }
    rows.extend(curve_rows(&envelope, "lower_envelope"));
    emit(args.csv.as_deref(), &rows_to_csv(&rows))?;
    spec = spec.with_series(
        PlotSeries::new("lower_envelope", SeriesData::Curve(envelope)).with_style(Style {
            color: Some("black".into()),
            dashed: true,
            stroke_width: 2.5,
        }),
    );
    maybe_svg(args.svg.as_deref(), spec)
}

fn roc(args: RocArgs) -> Result<(), CliError> {
    let data = load(&args.input.input)?;
    let curve = operating_points(&data);
    let hull = convex_hull(&curve);
    let as_rows = |c: &costdca::RocCurve, series: &str| -> Vec<CurveRow> {
        c.points
            .iter()
            .map(|p| CurveRow {
                x: p.fpr,
                y: p.tpr,
                series: series.to_string(),
            })
            .collect()
    };
    let mut rows = as_rows(&curve, "roc");
    rows.extend(as_rows(&hull, "hull"));
    emit(args.csv.as_deref(), &rows_to_csv(&rows))?;

    let pts = |c: &costdca::RocCurve| c.points.iter().map(|p| (p.fpr, p.tpr)).collect();
    let spec = PlotSpec::new("ROC curve", "False positive rate", "True positive rate")
        .with_series(PlotSeries::new("roc", SeriesData::Points(pts(&curve))))
        .with_series(
            PlotSeries::new("hull", SeriesData::Points(pts(&hull))).with_style(Style::dashed()),
        );
    maybe_svg(args.svg.as_deref(), spec)
}

#[derive(Serialize)]
struct ScoreReport {
    n: usize,
    priors: Priors,
    brier_score: f64,
    refinement: f64,
    calibration: f64,
}

fn score(args: ScoreArgs) -> Result<(), CliError> {
    let data = load(&args.input.input)?;
    let d = loss_decomposition(&data, &ThresholdGrid::default_costs()).map_err(data_err)?;
    let report = ScoreReport {
        n: data.len(),
        priors: data.priors(),
        brier_score: d.brier_score,
        refinement: d.refinement,
        calibration: d.calibration,
    };
    emit(args.json.as_deref(), &to_json(&report))
}

fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let spec = SimulationSpec {
        n: args.n,
        pi_p: args.pi_p,
        mu_n: args.mu_n,
        sigma_n: args.sd_n,
        mu_p: args.mu_p,
        sigma_p: args.sd_p,
        seed: args.seed,
    };
    let data = simulate_gaussian(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(args.out.as_deref(), &data.to_csv_string())
}

fn compare(args: CompareArgs) -> Result<(), CliError> {
    let grid = parse_grid(&args.grid, true)?;
    let a = load(&args.input_a)?;
    let b = load(&args.input_b)?;
    let report = compare_models(&a, &b, &grid).map_err(data_err)?;
    emit(args.json.as_deref(), &to_json(&report))
}

fn metric(arg: MetricArg) -> Metric {
    match arg {
        MetricArg::Accuracy => Metric::Accuracy,
        MetricArg::NetBenefit => Metric::NetBenefit,
        MetricArg::BrierLoss => Metric::BrierLoss,
    }
}

fn isometrics(args: IsometricArgs) -> Result<(), CliError> {
    let metric = metric(args.metric);
    let data = args.input.as_deref().map(load).transpose()?;
    let priors = match (&data, args.pi_p) {
        (Some(d), _) => d.priors(),
        (None, Some(p)) => Priors::new(p).map_err(|e| CliError::Usage(e.to_string()))?,
        (None, None) => {
            return Err(CliError::Usage(
                "either --input or --pi-p is required".into(),
            ))
        }
    };
    if metric != Metric::Accuracy && args.t.is_none() {
        return Err(CliError::Usage(format!(
            "--t is required for {} isometrics",
            metric.name()
        )));
    }
    let usage = |e: Error| CliError::Usage(e.to_string());

    let mut lines: Vec<RocLine> = args
        .levels
        .iter()
        .map(|&level| isometric_line(metric, level, args.t, priors).map_err(usage))
        .collect::<Result<_, _>>()?;
    if args.through_hull {
        let data = data.as_ref().expect("clap enforces --input");
        for p in convex_hull(&operating_points(data)).points {
            lines.push(isometric_through(metric, p.rates(), args.t, priors).map_err(usage)?);
        }
    }
    if lines.is_empty() {
        return Err(CliError::Usage(
            "no isometrics requested: pass --levels or --through-hull".into(),
        ));
    }

    let mut csv = String::from("metric,level,t,gradient,intercept\n");
    for l in &lines {
        let t = l.t.map(|t| t.to_string()).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            metric.name(),
            l.level,
            t,
            l.gradient,
            l.intercept
        ));
    }
    emit(args.csv.as_deref(), &csv)?;

    let mut spec = PlotSpec::new(
        format!("{} isometrics", metric.name()),
        "False positive rate",
        "True positive rate",
    );
    if let Some(data) = &data {
        let pts = operating_points(data)
            .points
            .iter()
            .map(|p| (p.fpr, p.tpr))
            .collect();
        spec = spec.with_series(PlotSeries::new("roc", SeriesData::Points(pts)));
    }
    for l in lines {
        spec = spec.with_series(
            PlotSeries::new(
                format!("{}={:.4}", metric.name(), l.level),
                SeriesData::RocLine(l),
            )
            .with_style(Style::dashed()),
        );
    }
    maybe_svg(args.svg.as_deref(), spec)
}
