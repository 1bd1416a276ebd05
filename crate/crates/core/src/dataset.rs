//! Labeled score datasets: ingestion, serialization and Gaussian simulation.

use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn is_positive(self) -> bool {
        matches!(self, Label::Positive)
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }

    /// Accepts `0`/`1` and `N`/`P` in either case.
    pub fn parse(token: &str) -> Option<Label> {
        match token.trim() {
            "0" | "n" | "N" => Some(Label::Negative),
            "1" | "p" | "P" => Some(Label::Positive),
            _ => None,
        }
    }

    fn as_token(self) -> &'static str {
        match self {
            Label::Negative => "0",
            Label::Positive => "1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub score: f64,
    pub label: Label,
}

impl LabeledSample {
    pub fn new(score: f64, label: Label) -> Self {
        Self { score, label }
    }
}

/// Class proportions of a population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub pi_p: f64,
    pub pi_n: f64,
}

impl Priors {
    pub fn new(pi_p: f64) -> Result<Self> {
        if !(pi_p > 0.0 && pi_p < 1.0) {
            return Err(Error::Domain(format!(
                "positive prior must lie in (0, 1), got {pi_p}"
            )));
        }
        Ok(Self {
            pi_p,
            pi_n: 1.0 - pi_p,
        })
    }

    fn from_counts(n_pos: usize, n_neg: usize) -> Self {
        let n = (n_pos + n_neg) as f64;
        Self {
            pi_p: n_pos as f64 / n,
            pi_n: n_neg as f64 / n,
        }
    }
}

/// An immutable collection of scored samples with both classes present.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<LabeledSample>,
    n_pos: usize,
    n_neg: usize,
}

impl Dataset {
    pub fn new(samples: Vec<LabeledSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, s) in samples.iter().enumerate() {
            if !(0.0..=1.0).contains(&s.score) {
                return Err(Error::Parse {
                    row: i + 1,
                    message: format!("score {} outside [0, 1]", s.score),
                });
            }
        }
        let n_pos = samples.iter().filter(|s| s.label.is_positive()).count();
        let n_neg = samples.len() - n_pos;
        if n_pos == 0 || n_neg == 0 {
            return Err(Error::DegenerateClass {
                positives: n_pos,
                negatives: n_neg,
            });
        }
        Ok(Self {
            samples,
            n_pos,
            n_neg,
        })
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, Label)>,
    {
        Self::new(
            pairs
                .into_iter()
                .map(|(score, label)| LabeledSample::new(score, label))
                .collect(),
        )
    }

    pub fn samples(&self) -> &[LabeledSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.n_neg
    }

    pub fn priors(&self) -> Priors {
        Priors::from_counts(self.n_pos, self.n_neg)
    }

    /// Scores mapped to `1 - s` and labels flipped.
    pub fn class_swapped(&self) -> Dataset {
        let samples = self
            .samples
            .iter()
            .map(|s| LabeledSample::new(1.0 - s.score, s.label.flipped()))
            .collect();
        Dataset {
            samples,
            n_pos: self.n_neg,
            n_neg: self.n_pos,
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["score", "label"]).map_err(io)?;
        for s in &self.samples {
            out.write_record([s.score.to_string().as_str(), s.label.as_token()])
                .map_err(io)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Builds a dataset from raw `(score, label)` text records. Row numbers in
/// errors are 1-based over the records given.
pub fn parse_dataset<I, S, L>(records: I) -> Result<Dataset>
where
    I: IntoIterator<Item = (S, L)>,
    S: AsRef<str>,
    L: AsRef<str>,
{
    let mut samples = Vec::new();
    for (i, (score_text, label_text)) in records.into_iter().enumerate() {
        let row = i + 1;
        let score_text = score_text.as_ref().trim();
        let score: f64 = score_text.parse().map_err(|_| Error::Parse {
            row,
            message: format!("malformed score {score_text:?}"),
        })?;
        if !(0.0..=1.0).contains(&score) {
            return Err(Error::Parse {
                row,
                message: format!("score {score} outside [0, 1]"),
            });
        }
        let label = Label::parse(label_text.as_ref()).ok_or_else(|| Error::UnknownLabel {
            row,
            token: label_text.as_ref().to_string(),
        })?;
        samples.push(LabeledSample::new(score, label));
    }
    Dataset::new(samples)
}

/// Reads a `score,label` CSV with a header line.
pub fn read_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (score_col, label_col) = match (col("score"), col("label")) {
        (Some(s), Some(l)) => (s, l),
        _ => {
            return Err(Error::Parse {
                row: 0,
                message: format!("expected header `score,label`, got {headers:?}"),
            })
        }
    };
    let mut records = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            row: i + 1,
            message: e.to_string(),
        })?;
        let field = |c: usize| rec.get(c).unwrap_or("").to_string();
        records.push((field(score_col), field(label_col)));
    }
    parse_dataset(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub n: usize,
    pub pi_p: f64,
    pub mu_n: f64,
    pub sigma_n: f64,
    pub mu_p: f64,
    pub sigma_p: f64,
    pub seed: u64,
}

impl SimulationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Simulation(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if !(self.pi_p > 0.0 && self.pi_p < 1.0) {
            return Err(Error::Simulation(format!(
                "pi_p must lie in (0, 1), got {}",
                self.pi_p
            )));
        }
        for (name, sd) in [("sigma_n", self.sigma_n), ("sigma_p", self.sigma_p)] {
            if !(sd > 0.0 && sd.is_finite()) {
                return Err(Error::Simulation(format!(
                    "{name} must be positive, got {sd}"
                )));
            }
        }
        if !(self.mu_n.is_finite() && self.mu_p.is_finite()) {
            return Err(Error::Simulation("means must be finite".into()));
        }
        let n_pos = self.positive_count();
        if n_pos == 0 || n_pos == self.n {
            return Err(Error::Simulation(format!(
                "n={} with pi_p={} leaves one class empty",
                self.n, self.pi_p
            )));
        }
        Ok(())
    }

    pub fn positive_count(&self) -> usize {
        (self.n as f64 * self.pi_p).round() as usize
    }
}

/// Draws `round(n * pi_p)` positive and the remaining negative scores from
/// per-class normal distributions, clipping to `[0, 1]`. Positives come first.
pub fn simulate_gaussian(spec: &SimulationSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pos = Normal::new(spec.mu_p, spec.sigma_p).map_err(|e| Error::Simulation(e.to_string()))?;
    let neg = Normal::new(spec.mu_n, spec.sigma_n).map_err(|e| Error::Simulation(e.to_string()))?;
    let n_pos = spec.positive_count();
    let mut samples = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let (dist, label) = if i < n_pos {
            (&pos, Label::Positive)
        } else {
            (&neg, Label::Negative)
        };
        let score: f64 = dist.sample(&mut rng);
        samples.push(LabeledSample::new(score.clamp(0.0, 1.0), label));
    }
    Dataset::new(samples)
}
