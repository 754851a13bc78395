//! The Mamdani pipeline: fuzzify inputs, fire each rule by the minimum of
//! its antecedent degrees, clip consequents at the firing strength,
//! aggregate per-label by maximum, then defuzzify and classify.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fuzzy::{FuzzyError, FuzzyLabel, LinguisticVariable, MembershipVector};
use crate::rules::{firing_strength, FuzzifiedInputs, RuleBase, RuleError};

/// Errors raised by the inference pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("no input value for variable '{0}'")]
    MissingInput(String),
    #[error("input given for '{0}', which is not an input variable")]
    UnknownInput(String),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("defuzzification needs at least 2 samples (got {0})")]
    TooFewSamples(usize),
    #[error("aggregated output is zero everywhere; nothing to defuzzify")]
    DegenerateOutput,
    #[error("no representative point for label '{label}' of variable '{variable}'")]
    MissingRepresentative { variable: String, label: String },
    #[error("scenario grids need exactly two input variables (rule base has {0})")]
    NotTwoInputs(usize),
}

/// How the aggregated output envelope is reduced to one crisp score.
///
/// Both methods work on `samples` uniform points across the output universe.
/// Centroid integrates with trapezoid weights; mean-of-maximum averages the
/// sample points whose envelope value is within 1e-9 of the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefuzzMethod {
    Centroid { samples: usize },
    MeanOfMaximum { samples: usize },
}

impl DefuzzMethod {
    pub const DEFAULT_SAMPLES: usize = 1001;

    pub fn centroid() -> Self {
        Self::Centroid {
            samples: Self::DEFAULT_SAMPLES,
        }
    }

    pub fn mean_of_maximum() -> Self {
        Self::MeanOfMaximum {
            samples: Self::DEFAULT_SAMPLES,
        }
    }

    fn samples(&self) -> usize {
        match *self {
            Self::Centroid { samples } | Self::MeanOfMaximum { samples } => samples,
        }
    }
}

impl Default for DefuzzMethod {
    fn default() -> Self {
        Self::centroid()
    }
}

/// Traffic-light encoding of an output label's rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Orange,
    Green,
}

impl Color {
    /// Rank 0 maps to red, the top rank to green, anything between to
    /// orange. A single-term variable is red (the conservative reading).
    pub fn for_rank(rank: usize, term_count: usize) -> Self {
        if rank == 0 {
            Color::Red
        } else if rank + 1 == term_count {
            Color::Green
        } else {
            Color::Orange
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Orange => "orange",
            Color::Green => "green",
        }
    }

    /// Fill color used by SVG renderings.
    pub fn hex(&self) -> &'static str {
        match self {
            Color::Red => "#d64541",
            Color::Orange => "#f39c12",
            Color::Green => "#2ecc71",
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered `(name, value)` pairs serialized as a JSON object.
fn serialize_pairs<S: Serializer, V: Serialize>(
    pairs: &[(String, V)],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    let mut map = serializer.serialize_map(Some(pairs.len()))?;
    for (name, value) in pairs {
        map.serialize_entry(name, value)?;
    }
    map.end()
}

/// Full trace of one evaluation: crisp inputs, fuzzified degrees, per-rule
/// firings, aggregated output degrees, the crisp score and its label/color.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InferenceResult {
    #[serde(serialize_with = "serialize_pairs")]
    inputs: Vec<(String, f64)>,
    #[serde(serialize_with = "serialize_pairs")]
    fuzzified: Vec<(String, MembershipVector)>,
    #[serde(serialize_with = "serialize_pairs")]
    firings: Vec<(String, f64)>,
    aggregated: MembershipVector,
    crisp: f64,
    label: FuzzyLabel,
    color: Color,
}

impl InferenceResult {
    pub fn inputs(&self) -> &[(String, f64)] {
        &self.inputs
    }

    pub fn fuzzified(&self) -> &[(String, MembershipVector)] {
        &self.fuzzified
    }

    pub fn firings(&self) -> &[(String, f64)] {
        &self.firings
    }

    pub fn firing(&self, rule_id: &str) -> Option<f64> {
        self.firings
            .iter()
            .find(|(id, _)| id == rule_id)
            .map(|(_, f)| *f)
    }

    pub fn aggregated(&self) -> &MembershipVector {
        &self.aggregated
    }

    pub fn crisp(&self) -> f64 {
        self.crisp
    }

    pub fn label(&self) -> &FuzzyLabel {
        &self.label
    }

    pub fn color(&self) -> Color {
        self.color
    }
}

/// Pointwise maximum of the output terms clipped at their aggregated
/// degrees. For rules sharing a consequent label, clipping at the per-label
/// maximum firing equals the maximum of the individually clipped rules, so
/// the envelope is built from the aggregated vector directly.
#[derive(Debug, Clone)]
pub struct OutputEnvelope<'a> {
    variable: &'a LinguisticVariable,
    aggregated: &'a MembershipVector,
}

impl<'a> OutputEnvelope<'a> {
    pub fn new(variable: &'a LinguisticVariable, aggregated: &'a MembershipVector) -> Self {
        Self {
            variable,
            aggregated,
        }
    }

    pub fn variable(&self) -> &LinguisticVariable {
        self.variable
    }

    /// Envelope height at `x` (clamped to the universe).
    pub fn value(&self, x: f64) -> f64 {
        let x = self.variable.universe().clamp(x);
        let mut best = 0.0f64;
        for (label, mf) in self.variable.terms() {
            let cap = self.aggregated.degree(label.name()).unwrap_or(0.0);
            if cap > 0.0 {
                best = best.max(cap.min(mf_eval(mf, x, self.variable)));
            }
        }
        best
    }
}

fn mf_eval(
    mf: &crate::fuzzy::MembershipFunction,
    x: f64,
    variable: &LinguisticVariable,
) -> f64 {
    crate::fuzzy::membership(mf, x, variable.universe()).unwrap_or(0.0)
}

/// Reduces an output envelope to one crisp score.
///
/// Centroid: `Σ wᵢ·xᵢ·μ(xᵢ) / Σ wᵢ·μ(xᵢ)` over uniform samples with
/// trapezoid weights (half weight at the end points). Mean-of-maximum:
/// the mean of the sample points reaching the envelope maximum within 1e-9.
pub fn defuzzify(envelope: &OutputEnvelope, method: DefuzzMethod) -> Result<f64, InferenceError> {
    let samples = method.samples();
    if samples < 2 {
        return Err(InferenceError::TooFewSamples(samples));
    }
    let universe = envelope.variable().universe();
    let step = (universe.hi() - universe.lo()) / (samples - 1) as f64;
    let point = |i: usize| universe.lo() + step * i as f64;

    match method {
        DefuzzMethod::Centroid { .. } => {
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..samples {
                let x = point(i);
                let mu = envelope.value(x);
                let w = if i == 0 || i == samples - 1 { 0.5 } else { 1.0 };
                num += w * x * mu;
                den += w * mu;
            }
            if den <= 0.0 {
                return Err(InferenceError::DegenerateOutput);
            }
            Ok(num / den)
        }
        DefuzzMethod::MeanOfMaximum { .. } => {
            let heights: Vec<f64> = (0..samples).map(|i| envelope.value(point(i))).collect();
            let max = heights.iter().copied().fold(0.0f64, f64::max);
            if max <= 0.0 {
                return Err(InferenceError::DegenerateOutput);
            }
            let mut sum = 0.0;
            let mut count = 0usize;
            for (i, h) in heights.iter().enumerate() {
                if (max - h).abs() <= 1e-9 {
                    sum += point(i);
                    count += 1;
                }
            }
            Ok(sum / count as f64)
        }
    }
}

/// Argmax of the aggregated degrees; ties break toward the lower-ranked
/// label of `variable`'s declared term order.
pub fn classify_label<'a>(
    aggregated: &MembershipVector,
    variable: &'a LinguisticVariable,
) -> &'a FuzzyLabel {
    let mut best: Option<(&'a FuzzyLabel, f64)> = None;
    for (label, _) in variable.terms() {
        let degree = aggregated.degree(label.name()).unwrap_or(0.0);
        match best {
            Some((_, current)) if degree <= current => {}
            _ => best = Some((label, degree)),
        }
    }
    best.map(|(l, _)| l).expect("variable has at least one term")
}

/// Color of a label derived from its rank within `variable`.
pub fn label_color(variable: &LinguisticVariable, label: &FuzzyLabel) -> Color {
    let rank = variable.label_rank(label.name()).unwrap_or(0);
    Color::for_rank(rank, variable.terms().len())
}

/// Runs the full pipeline for one crisp score per input variable.
pub fn infer(
    rulebase: &RuleBase,
    inputs: &BTreeMap<String, f64>,
    method: DefuzzMethod,
) -> Result<InferenceResult, InferenceError> {
    let vocabulary = rulebase.vocabulary();
    for name in inputs.keys() {
        if vocabulary.input(name).is_none() {
            return Err(InferenceError::UnknownInput(name.clone()));
        }
    }

    let mut crisp_inputs = Vec::with_capacity(vocabulary.inputs().len());
    let mut fuzzified_entries = Vec::with_capacity(vocabulary.inputs().len());
    for var in vocabulary.inputs() {
        let x = *inputs
            .get(var.name())
            .ok_or_else(|| InferenceError::MissingInput(var.name().to_owned()))?;
        crisp_inputs.push((var.name().to_owned(), x));
        fuzzified_entries.push((var.name().to_owned(), var.fuzzify(x)?));
    }
    let fuzzified = FuzzifiedInputs::new(fuzzified_entries.clone());

    let mut firings = Vec::with_capacity(rulebase.rules().len());
    let output = vocabulary.output();
    let mut aggregated: Vec<(FuzzyLabel, f64)> = output
        .terms()
        .iter()
        .map(|(label, _)| (label.clone(), 0.0))
        .collect();
    for rule in rulebase.rules() {
        let strength = firing_strength(rule, &fuzzified)?;
        firings.push((rule.id().to_owned(), strength));
        let slot = aggregated
            .iter_mut()
            .find(|(label, _)| label.name() == rule.consequent().label())
            .expect("rule base validated consequent labels");
        slot.1 = slot.1.max(strength);
    }
    let aggregated = MembershipVector::from_degrees(aggregated);

    let envelope = OutputEnvelope::new(output, &aggregated);
    let crisp = defuzzify(&envelope, method)?;
    let label = classify_label(&aggregated, output).clone();
    let color = label_color(output, &label);

    Ok(InferenceResult {
        inputs: crisp_inputs,
        fuzzified: fuzzified_entries,
        firings,
        aggregated,
        crisp,
        label,
        color,
    })
}

/// Crisp representative point per label, shared across the two grid axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Representatives {
    by_label: BTreeMap<String, f64>,
}

impl Representatives {
    pub fn new(by_label: BTreeMap<String, f64>) -> Self {
        Self { by_label }
    }

    /// Low at 0, Medium at 0.5, High at 1: the default variables' peaks.
    pub fn default_tdtsw() -> Self {
        Self::new(BTreeMap::from([
            ("Low".to_owned(), 0.0),
            ("Medium".to_owned(), 0.5),
            ("High".to_owned(), 1.0),
        ]))
    }

    /// Derives representatives from the peak centers of the rule base's
    /// input variables. Errors if two variables disagree on a shared label.
    pub fn peak_centers(rulebase: &RuleBase) -> Result<Self, InferenceError> {
        let mut by_label = BTreeMap::new();
        for var in rulebase.vocabulary().inputs() {
            for (label, mf) in var.terms() {
                let peak = mf.peak_center();
                match by_label.insert(label.name().to_owned(), peak) {
                    Some(previous) if previous != peak => {
                        return Err(InferenceError::MissingRepresentative {
                            variable: var.name().to_owned(),
                            label: label.name().to_owned(),
                        });
                    }
                    _ => {}
                }
            }
        }
        Ok(Self { by_label })
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.by_label.get(label).copied()
    }
}

/// One cell of the scenario grid: the pair of input labels evaluated at
/// their representative points plus the resulting trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioCell {
    pub id: String,
    pub row_label: FuzzyLabel,
    pub col_label: FuzzyLabel,
    pub result: InferenceResult,
}

/// Row-major table of scenario cells R1..Rn over the label pairs of the two
/// input variables (rows iterate the first variable's labels).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioTable {
    pub row_variable: String,
    pub col_variable: String,
    pub cells: Vec<ScenarioCell>,
}

/// Evaluates every label pair of the two input variables at the
/// representative points, in row-major R1..Rn order.
pub fn scenario_grid(
    rulebase: &RuleBase,
    representatives: &Representatives,
    method: DefuzzMethod,
) -> Result<ScenarioTable, InferenceError> {
    let inputs = rulebase.vocabulary().inputs();
    if inputs.len() != 2 {
        return Err(InferenceError::NotTwoInputs(inputs.len()));
    }
    let (row_var, col_var) = (&inputs[0], &inputs[1]);

    let representative = |var: &LinguisticVariable, label: &FuzzyLabel| {
        representatives
            .get(label.name())
            .ok_or_else(|| InferenceError::MissingRepresentative {
                variable: var.name().to_owned(),
                label: label.name().to_owned(),
            })
    };

    let mut cells = Vec::with_capacity(row_var.terms().len() * col_var.terms().len());
    for (row_label, _) in row_var.terms() {
        for (col_label, _) in col_var.terms() {
            let mut point = BTreeMap::new();
            point.insert(row_var.name().to_owned(), representative(row_var, row_label)?);
            point.insert(col_var.name().to_owned(), representative(col_var, col_label)?);
            let result = infer(rulebase, &point, method)?;
            cells.push(ScenarioCell {
                id: format!("R{}", cells.len() + 1),
                row_label: row_label.clone(),
                col_label: col_label.clone(),
                result,
            });
        }
    }
    Ok(ScenarioTable {
        row_variable: row_var.name().to_owned(),
        col_variable: col_var.name().to_owned(),
        cells,
    })
}
