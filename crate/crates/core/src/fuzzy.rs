//! Linguistic variables, piecewise-linear membership functions and
//! fuzzification of crisp scores into per-label degree vectors.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Errors raised while constructing or evaluating fuzzy values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("universe bounds must be finite with lo < hi (got {lo} .. {hi})")]
    InvalidUniverse { lo: f64, hi: f64 },
    #[error("membership breakpoints must be finite and non-decreasing: {0:?}")]
    InvalidBreakpoints(Vec<f64>),
    #[error("breakpoint {value} of term '{label}' lies outside the universe {lo} .. {hi}")]
    BreakpointOutsideUniverse {
        label: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("'{0}' is not a valid identifier")]
    InvalidIdentifier(String),
    #[error("duplicate label '{0}'")]
    DuplicateLabel(String),
    #[error("variable '{0}' must declare at least one term")]
    NoTerms(String),
    #[error("membership input must be finite (got {0})")]
    NonFiniteInput(f64),
}

/// Keywords of the rules text format. Excluding them from identifiers keeps
/// every constructible name printable and re-parsable.
pub(crate) const RESERVED_WORDS: [&str; 10] = [
    "universe", "var", "out", "rule", "IF", "IS", "AND", "THEN", "tri", "trap",
];

/// Returns true for `[A-Za-z_][A-Za-z0-9_]*` excluding the reserved words,
/// the identifier rule shared with the rules DSL.
pub(crate) fn is_identifier(s: &str) -> bool {
    if RESERVED_WORDS.contains(&s) {
        return false;
    }
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Closed numeric interval shared by a variable's membership functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniverseInterval {
    lo: f64,
    hi: f64,
}

impl UniverseInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, FuzzyError> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(FuzzyError::InvalidUniverse { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// The `[0, 1]` interval used by the default tDTSW variables.
    pub fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Clamps a finite score to the interval.
    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lo..=self.hi).contains(&x)
    }
}

/// Piecewise-linear membership function shapes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MembershipFunction {
    /// Triangle with feet `a`, `c` and peak `b`.
    Triangular { a: f64, b: f64, c: f64 },
    /// Trapezoid with feet `a`, `d` and plateau `[b, c]`.
    Trapezoidal { a: f64, b: f64, c: f64, d: f64 },
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, FuzzyError> {
        let pts = [a, b, c];
        if pts.iter().any(|p| !p.is_finite()) || !(a <= b && b <= c) {
            return Err(FuzzyError::InvalidBreakpoints(pts.to_vec()));
        }
        Ok(Self::Triangular { a, b, c })
    }

    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        let pts = [a, b, c, d];
        if pts.iter().any(|p| !p.is_finite()) || !(a <= b && b <= c && c <= d) {
            return Err(FuzzyError::InvalidBreakpoints(pts.to_vec()));
        }
        Ok(Self::Trapezoidal { a, b, c, d })
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Self::Triangular { a, b, c } => vec![a, b, c],
            Self::Trapezoidal { a, b, c, d } => vec![a, b, c, d],
        }
    }

    /// Midpoint of the region where the degree reaches 1 (the peak for a
    /// triangle, the plateau center for a trapezoid). Used as the default
    /// representative point of a label in scenario grids.
    pub fn peak_center(&self) -> f64 {
        match *self {
            Self::Triangular { b, .. } => b,
            Self::Trapezoidal { b, c, .. } => (b + c) / 2.0,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::Triangular { a, b, c } => {
                if x < a || x > c {
                    0.0
                } else if x == b {
                    // Covers degenerate ramps (a == b or b == c) exactly.
                    1.0
                } else if x < b {
                    (x - a) / (b - a)
                } else {
                    (c - x) / (c - b)
                }
            }
            Self::Trapezoidal { a, b, c, d } => {
                if x < a || x > d {
                    0.0
                } else if x >= b && x <= c {
                    1.0
                } else if x < b {
                    (x - a) / (b - a)
                } else {
                    (d - x) / (d - c)
                }
            }
        }
    }
}

/// Evaluates a membership function at `x`, clamping `x` to the universe first.
pub fn membership(
    mf: &MembershipFunction,
    x: f64,
    universe: UniverseInterval,
) -> Result<f64, FuzzyError> {
    if !x.is_finite() {
        return Err(FuzzyError::NonFiniteInput(x));
    }
    Ok(mf.eval(universe.clamp(x)))
}

/// Named linguistic value of a variable (e.g. `Low`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FuzzyLabel(String);

impl FuzzyLabel {
    pub fn new(name: impl Into<String>) -> Result<Self, FuzzyError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(FuzzyError::InvalidIdentifier(name));
        }
        Ok(Self(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for FuzzyLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// A variable over a numeric universe with ordered, labeled membership
/// functions. Term order is the label ranking: index 0 is the lowest label,
/// which drives tie-breaking and color mapping downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    universe: UniverseInterval,
    terms: Vec<(FuzzyLabel, MembershipFunction)>,
}

impl LinguisticVariable {
    pub fn new(
        name: impl Into<String>,
        universe: UniverseInterval,
        terms: Vec<(FuzzyLabel, MembershipFunction)>,
    ) -> Result<Self, FuzzyError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(FuzzyError::InvalidIdentifier(name));
        }
        if terms.is_empty() {
            return Err(FuzzyError::NoTerms(name));
        }
        for (i, (label, mf)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(other, _)| other == label) {
                return Err(FuzzyError::DuplicateLabel(label.name().to_owned()));
            }
            for value in mf.breakpoints() {
                if !universe.contains(value) {
                    return Err(FuzzyError::BreakpointOutsideUniverse {
                        label: label.name().to_owned(),
                        value,
                        lo: universe.lo(),
                        hi: universe.hi(),
                    });
                }
            }
        }
        Ok(Self {
            name,
            universe,
            terms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> UniverseInterval {
        self.universe
    }

    pub fn terms(&self) -> &[(FuzzyLabel, MembershipFunction)] {
        &self.terms
    }

    pub fn term(&self, label: &str) -> Option<&MembershipFunction> {
        self.terms
            .iter()
            .find(|(l, _)| l.name() == label)
            .map(|(_, mf)| mf)
    }

    /// Rank of a label in the declared order (0 = lowest).
    pub fn label_rank(&self, label: &str) -> Option<usize> {
        self.terms.iter().position(|(l, _)| l.name() == label)
    }

    /// Computes the degree of every term at the crisp score `x`.
    pub fn fuzzify(&self, x: f64) -> Result<MembershipVector, FuzzyError> {
        let mut entries = Vec::with_capacity(self.terms.len());
        for (label, mf) in &self.terms {
            entries.push((label.clone(), membership(mf, x, self.universe)?));
        }
        Ok(MembershipVector { entries })
    }
}

/// Per-label degrees produced by fuzzifying one crisp score; keeps the
/// source variable's term order.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipVector {
    entries: Vec<(FuzzyLabel, f64)>,
}

impl MembershipVector {
    /// Builds a vector directly from `(label, degree)` pairs; degrees are
    /// expected in `[0, 1]` and are clamped to it.
    pub fn from_degrees(entries: Vec<(FuzzyLabel, f64)>) -> Self {
        let entries = entries
            .into_iter()
            .map(|(l, d)| (l, d.clamp(0.0, 1.0)))
            .collect();
        Self { entries }
    }

    pub fn degree(&self, label: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(l, _)| l.name() == label)
            .map(|(_, d)| *d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FuzzyLabel, f64)> {
        self.entries.iter().map(|(l, d)| (l, *d))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|(_, d)| d).sum()
    }

    /// Label with the highest degree; ties break toward the lower rank.
    pub fn argmax(&self) -> Option<&FuzzyLabel> {
        let mut best: Option<(&FuzzyLabel, f64)> = None;
        for (label, degree) in self.iter() {
            match best {
                Some((_, current)) if degree <= current => {}
                _ => best = Some((label, degree)),
            }
        }
        best.map(|(l, _)| l)
    }
}

impl Serialize for MembershipVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (label, degree) in &self.entries {
            map.serialize_entry(label.name(), degree)?;
        }
        map.end()
    }
}

/// The Democracy, Transparency and Social Wellbeing variables: each over
/// `[0, 1]` with the symmetric triangular Ruspini partition
/// `Low = tri(0, 0, 0.5)`, `Medium = tri(0, 0.5, 1)`, `High = tri(0.5, 1, 1)`,
/// so per-label degrees sum to 1 everywhere on the universe.
pub fn default_tdtsw_variables() -> (LinguisticVariable, LinguisticVariable, LinguisticVariable) {
    let make = |name: &str| {
        let terms = vec![
            (
                FuzzyLabel::new("Low").expect("static label"),
                MembershipFunction::triangular(0.0, 0.0, 0.5).expect("static breakpoints"),
            ),
            (
                FuzzyLabel::new("Medium").expect("static label"),
                MembershipFunction::triangular(0.0, 0.5, 1.0).expect("static breakpoints"),
            ),
            (
                FuzzyLabel::new("High").expect("static label"),
                MembershipFunction::triangular(0.5, 1.0, 1.0).expect("static breakpoints"),
            ),
        ];
        LinguisticVariable::new(name, UniverseInterval::unit(), terms)
            .expect("default variable is valid")
    };
    (make("D"), make("T"), make("SW"))
}
