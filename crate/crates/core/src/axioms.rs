//! Propositional representation of the governance axiom, postulate and
//! theorem systems (aDTSW, pDTSW, tDTSW), with evaluation, per-postulate
//! checks and brute-force model enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors raised by formula evaluation and enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("unknown atom '{0}'")]
    UnknownAtom(String),
    #[error("assignment does not cover atom '{0}'")]
    MissingAtom(&'static str),
    #[error("malformed assignment entry '{0}' (expected Name=0 or Name=1)")]
    MalformedAssignment(String),
    #[error("unknown postulate {0} (valid ids are 1..=14)")]
    UnknownPostulate(u8),
    #[error("unknown formula '{0}' (expected adtsw, pdtsw or tdtsw)")]
    UnknownFormula(String),
    #[error("formula has {count} atoms; exhaustive enumeration is capped at {max}")]
    TooManyAtoms { count: usize, max: usize },
}

/// The fixed propositional vocabulary. Decorated symbols (increase arrows
/// and probabilistic markers) are distinct atoms; declaration order is the
/// lexicographic order of the printed names, so the derived `Ord` sorts
/// atoms exactly as their names do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Accountability
    A,
    /// Citizen Contentment
    CContent,
    /// Citizen Participation
    CPart,
    /// Democracy
    D,
    /// Effective Governance
    Eg,
    /// Information-Enabled Engagement
    EEngage,
    /// Information
    I,
    /// Probabilistic Effective Governance
    PEg,
    /// Probabilistic Social Wellbeing increase
    PSwUp,
    /// Probabilistic Trust increase
    PTrustUp,
    /// Reforms
    R,
    /// Reinforced Democracy
    Rd,
    /// Social Wellbeing
    Sw,
    /// Social Wellbeing increase
    SwUp,
    /// Cumulative Social Wellbeing increase
    SwUpUp,
    /// Transparency
    T,
    /// Trust
    Trust,
    /// Trust increase
    TrustUp,
}

impl Atom {
    pub const ALL: [Atom; 18] = [
        Atom::A,
        Atom::CContent,
        Atom::CPart,
        Atom::D,
        Atom::Eg,
        Atom::EEngage,
        Atom::I,
        Atom::PEg,
        Atom::PSwUp,
        Atom::PTrustUp,
        Atom::R,
        Atom::Rd,
        Atom::Sw,
        Atom::SwUp,
        Atom::SwUpUp,
        Atom::T,
        Atom::Trust,
        Atom::TrustUp,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Atom::A => "A",
            Atom::CContent => "C_content",
            Atom::CPart => "C_part",
            Atom::D => "D",
            Atom::Eg => "EG",
            Atom::EEngage => "E_engage",
            Atom::I => "I",
            Atom::PEg => "P_EG",
            Atom::PSwUp => "P_SW_up",
            Atom::PTrustUp => "P_Trust_up",
            Atom::R => "R",
            Atom::Rd => "RD",
            Atom::Sw => "SW",
            Atom::SwUp => "SW_up",
            Atom::SwUpUp => "SW_upup",
            Atom::T => "T",
            Atom::Trust => "Trust",
            Atom::TrustUp => "Trust_up",
        }
    }

    pub fn from_name(name: &str) -> Option<Atom> {
        Atom::ALL.iter().copied().find(|a| a.name() == name)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Propositional abstract syntax over the fixed vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    /// Conjunction of a non-empty list, folded left.
    pub fn conjunction(parts: Vec<Formula>) -> Self {
        let mut iter = parts.into_iter();
        let first = iter.next().expect("conjunction of at least one formula");
        iter.fold(first, Formula::and)
    }

    /// The atoms occurring in the formula, in ascending order.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut set = BTreeSet::new();
        self.collect_atoms(&mut set);
        set
    }

    fn collect_atoms(&self, into: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                into.insert(*a);
            }
            Formula::Not(f) => f.collect_atoms(into),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_atoms(into);
                r.collect_atoms(into);
            }
        }
    }

    /// Classical two-valued evaluation; `p -> q` is `!p || q`.
    pub fn eval(&self, assignment: &Assignment) -> Result<bool, AxiomError> {
        Ok(match self {
            Formula::Atom(a) => assignment
                .get(*a)
                .ok_or(AxiomError::MissingAtom(a.name()))?,
            Formula::Not(f) => !f.eval(assignment)?,
            Formula::And(l, r) => l.eval(assignment)? && r.eval(assignment)?,
            Formula::Or(l, r) => l.eval(assignment)? || r.eval(assignment)?,
            Formula::Implies(l, r) => !l.eval(assignment)? || r.eval(assignment)?,
        })
    }
}

/// Total map from atoms to truth values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    values: BTreeMap<Atom, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Atom, bool)>) -> Self {
        Self {
            values: pairs.into_iter().collect(),
        }
    }

    /// Every atom of the vocabulary set to `value`.
    pub fn all(value: bool) -> Self {
        Self::from_pairs(Atom::ALL.iter().map(|a| (*a, value)))
    }

    pub fn set(&mut self, atom: Atom, value: bool) -> &mut Self {
        self.values.insert(atom, value);
        self
    }

    pub fn get(&self, atom: Atom) -> Option<bool> {
        self.values.get(&atom).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, bool)> + '_ {
        self.values.iter().map(|(a, v)| (*a, *v))
    }
}

/// Parses the `Name=0,Name=1,...` wire form.
impl FromStr for Assignment {
    type Err = AxiomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut assignment = Assignment::new();
        for entry in s.split(',') {
            let entry = entry.trim();
            if entry.is_empty() {
                return Err(AxiomError::MalformedAssignment(entry.to_owned()));
            }
            let (name, value) = entry
                .split_once('=')
                .ok_or_else(|| AxiomError::MalformedAssignment(entry.to_owned()))?;
            let atom = Atom::from_name(name.trim())
                .ok_or_else(|| AxiomError::UnknownAtom(name.trim().to_owned()))?;
            let value = match value.trim() {
                "0" => false,
                "1" => true,
                _ => return Err(AxiomError::MalformedAssignment(entry.to_owned())),
            };
            assignment.set(atom, value);
        }
        Ok(assignment)
    }
}

/// Prints `Name=0,Name=1,...` with atoms in lexicographic order.
impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (atom, value)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}={}", atom.name(), u8::from(*value))?;
        }
        Ok(())
    }
}

/// The three named formula systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaName {
    Adtsw,
    Pdtsw,
    Tdtsw,
}

impl FromStr for FormulaName {
    type Err = AxiomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adtsw" => Ok(FormulaName::Adtsw),
            "pdtsw" => Ok(FormulaName::Pdtsw),
            "tdtsw" => Ok(FormulaName::Tdtsw),
            other => Err(AxiomError::UnknownFormula(other.to_owned())),
        }
    }
}

impl fmt::Display for FormulaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaName::Adtsw => "adtsw",
            FormulaName::Pdtsw => "pdtsw",
            FormulaName::Tdtsw => "tdtsw",
        })
    }
}

fn atom(a: Atom) -> Formula {
    Formula::atom(a)
}

fn implies(lhs: Formula, rhs: Formula) -> Formula {
    Formula::implies(lhs, rhs)
}

fn and(lhs: Formula, rhs: Formula) -> Formula {
    Formula::and(lhs, rhs)
}

/// Builds one of the three closed formulas.
///
/// aDTSW conjoins the eight axiom relationships (the source lists them
/// twice; conjunction is idempotent so duplicates are dropped). pDTSW is
/// the fourteen-postulate conjunction. tDTSW conjoins the bare Democracy
/// atom with the eleven theorem implications of its closing form, whose
/// final conjunct reuses the probabilistic wellbeing marker.
pub fn build_formula(name: FormulaName) -> Formula {
    use Atom::*;
    match name {
        FormulaName::Adtsw => Formula::conjunction(vec![
            implies(atom(D), atom(T)),
            implies(atom(T), atom(I)),
            implies(atom(I), atom(A)),
            implies(atom(I), atom(CPart)),
            implies(and(atom(A), atom(CPart)), atom(D)),
            implies(atom(D), atom(Sw)),
            implies(atom(T), atom(Sw)),
            implies(atom(R), and(atom(D), atom(T))),
        ]),
        FormulaName::Pdtsw => Formula::conjunction(vec![
            implies(atom(D), and(atom(T), atom(Sw))),
            implies(atom(T), atom(I)),
            implies(atom(I), atom(A)),
            implies(and(atom(I), atom(A)), atom(EEngage)),
            implies(and(atom(D), atom(A)), atom(Rd)),
            implies(atom(D), and(atom(SwUp), atom(CContent))),
            implies(atom(T), atom(SwUp)),
            implies(atom(R), and(atom(D), atom(T))),
            implies(and(atom(D), atom(T)), atom(SwUpUp)),
            implies(atom(T), atom(TrustUp)),
            implies(and(atom(T), atom(Trust)), atom(Eg)),
            implies(and(atom(D), atom(T)), atom(PSwUp)),
            implies(atom(T), atom(PTrustUp)),
            implies(and(atom(T), atom(Trust)), atom(PEg)),
        ]),
        FormulaName::Tdtsw => Formula::conjunction(vec![
            atom(D),
            implies(atom(T), atom(I)),
            implies(atom(I), atom(A)),
            implies(and(atom(I), atom(A)), atom(EEngage)),
            implies(and(atom(D), atom(A)), atom(Rd)),
            implies(atom(D), and(atom(SwUp), atom(CContent))),
            implies(atom(T), atom(SwUp)),
            implies(atom(R), and(atom(D), atom(T))),
            implies(and(atom(D), atom(T)), atom(SwUpUp)),
            implies(atom(T), atom(TrustUp)),
            implies(and(atom(T), atom(Trust)), atom(Eg)),
            implies(and(atom(D), atom(T)), atom(PSwUp)),
        ]),
    }
}

/// The individual postulate formulas, ids 1 through 14.
pub fn postulate(id: u8) -> Result<Formula, AxiomError> {
    use Atom::*;
    Ok(match id {
        1 => implies(atom(D), and(atom(T), atom(Sw))),
        2 => implies(atom(T), atom(I)),
        3 => implies(atom(I), atom(A)),
        4 => implies(and(atom(I), atom(A)), atom(EEngage)),
        5 => implies(and(atom(D), atom(A)), atom(Rd)),
        6 => implies(atom(D), and(atom(SwUp), atom(CContent))),
        7 => implies(atom(T), atom(SwUp)),
        8 => implies(atom(R), and(atom(D), atom(T))),
        9 => implies(and(atom(D), atom(T)), atom(SwUpUp)),
        10 => implies(atom(T), atom(TrustUp)),
        11 => implies(and(atom(T), atom(Trust)), atom(Eg)),
        12 => implies(and(atom(D), atom(T)), atom(PSwUp)),
        13 => implies(atom(T), atom(PTrustUp)),
        14 => implies(and(atom(T), atom(Trust)), atom(PEg)),
        other => return Err(AxiomError::UnknownPostulate(other)),
    })
}

/// Evaluates postulate `id` under `assignment`.
pub fn check_postulate(id: u8, assignment: &Assignment) -> Result<bool, AxiomError> {
    postulate(id)?.eval(assignment)
}

/// Exhaustive enumeration cap for [`models`].
pub const MAX_ENUMERATED_ATOMS: usize = 16;

/// Result of enumerating every assignment over a formula's atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelReport {
    /// The formula's atoms in ascending (name) order.
    pub atoms: Vec<Atom>,
    /// Number of satisfying assignments.
    pub satisfying: u64,
    /// Total assignments, `2^atoms.len()`.
    pub total: u64,
    /// The satisfying assignments in ascending order (first atom most
    /// significant, false before true), when listing was requested.
    pub models: Option<Vec<Assignment>>,
}

/// Counts (and optionally lists) the satisfying assignments of `formula`
/// by iterating all `2^n` assignments over its atom set.
pub fn models(formula: &Formula, list: bool) -> Result<ModelReport, AxiomError> {
    let atoms: Vec<Atom> = formula.atoms().into_iter().collect();
    if atoms.len() > MAX_ENUMERATED_ATOMS {
        return Err(AxiomError::TooManyAtoms {
            count: atoms.len(),
            max: MAX_ENUMERATED_ATOMS,
        });
    }
    let total = 1u64 << atoms.len();
    let mut satisfying = 0u64;
    let mut listing = list.then(Vec::new);
    for code in 0..total {
        let assignment = Assignment::from_pairs(atoms.iter().enumerate().map(|(i, a)| {
            let bit = atoms.len() - 1 - i;
            (*a, code >> bit & 1 == 1)
        }));
        if formula.eval(&assignment)? {
            satisfying += 1;
            if let Some(models) = listing.as_mut() {
                models.push(assignment);
            }
        }
    }
    Ok(ModelReport {
        atoms,
        satisfying,
        total,
        models: listing,
    })
}
