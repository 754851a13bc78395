//! IF-THEN fuzzy rules, firing-strength evaluation and the canonical
//! nine-rule Democracy/Transparency rule base.

use thiserror::Error;

use crate::fuzzy::{
    default_tdtsw_variables, is_identifier, FuzzyLabel, LinguisticVariable, MembershipVector,
};

/// Errors raised while building rule bases or evaluating firings.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error("'{0}' is not a valid identifier")]
    InvalidIdentifier(String),
    #[error("rule '{0}' has no antecedents")]
    NoAntecedents(String),
    #[error("rule '{id}' repeats antecedent variable '{variable}'")]
    DuplicateAntecedentVariable { id: String, variable: String },
    #[error("rule '{id}' uses its consequent variable '{variable}' in an antecedent")]
    ConsequentInAntecedents { id: String, variable: String },
    #[error("duplicate rule id '{0}'")]
    DuplicateRuleId(String),
    #[error("rule base is empty")]
    EmptyRuleBase,
    #[error("duplicate variable '{0}' in vocabulary")]
    DuplicateVariable(String),
    #[error("output variable '{0}' also appears as an input")]
    OutputIsInput(String),
    #[error("rule '{id}' references unknown variable '{variable}'")]
    UnknownVariable { id: String, variable: String },
    #[error("rule '{id}': unknown label '{label}' for variable {variable}")]
    UnknownLabel {
        id: String,
        variable: String,
        label: String,
    },
    #[error("rule '{id}' concludes on '{found}' but the output variable is '{output}'")]
    WrongConsequentVariable {
        id: String,
        found: String,
        output: String,
    },
    #[error("no fuzzified degrees supplied for variable '{variable}' (rule '{id}')")]
    MissingFuzzified { id: String, variable: String },
}

/// One `<variable> IS <label>` condition or conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleAtom {
    variable: String,
    label: String,
}

impl RuleAtom {
    pub fn new(variable: impl Into<String>, label: impl Into<String>) -> Result<Self, RuleError> {
        let variable = variable.into();
        let label = label.into();
        for name in [&variable, &label] {
            if !is_identifier(name) {
                return Err(RuleError::InvalidIdentifier(name.clone()));
            }
        }
        Ok(Self { variable, label })
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// An IF-THEN rule: a conjunction of antecedent atoms and one consequent.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    id: String,
    antecedents: Vec<RuleAtom>,
    consequent: RuleAtom,
}

impl Rule {
    pub fn new(
        id: impl Into<String>,
        antecedents: Vec<RuleAtom>,
        consequent: RuleAtom,
    ) -> Result<Self, RuleError> {
        let id = id.into();
        if !is_identifier(&id) {
            return Err(RuleError::InvalidIdentifier(id));
        }
        if antecedents.is_empty() {
            return Err(RuleError::NoAntecedents(id));
        }
        for (i, atom) in antecedents.iter().enumerate() {
            if antecedents[..i]
                .iter()
                .any(|other| other.variable() == atom.variable())
            {
                return Err(RuleError::DuplicateAntecedentVariable {
                    id,
                    variable: atom.variable().to_owned(),
                });
            }
            if atom.variable() == consequent.variable() {
                return Err(RuleError::ConsequentInAntecedents {
                    id,
                    variable: atom.variable().to_owned(),
                });
            }
        }
        Ok(Self {
            id,
            antecedents,
            consequent,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn antecedents(&self) -> &[RuleAtom] {
        &self.antecedents
    }

    pub fn consequent(&self) -> &RuleAtom {
        &self.consequent
    }
}

/// The linguistic variables a rule base ranges over: the ordered input
/// variables plus the single output variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    inputs: Vec<LinguisticVariable>,
    output: LinguisticVariable,
}

impl Vocabulary {
    pub fn new(inputs: Vec<LinguisticVariable>, output: LinguisticVariable) -> Result<Self, RuleError> {
        for (i, var) in inputs.iter().enumerate() {
            if inputs[..i].iter().any(|other| other.name() == var.name()) {
                return Err(RuleError::DuplicateVariable(var.name().to_owned()));
            }
            if var.name() == output.name() {
                return Err(RuleError::OutputIsInput(output.name().to_owned()));
            }
        }
        Ok(Self { inputs, output })
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &LinguisticVariable {
        &self.output
    }

    pub fn input(&self, name: &str) -> Option<&LinguisticVariable> {
        self.inputs.iter().find(|v| v.name() == name)
    }
}

/// Fuzzified degrees for each input variable, in vocabulary order.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzifiedInputs {
    entries: Vec<(String, MembershipVector)>,
}

impl FuzzifiedInputs {
    pub fn new(entries: Vec<(String, MembershipVector)>) -> Self {
        Self { entries }
    }

    pub fn get(&self, variable: &str) -> Option<&MembershipVector> {
        self.entries
            .iter()
            .find(|(name, _)| name == variable)
            .map(|(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &MembershipVector)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), v))
    }
}

/// Degree to which a rule's antecedent holds: the minimum over its atoms of
/// the fuzzified degree of the named label.
pub fn firing_strength(rule: &Rule, fuzzified: &FuzzifiedInputs) -> Result<f64, RuleError> {
    let mut strength = f64::INFINITY;
    for atom in rule.antecedents() {
        let vector = fuzzified
            .get(atom.variable())
            .ok_or_else(|| RuleError::MissingFuzzified {
                id: rule.id().to_owned(),
                variable: atom.variable().to_owned(),
            })?;
        let degree = vector
            .degree(atom.label())
            .ok_or_else(|| RuleError::UnknownLabel {
                id: rule.id().to_owned(),
                variable: atom.variable().to_owned(),
                label: atom.label().to_owned(),
            })?;
        strength = strength.min(degree);
    }
    Ok(strength)
}

/// An ordered set of rules over a shared vocabulary with one output variable.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    vocabulary: Vocabulary,
    rules: Vec<Rule>,
}

impl RuleBase {
    pub fn new(vocabulary: Vocabulary, rules: Vec<Rule>) -> Result<Self, RuleError> {
        if rules.is_empty() {
            return Err(RuleError::EmptyRuleBase);
        }
        for (i, rule) in rules.iter().enumerate() {
            if rules[..i].iter().any(|other| other.id() == rule.id()) {
                return Err(RuleError::DuplicateRuleId(rule.id().to_owned()));
            }
            for atom in rule.antecedents() {
                let var = vocabulary.input(atom.variable()).ok_or_else(|| {
                    RuleError::UnknownVariable {
                        id: rule.id().to_owned(),
                        variable: atom.variable().to_owned(),
                    }
                })?;
                if var.label_rank(atom.label()).is_none() {
                    return Err(RuleError::UnknownLabel {
                        id: rule.id().to_owned(),
                        variable: atom.variable().to_owned(),
                        label: atom.label().to_owned(),
                    });
                }
            }
            let consequent = rule.consequent();
            if consequent.variable() != vocabulary.output().name() {
                return Err(RuleError::WrongConsequentVariable {
                    id: rule.id().to_owned(),
                    found: consequent.variable().to_owned(),
                    output: vocabulary.output().name().to_owned(),
                });
            }
            if vocabulary.output().label_rank(consequent.label()).is_none() {
                return Err(RuleError::UnknownLabel {
                    id: rule.id().to_owned(),
                    variable: consequent.variable().to_owned(),
                    label: consequent.label().to_owned(),
                });
            }
        }
        Ok(Self { vocabulary, rules })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id() == id)
    }
}

/// The nine tDTSW rules over the default variables, in R1..R9 order:
/// (L,L)->L, (L,M)->M, (L,H)->H, (M,L)->M, (M,M)->M, (M,H)->H,
/// (H,L)->H, (H,M)->H, (H,H)->H.
pub fn default_tdtsw_rules() -> RuleBase {
    const TABLE: [(&str, &str, &str); 9] = [
        ("Low", "Low", "Low"),
        ("Low", "Medium", "Medium"),
        ("Low", "High", "High"),
        ("Medium", "Low", "Medium"),
        ("Medium", "Medium", "Medium"),
        ("Medium", "High", "High"),
        ("High", "Low", "High"),
        ("High", "Medium", "High"),
        ("High", "High", "High"),
    ];
    let (d, t, sw) = default_tdtsw_variables();
    let vocabulary = Vocabulary::new(vec![d, t], sw).expect("default vocabulary is valid");
    let rules = TABLE
        .iter()
        .enumerate()
        .map(|(i, (dl, tl, swl))| {
            Rule::new(
                format!("R{}", i + 1),
                vec![
                    RuleAtom::new("D", *dl).expect("static atom"),
                    RuleAtom::new("T", *tl).expect("static atom"),
                ],
                RuleAtom::new("SW", *swl).expect("static atom"),
            )
            .expect("default rule is valid")
        })
        .collect();
    RuleBase::new(vocabulary, rules).expect("default rule base is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::FuzzyLabel;

    fn degrees(pairs: &[(&str, &[(&str, f64)])]) -> FuzzifiedInputs {
        FuzzifiedInputs::new(
            pairs
                .iter()
                .map(|(var, labels)| {
                    let entries = labels
                        .iter()
                        .map(|(l, d)| (FuzzyLabel::new(*l).unwrap(), *d))
                        .collect();
                    ((*var).to_owned(), MembershipVector::from_degrees(entries))
                })
                .collect(),
        )
    }

    #[test]
    fn default_base_has_nine_rules_in_paper_order() {
        let base = default_tdtsw_rules();
        assert_eq!(base.rules().len(), 9);

        let r1 = base.rule("R1").unwrap();
        assert_eq!(r1.antecedents()[0].variable(), "D");
        assert_eq!(r1.antecedents()[0].label(), "Low");
        assert_eq!(r1.antecedents()[1].variable(), "T");
        assert_eq!(r1.antecedents()[1].label(), "Low");
        assert_eq!(r1.consequent().variable(), "SW");
        assert_eq!(r1.consequent().label(), "Low");

        let r7 = base.rule("R7").unwrap();
        assert_eq!(r7.antecedents()[0].label(), "High");
        assert_eq!(r7.antecedents()[1].label(), "Low");
        assert_eq!(r7.consequent().label(), "High");
    }

    #[test]
    fn default_base_covers_every_label_pair_once() {
        let base = default_tdtsw_rules();
        let mut seen = std::collections::HashSet::new();
        for rule in base.rules() {
            let key = (
                rule.antecedents()[0].label().to_owned(),
                rule.antecedents()[1].label().to_owned(),
            );
            assert!(seen.insert(key), "duplicate cell in {:?}", rule.id());
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn default_base_is_symmetric_in_d_and_t() {
        let base = default_tdtsw_rules();
        let consequent_of = |a: &str, b: &str| {
            base.rules()
                .iter()
                .find(|r| r.antecedents()[0].label() == a && r.antecedents()[1].label() == b)
                .map(|r| r.consequent().label().to_owned())
                .unwrap()
        };
        for a in ["Low", "Medium", "High"] {
            for b in ["Low", "Medium", "High"] {
                assert_eq!(consequent_of(a, b), consequent_of(b, a));
            }
        }
    }

    #[test]
    fn firing_takes_minimum_of_antecedent_degrees() {
        let base = default_tdtsw_rules();
        let f = degrees(&[
            ("D", &[("Low", 0.0), ("Medium", 0.5), ("High", 0.0)]),
            ("T", &[("Low", 0.0), ("Medium", 0.7), ("High", 0.0)]),
        ]);
        assert_eq!(firing_strength(base.rule("R5").unwrap(), &f).unwrap(), 0.5);
    }

    #[test]
    fn zero_degree_absorbs_the_minimum() {
        let base = default_tdtsw_rules();
        let f = degrees(&[
            ("D", &[("Low", 0.0), ("Medium", 0.0), ("High", 0.0)]),
            ("T", &[("Low", 0.9), ("Medium", 0.0), ("High", 0.0)]),
        ]);
        assert_eq!(firing_strength(base.rule("R1").unwrap(), &f).unwrap(), 0.0);
    }

    #[test]
    fn saturated_antecedents_fire_fully() {
        let base = default_tdtsw_rules();
        let f = degrees(&[
            ("D", &[("Low", 0.0), ("Medium", 0.0), ("High", 1.0)]),
            ("T", &[("Low", 0.0), ("Medium", 0.0), ("High", 1.0)]),
        ]);
        assert_eq!(firing_strength(base.rule("R9").unwrap(), &f).unwrap(), 1.0);
    }

    #[test]
    fn firing_errors_name_the_missing_atom() {
        let base = default_tdtsw_rules();
        let missing_var = degrees(&[("D", &[("Low", 1.0), ("Medium", 0.0), ("High", 0.0)])]);
        assert_eq!(
            firing_strength(base.rule("R1").unwrap(), &missing_var),
            Err(RuleError::MissingFuzzified {
                id: "R1".into(),
                variable: "T".into()
            })
        );

        let missing_label = degrees(&[
            ("D", &[("Medium", 0.5)]),
            ("T", &[("Low", 0.5), ("Medium", 0.5), ("High", 0.0)]),
        ]);
        assert_eq!(
            firing_strength(base.rule("R1").unwrap(), &missing_label),
            Err(RuleError::UnknownLabel {
                id: "R1".into(),
                variable: "D".into(),
                label: "Low".into()
            })
        );
    }

    #[test]
    fn rule_invariants_are_enforced() {
        let atom = |v: &str, l: &str| RuleAtom::new(v, l).unwrap();
        assert_eq!(
            Rule::new("R1", vec![], atom("SW", "Low")),
            Err(RuleError::NoAntecedents("R1".into()))
        );
        assert_eq!(
            Rule::new(
                "R1",
                vec![atom("D", "Low"), atom("D", "High")],
                atom("SW", "Low")
            ),
            Err(RuleError::DuplicateAntecedentVariable {
                id: "R1".into(),
                variable: "D".into()
            })
        );
        assert_eq!(
            Rule::new("R1", vec![atom("SW", "Low")], atom("SW", "Low")),
            Err(RuleError::ConsequentInAntecedents {
                id: "R1".into(),
                variable: "SW".into()
            })
        );
        // single-antecedent rules are allowed
        assert!(Rule::new("R1", vec![atom("D", "Low")], atom("SW", "Low")).is_ok());
    }

    #[test]
    fn rulebase_validates_atoms_against_vocabulary() {
        let (d, t, sw) = default_tdtsw_variables();
        let vocabulary = Vocabulary::new(vec![d, t], sw).unwrap();
        let atom = |v: &str, l: &str| RuleAtom::new(v, l).unwrap();

        let unknown_var = Rule::new("R1", vec![atom("X", "Low")], atom("SW", "Low")).unwrap();
        assert_eq!(
            RuleBase::new(vocabulary.clone(), vec![unknown_var]),
            Err(RuleError::UnknownVariable {
                id: "R1".into(),
                variable: "X".into()
            })
        );

        let unknown_label = Rule::new("R1", vec![atom("D", "Loww")], atom("SW", "Low")).unwrap();
        assert_eq!(
            RuleBase::new(vocabulary.clone(), vec![unknown_label]),
            Err(RuleError::UnknownLabel {
                id: "R1".into(),
                variable: "D".into(),
                label: "Loww".into()
            })
        );

        let wrong_out = Rule::new("R1", vec![atom("D", "Low")], atom("T", "Low")).unwrap();
        assert_eq!(
            RuleBase::new(vocabulary.clone(), vec![wrong_out]),
            Err(RuleError::WrongConsequentVariable {
                id: "R1".into(),
                found: "T".into(),
                output: "SW".into()
            })
        );

        assert_eq!(
            RuleBase::new(vocabulary.clone(), vec![]),
            Err(RuleError::EmptyRuleBase)
        );

        let ok = Rule::new("R1", vec![atom("D", "Low")], atom("SW", "Low")).unwrap();
        let dup = ok.clone();
        assert_eq!(
            RuleBase::new(vocabulary, vec![ok, dup]),
            Err(RuleError::DuplicateRuleId("R1".into()))
        );
    }
}
