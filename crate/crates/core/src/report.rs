//! Verdicts of identity checks, with failure witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graded::{render_word, MultiMap, Space, Word};

/// One nonzero coefficient of a defect: the coefficient as `p/q` and the
/// output basis symbols.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DefectTerm {
    pub coeff: String,
    pub output: Vec<String>,
}

/// The smallest input basis tuple on which a defect map is nonzero,
/// together with the value of the defect there.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub symbols: Vec<String>,
    pub defect: Vec<DefectTerm>,
}

impl Witness {
    /// Reads the witness off the lexicographically first stored entry.
    pub fn from_defect(defect: &MultiMap) -> Option<Witness> {
        let (w, o) = defect.entries().iter().next()?;
        Some(Self::at(defect.domain(), defect.codomain(), w, o.iter()))
    }

    pub(crate) fn at<'a>(
        domain: &[Space],
        codomain: &[Space],
        w: &Word,
        terms: impl Iterator<Item = (&'a Word, &'a crate::graded::Q)>,
    ) -> Witness {
        Witness {
            indices: w.to_vec(),
            symbols: domain
                .iter()
                .zip(w)
                .map(|(s, &i)| s.symbol(i).to_string())
                .collect(),
            defect: terms
                .map(|(v, c)| DefectTerm {
                    coeff: crate::io::format_rational(c),
                    output: codomain
                        .iter()
                        .zip(v)
                        .map(|(s, &i)| s.symbol(i).to_string())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        let terms: Vec<String> = self
            .defect
            .iter()
            .map(|t| {
                if t.output.is_empty() {
                    t.coeff.clone()
                } else {
                    format!("{} {}", t.coeff, t.output.join("⊗"))
                }
            })
            .collect();
        format!("({}) ↦ {}", self.symbols.join(", "), terms.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    /// Number of input tuples on which the defect is nonzero.
    #[serde(default)]
    pub failing_tuples: usize,
}

impl CheckOutcome {
    pub fn pass(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            witness: None,
            failing_tuples: 0,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Witness, failing_tuples: usize) -> Self {
        Self {
            name: name.into(),
            passed: false,
            witness: Some(witness),
            failing_tuples,
        }
    }

    /// Passes iff the defect map is zero.
    pub fn from_defect(name: impl Into<String>, defect: &MultiMap) -> Self {
        match Witness::from_defect(defect) {
            None => Self::pass(name),
            Some(w) => Self::fail(name, w, defect.entries().len()),
        }
    }
}

/// Ordered list of check outcomes plus free-form notes (conventions used,
/// modes selected).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl AxiomReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(outcome: CheckOutcome) -> Self {
        Self {
            checks: vec![outcome],
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, outcome: CheckOutcome) {
        self.checks.push(outcome);
    }

    pub fn push_defect(&mut self, name: impl Into<String>, defect: &MultiMap) {
        self.checks.push(CheckOutcome::from_defect(name, defect));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn merge(&mut self, other: AxiomReport) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Copy with checks sorted by (name, witness tuple), the order used in
    /// serialized reports.
    pub fn sorted(&self) -> AxiomReport {
        let mut out = self.clone();
        out.checks.sort_by(|a, b| {
            (a.name.as_str(), a.witness.as_ref().map(|w| &w.indices))
                .cmp(&(b.name.as_str(), b.witness.as_ref().map(|w| &w.indices)))
        });
        out
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed {
                writeln!(f, "pass  {}", c.name)?;
            } else {
                let w = c.witness.as_ref().map(|w| w.render()).unwrap_or_default();
                writeln!(f, "FAIL  {}  {} [{} tuples]", c.name, w, c.failing_tuples)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note  {n}")?;
        }
        Ok(())
    }
}

/// Renders an input word for messages.
pub fn describe(domain: &[Space], w: &[usize]) -> String {
    render_word(domain, w)
}
