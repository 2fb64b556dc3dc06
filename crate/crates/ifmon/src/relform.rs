//! Sets of relational formulas as an abstract domain over state pairs,
//! with a sound syntactic entailment.
//!
//! A formula set denotes the minor states that stand in every listed
//! relation to the major state. Bigger sets constrain more, so the order
//! is reverse inclusion with a fault element on top: `Fault` over-approximates
//! nothing and absorbs everything.

use std::collections::BTreeSet;
use std::fmt;

use crate::lang::{BasicFormula, Expr, Lattice};
use crate::semantics::{eval_bool, eval_expr, State, StateSet};

/// An element of the formula-set domain: fault, or a finite conjunction of
/// basic formulas (the empty conjunction constrains nothing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaSet {
    Fault,
    Formulas(BTreeSet<BasicFormula>),
}

impl FromIterator<BasicFormula> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = BasicFormula>>(iter: I) -> FormulaSet {
        FormulaSet::Formulas(iter.into_iter().collect())
    }
}

impl FormulaSet {
    pub fn empty() -> FormulaSet {
        FormulaSet::Formulas(BTreeSet::new())
    }

    pub fn is_fault(&self) -> bool {
        matches!(self, FormulaSet::Fault)
    }

    /// Abstract order: reverse inclusion, fault on top.
    pub fn leq(&self, other: &FormulaSet) -> bool {
        match (self, other) {
            (_, FormulaSet::Fault) => true,
            (FormulaSet::Fault, _) => false,
            (FormulaSet::Formulas(a), FormulaSet::Formulas(b)) => b.is_subset(a),
        }
    }

    /// Join: set intersection, fault absorbing.
    pub fn join(&self, other: &FormulaSet) -> FormulaSet {
        match (self, other) {
            (FormulaSet::Fault, _) | (_, FormulaSet::Fault) => FormulaSet::Fault,
            (FormulaSet::Formulas(a), FormulaSet::Formulas(b)) => {
                FormulaSet::Formulas(a.intersection(b).cloned().collect())
            }
        }
    }

    /// Meet: set union. Fault is the top element, so meeting with it is
    /// the identity; monitors branch on fault before ever strengthening a
    /// set, so they only meet proper sets.
    pub fn meet(&self, other: &FormulaSet) -> FormulaSet {
        match (self, other) {
            (FormulaSet::Fault, x) | (x, FormulaSet::Fault) => x.clone(),
            (FormulaSet::Formulas(a), FormulaSet::Formulas(b)) => {
                FormulaSet::Formulas(a.union(b).cloned().collect())
            }
        }
    }
}

impl fmt::Display for FormulaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaSet::Fault => write!(f, "fault"),
            FormulaSet::Formulas(set) => {
                write!(f, "{{")?;
                for (i, phi) in set.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{phi}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Whether the pair (major, minor) satisfies one basic formula.
pub fn holds(phi: &BasicFormula, major: &State, minor: &State) -> bool {
    match phi {
        BasicFormula::Agree(e) => eval_expr(e, major) == eval_expr(e, minor),
        BasicFormula::Both(b) => eval_bool(b, major) && eval_bool(b, minor),
        BasicFormula::CondAgree(b, e) => {
            if eval_bool(b, major) && eval_bool(b, minor) {
                eval_expr(e, major) == eval_expr(e, minor)
            } else {
                true
            }
        }
    }
}

/// Best abstraction of a minor-state set relative to a major state: every
/// lattice formula the whole set satisfies. Fault maps to fault.
pub fn alpha(major: &State, s: &StateSet, lattice: &Lattice) -> FormulaSet {
    match s {
        StateSet::Fault => FormulaSet::Fault,
        StateSet::Set(set) => FormulaSet::Formulas(
            lattice
                .formulas()
                .iter()
                .filter(|phi| set.iter().all(|minor| holds(phi, major, minor)))
                .cloned()
                .collect(),
        ),
    }
}

/// Concretization: the universe states satisfying every formula relative
/// to the major state. Fault maps to fault.
pub fn gamma(major: &State, delta: &FormulaSet, universe: &[State]) -> StateSet {
    match delta {
        FormulaSet::Fault => StateSet::Fault,
        FormulaSet::Formulas(set) => StateSet::Set(
            universe
                .iter()
                .filter(|minor| set.iter().all(|phi| holds(phi, major, minor)))
                .cloned()
                .collect(),
        ),
    }
}

/// Closure of a formula set under the forward derivation rules:
/// a conditional agreement fires against its guard fact, a guard fact
/// yields agreement on the guard's value, and agreement on an embedded
/// boolean yields agreement on its negation.
fn closure(delta: &BTreeSet<BasicFormula>) -> BTreeSet<BasicFormula> {
    let mut out = delta.clone();
    loop {
        let mut fresh: Vec<BasicFormula> = Vec::new();
        for phi in &out {
            match phi {
                BasicFormula::CondAgree(b, e) => {
                    if out.contains(&BasicFormula::Both(b.clone())) {
                        fresh.push(BasicFormula::Agree(e.clone()));
                    }
                }
                BasicFormula::Both(b) => {
                    fresh.push(BasicFormula::Agree(Expr::embed(b.clone())));
                }
                BasicFormula::Agree(Expr::Bool(b)) => {
                    fresh.push(BasicFormula::Agree(Expr::embed(b.negate())));
                }
                BasicFormula::Agree(_) => {}
            }
        }
        let before = out.len();
        out.extend(fresh);
        if out.len() == before {
            return out;
        }
    }
}

/// Membership or variable-wise agreement, after closure.
fn entailed_directly(closed: &BTreeSet<BasicFormula>, phi: &BasicFormula) -> bool {
    if closed.contains(phi) {
        return true;
    }
    match phi {
        BasicFormula::Agree(e) => e
            .free_vars()
            .iter()
            .all(|x| closed.contains(&BasicFormula::Agree(Expr::Var(x.clone())))),
        _ => false,
    }
}

/// Sound syntactic entailment: does every state pair satisfying all of
/// `delta` satisfy `phi`?
///
/// Derivations used: membership; agreement on every free variable of an
/// expression gives agreement on the expression; a guard fact plus a
/// conditional agreement give the agreement; a guard fact gives agreement
/// on the guard's embedding, and embedded agreements flip across negation;
/// any agreement weakens to a conditional agreement. A set equal to the
/// full lattice entails everything when the lattice holds a guard fact
/// together with its negation (no pair satisfies such a set).
pub fn entails(delta: &BTreeSet<BasicFormula>, phi: &BasicFormula, lattice: &Lattice) -> bool {
    if lattice.has_contradictory_pair() && *delta == *lattice.formulas() {
        return true;
    }
    let closed = closure(delta);
    if entailed_directly(&closed, phi) {
        return true;
    }
    match phi {
        BasicFormula::CondAgree(_, e) => entailed_directly(&closed, &BasicFormula::Agree(e.clone())),
        _ => false,
    }
}

/// Convenience wrapper for `entails` on a `FormulaSet`; fault entails
/// everything.
pub fn fs_entails(delta: &FormulaSet, phi: &BasicFormula, lattice: &Lattice) -> bool {
    match delta {
        FormulaSet::Fault => true,
        FormulaSet::Formulas(set) => entails(set, phi, lattice),
    }
}
