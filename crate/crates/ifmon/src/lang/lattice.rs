//! Finite lattices of basic formulas attached to a program.
//!
//! A lattice is the universe of formulas an abstract monitor may track for
//! a given program. `collect_lattice` builds one from a command's syntax:
//! agreements for every subexpression and variable, both-polarity guard
//! formulas, and conditional agreements for every guard/expression pair.

use std::collections::BTreeSet;

use super::{BasicFormula, BoolExpr, Cmd, Expr};

/// A finite set of basic formulas, closed under guard negation: for every
/// `B b` it contains `B !b`, and for every `B b => A e` it contains
/// `B !b => A e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    formulas: BTreeSet<BasicFormula>,
    has_contradictory_pair: bool,
}

impl Lattice {
    /// Builds a lattice from a formula set, closing it under guard
    /// negation.
    pub fn new(mut formulas: BTreeSet<BasicFormula>) -> Lattice {
        let mut extra = Vec::new();
        for phi in &formulas {
            match phi {
                BasicFormula::Both(b) => extra.push(BasicFormula::Both(b.negate())),
                BasicFormula::CondAgree(b, e) => {
                    extra.push(BasicFormula::CondAgree(b.negate(), e.clone()))
                }
                BasicFormula::Agree(_) => {}
            }
        }
        formulas.extend(extra);
        let has_contradictory_pair = formulas.iter().any(|phi| match phi {
            BasicFormula::Both(b) => formulas.contains(&BasicFormula::Both(b.negate())),
            _ => false,
        });
        Lattice { formulas, has_contradictory_pair }
    }

    pub fn formulas(&self) -> &BTreeSet<BasicFormula> {
        &self.formulas
    }

    pub fn contains(&self, phi: &BasicFormula) -> bool {
        self.formulas.contains(phi)
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// True when the lattice holds some guard formula together with its
    /// negation. No state pair satisfies both, so the full lattice then
    /// describes the empty relation.
    pub fn has_contradictory_pair(&self) -> bool {
        self.has_contradictory_pair
    }
}

fn walk_expr(e: &Expr, exprs: &mut BTreeSet<Expr>, bools: &mut BTreeSet<BoolExpr>) {
    exprs.insert(e.clone());
    match e {
        Expr::Num(_) | Expr::Var(_) => {}
        Expr::Bin(_, l, r) => {
            walk_expr(l, exprs, bools);
            walk_expr(r, exprs, bools);
        }
        Expr::Bool(b) => walk_bool(b, exprs, bools),
    }
}

fn walk_bool(b: &BoolExpr, exprs: &mut BTreeSet<Expr>, bools: &mut BTreeSet<BoolExpr>) {
    bools.insert(b.clone());
    match b {
        BoolExpr::Lt(l, r) | BoolExpr::Eq(l, r) => {
            walk_expr(l, exprs, bools);
            walk_expr(r, exprs, bools);
        }
        BoolExpr::Not(inner) => walk_bool(inner, exprs, bools),
        BoolExpr::And(l, r) => {
            walk_bool(l, exprs, bools);
            walk_bool(r, exprs, bools);
        }
    }
}

fn walk_cmd(
    c: &Cmd,
    exprs: &mut BTreeSet<Expr>,
    bools: &mut BTreeSet<BoolExpr>,
    annots: &mut BTreeSet<BasicFormula>,
) {
    match c {
        Cmd::Skip => {}
        Cmd::Assign(_, e) => walk_expr(e, exprs, bools),
        Cmd::Seq(a, b) => {
            walk_cmd(a, exprs, bools, annots);
            walk_cmd(b, exprs, bools, annots);
        }
        Cmd::If(b, c1, c0) => {
            walk_bool(b, exprs, bools);
            walk_cmd(c1, exprs, bools, annots);
            walk_cmd(c0, exprs, bools, annots);
        }
        Cmd::While(b, body) => {
            walk_bool(b, exprs, bools);
            walk_cmd(body, exprs, bools, annots);
        }
        Cmd::Assume(f) | Cmd::Assert(f) => {
            for basic in f.basics() {
                annots.insert(basic.clone());
                match basic {
                    BasicFormula::Agree(e) => walk_expr(e, exprs, bools),
                    BasicFormula::Both(b) => walk_bool(b, exprs, bools),
                    BasicFormula::CondAgree(b, e) => {
                        walk_bool(b, exprs, bools);
                        walk_expr(e, exprs, bools);
                    }
                }
            }
        }
    }
}

/// Builds the formula lattice of a program.
///
/// The result contains, for every subexpression `e`, every boolean
/// subexpression `b`, and every program variable `x` of `c`:
/// agreements `A e`, `A x`, and `A (b)`; guard facts `B b` and `B !b`;
/// conditional agreements `B b => A e` and `B !b => A e` for every pair;
/// and every annotation formula of `c` verbatim.
pub fn collect_lattice(c: &Cmd) -> Lattice {
    let mut exprs = BTreeSet::new();
    let mut bools = BTreeSet::new();
    let mut annots = BTreeSet::new();
    walk_cmd(c, &mut exprs, &mut bools, &mut annots);

    for x in c.vars() {
        exprs.insert(Expr::Var(x));
    }
    for b in bools.clone() {
        exprs.insert(Expr::embed(b));
    }

    let mut out: BTreeSet<BasicFormula> = annots;
    for e in &exprs {
        out.insert(BasicFormula::Agree(e.clone()));
    }
    for b in &bools {
        out.insert(BasicFormula::Both(b.clone()));
        out.insert(BasicFormula::Both(b.negate()));
        for e in &exprs {
            out.insert(BasicFormula::CondAgree(b.clone(), e.clone()));
            out.insert(BasicFormula::CondAgree(b.negate(), e.clone()));
        }
    }
    Lattice::new(out)
}
