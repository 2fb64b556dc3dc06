//! Abstract syntax for the annotated while-language.
//!
//! Programs are built from integer expressions, boolean expressions,
//! relational formulas, and commands. Booleans may be embedded in integer
//! positions (evaluating to 0 or 1), which is how boolean-valued variables
//! and guards appear inside agreement formulas.

use std::collections::BTreeSet;

pub mod lattice;
pub mod parser;
pub mod pretty;

pub use lattice::{collect_lattice, Lattice};
pub use parser::{parse_bool, parse_expr, parse_formula, parse_program, ParseError};

/// Binary integer operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

/// Integer expressions. `Bool` embeds a boolean expression, which evaluates
/// to 1 (true) or 0 (false).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Num(i64),
    Var(String),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Bool(Box<BoolExpr>),
}

/// Boolean expressions. `<` and `=` are primitive; `>`, `<=`, `>=`, `!=`
/// are parser sugar over these plus negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoolExpr {
    Lt(Expr, Expr),
    Eq(Expr, Expr),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
}

/// Atomic relational formulas relating a major and a minor state.
///
/// `Agree e` holds when both states give `e` the same value, `Both b` when
/// both states satisfy `b`, and `CondAgree b e` when both satisfying `b`
/// implies agreement on `e`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicFormula {
    Agree(Expr),
    Both(BoolExpr),
    CondAgree(BoolExpr, Expr),
}

/// A conjunction of basic formulas. Nonempty by construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula(Vec<BasicFormula>);

impl Formula {
    /// Builds a conjunction. Panics on an empty list; annotation formulas
    /// always carry at least one conjunct.
    pub fn new(basics: Vec<BasicFormula>) -> Formula {
        assert!(!basics.is_empty(), "formula must have at least one conjunct");
        Formula(basics)
    }

    pub fn basics(&self) -> &[BasicFormula] {
        &self.0
    }
}

impl From<BasicFormula> for Formula {
    fn from(b: BasicFormula) -> Formula {
        Formula(vec![b])
    }
}

/// Commands of the annotated while-language.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cmd {
    Skip,
    Assign(String, Expr),
    Seq(Box<Cmd>, Box<Cmd>),
    If(BoolExpr, Box<Cmd>, Box<Cmd>),
    While(BoolExpr, Box<Cmd>),
    Assume(Formula),
    Assert(Formula),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Bin(op, Box::new(lhs), Box::new(rhs))
    }

    /// Embeds a boolean expression in integer position.
    pub fn embed(b: BoolExpr) -> Expr {
        Expr::Bool(Box::new(b))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.collect_vars(&mut acc);
        acc
    }

    fn collect_vars(&self, acc: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(x) => {
                acc.insert(x.clone());
            }
            Expr::Bin(_, l, r) => {
                l.collect_vars(acc);
                r.collect_vars(acc);
            }
            Expr::Bool(b) => b.collect_vars(acc),
        }
    }
}

impl std::ops::Not for BoolExpr {
    type Output = BoolExpr;

    fn not(self) -> BoolExpr {
        BoolExpr::Not(Box::new(self))
    }
}

impl BoolExpr {
    pub fn and(l: BoolExpr, r: BoolExpr) -> BoolExpr {
        BoolExpr::And(Box::new(l), Box::new(r))
    }

    /// Canonical negation: strips a leading `Not` instead of stacking a
    /// second one, so `negate` is an involution on canonical terms.
    pub fn negate(&self) -> BoolExpr {
        match self {
            BoolExpr::Not(inner) => (**inner).clone(),
            other => BoolExpr::Not(Box::new(other.clone())),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.collect_vars(&mut acc);
        acc
    }

    fn collect_vars(&self, acc: &mut BTreeSet<String>) {
        match self {
            BoolExpr::Lt(l, r) | BoolExpr::Eq(l, r) => {
                l.collect_vars(acc);
                r.collect_vars(acc);
            }
            BoolExpr::Not(b) => b.collect_vars(acc),
            BoolExpr::And(l, r) => {
                l.collect_vars(acc);
                r.collect_vars(acc);
            }
        }
    }
}

impl BasicFormula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            BasicFormula::Agree(e) => e.free_vars(),
            BasicFormula::Both(b) => b.free_vars(),
            BasicFormula::CondAgree(b, e) => {
                let mut acc = b.free_vars();
                acc.extend(e.free_vars());
                acc
            }
        }
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        for b in &self.0 {
            acc.extend(b.free_vars());
        }
        acc
    }
}

impl Cmd {
    pub fn seq(a: Cmd, b: Cmd) -> Cmd {
        Cmd::Seq(Box::new(a), Box::new(b))
    }

    pub fn assign(name: &str, e: Expr) -> Cmd {
        Cmd::Assign(name.to_string(), e)
    }

    pub fn ite(b: BoolExpr, then_c: Cmd, else_c: Cmd) -> Cmd {
        Cmd::If(b, Box::new(then_c), Box::new(else_c))
    }

    pub fn while_do(b: BoolExpr, body: Cmd) -> Cmd {
        Cmd::While(b, Box::new(body))
    }

    /// Every variable occurring anywhere in the command, including
    /// assignment targets, guards, and annotation formulas.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.collect_all_vars(&mut acc);
        acc
    }

    fn collect_all_vars(&self, acc: &mut BTreeSet<String>) {
        match self {
            Cmd::Skip => {}
            Cmd::Assign(x, e) => {
                acc.insert(x.clone());
                e.collect_vars(acc);
            }
            Cmd::Seq(a, b) => {
                a.collect_all_vars(acc);
                b.collect_all_vars(acc);
            }
            Cmd::If(b, c1, c0) => {
                b.collect_vars(acc);
                c1.collect_all_vars(acc);
                c0.collect_all_vars(acc);
            }
            Cmd::While(b, body) => {
                b.collect_vars(acc);
                body.collect_all_vars(acc);
            }
            Cmd::Assume(f) | Cmd::Assert(f) => acc.extend(f.free_vars()),
        }
    }

    /// Variables assigned anywhere in the command, including both branches
    /// of conditionals and loop bodies.
    pub fn assigned_vars(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.collect_assigned(&mut acc);
        acc
    }

    fn collect_assigned(&self, acc: &mut BTreeSet<String>) {
        match self {
            Cmd::Skip | Cmd::Assume(_) | Cmd::Assert(_) => {}
            Cmd::Assign(x, _) => {
                acc.insert(x.clone());
            }
            Cmd::Seq(a, b) => {
                a.collect_assigned(acc);
                b.collect_assigned(acc);
            }
            Cmd::If(_, c1, c0) => {
                c1.collect_assigned(acc);
                c0.collect_assigned(acc);
            }
            Cmd::While(_, body) => body.collect_assigned(acc),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negate_is_involution_on_canonical_terms() {
        let b = BoolExpr::Lt(Expr::var("x"), Expr::Num(3));
        let n = b.negate();
        assert_eq!(n, !b.clone());
        assert_eq!(n.negate(), b);
    }

    #[test]
    fn negate_strips_double_negation() {
        let b = BoolExpr::Eq(Expr::var("x"), Expr::var("y"));
        let nn = !!b.clone();
        // negate strips exactly one layer: negate(!(!b)) = !b.
        assert_eq!(nn.negate(), !b);
    }

    #[test]
    fn free_vars_cross_embedding() {
        // (x < y) + z mentions all three variables.
        let e = Expr::bin(
            BinOp::Add,
            Expr::embed(BoolExpr::Lt(Expr::var("x"), Expr::var("y"))),
            Expr::var("z"),
        );
        let fv = e.free_vars();
        assert_eq!(
            fv.into_iter().collect::<Vec<_>>(),
            vec!["x".to_string(), "y".to_string(), "z".to_string()]
        );
    }

    #[test]
    fn cmd_vars_include_targets_and_annotations() {
        let c = Cmd::seq(
            Cmd::assign("a", Expr::Num(1)),
            Cmd::Assert(Formula::from(BasicFormula::Agree(Expr::var("b")))),
        );
        let vs = c.vars();
        assert!(vs.contains("a") && vs.contains("b"));
        assert_eq!(
            c.assigned_vars().into_iter().collect::<Vec<_>>(),
            vec!["a".to_string()]
        );
    }
}
