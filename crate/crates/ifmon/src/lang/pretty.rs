//! Printers that emit parseable source text.
//!
//! Output round-trips: parsing a printed term yields the original AST.
//! Parentheses are inserted exactly where precedence or associativity
//! requires them, negation always parenthesizes its operand, and embedded
//! booleans in integer position are always parenthesized.

use std::fmt;

use super::{BasicFormula, BinOp, BoolExpr, Cmd, Expr, Formula};

fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::Num(_) | Expr::Var(_) | Expr::Bool(_) => 3,
        Expr::Bin(BinOp::Mul, _, _) => 2,
        Expr::Bin(_, _, _) => 1,
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    let prec = expr_prec(e);
    let parens = prec < min_prec;
    if parens {
        write!(f, "(")?;
    }
    match e {
        Expr::Num(n) => write!(f, "{n}")?,
        Expr::Var(x) => write!(f, "{x}")?,
        Expr::Bool(b) => write!(f, "({b})")?,
        Expr::Bin(op, l, r) => {
            let sym = match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
            };
            // Left-associative: the right operand needs strictly higher
            // binding to reparse into the same shape.
            write_expr(f, l, prec)?;
            write!(f, " {sym} ")?;
            write_expr(f, r, prec + 1)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

fn bool_prec(b: &BoolExpr) -> u8 {
    match b {
        BoolExpr::And(_, _) => 1,
        BoolExpr::Lt(_, _) | BoolExpr::Eq(_, _) => 2,
        BoolExpr::Not(_) => 3,
    }
}

fn write_bool(f: &mut fmt::Formatter<'_>, b: &BoolExpr, min_prec: u8) -> fmt::Result {
    let prec = bool_prec(b);
    let parens = prec < min_prec;
    if parens {
        write!(f, "(")?;
    }
    match b {
        BoolExpr::Lt(l, r) => {
            write_expr(f, l, 1)?;
            write!(f, " < ")?;
            write_expr(f, r, 1)?;
        }
        BoolExpr::Eq(l, r) => {
            write_expr(f, l, 1)?;
            write!(f, " = ")?;
            write_expr(f, r, 1)?;
        }
        BoolExpr::Not(inner) => write!(f, "!({inner})")?,
        BoolExpr::And(l, r) => {
            write_bool(f, l, prec)?;
            write!(f, " && ")?;
            write_bool(f, r, prec + 1)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, 0)
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bool(f, self, 0)
    }
}

impl fmt::Display for BasicFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicFormula::Agree(e) => write!(f, "A {e}"),
            BasicFormula::Both(b) => write!(f, "B {b}"),
            BasicFormula::CondAgree(b, e) => write!(f, "B {b} => A {e}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.basics().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

fn write_cmd(f: &mut fmt::Formatter<'_>, c: &Cmd, indent: usize) -> fmt::Result {
    let pad = "  ".repeat(indent);
    match c {
        Cmd::Skip => write!(f, "{pad}skip"),
        Cmd::Assign(x, e) => write!(f, "{pad}{x} := {e}"),
        Cmd::Assume(phi) => write!(f, "{pad}assume {phi}"),
        Cmd::Assert(phi) => write!(f, "{pad}assert {phi}"),
        Cmd::Seq(a, b) => {
            write_cmd(f, a, indent)?;
            writeln!(f, ";")?;
            write_cmd(f, b, indent)
        }
        Cmd::If(b, c1, c0) => {
            writeln!(f, "{pad}if {b} then {{")?;
            write_cmd(f, c1, indent + 1)?;
            writeln!(f)?;
            writeln!(f, "{pad}}} else {{")?;
            write_cmd(f, c0, indent + 1)?;
            writeln!(f)?;
            write!(f, "{pad}}}")
        }
        Cmd::While(b, body) => {
            writeln!(f, "{pad}while {b} do {{")?;
            write_cmd(f, body, indent + 1)?;
            writeln!(f)?;
            write!(f, "{pad}}}")
        }
    }
}

impl fmt::Display for Cmd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cmd(f, self, 0)
    }
}

/// One-line label for a leaf command, used in execution traces.
pub fn leaf_label(c: &Cmd) -> String {
    match c {
        Cmd::Skip => "skip".to_string(),
        Cmd::Assign(x, e) => format!("{x} := {e}"),
        Cmd::Assume(phi) => format!("assume {phi}"),
        Cmd::Assert(phi) => format!("assert {phi}"),
        Cmd::If(b, _, _) => format!("if {b}"),
        Cmd::While(b, _) => format!("while {b}"),
        Cmd::Seq(_, _) => "seq".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse_bool, parse_expr, parse_program};

    fn rt_expr(src: &str) {
        let e = parse_expr(src).unwrap();
        let printed = e.to_string();
        assert_eq!(parse_expr(&printed).unwrap(), e, "round-trip failed via {printed:?}");
    }

    fn rt_bool(src: &str) {
        let b = parse_bool(src).unwrap();
        let printed = b.to_string();
        assert_eq!(parse_bool(&printed).unwrap(), b, "round-trip failed via {printed:?}");
    }

    #[test]
    fn expression_round_trips() {
        for src in [
            "x + y + z",
            "x - (y - z)",
            "x - y - z",
            "(x + y) * z",
            "x * y + z",
            "2 * (x + 1) * y",
            "(x < y) + (y = z)",
            "-5 + x",
            "0 - (x + 1)",
        ] {
            rt_expr(src);
        }
    }

    #[test]
    fn boolean_round_trips() {
        for src in [
            "x < y",
            "x = y && y < z",
            "!(x < y) && z = 0",
            "x < y && (y < z && z < 9)",
            "!(x = y && 0 < z)",
            "(x < y) = 1",
        ] {
            rt_bool(src);
        }
    }

    #[test]
    fn associativity_needs_parens_on_right() {
        use crate::lang::{BinOp, Expr};
        let e = Expr::bin(
            BinOp::Add,
            Expr::var("a"),
            Expr::bin(BinOp::Add, Expr::var("b"), Expr::var("c")),
        );
        assert_eq!(e.to_string(), "a + (b + c)");
        assert_eq!(parse_expr("a + (b + c)").unwrap(), e);
    }

    #[test]
    fn program_round_trips() {
        let src = "\
assume A public;
if 0 < secret then {
  public := public + 1
} else {
  skip
};
y := 0;
assert A y";
        let c = parse_program(src).unwrap();
        let printed = c.to_string();
        assert_eq!(parse_program(&printed).unwrap(), c, "round-trip failed via:\n{printed}");
    }

    #[test]
    fn nested_loop_round_trips() {
        let src = "while x < 3 do { y := 0; while y < 2 do { z := z + x; y := y + 1 }; x := x + 1 }";
        let c = parse_program(src).unwrap();
        assert_eq!(parse_program(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn formula_round_trips() {
        use super::super::parser::parse_formula;
        for src in [
            "A x",
            "A x + 1, B x < y",
            "B !(x < y) => A x * 2",
            "A (x < y)",
            "B x = y && y = z => A 0 - x",
        ] {
            let f = parse_formula(src).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }
}
