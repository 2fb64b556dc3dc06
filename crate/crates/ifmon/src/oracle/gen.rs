//! Seeded generators for programs, states, policies, and formula subsets.
//!
//! Every sample derives its own stream cipher from (suite seed, sample
//! index), so samples are independent, replayable in isolation, and safe
//! to evaluate in parallel without coordination.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::ideal::Policy;
use crate::lang::{BasicFormula, BoolExpr, Cmd, Expr, Formula, Lattice};
use crate::relform::FormulaSet;
use crate::semantics::State;

/// Independent generator for one sample.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn var_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

pub fn gen_expr(rng: &mut ChaCha8Rng, vars: &[String], depth: u32) -> Expr {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return if rng.gen_bool(0.5) {
            Expr::Var(vars.choose(rng).expect("nonempty vars").clone())
        } else {
            Expr::Num(rng.gen_range(-2..=2))
        };
    }
    if rng.gen_ratio(1, 8) {
        return Expr::embed(gen_bool(rng, vars, depth - 1));
    }
    let op = *[crate::lang::BinOp::Add, crate::lang::BinOp::Sub, crate::lang::BinOp::Mul]
        .choose(rng)
        .expect("nonempty ops");
    Expr::bin(op, gen_expr(rng, vars, depth - 1), gen_expr(rng, vars, depth - 1))
}

pub fn gen_bool(rng: &mut ChaCha8Rng, vars: &[String], depth: u32) -> BoolExpr {
    let leaf = |rng: &mut ChaCha8Rng| {
        let l = gen_expr(rng, vars, 1);
        let r = gen_expr(rng, vars, 1);
        if rng.gen_bool(0.5) {
            BoolExpr::Lt(l, r)
        } else {
            BoolExpr::Eq(l, r)
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..8) {
        0 | 1 => !gen_bool(rng, vars, depth - 1),
        2 | 3 => BoolExpr::and(gen_bool(rng, vars, depth - 1), gen_bool(rng, vars, depth - 1)),
        _ => leaf(rng),
    }
}

pub fn gen_basic(rng: &mut ChaCha8Rng, vars: &[String], depth: u32) -> BasicFormula {
    match rng.gen_range(0..6) {
        0..=2 => BasicFormula::Agree(gen_expr(rng, vars, depth)),
        3 | 4 => BasicFormula::Both(gen_bool(rng, vars, depth)),
        _ => BasicFormula::CondAgree(gen_bool(rng, vars, depth), gen_expr(rng, vars, depth)),
    }
}

pub fn gen_formula(rng: &mut ChaCha8Rng, vars: &[String]) -> Formula {
    let n = rng.gen_range(1..=2);
    Formula::new((0..n).map(|_| gen_basic(rng, vars, 1)).collect())
}

/// Random command within the depth bound. Loops are mostly drawn from a
/// bounded-counter template so samples usually terminate; a small fraction
/// use a free guard and rely on the fuel budget.
pub fn gen_cmd(rng: &mut ChaCha8Rng, vars: &[String], depth: u32, annotations: bool) -> Cmd {
    let assign = |rng: &mut ChaCha8Rng| {
        Cmd::assign(vars.choose(rng).expect("nonempty vars"), gen_expr(rng, vars, 2))
    };
    if depth == 0 {
        return match rng.gen_range(0..4) {
            0 => Cmd::Skip,
            1 if annotations => Cmd::Assume(gen_formula(rng, vars)),
            _ => assign(rng),
        };
    }
    match rng.gen_range(0..12) {
        0 => Cmd::Skip,
        1..=3 => assign(rng),
        4..=6 => Cmd::seq(
            gen_cmd(rng, vars, depth - 1, annotations),
            gen_cmd(rng, vars, depth - 1, annotations),
        ),
        7 | 8 => Cmd::ite(
            gen_bool(rng, vars, 1),
            gen_cmd(rng, vars, depth - 1, annotations),
            gen_cmd(rng, vars, depth - 1, annotations),
        ),
        9 => gen_while(rng, vars, depth, annotations),
        10 if annotations => Cmd::Assume(gen_formula(rng, vars)),
        11 if annotations => Cmd::Assert(gen_formula(rng, vars)),
        _ => assign(rng),
    }
}

fn gen_while(rng: &mut ChaCha8Rng, vars: &[String], depth: u32, annotations: bool) -> Cmd {
    if rng.gen_ratio(1, 10) {
        // Free-form loop; may diverge, the fuel budget decides.
        return Cmd::while_do(gen_bool(rng, vars, 1), gen_cmd(rng, vars, depth - 1, annotations));
    }
    let counter = vars.choose(rng).expect("nonempty vars").clone();
    let bound = rng.gen_range(1..=3);
    let body = forbid_target(&gen_cmd(rng, vars, depth - 1, annotations), &counter);
    let bump = Cmd::assign(
        &counter,
        Expr::bin(crate::lang::BinOp::Add, Expr::Var(counter.clone()), Expr::Num(1)),
    );
    Cmd::while_do(
        BoolExpr::Lt(Expr::Var(counter.clone()), Expr::Num(bound)),
        Cmd::seq(body, bump),
    )
}

/// Replaces every assignment to `x` with skip, preserving shape; keeps the
/// bounded-counter loop template honest about its counter.
fn forbid_target(c: &Cmd, x: &str) -> Cmd {
    match c {
        Cmd::Assign(y, _) if y == x => Cmd::Skip,
        Cmd::Skip | Cmd::Assign(_, _) | Cmd::Assume(_) | Cmd::Assert(_) => c.clone(),
        Cmd::Seq(a, b) => Cmd::seq(forbid_target(a, x), forbid_target(b, x)),
        Cmd::If(b, c1, c0) => Cmd::ite(b.clone(), forbid_target(c1, x), forbid_target(c0, x)),
        Cmd::While(b, body) => Cmd::while_do(b.clone(), forbid_target(body, x)),
    }
}

pub fn gen_state(rng: &mut ChaCha8Rng, vars: &[String], lo: i64, hi: i64) -> State {
    State::from_pairs(vars.iter().map(|x| (x.clone(), rng.gen_range(lo..=hi))))
}

/// Random input/output observability sets; either side may be empty.
pub fn gen_policy(rng: &mut ChaCha8Rng, vars: &[String]) -> Policy {
    let pick = |rng: &mut ChaCha8Rng| {
        vars.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect::<Vec<_>>()
    };
    Policy::new(pick(rng), pick(rng))
}

/// Random subset of the lattice as a starting formula set. The full
/// lattice is sampled occasionally, but only when it holds a contradictory
/// guard pair: a guard-free full lattice describes satisfiable pairs, for
/// which the full-set clauses of the static transfers do not apply.
pub fn gen_delta(rng: &mut ChaCha8Rng, lattice: &Lattice) -> FormulaSet {
    if lattice.has_contradictory_pair() && rng.gen_ratio(1, 16) {
        return FormulaSet::Formulas(lattice.formulas().clone());
    }
    let all: Vec<&BasicFormula> = lattice.formulas().iter().collect();
    let k = rng.gen_range(0..=all.len().min(4));
    FormulaSet::from_iter(all.choose_multiple(rng, k).map(|phi| (*phi).clone()))
}
