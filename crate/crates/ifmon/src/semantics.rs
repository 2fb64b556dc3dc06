//! Concrete semantics: single-state execution and collecting execution
//! over state sets.
//!
//! Arithmetic is 64-bit saturating. Booleans evaluate to 1 or 0 in integer
//! position. Loops consume fuel, one unit per iteration; running out is
//! reported as budget exhaustion rather than an answer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::lang::{BinOp, BoolExpr, Cmd, Expr, Formula};

/// A total map from program variables to 64-bit integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct State {
    vals: BTreeMap<String, i64>,
}

impl State {
    pub fn new() -> State {
        State::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, i64)>>(pairs: I) -> State {
        State { vals: pairs.into_iter().collect() }
    }

    /// Reads a variable. Panics when unbound: states are total over the
    /// program's variables by construction.
    pub fn get(&self, x: &str) -> i64 {
        match self.vals.get(x) {
            Some(v) => *v,
            None => panic!("unbound variable '{x}'"),
        }
    }

    pub fn set(&mut self, x: &str, v: i64) {
        self.vals.insert(x.to_string(), v);
    }

    /// Copy with one binding updated.
    pub fn with(&self, x: &str, v: i64) -> State {
        let mut s = self.clone();
        s.set(x, v);
        s
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.vals.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &i64)> {
        self.vals.iter()
    }

    /// True when both states give every variable in `vars` the same value.
    pub fn agrees_on<'a, I: IntoIterator<Item = &'a String>>(&self, other: &State, vars: I) -> bool {
        vars.into_iter().all(|x| self.get(x) == other.get(x))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.vals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k} = {v}")?;
        }
        write!(f, "}}")
    }
}

/// Loop budget. Each loop iteration, in any semantics, costs one unit.
#[derive(Clone, Debug)]
pub struct Fuel {
    remaining: u64,
}

/// Raised when the loop budget runs out; the computation's answer is then
/// indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exhausted;

impl fmt::Display for Exhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "loop budget exhausted")
    }
}

impl std::error::Error for Exhausted {}

impl Fuel {
    pub const DEFAULT: u64 = 10_000;

    pub fn new(steps: u64) -> Fuel {
        Fuel { remaining: steps }
    }

    pub fn tick(&mut self) -> Result<(), Exhausted> {
        if self.remaining == 0 {
            return Err(Exhausted);
        }
        self.remaining -= 1;
        Ok(())
    }
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel::new(Fuel::DEFAULT)
    }
}

/// Result of running a program on one state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Terminated(State),
    BudgetExhausted,
}

/// Evaluates an integer expression. Saturating arithmetic.
pub fn eval_expr(e: &Expr, sigma: &State) -> i64 {
    match e {
        Expr::Num(n) => *n,
        Expr::Var(x) => sigma.get(x),
        Expr::Bin(op, l, r) => {
            let (a, b) = (eval_expr(l, sigma), eval_expr(r, sigma));
            match op {
                BinOp::Add => a.saturating_add(b),
                BinOp::Sub => a.saturating_sub(b),
                BinOp::Mul => a.saturating_mul(b),
            }
        }
        Expr::Bool(b) => eval_bool(b, sigma) as i64,
    }
}

/// Evaluates a boolean expression.
pub fn eval_bool(b: &BoolExpr, sigma: &State) -> bool {
    match b {
        BoolExpr::Lt(l, r) => eval_expr(l, sigma) < eval_expr(r, sigma),
        BoolExpr::Eq(l, r) => eval_expr(l, sigma) == eval_expr(r, sigma),
        BoolExpr::Not(inner) => !eval_bool(inner, sigma),
        BoolExpr::And(l, r) => eval_bool(l, sigma) && eval_bool(r, sigma),
    }
}

/// Runs a command on a single state. Annotations are no-ops here.
pub fn run(c: &Cmd, sigma: &State, fuel: &mut Fuel) -> Outcome {
    match exec(c, sigma.clone(), fuel) {
        Ok(s) => Outcome::Terminated(s),
        Err(Exhausted) => Outcome::BudgetExhausted,
    }
}

/// Single-state execution with the budget surfaced as an error.
pub fn exec(c: &Cmd, sigma: State, fuel: &mut Fuel) -> Result<State, Exhausted> {
    match c {
        Cmd::Skip | Cmd::Assume(_) | Cmd::Assert(_) => Ok(sigma),
        Cmd::Assign(x, e) => {
            let v = eval_expr(e, &sigma);
            Ok(sigma.with(x, v))
        }
        Cmd::Seq(a, b) => {
            let s = exec(a, sigma, fuel)?;
            exec(b, s, fuel)
        }
        Cmd::If(b, c1, c0) => {
            if eval_bool(b, &sigma) {
                exec(c1, sigma, fuel)
            } else {
                exec(c0, sigma, fuel)
            }
        }
        Cmd::While(b, body) => {
            let mut s = sigma;
            while eval_bool(b, &s) {
                fuel.tick()?;
                s = exec(body, s, fuel)?;
            }
            Ok(s)
        }
    }
}

/// A set of minor states, or the distinguished fault element sitting above
/// every set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateSet {
    Fault,
    Set(BTreeSet<State>),
}

impl StateSet {
    pub fn empty() -> StateSet {
        StateSet::Set(BTreeSet::new())
    }

    pub fn from_states<I: IntoIterator<Item = State>>(states: I) -> StateSet {
        StateSet::Set(states.into_iter().collect())
    }

    pub fn is_fault(&self) -> bool {
        matches!(self, StateSet::Fault)
    }

    /// Inclusion order with fault on top.
    pub fn leq(&self, other: &StateSet) -> bool {
        match (self, other) {
            (_, StateSet::Fault) => true,
            (StateSet::Fault, _) => false,
            (StateSet::Set(a), StateSet::Set(b)) => a.is_subset(b),
        }
    }

    /// Least upper bound: union, with fault absorbing.
    pub fn join(&self, other: &StateSet) -> StateSet {
        match (self, other) {
            (StateSet::Fault, _) | (_, StateSet::Fault) => StateSet::Fault,
            (StateSet::Set(a), StateSet::Set(b)) => {
                StateSet::Set(a.union(b).cloned().collect())
            }
        }
    }

    /// Greatest lower bound: intersection, with fault as the identity.
    pub fn meet(&self, other: &StateSet) -> StateSet {
        match (self, other) {
            (StateSet::Fault, x) | (x, StateSet::Fault) => x.clone(),
            (StateSet::Set(a), StateSet::Set(b)) => {
                StateSet::Set(a.intersection(b).cloned().collect())
            }
        }
    }
}

/// Keeps the states satisfying `b`.
pub fn guard(b: &BoolExpr, s: &StateSet) -> StateSet {
    match s {
        StateSet::Fault => StateSet::Fault,
        StateSet::Set(set) => {
            StateSet::Set(set.iter().filter(|t| eval_bool(b, t)).cloned().collect())
        }
    }
}

/// True when the pair (major, minor) satisfies every conjunct.
pub fn holds_formula(phi: &Formula, major: &State, minor: &State) -> bool {
    phi.basics().iter().all(|b| crate::relform::holds(b, major, minor))
}

/// Collecting execution: the set of states reachable from `s` through `c`.
/// Annotations are identity. Loops accumulate from the empty set, adding
/// the input and one unrolling per fuel tick until the set stabilizes, so
/// minor states that cycle forever are dropped at the loop exit.
pub fn collecting(c: &Cmd, s: &StateSet, fuel: &mut Fuel) -> Result<StateSet, Exhausted> {
    collecting_allowed(c, s, true, fuel)
}

/// Collecting execution carrying an annotation permission flag: when
/// `allowed` is false, any assume or assert yields fault.
pub fn collecting_allowed(
    c: &Cmd,
    s: &StateSet,
    allowed: bool,
    fuel: &mut Fuel,
) -> Result<StateSet, Exhausted> {
    if s.is_fault() {
        return Ok(StateSet::Fault);
    }
    match c {
        Cmd::Skip => Ok(s.clone()),
        Cmd::Assume(_) | Cmd::Assert(_) => {
            if allowed {
                Ok(s.clone())
            } else {
                Ok(StateSet::Fault)
            }
        }
        Cmd::Assign(x, e) => match s {
            StateSet::Fault => unreachable!("fault handled above"),
            StateSet::Set(set) => Ok(StateSet::Set(
                set.iter().map(|t| t.with(x, eval_expr(e, t))).collect(),
            )),
        },
        Cmd::Seq(a, b) => {
            let mid = collecting_allowed(a, s, allowed, fuel)?;
            collecting_allowed(b, &mid, allowed, fuel)
        }
        Cmd::If(b, c1, c0) => {
            let t = collecting_allowed(c1, &guard(b, s), allowed, fuel)?;
            let f = collecting_allowed(c0, &guard(&b.negate(), s), allowed, fuel)?;
            Ok(t.join(&f))
        }
        Cmd::While(b, body) => {
            let step = Cmd::ite(b.clone(), (**body).clone(), Cmd::Skip);
            let mut x = StateSet::empty();
            loop {
                fuel.tick()?;
                let next = s.join(&collecting_allowed(&step, &x, allowed, fuel)?);
                if next == x {
                    break;
                }
                x = next;
            }
            Ok(guard(&b.negate(), &x))
        }
    }
}

/// All states over `vars` with each value drawn from `lo..=hi`.
pub fn universe(vars: &BTreeSet<String>, lo: i64, hi: i64) -> Vec<State> {
    let vars: Vec<&String> = vars.iter().collect();
    let mut out = vec![State::new()];
    for x in vars {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1) as usize);
        for s in &out {
            for v in lo..=hi {
                next.push(s.with(x, v));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;

    fn st(pairs: &[(&str, i64)]) -> State {
        State::from_pairs(pairs.iter().map(|(k, v)| (k.to_string(), *v)))
    }

    #[test]
    fn saturating_arithmetic() {
        let s = st(&[("x", i64::MAX), ("y", i64::MIN)]);
        let c = parse_program("a := x + 1; b := y - 1; m := x * x").unwrap();
        let mut sigma = s;
        sigma.set("a", 0);
        sigma.set("b", 0);
        sigma.set("m", 0);
        match run(&c, &sigma, &mut Fuel::default()) {
            Outcome::Terminated(t) => {
                assert_eq!(t.get("a"), i64::MAX);
                assert_eq!(t.get("b"), i64::MIN);
                assert_eq!(t.get("m"), i64::MAX);
            }
            Outcome::BudgetExhausted => panic!("should terminate"),
        }
    }

    #[test]
    fn booleans_are_zero_one_in_integer_position() {
        let c = parse_program("r := (x < 3) + (x = 2)").unwrap();
        let s = st(&[("x", 2), ("r", 0)]);
        match run(&c, &s, &mut Fuel::default()) {
            Outcome::Terminated(t) => assert_eq!(t.get("r"), 2),
            _ => panic!("should terminate"),
        }
    }

    #[test]
    fn loop_terminates_and_ticks_fuel() {
        let c = parse_program("while x < 5 do { x := x + 1 }").unwrap();
        let s = st(&[("x", 0)]);
        assert_eq!(
            run(&c, &s, &mut Fuel::new(5)),
            Outcome::Terminated(st(&[("x", 5)]))
        );
        assert_eq!(run(&c, &s, &mut Fuel::new(4)), Outcome::BudgetExhausted);
    }

    #[test]
    fn divergence_exhausts_budget() {
        let c = parse_program("while 0 < 1 do { x := x + 0 }").unwrap();
        let s = st(&[("x", 0)]);
        assert_eq!(run(&c, &s, &mut Fuel::new(100)), Outcome::BudgetExhausted);
    }

    #[test]
    fn collecting_matches_pointwise_runs() {
        let c = parse_program(
            "if x < 2 then { y := x + 1 } else { y := 0 }; while y < 3 do { y := y + 1 }",
        )
        .unwrap();
        let states: Vec<State> = (0..4).map(|v| st(&[("x", v), ("y", 0)])).collect();
        let direct: BTreeSet<State> = states
            .iter()
            .map(|s| match run(&c, s, &mut Fuel::default()) {
                Outcome::Terminated(t) => t,
                _ => panic!("should terminate"),
            })
            .collect();
        let collected = collecting(
            &c,
            &StateSet::from_states(states),
            &mut Fuel::default(),
        )
        .unwrap();
        assert_eq!(collected, StateSet::Set(direct));
    }

    #[test]
    fn collecting_drops_cycling_states() {
        // x = 0 never leaves the loop; x = 1 exits immediately.
        let c = parse_program("while x = 0 do { x := x * 1 }").unwrap();
        let s = StateSet::from_states([st(&[("x", 0)]), st(&[("x", 1)])]);
        let out = collecting(&c, &s, &mut Fuel::default()).unwrap();
        assert_eq!(out, StateSet::from_states([st(&[("x", 1)])]));
    }

    #[test]
    fn collecting_unbounded_growth_exhausts() {
        let c = parse_program("while 0 < 1 do { x := x + 1 }").unwrap();
        let s = StateSet::from_states([st(&[("x", 0)])]);
        assert_eq!(
            collecting(&c, &s, &mut Fuel::new(50)),
            Err(Exhausted)
        );
    }

    #[test]
    fn disallowed_annotations_fault_in_collecting() {
        let c = parse_program("x := 1; assert A x").unwrap();
        let s = StateSet::from_states([st(&[("x", 0)])]);
        let mut fuel = Fuel::default();
        assert_eq!(
            collecting_allowed(&c, &s, false, &mut fuel).unwrap(),
            StateSet::Fault
        );
        assert!(!collecting(&c, &s, &mut Fuel::default()).unwrap().is_fault());
    }

    #[test]
    fn universe_enumerates_all_combinations() {
        let vars: BTreeSet<String> = ["x".to_string(), "y".to_string()].into();
        let u = universe(&vars, 0, 2);
        assert_eq!(u.len(), 9);
        assert!(u.contains(&st(&[("x", 2), ("y", 0)])));
    }
}
