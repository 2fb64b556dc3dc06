//! Interval analysis over program variables: a non-relational value
//! analysis used to recover facts about untaken branches.
//!
//! Bounds live in the integers extended with infinities. Concrete
//! arithmetic saturates at the 64-bit limits, so interval operators
//! computed in 128 bits and rounded outward (lower bounds down, upper
//! bounds up) contain every concrete result. The convention for products
//! with an infinite factor: zero times anything is zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::lang::{BinOp, BoolExpr, Cmd, Expr};
use crate::semantics::State;

/// An interval endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    Fin(i64),
    PosInf,
}

/// A closed integer interval, possibly unbounded on either side, or empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interval {
    Empty,
    Range(Bound, Bound),
}

use Bound::{Fin, NegInf, PosInf};
use Interval::{Empty, Range};

/// Outward-rounding clamp for a lower bound: anything below the 64-bit
/// range becomes unbounded, anything above it stays a finite bound that is
/// still below every representable concrete value's saturation point.
fn clamp_lo(v: i128) -> Bound {
    if v < i64::MIN as i128 {
        NegInf
    } else if v > i64::MAX as i128 {
        Fin(i64::MAX)
    } else {
        Fin(v as i64)
    }
}

fn clamp_hi(v: i128) -> Bound {
    if v > i64::MAX as i128 {
        PosInf
    } else if v < i64::MIN as i128 {
        Fin(i64::MIN)
    } else {
        Fin(v as i64)
    }
}

/// Endpoint sum, rounded outward according to which endpoint it is.
fn bound_add(x: Bound, y: Bound, is_lo: bool) -> Bound {
    match (x, y) {
        (NegInf, PosInf) | (PosInf, NegInf) => unreachable!("mixed infinities in endpoint sum"),
        (NegInf, _) | (_, NegInf) => NegInf,
        (PosInf, _) | (_, PosInf) => PosInf,
        (Fin(a), Fin(b)) => {
            let v = a as i128 + b as i128;
            if is_lo {
                clamp_lo(v)
            } else {
                clamp_hi(v)
            }
        }
    }
}

fn bound_sub(x: Bound, y: Bound, is_lo: bool) -> Bound {
    let neg_y = match y {
        NegInf => PosInf,
        PosInf => NegInf,
        Fin(b) => {
            // -i64::MIN overflows i64 but not the 128-bit sum below, so
            // route through bound_add on the wide value.
            return match x {
                NegInf => NegInf,
                PosInf => PosInf,
                Fin(a) => {
                    let v = a as i128 - b as i128;
                    if is_lo {
                        clamp_lo(v)
                    } else {
                        clamp_hi(v)
                    }
                }
            };
        }
    };
    bound_add(x, neg_y, is_lo)
}

/// Endpoint product on the extended integers, exact in 128 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Prod {
    NegInf,
    Fin(i128),
    PosInf,
}

fn bound_mul(x: Bound, y: Bound) -> Prod {
    match (x, y) {
        (Fin(a), Fin(b)) => Prod::Fin(a as i128 * b as i128),
        (PosInf, PosInf) | (NegInf, NegInf) => Prod::PosInf,
        (PosInf, NegInf) | (NegInf, PosInf) => Prod::NegInf,
        (PosInf, Fin(k)) | (Fin(k), PosInf) => match k.signum() {
            0 => Prod::Fin(0),
            1 => Prod::PosInf,
            _ => Prod::NegInf,
        },
        (NegInf, Fin(k)) | (Fin(k), NegInf) => match k.signum() {
            0 => Prod::Fin(0),
            1 => Prod::NegInf,
            _ => Prod::PosInf,
        },
    }
}

impl Interval {
    pub const TOP: Interval = Range(NegInf, PosInf);

    /// Normalizing constructor: inverted or unsatisfiable ranges are empty.
    pub fn range(lo: Bound, hi: Bound) -> Interval {
        if lo > hi || lo == PosInf || hi == NegInf {
            Empty
        } else {
            Range(lo, hi)
        }
    }

    pub fn singleton(v: i64) -> Interval {
        Range(Fin(v), Fin(v))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Empty)
    }

    pub fn contains(&self, v: i64) -> bool {
        match self {
            Empty => false,
            Range(lo, hi) => *lo <= Fin(v) && Fin(v) <= *hi,
        }
    }

    pub fn as_singleton(&self) -> Option<i64> {
        match self {
            Range(Fin(a), Fin(b)) if a == b => Some(*a),
            _ => None,
        }
    }

    pub fn leq(&self, other: &Interval) -> bool {
        match (self, other) {
            (Empty, _) => true,
            (_, Empty) => false,
            (Range(a, b), Range(c, d)) => c <= a && b <= d,
        }
    }

    pub fn join(&self, other: &Interval) -> Interval {
        match (self, other) {
            (Empty, x) | (x, Empty) => *x,
            (Range(a, b), Range(c, d)) => Range(*a.min(c), *b.max(d)),
        }
    }

    pub fn meet(&self, other: &Interval) -> Interval {
        match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Range(a, b), Range(c, d)) => Interval::range(*a.max(c), *b.min(d)),
        }
    }

    /// Widening: endpoints that moved outward jump to infinity.
    pub fn widen(&self, other: &Interval) -> Interval {
        match (self, other) {
            (Empty, x) | (x, Empty) => *x,
            (Range(a, b), Range(c, d)) => {
                let lo = if c < a { NegInf } else { *a };
                let hi = if d > b { PosInf } else { *b };
                Range(lo, hi)
            }
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Range(a, b), Range(c, d)) => {
                Interval::range(bound_add(*a, *c, true), bound_add(*b, *d, false))
            }
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Range(a, b), Range(c, d)) => {
                Interval::range(bound_sub(*a, *d, true), bound_sub(*b, *c, false))
            }
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Range(a, b), Range(c, d)) => {
                let products = [
                    bound_mul(*a, *c),
                    bound_mul(*a, *d),
                    bound_mul(*b, *c),
                    bound_mul(*b, *d),
                ];
                let min = *products.iter().min().expect("four products");
                let max = *products.iter().max().expect("four products");
                let lo = match min {
                    Prod::NegInf => NegInf,
                    Prod::PosInf => unreachable!("minimum product cannot be positive infinity alone"),
                    Prod::Fin(v) => clamp_lo(v),
                };
                let hi = match max {
                    Prod::PosInf => PosInf,
                    Prod::NegInf => unreachable!("maximum product cannot be negative infinity alone"),
                    Prod::Fin(v) => clamp_hi(v),
                };
                Interval::range(lo, hi)
            }
        }
    }

    /// Everything at or below this interval's upper bound.
    pub fn below(&self) -> Interval {
        match self {
            Empty => Empty,
            Range(_, hi) => Interval::range(NegInf, *hi),
        }
    }

    /// Everything at or above this interval's lower bound.
    pub fn above(&self) -> Interval {
        match self {
            Empty => Empty,
            Range(lo, _) => Interval::range(*lo, PosInf),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => write!(f, "-inf"),
            PosInf => write!(f, "+inf"),
            Fin(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Empty => write!(f, "empty"),
            Range(lo, hi) => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// An abstract store: unreachable, a non-empty interval per variable, or
/// fault (the top element, confessing nothing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalEnv {
    Bottom,
    Env(BTreeMap<String, Interval>),
    Fault,
}

impl IntervalEnv {
    /// Builds an environment, normalizing any empty binding to `Bottom`.
    pub fn env(map: BTreeMap<String, Interval>) -> IntervalEnv {
        if map.values().any(Interval::is_empty) {
            IntervalEnv::Bottom
        } else {
            IntervalEnv::Env(map)
        }
    }

    /// Every variable unconstrained.
    pub fn top(vars: &BTreeSet<String>) -> IntervalEnv {
        IntervalEnv::Env(vars.iter().map(|x| (x.clone(), Interval::TOP)).collect())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, IntervalEnv::Bottom)
    }

    pub fn is_fault(&self) -> bool {
        matches!(self, IntervalEnv::Fault)
    }

    /// A variable's interval; absent bindings are unconstrained.
    pub fn get(&self, x: &str) -> Interval {
        match self {
            IntervalEnv::Bottom => Empty,
            IntervalEnv::Fault => Interval::TOP,
            IntervalEnv::Env(map) => map.get(x).copied().unwrap_or(Interval::TOP),
        }
    }

    pub fn leq(&self, other: &IntervalEnv) -> bool {
        match (self, other) {
            (IntervalEnv::Bottom, _) | (_, IntervalEnv::Fault) => true,
            (_, IntervalEnv::Bottom) | (IntervalEnv::Fault, _) => false,
            (IntervalEnv::Env(a), IntervalEnv::Env(b)) => {
                let vars: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
                vars.into_iter().all(|x| self.get(x).leq(&other.get(x)))
            }
        }
    }

    pub fn join(&self, other: &IntervalEnv) -> IntervalEnv {
        match (self, other) {
            (IntervalEnv::Fault, _) | (_, IntervalEnv::Fault) => IntervalEnv::Fault,
            (IntervalEnv::Bottom, x) | (x, IntervalEnv::Bottom) => x.clone(),
            (IntervalEnv::Env(a), IntervalEnv::Env(b)) => {
                let vars: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
                IntervalEnv::Env(
                    vars.into_iter()
                        .map(|x| (x.clone(), self.get(x).join(&other.get(x))))
                        .collect(),
                )
            }
        }
    }

    pub fn meet(&self, other: &IntervalEnv) -> IntervalEnv {
        match (self, other) {
            (IntervalEnv::Fault, x) | (x, IntervalEnv::Fault) => x.clone(),
            (IntervalEnv::Bottom, _) | (_, IntervalEnv::Bottom) => IntervalEnv::Bottom,
            (IntervalEnv::Env(a), IntervalEnv::Env(b)) => {
                let vars: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
                let map: BTreeMap<String, Interval> = vars
                    .into_iter()
                    .map(|x| (x.clone(), self.get(x).meet(&other.get(x))))
                    .collect();
                IntervalEnv::env(map)
            }
        }
    }

    pub fn widen(&self, other: &IntervalEnv) -> IntervalEnv {
        match (self, other) {
            (IntervalEnv::Fault, _) | (_, IntervalEnv::Fault) => IntervalEnv::Fault,
            (IntervalEnv::Bottom, x) | (x, IntervalEnv::Bottom) => x.clone(),
            (IntervalEnv::Env(a), IntervalEnv::Env(b)) => {
                let vars: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
                IntervalEnv::Env(
                    vars.into_iter()
                        .map(|x| (x.clone(), self.get(x).widen(&other.get(x))))
                        .collect(),
                )
            }
        }
    }

    pub fn update(&self, x: &str, i: Interval) -> IntervalEnv {
        match self {
            IntervalEnv::Bottom => IntervalEnv::Bottom,
            IntervalEnv::Fault => IntervalEnv::Fault,
            IntervalEnv::Env(map) => {
                if i.is_empty() {
                    return IntervalEnv::Bottom;
                }
                let mut m = map.clone();
                m.insert(x.to_string(), i);
                IntervalEnv::Env(m)
            }
        }
    }

    /// True when the state lies inside the environment pointwise. Fault
    /// contains everything, bottom nothing.
    pub fn contains(&self, sigma: &State) -> bool {
        match self {
            IntervalEnv::Fault => true,
            IntervalEnv::Bottom => false,
            IntervalEnv::Env(_) => sigma.iter().all(|(x, v)| self.get(x).contains(*v)),
        }
    }
}

impl fmt::Display for IntervalEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalEnv::Bottom => write!(f, "bottom"),
            IntervalEnv::Fault => write!(f, "fault"),
            IntervalEnv::Env(map) => {
                write!(f, "{{")?;
                for (i, (x, iv)) in map.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}: {iv}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Three-valued truth for abstract boolean evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum K3 {
    True,
    False,
    Unknown,
}

impl K3 {
    fn not(self) -> K3 {
        match self {
            K3::True => K3::False,
            K3::False => K3::True,
            K3::Unknown => K3::Unknown,
        }
    }

    fn and(self, other: K3) -> K3 {
        match (self, other) {
            (K3::False, _) | (_, K3::False) => K3::False,
            (K3::True, K3::True) => K3::True,
            _ => K3::Unknown,
        }
    }

    fn to_interval(self) -> Interval {
        match self {
            K3::True => Interval::singleton(1),
            K3::False => Interval::singleton(0),
            K3::Unknown => Range(Fin(0), Fin(1)),
        }
    }
}

fn eval_bool3(b: &BoolExpr, map: &BTreeMap<String, Interval>) -> K3 {
    match b {
        BoolExpr::Lt(l, r) => {
            let (i, j) = (eval_in(l, map), eval_in(r, map));
            match (i, j) {
                (Range(_, bh), Range(jl, _)) if bh < jl => K3::True,
                (Range(il, _), Range(_, jh)) if jh <= il => K3::False,
                _ => K3::Unknown,
            }
        }
        BoolExpr::Eq(l, r) => {
            let (i, j) = (eval_in(l, map), eval_in(r, map));
            match (i.as_singleton(), j.as_singleton()) {
                (Some(a), Some(b)) if a == b => K3::True,
                _ => {
                    if i.meet(&j).is_empty() {
                        K3::False
                    } else {
                        K3::Unknown
                    }
                }
            }
        }
        BoolExpr::Not(inner) => eval_bool3(inner, map).not(),
        BoolExpr::And(l, r) => eval_bool3(l, map).and(eval_bool3(r, map)),
    }
}

fn eval_in(e: &Expr, map: &BTreeMap<String, Interval>) -> Interval {
    match e {
        Expr::Num(n) => Interval::singleton(*n),
        Expr::Var(x) => map.get(x).copied().unwrap_or(Interval::TOP),
        Expr::Bin(op, l, r) => {
            let (a, b) = (eval_in(l, map), eval_in(r, map));
            match op {
                BinOp::Add => a.add(&b),
                BinOp::Sub => a.sub(&b),
                BinOp::Mul => a.mul(&b),
            }
        }
        Expr::Bool(b) => eval_bool3(b, map).to_interval(),
    }
}

/// Abstract evaluation of an expression in an environment.
pub fn eval_interval(e: &Expr, env: &IntervalEnv) -> Interval {
    match env {
        IntervalEnv::Bottom => Empty,
        IntervalEnv::Fault => Interval::TOP,
        IntervalEnv::Env(map) => eval_in(e, map),
    }
}

/// Backward refinement: shrink the environment so that `e` can only take
/// values in `target`. `None` means no state satisfies the constraint.
fn app(e: &Expr, target: Interval, map: &BTreeMap<String, Interval>) -> Option<BTreeMap<String, Interval>> {
    if target.is_empty() {
        return None;
    }
    match e {
        Expr::Var(x) => {
            let met = map.get(x).copied().unwrap_or(Interval::TOP).meet(&target);
            if met.is_empty() {
                None
            } else {
                let mut m = map.clone();
                m.insert(x.clone(), met);
                Some(m)
            }
        }
        Expr::Num(n) => {
            if target.contains(*n) {
                Some(map.clone())
            } else {
                None
            }
        }
        Expr::Bin(BinOp::Add, l, r) => {
            // l = target - r and r = target - l.
            let m1 = app(l, target.sub(&eval_in(r, map)), map)?;
            let m2 = app(r, target.sub(&eval_in(l, map)), map)?;
            meet_maps(m1, m2)
        }
        Expr::Bin(BinOp::Sub, l, r) => {
            // l = target + r and r = l - target.
            let m1 = app(l, target.add(&eval_in(r, map)), map)?;
            let m2 = app(r, eval_in(l, map).sub(&target), map)?;
            meet_maps(m1, m2)
        }
        // Products and embedded booleans are not inverted; soundness only.
        Expr::Bin(BinOp::Mul, _, _) | Expr::Bool(_) => Some(map.clone()),
    }
}

fn meet_maps(
    a: BTreeMap<String, Interval>,
    b: BTreeMap<String, Interval>,
) -> Option<BTreeMap<String, Interval>> {
    let mut out = a;
    for (x, i) in b {
        let met = out.get(&x).copied().unwrap_or(Interval::TOP).meet(&i);
        if met.is_empty() {
            return None;
        }
        out.insert(x, met);
    }
    Some(out)
}

/// Negation-normal comparison constraints.
enum Norm {
    Lt(Expr, Expr),
    Le(Expr, Expr),
    EqN(Expr, Expr),
    Ne(Expr, Expr),
    And(Box<Norm>, Box<Norm>),
    Or(Box<Norm>, Box<Norm>),
}

fn normalize(b: &BoolExpr, positive: bool) -> Norm {
    match b {
        BoolExpr::Lt(l, r) => {
            if positive {
                Norm::Lt(l.clone(), r.clone())
            } else {
                Norm::Le(r.clone(), l.clone())
            }
        }
        BoolExpr::Eq(l, r) => {
            if positive {
                Norm::EqN(l.clone(), r.clone())
            } else {
                Norm::Ne(l.clone(), r.clone())
            }
        }
        BoolExpr::Not(inner) => normalize(inner, !positive),
        BoolExpr::And(l, r) => {
            let (nl, nr) = (normalize(l, positive), normalize(r, positive));
            if positive {
                Norm::And(Box::new(nl), Box::new(nr))
            } else {
                Norm::Or(Box::new(nl), Box::new(nr))
            }
        }
    }
}

const ONE: Interval = Range(Fin(1), Fin(1));

fn guard_norm(n: &Norm, map: &BTreeMap<String, Interval>) -> Option<BTreeMap<String, Interval>> {
    match n {
        Norm::Lt(l, r) => {
            let m1 = app(l, eval_in(r, map).sub(&ONE).below(), map)?;
            let m2 = app(r, eval_in(l, map).add(&ONE).above(), map)?;
            meet_maps(m1, m2)
        }
        Norm::Le(l, r) => {
            let m1 = app(l, eval_in(r, map).below(), map)?;
            let m2 = app(r, eval_in(l, map).above(), map)?;
            meet_maps(m1, m2)
        }
        Norm::EqN(l, r) => {
            let m1 = app(l, eval_in(r, map), map)?;
            let m2 = app(r, eval_in(l, map), map)?;
            meet_maps(m1, m2)
        }
        Norm::Ne(l, r) => {
            let lt = guard_norm(&Norm::Lt(l.clone(), r.clone()), map);
            let gt = guard_norm(&Norm::Lt(r.clone(), l.clone()), map);
            join_opt(lt, gt)
        }
        Norm::And(a, b) => {
            let m1 = guard_norm(a, map)?;
            let m2 = guard_norm(b, map)?;
            meet_maps(m1, m2)
        }
        Norm::Or(a, b) => join_opt(guard_norm(a, map), guard_norm(b, map)),
    }
}

fn join_opt(
    a: Option<BTreeMap<String, Interval>>,
    b: Option<BTreeMap<String, Interval>>,
) -> Option<BTreeMap<String, Interval>> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(m1), Some(m2)) => {
            let vars: BTreeSet<String> = m1.keys().chain(m2.keys()).cloned().collect();
            Some(
                vars.into_iter()
                    .map(|x| {
                        let i = m1.get(&x).copied().unwrap_or(Interval::TOP);
                        let j = m2.get(&x).copied().unwrap_or(Interval::TOP);
                        (x, i.join(&j))
                    })
                    .collect(),
            )
        }
    }
}

/// Refines an environment by a guard, keeping only values that can
/// satisfy it.
pub fn guard_int(b: &BoolExpr, env: &IntervalEnv) -> IntervalEnv {
    match env {
        IntervalEnv::Fault => IntervalEnv::Fault,
        IntervalEnv::Bottom => IntervalEnv::Bottom,
        IntervalEnv::Env(map) => match guard_norm(&normalize(b, true), map) {
            None => IntervalEnv::Bottom,
            Some(m) => IntervalEnv::env(m),
        },
    }
}

/// Abstract execution of a command. Annotations are identity; loops use
/// ascending iteration for `widen_after` rounds, then widen to
/// stabilization, then take a single narrowing pass before the exit guard.
pub fn interval_exec(c: &Cmd, env: &IntervalEnv, widen_after: u32) -> IntervalEnv {
    match env {
        IntervalEnv::Fault => return IntervalEnv::Fault,
        IntervalEnv::Bottom => return IntervalEnv::Bottom,
        IntervalEnv::Env(_) => {}
    }
    match c {
        Cmd::Skip | Cmd::Assume(_) | Cmd::Assert(_) => env.clone(),
        Cmd::Assign(x, e) => env.update(x, eval_interval(e, env)),
        Cmd::Seq(a, b) => {
            let mid = interval_exec(a, env, widen_after);
            interval_exec(b, &mid, widen_after)
        }
        Cmd::If(b, c1, c0) => {
            let t = interval_exec(c1, &guard_int(b, env), widen_after);
            let f = interval_exec(c0, &guard_int(&b.negate(), env), widen_after);
            t.join(&f)
        }
        Cmd::While(b, body) => {
            let step = |x: &IntervalEnv| -> IntervalEnv {
                env.join(&interval_exec(body, &guard_int(b, x), widen_after))
            };
            let mut x = IntervalEnv::Bottom;
            for _ in 0..widen_after {
                let next = step(&x);
                if next == x {
                    break;
                }
                x = next;
            }
            loop {
                let next = x.widen(&step(&x));
                if next == x {
                    break;
                }
                x = next;
            }
            // One narrowing pass claws back the overshoot from widening.
            let narrowed = x.meet(&step(&x));
            guard_int(&b.negate(), &narrowed)
        }
    }
}
