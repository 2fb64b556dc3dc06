//! Abstract information-flow monitors over formula sets.
//!
//! All three monitors share the same engine: formulas thread through
//! straight-line code via an entailment-guarded assignment rule, and
//! conditionals whose guard is not known to agree split into a monitored
//! taken branch joined with a kind-specific static account of the untaken
//! branch:
//!
//! * purely dynamic: the untaken branch contributes nothing (top),
//! * modified-variables: formulas mentioning no assigned variable survive,
//! * interval: an interval analysis of the untaken branch recovers
//!   agreements on variables it can pin to the major's exact value.
//!
//! Loops are driven by the major run, one abstract step per concrete
//! iteration, with the kind-specific account applied at exit.

use std::collections::BTreeSet;

use crate::intervals::{guard_int, interval_exec, IntervalEnv};
use crate::lang::{pretty::leaf_label, BasicFormula, BoolExpr, Cmd, Expr, Lattice};
use crate::relform::{fs_entails, FormulaSet};
use crate::semantics::{eval_bool, eval_expr, exec, Exhausted, Fuel, State};

/// Which monitor to run; the interval monitor carries its widening delay.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonitorKind {
    PurelyDynamic,
    ModifiedVars,
    IntervalHybrid { widen_after: u32 },
}

impl MonitorKind {
    pub fn short_name(&self) -> &'static str {
        match self {
            MonitorKind::PurelyDynamic => "d",
            MonitorKind::ModifiedVars => "m",
            MonitorKind::IntervalHybrid { .. } => "i",
        }
    }
}

/// Interval environments bracketing the static analysis of code the major
/// did not execute: at analysis entry (guard-refined) and at its exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UntakenIntervals {
    pub entry: IntervalEnv,
    pub exit: IntervalEnv,
}

/// One monitoring snapshot: after a leaf command, at a branch entry, or at
/// a merge or loop exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub label: String,
    pub state: State,
    pub formulas: FormulaSet,
    pub untaken: Option<UntakenIntervals>,
}

/// Result of a monitored run that stayed within budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonitorRun {
    pub state: State,
    pub formulas: FormulaSet,
    pub trace: Vec<TraceEntry>,
}

impl MonitorRun {
    pub fn passed(&self) -> bool {
        !self.formulas.is_fault()
    }
}

/// Assignment targets occurring anywhere in the command.
pub fn mod_vars(c: &Cmd) -> BTreeSet<String> {
    c.assigned_vars()
}

const TRACE_CAP: usize = 10_000;

struct Driver<'a> {
    kind: MonitorKind,
    lattice: &'a Lattice,
    vars: BTreeSet<String>,
    trace: Vec<TraceEntry>,
}

/// Runs an abstract monitor alongside the concrete major run.
///
/// The formula set faults exactly when some assertion is not entailed (or
/// a fault already arrived); the major keeps running past a fault so
/// downstream sequencing sees the right states. Errors only when the major
/// run exhausts its fuel.
pub fn monitor(
    kind: MonitorKind,
    c: &Cmd,
    sigma: &State,
    delta: &FormulaSet,
    lattice: &Lattice,
    fuel: &mut Fuel,
) -> Result<MonitorRun, Exhausted> {
    let mut driver = Driver {
        kind,
        lattice,
        vars: sigma.vars().cloned().collect(),
        trace: Vec::new(),
    };
    let (state, formulas) = driver.step(c, sigma.clone(), delta.clone(), fuel)?;
    Ok(MonitorRun { state, formulas, trace: driver.trace })
}

impl Driver<'_> {
    fn push(&mut self, label: String, state: &State, formulas: &FormulaSet, untaken: Option<UntakenIntervals>) {
        if self.trace.len() < TRACE_CAP {
            self.trace.push(TraceEntry {
                label,
                state: state.clone(),
                formulas: formulas.clone(),
                untaken,
            });
        }
    }

    fn entails(&self, delta: &FormulaSet, phi: &BasicFormula) -> bool {
        fs_entails(delta, phi, self.lattice)
    }

    fn step(
        &mut self,
        c: &Cmd,
        sigma: State,
        delta: FormulaSet,
        fuel: &mut Fuel,
    ) -> Result<(State, FormulaSet), Exhausted> {
        // A fault is final for the formula side; only the major advances.
        if delta.is_fault() {
            let end = exec(c, sigma, fuel)?;
            return Ok((end, FormulaSet::Fault));
        }
        match c {
            Cmd::Skip => {
                self.push(leaf_label(c), &sigma, &delta, None);
                Ok((sigma, delta))
            }
            Cmd::Assign(x, e) => {
                let agrees = self.entails(&delta, &BasicFormula::Agree(e.clone()));
                let mut out: BTreeSet<BasicFormula> = match &delta {
                    FormulaSet::Fault => unreachable!("fault handled above"),
                    FormulaSet::Formulas(set) => set
                        .iter()
                        .filter(|phi| !phi.free_vars().contains(x))
                        .cloned()
                        .collect(),
                };
                if agrees {
                    out.insert(BasicFormula::Agree(Expr::Var(x.clone())));
                }
                let out = FormulaSet::Formulas(out);
                let v = eval_expr(e, &sigma);
                let sigma = sigma.with(x, v);
                self.push(leaf_label(c), &sigma, &out, None);
                Ok((sigma, out))
            }
            Cmd::Seq(a, b) => {
                let (mid, d1) = self.step(a, sigma, delta, fuel)?;
                self.step(b, mid, d1, fuel)
            }
            Cmd::Assume(phi) => {
                let out = delta.meet(&FormulaSet::from_iter(phi.basics().iter().cloned()));
                self.push(leaf_label(c), &sigma, &out, None);
                Ok((sigma, out))
            }
            Cmd::Assert(phi) => {
                let ok = phi.basics().iter().all(|b| self.entails(&delta, b));
                let out = if ok {
                    delta.meet(&FormulaSet::from_iter(phi.basics().iter().cloned()))
                } else {
                    FormulaSet::Fault
                };
                self.push(leaf_label(c), &sigma, &out, None);
                Ok((sigma, out))
            }
            Cmd::If(b, c1, c0) => {
                let sigma_entry = sigma.clone();
                let taken_then = eval_bool(b, &sigma);
                let (taken, untaken) = if taken_then { (c1, c0) } else { (c0, c1) };
                let taken_guard = if taken_then { b.clone() } else { b.negate() };
                let low = self.entails(&delta, &BasicFormula::Agree(Expr::embed(b.clone())));

                let branch_delta =
                    delta.meet(&FormulaSet::from_iter([BasicFormula::Both(taken_guard.clone())]));
                self.push(
                    format!("enter {} of if {b}", if taken_then { "then" } else { "else" }),
                    &sigma_entry,
                    &branch_delta,
                    None,
                );
                let (end, followed) = self.step(taken, sigma, branch_delta, fuel)?;

                if low {
                    // Every compatible minor agrees on the guard, so none
                    // strayed; the branch result stands.
                    self.push(format!("merge if {b}"), &end, &followed, None);
                    return Ok((end, followed));
                }
                let (stat, untaken_info) = self.untaken_account(
                    untaken,
                    &taken_guard.negate(),
                    &delta,
                    &sigma_entry,
                    taken,
                    &end,
                );
                let merged = followed.join(&stat);
                self.push(format!("merge if {b}"), &end, &merged, untaken_info);
                Ok((end, merged))
            }
            Cmd::While(b, body) => {
                let step_cmd = Cmd::ite(b.clone(), (**body).clone(), Cmd::Skip);
                let mut sigma = sigma;
                let mut delta = delta;
                while eval_bool(b, &sigma) {
                    fuel.tick()?;
                    let (s2, d2) = self.step(&step_cmd, sigma, delta, fuel)?;
                    sigma = s2;
                    delta = d2;
                }
                if delta.is_fault() {
                    self.push(format!("exit while {b}"), &sigma, &delta, None);
                    return Ok((sigma, delta));
                }
                let not_b = FormulaSet::from_iter([BasicFormula::Both(b.negate())]);
                let low = self.entails(&delta, &BasicFormula::Agree(Expr::embed(b.clone())));
                let (out, info) = if low {
                    (delta.meet(&not_b), None)
                } else {
                    let (stat, info) = self.loop_account(c, &delta, &sigma);
                    (delta.join(&stat).meet(&not_b), info)
                };
                self.push(format!("exit while {b}"), &sigma, &out, info);
                Ok((sigma, out))
            }
        }
    }

    /// Kind-specific summary of the branch the major did not take.
    fn untaken_account(
        &self,
        untaken: &Cmd,
        untaken_guard: &BoolExpr,
        delta_entry: &FormulaSet,
        sigma_entry: &State,
        taken: &Cmd,
        sigma_after: &State,
    ) -> (FormulaSet, Option<UntakenIntervals>) {
        match self.kind {
            MonitorKind::PurelyDynamic => (FormulaSet::empty(), None),
            MonitorKind::ModifiedVars => {
                let mut mods = mod_vars(untaken);
                mods.extend(mod_vars(taken));
                (retain_untouched(delta_entry, &mods), None)
            }
            MonitorKind::IntervalHybrid { widen_after } => {
                let top = IntervalEnv::top(&self.vars);
                let entry = guard_int(untaken_guard, &toint(&top, delta_entry, sigma_entry));
                let exit = interval_exec(untaken, &entry, widen_after);
                let stat = toform(&exit, &FormulaSet::empty(), sigma_after, self.lattice);
                (stat, Some(UntakenIntervals { entry, exit }))
            }
        }
    }

    /// Kind-specific summary, at loop exit, of minors that may still be
    /// inside the loop.
    fn loop_account(
        &self,
        whole_loop: &Cmd,
        delta: &FormulaSet,
        sigma: &State,
    ) -> (FormulaSet, Option<UntakenIntervals>) {
        let body = match whole_loop {
            Cmd::While(_, body) => body,
            _ => unreachable!("loop_account is only called on while"),
        };
        match self.kind {
            MonitorKind::PurelyDynamic => (FormulaSet::empty(), None),
            MonitorKind::ModifiedVars => (retain_untouched(delta, &mod_vars(body)), None),
            MonitorKind::IntervalHybrid { widen_after } => {
                let entry = toint(&IntervalEnv::top(&self.vars), delta, sigma);
                let exit = interval_exec(whole_loop, &entry, widen_after);
                let stat = toform(&exit, &FormulaSet::empty(), sigma, self.lattice);
                (stat, Some(UntakenIntervals { entry, exit }))
            }
        }
    }
}

/// Formulas from `delta` whose variables are disjoint from `mods`.
fn retain_untouched(delta: &FormulaSet, mods: &BTreeSet<String>) -> FormulaSet {
    match delta {
        FormulaSet::Fault => FormulaSet::Fault,
        FormulaSet::Formulas(set) => FormulaSet::Formulas(
            set.iter()
                .filter(|phi| phi.free_vars().is_disjoint(mods))
                .cloned()
                .collect(),
        ),
    }
}

/// Reduced-product bridge into intervals: constrain `iota` with everything
/// the formula set pins down relative to the major state. Agreements force
/// the major's value, guard facts apply as guards, conditional agreements
/// carry no interval information. A fault formula set adds nothing.
pub fn toint(iota: &IntervalEnv, delta: &FormulaSet, sigma: &State) -> IntervalEnv {
    let set = match delta {
        FormulaSet::Fault => return iota.clone(),
        FormulaSet::Formulas(set) => set,
    };
    let mut acc = iota.clone();
    for phi in set {
        match phi {
            BasicFormula::Agree(e) => {
                let v = eval_expr(e, sigma);
                acc = guard_int(&BoolExpr::Eq(e.clone(), Expr::Num(v)), &acc);
            }
            BasicFormula::Both(b) => {
                acc = guard_int(b, &acc);
            }
            BasicFormula::CondAgree(_, _) => {}
        }
    }
    acc
}

/// Reduced-product bridge back into formulas: agreements on every variable
/// the intervals pin to exactly the major's value. A fault environment
/// adds nothing; an unreachable environment yields the full lattice (the
/// exact abstraction of no states at all).
pub fn toform(iota: &IntervalEnv, delta: &FormulaSet, sigma: &State, lattice: &Lattice) -> FormulaSet {
    match iota {
        IntervalEnv::Fault => delta.clone(),
        IntervalEnv::Bottom => FormulaSet::Formulas(lattice.formulas().clone()),
        IntervalEnv::Env(map) => {
            let singletons = map.iter().filter_map(|(x, i)| {
                let v = i.as_singleton()?;
                if v == sigma.get(x) {
                    Some(BasicFormula::Agree(Expr::Var(x.clone())))
                } else {
                    None
                }
            });
            delta.meet(&FormulaSet::from_iter(singletons))
        }
    }
}

/// The standalone static transfer of each monitor kind over a command the
/// major did not execute: what still holds of minors that ran `analyzed`
/// while the major ran `major_path` from `sigma_entry` to `sigma_exit`.
/// The full lattice and fault map to themselves.
pub fn static_transfer(
    kind: MonitorKind,
    analyzed: &Cmd,
    major_path: Option<&Cmd>,
    delta: &FormulaSet,
    sigma_entry: &State,
    sigma_exit: &State,
    lattice: &Lattice,
) -> FormulaSet {
    let set = match delta {
        FormulaSet::Fault => return FormulaSet::Fault,
        FormulaSet::Formulas(set) => set,
    };
    // The full lattice marks unreachable code only when it holds a
    // contradictory guard pair (no state pair satisfies it); a guard-free
    // full lattice is satisfiable and gets no special treatment.
    let infeasible = *set == *lattice.formulas() && lattice.has_contradictory_pair();
    match kind {
        MonitorKind::PurelyDynamic => {
            if infeasible {
                delta.clone()
            } else {
                FormulaSet::empty()
            }
        }
        MonitorKind::ModifiedVars => {
            if infeasible {
                return delta.clone();
            }
            let mut mods = mod_vars(analyzed);
            if let Some(other) = major_path {
                mods.extend(mod_vars(other));
            }
            retain_untouched(delta, &mods)
        }
        MonitorKind::IntervalHybrid { widen_after } => {
            let vars: BTreeSet<String> = sigma_entry.vars().cloned().collect();
            let entry = toint(&IntervalEnv::top(&vars), delta, sigma_entry);
            let exit = interval_exec(analyzed, &entry, widen_after);
            toform(&exit, &FormulaSet::empty(), sigma_exit, lattice)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{collect_lattice, parse_bool, parse_expr, parse_program};
    use crate::intervals::Interval;

    fn st(pairs: &[(&str, i64)]) -> State {
        State::from_pairs(pairs.iter().map(|(k, v)| (k.to_string(), *v)))
    }

    fn agree(src: &str) -> BasicFormula {
        BasicFormula::Agree(parse_expr(src).unwrap())
    }

    fn both(src: &str) -> BasicFormula {
        BasicFormula::Both(parse_bool(src).unwrap())
    }

    fn fs(items: &[BasicFormula]) -> FormulaSet {
        FormulaSet::from_iter(items.iter().cloned())
    }

    const BRANCH_THEN_CONSTANT: &str = "\
assume A public;
if secret > 0 then {
  public := public + 1
} else {
  skip
};
y := 0;
assert A y";

    #[test]
    fn mod_vars_examples() {
        assert!(mod_vars(&Cmd::Skip).is_empty());
        let c = parse_program("if x < 1 then { x := 1 } else { y := 2 }").unwrap();
        assert_eq!(
            mod_vars(&c).into_iter().collect::<Vec<_>>(),
            vec!["x".to_string(), "y".to_string()]
        );
        let then_branch =
            parse_program("b := secret_number; r := seed * a * b; seed := 1 + seed").unwrap();
        assert_eq!(
            mod_vars(&then_branch).into_iter().collect::<Vec<_>>(),
            vec!["b".to_string(), "r".to_string(), "seed".to_string()]
        );
    }

    #[test]
    fn dynamic_monitor_trace_through_high_branch() {
        let c = parse_program(BRANCH_THEN_CONSTANT).unwrap();
        let lat = collect_lattice(&c);
        let sigma = st(&[("secret", 1), ("public", 0), ("y", 0)]);
        let run = monitor(
            MonitorKind::PurelyDynamic,
            &c,
            &sigma,
            &FormulaSet::empty(),
            &lat,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(run.passed());
        assert_eq!(run.formulas, fs(&[agree("y")]));
        assert_eq!(run.state, st(&[("secret", 1), ("public", 1), ("y", 0)]));

        let formulas: Vec<&FormulaSet> = run.trace.iter().map(|t| &t.formulas).collect();
        let after_assume = fs(&[agree("public")]);
        let inside_branch = fs(&[agree("public"), both("secret > 0")]);
        let at_merge = FormulaSet::empty();
        let after_zero = fs(&[agree("y")]);
        let i1 = formulas.iter().position(|f| **f == after_assume).expect("assume snapshot");
        let i2 = formulas.iter().position(|f| **f == inside_branch).expect("branch snapshot");
        let i3 = formulas.iter().skip(i2).position(|f| **f == at_merge).expect("merge snapshot") + i2;
        let i4 = formulas.iter().position(|f| **f == after_zero).expect("constant snapshot");
        assert!(i1 < i2 && i2 < i3 && i3 < i4, "snapshots out of order: {i1} {i2} {i3} {i4}");
    }

    #[test]
    fn dynamic_monitor_faults_when_constant_is_not_restored() {
        let c = parse_program(
            "assume A public; \
             if secret > 0 then { public := public + 1 } else { skip }; \
             assert A public",
        )
        .unwrap();
        let lat = collect_lattice(&c);
        let sigma = st(&[("secret", 0), ("public", 0)]);
        let run = monitor(
            MonitorKind::PurelyDynamic,
            &c,
            &sigma,
            &FormulaSet::empty(),
            &lat,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(!run.passed());
    }

    const SEED_STEP: &str = "\
assume A seed;
a := secret_base;
if secret_conf != 0 then {
  b := secret_number;
  r := seed * a * b;
  seed := 1 + seed
} else {
  r := seed * a * 42;
  seed := 1 + seed
};
assert A seed";

    fn seed_state() -> State {
        st(&[
            ("seed", 3),
            ("secret_conf", 1),
            ("secret_base", 2),
            ("secret_number", 5),
            ("a", 0),
            ("b", 0),
            ("r", 0),
        ])
    }

    #[test]
    fn interval_monitor_recovers_seed_agreement() {
        let c = parse_program(SEED_STEP).unwrap();
        let lat = collect_lattice(&c);
        let run = monitor(
            MonitorKind::IntervalHybrid { widen_after: 3 },
            &c,
            &seed_state(),
            &FormulaSet::empty(),
            &lat,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(run.passed());
        assert_eq!(run.formulas, fs(&[agree("seed")]));

        let merge = run
            .trace
            .iter()
            .find(|t| t.label.starts_with("merge if") && t.untaken.is_some())
            .expect("merge snapshot with untaken intervals");
        assert_eq!(merge.formulas, fs(&[agree("seed")]));
        let info = merge.untaken.as_ref().unwrap();
        assert_eq!(info.entry.get("seed"), Interval::singleton(3));
        assert_eq!(info.exit.get("seed"), Interval::singleton(4));
    }

    #[test]
    fn modified_vars_monitor_faults_on_seed_step() {
        let c = parse_program(SEED_STEP).unwrap();
        let lat = collect_lattice(&c);
        let run = monitor(
            MonitorKind::ModifiedVars,
            &c,
            &seed_state(),
            &FormulaSet::empty(),
            &lat,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(!run.passed());
    }

    #[test]
    fn modified_vars_keeps_untouched_formulas_across_high_branch() {
        let c = parse_program(
            "assume A lo; \
             if secret > 0 then { x := 1 } else { x := 2 }; \
             assert A lo",
        )
        .unwrap();
        let lat = collect_lattice(&c);
        let sigma = st(&[("lo", 0), ("secret", 1), ("x", 0)]);
        let run_m = monitor(
            MonitorKind::ModifiedVars,
            &c,
            &sigma,
            &FormulaSet::empty(),
            &lat,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(run_m.passed(), "A lo does not mention x, so it must survive");
        let run_d = monitor(
            MonitorKind::PurelyDynamic,
            &c,
            &sigma,
            &FormulaSet::empty(),
            &lat,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(!run_d.passed(), "the purely dynamic monitor forgets everything");
    }

    #[test]
    fn low_conditional_keeps_branch_result() {
        let c = parse_program(
            "assume A x; \
             if x < 5 then { y := x } else { y := 0 }; \
             assert A y",
        )
        .unwrap();
        let lat = collect_lattice(&c);
        let sigma = st(&[("x", 1), ("y", 0)]);
        for kind in [
            MonitorKind::PurelyDynamic,
            MonitorKind::ModifiedVars,
            MonitorKind::IntervalHybrid { widen_after: 3 },
        ] {
            let run = monitor(kind, &c, &sigma, &FormulaSet::empty(), &lat, &mut Fuel::default()).unwrap();
            assert!(run.passed(), "{} should accept a low branch", kind.short_name());
        }
    }

    #[test]
    fn fault_is_sticky_and_major_continues() {
        let c = parse_program("assert A x; y := 1; assert A 0").unwrap();
        let lat = collect_lattice(&c);
        let sigma = st(&[("x", 0), ("y", 0)]);
        let run = monitor(
            MonitorKind::PurelyDynamic,
            &c,
            &sigma,
            &FormulaSet::empty(),
            &lat,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(!run.passed());
        assert_eq!(run.state, st(&[("x", 0), ("y", 1)]));
        let first_fault = run.trace.iter().position(|t| t.formulas.is_fault()).unwrap();
        assert_eq!(run.trace[first_fault].label, "assert A x");
    }

    #[test]
    fn low_loop_threads_formulas() {
        let c = parse_program(
            "assume A x, A y; while x < 3 do { y := y + x; x := x + 1 }; assert A y",
        )
        .unwrap();
        let lat = collect_lattice(&c);
        let sigma = st(&[("x", 0), ("y", 0)]);
        for kind in [
            MonitorKind::PurelyDynamic,
            MonitorKind::ModifiedVars,
            MonitorKind::IntervalHybrid { widen_after: 3 },
        ] {
            let run = monitor(kind, &c, &sigma, &FormulaSet::empty(), &lat, &mut Fuel::default()).unwrap();
            assert!(run.passed(), "{} should accept an agreed loop", kind.short_name());
        }
    }

    #[test]
    fn high_loop_drops_counter_but_interval_recovers_it() {
        // The loop bound is secret, but the interval account of states
        // still in the loop cannot pin the counter, so even the interval
        // monitor must drop agreement on it; a variable untouched by the
        // loop survives in both hybrid monitors.
        let c = parse_program(
            "assume A lo, A x; while x < secret do { x := x + 1 }; assert A lo",
        )
        .unwrap();
        let lat = collect_lattice(&c);
        let sigma = st(&[("lo", 0), ("x", 0), ("secret", 2)]);
        let run_m = monitor(
            MonitorKind::ModifiedVars,
            &c,
            &sigma,
            &FormulaSet::empty(),
            &lat,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(run_m.passed());
        let run_d = monitor(
            MonitorKind::PurelyDynamic,
            &c,
            &sigma,
            &FormulaSet::empty(),
            &lat,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(!run_d.passed());

        let c_x = parse_program(
            "assume A x; while x < secret do { x := x + 1 }; assert A x",
        )
        .unwrap();
        let lat_x = collect_lattice(&c_x);
        let run_i = monitor(
            MonitorKind::IntervalHybrid { widen_after: 3 },
            &c_x,
            &st(&[("x", 0), ("secret", 2)]),
            &FormulaSet::empty(),
            &lat_x,
            &mut Fuel::default(),
        )
        .unwrap();
        assert!(!run_i.passed(), "x depends on the secret bound");
    }

    #[test]
    fn toint_examples() {
        let sigma = st(&[("seed", 3), ("x", 7)]);
        let vars: BTreeSet<String> = sigma.vars().cloned().collect();
        let top = IntervalEnv::top(&vars);

        assert_eq!(toint(&top, &FormulaSet::Fault, &sigma), top);

        let pinned = toint(&top, &fs(&[agree("seed")]), &sigma);
        assert_eq!(pinned.get("seed"), Interval::singleton(3));
        assert_eq!(pinned.get("x"), Interval::TOP);

        let ranged = IntervalEnv::env(
            [("x".to_string(), Interval::range(crate::intervals::Bound::Fin(0), crate::intervals::Bound::Fin(9)))]
                .into_iter()
                .collect(),
        );
        let guarded = toint(&ranged, &fs(&[both("x < 5")]), &sigma);
        assert_eq!(
            guarded.get("x"),
            Interval::range(crate::intervals::Bound::Fin(0), crate::intervals::Bound::Fin(4))
        );
    }

    #[test]
    fn toform_examples() {
        let c = parse_program("seed := seed + 1").unwrap();
        let lat = collect_lattice(&c);
        let sigma = st(&[("seed", 4)]);
        let delta = fs(&[]);

        assert_eq!(toform(&IntervalEnv::Fault, &delta, &sigma, &lat), delta);

        let pinned = IntervalEnv::env(
            [("seed".to_string(), Interval::singleton(4))].into_iter().collect(),
        );
        assert_eq!(
            toform(&pinned, &delta, &sigma, &lat),
            fs(&[agree("seed")])
        );

        let loose = IntervalEnv::env(
            [("seed".to_string(), Interval::range(crate::intervals::Bound::Fin(3), crate::intervals::Bound::Fin(5)))]
                .into_iter()
                .collect(),
        );
        assert_eq!(toform(&loose, &delta, &sigma, &lat), delta);

        // A singleton differing from the major's value adds nothing.
        let divergent = IntervalEnv::env(
            [("seed".to_string(), Interval::singleton(9))].into_iter().collect(),
        );
        assert_eq!(toform(&divergent, &delta, &sigma, &lat), delta);

        // Unreachable code is abstracted by the full lattice.
        assert_eq!(
            toform(&IntervalEnv::Bottom, &delta, &sigma, &lat),
            FormulaSet::Formulas(lat.formulas().clone())
        );
    }

    #[test]
    fn static_transfer_shapes() {
        let analyzed = parse_program("x := 1").unwrap();
        let wrapper = parse_program("if h < 1 then { x := 1 } else { x := 2 }; assume A x, A y").unwrap();
        let lat = collect_lattice(&wrapper);
        let sigma = st(&[("x", 0), ("y", 0), ("h", 0)]);
        let sigma_exit = st(&[("x", 2), ("y", 0), ("h", 0)]);
        let delta = fs(&[agree("x"), agree("y")]);

        assert_eq!(
            static_transfer(MonitorKind::PurelyDynamic, &analyzed, None, &delta, &sigma, &sigma_exit, &lat),
            FormulaSet::empty()
        );
        let m = static_transfer(
            MonitorKind::ModifiedVars,
            &analyzed,
            Some(&parse_program("x := 2").unwrap()),
            &delta,
            &sigma,
            &sigma_exit,
            &lat,
        );
        assert_eq!(m, fs(&[agree("y")]));

        // The interval transfer sees x := 1 land on 1, but the major exits
        // with x = 2, so no agreement on x is recovered; y is untouched
        // and agreed, hence pinned to the major's value.
        let i = static_transfer(
            MonitorKind::IntervalHybrid { widen_after: 3 },
            &analyzed,
            None,
            &delta,
            &sigma,
            &sigma_exit,
            &lat,
        );
        assert_eq!(i, fs(&[agree("y")]));

        // Fault and the full lattice map to themselves.
        for kind in [MonitorKind::PurelyDynamic, MonitorKind::ModifiedVars] {
            assert_eq!(
                static_transfer(kind, &analyzed, None, &FormulaSet::Fault, &sigma, &sigma_exit, &lat),
                FormulaSet::Fault
            );
            let full = FormulaSet::Formulas(lat.formulas().clone());
            assert_eq!(
                static_transfer(kind, &analyzed, None, &full, &sigma, &sigma_exit, &lat),
                full
            );
        }
    }
}
