//! The ideal relational monitor: tracks the exact set of minor states
//! compatible with the major run, faulting on failed assertions.
//!
//! Also provides a policy wrapper turning an input/output variable policy
//! into assume/assert annotations, a brute-force termination-insensitive
//! noninterference check, and the equivalence harness relating the two.
//!
//! A second, flag-based variant of the monitor additionally faults when an
//! annotation is reached in a high context (some minor states took the
//! other branch of an enclosing conditional).

use std::collections::BTreeSet;

use crate::lang::{BasicFormula, Cmd, Expr, Formula};
use crate::semantics::{
    collecting, collecting_allowed, eval_bool, eval_expr, exec, guard, holds_formula, run,
    Exhausted, Fuel, Outcome, State, StateSet,
};

/// Outcome of an ideal-monitor run: the major's final state and the final
/// tracking set (fault when an assertion failed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealRun {
    pub state: State,
    pub tracking: StateSet,
}

/// Runs the ideal monitor: the major executes concretely while the
/// tracking set follows it through assignments, is filtered by assumptions
/// and taken guards, absorbs the collecting image of untaken branches, and
/// collapses to fault on a failed assertion.
pub fn ideal_monitor(
    c: &Cmd,
    sigma: &State,
    s: &StateSet,
    fuel: &mut Fuel,
) -> Result<IdealRun, Exhausted> {
    let (state, tracking) = mon(c, sigma.clone(), s.clone(), fuel)?;
    Ok(IdealRun { state, tracking })
}

fn mon(c: &Cmd, sigma: State, s: StateSet, fuel: &mut Fuel) -> Result<(State, StateSet), Exhausted> {
    // Fault is absorbing for the tracking side; the major still runs, so
    // sequencing downstream of a fault sees the right major state.
    if s.is_fault() {
        let end = exec(c, sigma, fuel)?;
        return Ok((end, StateSet::Fault));
    }
    match c {
        Cmd::Skip => Ok((sigma, s)),
        Cmd::Assign(x, e) => {
            let tracked = match &s {
                StateSet::Fault => unreachable!("fault handled above"),
                StateSet::Set(set) => {
                    StateSet::Set(set.iter().map(|t| t.with(x, eval_expr(e, t))).collect())
                }
            };
            let v = eval_expr(e, &sigma);
            Ok((sigma.with(x, v), tracked))
        }
        Cmd::Seq(a, b) => {
            let (mid, s1) = mon(a, sigma, s, fuel)?;
            mon(b, mid, s1, fuel)
        }
        Cmd::Assume(phi) => {
            let filtered = match &s {
                StateSet::Fault => unreachable!("fault handled above"),
                StateSet::Set(set) => StateSet::Set(
                    set.iter().filter(|t| holds_formula(phi, &sigma, t)).cloned().collect(),
                ),
            };
            Ok((sigma, filtered))
        }
        Cmd::Assert(phi) => {
            let ok = match &s {
                StateSet::Fault => unreachable!("fault handled above"),
                StateSet::Set(set) => set.iter().all(|t| holds_formula(phi, &sigma, t)),
            };
            Ok((sigma, if ok { s } else { StateSet::Fault }))
        }
        Cmd::If(b, c1, c0) => {
            let (taken, untaken, tg, ug) = if eval_bool(b, &sigma) {
                (c1, c0, b.clone(), b.negate())
            } else {
                (c0, c1, b.negate(), b.clone())
            };
            let (end, followed) = mon(taken, sigma, guard(&tg, &s), fuel)?;
            let strayed = collecting(untaken, &guard(&ug, &s), fuel)?;
            Ok((end, followed.join(&strayed)))
        }
        Cmd::While(b, body) => {
            let step = Cmd::ite(b.clone(), (**body).clone(), Cmd::Skip);
            let mut sigma = sigma;
            let mut s = s;
            while eval_bool(b, &sigma) {
                fuel.tick()?;
                let (next_sigma, next_s) = mon(&step, sigma, s, fuel)?;
                sigma = next_sigma;
                s = next_s;
            }
            // Minor states still cycling when the major exits are dropped
            // by the collecting exit guard; faults inside them persist.
            let exit = collecting(c, &s, fuel)?;
            Ok((sigma, exit))
        }
    }
}

/// Flag-based variant: `allowed` is true only in low context. Annotations
/// in high context fault, flagging a branch-alignment failure rather than
/// comparing against strayed minor states.
pub fn ideal_monitor_alt(
    c: &Cmd,
    sigma: &State,
    s: &StateSet,
    allowed: bool,
    fuel: &mut Fuel,
) -> Result<IdealRun, Exhausted> {
    let (state, tracking) = mon_alt(c, sigma.clone(), s.clone(), allowed, fuel)?;
    Ok(IdealRun { state, tracking })
}

fn mon_alt(
    c: &Cmd,
    sigma: State,
    s: StateSet,
    allowed: bool,
    fuel: &mut Fuel,
) -> Result<(State, StateSet), Exhausted> {
    if s.is_fault() {
        let end = exec(c, sigma, fuel)?;
        return Ok((end, StateSet::Fault));
    }
    match c {
        Cmd::Skip => Ok((sigma, s)),
        Cmd::Assign(x, e) => {
            let tracked = match &s {
                StateSet::Fault => unreachable!("fault handled above"),
                StateSet::Set(set) => {
                    StateSet::Set(set.iter().map(|t| t.with(x, eval_expr(e, t))).collect())
                }
            };
            let v = eval_expr(e, &sigma);
            Ok((sigma.with(x, v), tracked))
        }
        Cmd::Seq(a, b) => {
            let (mid, s1) = mon_alt(a, sigma, s, allowed, fuel)?;
            mon_alt(b, mid, s1, allowed, fuel)
        }
        Cmd::Assume(phi) => {
            if !allowed {
                return Ok((sigma, StateSet::Fault));
            }
            let filtered = match &s {
                StateSet::Fault => unreachable!("fault handled above"),
                StateSet::Set(set) => StateSet::Set(
                    set.iter().filter(|t| holds_formula(phi, &sigma, t)).cloned().collect(),
                ),
            };
            Ok((sigma, filtered))
        }
        Cmd::Assert(phi) => {
            let ok = allowed
                && match &s {
                    StateSet::Fault => unreachable!("fault handled above"),
                    StateSet::Set(set) => set.iter().all(|t| holds_formula(phi, &sigma, t)),
                };
            Ok((sigma, if ok { s } else { StateSet::Fault }))
        }
        Cmd::If(b, c1, c0) => {
            let (taken, untaken, tg, ug) = if eval_bool(b, &sigma) {
                (c1, c0, b.clone(), b.negate())
            } else {
                (c0, c1, b.negate(), b.clone())
            };
            // The context stays low only when no minor state strays.
            let strayed_in = guard(&ug, &s);
            let aligned = strayed_in == StateSet::empty();
            let inner_allowed = allowed && aligned;
            let (end, followed) = mon_alt(taken, sigma, guard(&tg, &s), inner_allowed, fuel)?;
            let strayed = collecting_allowed(untaken, &strayed_in, inner_allowed, fuel)?;
            Ok((end, followed.join(&strayed)))
        }
        Cmd::While(b, body) => {
            let step = Cmd::ite(b.clone(), (**body).clone(), Cmd::Skip);
            let mut sigma = sigma;
            let mut s = s;
            while eval_bool(b, &sigma) {
                fuel.tick()?;
                let (next_sigma, next_s) = mon_alt(&step, sigma, s, allowed, fuel)?;
                sigma = next_sigma;
                s = next_s;
            }
            let exit = collecting_allowed(c, &s, allowed, fuel)?;
            Ok((sigma, exit))
        }
    }
}

/// A noninterference policy: variables observable at input and at output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Policy {
    pub input: BTreeSet<String>,
    pub output: BTreeSet<String>,
}

impl Policy {
    pub fn new<I, O>(input: I, output: O) -> Policy
    where
        I: IntoIterator<Item = String>,
        O: IntoIterator<Item = String>,
    {
        Policy { input: input.into_iter().collect(), output: output.into_iter().collect() }
    }
}

fn agreement_formula(vars: &BTreeSet<String>) -> Option<Formula> {
    if vars.is_empty() {
        return None;
    }
    Some(Formula::new(
        vars.iter().map(|x| BasicFormula::Agree(Expr::Var(x.clone()))).collect(),
    ))
}

/// Wraps a program in its policy: assume agreement on the inputs, run,
/// assert agreement on the outputs. An empty side contributes no
/// annotation (formulas are nonempty conjunctions).
pub fn wrap_policy(c: &Cmd, policy: &Policy) -> Cmd {
    let mut wrapped = c.clone();
    if let Some(out) = agreement_formula(&policy.output) {
        wrapped = Cmd::seq(wrapped, Cmd::Assert(out));
    }
    if let Some(inp) = agreement_formula(&policy.input) {
        wrapped = Cmd::seq(Cmd::Assume(inp), wrapped);
    }
    wrapped
}

/// Brute-force termination-insensitive noninterference at `sigma1`: every
/// terminating run from an input-agreeing initial state must agree on the
/// outputs. Each run gets its own budget of `fuel_steps`; minor runs that
/// exhaust it are treated as divergent and skipped, while an exhausted
/// major run is an error (indeterminate).
pub fn tini_holds(
    c: &Cmd,
    policy: &Policy,
    sigma1: &State,
    universe: &[State],
    fuel_steps: u64,
) -> Result<bool, Exhausted> {
    let end1 = exec(c, sigma1.clone(), &mut Fuel::new(fuel_steps))?;
    for sigma2 in universe {
        if !sigma1.agrees_on(sigma2, &policy.input) {
            continue;
        }
        match run(c, sigma2, &mut Fuel::new(fuel_steps)) {
            Outcome::BudgetExhausted => continue,
            Outcome::Terminated(end2) => {
                if !end1.agrees_on(&end2, &policy.output) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// One sample of the equivalence between the ideal monitor on the
/// policy-wrapped program and brute-force noninterference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceSample {
    pub monitor_passes: bool,
    pub tini: bool,
}

impl EquivalenceSample {
    pub fn agree(&self) -> bool {
        self.monitor_passes == self.tini
    }
}

/// Checks, at one initial state, that the ideal monitor on the wrapped
/// program passes exactly when termination-insensitive noninterference
/// holds. Errors when either side is indeterminate.
pub fn check_equivalence(
    c: &Cmd,
    policy: &Policy,
    sigma1: &State,
    universe: &[State],
    fuel_steps: u64,
) -> Result<EquivalenceSample, Exhausted> {
    let wrapped = wrap_policy(c, policy);
    let ideal = ideal_monitor(
        &wrapped,
        sigma1,
        &StateSet::from_states(universe.iter().cloned()),
        &mut Fuel::new(fuel_steps),
    )?;
    let tini = tini_holds(c, policy, sigma1, universe, fuel_steps)?;
    Ok(EquivalenceSample { monitor_passes: !ideal.tracking.is_fault(), tini })
}
