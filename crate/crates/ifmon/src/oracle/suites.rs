//! Property suites cross-checking the monitors against brute-force truth.
//!
//! Exhaustive suites (galois, granger, the arithmetic half of
//! interval-sound) run over pinned micro domains small enough to enumerate
//! completely; sampled suites draw seeded random programs and inputs per
//! index. Every counterexample carries the program text and the inputs
//! verbatim, so it replays standalone.

use std::collections::BTreeSet;

use rand::Rng;

use crate::ideal::{check_equivalence, ideal_monitor, tini_holds, wrap_policy};
use crate::intervals::{interval_exec, Bound, Interval, IntervalEnv};
use crate::lang::{collect_lattice, BasicFormula, BoolExpr, Cmd, Expr, Lattice};
use crate::monitors::{monitor, static_transfer, toform, toint, MonitorKind};
use crate::relform::{alpha, gamma, FormulaSet};
use crate::semantics::{collecting, exec, run, universe, Fuel, Outcome, State, StateSet};

use super::gen::{
    gen_cmd, gen_delta, gen_policy, gen_state, sample_rng, var_names,
};
use super::report::{tally, ConfigEcho, SuiteReport, Verdict, SCHEMA_VERSION};
use super::{sweep, OracleConfig};

fn report(name: &str, cfg: &OracleConfig, verdicts: Vec<Verdict>) -> SuiteReport {
    let (totals, counterexamples) = tally(verdicts);
    SuiteReport {
        schema_version: SCHEMA_VERSION,
        suite: name.to_string(),
        config: ConfigEcho::of(cfg),
        totals,
        counterexamples,
    }
}

fn state_str(sigma: &State) -> String {
    let parts: Vec<String> = sigma.iter().map(|(x, v)| format!("{x}={v}")).collect();
    parts.join(", ")
}

fn set_str(s: &StateSet) -> String {
    match s {
        StateSet::Fault => "fault".to_string(),
        StateSet::Set(set) => {
            let parts: Vec<String> = set.iter().map(|t| format!("[{}]", state_str(t))).collect();
            format!("{{{}}}", parts.join(" "))
        }
    }
}

/// The pinned two-variable micro domain shared by the exhaustive suites:
/// universe {0,1}^2 and a six-formula lattice holding a contradictory
/// guard pair.
fn micro_domain() -> (Vec<String>, Vec<State>, Lattice) {
    let vars = vec!["x".to_string(), "y".to_string()];
    let u = universe(&vars.iter().cloned().collect(), 0, 1);
    let x_lt_1 = BoolExpr::Lt(Expr::var("x"), Expr::Num(1));
    let lattice = Lattice::new(
        [
            BasicFormula::Agree(Expr::var("x")),
            BasicFormula::Agree(Expr::var("y")),
            BasicFormula::Both(x_lt_1.clone()),
            BasicFormula::CondAgree(x_lt_1, Expr::var("y")),
        ]
        .into_iter()
        .collect(),
    );
    (vars, u, lattice)
}

/// All state subsets of a universe, as proper sets.
fn all_subsets(u: &[State]) -> Vec<StateSet> {
    let n = u.len();
    (0..1usize << n)
        .map(|mask| {
            StateSet::from_states(
                u.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, s)| s.clone()),
            )
        })
        .collect()
}

/// All formula subsets of a lattice, as proper sets.
fn all_deltas(lattice: &Lattice) -> Vec<FormulaSet> {
    let formulas: Vec<&BasicFormula> = lattice.formulas().iter().collect();
    let n = formulas.len();
    (0..1usize << n)
        .map(|mask| {
            FormulaSet::from_iter(
                formulas
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, phi)| (**phi).clone()),
            )
        })
        .collect()
}

/// Exhaustive Galois-connection laws for (alpha, gamma) on the micro
/// domain, faults included: adjunction, extensivity, reductivity, join
/// preservation by alpha, and meet preservation by gamma.
pub fn galois(cfg: &OracleConfig) -> SuiteReport {
    let (_, u, lattice) = micro_domain();
    let mut s_space = all_subsets(&u);
    s_space.push(StateSet::Fault);
    let mut d_space = all_deltas(&lattice);
    d_space.push(FormulaSet::Fault);

    let mut verdicts = Vec::new();
    for major in &u {
        let alphas: Vec<FormulaSet> = s_space.iter().map(|s| alpha(major, s, &lattice)).collect();
        let gammas: Vec<StateSet> = d_space.iter().map(|d| gamma(major, d, &u)).collect();

        for (s, a) in s_space.iter().zip(&alphas) {
            for (d, g) in d_space.iter().zip(&gammas) {
                let left = a.leq(d);
                let right = s.leq(g);
                verdicts.push(if left == right {
                    Verdict::Pass
                } else {
                    Verdict::Fail {
                        program: "(galois micro domain)".to_string(),
                        detail: format!(
                            "adjunction broken at major [{}]: alpha(S)={a} leq Delta={d} is {left}, \
                             but S={} leq gamma(Delta)={} is {right}",
                            state_str(major),
                            set_str(s),
                            set_str(g),
                        ),
                    }
                });
            }
        }
        for (s, a) in s_space.iter().zip(&alphas) {
            let back = gamma(major, a, &u);
            verdicts.push(if s.leq(&back) {
                Verdict::Pass
            } else {
                Verdict::Fail {
                    program: "(galois micro domain)".to_string(),
                    detail: format!(
                        "extensivity broken at major [{}]: S={} not below gamma(alpha(S))={}",
                        state_str(major),
                        set_str(s),
                        set_str(&back),
                    ),
                }
            });
        }
        for (d, g) in d_space.iter().zip(&gammas) {
            let back = alpha(major, g, &lattice);
            verdicts.push(if back.leq(d) {
                Verdict::Pass
            } else {
                Verdict::Fail {
                    program: "(galois micro domain)".to_string(),
                    detail: format!(
                        "reductivity broken at major [{}]: alpha(gamma(Delta))={back} not below Delta={d}",
                        state_str(major),
                    ),
                }
            });
        }
        for (i, s1) in s_space.iter().enumerate() {
            for (j, s2) in s_space.iter().enumerate().skip(i) {
                let joined = alpha(major, &s1.join(s2), &lattice);
                let pointwise = alphas[i].join(&alphas[j]);
                verdicts.push(if joined == pointwise {
                    Verdict::Pass
                } else {
                    Verdict::Fail {
                        program: "(galois micro domain)".to_string(),
                        detail: format!(
                            "alpha not additive at major [{}]: alpha(S1 join S2)={joined} \
                             but alpha(S1) join alpha(S2)={pointwise} for S1={} S2={}",
                            state_str(major),
                            set_str(s1),
                            set_str(s2),
                        ),
                    }
                });
            }
        }
        for (i, d1) in d_space.iter().enumerate() {
            for (j, d2) in d_space.iter().enumerate().skip(i) {
                let met = gamma(major, &d1.meet(d2), &u);
                let pointwise = gammas[i].meet(&gammas[j]);
                verdicts.push(if met == pointwise {
                    Verdict::Pass
                } else {
                    Verdict::Fail {
                        program: "(galois micro domain)".to_string(),
                        detail: format!(
                            "gamma not multiplicative at major [{}]: gamma(D1 meet D2)={} \
                             but gamma(D1) meet gamma(D2)={} for D1={d1} D2={d2}",
                            state_str(major),
                            set_str(&met),
                            set_str(&pointwise),
                        ),
                    }
                });
            }
        }
    }
    report("galois", cfg, verdicts)
}

/// Exhaustive soundness and reduction conditions for the reduced-product
/// bridges (toint, toform) on the micro domain, over every major state,
/// interval environment from a pinned grid, and formula subset.
pub fn granger(cfg: &OracleConfig) -> SuiteReport {
    let (vars, u, lattice) = micro_domain();
    let d_space = all_deltas(&lattice);

    let bounds = [Bound::NegInf, Bound::Fin(0), Bound::Fin(1), Bound::PosInf];
    let mut intervals = Vec::new();
    for lo in bounds {
        for hi in bounds {
            let i = Interval::range(lo, hi);
            if !i.is_empty() && !intervals.contains(&i) {
                intervals.push(i);
            }
        }
    }
    let mut iotas = vec![IntervalEnv::Bottom, IntervalEnv::Fault];
    for ix in &intervals {
        for iy in &intervals {
            iotas.push(IntervalEnv::env(
                [(vars[0].clone(), *ix), (vars[1].clone(), *iy)].into_iter().collect(),
            ));
        }
    }

    let product = |iota: &IntervalEnv, concr: &BTreeSet<State>| -> BTreeSet<State> {
        concr.iter().filter(|t| iota.contains(t)).cloned().collect()
    };

    let mut verdicts = Vec::new();
    for major in &u {
        let concrs: Vec<BTreeSet<State>> = d_space
            .iter()
            .map(|d| match gamma(major, d, &u) {
                StateSet::Set(set) => set,
                StateSet::Fault => unreachable!("proper deltas only"),
            })
            .collect();
        for iota in &iotas {
            // Fault formula sets leave the intervals untouched.
            verdicts.push(if toint(iota, &FormulaSet::Fault, major) == *iota {
                Verdict::Pass
            } else {
                Verdict::Fail {
                    program: "(granger micro domain)".to_string(),
                    detail: format!("toint(iota, fault) changed iota={iota} at major [{}]", state_str(major)),
                }
            });
            for (d, concr) in d_space.iter().zip(&concrs) {
                let refined = toint(iota, d, major);
                let reduced = toform(iota, d, major, &lattice);
                let mut bad = Vec::new();
                if !refined.leq(iota) {
                    bad.push(format!("toint result {refined} not below iota"));
                }
                if !reduced.leq(d) {
                    bad.push(format!("toform result {reduced} not below Delta"));
                }
                let base = product(iota, concr);
                if product(&refined, concr) != base {
                    bad.push(format!("toint lost or gained product states, refined={refined}"));
                }
                let reduced_concr = match gamma(major, &reduced, &u) {
                    StateSet::Set(set) => set,
                    StateSet::Fault => unreachable!("toform of proper delta is proper"),
                };
                if product(iota, &reduced_concr) != base {
                    bad.push(format!("toform lost or gained product states, reduced={reduced}"));
                }
                verdicts.push(if bad.is_empty() {
                    Verdict::Pass
                } else {
                    Verdict::Fail {
                        program: "(granger micro domain)".to_string(),
                        detail: format!(
                            "at major [{}], iota={iota}, Delta={d}: {}",
                            state_str(major),
                            bad.join("; "),
                        ),
                    }
                });
            }
        }
        for d in &d_space {
            verdicts.push(if toform(&IntervalEnv::Fault, d, major, &lattice) == *d {
                Verdict::Pass
            } else {
                Verdict::Fail {
                    program: "(granger micro domain)".to_string(),
                    detail: format!("toform(fault, Delta) changed Delta={d} at major [{}]", state_str(major)),
                }
            });
        }
    }
    report("granger", cfg, verdicts)
}

/// Sampled subsets of a universe: each state kept with probability 1/2.
fn gen_subset(rng: &mut rand_chacha::ChaCha8Rng, u: &[State]) -> BTreeSet<State> {
    u.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

/// Collecting semantics versus the lifted single-run semantics: the set of
/// states a command's collecting execution produces equals the exits of
/// the terminating pointwise runs.
pub fn lemma1(cfg: &OracleConfig) -> SuiteReport {
    let vars = var_names(cfg.vars);
    let u = universe(&vars.iter().cloned().collect(), cfg.lo, cfg.hi);
    let cfg2 = cfg.clone();
    let verdicts = sweep(cfg.parallel, cfg.samples, move |index| {
        let rng = &mut sample_rng(cfg2.seed, index);
        let c = gen_cmd(rng, &vars, cfg2.depth, true);
        let s0 = gen_subset(rng, &u);
        let collected =
            match collecting(&c, &StateSet::from_states(s0.iter().cloned()), &mut Fuel::new(cfg2.fuel)) {
                Ok(s) => s,
                Err(_) => return Verdict::Skip,
            };
        // Pointwise runs get a much larger budget so that any state the
        // collecting fixpoint settled on is never misread as divergent.
        let pointwise = StateSet::from_states(s0.iter().filter_map(|sigma| {
            match run(&c, sigma, &mut Fuel::new(cfg2.fuel.saturating_mul(64))) {
                Outcome::Terminated(t) => Some(t),
                Outcome::BudgetExhausted => None,
            }
        }));
        if collected == pointwise {
            Verdict::Pass
        } else {
            Verdict::Fail {
                program: c.to_string(),
                detail: format!(
                    "from S0={}: collecting gave {} but pointwise runs gave {}",
                    set_str(&StateSet::from_states(s0.iter().cloned())),
                    set_str(&collected),
                    set_str(&pointwise),
                ),
            }
        }
    });
    report("lemma1", cfg, verdicts)
}

fn strip_asserts(c: &Cmd) -> Cmd {
    match c {
        Cmd::Assert(_) => Cmd::Skip,
        Cmd::Skip | Cmd::Assign(_, _) | Cmd::Assume(_) => c.clone(),
        Cmd::Seq(a, b) => Cmd::seq(strip_asserts(a), strip_asserts(b)),
        Cmd::If(b, c1, c0) => Cmd::ite(b.clone(), strip_asserts(c1), strip_asserts(c0)),
        Cmd::While(b, body) => Cmd::while_do(b.clone(), strip_asserts(body)),
    }
}

/// The ideal monitor against the collecting semantics: on annotation-free
/// programs the tracking set is exactly the collecting image; on
/// assertion-free programs it never faults and stays inside the collecting
/// image (assumptions only filter).
pub fn monstatic(cfg: &OracleConfig) -> SuiteReport {
    let vars = var_names(cfg.vars);
    let u = universe(&vars.iter().cloned().collect(), cfg.lo, cfg.hi);
    let cfg2 = cfg.clone();
    let verdicts = sweep(cfg.parallel, cfg.samples, move |index| {
        let rng = &mut sample_rng(cfg2.seed, index);

        let plain = gen_cmd(rng, &vars, cfg2.depth, false);
        let sigma = gen_state(rng, &vars, cfg2.lo, cfg2.hi);
        let s0 = StateSet::from_states(gen_subset(rng, &u));
        let ideal = match ideal_monitor(&plain, &sigma, &s0, &mut Fuel::new(cfg2.fuel)) {
            Ok(r) => r,
            Err(_) => return Verdict::Skip,
        };
        let collected = match collecting(&plain, &s0, &mut Fuel::new(cfg2.fuel)) {
            Ok(s) => s,
            Err(_) => return Verdict::Skip,
        };
        if ideal.tracking != collected {
            return Verdict::Fail {
                program: plain.to_string(),
                detail: format!(
                    "annotation-free mismatch from major [{}], S0={}: ideal tracking {} vs collecting {}",
                    state_str(&sigma),
                    set_str(&s0),
                    set_str(&ideal.tracking),
                    set_str(&collected),
                ),
            };
        }

        let assert_free = strip_asserts(&gen_cmd(rng, &vars, cfg2.depth, true));
        let ideal2 = match ideal_monitor(&assert_free, &sigma, &s0, &mut Fuel::new(cfg2.fuel)) {
            Ok(r) => r,
            Err(_) => return Verdict::Skip,
        };
        let collected2 = match collecting(&assert_free, &s0, &mut Fuel::new(cfg2.fuel)) {
            Ok(s) => s,
            Err(_) => return Verdict::Skip,
        };
        if ideal2.tracking.is_fault() || !ideal2.tracking.leq(&collected2) {
            return Verdict::Fail {
                program: assert_free.to_string(),
                detail: format!(
                    "assert-free breach from major [{}], S0={}: ideal tracking {} vs collecting {}",
                    state_str(&sigma),
                    set_str(&s0),
                    set_str(&ideal2.tracking),
                    set_str(&collected2),
                ),
            };
        }
        Verdict::Pass
    });
    report("monstatic", cfg, verdicts)
}

/// The ideal monitor on the policy-wrapped program passes exactly when
/// brute-force termination-insensitive noninterference holds.
pub fn theorem1(cfg: &OracleConfig) -> SuiteReport {
    let vars = var_names(cfg.vars);
    let u = universe(&vars.iter().cloned().collect(), cfg.lo, cfg.hi);
    let cfg2 = cfg.clone();
    let verdicts = sweep(cfg.parallel, cfg.samples, move |index| {
        let rng = &mut sample_rng(cfg2.seed, index);
        let c = gen_cmd(rng, &vars, cfg2.depth, false);
        let policy = gen_policy(rng, &vars);
        let sigma1 = gen_state(rng, &vars, cfg2.lo, cfg2.hi);
        match check_equivalence(&c, &policy, &sigma1, &u, cfg2.fuel) {
            Err(_) => Verdict::Skip,
            Ok(sample) if sample.agree() => Verdict::Pass,
            Ok(sample) => Verdict::Fail {
                program: wrap_policy(&c, &policy).to_string(),
                detail: format!(
                    "at major [{}]: wrapped ideal monitor {} but brute-force noninterference {}",
                    state_str(&sigma1),
                    if sample.monitor_passes { "passes" } else { "faults" },
                    if sample.tini { "holds" } else { "fails" },
                ),
            },
        }
    });
    report("theorem1", cfg, verdicts)
}

/// One abstract monitor against the ideal monitor: the abstraction of the
/// ideal result is always below the abstract result; an abstract pass
/// forces an ideal pass forces noninterference; and the kind's standalone
/// static transfer over-approximates the collecting semantics.
fn soundness(cfg: &OracleConfig, kind: MonitorKind, name: &str) -> SuiteReport {
    let vars = var_names(cfg.vars);
    let u = universe(&vars.iter().cloned().collect(), cfg.lo, cfg.hi);
    let cfg2 = cfg.clone();
    let verdicts = sweep(cfg.parallel, cfg.samples, move |index| {
        let rng = &mut sample_rng(cfg2.seed, index);
        let mut skipped = false;

        // Abstract-versus-ideal on a random annotated program.
        let body = gen_cmd(rng, &vars, cfg2.depth, true);
        let c = if rng.gen_bool(0.5) {
            wrap_policy(&body, &gen_policy(rng, &vars))
        } else {
            body
        };
        let lattice = collect_lattice(&c);
        let sigma = gen_state(rng, &vars, cfg2.lo, cfg2.hi);
        let delta = gen_delta(rng, &lattice);
        let s0 = gamma(&sigma, &delta, &u);
        let mon = monitor(kind, &c, &sigma, &delta, &lattice, &mut Fuel::new(cfg2.fuel));
        let ideal = ideal_monitor(&c, &sigma, &s0, &mut Fuel::new(cfg2.fuel));
        match (mon, ideal) {
            (Ok(mon), Ok(ideal)) => {
                let abstracted = alpha(&ideal.state, &ideal.tracking, &lattice);
                if !abstracted.leq(&mon.formulas) {
                    return Verdict::Fail {
                        program: c.to_string(),
                        detail: format!(
                            "from major [{}], Delta={delta}: ideal tracking {} abstracts to {abstracted}, \
                             not below monitor result {}",
                            state_str(&sigma),
                            set_str(&ideal.tracking),
                            mon.formulas,
                        ),
                    };
                }
            }
            _ => skipped = true,
        }

        // Monitor pass implies noninterference on policy-shaped programs.
        let plain = gen_cmd(rng, &vars, cfg2.depth, false);
        let policy = gen_policy(rng, &vars);
        let wrapped = wrap_policy(&plain, &policy);
        let lattice2 = collect_lattice(&wrapped);
        let sigma2 = gen_state(rng, &vars, cfg2.lo, cfg2.hi);
        match monitor(kind, &wrapped, &sigma2, &FormulaSet::empty(), &lattice2, &mut Fuel::new(cfg2.fuel)) {
            Err(_) => skipped = true,
            Ok(mon) if mon.passed() => {
                match tini_holds(&plain, &policy, &sigma2, &u, cfg2.fuel) {
                    Err(_) => skipped = true,
                    Ok(true) => {}
                    Ok(false) => {
                        return Verdict::Fail {
                            program: wrapped.to_string(),
                            detail: format!(
                                "at major [{}]: monitor passes with {} but noninterference fails",
                                state_str(&sigma2),
                                mon.formulas,
                            ),
                        };
                    }
                }
            }
            Ok(_) => {}
        }

        // The standalone static transfer over-approximates collecting.
        let analyzed = gen_cmd(rng, &vars, cfg2.depth.saturating_sub(1), false);
        let other = gen_cmd(rng, &vars, cfg2.depth.saturating_sub(1), false);
        let lattice3 = collect_lattice(&Cmd::seq(analyzed.clone(), other.clone()));
        let sigma3 = gen_state(rng, &vars, cfg2.lo, cfg2.hi);
        let delta3 = gen_delta(rng, &lattice3);
        match exec(&other, sigma3.clone(), &mut Fuel::new(cfg2.fuel)) {
            Err(_) => skipped = true,
            Ok(sigma_exit) => {
                let stat = static_transfer(
                    kind,
                    &analyzed,
                    Some(&other),
                    &delta3,
                    &sigma3,
                    &sigma_exit,
                    &lattice3,
                );
                match collecting(&analyzed, &gamma(&sigma3, &delta3, &u), &mut Fuel::new(cfg2.fuel)) {
                    Err(_) => skipped = true,
                    Ok(strays) => {
                        let abstracted = alpha(&sigma_exit, &strays, &lattice3);
                        if !abstracted.leq(&stat) {
                            return Verdict::Fail {
                                program: analyzed.to_string(),
                                detail: format!(
                                    "static transfer unsound beside major path {{ {other} }} from [{}]: \
                                     Delta={delta3}, strays {} abstract to {abstracted}, not below {stat}",
                                    state_str(&sigma3),
                                    set_str(&strays),
                                ),
                            };
                        }
                    }
                }
            }
        }

        if skipped {
            Verdict::Skip
        } else {
            Verdict::Pass
        }
    });
    report(name, cfg, verdicts)
}

pub fn soundness_d(cfg: &OracleConfig) -> SuiteReport {
    soundness(cfg, MonitorKind::PurelyDynamic, "soundness-d")
}

pub fn soundness_m(cfg: &OracleConfig) -> SuiteReport {
    soundness(cfg, MonitorKind::ModifiedVars, "soundness-m")
}

pub fn soundness_i(cfg: &OracleConfig) -> SuiteReport {
    soundness(cfg, MonitorKind::IntervalHybrid { widen_after: cfg.widen_after }, "soundness-i")
}

fn gen_interval(rng: &mut rand_chacha::ChaCha8Rng, lo: i64, hi: i64) -> Interval {
    let a = rng.gen_range(lo - 2..=hi + 2);
    let b = rng.gen_range(lo - 2..=hi + 2);
    let (a, b) = (a.min(b), a.max(b));
    match rng.gen_range(0..5) {
        0 => Interval::TOP,
        1 => Interval::singleton(a),
        2 => Interval::range(Bound::Fin(a), Bound::Fin(b)),
        3 => Interval::range(Bound::Fin(a), Bound::PosInf),
        _ => Interval::range(Bound::NegInf, Bound::Fin(b)),
    }
}

fn sample_inside(rng: &mut rand_chacha::ChaCha8Rng, i: &Interval, lo: i64, hi: i64) -> i64 {
    let floor = match i {
        Interval::Range(Bound::Fin(a), _) => *a,
        _ => lo - 2,
    }
    .max(lo - 2);
    let ceil = match i {
        Interval::Range(_, Bound::Fin(b)) => *b,
        _ => hi + 2,
    }
    .min(hi + 2);
    rng.gen_range(floor..=ceil.max(floor))
}

/// Interval execution over-approximates concrete runs, and interval
/// arithmetic is exactly the hull of the pointwise results on every
/// finite-width pair up to width 8.
pub fn interval_sound(cfg: &OracleConfig) -> SuiteReport {
    let vars = var_names(cfg.vars);
    let cfg2 = cfg.clone();
    let vars2 = vars.clone();
    let mut verdicts = sweep(cfg.parallel, cfg.samples, move |index| {
        let rng = &mut sample_rng(cfg2.seed, index);
        let c = gen_cmd(rng, &vars2, cfg2.depth, false);
        let mut map = std::collections::BTreeMap::new();
        let mut sigma = State::new();
        for x in &vars2 {
            let i = gen_interval(rng, cfg2.lo, cfg2.hi);
            let v = sample_inside(rng, &i, cfg2.lo, cfg2.hi);
            map.insert(x.clone(), i);
            sigma.set(x, v);
        }
        let iota = IntervalEnv::env(map);
        if !iota.contains(&sigma) {
            return Verdict::Skip;
        }
        let end = match exec(&c, sigma.clone(), &mut Fuel::new(cfg2.fuel)) {
            Ok(s) => s,
            Err(_) => return Verdict::Skip,
        };
        let out = interval_exec(&c, &iota, cfg2.widen_after);
        if out.contains(&end) {
            Verdict::Pass
        } else {
            Verdict::Fail {
                program: c.to_string(),
                detail: format!(
                    "run from [{}] inside {iota} ended at [{}], outside {out}",
                    state_str(&sigma),
                    state_str(&end),
                ),
            }
        }
    });

    // Exhaustive arithmetic: every finite pair of width <= 8 drawn from
    // [-10, 10] must produce exactly the hull of the pointwise results.
    let mut finite = Vec::new();
    for a in -10i64..=10 {
        for b in a..=10 {
            if b - a <= 8 {
                finite.push((a, b));
            }
        }
    }
    for &(a, b) in &finite {
        for &(c, d) in &finite {
            type OpCase = (&'static str, Interval, fn(i64, i64) -> i64);
            let l = Interval::range(Bound::Fin(a), Bound::Fin(b));
            let r = Interval::range(Bound::Fin(c), Bound::Fin(d));
            let ops: [OpCase; 3] = [
                ("+", l.add(&r), |x, y| x.saturating_add(y)),
                ("-", l.sub(&r), |x, y| x.saturating_sub(y)),
                ("*", l.mul(&r), |x, y| x.saturating_mul(y)),
            ];
            for (sym, got, f) in ops {
                let mut min = i64::MAX;
                let mut max = i64::MIN;
                for x in a..=b {
                    for y in c..=d {
                        let v = f(x, y);
                        min = min.min(v);
                        max = max.max(v);
                    }
                }
                let hull = Interval::range(Bound::Fin(min), Bound::Fin(max));
                verdicts.push(if got == hull {
                    Verdict::Pass
                } else {
                    Verdict::Fail {
                        program: format!("[{a},{b}] {sym} [{c},{d}]"),
                        detail: format!("interval arithmetic gave {got}, exact hull is {hull}"),
                    }
                });
            }
        }
    }
    report("interval-sound", cfg, verdicts)
}

/// The ideal monitor is monotone in its tracking set: growing the set of
/// minor states can only grow (or fault) the tracked result.
pub fn monotone(cfg: &OracleConfig) -> SuiteReport {
    let vars = var_names(cfg.vars);
    let u = universe(&vars.iter().cloned().collect(), cfg.lo, cfg.hi);
    let cfg2 = cfg.clone();
    let verdicts = sweep(cfg.parallel, cfg.samples, move |index| {
        let rng = &mut sample_rng(cfg2.seed, index);
        let c = gen_cmd(rng, &vars, cfg2.depth, true);
        let sigma = gen_state(rng, &vars, cfg2.lo, cfg2.hi);
        let big: BTreeSet<State> = gen_subset(rng, &u);
        let small: BTreeSet<State> = big.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let s_small = StateSet::from_states(small);
        let s_big = StateSet::from_states(big);
        let run_small = ideal_monitor(&c, &sigma, &s_small, &mut Fuel::new(cfg2.fuel));
        let run_big = ideal_monitor(&c, &sigma, &s_big, &mut Fuel::new(cfg2.fuel));
        match (run_small, run_big) {
            (Ok(a), Ok(b)) => {
                if a.tracking.leq(&b.tracking) {
                    Verdict::Pass
                } else {
                    Verdict::Fail {
                        program: c.to_string(),
                        detail: format!(
                            "from major [{}]: S={} tracked to {}, S'={} tracked to {}, order lost",
                            state_str(&sigma),
                            set_str(&s_small),
                            set_str(&a.tracking),
                            set_str(&s_big),
                            set_str(&b.tracking),
                        ),
                    }
                }
            }
            _ => Verdict::Skip,
        }
    });
    report("monotone", cfg, verdicts)
}
