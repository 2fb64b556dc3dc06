//! Runtime information-flow monitoring for an annotated while language.
//!
//! Programs carry `assume`/`assert` annotations over relational formulas:
//! agreement on an expression, a condition holding on both sides, or
//! agreement conditioned on a guard. An ideal monitor tracks the exact set
//! of alternative initial states compatible with the annotations seen so
//! far; three abstract monitors approximate it with sets of formulas,
//! differing in how they account for code the observed run did not take:
//!
//! * [`monitors::MonitorKind::PurelyDynamic`] forgets everything at a
//!   secret-dependent merge,
//! * [`monitors::MonitorKind::ModifiedVars`] keeps formulas whose
//!   variables no branch assigns,
//! * [`monitors::MonitorKind::IntervalHybrid`] runs an interval analysis
//!   of the untaken code and keeps agreements it can pin to the observed
//!   run's values.
//!
//! The [`oracle`] module cross-checks the abstract monitors against the
//! ideal one and against brute-force noninterference over enumerated
//! state universes.

pub mod ideal;
pub mod intervals;
pub mod lang;
pub mod monitors;
pub mod oracle;
pub mod relform;
pub mod semantics;

pub use ideal::{check_equivalence, ideal_monitor, tini_holds, wrap_policy, Policy};
pub use lang::{
    collect_lattice, parse_formula, parse_program, BasicFormula, BoolExpr, Cmd, Expr, Formula,
    Lattice, ParseError,
};
pub use monitors::{monitor, MonitorKind, MonitorRun, TraceEntry};
pub use relform::FormulaSet;
pub use semantics::{universe, Exhausted, Fuel, Outcome, State};
