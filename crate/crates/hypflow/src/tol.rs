//! Default tolerances and iteration budgets.
//!
//! Values that callers can override live here so the defaults are declared
//! once instead of scattered through call sites.

/// Relative eigenvalue tolerance for Perron solves.
pub const PERRON_TOL: f64 = 1e-10;

/// Iteration budget for Perron solves.
pub const PERRON_MAX_ITERS: u64 = 100_000;

/// Relative tolerance for deciding that two component eigenvalues tie.
///
/// True ties and near-ties are numerically indistinguishable, so this is a
/// policy knob rather than a precision constant.
pub const MAXIMAL_COMPONENT_TIE: f64 = 1e-8;

/// Row-sum defect allowed in a stochastic matrix.
pub const ROW_STOCHASTIC: f64 = 1e-12;

/// Stationarity defect allowed for a chain's stationary vector.
pub const STATIONARY: f64 = 1e-10;

/// |Pr| target when solving a pressure equation for its root.
pub const PRESSURE_ROOT: f64 = 1e-10;

/// Default ball-enumeration safety cap.
pub const BFS_CAP: u32 = 8;

/// States allowed in a higher-block recoding before the memory guard trips.
///
/// The k = 8 recoding of the bundled octagon component sits near 2e7 states,
/// so the guard leaves it headroom while still rejecting runaway requests.
pub const RECODING_GUARD: u64 = 60_000_000;

/// Margin required of a strictly invariant multicone family.
pub const MULTICONE_MARGIN: f64 = 1e-6;

/// Determinant defect allowed when checking that generator images invert.
pub const REP_INVERSE: f64 = 1e-12;

/// Defect allowed when checking that relators map to +/- identity.
pub const REP_RELATOR: f64 = 1e-9;
