//! Numeric thresholds shared across the crate.
//!
//! Everything runs in `f64`; these constants are the only places where a
//! floating-point comparison is turned into a yes/no answer.

/// Default tolerance for equality on the extended plane (chordal metric),
/// for tangency detection, and for tangency-graph edges.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Smallest `|ad - bc|` accepted when building a map.
pub const DEGENERATE_DET: f64 = 1e-14;

/// `|cz + d|` below this is treated as the pole.
pub const POLE_EPS: f64 = 1e-14;

/// Slack for disc containment in the closed unit disc.
pub const DISC_SLACK: f64 = 1e-10;

/// Band around 1 inside which a gamma value or a gamma product is
/// treated as equal to 1.
pub const GAMMA_EPS: f64 = 1e-12;

/// Relative width of the Collatz-Wielandt bracket at which power
/// iteration stops.
pub const SPECTRAL_TOL: f64 = 1e-12;

pub const MAX_POWER_ITERATIONS: usize = 1_000_000;

/// Bisection stops once the bracket for the minimiser is narrower than this.
pub const BISECTION_TOL: f64 = 1e-12;

/// Window length and chordal diameter used to declare a sequence of
/// points convergent.
pub const CONVERGENCE_WINDOW: usize = 10;
pub const CONVERGENCE_DIAMETER: f64 = 1e-7;

/// Increment of the escape partial sums over the last quarter of a trace
/// below which the series is reported as Cauchy.
pub const CAUCHY_TAIL: f64 = 1e-8;

/// Minimum trace length for the escape and ideal-limit reports.
pub const MIN_TRACE: usize = 20;

/// Minimum number of steps for the pointwise convergence report.
pub const MIN_POINTWISE_STEPS: usize = 50;

/// Absolute slack allowed in the height inequality `exp(-rho) <= h`.
pub const HEIGHT_SLACK: f64 = 1e-12;
