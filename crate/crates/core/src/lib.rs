//! Numerical toolkit for trapezoid-gap inequalities under (α, m)-convexity.
//!
//! For a twice-differentiable f on [0, b*], the gap between the endpoint
//! average (f(a) + f(mb))/2 and the mean value of f over [a, mb] admits
//! closed-form upper bounds whenever |f''|^q satisfies the (α, m)-convexity
//! inequality. This crate computes both sides, checks the hypothesis on a
//! grid, and ships a CLI for sweeping parameter ranges:
//!
//! * [`specfun`]: log-gamma, Gamma, Beta, and the Gamma-ratio power the
//!   Hölder-type bounds need.
//! * [`quad`]: adaptive Simpson quadrature with an error estimate, plus the
//!   weighted kernel integral ∫₀¹ (t-t²) g(ta + m(1-t)b) dt.
//! * [`convexity`]: grid falsification of the (α, m)-convexity definition.
//! * [`bounds`]: the trapezoid gap, six bound variants, and reference
//!   bounds for cross-checking.
//! * [`harness`]: built-in corpus, config-driven sweeps, tightness tables,
//!   and the `verify` self-check suite.

pub mod bounds;
pub mod convexity;
pub mod harness;
pub mod quad;
pub mod specfun;

pub use bounds::{BoundInputs, BoundLabel, BoundReport, FunctionSpec};
pub use convexity::{AMParams, ConvexityVerdict};
pub use quad::QuadResult;
