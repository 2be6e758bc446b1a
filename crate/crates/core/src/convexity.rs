//! Grid falsification for the (α,m)-convexity inequality
//!
//!   g(tx + m(1-t)y) <= t^α g(x) + m(1 - t^α) g(y)
//!
//! over (x, y, t) in [0, b*]² × [0, 1]. A negative verdict comes with a
//! concrete witness triple; a positive verdict only means "no violation on
//! this grid", never a proof.

use thiserror::Error;

use crate::bounds::FunctionSpec;

pub const DEFAULT_GRID_N: usize = 50;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ConvexityError {
    #[error("need alpha in [0,1], m in [0,1], q >= 1, got alpha = {alpha}, m = {m}, q = {q}")]
    InvalidParams { alpha: f64, m: f64, q: f64 },
    #[error("domain bound b_star = {b_star} must be finite and > 0")]
    InvalidDomain { b_star: f64 },
    #[error("grid_n = {grid_n} is too coarse, need at least 2 points per axis")]
    InvalidGrid { grid_n: usize },
    #[error("tolerance {tol} must be finite and >= 0")]
    InvalidTolerance { tol: f64 },
    #[error("function returned a non-finite value at x = {at}")]
    Evaluation { at: f64 },
}

/// Exponent pair plus the Hölder exponent q applied to |f''|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AMParams {
    pub alpha: f64,
    pub m: f64,
    pub q: f64,
}

impl AMParams {
    pub fn new(alpha: f64, m: f64, q: f64) -> Result<Self, ConvexityError> {
        let ok =
            (0.0..=1.0).contains(&alpha) && (0.0..=1.0).contains(&m) && q.is_finite() && q >= 1.0;
        if ok {
            Ok(Self { alpha, m, q })
        } else {
            Err(ConvexityError::InvalidParams { alpha, m, q })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityVerdict {
    pub holds: bool,
    /// Present exactly when `holds` is false.
    pub witness: Option<Witness>,
    /// Worst inequality margin seen on the grid (positive = violation).
    pub margin: f64,
}

/// Membership classes keyed by the exponent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvexityClass {
    Increasing,
    AlphaStarshaped,
    Starshaped,
    MConvex,
    Convex,
    AlphaConvex,
    GeneralAlphaM,
}

impl ConvexityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ConvexityClass::Increasing => "increasing",
            ConvexityClass::AlphaStarshaped => "alpha-starshaped",
            ConvexityClass::Starshaped => "starshaped",
            ConvexityClass::MConvex => "m-convex",
            ConvexityClass::Convex => "convex",
            ConvexityClass::AlphaConvex => "alpha-convex",
            ConvexityClass::GeneralAlphaM => "general-(alpha,m)-convex",
        }
    }
}

impl std::fmt::Display for ConvexityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Name of the function class the pair (alpha, m) selects.
pub fn classify(alpha: f64, m: f64) -> ConvexityClass {
    if alpha == 0.0 && m == 0.0 {
        ConvexityClass::Increasing
    } else if alpha == 1.0 && m == 1.0 {
        ConvexityClass::Convex
    } else if alpha == 1.0 && m == 0.0 {
        ConvexityClass::Starshaped
    } else if m == 0.0 {
        ConvexityClass::AlphaStarshaped
    } else if alpha == 1.0 {
        ConvexityClass::MConvex
    } else if m == 1.0 {
        ConvexityClass::AlphaConvex
    } else {
        ConvexityClass::GeneralAlphaM
    }
}

/// Inequality defect at one triple; positive means the inequality fails there.
///
/// `t.powf(alpha)` follows IEEE 754 pow, so 0^0 = 1 and the t = 0, alpha = 0
/// corner degenerates to the membership condition g(my) <= g(x).
pub fn definition_margin<G>(g: &G, x: f64, y: f64, t: f64, alpha: f64, m: f64) -> f64
where
    G: Fn(f64) -> f64 + ?Sized,
{
    let ta = t.powf(alpha);
    g(t * x + m * (1.0 - t) * y) - (ta * g(x) + m * (1.0 - ta) * g(y))
}

/// Scan a uniform (x, y, t) grid (endpoints included) for violations.
///
/// The worst margin and its first-seen witness are selected in fixed index
/// order, so the verdict is deterministic for a given grid.
pub fn check_am_convex<G>(
    g: G,
    params: &AMParams,
    b_star: f64,
    grid_n: usize,
    tol: f64,
) -> Result<ConvexityVerdict, ConvexityError>
where
    G: Fn(f64) -> f64,
{
    if !(b_star.is_finite() && b_star > 0.0) {
        return Err(ConvexityError::InvalidDomain { b_star });
    }
    if grid_n < 2 {
        return Err(ConvexityError::InvalidGrid { grid_n });
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(ConvexityError::InvalidTolerance { tol });
    }

    let eval = |x: f64| {
        let v = g(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ConvexityError::Evaluation { at: x })
        }
    };

    let denom = (grid_n - 1) as f64;
    let axis: Vec<f64> = (0..grid_n).map(|i| b_star * (i as f64 / denom)).collect();
    let ts: Vec<f64> = (0..grid_n).map(|k| k as f64 / denom).collect();
    let g_axis: Vec<f64> = axis.iter().map(|&x| eval(x)).collect::<Result<_, _>>()?;
    let t_alpha: Vec<f64> = ts.iter().map(|&t| t.powf(params.alpha)).collect();

    let mut worst = f64::NEG_INFINITY;
    let mut at = Witness {
        x: 0.0,
        y: 0.0,
        t: 0.0,
    };
    for (i, &x) in axis.iter().enumerate() {
        for (j, &y) in axis.iter().enumerate() {
            for (k, &t) in ts.iter().enumerate() {
                let mix = eval(t * x + params.m * (1.0 - t) * y)?;
                let margin =
                    mix - (t_alpha[k] * g_axis[i] + params.m * (1.0 - t_alpha[k]) * g_axis[j]);
                if margin > worst {
                    worst = margin;
                    at = Witness { x, y, t };
                }
            }
        }
    }

    let holds = worst <= tol;
    Ok(ConvexityVerdict {
        holds,
        witness: if holds { None } else { Some(at) },
        margin: worst,
    })
}

/// Convexity check applied to g = |f''|^q on the function's own domain.
pub fn check_abs_f2_q(
    fspec: &FunctionSpec,
    params: &AMParams,
    grid_n: usize,
    tol: f64,
) -> Result<ConvexityVerdict, ConvexityError> {
    let q = params.q;
    let g = |x: f64| {
        let v = fspec.f2(x).abs();
        if q == 1.0 {
            v
        } else {
            v.powf(q)
        }
    };
    check_am_convex(g, params, fspec.b_star(), grid_n, tol)
}
