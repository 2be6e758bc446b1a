//! The trapezoid gap
//!
//!   T(f; a, b, m) = (f(a) + f(mb))/2 - (1/(mb-a)) ∫ₐ^{mb} f
//!
//! and its closed-form upper bounds in terms of |f''(a)|, |f''(b)| and the
//! exponents (α, m, q). Four bounds (labels `thm21`..`thm24`) target the
//! (α,m) family; `thm22`/`thm23` additionally come in a `*_tight` variant
//! that keeps the sharper constant their derivation loosens. `eq0`, `thm11`
//! and the λ-weighted `thm12` are reference bounds used for cross-checks.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::convexity::{self, AMParams, ConvexityError, ConvexityVerdict};
use crate::quad::{self, QuadError};
use crate::specfun::{beta, gamma_ratio_power, PositiveReal};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("need 0 <= a < m*b <= b_star, got a = {a}, b = {b}, m = {m}, b_star = {b_star}")]
    InvalidInterval { a: f64, b: f64, m: f64, b_star: f64 },
    #[error("interval length {len} must be finite and > 0")]
    InvalidLength { len: f64 },
    #[error("q = {q} out of range, need {need}")]
    InvalidQ { q: f64, need: &'static str },
    #[error("lambda = {lambda} must lie in [0, 1]")]
    InvalidLambda { lambda: f64 },
    #[error("b_star = {b_star} must be finite and > 0")]
    InvalidDomain { b_star: f64 },
    #[error("|f''| sample must be finite and >= 0, got {value}")]
    InvalidSecondDerivative { value: f64 },
    #[error("argument {arg} falls outside the declared domain [0, {b_star}]")]
    ArgumentOutsideDomain { arg: f64, b_star: f64 },
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Convexity(#[from] ConvexityError),
}

/// A twice-differentiable test function on [0, b*] with its analytic f''.
pub struct FunctionSpec {
    id: String,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    f2: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    b_star: f64,
}

impl FunctionSpec {
    pub fn new<F, G>(id: impl Into<String>, b_star: f64, f: F, f2: G) -> Result<Self, BoundError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(b_star.is_finite() && b_star > 0.0) {
            return Err(BoundError::InvalidDomain { b_star });
        }
        Ok(Self {
            id: id.into(),
            f: Box::new(f),
            f2: Box::new(f2),
            b_star,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn b_star(&self) -> f64 {
        self.b_star
    }

    pub fn f(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn f2(&self, x: f64) -> f64 {
        (self.f2)(x)
    }
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("id", &self.id)
            .field("b_star", &self.b_star)
            .finish_non_exhaustive()
    }
}

/// Everything the closed-form bounds need: the interval, the exponents, and
/// the two second-derivative magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub a: f64,
    pub b: f64,
    pub params: AMParams,
    pub abs_f2_a: f64,
    pub abs_f2_b: f64,
}

impl BoundInputs {
    pub fn new(
        a: f64,
        b: f64,
        params: AMParams,
        abs_f2_a: f64,
        abs_f2_b: f64,
    ) -> Result<Self, BoundError> {
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && a < params.m * b) {
            return Err(BoundError::InvalidInterval {
                a,
                b,
                m: params.m,
                b_star: f64::INFINITY,
            });
        }
        for &v in &[abs_f2_a, abs_f2_b] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(BoundError::InvalidSecondDerivative { value: v });
            }
        }
        Ok(Self {
            a,
            b,
            params,
            abs_f2_a,
            abs_f2_b,
        })
    }

    /// Samples |f''| at the endpoints and checks [a, mb] sits inside [0, b*].
    pub fn from_spec(
        fspec: &FunctionSpec,
        a: f64,
        b: f64,
        params: AMParams,
    ) -> Result<Self, BoundError> {
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && a < params.m * b)
            || params.m * b > fspec.b_star()
        {
            return Err(BoundError::InvalidInterval {
                a,
                b,
                m: params.m,
                b_star: fspec.b_star(),
            });
        }
        if b > fspec.b_star() {
            // |f''(b)| itself is sampled at b, which must also be in-domain
            return Err(BoundError::ArgumentOutsideDomain {
                arg: b,
                b_star: fspec.b_star(),
            });
        }
        Self::new(a, b, params, fspec.f2(a).abs(), fspec.f2(b).abs())
    }

    /// Hölder conjugate p = q/(q-1); meaningful only for q > 1.
    pub fn p(&self) -> f64 {
        self.params.q / (self.params.q - 1.0)
    }

    pub fn interval_len(&self) -> f64 {
        self.params.m * self.b - self.a
    }
}

/// Which constant to use for the bounds whose derivation loosens one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    Stated,
    Tight,
}

/// Bound labels in their fixed tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundLabel {
    Thm21,
    Thm22Tight,
    Thm22,
    Thm23Tight,
    Thm23,
    Thm24,
}

impl BoundLabel {
    pub const ALL: [BoundLabel; 6] = [
        BoundLabel::Thm21,
        BoundLabel::Thm22Tight,
        BoundLabel::Thm22,
        BoundLabel::Thm23Tight,
        BoundLabel::Thm23,
        BoundLabel::Thm24,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundLabel::Thm21 => "thm21",
            BoundLabel::Thm22Tight => "thm22_tight",
            BoundLabel::Thm22 => "thm22",
            BoundLabel::Thm23Tight => "thm23_tight",
            BoundLabel::Thm23 => "thm23",
            BoundLabel::Thm24 => "thm24",
        }
    }
}

impl fmt::Display for BoundLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs_by_theorem: BTreeMap<BoundLabel, f64>,
    pub slack_by_theorem: BTreeMap<BoundLabel, f64>,
    /// Argmin of the RHS map; ties resolve to the smallest label.
    pub tightest: BoundLabel,
    pub convexity_gate: ConvexityVerdict,
}

fn pr(v: f64) -> PositiveReal {
    PositiveReal::new(v).expect("argument is positive by construction")
}

// |f''|^q through logs; the zero branch keeps q*ln(0) from ever forming.
fn pow_q(v: f64, q: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        (q * v.ln()).exp()
    }
}

fn root_q(v: f64, q: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        (v.ln() / q).exp()
    }
}

fn check_len(len: f64) -> Result<f64, BoundError> {
    if len.is_finite() && len > 0.0 {
        Ok(len)
    } else {
        Err(BoundError::InvalidLength { len })
    }
}

/// |T(f; a, b, m)|, the quantity every bound caps.
pub fn lhs_trapezoid(
    fspec: &FunctionSpec,
    a: f64,
    b: f64,
    m: f64,
    tol: f64,
) -> Result<f64, BoundError> {
    trapezoid_gap_signed(fspec, a, b, m, tol).map(f64::abs)
}

/// Signed trapezoid gap; exposed so the kernel identity can be tested
/// without the absolute value in the way.
pub fn trapezoid_gap_signed(
    fspec: &FunctionSpec,
    a: f64,
    b: f64,
    m: f64,
    tol: f64,
) -> Result<f64, BoundError> {
    let mb = m * b;
    if !(a.is_finite() && b.is_finite() && a >= 0.0 && m > 0.0 && m <= 1.0 && a < mb)
        || mb > fspec.b_star()
    {
        return Err(BoundError::InvalidInterval {
            a,
            b,
            m,
            b_star: fspec.b_star(),
        });
    }
    let integral = quad::integrate(|x| fspec.f(x), a, mb, tol)?;
    Ok(0.5 * (fspec.f(a) + fspec.f(mb)) - integral.value / (mb - a))
}

/// ((mb-a)²/2) ∫₀¹ (t-t²) f''(ta + m(1-t)b) dt, the signed identity side.
pub fn rhs_lemma_integral(
    fspec: &FunctionSpec,
    a: f64,
    b: f64,
    m: f64,
    tol: f64,
) -> Result<f64, BoundError> {
    let mb = m * b;
    if !(a.is_finite() && b.is_finite() && a >= 0.0 && m > 0.0 && m <= 1.0 && a < mb)
        || mb > fspec.b_star()
    {
        return Err(BoundError::InvalidInterval {
            a,
            b,
            m,
            b_star: fspec.b_star(),
        });
    }
    let kernel = quad::integrate_kernel(|x| fspec.f2(x), a, b, m, tol)?;
    let len = mb - a;
    Ok(0.5 * len * len * kernel.value)
}

/// Power-mean bound with kernel moments 1/((α+2)(α+3)); valid for q >= 1.
pub fn bound_thm21(inputs: &BoundInputs, interval_len: f64) -> Result<f64, BoundError> {
    let len = check_len(interval_len)?;
    let AMParams { alpha, m, q } = inputs.params;
    let ca = 1.0 / ((alpha + 2.0) * (alpha + 3.0));
    let bracket = pow_q(inputs.abs_f2_a, q) * ca + m * pow_q(inputs.abs_f2_b, q) * (1.0 / 6.0 - ca);
    let prefactor = 0.5 * len * len * (1.0f64 / 6.0).powf(1.0 - 1.0 / q);
    Ok(prefactor * root_q(bracket, q))
}

/// Hölder bound through the (t-t²)^p moment; needs q > 1.
///
/// The stated constant replaces (√π/2)^(1/p) by 1; `Tight` keeps it.
pub fn bound_thm22(
    inputs: &BoundInputs,
    interval_len: f64,
    variant: BoundVariant,
) -> Result<f64, BoundError> {
    let len = check_len(interval_len)?;
    let AMParams { alpha, m, q } = inputs.params;
    if q <= 1.0 {
        return Err(BoundError::InvalidQ { q, need: "q > 1" });
    }
    let p = inputs.p();
    let bracket = pow_q(inputs.abs_f2_a, q) / (alpha + 1.0)
        + m * pow_q(inputs.abs_f2_b, q) * alpha / (alpha + 1.0);
    let stated = len * len / 8.0 * gamma_ratio_power(pr(p)) * root_q(bracket, q);
    Ok(match variant {
        BoundVariant::Stated => stated,
        BoundVariant::Tight => stated * (0.5 * std::f64::consts::PI.sqrt()).powf(1.0 / p),
    })
}

/// Hölder bound splitting t against (1-t)|f''|; needs q > 1.
///
/// The stated constant replaces (1/(p+1))^(1/p) by 1; `Tight` keeps it.
pub fn bound_thm23(
    inputs: &BoundInputs,
    interval_len: f64,
    variant: BoundVariant,
) -> Result<f64, BoundError> {
    let len = check_len(interval_len)?;
    let AMParams { alpha, m, q } = inputs.params;
    if q <= 1.0 {
        return Err(BoundError::InvalidQ { q, need: "q > 1" });
    }
    let p = inputs.p();
    let ba = beta(pr(alpha + 1.0), pr(q + 1.0));
    // B(α+1, q+1) <= 1/(q+1) analytically; clamp the log-space dust at α = 0
    let cb = (1.0 / (q + 1.0) - ba).max(0.0);
    let bracket = pow_q(inputs.abs_f2_a, q) * ba + m * pow_q(inputs.abs_f2_b, q) * cb;
    let stated = 0.5 * len * len * root_q(bracket, q);
    Ok(match variant {
        BoundVariant::Stated => stated,
        BoundVariant::Tight => stated * (1.0 / (p + 1.0)).powf(1.0 / p),
    })
}

/// Power-mean bound with moments B(α+2, q+1); valid for q >= 1.
pub fn bound_thm24(inputs: &BoundInputs, interval_len: f64) -> Result<f64, BoundError> {
    let len = check_len(interval_len)?;
    let AMParams { alpha, m, q } = inputs.params;
    let ba = beta(pr(alpha + 2.0), pr(q + 1.0));
    // B(α+2, q+1) <= 1/((q+1)(q+2)) analytically; clamp as in thm23
    let cb = (1.0 / ((q + 1.0) * (q + 2.0)) - ba).max(0.0);
    let bracket = pow_q(inputs.abs_f2_a, q) * ba + m * pow_q(inputs.abs_f2_b, q) * cb;
    let prefactor = 0.5 * len * len * 0.5f64.powf(1.0 - 1.0 / q);
    Ok(prefactor * root_q(bracket, q))
}

/// ((b-a)²/12) (|f''(a)| + |f''(b)|)/2, the classical plain-convex bound.
pub fn bound_eq0(abs_f2_a: f64, abs_f2_b: f64, a: f64, b: f64) -> Result<f64, BoundError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(BoundError::InvalidInterval {
            a,
            b,
            m: 1.0,
            b_star: f64::INFINITY,
        });
    }
    for &v in &[abs_f2_a, abs_f2_b] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(BoundError::InvalidSecondDerivative { value: v });
        }
    }
    let len = b - a;
    Ok(len * len / 12.0 * (0.5 * (abs_f2_a + abs_f2_b)))
}

/// ((b-a)²/8) (Γ(1+p)/Γ(3/2+p))^(1/p) ((|f''(a)|^q + m|f''(b/m)|^q)/2)^(1/q).
///
/// The caller supplies |f''(b/m)|, so it is responsible for b/m lying in the
/// function's domain.
pub fn bound_thm11(
    abs_f2_a: f64,
    abs_f2_b_over_m: f64,
    a: f64,
    b: f64,
    m: f64,
    q: f64,
) -> Result<f64, BoundError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(BoundError::InvalidInterval {
            a,
            b,
            m,
            b_star: f64::INFINITY,
        });
    }
    if !(m > 0.0 && m <= 1.0) {
        return Err(BoundError::InvalidInterval {
            a,
            b,
            m,
            b_star: f64::INFINITY,
        });
    }
    if !(q.is_finite() && q > 1.0) {
        return Err(BoundError::InvalidQ { q, need: "q > 1" });
    }
    for &v in &[abs_f2_a, abs_f2_b_over_m] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(BoundError::InvalidSecondDerivative { value: v });
        }
    }
    let p = q / (q - 1.0);
    let len = b - a;
    let bracket = 0.5 * (pow_q(abs_f2_a, q) + m * pow_q(abs_f2_b_over_m, q));
    Ok(len * len / 8.0 * gamma_ratio_power(pr(p)) * root_q(bracket, q))
}

/// Branch of the λ-weighted bound for 0 <= λ <= 1/2.
pub fn thm12_rhs_low(lambda: f64, abs_f2_a: f64, abs_f2_b: f64, a: f64, b: f64) -> f64 {
    let l = lambda;
    let ca = l.powi(4) + (1.0 + l) * (1.0 - l).powi(3) + (5.0 * l - 3.0) / 4.0;
    let cb = l.powi(4) + (2.0 - l) * l.powi(3) + (1.0 - 3.0 * l) / 4.0;
    let len = b - a;
    len * len / 12.0 * (ca * abs_f2_a + cb * abs_f2_b)
}

/// Branch of the λ-weighted bound for 1/2 <= λ <= 1.
pub fn thm12_rhs_high(lambda: f64, abs_f2_a: f64, abs_f2_b: f64, a: f64, b: f64) -> f64 {
    let len = b - a;
    len * len * (3.0 * lambda - 1.0) / 48.0 * (abs_f2_a + abs_f2_b)
}

/// λ-weighted trapezoid/midpoint combination and its bound:
/// lhs = |(λ-1) f((a+b)/2) - λ (f(a)+f(b))/2 + (1/(b-a)) ∫ₐᵇ f|.
///
/// Returns (lhs, rhs). The two rhs branches agree at λ = 1/2 (up to
/// floating-point dust); the upper branch is used there.
pub fn bound_thm12(
    fspec: &FunctionSpec,
    lambda: f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64), BoundError> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(BoundError::InvalidLambda { lambda });
    }
    if !(a.is_finite() && b.is_finite() && a >= 0.0 && a < b) || b > fspec.b_star() {
        return Err(BoundError::InvalidInterval {
            a,
            b,
            m: 1.0,
            b_star: fspec.b_star(),
        });
    }
    let integral = quad::integrate(|x| fspec.f(x), a, b, tol)?;
    let mean = integral.value / (b - a);
    let mid = 0.5 * (a + b);
    let lhs =
        ((lambda - 1.0) * fspec.f(mid) - 0.5 * lambda * (fspec.f(a) + fspec.f(b)) + mean).abs();
    let aa = fspec.f2(a).abs();
    let bb = fspec.f2(b).abs();
    let rhs = if lambda < 0.5 {
        thm12_rhs_low(lambda, aa, bb, a, b)
    } else {
        thm12_rhs_high(lambda, aa, bb, a, b)
    };
    Ok((lhs, rhs))
}

/// Evaluate the trapezoid gap, every applicable bound, and the convexity
/// gate for |f''|^q, using the default gate grid.
pub fn evaluate_all(
    fspec: &FunctionSpec,
    a: f64,
    b: f64,
    params: AMParams,
    tol: f64,
) -> Result<BoundReport, BoundError> {
    let gate = convexity::check_abs_f2_q(
        fspec,
        &params,
        convexity::DEFAULT_GRID_N,
        convexity::DEFAULT_TOL,
    )?;
    evaluate_all_with_gate(fspec, a, b, params, tol, gate)
}

/// Same as [`evaluate_all`] but with a pre-computed gate verdict (the sweep
/// caches gates across intervals).
pub fn evaluate_all_with_gate(
    fspec: &FunctionSpec,
    a: f64,
    b: f64,
    params: AMParams,
    tol: f64,
    gate: ConvexityVerdict,
) -> Result<BoundReport, BoundError> {
    let inputs = BoundInputs::from_spec(fspec, a, b, params)?;
    let len = inputs.interval_len();
    let lhs = lhs_trapezoid(fspec, a, b, params.m, tol)?;

    let mut rhs = BTreeMap::new();
    rhs.insert(BoundLabel::Thm21, bound_thm21(&inputs, len)?);
    if params.q > 1.0 {
        rhs.insert(
            BoundLabel::Thm22Tight,
            bound_thm22(&inputs, len, BoundVariant::Tight)?,
        );
        rhs.insert(
            BoundLabel::Thm22,
            bound_thm22(&inputs, len, BoundVariant::Stated)?,
        );
        rhs.insert(
            BoundLabel::Thm23Tight,
            bound_thm23(&inputs, len, BoundVariant::Tight)?,
        );
        rhs.insert(
            BoundLabel::Thm23,
            bound_thm23(&inputs, len, BoundVariant::Stated)?,
        );
    }
    rhs.insert(BoundLabel::Thm24, bound_thm24(&inputs, len)?);

    let slack: BTreeMap<BoundLabel, f64> = rhs.iter().map(|(k, v)| (*k, v - lhs)).collect();
    let mut tightest = BoundLabel::Thm21;
    let mut best = f64::INFINITY;
    for (label, value) in &rhs {
        // strict '<' plus ascending label order makes ties resolve low
        if *value < best {
            best = *value;
            tightest = *label;
        }
    }

    Ok(BoundReport {
        lhs,
        rhs_by_theorem: rhs,
        slack_by_theorem: slack,
        tightest,
        convexity_gate: gate,
    })
}
