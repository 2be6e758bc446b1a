//! Adaptive Simpson quadrature with a Richardson error estimate.
//!
//! Subdivision is deterministic (left half before right half, fixed depth
//! cap), so every run of the same integrand produces identical bits.

use thiserror::Error;

/// Default absolute tolerance used by the bound evaluators.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Max recursion depth; an interval split this often spans ~1e-15 of the range.
pub const MAX_DEPTH: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Accumulated |S2 - S1|/15 over accepted panels plus a roundoff floor.
    pub err_estimate: f64,
    /// Number of accepted panels, >= 1.
    pub subdivisions: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuadError {
    #[error("integration interval [{lo}, {hi}] must satisfy lo < hi with finite endpoints")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("tolerance {tol} must be finite and > 0")]
    InvalidTolerance { tol: f64 },
    #[error("integrand returned a non-finite value at x = {abscissa}")]
    Evaluation { abscissa: f64 },
    #[error(
        "no convergence within depth {max_depth}; best estimate {} (err {})",
        best.value, best.err_estimate
    )]
    Convergence { max_depth: u32, best: QuadResult },
    #[error("kernel parameters need 0 < m <= 1 and a < m*b, got a = {a}, b = {b}, m = {m}")]
    KernelParams { a: f64, b: f64, m: f64 },
}

#[derive(Default)]
struct Acc {
    value: f64,
    err: f64,
    abs_sum: f64,
    panels: u32,
    starved: u32,
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

/// One Simpson panel: interval, cached endpoint/midpoint values, and the
/// coarse estimate over the whole panel.
#[derive(Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
}

fn refine<E>(eval: &E, panel: Panel, tol: f64, depth: u32, acc: &mut Acc) -> Result<(), QuadError>
where
    E: Fn(f64) -> Result<f64, QuadError>,
{
    let Panel {
        lo,
        hi,
        flo,
        fmid,
        fhi,
        whole,
    } = panel;
    let mid = 0.5 * (lo + hi);
    let lmid = 0.5 * (lo + mid);
    let rmid = 0.5 * (mid + hi);
    let flmid = eval(lmid)?;
    let frmid = eval(rmid)?;
    let left = simpson(flo, flmid, fmid, mid - lo);
    let right = simpson(fmid, frmid, fhi, hi - mid);
    let halves = left + right;
    let diff = halves - whole;
    if diff.abs() <= 15.0 * tol || depth >= MAX_DEPTH {
        acc.value += halves + diff / 15.0;
        acc.err += diff.abs() / 15.0;
        acc.abs_sum += left.abs() + right.abs();
        acc.panels += 1;
        if diff.abs() > 15.0 * tol {
            acc.starved += 1;
        }
        return Ok(());
    }
    let half_tol = 0.5 * tol;
    let left_panel = Panel {
        lo,
        hi: mid,
        flo,
        fmid: flmid,
        fhi: fmid,
        whole: left,
    };
    let right_panel = Panel {
        lo: mid,
        hi,
        flo: fmid,
        fmid: frmid,
        fhi,
        whole: right,
    };
    refine(eval, left_panel, half_tol, depth + 1, acc)?;
    refine(eval, right_panel, half_tol, depth + 1, acc)
}

/// Integrate `f` over `[lo, hi]` to absolute tolerance `tol`.
///
/// A non-finite integrand value surfaces as [`QuadError::Evaluation`] with the
/// offending abscissa; running out of depth surfaces as
/// [`QuadError::Convergence`] carrying the best estimate found.
pub fn integrate<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::InvalidInterval { lo, hi });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(QuadError::InvalidTolerance { tol });
    }
    let eval = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::Evaluation { abscissa: x })
        }
    };
    let mid = 0.5 * (lo + hi);
    let flo = eval(lo)?;
    let fmid = eval(mid)?;
    let fhi = eval(hi)?;
    let whole = simpson(flo, fmid, fhi, hi - lo);
    let root = Panel {
        lo,
        hi,
        flo,
        fmid,
        fhi,
        whole,
    };
    let mut acc = Acc::default();
    refine(&eval, root, tol, 0, &mut acc)?;
    let result = QuadResult {
        value: acc.value,
        // roundoff floor: summing panels cannot be more accurate than eps * sum|panel|
        err_estimate: acc.err + f64::EPSILON * acc.abs_sum,
        subdivisions: acc.panels,
    };
    if acc.starved > 0 {
        Err(QuadError::Convergence {
            max_depth: MAX_DEPTH,
            best: result,
        })
    } else {
        Ok(result)
    }
}

/// ∫₀¹ (t - t²) g(ta + m(1-t)b) dt, the weighted kernel behind every bound.
///
/// Requires 0 < m <= 1 and a < m*b so the kernel argument sweeps [a, mb].
pub fn integrate_kernel<G>(g: G, a: f64, b: f64, m: f64, tol: f64) -> Result<QuadResult, QuadError>
where
    G: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite() && m > 0.0 && m <= 1.0 && a < m * b) {
        return Err(QuadError::KernelParams { a, b, m });
    }
    integrate(
        |t| (t - t * t) * g(t * a + m * (1.0 - t) * b),
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn integrates_monomials_exactly() {
        let r = integrate(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 / 3.0, epsilon = 1e-13);
        assert!(r.subdivisions >= 1);

        let r = integrate(|t| t - t * t, 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 / 6.0, epsilon = 1e-13);
    }

    #[test]
    fn integrates_smooth_functions_to_tolerance() {
        let r = integrate(f64::exp, 0.0, 1.0, 1e-10).unwrap();
        let exact = std::f64::consts::E - 1.0;
        assert_abs_diff_eq!(r.value, exact, epsilon = 1e-10);
        assert!((r.value - exact).abs() <= 10.0 * r.err_estimate);

        let r = integrate(|t| (t - t * t) * (t - t * t), 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 / 30.0, epsilon = 1e-12);
    }

    #[test]
    fn error_estimate_covers_true_error() {
        for &(f, exact) in &[
            ((|x: f64| x * x) as fn(f64) -> f64, 1.0 / 3.0),
            (|t: f64| t - t * t, 1.0 / 6.0),
            (f64::exp, std::f64::consts::E - 1.0),
            (|t: f64| (t - t * t).powf(1.5), 0.073_631_077_818_510_78),
        ] {
            let r = integrate(f, 0.0, 1.0, 1e-10).unwrap();
            assert!(
                (r.value - exact).abs() <= 10.0 * r.err_estimate,
                "true err {} vs estimate {}",
                (r.value - exact).abs(),
                r.err_estimate
            );
        }
    }

    #[test]
    fn endpoint_singular_powers_converge() {
        // B(p+1, p+1) for p = 1.5 and 3 (mpmath)
        let r = integrate(|t| (t - t * t).powf(1.5), 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 0.073_631_077_818_510_78, epsilon = 1e-12);
        let r = integrate(|t| (t - t * t).powi(3), 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 / 140.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_interval_and_tolerance() {
        assert!(matches!(
            integrate(|x| x, 1.0, 0.0, 1e-9),
            Err(QuadError::InvalidInterval { .. })
        ));
        assert!(matches!(
            integrate(|x| x, 0.0, f64::INFINITY, 1e-9),
            Err(QuadError::InvalidInterval { .. })
        ));
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, 0.0),
            Err(QuadError::InvalidTolerance { .. })
        ));
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, f64::NAN),
            Err(QuadError::InvalidTolerance { .. })
        ));
    }

    #[test]
    fn reports_non_finite_evaluation_with_abscissa() {
        let err = integrate(|x| 1.0 / x, -1.0, 1.0, 1e-9).unwrap_err();
        match err {
            QuadError::Evaluation { abscissa } => assert_eq!(abscissa, 0.0),
            other => panic!("unexpected error {other:?}"),
        }
        let err = integrate(|x| x.sqrt(), -1.0, 1.0, 1e-9).unwrap_err();
        match err {
            QuadError::Evaluation { abscissa } => assert_eq!(abscissa, -1.0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn depth_exhaustion_carries_best_estimate() {
        // step at an irrational point: |S2 - S1| shrinks like the local h and
        // never catches the geometrically shrinking panel tolerance
        let step = |x: f64| {
            if x < std::f64::consts::FRAC_1_PI {
                -1.0
            } else {
                1.0
            }
        };
        let err = integrate(step, 0.0, 1.0, 1e-12).unwrap_err();
        match err {
            QuadError::Convergence { max_depth, best } => {
                assert_eq!(max_depth, MAX_DEPTH);
                let exact = 1.0 - 2.0 * std::f64::consts::FRAC_1_PI;
                assert_abs_diff_eq!(best.value, exact, epsilon = 1e-6);
                assert!(best.subdivisions > 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn kernel_moments() {
        // g == 2: 2 * ∫ (t - t²) = 1/3
        let r = integrate_kernel(|_| 2.0, 0.0, 1.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 / 3.0, epsilon = 1e-12);
        // g = id, a = 0, b = 1, m = 1: argument is 1 - t, moment is B(2,3)
        let r = integrate_kernel(|x| x, 0.0, 1.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 / 12.0, epsilon = 1e-12);
        // zero second derivative wipes the kernel
        let r = integrate_kernel(|_| 0.0, 0.0, 1.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn kernel_argument_stays_inside_interval() {
        // record the sweep of ta + m(1-t)b and check the hull
        let a = 0.25;
        let b = 1.5;
        let m = 0.8;
        let seen = std::cell::RefCell::new((f64::INFINITY, f64::NEG_INFINITY));
        integrate_kernel(
            |x| {
                let mut s = seen.borrow_mut();
                s.0 = s.0.min(x);
                s.1 = s.1.max(x);
                1.0
            },
            a,
            b,
            m,
            1e-10,
        )
        .unwrap();
        let (lo, hi) = *seen.borrow();
        assert!(lo >= a - 1e-12 && hi <= m * b + 1e-12);
    }

    #[test]
    fn kernel_rejects_bad_parameters() {
        assert!(matches!(
            integrate_kernel(|_| 1.0, 0.9, 1.0, 0.5, 1e-9),
            Err(QuadError::KernelParams { .. })
        ));
        assert!(matches!(
            integrate_kernel(|_| 1.0, 0.0, 1.0, 0.0, 1e-9),
            Err(QuadError::KernelParams { .. })
        ));
        assert!(matches!(
            integrate_kernel(|_| 1.0, 0.0, 1.0, 1.5, 1e-9),
            Err(QuadError::KernelParams { .. })
        ));
    }

    proptest! {
        #[test]
        fn cubics_integrate_with_tiny_error(
            c0 in -2.0..2.0f64,
            c1 in -2.0..2.0f64,
            c2 in -2.0..2.0f64,
            c3 in -2.0..2.0f64,
        ) {
            // Simpson is exact on cubics, so even a loose tolerance nails them
            let f = |x: f64| c0 + x * (c1 + x * (c2 + x * c3));
            let exact = c0 + c1 / 2.0 + c2 / 3.0 + c3 / 4.0;
            let r = integrate(f, 0.0, 1.0, 1e-3).unwrap();
            prop_assert!((r.value - exact).abs() <= 1e-13);
        }

        #[test]
        fn integration_is_linear(
            a0 in -1.0..1.0f64,
            a1 in -1.0..1.0f64,
            b0 in -1.0..1.0f64,
            b2 in -1.0..1.0f64,
            ca in -2.0..2.0f64,
            cb in -2.0..2.0f64,
        ) {
            let tol = 1e-10;
            let f = move |x: f64| a0 + a1 * x + x.sin();
            let g = move |x: f64| b0 + b2 * x * x + (-x).exp();
            let sum = integrate(move |x| ca * f(x) + cb * g(x), 0.0, 1.0, tol).unwrap();
            let fi = integrate(f, 0.0, 1.0, tol).unwrap();
            let gi = integrate(g, 0.0, 1.0, tol).unwrap();
            prop_assert!((sum.value - (ca * fi.value + cb * gi.value)).abs() <= 2.0 * tol * (1.0 + ca.abs() + cb.abs()));
        }

        #[test]
        fn determinism_same_bits(ofs in 0.0..0.5f64) {
            let f = move |x: f64| (x + ofs).exp() * x.cos();
            let r1 = integrate(f, 0.0, 1.5, 1e-11).unwrap();
            let r2 = integrate(f, 0.0, 1.5, 1e-11).unwrap();
            prop_assert_eq!(r1.value.to_bits(), r2.value.to_bits());
            prop_assert_eq!(r1.err_estimate.to_bits(), r2.err_estimate.to_bits());
            prop_assert_eq!(r1.subdivisions, r2.subdivisions);
        }
    }
}
