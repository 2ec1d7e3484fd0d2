//! Safeguarded bracketing root finder (bisection with inverse quadratic and
//! secant interpolation, Brent's method).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_ITER: usize = 300;

/// A converged root together with the final bracket width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub x: T,
    pub fx: T,
    pub width: T,
    pub iterations: usize,
}

/// Finds a root of `f` in `[lo, hi]`, which must bracket a sign change.
///
/// Iterates until the bracket is narrower than `xtol + 4 eps |x|` or an exact
/// zero is hit.
pub fn brent<T: Scalar, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, xtol: T) -> Result<Root<T>> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if !(fa.is_finite() && fb.is_finite()) || (fa > T::zero() && fb > T::zero()) || (fa < T::zero() && fb < T::zero()) {
        return Err(Error::RootNotBracketed { lo: lo.as_f64(), hi: hi.as_f64(), f_lo: fa.as_f64(), f_hi: fb.as_f64() });
    }
    if fa == T::zero() {
        return Ok(Root { x: a, fx: fa, width: T::zero(), iterations: 0 });
    }
    if fb == T::zero() {
        return Ok(Root { x: b, fx: fb, width: T::zero(), iterations: 0 });
    }

    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let three = T::lit(3.0);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for it in 1..=MAX_ITER {
        if (fb > T::zero() && fc > T::zero()) || (fb < T::zero() && fc < T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * xtol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            return Ok(Root { x: b, fx: fb, width: (c - b).abs(), iterations: it });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b = b + d;
        } else {
            b = b + if xm > T::zero() { tol1 } else { -tol1 };
        }
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    Ok(Root { x: b, fx: fb, width: (c - b).abs(), iterations: MAX_ITER })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = brent(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
        assert!(r.width < 1e-13);
    }

    #[test]
    fn rejects_missing_sign_change() {
        let e = brent(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(e, Error::RootNotBracketed { .. }));
    }

    #[test]
    fn endpoint_root() {
        let r = brent(|x: f64| x - 1.0, 1.0, 3.0, 1e-12).unwrap();
        assert_eq!(r.x, 1.0);
    }

    #[test]
    fn works_in_single_precision() {
        let r = brent(|x: f32| x.cos() - x, 0.0, 1.0, 1e-6).unwrap();
        assert!((r.x - 0.739_085_1).abs() < 1e-6);
    }

    #[test]
    fn flat_tail_function() {
        // tanh saturates: many iterates land where f is constant in floating point
        let r = brent(|x: f64| x - 0.5 * (40.0 * x).tanh(), 1e-9, 0.5, 0.0).unwrap();
        assert!((r.x - 0.5 * (40.0 * r.x).tanh()).abs() < 1e-15);
    }
}
