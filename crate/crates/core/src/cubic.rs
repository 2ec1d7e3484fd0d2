//! Roots of the monic cubic `x^3 + a x^2 + b x + c`.
//!
//! A real root is bracketed inside the Cauchy bound and refined by Newton
//! steps; the remaining quadratic factor is solved with the cancellation-free
//! formula.

use num_complex::Complex;

use crate::roots::brent;
use crate::scalar::Scalar;

#[inline]
fn eval<T: Scalar>(coeffs: [T; 3], x: T) -> T {
    ((x + coeffs[0]) * x + coeffs[1]) * x + coeffs[2]
}

/// All three roots of `x^3 + a x^2 + b x + c`, real root first.
pub fn cubic_roots<T: Scalar>(a: T, b: T, c: T) -> [Complex<T>; 3] {
    let coeffs = [a, b, c];
    let bound = T::one() + a.abs().max(b.abs()).max(c.abs());
    let mut r = match brent(|x| eval(coeffs, x), -bound, bound, T::zero()) {
        Ok(root) => root.x,
        Err(_) => T::zero(),
    };
    for _ in 0..3 {
        let f = eval(coeffs, r);
        let df = (T::lit(3.0) * r + T::lit(2.0) * a) * r + b;
        if df == T::zero() || f == T::zero() {
            break;
        }
        let next = r - f / df;
        if eval(coeffs, next).abs() < f.abs() {
            r = next;
        } else {
            break;
        }
    }
    let q1 = a + r;
    let q0 = b + r * q1;
    let [s1, s2] = quadratic_roots(q1, q0);
    [Complex::new(r, T::zero()), s1, s2]
}

/// Roots of `x^2 + p x + q`.
pub fn quadratic_roots<T: Scalar>(p: T, q: T) -> [Complex<T>; 2] {
    let half = T::lit(0.5);
    let disc = p * p - T::lit(4.0) * q;
    if disc >= T::zero() {
        let sq = disc.sqrt();
        let t = -half * (p + if p >= T::zero() { sq } else { -sq });
        if t == T::zero() {
            return [Complex::new(T::zero(), T::zero()); 2];
        }
        [Complex::new(t, T::zero()), Complex::new(q / t, T::zero())]
    } else {
        let re = -half * p;
        let im = half * (-disc).sqrt();
        [Complex::new(re, im), Complex::new(re, -im)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(a: f64, b: f64, c: f64, z: Complex<f64>) -> Complex<f64> {
        ((z + a) * z + b) * z + c
    }

    #[test]
    fn distinct_real_roots() {
        // (x-1)(x+2)(x-3) = x^3 - 2x^2 - 5x + 6
        let mut r: Vec<f64> = cubic_roots(-2.0, -5.0, 6.0).iter().map(|z| z.re).collect();
        r.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (got, want) in r.iter().zip([-2.0f64, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_pair() {
        // (x - 0.5)(x^2 + 1)
        let r = cubic_roots(-0.5f64, 1.0, -0.5);
        assert!((r[0].re - 0.5).abs() < 1e-14);
        assert!((r[1].im.abs() - 1.0).abs() < 1e-14);
        assert_eq!(r[1].conj(), r[2]);
    }

    #[test]
    fn triple_root() {
        // (x - 1)^3
        for z in cubic_roots(-3.0, 3.0, -1.0) {
            assert!((z - Complex::new(1.0, 0.0)).norm() < 1e-4);
        }
    }

    proptest! {
        #[test]
        fn vieta_and_residuals(a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0) {
            let r = cubic_roots(a, b, c);
            let sum = r[0] + r[1] + r[2];
            let prod = r[0] * r[1] * r[2];
            prop_assert!((sum.re + a).abs() < 1e-8 * (1.0 + a.abs()));
            prop_assert!((prod.re + c).abs() < 1e-7 * (1.0 + c.abs() + a.abs() + b.abs()));
            for z in r {
                let scale = 1.0 + z.norm().powi(3) + a.abs() * z.norm_sqr() + b.abs() * z.norm() + c.abs();
                prop_assert!(poly(a, b, c, z).norm() < 1e-9 * scale);
            }
        }
    }
}
