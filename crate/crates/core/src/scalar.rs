//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the model can be evaluated in.
///
/// Implemented for `f32` and `f64`. The reference tolerances quoted in the
/// docs and tests are for `f64`; `f32` is useful for quick exploratory grids.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, panicking only if the target cannot represent it at all.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `n` evenly spaced values from `lo` to `hi` inclusive. `n == 1` yields `[lo]`.
pub fn linspace<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::lit((n - 1) as f64);
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * T::lit(i as f64) })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints_exact() {
        let v = linspace(0.0f64, 6.0, 20);
        assert_eq!(v.len(), 20);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[19], 6.0);
        assert!(linspace(1.0f32, 2.0, 0).is_empty());
        assert_eq!(linspace(1.5f64, 2.0, 1), vec![1.5]);
    }
}
