//! Vector-valued Chebyshev interpolation on an interval.

use crate::real::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Chebyshev<T> {
    lo: T,
    hi: T,
    /// `coeffs[j]` holds the `j`-th coefficient of every component.
    coeffs: Vec<Vec<T>>,
}

impl<T: Real> Chebyshev<T> {
    /// Points of the first kind mapped to `[lo, hi]`, in the order expected by
    /// [`Chebyshev::from_values`].
    pub fn nodes(lo: T, hi: T, count: usize) -> Vec<T> {
        let half = T::lit(0.5);
        (0..count)
            .map(|k| {
                let x = (T::PI() * (T::from_count(k) + half) / T::from_count(count)).cos();
                half * (lo + hi) + half * (hi - lo) * x
            })
            .collect()
    }

    /// `values[k]` is the function at `nodes(lo, hi, values.len())[k]`.
    pub fn from_values(lo: T, hi: T, values: &[Vec<T>]) -> Self {
        let n = values.len();
        assert!(n > 0, "at least one node");
        let width = values[0].len();
        let scale = T::lit(2.0) / T::from_count(n);
        let half = T::lit(0.5);
        let coeffs = (0..n)
            .map(|j| {
                let mut c = vec![T::zero(); width];
                for (k, v) in values.iter().enumerate() {
                    let w = (T::PI() * T::from_count(j) * (T::from_count(k) + half) / T::from_count(n)).cos();
                    for (ci, &vi) in c.iter_mut().zip(v) {
                        *ci += w * vi;
                    }
                }
                let norm = if j == 0 { half * scale } else { scale };
                c.iter_mut().for_each(|ci| *ci *= norm);
                c
            })
            .collect();
        Self { lo, hi, coeffs }
    }

    pub fn width(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn domain(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    /// Clenshaw evaluation of every component into `out`.
    pub fn eval_into(&self, x: T, out: &mut [T]) {
        let two = T::lit(2.0);
        let u = if self.hi > self.lo {
            (two * x - self.lo - self.hi) / (self.hi - self.lo)
        } else {
            T::zero()
        };
        for (i, o) in out.iter_mut().enumerate() {
            let (mut b1, mut b2) = (T::zero(), T::zero());
            for c in self.coeffs.iter().skip(1).rev() {
                let b0 = two * u * b1 - b2 + c[i];
                b2 = b1;
                b1 = b0;
            }
            *o = u * b1 - b2 + self.coeffs[0][i];
        }
    }

    pub fn eval(&self, x: T) -> Vec<T> {
        let mut out = vec![T::zero(); self.width()];
        self.eval_into(x, &mut out);
        out
    }
}

/// Deterministic, well-spread points in `(lo, hi)` from the golden-ratio
/// sequence.
pub fn golden_points<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    let phi = T::lit(0.618_033_988_749_894_9);
    (1..=count)
        .map(|j| {
            let frac = (T::from_count(j) * phi).fract();
            lo + (hi - lo) * frac
        })
        .collect()
}
