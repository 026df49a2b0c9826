//! Composite Gauss–Legendre quadrature with panel doubling.

use crate::error::{Error, Result};
use crate::real::Real;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Nodes are the roots of `P_n`, found by Newton iteration from the
    /// Tricomi initial guesses; the iteration runs in `f64` and is rounded
    /// to `T` at the end.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = T::lit(-x);
            nodes[n - 1 - i] = T::lit(x);
            weights[i] = T::lit(w);
            weights[n - 1 - i] = T::lit(w);
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Single application on `[a, b]`.
    pub fn apply<F: FnMut(T) -> T>(&self, f: &mut F, a: T, b: T) -> T {
        let half = T::lit(0.5) * (b - a);
        let mid = T::lit(0.5) * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(mid + half * x))
            * half
    }

    /// Composite rule over `panels` equal sub-intervals.
    pub fn composite<F: FnMut(T) -> T>(&self, f: &mut F, a: T, b: T, panels: usize) -> T {
        let panels = panels.max(1);
        let h = (b - a) / T::from_count(panels);
        (0..panels).fold(T::zero(), |acc, i| {
            let lo = a + h * T::from_count(i);
            acc + self.apply(f, lo, lo + h)
        })
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Convergence controls for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControls<T> {
    /// Stop when successive estimates differ by less than `rel·|I|`...
    pub rel_tol: T,
    /// ...or by less than `abs_tol`.
    pub abs_tol: T,
    pub max_panels: usize,
}

impl<T: Real> Default for QuadratureControls<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-14),
            max_panels: 1 << 16,
        }
    }
}

/// Halves the panel width until two successive composite estimates agree.
pub fn integrate_adaptive<T: Real, F: FnMut(T) -> T>(
    rule: &GaussLegendre<T>,
    mut f: F,
    a: T,
    b: T,
    initial_panels: usize,
    controls: &QuadratureControls<T>,
) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    // Tolerances below the scalar's resolution can never be met.
    let floor = T::epsilon() * T::lit(64.0);
    let rel = controls.rel_tol.max(floor);
    let mut panels = initial_panels.max(1);
    let mut previous = rule.composite(&mut f, a, b, panels);
    let mut change = T::infinity();
    while panels * 2 <= controls.max_panels {
        panels *= 2;
        let current = rule.composite(&mut f, a, b, panels);
        change = (current - previous).abs();
        if change <= rel * current.abs() || change <= controls.abs_tol {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::QuadratureNonConvergence {
        panels,
        change: change.as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let rule = GaussLegendre::<f64>::new(8);
        for degree in 0..16 {
            let got = rule.apply(&mut |x: f64| x.powi(degree), -1.0, 1.0);
            let exact = if degree % 2 == 1 {
                0.0
            } else {
                2.0 / (degree as f64 + 1.0)
            };
            assert!((got - exact).abs() < 1e-14, "degree {degree}: {got} vs {exact}");
        }
        let w: f64 = rule.weights.iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn odd_rule_has_center_node() {
        let rule = GaussLegendre::<f64>::new(5);
        assert_eq!(rule.nodes[2], 0.0);
        assert_relative_eq!(rule.weights[2], 128.0 / 225.0, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_oscillatory_integral() {
        let rule = GaussLegendre::<f64>::new(32);
        let k = 137.0;
        let got = integrate_adaptive(
            &rule,
            |x: f64| (k * x).cos() * (-x).exp(),
            0.0,
            3.0,
            1,
            &QuadratureControls::default(),
        )
        .unwrap();
        // ∫₀³ e^{-x} cos kx dx
        let exact = (1.0 + (-3.0f64).exp() * (k * (3.0 * k).sin() - (3.0 * k).cos())) / (1.0 + k * k);
        assert!((got - exact).abs() < 1e-13, "{got} vs {exact}");
    }

    #[test]
    fn non_convergence_is_reported() {
        let rule = GaussLegendre::<f64>::new(2);
        let controls = QuadratureControls {
            rel_tol: 1e-15,
            abs_tol: 0.0,
            max_panels: 8,
        };
        let err = integrate_adaptive(&rule, |x: f64| (400.0 * x).sin().abs(), 0.0, 1.0, 1, &controls);
        assert!(matches!(err, Err(Error::QuadratureNonConvergence { .. })));
    }

    #[test]
    fn f32_rule_integrates_to_single_precision() {
        let rule = GaussLegendre::<f32>::new(16);
        let got = integrate_adaptive(&rule, |x: f32| x.sin(), 0.0, 3.0, 1, &QuadratureControls::default()).unwrap();
        assert!((got - (1.0 - 3.0f32.cos())).abs() < 1e-5);
    }
}
