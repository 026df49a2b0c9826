//! Dormand–Prince 5(4) for complex matrix-valued linear ODEs.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

pub type State<T> = DMatrix<Complex<T>>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControls<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_steps: usize,
    /// Disables error control and marches with this step.
    pub fixed_step: Option<T>,
}

impl<T: Real> Default for StepControls<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-12),
            max_steps: 10_000_000,
            fixed_step: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats<T> {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evaluations: usize,
    pub min_step: T,
    pub max_step: T,
}

const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [&[f64]; 6] = [
    &[0.2],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth- minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Adaptive integrator that keeps its step size between calls to
/// [`Integrator::advance`].
pub struct Integrator<T: Real> {
    controls: StepControls<T>,
    h: Option<T>,
    k: Vec<State<T>>,
    fsal: bool,
    pub stats: StepStats<T>,
}

impl<T: Real> Integrator<T> {
    pub fn new(controls: StepControls<T>) -> Self {
        Self {
            controls,
            h: controls.fixed_step,
            k: Vec::new(),
            fsal: false,
            stats: StepStats {
                min_step: T::infinity(),
                ..Default::default()
            },
        }
    }

    /// Integrates `y` from `t` to `t_end`, calling `on_step(t, y)` after every
    /// accepted step.
    pub fn advance<F, O>(&mut self, rhs: &mut F, t: &mut T, y: &mut State<T>, t_end: T, on_step: &mut O) -> Result<()>
    where
        F: FnMut(T, &State<T>, &mut State<T>) -> Result<()>,
        O: FnMut(T, &State<T>) -> Result<()>,
    {
        if self.k.is_empty() {
            self.k = vec![State::zeros(y.nrows(), y.ncols()); 7];
        }
        if !self.fsal {
            rhs(*t, y, &mut self.k[0])?;
            self.stats.rhs_evaluations += 1;
            self.fsal = true;
        }
        if self.h.is_none() {
            self.h = Some(self.initial_step(y, t_end - *t));
        }
        let mut stage = State::zeros(y.nrows(), y.ncols());
        let mut y_new = State::zeros(y.nrows(), y.ncols());
        let floor = T::lit(16.0) * T::epsilon();
        while *t < t_end {
            if self.stats.accepted + self.stats.rejected >= self.controls.max_steps {
                return Err(Error::StepBudget {
                    steps: self.controls.max_steps,
                    t: t.as_f64(),
                });
            }
            let remaining = t_end - *t;
            let mut h = self.h.expect("step size initialized");
            let clipped = h >= remaining;
            if clipped {
                h = remaining;
            }
            if h <= floor * t.abs().max(T::one()) {
                return Err(Error::StepUnderflow {
                    t: t.as_f64(),
                    h: h.as_f64(),
                });
            }
            for s in 1..7 {
                stage.copy_from(y);
                for (j, &a) in A[s - 1].iter().enumerate() {
                    if a != 0.0 {
                        stage.zip_apply(&self.k[j], |acc, kj| *acc += kj * (h * T::lit(a)));
                    }
                }
                rhs(*t + h * T::lit(C[s - 1]), &stage, &mut self.k[s])?;
                self.stats.rhs_evaluations += 1;
            }
            // The sixth stage argument is the fifth-order solution.
            y_new.copy_from(&stage);

            if let Some(fixed) = self.controls.fixed_step {
                self.accept(t, y, &y_new, h);
                if clipped {
                    *t = t_end;
                }
                self.h = Some(fixed);
                on_step(*t, y)?;
                continue;
            }

            let err = self.error_norm(y, &y_new, h);
            let factor = if err == T::zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
            };
            if err <= T::one() {
                self.accept(t, y, &y_new, h);
                if clipped {
                    *t = t_end;
                }
                // A step shortened to hit `t_end` says nothing about the
                // natural step size.
                if !clipped || factor < T::one() {
                    self.h = Some(h * factor);
                }
                on_step(*t, y)?;
            } else {
                self.stats.rejected += 1;
                self.h = Some(h * factor.min(T::one()));
            }
        }
        Ok(())
    }

    fn accept(&mut self, t: &mut T, y: &mut State<T>, y_new: &State<T>, h: T) {
        *t += h;
        y.copy_from(y_new);
        self.k.swap(0, 6);
        self.stats.accepted += 1;
        self.stats.min_step = self.stats.min_step.min(h);
        self.stats.max_step = self.stats.max_step.max(h);
    }

    fn error_norm(&self, y: &State<T>, y_new: &State<T>, h: T) -> T {
        let (rtol, atol) = (self.controls.rel_tol, self.controls.abs_tol);
        // Max-norm: every entry of α and β is held to the tolerance.
        let mut worst = T::zero();
        for i in 0..y.len() {
            let mut e = Complex::new(T::zero(), T::zero());
            for (j, &w) in E.iter().enumerate() {
                if w != 0.0 {
                    e += self.k[j][i] * T::lit(w);
                }
            }
            let scale = atol + rtol * y[i].norm().max(y_new[i].norm());
            worst = worst.max(e.norm() * h / scale);
        }
        worst
    }

    fn initial_step(&self, y: &State<T>, span: T) -> T {
        let (rtol, atol) = (self.controls.rel_tol, self.controls.abs_tol);
        let mut d0 = T::zero();
        let mut d1 = T::zero();
        for i in 0..y.len() {
            let scale = atol + rtol * y[i].norm();
            d0 = d0.max(y[i].norm() / scale);
            d1 = d1.max(self.k[0][i].norm() / scale);
        }
        let guess = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) {
            T::lit(1e-6)
        } else {
            T::lit(0.01) * d0 / d1
        };
        guess.min(span.abs())
    }
}
