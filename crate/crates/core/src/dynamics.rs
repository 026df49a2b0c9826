//! Heisenberg evolution of the retained modes as a Bogoliubov map
//! `b(t) = α b(0) + β b†(0)`.
//!
//! From `H/ħ = Σ ω b†b + i Σ C_nn (b†² − b²) + i Σ_{n≠m} C_nm (b_n† + b_n)(b_m† − b_m)`,
//!
//! `db_j/dt = −iω_j b_j + 2C_jj b_j† + Σ_{m≠j} [(C_mj − C_jm) b_m + (C_jm + C_mj) b_m†]`,
//!
//! i.e. `ḃ = M₁b + M₂b†` with the blocks returned by [`heisenberg_blocks`].

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hamiltonian::{coeff_photon, photon_frequency, polariton_from_modes, Model, QuadraticHamiltonian};
use crate::interp::{golden_points, Chebyshev};
use crate::model::{CavityParams, MirrorTrajectory};
use crate::modes::solve_discrete;
use crate::ode::{Integrator, State, StepControls, StepStats};
use crate::real::Real;

pub type CMatrix<T> = DMatrix<Complex<T>>;

fn cplx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

fn conj<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.map(|c| c.conj())
}

fn adjoint<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.transpose().map(|c| c.conj())
}

fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().map(|c| c.norm()).fold(T::zero(), T::max)
}

/// `(M₁, M₂)` from frequencies and the full coefficient matrix (row-major,
/// `C_nn` on the diagonal).
fn blocks_from<T: Real>(omega: &[T], c: &[T]) -> (CMatrix<T>, CMatrix<T>) {
    let n = omega.len();
    let m1 = CMatrix::from_fn(n, n, |j, m| {
        if j == m {
            Complex::new(T::zero(), -omega[j])
        } else {
            cplx(c[m * n + j] - c[j * n + m])
        }
    });
    let m2 = CMatrix::from_fn(n, n, |j, m| {
        if j == m {
            cplx(T::lit(2.0) * c[j * n + j])
        } else {
            cplx(c[j * n + m] + c[m * n + j])
        }
    });
    (m1, m2)
}

pub fn heisenberg_blocks<T: Real>(h: &QuadraticHamiltonian<T>) -> (CMatrix<T>, CMatrix<T>) {
    blocks_from(&h.omega, &h.full_matrix())
}

/// `2N × 2N` matrix `M` with `d/dt (b, b†) = M (b, b†)`.
pub fn generator<T: Real>(h: &QuadraticHamiltonian<T>) -> CMatrix<T> {
    let (m1, m2) = heisenberg_blocks(h);
    let n = h.len();
    let mut g = CMatrix::zeros(2 * n, 2 * n);
    g.view_mut((0, 0), (n, n)).copy_from(&m1);
    g.view_mut((0, n), (n, n)).copy_from(&m2);
    g.view_mut((n, 0), (n, n)).copy_from(&conj(&m2));
    g.view_mut((n, n), (n, n)).copy_from(&conj(&m1));
    g
}

#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovMap<T: Real> {
    pub alpha: CMatrix<T>,
    pub beta: CMatrix<T>,
    pub t: T,
}

impl<T: Real> BogoliubovMap<T> {
    pub fn identity(n: usize) -> Self {
        Self {
            alpha: CMatrix::identity(n, n),
            beta: CMatrix::zeros(n, n),
            t: T::zero(),
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `max(‖αα† − ββ† − 1‖, ‖αβᵀ − βαᵀ‖)`, entrywise maximum.
    pub fn symplectic_defect(&self) -> T {
        let n = self.len();
        let unit = &self.alpha * adjoint(&self.alpha) - &self.beta * adjoint(&self.beta) - CMatrix::identity(n, n);
        let sym = &self.alpha * self.beta.transpose() - &self.beta * self.alpha.transpose();
        max_abs(&unit).max(max_abs(&sym))
    }

    fn from_state(y: &State<T>, t: T) -> Self {
        let n = y.ncols();
        Self {
            alpha: y.rows(0, n).into_owned(),
            beta: y.rows(n, n).into_owned(),
            t,
        }
    }
}

/// Vacuum occupations `(ββ†)_ii` after the map.
pub fn photon_numbers<T: Real>(map: &BogoliubovMap<T>) -> Vec<T> {
    map.beta
        .row_iter()
        .map(|row| row.iter().map(|c| c.norm_sqr()).sum())
        .collect()
}

fn photon_numbers_of_state<T: Real>(y: &State<T>) -> Vec<T> {
    let n = y.ncols();
    (n..2 * n)
        .map(|i| y.row(i).iter().map(|c| c.norm_sqr()).sum())
        .collect()
}

/// Polariton frequencies and coefficients per unit velocity, interpolated in
/// `L`. Each node costs a full mode solve, so the evolution never calls the
/// root finder directly.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<T> {
    count: usize,
    cheb: Chebyshev<T>,
    /// Largest relative deviation from direct solves at the check points.
    pub max_deviation: T,
}

fn table_row<T: Real>(length: T, params: &CavityParams<T>, count: usize) -> Result<Vec<T>> {
    let modes = solve_discrete(length, params, count - 1)?;
    if modes.len() < count {
        return Err(Error::ModeDisappeared {
            mode: modes.len(),
            length: length.as_f64(),
        });
    }
    let h = polariton_from_modes(&modes, T::one());
    let mut row = h.omega.clone();
    row.extend(h.full_matrix());
    Ok(row)
}

impl<T: Real> CoefficientTable<T> {
    pub fn build(
        params: &CavityParams<T>,
        count: usize,
        (lo, hi): (T, T),
        nodes: usize,
        checks: usize,
        tol: T,
    ) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter {
                name: "modes",
                value: 0.0,
                reason: "at least one mode must be retained",
            });
        }
        let nodes = if hi > lo { nodes.max(1) } else { 1 };
        let points = Chebyshev::nodes(lo, hi, nodes);
        let values = points
            .iter()
            .map(|&l| table_row(l, params, count))
            .collect::<Result<Vec<_>>>()?;
        let cheb = Chebyshev::from_values(lo, hi, &values);
        let mut max_deviation = T::zero();
        if hi > lo {
            for l in golden_points(lo, hi, checks) {
                let direct = table_row(l, params, count)?;
                let approx = cheb.eval(l);
                for (d, a) in direct.iter().zip(&approx) {
                    let dev = (*d - *a).abs() / d.abs().max(T::min_positive_value());
                    max_deviation = max_deviation.max(dev);
                }
                if max_deviation > tol {
                    return Err(Error::InterpolationMismatch {
                        length: l.as_f64(),
                        deviation: max_deviation.as_f64(),
                    });
                }
            }
        }
        Ok(Self {
            count,
            cheb,
            max_deviation,
        })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Writes `ω` and `C` (row-major, diagonal included) at `(L, L̇)`.
    pub fn eval_into(&self, length: T, velocity: T, omega: &mut [T], c: &mut [T]) {
        let mut row = vec![T::zero(); self.cheb.width()];
        self.cheb.eval_into(length, &mut row);
        omega.copy_from_slice(&row[..self.count]);
        for (ci, &r) in c.iter_mut().zip(&row[self.count..]) {
            *ci = velocity * r;
        }
    }
}

enum Source<T> {
    Photon,
    Table(CoefficientTable<T>),
}

impl<T: Real> Source<T> {
    fn eval_into(&self, length: T, velocity: T, omega: &mut [T], c: &mut [T]) {
        match self {
            Self::Photon => {
                let n = omega.len();
                for i in 0..n {
                    omega[i] = photon_frequency(i + 1, length);
                    for j in 0..n {
                        c[i * n + j] = coeff_photon(i + 1, j + 1, length, velocity).unwrap_or(T::zero());
                    }
                }
            }
            Self::Table(table) => table.eval_into(length, velocity, omega, c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveControls<T> {
    pub step: StepControls<T>,
    /// Evenly spaced output times, endpoints included; at least 2.
    pub samples: usize,
    pub table_nodes: usize,
    pub table_checks: usize,
    pub table_tol: T,
}

impl<T: Real> Default for EvolveControls<T> {
    fn default() -> Self {
        Self {
            step: StepControls::default(),
            samples: 101,
            table_nodes: 64,
            table_checks: 10,
            table_tol: T::lit(1e-8),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample<T> {
    pub t: T,
    pub length: T,
    pub photon_numbers: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult<T: Real> {
    pub map: BogoliubovMap<T>,
    pub photon_numbers: Vec<T>,
    /// Largest defect seen at any accepted step.
    pub symplectic_defect: T,
    pub stats: StepStats<T>,
    pub samples: Vec<Sample<T>>,
    /// `None` for the photon model, which needs no table.
    pub table_deviation: Option<T>,
}

/// Evolves `count` modes from the identity map over `[0, t_final]`.
pub fn evolve<T: Real>(
    trajectory: &MirrorTrajectory<T>,
    params: &CavityParams<T>,
    model: Model,
    count: usize,
    t_final: T,
    controls: &EvolveControls<T>,
) -> Result<EvolutionResult<T>> {
    if !(t_final.is_finite() && t_final > T::zero()) {
        return Err(Error::InvalidTrajectory {
            t: t_final.as_f64(),
            reason: "final time must be positive",
        });
    }
    if count == 0 {
        return Err(Error::InvalidParameter {
            name: "modes",
            value: 0.0,
            reason: "at least one mode must be retained",
        });
    }
    let range = trajectory.length_range(t_final);
    if !(range.0 > T::zero()) {
        return Err(Error::InvalidTrajectory {
            t: t_final.as_f64(),
            reason: "separation reaches zero",
        });
    }
    let source = match model {
        Model::Photon => Source::Photon,
        Model::Polariton => Source::Table(CoefficientTable::build(
            params,
            count,
            range,
            controls.table_nodes,
            controls.table_checks,
            controls.table_tol,
        )?),
    };
    let table_deviation = match &source {
        Source::Table(t) => Some(t.max_deviation),
        Source::Photon => None,
    };

    let n = count;
    let mut omega = vec![T::zero(); n];
    let mut c = vec![T::zero(); n * n];
    let mut rhs = |t: T, y: &State<T>, dy: &mut State<T>| -> Result<()> {
        source.eval_into(trajectory.length(t), trajectory.velocity(t), &mut omega, &mut c);
        let (m1, m2) = blocks_from(&omega, &c);
        let alpha = y.rows(0, n);
        let beta = y.rows(n, n);
        dy.rows_mut(0, n)
            .copy_from(&(&m1 * alpha + &m2 * beta.map(|z| z.conj())));
        dy.rows_mut(n, n)
            .copy_from(&(&m1 * beta + &m2 * alpha.map(|z| z.conj())));
        Ok(())
    };

    let mut y = State::zeros(2 * n, n);
    y.rows_mut(0, n).fill_with_identity();
    let mut t = T::zero();
    let mut defect = T::zero();
    let mut on_step = |t: T, y: &State<T>| -> Result<()> {
        let d = BogoliubovMap::from_state(y, t).symplectic_defect();
        if !d.is_finite() {
            return Err(Error::InvalidTrajectory {
                t: t.as_f64(),
                reason: "state became non-finite",
            });
        }
        defect = defect.max(d);
        Ok(())
    };

    let samples = controls.samples.max(2);
    let mut out = Vec::with_capacity(samples);
    out.push(Sample {
        t,
        length: trajectory.length(t),
        photon_numbers: vec![T::zero(); n],
    });
    let mut integrator = Integrator::new(controls.step);
    for i in 1..samples {
        let target = t_final * T::from_count(i) / T::from_count(samples - 1);
        integrator.advance(&mut rhs, &mut t, &mut y, target, &mut on_step)?;
        out.push(Sample {
            t,
            length: trajectory.length(t),
            photon_numbers: photon_numbers_of_state(&y),
        });
    }
    let map = BogoliubovMap::from_state(&y, t);
    Ok(EvolutionResult {
        photon_numbers: photon_numbers(&map),
        map,
        symplectic_defect: defect,
        stats: integrator.stats,
        samples: out,
        table_deviation,
    })
}
