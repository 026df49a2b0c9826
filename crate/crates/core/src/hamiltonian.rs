//! Coefficients of the effective quadratic Hamiltonians
//!
//! `H/ħ = Σ ω_n b†b + i Σ C_nn (b†² − b²) + i Σ_{n≠n'} C_nn' (b_n† + b_n)(b_n'† − b_n')`
//!
//! for the polariton model (dispersive mirrors) and for the photon model with
//! perfectly reflecting mirrors.

use crate::error::{Error, Result};
use crate::model::CavityParams;
use crate::modes::{solve_discrete, DiscreteMode, ModeFunction, POINTS_PER_WAVELENGTH};
use crate::quadrature::{integrate_adaptive, GaussLegendre, QuadratureControls};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Polariton,
    Photon,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Self::Polariton => "polariton",
            Self::Photon => "photon",
        }
    }
}

/// Closed-form `C_nn'` between two bound modes of the same geometry.
pub fn coupling<T: Real>(a: &DiscreteMode<T>, b: &DiscreteMode<T>, ldot: T) -> T {
    let eps0 = a.params.eps0();
    if a.n == b.n {
        return -T::lit(0.125) * eps0 * ldot * a.alpha_sq();
    }
    let sign = if (a.n + b.n).is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    };
    let (wa, wb) = (a.omega, b.omega);
    let ratio = ((T::one() - a.eps) / (T::one() - b.eps)).sqrt();
    let bracket = b.kappa * wa * wa * ratio + a.kappa * wb * wb / ratio;
    T::lit(0.5) * eps0 * ldot * sign * a.alpha * b.alpha / (wa * wa - wb * wb) * (wb / wa).sqrt() / (a.kappa + b.kappa)
        * bracket
}

fn find_order<T: Real>(modes: &[DiscreteMode<T>], order: usize, length: T) -> Result<&DiscreteMode<T>> {
    modes.iter().find(|m| m.order == order).ok_or(Error::MissingMode {
        requested: order,
        available: modes.len(),
        length: length.as_f64(),
    })
}

/// `C_nn'` of the polariton model between the modes of order `n` and `n'`.
pub fn coeff_polariton<T: Real>(order: usize, other: usize, length: T, ldot: T, params: &CavityParams<T>) -> Result<T> {
    let modes = solve_discrete(length, params, order.max(other))?;
    let a = find_order(&modes, order, length)?;
    let b = find_order(&modes, other, length)?;
    Ok(coupling(a, b, ldot))
}

/// `C_nn'` of the photon model; orders start at 1.
pub fn coeff_photon<T: Real>(order: usize, other: usize, length: T, ldot: T) -> Result<T> {
    if order == 0 || other == 0 {
        return Err(Error::InvalidParameter {
            name: "order",
            value: 0.0,
            reason: "photon-model orders start at 1",
        });
    }
    let rate = ldot / length;
    if order == other {
        return Ok(-T::lit(0.25) * rate);
    }
    let (n, m) = (T::from_count(order), T::from_count(other));
    let sign = if (order + other).is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    };
    Ok(rate * sign * n * m / (n * n - m * m) * (m / n).sqrt())
}

/// Ideal-cavity frequency `Nπc/L`.
pub fn photon_frequency<T: Real>(order: usize, length: T) -> T {
    T::from_count(order) * T::PI() / length
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Omega {
        order: usize,
    },
    Diagonal {
        order: usize,
    },
    /// The cubic term uses the order of the second mode.
    OffDiagonal {
        order: usize,
        other: usize,
    },
}

/// Small-`η` expansion of polariton/photon ratios, through `η³`.
pub fn eta_series<T: Real>(kind: SeriesKind, eta: T) -> Result<T> {
    if !(eta >= T::zero() && eta < T::lit(0.1)) {
        return Err(Error::EtaOutOfRange { eta: eta.as_f64() });
    }
    let pi2 = T::PI() * T::PI();
    let cubic = match kind {
        SeriesKind::Omega { order } => {
            let n = T::from_count(order);
            T::lit(8.0) * (T::one() + n * n * pi2 / T::lit(24.0))
        }
        SeriesKind::Diagonal { order } => {
            let n = T::from_count(order);
            T::lit(8.0) + n * n * pi2
        }
        SeriesKind::OffDiagonal { other, .. } => {
            let m = T::from_count(other);
            (T::lit(24.0) + m * m * pi2) / T::lit(3.0)
        }
    };
    Ok(scale_factor(eta) - cubic * eta * eta * eta)
}

/// `1 − 2η + 4η²`.
pub fn scale_factor<T: Real>(eta: T) -> T {
    T::one() - T::lit(2.0) * eta + T::lit(4.0) * eta * eta
}

/// The three mode-pair integrals whose combination gives `C_nn'`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FTriple<T> {
    pub f1: T,
    pub f2: T,
    pub f3: T,
}

/// `F¹, F², F³` for the pair `(a, b)` with the right mirror moving at `ldot`.
///
/// Only the matter at `z ≥ L` moves, so `F¹` is an integral over the right
/// tail region; `∂ρ/∂t = −ρL̇δ(z − L)` turns `F²` and `F³` into products of
/// the matter-side fields at `z = L⁺`.
///
/// In one dimension every field depends on `z` alone and points along the
/// same transverse axis, while the velocity is along `z`; hence `v·[(X·∇)A]`
/// and the `v × B` parts of `F¹` vanish identically and only `X·(v·∇)A`
/// survives.
pub fn f_integrals<T: Real, A: ModeFunction<T>, B: ModeFunction<T>>(
    a: &A,
    b: &B,
    ldot: T,
    controls: &QuadratureControls<T>,
) -> Result<FTriple<T>> {
    let p = a.params();
    let length = a.length();
    let (wa, wb) = (a.omega(), b.omega());
    let (da, db) = (a.detuning(), b.detuning());
    let wp2 = p.omega_p() * p.omega_p();
    let eps0 = p.eps0();

    let rate = a.decay_rate().unwrap_or(T::zero()) + b.decay_rate().unwrap_or(T::zero());
    if rate <= T::zero() {
        return Err(Error::InvalidParameter {
            name: "mode",
            value: f64::NAN,
            reason: "tail integral needs at least one bound mode",
        });
    }
    // e^{-36} is below double-precision resolution of the integrand.
    let span = T::lit(36.0) / rate;
    let oscillation = matter_wavenumber(a).max(matter_wavenumber(b));
    let panels = ((oscillation * span / T::TAU()).ceil().to_usize().unwrap_or(1)).max(4);
    let rule = GaussLegendre::new(POINTS_PER_WAVELENGTH);
    let sqrt_eps0_wp = eps0.sqrt() * p.omega_p();
    let tail = integrate_adaptive(
        &rule,
        |z| {
            let fa = a.field(z);
            let fb = b.field(z);
            sqrt_eps0_wp * fb.x * fa.da + fa.y * fb.dx
        },
        length,
        length + span,
        panels,
        controls,
    )?;
    let f1 = T::lit(0.5) * ldot * (wb / wa).sqrt() * tail;

    let edge = wp2 * eps0 * ldot * a.field(length).a * b.field(length).a;
    let omega_res2 = p.omega_res() * p.omega_res();
    let f2 = edge * (T::one() / (T::lit(2.0) * db) + omega_res2 / (T::lit(4.0) * da * db));
    let f3 = -edge * wa * wb / (T::lit(2.0) * da * db);
    Ok(FTriple { f1, f2, f3 })
}

/// Oscillation wavenumber inside the matter; zero for bound modes.
fn matter_wavenumber<T: Real, M: ModeFunction<T>>(m: &M) -> T {
    match m.decay_rate() {
        Some(_) => T::zero(),
        None => m.omega() * m.eps().max(T::zero()).sqrt() / m.params().c(),
    }
}

/// `C_nn = F¹ + F²/2 − F³/4`.
pub fn combine_diagonal<T: Real>(f: &FTriple<T>) -> T {
    f.f1 + T::lit(0.5) * f.f2 - T::lit(0.25) * f.f3
}

/// `C_nn' = F¹_nn' + √(ω_nω_n')/(ω_n² − ω_n'²)·[ω_n(F²_nn' + F²_n'n) + ω_n' F³_nn']`.
pub fn combine_off_diagonal<T: Real>(ab: &FTriple<T>, ba: &FTriple<T>, wa: T, wb: T) -> T {
    ab.f1 + (wa * wb).sqrt() / (wa * wa - wb * wb) * (wa * (ab.f2 + ba.f2) + wb * ab.f3)
}

/// `C_ab` assembled from quadrature of the F-integrals.
pub fn coupling_from_integrals<T: Real, A: ModeFunction<T>, B: ModeFunction<T>>(
    a: &A,
    b: &B,
    ldot: T,
    controls: &QuadratureControls<T>,
) -> Result<T> {
    let ab = f_integrals(a, b, ldot, controls)?;
    if a.omega() == b.omega() {
        return Ok(combine_diagonal(&ab));
    }
    let ba = f_integrals(b, a, ldot, controls)?;
    Ok(combine_off_diagonal(&ab, &ba, a.omega(), b.omega()))
}

/// Frequencies and coefficients at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian<T> {
    pub model: Model,
    pub omega: Vec<T>,
    pub cdiag: Vec<T>,
    /// Row-major `N × N`, zero diagonal.
    pub cmat: Vec<T>,
    pub length: T,
    pub velocity: T,
}

impl<T: Real> QuadraticHamiltonian<T> {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn c(&self, i: usize, j: usize) -> T {
        if i == j {
            self.cdiag[i]
        } else {
            self.cmat[i * self.len() + j]
        }
    }

    /// Row-major matrix with `C_nn` on the diagonal.
    pub fn full_matrix(&self) -> Vec<T> {
        let n = self.len();
        let mut out = self.cmat.clone();
        for i in 0..n {
            out[i * n + i] = self.cdiag[i];
        }
        out
    }

    fn from_fn(model: Model, omega: Vec<T>, length: T, velocity: T, c: impl Fn(usize, usize) -> T) -> Self {
        let n = omega.len();
        let mut cdiag = Vec::with_capacity(n);
        let mut cmat = vec![T::zero(); n * n];
        for i in 0..n {
            cdiag.push(c(i, i));
            for j in (0..n).filter(|&j| j != i) {
                cmat[i * n + j] = c(i, j);
            }
        }
        Self {
            model,
            omega,
            cdiag,
            cmat,
            length,
            velocity,
        }
    }
}

/// Hamiltonian over the `count` lowest modes at separation `length`.
pub fn build_quadratic<T: Real>(
    model: Model,
    length: T,
    ldot: T,
    count: usize,
    params: &CavityParams<T>,
) -> Result<QuadraticHamiltonian<T>> {
    if count == 0 {
        return Err(Error::InvalidParameter {
            name: "modes",
            value: 0.0,
            reason: "at least one mode must be retained",
        });
    }
    match model {
        Model::Photon => {
            let omega = (1..=count).map(|n| photon_frequency(n, length)).collect();
            let rate = ldot / length;
            Ok(QuadraticHamiltonian::from_fn(model, omega, length, ldot, |i, j| {
                // Orders are positive, so this never fails.
                coeff_photon(i + 1, j + 1, T::one(), rate).unwrap_or(T::zero())
            }))
        }
        Model::Polariton => {
            let modes = solve_discrete(length, params, count - 1)?;
            if modes.len() < count {
                return Err(Error::MissingMode {
                    requested: count,
                    available: modes.len(),
                    length: length.as_f64(),
                });
            }
            Ok(polariton_from_modes(&modes, ldot))
        }
    }
}

pub fn polariton_from_modes<T: Real>(modes: &[DiscreteMode<T>], ldot: T) -> QuadraticHamiltonian<T> {
    let omega = modes.iter().map(|m| m.omega).collect();
    let length = modes.first().map_or(T::zero(), |m| m.length);
    QuadraticHamiltonian::from_fn(Model::Polariton, omega, length, ldot, |i, j| {
        coupling(&modes[i], &modes[j], ldot)
    })
}

/// Polariton versus scaled photon coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport<T> {
    pub eta: T,
    pub scale_factor: T,
    /// `max |C_pol − s·C_ph|` over all retained entries, diagonal included.
    pub residual_norm: T,
    /// `max |C_ph|`.
    pub photon_norm: T,
    /// Row-major `C_pol/C_ph`.
    pub ratios: Vec<T>,
    /// `ω_pol/ω_ph` per order.
    pub frequency_ratios: Vec<T>,
}

impl<T: Real> ScalingReport<T> {
    /// `residual_norm/(η³·photon_norm)`.
    pub fn cubic_coefficient(&self) -> T {
        self.residual_norm / (self.eta * self.eta * self.eta * self.photon_norm)
    }
}

/// Pairs polariton order `N` with photon order `N`; the polariton modes must
/// start at node count zero.
pub fn compare_models<T: Real>(length: T, ldot: T, count: usize, params: &CavityParams<T>) -> Result<ScalingReport<T>> {
    let pol = build_quadratic(Model::Polariton, length, ldot, count, params)?;
    let first_order = solve_discrete(length, params, 0)?.first().map_or(1, |m| m.order);
    if first_order != 1 {
        return Err(Error::MissingMode {
            requested: 1,
            available: 0,
            length: length.as_f64(),
        });
    }
    let ph = build_quadratic(Model::Photon, length, ldot, count, params)?;
    let eta = params.c() / (length * params.omega_p());
    let s = scale_factor(eta);
    let (cp, cq) = (pol.full_matrix(), ph.full_matrix());
    let residual_norm = cp
        .iter()
        .zip(&cq)
        .map(|(&p, &q)| (p - s * q).abs())
        .fold(T::zero(), T::max);
    let photon_norm = cq.iter().map(|q| q.abs()).fold(T::zero(), T::max);
    Ok(ScalingReport {
        eta,
        scale_factor: s,
        residual_norm,
        photon_norm,
        ratios: cp.iter().zip(&cq).map(|(&p, &q)| p / q).collect(),
        frequency_ratios: pol.omega.iter().zip(&ph.omega).map(|(&p, &q)| p / q).collect(),
    })
}

/// Lowest two frequencies in units of `ω_c` and the normalized couplings
/// `−C₀₀L/L̇`, `C₀₁L/L̇` at one plasma frequency; `None` where the second
/// mode does not exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub omega_p_ratio: T,
    pub omega0: Option<T>,
    pub omega1: Option<T>,
    pub c00: Option<T>,
    pub c01: Option<T>,
}

pub fn sweep_row<T: Real>(omega_p_ratio: T, omega_res_ratio: T, length: T) -> Result<SweepRow<T>> {
    let params = CavityParams::from_ratios(omega_p_ratio, omega_res_ratio, length)?;
    let modes = solve_discrete(length, &params, 1)?;
    let wc = params.omega_c();
    let first = modes.first();
    let second = modes.get(1);
    Ok(SweepRow {
        omega_p_ratio,
        omega0: first.map(|m| m.omega / wc),
        omega1: second.map(|m| m.omega / wc),
        c00: first.map(|m| -coupling(m, m, T::one()) * length),
        c01: first.zip(second).map(|(a, b)| coupling(a, b, T::one()) * length),
    })
}

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi / lo).ln() / T::from_count(count - 1);
            (0..count)
                .map(|i| {
                    if i + 1 == count {
                        hi
                    } else {
                        lo * (step * T::from_count(i)).exp()
                    }
                })
                .collect()
        }
    }
}
