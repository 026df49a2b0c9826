//! Golden-rule leakage of a bound polariton into the continuum when the
//! mirror oscillates as `L(t) = L₀ + ℓ sin ω_M t`.
//!
//! The drive enters as `V e^{iω_M t} + h.c.`, where `V` is the effective
//! Hamiltonian with `L̇ → ℓω_M/2`. The final state has intra-cavity
//! wavenumber `k = (ω_n + ω_M)/c` on either scattering branch.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hamiltonian::coupling_from_integrals;
use crate::model::{dielectric, discrete_band, CavityParams};
use crate::modes::{continuum_mode, solve_discrete, Branch, ContinuumMode, DiscreteMode};
use crate::quadrature::QuadratureControls;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayResult<T> {
    /// Node count of the decaying mode.
    pub n: usize,
    pub omega_m: T,
    pub k_out: T,
    pub v1: Complex<T>,
    pub v2: Complex<T>,
    pub rate: T,
    /// No continuum state at `ω_n + ω_M`; the rate is then zero.
    pub below_threshold: bool,
}

fn bound_mode<T: Real>(n: usize, length: T, params: &CavityParams<T>) -> Result<DiscreteMode<T>> {
    let modes = solve_discrete(length, params, n)?;
    modes.iter().find(|m| m.n == n).copied().ok_or(Error::MissingMode {
        requested: n,
        available: modes.len(),
        length: length.as_f64(),
    })
}

fn final_state<T: Real>(
    mode: &DiscreteMode<T>,
    branch: Branch,
    omega_m: T,
    params: &CavityParams<T>,
) -> Result<ContinuumMode<T>> {
    let omega = mode.omega + omega_m;
    let threshold = discrete_band(params).1 - mode.omega;
    if !(omega_m > threshold) || dielectric(omega, params)? <= T::zero() {
        return Err(Error::BelowThreshold {
            omega_m: omega_m.as_f64(),
            threshold: threshold.as_f64(),
        });
    }
    continuum_mode(omega / params.c(), branch, mode.length, params)
}

/// Closed-form `V_kn` on one branch.
fn closed_form<T: Real>(mode: &DiscreteMode<T>, out: &ContinuumMode<T>, ell: T, omega_m: T) -> Complex<T> {
    let p = &mode.params;
    let c = p.c();
    let (k, kn) = (out.k, mode.k);
    let (k0, kp) = (p.omega_res() / c, p.omega_p() / c);
    let (s, co) = (k * mode.length * T::lit(0.5)).sin_cos();
    let (cos_term, sin_term) = match out.branch {
        Branch::One => (co, s),
        Branch::Two => (-s, co),
    };
    let sign = if mode.n.is_multiple_of(2) { T::one() } else { -T::one() };
    let prefactor = sign * p.hbar() * p.eps0() * ell * omega_m / T::lit(4.0) * (k / kn).sqrt();
    let magnitude = out.norm * mode.alpha * kp * (k + kn)
        / ((out.kappa * out.kappa + mode.kappa * mode.kappa) * (k * k - k0 * k0) * (kn * kn - k0 * k0).sqrt());
    let bracket = k0 * k0 * mode.kappa * cos_term - k * kn * kn * sin_term;
    Complex::new(T::zero(), prefactor * magnitude * bracket)
}

/// `V_kn^{(i)}` for the bound mode with node count `n`.
pub fn matrix_element<T: Real>(
    n: usize,
    branch: Branch,
    omega_m: T,
    ell: T,
    length: T,
    params: &CavityParams<T>,
) -> Result<Complex<T>> {
    let mode = bound_mode(n, length, params)?;
    let out = final_state(&mode, branch, omega_m, params)?;
    Ok(closed_form(&mode, &out, ell, omega_m))
}

/// Oracle for [`matrix_element`]: `iħ(C_nk − C_kn)` with both coefficients
/// assembled from quadrature of the F-integrals.
pub fn matrix_element_quadrature<T: Real>(
    n: usize,
    branch: Branch,
    omega_m: T,
    ell: T,
    length: T,
    params: &CavityParams<T>,
) -> Result<Complex<T>> {
    let mode = bound_mode(n, length, params)?;
    let out = final_state(&mode, branch, omega_m, params)?;
    let ldot = ell * omega_m * T::lit(0.5);
    let controls = QuadratureControls::default();
    let c_nk = coupling_from_integrals(&mode, &out, ldot, &controls)?;
    let c_kn = coupling_from_integrals(&out, &mode, ldot, &controls)?;
    Ok(Complex::new(T::zero(), params.hbar() * (c_nk - c_kn)))
}

/// `R_n = (2/cħ²) Σ_i |V_kn^{(i)}|²`.
pub fn decay_rate<T: Real>(
    n: usize,
    omega_m: T,
    ell: T,
    length: T,
    params: &CavityParams<T>,
) -> Result<DecayResult<T>> {
    let mode = bound_mode(n, length, params)?;
    let k_out = (mode.omega + omega_m) / params.c();
    let zero = Complex::new(T::zero(), T::zero());
    let below = DecayResult {
        n,
        omega_m,
        k_out,
        v1: zero,
        v2: zero,
        rate: T::zero(),
        below_threshold: true,
    };
    let (one, two) = match (
        final_state(&mode, Branch::One, omega_m, params),
        final_state(&mode, Branch::Two, omega_m, params),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(Error::BelowThreshold { .. }), _) | (_, Err(Error::BelowThreshold { .. })) => return Ok(below),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let v1 = closed_form(&mode, &one, ell, omega_m);
    let v2 = closed_form(&mode, &two, ell, omega_m);
    let hbar = params.hbar();
    let rate = T::lit(2.0) / (params.c() * hbar * hbar) * (v1.norm_sqr() + v2.norm_sqr());
    Ok(DecayResult {
        n,
        omega_m,
        k_out,
        v1,
        v2,
        rate,
        below_threshold: false,
    })
}

/// `Nℓ²ω_p²/(4L₀²ω_M)` with `N = n + 1` the order of the mode with node
/// count `n`; this is the label for which the full golden-rule rate
/// approaches the formula for metal mirrors with `ω_n ≪ ω_p ≪ ω_M`.
pub fn decay_asymptote<T: Real>(n: usize, omega_m: T, ell: T, length: T, params: &CavityParams<T>) -> T {
    let order = T::from_count(n + 1);
    let wp = params.omega_p();
    order * ell * ell * wp * wp / (T::lit(4.0) * length * length * omega_m)
}
