//! Normal modes of the cavity: bound polaritons confined between the mirrors
//! and scattering states of the continuum.
//!
//! The cavity occupies `0 < z < L`; uniform matter fills `z ≤ 0` and `z ≥ L`.
//! Inside the matter the scaled polarization fields are
//! `X = √ε₀ ω_p A/(ω² − Ω²)` and `Y = ω² X`, which is the normalization
//! `√(mρ)·X` of the microscopic field. With that choice every product that
//! enters an integral (`Y·X`, `eρX·A`, `mρΩ²X·X`, `Y·Y/(mρ)`) depends on
//! the matter only through `ω_p` and `Ω`.

use crate::error::{Error, Result};
use crate::model::{dielectric, discrete_band, CavityParams};
use crate::quadrature::{integrate_adaptive, GaussLegendre, QuadratureControls};
use crate::real::Real;

/// Gauss points per interior wavelength.
pub const POINTS_PER_WAVELENGTH: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Even node count: `cos k(z − L/2)` inside the cavity.
    Even,
    /// Odd node count: `sin k(z − L/2)` inside the cavity.
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Self::Even
        } else {
            Self::Odd
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Even => "even",
            Self::Odd => "odd",
        }
    }
}

/// Controls of the bracketing root search in [`solve_discrete_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootControls<T> {
    /// Relative width at which bisection stops.
    pub rel_tol: T,
    pub min_grid: usize,
    pub points_per_root: usize,
    /// Distance kept from the band edges, as a fraction of the band width.
    pub edge_margin: T,
    /// Modes with `ε > −band_edge_eps` are discarded as unresolvable.
    pub band_edge_eps: T,
}

impl<T: Real> Default for RootControls<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-12),
            min_grid: 1000,
            points_per_root: 50,
            edge_margin: T::lit(1e-9),
            band_edge_eps: T::lit(1e-8),
        }
    }
}

/// Matching residual whose zeros are the bound-mode frequencies.
///
/// `even: k sin(kL/2) − κ cos(kL/2)`, `odd: κ sin(kL/2) + k cos(kL/2)`;
/// the tangent form of the same condition is never evaluated, so the
/// residual stays finite at `kL/2 = π/2`.
pub fn characteristic<T: Real>(omega: T, parity: Parity, length: T, params: &CavityParams<T>) -> Result<T> {
    let (lo, hi) = discrete_band(params);
    if !(omega > lo && omega < hi) {
        return Err(Error::OutOfBand {
            omega: omega.as_f64(),
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let eps = dielectric(omega, params)?;
    let k = omega / params.c();
    let kappa = (-eps).sqrt() * k;
    let (s, c) = (k * length * T::lit(0.5)).sin_cos();
    Ok(match parity {
        Parity::Even => k * s - kappa * c,
        Parity::Odd => kappa * s + k * c,
    })
}

/// One bound polariton mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteMode<T> {
    /// Node count inside the cavity.
    pub n: usize,
    /// `n + 1`; the integer multiplying `π` in the ideal-mirror limit `ω → Nπc/L`.
    pub order: usize,
    pub omega: T,
    pub k: T,
    pub kappa: T,
    pub eps: T,
    /// Positive normalization constant.
    pub alpha: T,
    /// `±1`, chosen so that `A(0) > 0`.
    pub sign: T,
    pub parity: Parity,
    pub length: T,
    pub params: CavityParams<T>,
}

impl<T: Real> DiscreteMode<T> {
    pub fn alpha_sq(&self) -> T {
        self.alpha * self.alpha
    }

    /// `A(0)`, the amplitude of the left evanescent tail.
    pub fn left_amplitude(&self) -> T {
        let (s, c) = (self.k * self.length * T::lit(0.5)).sin_cos();
        match self.parity {
            Parity::Even => self.sign * self.alpha * c,
            Parity::Odd => -self.sign * self.alpha * s,
        }
    }

    /// `A(L)`, the amplitude of the right evanescent tail.
    pub fn right_amplitude(&self) -> T {
        let (s, c) = (self.k * self.length * T::lit(0.5)).sin_cos();
        match self.parity {
            Parity::Even => self.sign * self.alpha * c,
            Parity::Odd => self.sign * self.alpha * s,
        }
    }
}

/// `α_n = [ε₀(L/2 + ω²/(κ(ω² − Ω²)))]^{-1/2}`.
pub fn normalization<T: Real>(omega: T, length: T, params: &CavityParams<T>) -> Result<T> {
    let (lo, hi) = discrete_band(params);
    if !(omega > lo && omega < hi) {
        return Err(Error::OutOfBand {
            omega: omega.as_f64(),
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let eps = dielectric(omega, params)?;
    let kappa = (-eps).sqrt() * omega / params.c();
    let detuning = omega * omega - params.omega_res() * params.omega_res();
    let inv = params.eps0() * (T::lit(0.5) * length + omega * omega / (kappa * detuning));
    Ok(inv.recip().sqrt())
}

/// Bound modes at separation `length`, ascending, at most `n_max + 1` of them.
pub fn solve_discrete<T: Real>(length: T, params: &CavityParams<T>, n_max: usize) -> Result<Vec<DiscreteMode<T>>> {
    solve_discrete_with(length, params, n_max, &RootControls::default())
}

pub fn solve_discrete_with<T: Real>(
    length: T,
    params: &CavityParams<T>,
    n_max: usize,
    controls: &RootControls<T>,
) -> Result<Vec<DiscreteMode<T>>> {
    if !(length.is_finite() && length > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "length",
            value: length.as_f64(),
            reason: "separation must be positive",
        });
    }
    let (lo, hi) = discrete_band(params);
    let width = hi - lo;
    let spacing = T::PI() * params.c() / length;
    let margin = (controls.edge_margin * width)
        .min(T::lit(1e-6) * spacing)
        .max(T::lit(16.0) * T::epsilon() * hi);
    // Stay clear of the resonance pole as well as the relative band margin.
    let pole_clearance = (lo * lo + T::lit(4.0) * params.pole_floor()).sqrt();
    let start = (lo + margin).max(pole_clearance);
    if !(width > T::zero()) || start >= hi - margin {
        return Ok(Vec::new());
    }
    // The mode with node count j lies in (jπc/L, (j+1)πc/L); the scan only
    // needs to reach past the (n_max+1)-th interval above the band bottom.
    let first_interval = (lo / spacing).floor();
    let cap = (first_interval + T::from_count(n_max) + T::lit(1.5)) * spacing;
    let stop = (hi - margin).min(cap);
    if stop <= start {
        return Ok(Vec::new());
    }
    let expected = ((stop - start) / spacing).ceil().to_usize().unwrap_or(0) + 1;
    let points = controls.min_grid.max(controls.points_per_root * expected);

    let mut roots = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let f = |w: T| characteristic(w, parity, length, params);
        let step = (stop - start) / T::from_count(points - 1);
        let grid = |i: usize| {
            if i + 1 == points {
                stop
            } else {
                start + step * T::from_count(i)
            }
        };
        let mut left = grid(0);
        let mut f_left = f(left)?;
        if f_left == T::zero() {
            roots.push((left, parity));
        }
        for i in 1..points {
            let right = grid(i);
            let f_right = f(right)?;
            if f_right == T::zero() {
                roots.push((right, parity));
            } else if f_left * f_right < T::zero() {
                roots.push((bisect(&f, left, right, f_left, controls.rel_tol)?, parity));
            }
            left = right;
            f_left = f_right;
        }
    }
    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite roots"));

    let mut modes: Vec<DiscreteMode<T>> = Vec::with_capacity(roots.len());
    for (omega, parity) in roots {
        let eps = dielectric(omega, params)?;
        if eps > -controls.band_edge_eps {
            continue;
        }
        if modes.len() > n_max {
            break;
        }
        let k = omega / params.c();
        let n = (k * length / T::PI()).floor().to_usize().unwrap_or(0);
        let consistent =
            Parity::of(n) == parity && modes.last().is_none_or(|prev| prev.n + 1 == n && prev.parity != parity);
        if !consistent {
            return Err(Error::ParityViolation {
                n,
                found: parity.name(),
            });
        }
        let kappa = (-eps).sqrt() * k;
        let alpha = normalization(omega, length, params)?;
        let mut mode = DiscreteMode {
            n,
            order: n + 1,
            omega,
            k,
            kappa,
            eps,
            alpha,
            sign: T::one(),
            parity,
            length,
            params: *params,
        };
        if mode.left_amplitude() < T::zero() {
            mode.sign = -T::one();
        }
        modes.push(mode);
    }
    modes.truncate(n_max.saturating_add(1));
    Ok(modes)
}

fn bisect<T: Real, F: Fn(T) -> Result<T>>(f: &F, mut a: T, mut b: T, mut fa: T, rel_tol: T) -> Result<T> {
    for _ in 0..200 {
        let mid = T::lit(0.5) * (a + b);
        if (b - a) <= rel_tol * mid.abs() || mid <= a || mid >= b {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == T::zero() {
            return Ok(mid);
        }
        if fa * fm < T::zero() {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(T::lit(0.5) * (a + b))
}

/// Field amplitudes of a mode function at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldPoint<T> {
    /// Vector potential `A`.
    pub a: T,
    /// `∂A/∂z`.
    pub da: T,
    /// Conjugate momentum `Π`.
    pub pi: T,
    /// Scaled polarization `X`; zero outside the matter.
    pub x: T,
    /// `∂X/∂z`.
    pub dx: T,
    /// Scaled polarization momentum `Y = ω² X`.
    pub y: T,
}

impl<T: Real> FieldPoint<T> {
    fn vacuum(a: T, da: T, params: &CavityParams<T>) -> Self {
        Self {
            a,
            da,
            pi: -params.eps0() * a,
            ..Default::default()
        }
    }

    fn matter(a: T, da: T, omega: T, eps: T, params: &CavityParams<T>) -> Self {
        let detuning = omega * omega - params.omega_res() * params.omega_res();
        let scale = params.eps0().sqrt() * params.omega_p() / detuning;
        let x = scale * a;
        Self {
            a,
            da,
            pi: -params.eps0() * eps * a,
            x,
            dx: scale * da,
            y: omega * omega * x,
        }
    }
}

/// Solution outside the cavity on one side, as a function of the distance
/// `u ≥ 0` from the mirror surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail<T> {
    /// `amplitude·e^{−rate·u}`.
    Decaying { amplitude: T, rate: T },
    /// `cos_amp·cos(rate·u) + sin_amp·sin(rate·u)`.
    Oscillating { cos_amp: T, sin_amp: T, rate: T },
}

impl<T: Real> Tail<T> {
    /// `∫₀^∞ self·other du`, defined when at least one factor decays.
    pub fn product_integral(&self, other: &Self) -> Option<T> {
        match (*self, *other) {
            (Self::Decaying { amplitude: a, rate: r }, Self::Decaying { amplitude: b, rate: s }) => {
                Some(a * b / (r + s))
            }
            (
                Self::Decaying { amplitude, rate },
                Self::Oscillating {
                    cos_amp,
                    sin_amp,
                    rate: q,
                },
            )
            | (
                Self::Oscillating {
                    cos_amp,
                    sin_amp,
                    rate: q,
                },
                Self::Decaying { amplitude, rate },
            ) => {
                let denom = rate * rate + q * q;
                Some(amplitude * (cos_amp * rate + sin_amp * q) / denom)
            }
            _ => None,
        }
    }
}

/// Common view of discrete and continuum mode functions.
pub trait ModeFunction<T: Real> {
    fn omega(&self) -> T;
    /// Wavenumber inside the cavity.
    fn k(&self) -> T;
    /// Dielectric value inside the matter at this frequency.
    fn eps(&self) -> T;
    fn length(&self) -> T;
    fn params(&self) -> &CavityParams<T>;
    fn field(&self, z: T) -> FieldPoint<T>;
    /// Solution for `z = −u`.
    fn left_tail(&self) -> Tail<T>;
    /// Solution for `z = L + u`.
    fn right_tail(&self) -> Tail<T>;

    fn detuning(&self) -> T {
        let w = self.omega();
        let r = self.params().omega_res();
        w * w - r * r
    }

    /// Decay rate of the slowest evanescent tail, `None` for scattering states.
    fn decay_rate(&self) -> Option<T> {
        match self.right_tail() {
            Tail::Decaying { rate, .. } => Some(rate),
            Tail::Oscillating { .. } => None,
        }
    }
}

impl<T: Real> ModeFunction<T> for DiscreteMode<T> {
    fn omega(&self) -> T {
        self.omega
    }

    fn k(&self) -> T {
        self.k
    }

    fn eps(&self) -> T {
        self.eps
    }

    fn length(&self) -> T {
        self.length
    }

    fn params(&self) -> &CavityParams<T> {
        &self.params
    }

    fn field(&self, z: T) -> FieldPoint<T> {
        mode_profile(self, z)
    }

    fn left_tail(&self) -> Tail<T> {
        Tail::Decaying {
            amplitude: self.left_amplitude(),
            rate: self.kappa,
        }
    }

    fn right_tail(&self) -> Tail<T> {
        Tail::Decaying {
            amplitude: self.right_amplitude(),
            rate: self.kappa,
        }
    }
}

/// Profile of a bound mode; `z ≤ 0` and `z ≥ L` count as matter.
pub fn mode_profile<T: Real>(mode: &DiscreteMode<T>, z: T) -> FieldPoint<T> {
    let p = &mode.params;
    let amp = mode.sign * mode.alpha;
    if z <= T::zero() {
        let a = mode.left_amplitude() * (mode.kappa * z).exp();
        FieldPoint::matter(a, mode.kappa * a, mode.omega, mode.eps, p)
    } else if z >= mode.length {
        let a = mode.right_amplitude() * (-mode.kappa * (z - mode.length)).exp();
        FieldPoint::matter(a, -mode.kappa * a, mode.omega, mode.eps, p)
    } else {
        let (s, c) = (mode.k * (z - T::lit(0.5) * mode.length)).sin_cos();
        let (a, da) = match mode.parity {
            Parity::Even => (amp * c, -amp * mode.k * s),
            Parity::Odd => (amp * s, amp * mode.k * c),
        };
        FieldPoint::vacuum(a, da, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `sin k(z − L/2)` inside the cavity, normalized by `α_k`.
    One,
    /// `cos k(z − L/2)` inside the cavity, normalized by `β_k`.
    Two,
}

impl Branch {
    pub fn index(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }
}

/// Scattering state labelled by the intra-cavity wavenumber `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumMode<T> {
    pub k: T,
    pub branch: Branch,
    pub omega: T,
    /// `ε_k^{1/2} k`, the wavenumber inside the matter.
    pub kappa: T,
    pub eps: T,
    /// `α_k` on branch one, `β_k` on branch two.
    pub norm: T,
    pub length: T,
    pub params: CavityParams<T>,
}

/// Delta-normalized scattering state; fails inside the forbidden band.
pub fn continuum_mode<T: Real>(k: T, branch: Branch, length: T, params: &CavityParams<T>) -> Result<ContinuumMode<T>> {
    if !(k.is_finite() && k > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k.as_f64(),
            reason: "wavenumber must be positive",
        });
    }
    let omega = params.c() * k;
    let eps = dielectric(omega, params)?;
    if eps <= T::zero() {
        return Err(Error::ForbiddenBand {
            k: k.as_f64(),
            eps: eps.as_f64(),
        });
    }
    let (s, c) = (k * length * T::lit(0.5)).sin_cos();
    let (s2, c2) = (s * s, c * c);
    let shape = match branch {
        Branch::One => c2 / eps + s2,
        Branch::Two => s2 / eps + c2,
    };
    let norm = (T::PI() * params.eps0() * eps.sqrt() * shape).sqrt().recip();
    Ok(ContinuumMode {
        k,
        branch,
        omega,
        kappa: eps.sqrt() * k,
        eps,
        norm,
        length,
        params: *params,
    })
}

impl<T: Real> ModeFunction<T> for ContinuumMode<T> {
    fn omega(&self) -> T {
        self.omega
    }

    fn k(&self) -> T {
        self.k
    }

    fn eps(&self) -> T {
        self.eps
    }

    fn length(&self) -> T {
        self.length
    }

    fn params(&self) -> &CavityParams<T> {
        &self.params
    }

    fn field(&self, z: T) -> FieldPoint<T> {
        let p = &self.params;
        if z <= T::zero() {
            let (cos_amp, sin_amp, rate) = oscillating_parts(self.left_tail());
            let (s, c) = (-rate * z).sin_cos();
            let a = cos_amp * c + sin_amp * s;
            let da = -rate * (sin_amp * c - cos_amp * s);
            FieldPoint::matter(a, da, self.omega, self.eps, p)
        } else if z >= self.length {
            let (cos_amp, sin_amp, rate) = oscillating_parts(self.right_tail());
            let (s, c) = (rate * (z - self.length)).sin_cos();
            let a = cos_amp * c + sin_amp * s;
            let da = rate * (sin_amp * c - cos_amp * s);
            FieldPoint::matter(a, da, self.omega, self.eps, p)
        } else {
            let (s, c) = (self.k * (z - T::lit(0.5) * self.length)).sin_cos();
            let (a, da) = match self.branch {
                Branch::One => (self.norm * s, self.norm * self.k * c),
                Branch::Two => (self.norm * c, -self.norm * self.k * s),
            };
            FieldPoint::vacuum(a, da, p)
        }
    }

    fn left_tail(&self) -> Tail<T> {
        let (s, c) = (self.k * self.length * T::lit(0.5)).sin_cos();
        let ratio = self.k / self.kappa;
        let (cos_amp, sin_amp) = match self.branch {
            Branch::One => (-self.norm * s, -self.norm * ratio * c),
            Branch::Two => (self.norm * c, -self.norm * ratio * s),
        };
        Tail::Oscillating {
            cos_amp,
            sin_amp,
            rate: self.kappa,
        }
    }

    fn right_tail(&self) -> Tail<T> {
        let (s, c) = (self.k * self.length * T::lit(0.5)).sin_cos();
        let ratio = self.k / self.kappa;
        let (cos_amp, sin_amp) = match self.branch {
            Branch::One => (self.norm * s, self.norm * ratio * c),
            Branch::Two => (self.norm * c, -self.norm * ratio * s),
        };
        Tail::Oscillating {
            cos_amp,
            sin_amp,
            rate: self.kappa,
        }
    }
}

fn oscillating_parts<T: Real>(tail: Tail<T>) -> (T, T, T) {
    match tail {
        Tail::Oscillating { cos_amp, sin_amp, rate } => (cos_amp, sin_amp, rate),
        Tail::Decaying { amplitude, .. } => (amplitude, T::zero(), T::zero()),
    }
}

/// Weight `w` with `A_a Π_b − Y_a X_b = −ε₀ w A_a A_b` inside the matter.
fn matter_weight<T: Real, A: ModeFunction<T>, B: ModeFunction<T>>(a: &A, b: &B) -> T {
    let p = a.params();
    let wp = p.omega_p();
    b.eps() + wp * wp * a.omega() * a.omega() / (a.detuning() * b.detuning())
}

fn same_geometry<T: Real, A: ModeFunction<T>, B: ModeFunction<T>>(a: &A, b: &B) -> Result<()> {
    if a.length() != b.length() || a.params() != b.params() {
        return Err(Error::InvalidParameter {
            name: "length",
            value: b.length().as_f64(),
            reason: "modes were solved for different geometries",
        });
    }
    Ok(())
}

/// `∫dz [A_a Π_b − Y_a X_b]`; `−δ_ab` for bound modes, zero between a bound
/// mode and a scattering state.
///
/// Tail integrals are done in closed form, so at least one of the two modes
/// must be bound; use [`overlap_windowed`] for two scattering states.
pub fn overlap<T: Real, A: ModeFunction<T>, B: ModeFunction<T>>(a: &A, b: &B) -> Result<T> {
    same_geometry(a, b)?;
    let tails = a
        .left_tail()
        .product_integral(&b.left_tail())
        .zip(a.right_tail().product_integral(&b.right_tail()))
        .map(|(l, r)| l + r)
        .ok_or(Error::InvalidParameter {
            name: "mode",
            value: f64::NAN,
            reason: "overlap of two scattering states needs a finite window",
        })?;
    let length = a.length();
    let rule = GaussLegendre::new(POINTS_PER_WAVELENGTH);
    let panels = interior_panels(a.k().max(b.k()), length);
    let interior = integrate_adaptive(
        &rule,
        |z| a.field(z).a * b.field(z).a,
        T::zero(),
        length,
        panels,
        &QuadratureControls::default(),
    )?;
    let eps0 = a.params().eps0();
    Ok(-eps0 * (interior + matter_weight(a, b) * tails))
}

/// `∫_{−W}^{L+W} dz [A_a Π_b − Y_a X_b]` evaluated entirely by quadrature.
pub fn overlap_windowed<T: Real, A: ModeFunction<T>, B: ModeFunction<T>>(a: &A, b: &B, window: T) -> Result<T> {
    same_geometry(a, b)?;
    let length = a.length();
    let rule = GaussLegendre::new(POINTS_PER_WAVELENGTH);
    let integrand = |z: T| {
        let fa = a.field(z);
        let fb = b.field(z);
        fa.a * fb.pi - fa.y * fb.x
    };
    let controls = QuadratureControls::default();
    let fastest = a
        .k()
        .max(b.k())
        .max(a.omega().max(b.omega()) * a.eps().max(b.eps()).max(T::zero()).sqrt());
    let outer = interior_panels(fastest, window);
    let left = integrate_adaptive(&rule, integrand, -window, T::zero(), outer, &controls)?;
    let mid = integrate_adaptive(
        &rule,
        integrand,
        T::zero(),
        length,
        interior_panels(fastest, length),
        &controls,
    )?;
    let right = integrate_adaptive(&rule, integrand, length, length + window, outer, &controls)?;
    Ok(left + mid + right)
}

/// One panel per wavelength, at least one.
pub(crate) fn interior_panels<T: Real>(k: T, span: T) -> usize {
    (k * span / T::TAU()).ceil().to_usize().unwrap_or(1).max(1)
}

#[cfg(test)]
mod tests;
