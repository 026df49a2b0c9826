//! Physical parameters of the 1D cavity in reduced units.
//!
//! Units: `c = ε₀ = ħ = 1`. The matter enters only through the plasma
//! frequency `ω_p = (e²ρ/ε₀m)^{1/2}` and the resonance `Ω`; electron charge,
//! mass and density are never stored separately. Lengths default to the
//! reference separation `L0 = 1`, so `ω_c = 2π/L0 = 2π`.

use crate::error::{Error, Result};
use crate::real::Real;

/// Default floor on `|ω² − Ω²|` below which [`dielectric`] reports a pole.
pub const DEFAULT_POLE_FLOOR: f64 = 1e-12;

/// Matter and geometry of the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams<T> {
    omega_p: T,
    omega_res: T,
    length: T,
    pole_floor: T,
}

fn check_finite<T: Real>(name: &'static str, value: T) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: value.as_f64(),
            reason: "must be finite",
        })
    }
}

impl<T: Real> CavityParams<T> {
    /// `omega_p > 0`, `omega_res >= 0`, `length > 0`.
    pub fn new(omega_p: T, omega_res: T, length: T) -> Result<Self> {
        check_finite("omega_p", omega_p)?;
        check_finite("omega_res", omega_res)?;
        check_finite("length", length)?;
        if omega_p <= T::zero() {
            return Err(Error::InvalidParameter {
                name: "omega_p",
                value: omega_p.as_f64(),
                reason: "plasma frequency must be positive",
            });
        }
        if omega_res < T::zero() {
            return Err(Error::InvalidParameter {
                name: "omega_res",
                value: omega_res.as_f64(),
                reason: "resonance frequency must be non-negative",
            });
        }
        if length <= T::zero() {
            return Err(Error::InvalidParameter {
                name: "length",
                value: length.as_f64(),
                reason: "reference separation must be positive",
            });
        }
        Ok(Self {
            omega_p,
            omega_res,
            length,
            pole_floor: T::lit(DEFAULT_POLE_FLOOR),
        })
    }

    /// Builds parameters from `ω_p/ω_c` and `Ω/ω_c` with `ω_c = 2πc/L0`.
    pub fn from_ratios(omega_p_ratio: T, omega_res_ratio: T, length: T) -> Result<Self> {
        check_finite("length", length)?;
        let omega_c = T::TAU() / length;
        Self::new(omega_p_ratio * omega_c, omega_res_ratio * omega_c, length)
    }

    pub fn with_pole_floor(mut self, floor: T) -> Result<Self> {
        if !(floor.is_finite() && floor >= T::zero()) {
            return Err(Error::InvalidParameter {
                name: "pole_floor",
                value: floor.as_f64(),
                reason: "must be finite and non-negative",
            });
        }
        self.pole_floor = floor;
        Ok(self)
    }

    /// Same matter, different plasma frequency.
    pub fn with_omega_p(self, omega_p: T) -> Result<Self> {
        Self::new(omega_p, self.omega_res, self.length)?.with_pole_floor(self.pole_floor)
    }

    pub fn omega_p(&self) -> T {
        self.omega_p
    }

    pub fn omega_res(&self) -> T {
        self.omega_res
    }

    /// Reference separation `L0`.
    pub fn length(&self) -> T {
        self.length
    }

    pub fn pole_floor(&self) -> T {
        self.pole_floor
    }

    /// `ω_c = 2πc/L0`.
    pub fn omega_c(&self) -> T {
        T::TAU() / self.length
    }

    pub fn c(&self) -> T {
        T::one()
    }

    pub fn eps0(&self) -> T {
        T::one()
    }

    pub fn hbar(&self) -> T {
        T::one()
    }
}

/// `ε(ω) = 1 − ω_p²/(ω² − Ω²)`.
pub fn dielectric<T: Real>(omega: T, params: &CavityParams<T>) -> Result<T> {
    let detuning = omega * omega - params.omega_res * params.omega_res;
    if detuning.abs() < params.pole_floor {
        return Err(Error::Pole {
            distance: detuning.abs().as_f64(),
            floor: params.pole_floor.as_f64(),
        });
    }
    Ok(T::one() - params.omega_p * params.omega_p / detuning)
}

/// Open interval `(Ω, √(Ω² + ω_p²))` on which `ε < 0`.
pub fn discrete_band<T: Real>(params: &CavityParams<T>) -> (T, T) {
    let lo = params.omega_res;
    let hi = (lo * lo + params.omega_p * params.omega_p).sqrt();
    (lo, hi)
}

/// `η = c/(Lω_p)` and `ω_c = 2πc/L` at a given separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessGroup<T> {
    pub eta: T,
    pub omega_c: T,
}

pub fn eta_of<T: Real>(params: &CavityParams<T>, length: T) -> Result<DimensionlessGroup<T>> {
    if !(length.is_finite() && length > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "length",
            value: length.as_f64(),
            reason: "separation must be positive",
        });
    }
    Ok(DimensionlessGroup {
        eta: T::one() / (length * params.omega_p),
        omega_c: T::TAU() / length,
    })
}

/// Prescribed position `L(t)` of the moving mirror; the other mirror sits at `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MirrorTrajectory<T> {
    Static {
        l0: T,
    },
    /// Constant velocity `velocity` for `duration`. With `rise_time > 0` the
    /// velocity is switched on over `[0, rise_time]` and off over
    /// `[duration − rise_time, duration]` with a `sin²` envelope; with
    /// `rise_time = 0` the velocity jumps.
    LinearRamp {
        l0: T,
        velocity: T,
        duration: T,
        rise_time: T,
    },
    /// `L(t) = l0 + amplitude·sin(omega_m t)`.
    Sinusoidal {
        l0: T,
        amplitude: T,
        omega_m: T,
    },
}

impl<T: Real> MirrorTrajectory<T> {
    pub fn static_mirror(l0: T) -> Result<Self> {
        let traj = Self::Static { l0 };
        traj.validate()?;
        Ok(traj)
    }

    pub fn linear_ramp(l0: T, velocity: T, duration: T, rise_time: T) -> Result<Self> {
        let traj = Self::LinearRamp {
            l0,
            velocity,
            duration,
            rise_time,
        };
        traj.validate()?;
        Ok(traj)
    }

    pub fn sinusoidal(l0: T, amplitude: T, omega_m: T) -> Result<Self> {
        let traj = Self::Sinusoidal { l0, amplitude, omega_m };
        traj.validate()?;
        Ok(traj)
    }

    fn validate(&self) -> Result<()> {
        let bad = |name, value: T, reason| {
            Err(Error::InvalidParameter {
                name,
                value: value.as_f64(),
                reason,
            })
        };
        let l0 = self.l0();
        check_finite("l0", l0)?;
        if l0 <= T::zero() {
            return bad("l0", l0, "mirror separation must be positive");
        }
        match *self {
            Self::Static { .. } => Ok(()),
            Self::LinearRamp {
                velocity,
                duration,
                rise_time,
                ..
            } => {
                check_finite("velocity", velocity)?;
                check_finite("duration", duration)?;
                check_finite("rise_time", rise_time)?;
                if velocity.abs() >= T::one() {
                    return bad("velocity", velocity, "mirror speed must stay below c");
                }
                if duration < T::zero() {
                    return bad("duration", duration, "must be non-negative");
                }
                if rise_time < T::zero() || rise_time + rise_time > duration {
                    return bad("rise_time", rise_time, "must lie in [0, duration/2]");
                }
                let end = l0 + velocity * (duration - rise_time);
                if end <= T::zero() {
                    return bad("velocity", velocity, "ramp would close the cavity");
                }
                Ok(())
            }
            Self::Sinusoidal { amplitude, omega_m, .. } => {
                check_finite("amplitude", amplitude)?;
                check_finite("omega_m", omega_m)?;
                if amplitude < T::zero() || amplitude >= l0 {
                    return bad("amplitude", amplitude, "must lie in [0, l0)");
                }
                if omega_m < T::zero() {
                    return bad("omega_m", omega_m, "must be non-negative");
                }
                if amplitude * omega_m >= T::one() {
                    return bad("amplitude", amplitude, "peak mirror speed must stay below c");
                }
                Ok(())
            }
        }
    }

    pub fn l0(&self) -> T {
        match *self {
            Self::Static { l0 } | Self::LinearRamp { l0, .. } | Self::Sinusoidal { l0, .. } => l0,
        }
    }

    /// Mirror position `L(t)`.
    pub fn length(&self, t: T) -> T {
        match *self {
            Self::Static { l0 } => l0,
            Self::LinearRamp {
                l0,
                velocity,
                duration,
                rise_time,
            } => l0 + velocity * ramp_displacement(t, duration, rise_time),
            Self::Sinusoidal { l0, amplitude, omega_m } => l0 + amplitude * (omega_m * t).sin(),
        }
    }

    /// Mirror velocity `L̇(t)`.
    pub fn velocity(&self, t: T) -> T {
        match *self {
            Self::Static { .. } => T::zero(),
            Self::LinearRamp {
                velocity,
                duration,
                rise_time,
                ..
            } => velocity * ramp_envelope(t, duration, rise_time),
            Self::Sinusoidal { amplitude, omega_m, .. } => amplitude * omega_m * (omega_m * t).cos(),
        }
    }

    /// Range of `L(t)` over `[0, t_final]`, conservative for the sinusoid.
    pub fn length_range(&self, t_final: T) -> (T, T) {
        match *self {
            Self::Static { l0 } => (l0, l0),
            Self::LinearRamp { .. } => {
                let a = self.length(T::zero());
                let b = self.length(t_final);
                (a.min(b), a.max(b))
            }
            Self::Sinusoidal { l0, amplitude, .. } => (l0 - amplitude, l0 + amplitude),
        }
    }
}

fn ramp_envelope<T: Real>(t: T, duration: T, rise: T) -> T {
    if t < T::zero() || t > duration {
        return T::zero();
    }
    let half_pi = T::FRAC_PI_2();
    if rise > T::zero() && t < rise {
        (half_pi * t / rise).sin().powi(2)
    } else if rise > T::zero() && t > duration - rise {
        (half_pi * (duration - t) / rise).sin().powi(2)
    } else {
        T::one()
    }
}

fn ramp_displacement<T: Real>(t: T, duration: T, rise: T) -> T {
    let half = T::lit(0.5);
    if t <= T::zero() {
        return T::zero();
    }
    if rise <= T::zero() {
        return t.min(duration);
    }
    // ∫₀ᵘ sin²(πs/2τ) ds
    let ramp = |u: T| half * u - rise * (T::PI() * u / rise).sin() / T::TAU();
    let t = t.min(duration);
    if t < rise {
        ramp(t)
    } else if t <= duration - rise {
        half * rise + (t - rise)
    } else {
        half * rise + (duration - rise - rise) + (half * rise - ramp(duration - t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn dielectric_vacuum_limit() {
        let p = CavityParams::new(1e-200, 0.0, 1.0).unwrap();
        for w in [0.1, 1.0, 7.5] {
            assert_eq!(dielectric(w, &p).unwrap(), 1.0);
        }
    }

    #[test]
    fn dielectric_band_edge_and_metal() {
        let p = CavityParams::new(4.0, 3.0, 1.0).unwrap();
        assert_relative_eq!(dielectric(5.0, &p).unwrap(), 0.0, epsilon = 1e-15);
        let metal = CavityParams::new(2.0 * PI, 0.0, 1.0).unwrap();
        assert_relative_eq!(dielectric(PI, &metal).unwrap(), -3.0, epsilon = 1e-14);
    }

    #[test]
    fn dielectric_pole_is_reported() {
        let p = CavityParams::new(1.0, 2.0, 1.0).unwrap();
        assert!(matches!(dielectric(2.0, &p), Err(Error::Pole { .. })));
        let loose = p.with_pole_floor(1e-3).unwrap();
        assert!(matches!(dielectric(2.0 + 1e-5, &loose), Err(Error::Pole { .. })));
    }

    #[test]
    fn band_examples() {
        let p = CavityParams::new(5.0, 0.0, 1.0).unwrap();
        assert_eq!(discrete_band(&p), (0.0, 5.0));
        let p = CavityParams::new(4.0, 3.0, 1.0).unwrap();
        assert_eq!(discrete_band(&p), (3.0, 5.0));
        let p = CavityParams::new(1e-300, 0.0, 1.0).unwrap();
        let (lo, hi) = discrete_band(&p);
        assert!(hi - lo < 1e-299);
    }

    #[test]
    fn eta_examples() {
        let p = CavityParams::new(2.0 * PI, 0.0, 1.0).unwrap();
        let g = eta_of(&p, 1.0).unwrap();
        assert_relative_eq!(g.eta, 1.0 / (2.0 * PI), max_relative = 1e-15);
        assert_relative_eq!(g.omega_c, 2.0 * PI, max_relative = 1e-15);

        let p = CavityParams::from_ratios(100.0, 0.0, 1.0).unwrap();
        let g = eta_of(&p, 1.0).unwrap();
        assert_relative_eq!(g.eta, 1.0 / (200.0 * PI), max_relative = 1e-14);
        assert!((g.eta - 1.5915e-3).abs() < 1e-7);

        let p = CavityParams::new(1e12, 0.0, 1.0).unwrap();
        assert!(eta_of(&p, 1.0).unwrap().eta < 1e-11);
    }

    #[test]
    fn eta_halves_when_length_doubles() {
        let p = CavityParams::new(3.7, 0.4, 1.0).unwrap();
        for l in [0.3, 1.0, 2.9] {
            assert_eq!(eta_of(&p, 2.0 * l).unwrap().eta, eta_of(&p, l).unwrap().eta / 2.0);
        }
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(CavityParams::new(0.0, 0.0, 1.0).is_err());
        assert!(CavityParams::new(1.0, -1.0, 1.0).is_err());
        assert!(CavityParams::new(1.0, 0.0, 0.0).is_err());
        assert!(CavityParams::new(f64::NAN, 0.0, 1.0).is_err());
        assert!(CavityParams::new(1.0, f64::INFINITY, 1.0).is_err());
        assert!(eta_of(&CavityParams::new(1.0, 0.0, 1.0).unwrap(), -1.0).is_err());
        assert!(MirrorTrajectory::sinusoidal(1.0, 1.0, 0.1).is_err());
        assert!(MirrorTrajectory::sinusoidal(1.0, 0.5, 3.0).is_err());
        assert!(MirrorTrajectory::linear_ramp(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(MirrorTrajectory::linear_ramp(1.0, -0.5, 4.0, 0.0).is_err());
        assert!(MirrorTrajectory::linear_ramp(1.0, 0.1, 1.0, 0.6).is_err());
        assert!(MirrorTrajectory::static_mirror(0.0).is_err());
    }

    #[test]
    fn ramp_velocity_integrates_to_position() {
        let traj = MirrorTrajectory::linear_ramp(1.0, 0.01, 10.0, 2.5).unwrap();
        let n = 20_000;
        let dt = 12.0 / n as f64;
        let mut pos = traj.length(0.0);
        for i in 0..n {
            let t = (i as f64 + 0.5) * dt;
            pos += traj.velocity(t) * dt;
            let exact = traj.length((i + 1) as f64 * dt);
            assert!((pos - exact).abs() < 1e-8, "t = {t}: {pos} vs {exact}");
        }
        assert_relative_eq!(traj.length(12.0), 1.0 + 0.01 * 7.5, max_relative = 1e-14);
        assert_eq!(traj.velocity(11.0), 0.0);
        assert_eq!(traj.velocity(5.0), 0.01);
    }

    #[test]
    fn sudden_ramp_is_linear() {
        let traj = MirrorTrajectory::linear_ramp(1.0, -0.02, 5.0, 0.0).unwrap();
        assert_relative_eq!(traj.length(2.0), 0.96, max_relative = 1e-15);
        assert_relative_eq!(traj.length(9.0), 0.90, max_relative = 1e-15);
        assert_eq!(traj.length_range(9.0), (0.9, 1.0));
    }

    #[test]
    fn sinusoid_kinematics() {
        let traj = MirrorTrajectory::sinusoidal(1.0, 1e-3, 2.0 * PI).unwrap();
        assert_relative_eq!(traj.length(0.25), 1.001, max_relative = 1e-15);
        assert_relative_eq!(traj.velocity(0.0), 2e-3 * PI, max_relative = 1e-15);
        assert_eq!(traj.length_range(3.0), (0.999, 1.001));
    }
}
