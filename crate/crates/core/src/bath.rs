//! Ohmic bosonic bath: the decay function `Γ(t)` and the phase functions
//! `Δ(t)`, `Θ(t)` entering the dephasing factors.
//!
//! With `x = ω/ω_c`, `τ = ω_c t` and `β` in units of `1/ω_c`:
//!
//! ```text
//! Γ(t) = (J₀/2) ∫₀^∞ e^{−x} sin²(xτ/2)/x · coth(βx/2) dx
//! Δ(t) = ∫₀^∞ e^{−x} sin(xτ)/x dx = arctan τ
//! Θ(t) = τ ∫₀^∞ e^{−x} dx = τ
//! ```
//!
//! `Γ` is evaluated by adaptive quadrature. For very long times
//! (`τ > QUADRATURE_MAX_WCT`) the oscillating integrand would need millions of
//! panels, so the equivalent series obtained from
//! `coth(y) = 1 + 2 Σ_k e^{−2ky}`,
//!
//! ```text
//! Γ = (J₀/8) [ ln(1+τ²) + 2 Σ_{k≥1} ln(1 + τ²/(1+kβ)²) ],
//! ```
//!
//! is summed instead, with an Euler–Maclaurin tail.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_partitioned, QuadConfig};
use crate::scalar::Real;

/// Above this `ω_c t` the series route replaces quadrature for `Γ`.
pub const QUADRATURE_MAX_WCT: f64 = 400.0;
/// Subinterval budget of the `Γ` quadrature.
pub const GAMMA_MAX_INTERVALS: usize = 40_000;
const SERIES_DIRECT_TERMS: usize = 2000;
/// Panels up to this `x` resolve the oscillation; beyond it `e^{−x}` is negligible.
const OSCILLATORY_EDGE: f64 = 60.0;

/// Inverse temperature of the bath, in units of `1/ω_c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Beta<T> {
    Finite(T),
    /// `T = 0`: `coth ≡ 1`.
    ZeroTemperature,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathParams<T> {
    /// Dimensionless coupling `J₀`.
    pub j0: T,
    /// Cutoff frequency; sets the unit of time.
    pub omega_c: T,
    pub beta: Beta<T>,
    /// Relative tolerance for the `Γ` quadrature.
    pub quad_rel_tol: T,
    /// Apply the `4J₀` prefactor of `J(ω) = 4J₀ω e^{−ω/ω_c}` uniformly to
    /// `Γ`, `Δ` and `Θ` (so `Γ` gains a factor 16 and `Δ`, `Θ` a factor `4J₀`).
    pub strict_spectral_density: bool,
}

impl<T: Real> BathParams<T> {
    pub fn new(j0: T, omega_c: T, beta: Beta<T>) -> Result<Self> {
        let p = Self { j0, omega_c, beta, quad_rel_tol: T::lit(1e-10), strict_spectral_density: false };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j0 > T::zero()) || !self.j0.is_finite() {
            return Err(Error::InvalidParameter(format!("J0 must be positive, got {}", self.j0.as_f64())));
        }
        if !(self.omega_c > T::zero()) || !self.omega_c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega_c must be positive, got {}",
                self.omega_c.as_f64()
            )));
        }
        if let Beta::Finite(b) = self.beta {
            if !(b > T::zero()) || !b.is_finite() {
                return Err(Error::InvalidParameter(format!("beta must be positive, got {}", b.as_f64())));
            }
        }
        if !(self.quad_rel_tol > T::zero()) {
            return Err(Error::InvalidParameter("quadrature tolerance must be positive".into()));
        }
        Ok(())
    }

    fn gamma_prefactor(&self) -> T {
        let half = T::lit(0.5) * self.j0;
        if self.strict_spectral_density {
            half * T::lit(16.0)
        } else {
            half
        }
    }

    fn phase_prefactor(&self) -> T {
        if self.strict_spectral_density {
            T::lit(4.0) * self.j0
        } else {
            T::one()
        }
    }
}

impl Default for BathParams<f64> {
    fn default() -> Self {
        Self {
            j0: 8.0,
            omega_c: 1.0,
            beta: Beta::Finite(10.0),
            quad_rel_tol: 1e-10,
            strict_spectral_density: false,
        }
    }
}

/// `Γ`, `Δ`, `Θ` at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathFunctions<T> {
    pub gamma: T,
    pub delta: T,
    pub theta: T,
}

impl<T: Real> BathFunctions<T> {
    /// `r(t) = Δ(t) − Θ(t)`.
    pub fn r(&self) -> T {
        self.delta - self.theta
    }

    pub fn zero() -> Self {
        Self { gamma: T::zero(), delta: T::zero(), theta: T::zero() }
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time must be finite and non-negative, got {}", t.as_f64())));
    }
    Ok(())
}

/// `Γ` integrand in `x = ω/ω_c` without the `J₀/2` prefactor.
pub fn gamma_integrand<T: Real>(x: T, tau: T, beta: Beta<T>) -> T {
    let half = T::lit(0.5);
    if x == T::zero() {
        // sin²(xτ/2)/x ~ xτ²/4 and coth(βx/2) ~ 2/(βx)
        return match beta {
            Beta::ZeroTemperature => T::zero(),
            Beta::Finite(b) => tau * tau / (T::lit(2.0) * b),
        };
    }
    let s = (half * x * tau).sin();
    let base = (-x).exp() * s * s / x;
    match beta {
        Beta::ZeroTemperature => base,
        Beta::Finite(b) => base / (half * b * x).tanh(),
    }
}

/// `Γ(t)` for the given bath.
pub fn gamma_of_t<T: Real>(t: T, params: &BathParams<T>) -> Result<T> {
    check_time(t)?;
    params.validate()?;
    let tau = params.omega_c * t;
    if tau == T::zero() {
        return Ok(T::zero());
    }
    if tau > T::lit(QUADRATURE_MAX_WCT) {
        return Ok(gamma_series(t, params));
    }
    gamma_quadrature(t, params)
}

/// `Γ(t)` by adaptive quadrature at any `t`. Beyond `QUADRATURE_MAX_WCT` the
/// cost grows linearly with `t` and the budget eventually runs out.
pub fn gamma_quadrature<T: Real>(t: T, params: &BathParams<T>) -> Result<T> {
    check_time(t)?;
    params.validate()?;
    let tau = params.omega_c * t;
    if tau == T::zero() {
        return Ok(T::zero());
    }
    Ok(params.gamma_prefactor() * gamma_quadrature_integral(tau, params.beta, params.quad_rel_tol)?)
}

/// `∫₀^X` of [`gamma_integrand`] with `X = 50 + 10·max(1, τ)`.
fn gamma_quadrature_integral<T: Real>(tau: T, beta: Beta<T>, rel_tol: T) -> Result<T> {
    let upper = T::lit(50.0) + T::lit(10.0) * tau.max(T::one());
    let edge = T::lit(OSCILLATORY_EDGE).min(upper);
    // About one panel per oscillation period 2π/τ on [0, edge].
    let periods = (edge * tau / T::two_pi()).ceil().as_f64();
    let panels = (periods as usize).clamp(4, GAMMA_MAX_INTERVALS / 4);
    let step = edge / T::from_usize(panels).expect("panel count");
    let mut points: Vec<T> = (0..=panels).map(|i| T::from_usize(i).expect("index") * step).collect();
    if upper > edge {
        points.push(upper);
    }
    let cfg = QuadConfig { rel_tol, abs_tol: T::zero(), max_intervals: GAMMA_MAX_INTERVALS };
    Ok(integrate_partitioned(|x| gamma_integrand(x, tau, beta), &points, &cfg)?.value)
}

/// `Γ(t)` from the thermal series; exact at zero temperature and accurate to
/// roughly `1e−12` relative otherwise. Valid for every `t ≥ 0`.
pub fn gamma_series<T: Real>(t: T, params: &BathParams<T>) -> T {
    let tau = params.omega_c * t;
    let tau2 = tau * tau;
    let vacuum = tau2.ln_1p();
    let thermal = match params.beta {
        Beta::ZeroTemperature => T::zero(),
        Beta::Finite(b) => thermal_sum(tau, b),
    };
    // (J₀/2)/4 = J₀/8, times the prefactor convention.
    params.gamma_prefactor() * T::lit(0.25) * (vacuum + T::lit(2.0) * thermal)
}

/// `Σ_{k≥1} ln(1 + τ²/(1+kβ)²)`.
fn thermal_sum<T: Real>(tau: T, beta: T) -> T {
    let tau2 = tau * tau;
    let f = |k: T| {
        let u = T::one() + k * beta;
        (tau2 / (u * u)).ln_1p()
    };
    let mut direct = T::zero();
    for k in 1..SERIES_DIRECT_TERMS {
        direct += f(T::from_usize(k).expect("k"));
    }
    // Euler–Maclaurin for Σ_{k≥K} f(k) with K = SERIES_DIRECT_TERMS.
    let kk = T::from_usize(SERIES_DIRECT_TERMS).expect("K");
    let a = T::one() + kk * beta;
    // ∫_a^∞ ln(1+τ²/u²) du = 2τ arctan(τ/a) − a ln(1+τ²/a²)
    let integral = (T::lit(2.0) * tau * (tau / a).atan() - a * (tau2 / (a * a)).ln_1p()) / beta;
    let dfdk = beta * (-T::lit(2.0) * tau2 / (a * (a * a + tau2)));
    direct + integral + T::lit(0.5) * f(kk) - dfdk / T::lit(12.0)
}

/// `Δ(t) = arctan(ω_c t)`, the closed form of its defining integral.
pub fn delta_of_t<T: Real>(t: T, params: &BathParams<T>) -> Result<T> {
    check_time(t)?;
    Ok(params.phase_prefactor() * (params.omega_c * t).atan())
}

/// `Θ(t) = ω_c t`.
pub fn theta_of_t<T: Real>(t: T, params: &BathParams<T>) -> Result<T> {
    check_time(t)?;
    Ok(params.phase_prefactor() * params.omega_c * t)
}

pub fn bath_functions<T: Real>(t: T, params: &BathParams<T>) -> Result<BathFunctions<T>> {
    Ok(BathFunctions { gamma: gamma_of_t(t, params)?, delta: delta_of_t(t, params)?, theta: theta_of_t(t, params)? })
}

/// Memoises [`bath_functions`] per time for one fixed parameter set.
///
/// Safe for concurrent readers and writers.
#[derive(Debug)]
pub struct BathCache<T: Real> {
    params: BathParams<T>,
    entries: RwLock<HashMap<u64, BathFunctions<T>>>,
}

impl<T: Real> BathCache<T> {
    pub fn new(params: BathParams<T>) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, entries: RwLock::new(HashMap::new()) })
    }

    pub fn params(&self) -> &BathParams<T> {
        &self.params
    }

    pub fn get(&self, t: T) -> Result<BathFunctions<T>> {
        let key = t.as_f64().to_bits();
        if let Some(hit) = self.entries.read().expect("bath cache poisoned").get(&key) {
            return Ok(*hit);
        }
        let value = bath_functions(t, &self.params)?;
        self.entries.write().expect("bath cache poisoned").insert(key, value);
        Ok(value)
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("bath cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
