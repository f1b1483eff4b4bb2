//! The decoherence function of a qubit dephased by an Ohmic-class bath,
//!
//! `Gamma_s(tau, T, omega_c) = int_0^inf J_s(w) (1 - cos w tau) / w^2 coth(w / 2T) dw`,
//!
//! with `J_s(w) = omega_c (w / omega_c)^s exp(-w / omega_c)`. All quantities are in
//! units of the probe frequency.
//!
//! Three independent evaluators are provided (Hurwitz closed form, image series of
//! the `coth` expansion, direct quadrature) plus the zero-temperature closed form.

mod asymptotics;
mod closed;
mod derivative;
mod quad;
mod series;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use asymptotics::{asymptotic_slope, MIN_SLOPE_DECADES};
pub use closed::{gamma_closed_form, gamma_short_time_coeff, gamma_zero_temperature};
pub use derivative::{dgamma_domegac, dgamma_domegac_quadrature};
pub use quad::gamma_quadrature;
pub use series::{gamma_series, gamma_series_capped, SERIES_TERM_CAP};

/// Default relative tolerance for the tolerance-driven evaluators.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Bath parameters in probe-frequency units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    s: f64,
    omega_c: f64,
    temperature: f64,
}

impl BathSpec {
    pub fn new(s: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidBath(format!(
                "ohmicity s = {s} must be finite and > 0"
            )));
        }
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(Error::InvalidBath(format!(
                "cutoff omega_c = {omega_c} must be finite and > 0"
            )));
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::InvalidBath(format!(
                "temperature T = {temperature} must be finite and >= 0"
            )));
        }
        Ok(BathSpec {
            s,
            omega_c,
            temperature,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn with_omega_c(&self, omega_c: f64) -> Result<Self> {
        BathSpec::new(self.s, omega_c, self.temperature)
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        BathSpec::new(self.s, self.omega_c, temperature)
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.temperature == 0.0
    }
}

/// Which route produced a [`GammaResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Series,
    Quadrature,
    ZeroTemperature,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Series => "series",
            Method::Quadrature => "quadrature",
            Method::ZeroTemperature => "zero_temperature",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A decoherence-function value with the route used and an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaResult {
    pub value: f64,
    pub method: Method,
    pub err_estimate: f64,
}

impl GammaResult {
    pub(crate) fn new(value: f64, method: Method, err_estimate: f64) -> Self {
        // Rounding can leave -0.0 or a few ulps below zero for vanishing tau.
        GammaResult {
            value: value.max(0.0),
            method,
            err_estimate: err_estimate.abs(),
        }
    }
}

/// Evaluation route requested by a caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Closed form for `T > 0`, zero-temperature form at `T = 0`.
    #[default]
    Auto,
    Closed,
    Series,
    Quadrature,
}

/// Ohmic-class spectral density `J_s(w) = omega_c (w / omega_c)^s e^(-w / omega_c)`.
pub fn spectral_density(omega: f64, bath: &BathSpec) -> Result<f64> {
    if !omega.is_finite() || omega < 0.0 {
        return Err(Error::domain(
            "spectral_density",
            format!("omega = {omega} must be finite and >= 0"),
        ));
    }
    if omega == 0.0 {
        return Ok(0.0);
    }
    let x = omega / bath.omega_c;
    Ok(bath.omega_c * (bath.s * x.ln() - x).exp())
}

/// The decoherence function by the default route.
pub fn gamma(tau: f64, bath: &BathSpec) -> Result<GammaResult> {
    gamma_with(Route::Auto, tau, bath, DEFAULT_TOL)
}

/// The decoherence function by an explicit route. `tol` is used by the series and
/// quadrature routes only.
pub fn gamma_with(route: Route, tau: f64, bath: &BathSpec, tol: f64) -> Result<GammaResult> {
    match route {
        Route::Auto | Route::Closed => {
            if bath.is_zero_temperature() {
                gamma_zero_temperature(tau, bath)
            } else {
                gamma_closed_form(tau, bath)
            }
        }
        Route::Series => gamma_series(tau, bath, tol),
        Route::Quadrature => gamma_quadrature(tau, bath, tol),
    }
}

pub(crate) fn check_tau(function: &'static str, tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::domain(
            function,
            format!("tau = {tau} must be finite and >= 0"),
        ));
    }
    Ok(())
}

pub(crate) fn check_tol(function: &'static str, tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::domain(function, format!("tol = {tol} must be > 0")));
    }
    Ok(())
}
