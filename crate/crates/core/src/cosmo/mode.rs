//! Per-mode quantum parameters of a Klein–Gordon field on a flat FLRW background.
//!
//! `Θ = (λ+M²)/a²`, `Δ = a/√(λ+M²)`, `K = √(λ+M²)/a` with `M = a·m`. The metric
//! pairing of a comoving unit box is `δ = a³V`; the second-quantized covariance
//! is the weighted `δΔ`, whose logarithmic rate is `(ȧ/a)(4 − M²/(M²+λ))`.

use super::background::FLRWBackground;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Convention block written into every output header.
pub const WEIGHT_CONVENTION: &str = "delta-weight: flat comoving box, delta = a^3 V; weighted covariance delta*Delta";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeParameters {
    pub lambda: f64,
    pub t: f64,
    pub a: f64,
    /// `M = a·m`.
    pub mass: f64,
    pub theta: f64,
    pub delta: f64,
    pub k: f64,
    /// `δ = a³V`.
    pub weight: f64,
    /// `ω² = λ/M²`, infinite for a massless field.
    pub omega2: f64,
}

impl ModeParameters {
    /// `δΔ`.
    pub fn weighted_delta(&self) -> f64 {
        self.weight * self.delta
    }

    /// `K/δ`, the inverse of [`Self::weighted_delta`].
    pub fn weighted_k(&self) -> f64 {
        self.k / self.weight
    }

    /// `M²/(M²+λ)`.
    pub fn mass_fraction(&self) -> f64 {
        let m2 = self.mass * self.mass;
        m2 / (m2 + self.lambda)
    }

    /// Energy of one quantum, `K = √(λ+M²)/a`.
    pub fn frequency(&self) -> f64 {
        self.k
    }
}

fn params(bg: &FLRWBackground, lambda: f64, t: f64, a: f64) -> Result<ModeParameters> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("scale factor a = {a} must be positive")));
    }
    let mass = a * bg.mass;
    let e2 = lambda + mass * mass;
    if !(e2 > 0.0) {
        return Err(Error::Domain(format!("λ + M² = {e2} must be positive")));
    }
    let e = e2.sqrt();
    Ok(ModeParameters {
        lambda,
        t,
        a,
        mass,
        theta: e2 / (a * a),
        delta: a / e,
        k: e / a,
        weight: a.powi(3) * bg.volume,
        omega2: if mass > 0.0 { lambda / (mass * mass) } else { f64::INFINITY },
    })
}

pub fn mode_parameters(bg: &FLRWBackground, lambda: f64, t: f64) -> Result<ModeParameters> {
    params(bg, lambda, t, bg.a(t)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeRates {
    /// `Δ·(ȧ/a)(4 − M²/(M²+λ))`.
    pub delta_dot: f64,
    /// `−K·(ȧ/a)(4 − M²/(M²+λ))`.
    pub k_dot: f64,
    pub hubble: f64,
    /// `(δ°δ∘) = 3ȧ/a`.
    pub volume_rate: f64,
    /// `d log(δΔ)/dt`.
    pub log_rate: f64,
}

pub fn mode_rates(bg: &FLRWBackground, lambda: f64, t: f64) -> Result<ModeRates> {
    let p = mode_parameters(bg, lambda, t)?;
    let hubble = bg.a_dot(t)? / p.a;
    Ok(rates(&p, hubble))
}

pub(crate) fn rates(p: &ModeParameters, hubble: f64) -> ModeRates {
    let log_rate = hubble * (4.0 - p.mass_fraction());
    ModeRates { delta_dot: p.delta * log_rate, k_dot: -p.k * log_rate, hubble, volume_rate: 3.0 * hubble, log_rate }
}

/// Parameters and rates from raw profile values, for use inside integrators.
pub(crate) fn mode_state(bg: &FLRWBackground, lambda: f64, t: f64) -> Result<(ModeParameters, ModeRates)> {
    let (a, a_dot) = bg.a_raw(t);
    let p = params(bg, lambda, t, a)?;
    let r = rates(&p, a_dot / a);
    Ok((p, r))
}
