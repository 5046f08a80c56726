//! Per-mode connection terms `Γ` and their action on the field operators.
//!
//! Every connection is a quadratic word `Γ = c₁ φ∂ + c₂ ∂² + c₃ φ²` in the
//! holomorphic representation of one mode with covariance `δΔ`. The background
//! has `A = 0`, so `D = −K` and the Kronecker factors in the antiholomorphic and
//! momentum connections are constant.

use super::background::FLRWBackground;
use super::mode::{mode_parameters, mode_rates, ModeParameters, ModeRates};
use crate::error::Result;
use crate::kahler::ComplexStructureBlocks;
use crate::quantize::{Rep, RepSpace, Space, TruncatedOperator};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectionKind {
    Holomorphic,
    Antiholomorphic,
    Schrodinger,
    Momentum,
    /// The modified momentum connection, compatible with quantization.
    Compatible,
}

impl ConnectionKind {
    pub const ALL: [ConnectionKind; 5] = [
        ConnectionKind::Holomorphic,
        ConnectionKind::Antiholomorphic,
        ConnectionKind::Schrodinger,
        ConnectionKind::Momentum,
        ConnectionKind::Compatible,
    ];
}

/// `Γ = phi_d·φ∂ + dd·∂² + phiphi·φ²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldWord {
    pub phi_d: f64,
    pub dd: f64,
    pub phiphi: f64,
}

/// Normal-ordered ladder coefficients with `a = δΔ∂`, `a† = φ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LadderWord {
    pub c_ad_a: f64,
    pub c_aa: f64,
    pub c_adad: f64,
    pub c_const: f64,
}

impl FieldWord {
    pub fn ladder(&self, p: &ModeParameters) -> LadderWord {
        let k = p.weighted_k();
        LadderWord { c_ad_a: self.phi_d * k, c_aa: self.dd * k * k, c_adad: self.phiphi, c_const: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.phi_d == 0.0 && self.dd == 0.0 && self.phiphi == 0.0
    }

    pub fn sub(&self, o: &Self) -> Self {
        FieldWord { phi_d: self.phi_d - o.phi_d, dd: self.dd - o.dd, phiphi: self.phiphi - o.phiphi }
    }

    pub fn operator(&self, space: &Space) -> TruncatedOperator {
        let phi = TruncatedOperator::raise(space, 0);
        let d = TruncatedOperator::deriv(space, 0);
        let c = |v: f64| Complex64::new(v, 0.0);
        phi.compose(&d)
            .scale(c(self.phi_d))
            .add(&d.compose(&d).scale(c(self.dd)))
            .add(&phi.compose(&phi).scale(c(self.phiphi)))
    }
}

/// The self-adjoint part `½φKΔ̇∂` shared by every connection.
pub fn symmetric_part(r: &ModeRates) -> FieldWord {
    FieldWord { phi_d: 0.5 * r.log_rate, ..FieldWord::default() }
}

pub fn connection_word(kind: ConnectionKind, p: &ModeParameters, r: &ModeRates) -> FieldWord {
    let delta = p.weighted_delta();
    let k = p.weighted_k();
    let delta_dot = delta * r.log_rate;
    let k_dot = -k * r.log_rate;
    let base = symmetric_part(r);
    match kind {
        ConnectionKind::Holomorphic | ConnectionKind::Antiholomorphic => base,
        ConnectionKind::Schrodinger => FieldWord { dd: -0.25 * delta_dot, phiphi: -0.25 * k_dot, ..base },
        ConnectionKind::Momentum => {
            // ε² = −1 turns ¼[(−ε)Ḋ⁻¹(−ε)(Kφ)² − ε Ḋ⁻¹ ε ∂²] into ¼[Ḋ⁻¹∂² − Ḋ⁻¹K²φ²].
            let d_inv_dot = -delta_dot;
            FieldWord { dd: 0.25 * d_inv_dot, phiphi: -0.25 * d_inv_dot * k * k, ..base }
        }
        ConnectionKind::Compatible => {
            let s = r.volume_rate;
            FieldWord {
                phi_d: base.phi_d + 0.5 * (s - k * s * delta),
                dd: -0.25 * delta_dot + 0.5 * delta * s,
                phiphi: -0.25 * k_dot - 0.5 * k * s,
            }
        }
    }
}

/// Ladder coefficients of the compatible connection at `(λ, t)`.
pub fn connection_blocks(bg: &FLRWBackground, lambda: f64, t: f64) -> Result<LadderWord> {
    let p = mode_parameters(bg, lambda, t)?;
    let r = mode_rates(bg, lambda, t)?;
    Ok(connection_word(ConnectionKind::Compatible, &p, &r).ladder(&p))
}

/// Holomorphic space of one mode with covariance `δΔ`.
pub fn mode_space(p: &ModeParameters, cutoff: usize) -> Result<Space> {
    let blocks = ComplexStructureBlocks::diagonal(DMatrix::from_element(1, 1, p.weighted_delta()))?;
    RepSpace::new(Rep::Holomorphic, &blocks, cutoff)
}

/// `φ̂ = (φ + Δ∂)/√2` and `π̂ = −iK(φ − Δ∂)/√2` with their explicit time derivatives.
struct Fields {
    phi: TruncatedOperator,
    phi_dot: TruncatedOperator,
    pi: TruncatedOperator,
    pi_dot: TruncatedOperator,
}

fn fields(space: &Space, p: &ModeParameters, r: &ModeRates) -> Fields {
    let c = |v: f64| Complex64::new(v, 0.0);
    let i = Complex64::i();
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let (delta, k) = (p.weighted_delta(), p.weighted_k());
    let (delta_dot, k_dot) = (delta * r.log_rate, -k * r.log_rate);
    let x = TruncatedOperator::raise(space, 0);
    let d = TruncatedOperator::deriv(space, 0);
    let plus = x.add(&d.scale(c(delta)));
    let minus = x.sub(&d.scale(c(delta)));
    Fields {
        phi: plus.scale(c(s2)),
        phi_dot: d.scale(c(delta_dot * s2)),
        pi: minus.scale(-i * k * s2),
        pi_dot: minus.scale(-i * k_dot * s2).add(&d.scale(i * k * delta_dot * s2)),
    }
}

/// `∂_t O + [Γ, O]`.
fn covariant(gamma: &TruncatedOperator, o: &TruncatedOperator, o_dot: &TruncatedOperator) -> TruncatedOperator {
    o_dot.add(&gamma.commutator(o))
}

const MARGIN: usize = 3;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureReport {
    pub connection: ConnectionKind,
    pub field_residual: f64,
    pub momentum_residual: f64,
}

/// Each connection applied to `φ̂`, `π̂` against its closed-form cell, on the
/// interior of a truncated mode space. For the compatible connection the cell
/// is `∇_t φ̂ = ∇_t π̂ = 0` for the density-weighted pair `(δ⁻¹φ̂, δπ̂)`.
pub fn table_fixtures(bg: &FLRWBackground, lambda: f64, t: f64, cutoff: usize) -> Result<Vec<FixtureReport>> {
    let p = mode_parameters(bg, lambda, t)?;
    let r = mode_rates(bg, lambda, t)?;
    let space = mode_space(&p, cutoff)?;
    let f = fields(&space, &p, &r);
    let k = p.weighted_k();
    let k_dot = -k * r.log_rate;
    // D = −K, so ḊD⁻¹ = K̇K⁻¹.
    let d_dot_d_inv = k_dot / k;
    let c = |v: f64| Complex64::new(v, 0.0);
    ConnectionKind::ALL
        .iter()
        .map(|&kind| {
            let gamma = connection_word(kind, &p, &r).operator(&space);
            let (field, momentum) = match kind {
                ConnectionKind::Holomorphic => (
                    covariant(&gamma, &f.phi, &f.phi_dot).sub(&f.phi.scale(c(0.5 * r.log_rate))),
                    covariant(&gamma, &f.pi, &f.pi_dot).add(&f.pi.scale(c(0.5 * r.log_rate))),
                ),
                ConnectionKind::Antiholomorphic => (
                    covariant(&gamma, &f.phi, &f.phi_dot).add(&f.phi.scale(c(0.5 * d_dot_d_inv))),
                    covariant(&gamma, &f.pi, &f.pi_dot).sub(&f.pi.scale(c(0.5 * d_dot_d_inv))),
                ),
                ConnectionKind::Schrodinger | ConnectionKind::Momentum => {
                    (covariant(&gamma, &f.phi, &f.phi_dot), covariant(&gamma, &f.pi, &f.pi_dot))
                }
                ConnectionKind::Compatible => {
                    let s = r.volume_rate;
                    let field = covariant(&gamma, &f.phi, &f.phi_dot.sub(&f.phi.scale(c(s))));
                    let momentum = covariant(&gamma, &f.pi, &f.pi_dot.add(&f.pi.scale(c(s))));
                    (field.scale(c(1.0 / p.weight)), momentum.scale(c(p.weight)))
                }
            };
            let zero = TruncatedOperator::zero(&space);
            Ok(FixtureReport {
                connection: kind,
                field_residual: field.interior_distance(&zero, MARGIN),
                momentum_residual: momentum.interior_distance(&zero, MARGIN),
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransportReport {
    /// `∇_t(δ⁻¹φ̂)`.
    pub field: f64,
    /// `∇_t(δπ̂)`.
    pub momentum: f64,
    /// `∇_t φ̂` without the density weight; equals `(δ°δ∘)φ̂`.
    pub field_unweighted: f64,
    /// `[δ⁻¹φ̂, δπ̂] + i` on the interior; the pair keeps `[φ̂, π̂] = −i` in this sign convention.
    pub ccr: f64,
    /// `γ† + γ` for `γ = Γ − ½φKΔ̇∂`.
    pub anti_adjoint: f64,
}

/// Transport conditions of the compatible connection at matrix level.
pub fn transport_check(bg: &FLRWBackground, lambda: f64, t: f64, cutoff: usize) -> Result<TransportReport> {
    let p = mode_parameters(bg, lambda, t)?;
    let r = mode_rates(bg, lambda, t)?;
    let space = mode_space(&p, cutoff)?;
    let f = fields(&space, &p, &r);
    let word = connection_word(ConnectionKind::Compatible, &p, &r);
    let gamma = word.operator(&space);
    let c = |v: f64| Complex64::new(v, 0.0);
    let s = r.volume_rate;
    let w = p.weight;
    let field = covariant(&gamma, &f.phi.scale(c(1.0 / w)), &f.phi_dot.sub(&f.phi.scale(c(s))).scale(c(1.0 / w)));
    let momentum = covariant(&gamma, &f.pi.scale(c(w)), &f.pi_dot.add(&f.pi.scale(c(s))).scale(c(w)));
    let bare = covariant(&gamma, &f.phi, &f.phi_dot);
    let zero = TruncatedOperator::zero(&space);
    let ccr = f.phi.commutator(&f.pi).sub(&TruncatedOperator::identity(&space).scale(-Complex64::i()));
    let g = word.sub(&symmetric_part(&r)).operator(&space);
    Ok(TransportReport {
        field: field.interior_distance(&zero, MARGIN),
        momentum: momentum.interior_distance(&zero, MARGIN),
        field_unweighted: bare.interior_distance(&zero, MARGIN),
        ccr: ccr.interior_distance(&zero, MARGIN),
        anti_adjoint: g.adjoint().add(&g).distance(&zero),
    })
}
