//! Covariant derivatives along a curve and its Frenet apparatus.

use crate::curvekit::Curve;
use crate::error::{Error, Result};
use crate::geometry::{AmbientJets, TangentVector};
use crate::jet::Jet4;
use crate::DEFAULT_EPS_RANK;

/// Speed tolerance for the Frenet construction.
pub const UNIT_SPEED_TOL: f64 = 1e-7;
/// Largest frame exposed, `E₁..E₄`.
pub const MAX_ORDER: usize = 4;

/// A vector field along a curve, each component a jet in `s` valid up to
/// `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetVector {
    pub comps: Vec<Jet4>,
    pub order: usize,
}

impl JetVector {
    pub fn new(comps: Vec<Jet4>, order: usize) -> Self {
        let comps = comps.into_iter().map(|c| c.truncate(order)).collect();
        JetVector { comps, order }
    }

    pub fn values(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c.value()).collect()
    }

    pub fn scale(&self, k: Jet4) -> Self {
        JetVector::new(self.comps.iter().map(|c| *c * k).collect(), self.order)
    }

    pub fn div(&self, k: Jet4) -> Self {
        let r = k.recip();
        self.scale(r)
    }

    /// `self − k·other`, valid to the lower of the orders involved.
    pub fn sub_scaled(&self, k: Jet4, other: &JetVector) -> Self {
        let order = self.order.min(other.order);
        JetVector::new(
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| *a - k * *b)
                .collect(),
            order,
        )
    }
}

/// Jets of the curve and of the ambient geometry at one parameter value.
#[derive(Debug, Clone)]
pub struct AlongCurve {
    pub s: f64,
    pub position: Vec<Jet4>,
    pub ambient: AmbientJets,
    pub c: f64,
}

impl AlongCurve {
    pub fn new(curve: &Curve, s: f64) -> Result<Self> {
        let position = curve.jets(s)?;
        let ambient = curve.ambient().along(&position)?;
        Ok(AlongCurve {
            s,
            position,
            ambient,
            c: curve.ambient().c(),
        })
    }

    pub fn dim(&self) -> usize {
        self.position.len()
    }

    pub fn point(&self) -> Vec<f64> {
        self.position.iter().map(|j| j.value()).collect()
    }

    /// `T = γ'`, valid to order 3.
    pub fn tangent(&self) -> JetVector {
        JetVector::new(self.position.iter().map(|p| p.derivative()).collect(), 3)
    }

    /// The coordinate field `∂_k` along the curve.
    pub fn coordinate_field(&self, k: usize) -> JetVector {
        let mut comps = vec![Jet4::ZERO; self.dim()];
        comps[k] = Jet4::constant(1.0);
        JetVector { comps, order: 4 }
    }

    /// `(∇_T V)ᵏ = dVᵏ/ds + Γ̃ᵏ_ij Tⁱ Vʲ`, one order lower than `V`.
    pub fn covariant_derivative(&self, v: &JetVector) -> Result<JetVector> {
        if v.order == 0 {
            return Err(Error::invalid(
                "covariant derivative needs a jet of order at least 1",
            ));
        }
        let t = self.tangent();
        let dim = self.dim();
        let gamma = &self.ambient.gamma;
        let comps = (0..dim)
            .map(|k| {
                let mut acc = v.comps[k].derivative();
                for i in 0..dim {
                    for j in 0..dim {
                        let g = gamma.get(k, i, j);
                        if g.d.iter().any(|x| *x != 0.0) {
                            acc += g * t.comps[i] * v.comps[j];
                        }
                    }
                }
                acc
            })
            .collect();
        Ok(JetVector::new(comps, (v.order - 1).min(t.order)))
    }

    pub fn inner(&self, u: &JetVector, v: &JetVector) -> Jet4 {
        let order = u.order.min(v.order);
        self.ambient
            .metric
            .iter()
            .zip(u.comps.iter().zip(&v.comps))
            .map(|(g, (a, b))| *g * *a * *b)
            .sum::<Jet4>()
            .truncate(order)
    }

    pub fn norm(&self, v: &JetVector) -> Jet4 {
        self.inner(v, v).sqrt().truncate(v.order)
    }

    pub fn to_tangent(&self, v: &JetVector) -> TangentVector {
        TangentVector::new(self.point(), v.values())
    }
}

/// `∇_T V` for a jet-valued field `V` along `curve` at `s`.
pub fn covariant_derivative_along(curve: &Curve, v: &JetVector, s: f64) -> Result<JetVector> {
    AlongCurve::new(curve, s)?.covariant_derivative(v)
}

/// Frenet apparatus at one parameter value.
#[derive(Debug, Clone)]
pub struct FrenetData {
    pub s: f64,
    /// Osculating order, capped at `min(n + 1, 4)`.
    pub r: usize,
    /// `E₁ = T, E₂, ..` up to `E_r`.
    pub frame: Vec<TangentVector>,
    /// `k₁, ..` up to `k_{r−1}`.
    pub curvatures: Vec<f64>,
    /// Curvatures as jets in `s`: `k₁` to order 2, `k₂` to order 1, `k₃` to order 0.
    pub curvature_jets: Vec<Jet4>,
    /// `η(E₁), .., η(E₄)`, zero past `r`.
    pub eta_e: [f64; 4],
    /// Curvatures in `(ε, 10ε)`, by index.
    pub marginal: Vec<usize>,
    /// `‖∇_T E_r + k_{r−1} E_{r−1}‖` when the jets reach far enough.
    pub closure: Option<f64>,
    pub speed: f64,
}

impl FrenetData {
    /// `kᵢ` (1-based), zero past the osculating order.
    pub fn k(&self, i: usize) -> f64 {
        self.curvatures.get(i - 1).copied().unwrap_or(0.0)
    }

    /// Jet of `kᵢ` (1-based), the zero jet past the osculating order.
    pub fn k_jet(&self, i: usize) -> Jet4 {
        self.curvature_jets
            .get(i - 1)
            .copied()
            .unwrap_or(Jet4::ZERO)
    }

    /// `Eᵢ` (1-based), if present.
    pub fn e(&self, i: usize) -> Option<&TangentVector> {
        self.frame.get(i - 1)
    }

    pub fn eta(&self, i: usize) -> f64 {
        self.eta_e[i - 1]
    }

    pub fn is_marginal(&self) -> bool {
        !self.marginal.is_empty()
    }
}

pub fn frenet_apparatus(curve: &Curve, s: f64) -> Result<FrenetData> {
    frenet_apparatus_with(curve, s, DEFAULT_EPS_RANK)
}

pub fn frenet_apparatus_with(curve: &Curve, s: f64, eps_rank: f64) -> Result<FrenetData> {
    let ctx = AlongCurve::new(curve, s)?;
    let dim = ctx.dim();
    let cap = dim.min(MAX_ORDER);
    let t = ctx.tangent();
    let speed = ctx.norm(&t).value();
    if !speed.is_finite() {
        return Err(Error::NonFinite(format!("speed at s = {s}")));
    }
    if (speed - 1.0).abs() > UNIT_SPEED_TOL {
        return Err(Error::invalid(format!(
            "curve is not unit speed at s = {s}: |T| = {speed}"
        )));
    }

    let mut frame = vec![t];
    let mut ks: Vec<Jet4> = Vec::new();
    let mut marginal = Vec::new();
    // derivative of the last frame vector, kept for the closure check
    let mut last_derivative = None;
    while frame.len() < cap {
        let last = frame.last().unwrap();
        if last.order == 0 {
            break;
        }
        let d = ctx.covariant_derivative(last)?;
        // Gram-Schmidt against the frame so far, twice
        let mut v = d.clone();
        for _ in 0..2 {
            for e in &frame {
                let p = ctx.inner(&v, e);
                v = v.sub_scaled(p, e);
            }
        }
        let k2 = ctx.inner(&v, &v);
        let kv = k2.value().max(0.0).sqrt();
        if !kv.is_finite() {
            return Err(Error::NonFinite(format!("curvature at s = {s}")));
        }
        if kv <= eps_rank {
            last_derivative = Some(d);
            break;
        }
        let k = k2.sqrt().truncate(v.order);
        if kv < 10.0 * eps_rank {
            marginal.push(ks.len() + 1);
        }
        frame.push(v.div(k));
        ks.push(k);
    }
    let r = frame.len();

    let closure = match last_derivative {
        Some(d) => Some(closure_norm(&ctx, &d, &frame, &ks)),
        None => {
            let last = frame.last().unwrap();
            if r == dim && last.order > 0 {
                let d = ctx.covariant_derivative(last)?;
                Some(closure_norm(&ctx, &d, &frame, &ks))
            } else {
                None
            }
        }
    };

    let mut eta_e = [0.0; 4];
    for (i, e) in frame.iter().enumerate().take(4) {
        eta_e[i] = e.comps[0].value();
    }
    Ok(FrenetData {
        s,
        r,
        frame: frame.iter().map(|e| ctx.to_tangent(e)).collect(),
        curvatures: ks.iter().map(|k| k.value()).collect(),
        curvature_jets: ks,
        eta_e,
        marginal,
        closure,
        speed,
    })
}

fn closure_norm(ctx: &AlongCurve, d: &JetVector, frame: &[JetVector], ks: &[Jet4]) -> f64 {
    let r = frame.len();
    let mut v = d.clone();
    if r >= 2 {
        v = v.sub_scaled(-ks[r - 2], &frame[r - 2]);
    }
    let v = JetVector::new(v.comps, 0);
    ctx.norm(&v).value()
}
