//! Curves `γ(s) = (γ₀(s), γ₁(s), .., γₙ(s))` given by component expressions,
//! their tangent data and structural-angle classification.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::expr::{parse_in, Expr};
use crate::geometry::{TangentVector, WarpedProduct};
use crate::jet::Jet4;
use crate::DEFAULT_EPS_RANK;

/// A curve in a warped product, parametrised by `s` on an open interval.
#[derive(Debug, Clone)]
pub struct Curve {
    ambient: WarpedProduct,
    components: Vec<Expr>,
    domain: (f64, f64),
}

impl Curve {
    pub fn new(ambient: WarpedProduct, components: Vec<Expr>, domain: (f64, f64)) -> Result<Self> {
        if components.len() != ambient.dim() {
            return Err(Error::invalid(format!(
                "curve has {} components, ambient dimension is {}",
                components.len(),
                ambient.dim()
            )));
        }
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!(
                "curve domain ({a}, {b}) must be finite with a < b"
            )));
        }
        Ok(Curve {
            ambient,
            components,
            domain,
        })
    }

    /// Parses each component as an expression in `s`.
    pub fn from_sources<S: AsRef<str>>(
        ambient: WarpedProduct,
        sources: &[S],
        domain: (f64, f64),
    ) -> Result<Self> {
        let components = sources
            .iter()
            .map(|src| parse_in(src.as_ref(), "s"))
            .collect::<Result<Vec<_>>>()?;
        Curve::new(ambient, components, domain)
    }

    pub fn ambient(&self) -> &WarpedProduct {
        &self.ambient
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Position jets of every component at `s`, after checking that `γ(s)`
    /// lies in the ambient chart.
    pub fn jets(&self, s: f64) -> Result<Vec<Jet4>> {
        let jets = self
            .components
            .iter()
            .map(|c| c.eval_jet_at(&Jet4::variable(s)))
            .collect::<Result<Vec<_>>>()?;
        let p: Vec<f64> = jets.iter().map(|j| j.value()).collect();
        self.ambient.check_point(&p)?;
        Ok(jets)
    }

    pub fn position(&self, s: f64) -> Result<Vec<f64>> {
        let p = self
            .components
            .iter()
            .map(|c| c.eval(s))
            .collect::<Result<Vec<_>>>()?;
        self.ambient.check_point(&p)?;
        Ok(p)
    }

    /// The default analysis grid over this curve's domain.
    pub fn grid(&self, points: usize) -> Grid {
        Grid::for_domain(self.domain, points)
    }
}

/// Sample points in a curve parameter, in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(Vec<f64>);

impl Grid {
    pub const DEFAULT_POINTS: usize = 257;
    /// Fraction of the domain length removed at each end.
    pub const SHRINK: f64 = 0.01;

    /// `n` uniform samples of the closed interval `[a, b]`.
    pub fn uniform(a: f64, b: f64, n: usize) -> Self {
        match n {
            0 => Grid(Vec::new()),
            1 => Grid(vec![0.5 * (a + b)]),
            _ => Grid(
                (0..n)
                    .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                    .collect(),
            ),
        }
    }

    /// `n` uniform samples of `domain` with both ends pulled in by 1% of
    /// its length.
    pub fn for_domain(domain: (f64, f64), n: usize) -> Self {
        let (a, b) = domain;
        let pad = Grid::SHRINK * (b - a);
        Grid::uniform(a + pad, b - pad, n)
    }

    pub fn from_points(mut points: Vec<f64>) -> Self {
        points.sort_by(f64::total_cmp);
        Grid(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Tangent data of a curve at one parameter value.
#[derive(Debug, Clone)]
pub struct CurveState {
    pub s: f64,
    pub position: Vec<f64>,
    pub tangent: TangentVector,
    pub speed: f64,
    /// Structural angle, `cos θ = η(T)/‖T‖`, in `[0, π]`.
    pub theta: f64,
    /// `θ'`; `None` where `sin θ` is below the rank threshold.
    pub theta_prime: Option<f64>,
    /// Vertical part `W = T − η(T)∂_t`.
    pub vertical: TangentVector,
}

pub fn eval_state(curve: &Curve, s: f64) -> Result<CurveState> {
    eval_state_with(curve, s, DEFAULT_EPS_RANK)
}

pub fn eval_state_with(curve: &Curve, s: f64, eps_rank: f64) -> Result<CurveState> {
    let jets = curve.jets(s)?;
    let position: Vec<f64> = jets.iter().map(|j| j.value()).collect();
    let comps: Vec<f64> = jets.iter().map(|j| j.d[1]).collect();
    let metric = curve.ambient.along(&jets)?.metric;
    let speed2: f64 = metric
        .iter()
        .zip(&comps)
        .map(|(g, v)| g.value() * v * v)
        .sum();
    let speed = speed2.sqrt();
    if !speed.is_finite() || speed == 0.0 {
        return Err(Error::NonFinite(format!(
            "degenerate speed {speed} at s = {s}"
        )));
    }
    // η(T)/‖T‖ as a jet, so θ' comes from its derivative
    let speed_jet = jets
        .iter()
        .zip(&metric)
        .map(|(j, g)| {
            let v = j.derivative();
            *g * v * v
        })
        .sum::<Jet4>()
        .sqrt();
    let cos_jet = jets[0].derivative() / speed_jet;
    let cos_theta = (comps[0] / speed).clamp(-1.0, 1.0);
    let theta = cos_theta.acos();
    let sin_theta = theta.sin();
    let theta_prime = if sin_theta > eps_rank {
        Some(-cos_jet.d[1] / sin_theta)
    } else {
        None
    };
    let tangent = TangentVector::new(position.clone(), comps);
    let vertical = tangent.vertical();
    Ok(CurveState {
        s,
        position,
        tangent,
        speed,
        theta,
        theta_prime,
        vertical,
    })
}

/// `max |‖γ'(s)‖ − 1|` over the grid.
pub fn unit_speed_residual(curve: &Curve, grid: &Grid) -> Result<f64> {
    let mut worst = 0.0f64;
    for &s in grid.points() {
        let st = eval_state(curve, s)?;
        worst = worst.max((st.speed - 1.0).abs());
    }
    Ok(worst)
}

/// Structural-angle class of a curve over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    /// Integral curve of `±∂_t`.
    GeodesicAxis,
    /// `η(T) = 0`.
    Legendre,
    /// Constant structural angle, neither of the above.
    Slant(f64),
    General,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::GeodesicAxis => "geodesic-axis",
            Classification::Legendre => "legendre",
            Classification::Slant(_) => "slant",
            Classification::General => "general",
        }
    }

    pub fn is_slant(&self) -> bool {
        !matches!(self, Classification::General)
    }
}

pub fn classify(curve: &Curve, grid: &Grid, eps: f64) -> Result<Classification> {
    let states = grid
        .points()
        .iter()
        .map(|&s| eval_state(curve, s))
        .collect::<Result<Vec<_>>>()?;
    if states.is_empty() {
        return Err(Error::invalid("empty grid"));
    }
    let mean = states.iter().map(|st| st.theta).sum::<f64>() / states.len() as f64;
    let slant = states.iter().all(|st| (st.theta - mean).abs() < eps);
    if !slant {
        return Ok(Classification::General);
    }
    let cos_mean = mean.cos();
    if cos_mean.abs() < eps {
        return Ok(Classification::Legendre);
    }
    if cos_mean.abs() > 1.0 - eps {
        return Ok(Classification::GeodesicAxis);
    }
    // γ₀(s) = s cos θ + c₀ with c₀ fitted at the first sample
    let c0 = states[0].position[0] - states[0].s * cos_mean;
    let linear = states
        .iter()
        .all(|st| (st.position[0] - st.s * cos_mean - c0).abs() < eps.max(1e-9));
    if linear {
        Ok(Classification::Slant(mean.clamp(0.0, PI)))
    } else {
        Ok(Classification::General)
    }
}
