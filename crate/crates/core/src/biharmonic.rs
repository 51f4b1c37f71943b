//! Bitension field `τ₂ = ∇_T³T + R̃(∇_T T, T)T`, the biharmonicity verdict
//! and its case analysis.

use std::fmt;

use crate::curvekit::{classify, eval_state_with, Classification, Curve, Grid};
use crate::error::{Error, Result};
use crate::frenet::{frenet_apparatus_with, AlongCurve, FrenetData};
use crate::geometry::{curvature_closed_form, TangentVector};
use crate::{AnalysisOptions, DEFAULT_EPS_RANK};

/// `τ₂` from three covariant derivatives of `T` and the closed-form curvature.
pub fn tau2_direct(curve: &Curve, s: f64) -> Result<TangentVector> {
    let ctx = AlongCurve::new(curve, s)?;
    let t = ctx.tangent();
    let d1 = ctx.covariant_derivative(&t)?;
    let d2 = ctx.covariant_derivative(&d1)?;
    let d3 = ctx.covariant_derivative(&d2)?;
    let g: Vec<f64> = ctx.ambient.metric.iter().map(|m| m.value()).collect();
    let w = &ctx.ambient.warping;
    let (a, b) = (w.a(ctx.c), w.b(ctx.c));
    let tv = t.values();
    let r = curvature_closed_form(&g, a, b, &d1.values(), &tv, &tv);
    let comps = d3.values().iter().zip(&r).map(|(x, y)| x + y).collect();
    Ok(TangentVector::new(ctx.point(), comps))
}

/// Coefficients of `τ₂` on `T, E₂, E₃, E₄` and `∂_t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tau2Frenet {
    pub t: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    pub dt: f64,
}

impl Tau2Frenet {
    pub fn max_abs(&self) -> f64 {
        [self.t, self.e2, self.e3, self.e4, self.dt]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Coefficients of `τ₂` in the Frenet frame, with `A`, `B` taken at `γ₀(s)`.
pub fn tau2_frenet(curve: &Curve, fd: &FrenetData) -> Result<Tau2Frenet> {
    if fd.r < 2 {
        return Ok(Tau2Frenet::default());
    }
    let wp = curve.ambient();
    let t0 = curve.position(fd.s)?[0];
    let (a, b) = wp.curvature_coefficients(t0)?;
    let k1j = fd.k_jet(1);
    let k2j = fd.k_jet(2);
    let (k1, k1p, k1pp) = (k1j.d[0], k1j.d[1], k1j.d[2]);
    let (k2, k2p) = (k2j.d[0], k2j.d[1]);
    let k3 = fd.k(3);
    let (et, e2) = (fd.eta(1), fd.eta(2));
    Ok(Tau2Frenet {
        t: -3.0 * k1 * k1p + k1 * b * et * e2,
        e2: k1pp - k1 * k1 * k1 - k1 * k2 * k2 + k1 * (-a - b * et * et),
        e3: 2.0 * k1p * k2 + k1 * k2p,
        e4: k1 * k2 * k3,
        dt: -k1 * b * e2,
    })
}

/// `τ₂` rebuilt from its Frenet coefficients.
pub fn assemble(fd: &FrenetData, c: &Tau2Frenet) -> TangentVector {
    let t = fd.e(1).expect("frame always holds T");
    let mut out = TangentVector::zero(&t.point);
    for (i, coef) in [c.t, c.e2, c.e3, c.e4].iter().enumerate() {
        if let Some(e) = fd.e(i + 1) {
            for (o, x) in out.comps.iter_mut().zip(&e.comps) {
                *o += coef * x;
            }
        }
    }
    out.comps[0] += c.dt;
    out
}

/// Residuals of the biharmonicity equations at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TheoremResiduals {
    /// `|3k₁k₁'|`.
    pub res_t: f64,
    /// `|k₁² + k₂² − (c/f² − (f'/f)² − B(η(T)² + η(E₂)²))|`.
    pub res_e2: f64,
    /// `|k₂' − Bη(E₂)η(E₃)|`.
    pub res_e3: f64,
    /// `|k₂k₃ − Bη(E₂)η(E₄)|`.
    pub res_e4: f64,
    /// Smallest of `|B|`, `|η(E₂)|` and the span residual of `∂_t`.
    pub res_dt: f64,
}

impl TheoremResiduals {
    pub fn max(&self) -> f64 {
        [
            self.res_t,
            self.res_e2,
            self.res_e3,
            self.res_e4,
            self.res_dt,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(*v))
    }

    fn max_with(&self, o: &TheoremResiduals) -> TheoremResiduals {
        TheoremResiduals {
            res_t: self.res_t.max(o.res_t),
            res_e2: self.res_e2.max(o.res_e2),
            res_e3: self.res_e3.max(o.res_e3),
            res_e4: self.res_e4.max(o.res_e4),
            res_dt: self.res_dt.max(o.res_dt),
        }
    }
}

/// Evaluates the first `m = min(r, 4)` equations, with `k_m = 0`.
pub fn theorem_residuals(curve: &Curve, fd: &FrenetData) -> Result<TheoremResiduals> {
    let t0 = curve.position(fd.s)?[0];
    let wp = curve.ambient();
    let fj = wp.warping_jet(t0)?;
    let (f, f1) = (fj.d[0], fj.d[1]);
    let (_, b) = wp.curvature_coefficients(t0)?;
    let c = wp.c();
    let m = fd.r.min(4);
    let k1j = fd.k_jet(1);
    let (et, e2, e3, e4) = (fd.eta(1), fd.eta(2), fd.eta(3), fd.eta(4));
    let mut res = TheoremResiduals {
        res_t: (3.0 * k1j.d[0] * k1j.d[1]).abs(),
        ..Default::default()
    };
    if m >= 2 {
        let k1 = fd.k(1);
        let k2 = if m >= 3 { fd.k(2) } else { 0.0 };
        let q = f1 / f;
        let rhs = c / (f * f) - q * q - b * (et * et + e2 * e2);
        res.res_e2 = (k1 * k1 + k2 * k2 - rhs).abs();
        res.res_dt = b.abs().min(e2.abs()).min(span_residual(curve, fd)?);
    }
    if m >= 3 {
        res.res_e3 = (fd.k_jet(2).d[1] - b * e2 * e3).abs();
    }
    if m >= 4 {
        res.res_e4 = (fd.k(2) * fd.k(3) - b * e2 * e4).abs();
    }
    Ok(res)
}

/// `‖∂_t − Σ η(Eᵢ)Eᵢ‖` over the frame present.
pub fn span_residual(curve: &Curve, fd: &FrenetData) -> Result<f64> {
    let t = fd.e(1).expect("frame always holds T");
    let mut v = TangentVector::coordinate(&t.point, 0);
    for e in &fd.frame {
        let h = e.comps[0];
        for (o, x) in v.comps.iter_mut().zip(&e.comps) {
            *o -= h * x;
        }
    }
    curve.ambient().norm(&v)
}

/// Which branches of condition (i) hold over the whole grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CaseTags {
    /// `B = 0` along the curve.
    pub i: bool,
    /// `η(E₂) = 0`.
    pub ii: bool,
    /// `|η(E₂)| = 1`, so `E₂ = ±∂_t`.
    pub iii: bool,
    /// None of the above, `∂_t ∈ sp{T, E₂, E₃, E₄}`.
    pub iv: bool,
}

impl CaseTags {
    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        for (on, name) in [
            (self.i, "I"),
            (self.ii, "II"),
            (self.iii, "III"),
            (self.iv, "IV"),
        ] {
            if on {
                v.push(name);
            }
        }
        v
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names().contains(&name)
    }
}

impl fmt::Display for CaseTags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(", "))
    }
}

/// Everything computed at one grid sample.
#[derive(Debug, Clone)]
pub struct SampleReport {
    pub s: f64,
    pub position: Vec<f64>,
    pub theta: f64,
    pub r: usize,
    pub k: [f64; 3],
    pub eta_e: [f64; 4],
    pub marginal: bool,
    pub tau2_coord: Vec<f64>,
    pub tau2_frenet: Tau2Frenet,
    pub norm: f64,
    /// `‖τ₂(direct) − assemble(τ₂(Frenet))‖`, measured where `r ≥ 2`.
    pub cross_check: Option<f64>,
    pub residuals: TheoremResiduals,
    pub b: f64,
    pub span_residual: f64,
    pub theta_evolution: f64,
}

#[derive(Debug, Clone)]
pub struct BiharmonicReport {
    pub samples: Vec<SampleReport>,
    pub tol: f64,
    pub sup_norm: f64,
    pub max_cross_check: f64,
    pub max_residuals: TheoremResiduals,
    pub case_tags: CaseTags,
    pub classification: Classification,
    /// `sup ‖τ₂‖ < tol`.
    pub verdict: bool,
    /// All equations of the theorem and condition (i) below `tol`.
    pub theorem_holds: bool,
}

impl BiharmonicReport {
    fn column<'a>(
        &'a self,
        f: impl Fn(&SampleReport) -> f64 + 'a,
    ) -> impl Iterator<Item = f64> + 'a {
        self.samples.iter().map(f)
    }

    pub fn k_stats(&self, i: usize) -> (f64, f64, f64) {
        let v: Vec<f64> = self.column(|s| s.k[i - 1]).collect();
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        (min, mean, max)
    }

    pub fn max_osculating_order(&self) -> usize {
        self.samples.iter().map(|s| s.r).max().unwrap_or(0)
    }

    pub fn sup_b(&self) -> f64 {
        self.column(|s| s.b.abs()).fold(0.0, f64::max)
    }

    pub fn max_theta_evolution(&self) -> f64 {
        self.column(|s| s.theta_evolution).fold(0.0, f64::max)
    }
}

pub fn verdict(curve: &Curve, grid: &Grid, tol: f64) -> Result<BiharmonicReport> {
    verdict_with(
        curve,
        grid,
        &AnalysisOptions {
            tol,
            ..AnalysisOptions::default()
        },
    )
}

pub fn verdict_with(
    curve: &Curve,
    grid: &Grid,
    opts: &AnalysisOptions,
) -> Result<BiharmonicReport> {
    if grid.is_empty() {
        return Err(Error::invalid("empty grid"));
    }
    let tol = opts.tol;
    let samples = grid
        .points()
        .iter()
        .map(|&s| sample(curve, s, opts.eps_rank))
        .collect::<Result<Vec<_>>>()?;

    let sup_norm = samples.iter().map(|x| x.norm).fold(0.0, f64::max);
    let max_cross_check = samples
        .iter()
        .filter_map(|x| x.cross_check)
        .fold(0.0, f64::max);
    let max_residuals = samples
        .iter()
        .fold(TheoremResiduals::default(), |m, x| m.max_with(&x.residuals));
    let sup = |f: &dyn Fn(&SampleReport) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    let inf =
        |f: &dyn Fn(&SampleReport) -> f64| samples.iter().map(f).fold(f64::INFINITY, f64::min);
    let mut case_tags = CaseTags {
        i: sup(&|x| x.b.abs()) < tol,
        ii: sup(&|x| x.eta_e[1].abs()) < tol,
        iii: inf(&|x| x.eta_e[1].abs()) > 1.0 - tol,
        iv: false,
    };
    case_tags.iv =
        !(case_tags.i || case_tags.ii || case_tags.iii) && sup(&|x| x.span_residual) < tol;
    let classification = classify(curve, grid, tol)?;
    Ok(BiharmonicReport {
        tol,
        sup_norm,
        max_cross_check,
        theorem_holds: max_residuals.max() < tol,
        max_residuals,
        case_tags,
        classification,
        verdict: sup_norm < tol,
        samples,
    })
}

fn sample(curve: &Curve, s: f64, eps_rank: f64) -> Result<SampleReport> {
    let state = eval_state_with(curve, s, eps_rank)?;
    let fd = frenet_apparatus_with(curve, s, eps_rank)?;
    let direct = tau2_direct(curve, s)?;
    let coeffs = tau2_frenet(curve, &fd)?;
    let cross_check = if fd.r >= 2 {
        let asm = assemble(&fd, &coeffs);
        let diff = TangentVector::new(
            direct.point.clone(),
            direct
                .comps
                .iter()
                .zip(&asm.comps)
                .map(|(a, b)| a - b)
                .collect(),
        );
        Some(curve.ambient().norm(&diff)?)
    } else {
        None
    };
    let norm = curve.ambient().norm(&direct)?;
    let (_, b) = curve.ambient().curvature_coefficients(state.position[0])?;
    let span = span_residual(curve, &fd)?;
    Ok(SampleReport {
        s,
        position: state.position.clone(),
        theta: state.theta,
        r: fd.r,
        k: [fd.k(1), fd.k(2), fd.k(3)],
        eta_e: fd.eta_e,
        marginal: fd.is_marginal(),
        tau2_coord: direct.comps,
        tau2_frenet: coeffs,
        norm,
        cross_check,
        residuals: theorem_residuals(curve, &fd)?,
        b,
        span_residual: span,
        theta_evolution: theta_evolution_from(curve, &fd)?,
    })
}

/// `|d/ds η(T) − k₁η(E₂) − (f'/f)(1 − η(T)²)|`.
pub fn theta_evolution_residual(curve: &Curve, s: f64) -> Result<f64> {
    let fd = frenet_apparatus_with(curve, s, DEFAULT_EPS_RANK)?;
    theta_evolution_from(curve, &fd)
}

fn theta_evolution_from(curve: &Curve, fd: &FrenetData) -> Result<f64> {
    let jets = curve.jets(fd.s)?;
    let deta = jets[0].d[2];
    let et = jets[0].d[1];
    let q = curve.ambient().warping_jet(jets[0].value())?;
    let logd = q.d[1] / q.d[0];
    Ok((deta - fd.k(1) * fd.eta(2) - logd * (1.0 - et * et)).abs())
}

/// Largest deviation of `f(γ₀)·sin θ` from its grid mean.
pub fn csc_profile_check(curve: &Curve, grid: &Grid) -> Result<f64> {
    let mut vals = Vec::with_capacity(grid.len());
    for &s in grid.points() {
        let st = eval_state_with(curve, s, DEFAULT_EPS_RANK)?;
        let (sin, cos) = st.theta.sin_cos();
        if cos.abs() < DEFAULT_EPS_RANK {
            return Err(Error::invalid(format!("curve is Legendre at s = {s}")));
        }
        if sin < DEFAULT_EPS_RANK {
            return Err(Error::invalid(format!("curve runs along ∂_t at s = {s}")));
        }
        let f = curve.ambient().warping().eval(st.position[0])?;
        vals.push(f * sin);
    }
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    Ok(vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max))
}

/// Residuals of the slant identity `k₁η(E₂) + (f'γ₀'/f)·sin²θ/cos θ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlantInvariant {
    /// Largest pointwise residual.
    pub pointwise: f64,
    /// Drift of `∫k₁η(E₂) ds + (sin²θ/cos θ) log|f(γ₀)|` by trapezoid rule.
    pub integral_drift: f64,
}

impl SlantInvariant {
    pub fn max(&self) -> f64 {
        self.pointwise.max(self.integral_drift)
    }
}

pub fn slant_invariant(curve: &Curve, grid: &Grid) -> Result<SlantInvariant> {
    let theta = match classify(curve, grid, 1e-7)? {
        Classification::Slant(theta) => theta,
        Classification::Legendre => return Err(Error::invalid("curve is Legendre")),
        Classification::GeodesicAxis => return Err(Error::invalid("curve runs along ∂_t")),
        Classification::General => return Err(Error::invalid("curve is not slant")),
    };
    let (sin, cos) = theta.sin_cos();
    let ratio = sin * sin / cos;
    let mut pointwise = 0.0f64;
    let mut integrand = Vec::with_capacity(grid.len());
    let mut logs = Vec::with_capacity(grid.len());
    for &s in grid.points() {
        let fd = frenet_apparatus_with(curve, s, DEFAULT_EPS_RANK)?;
        let jets = curve.jets(s)?;
        let fj = curve.ambient().warping_jet(jets[0].value())?;
        let ke = fd.k(1) * fd.eta(2);
        pointwise = pointwise.max((ke + fj.d[1] * jets[0].d[1] / fj.d[0] * ratio).abs());
        integrand.push(ke);
        logs.push(fj.d[0].abs().ln());
    }
    let pts = grid.points();
    let mut acc = 0.0;
    let start = logs[0] * ratio;
    let mut drift = 0.0f64;
    for i in 1..pts.len() {
        acc += 0.5 * (integrand[i] + integrand[i - 1]) * (pts[i] - pts[i - 1]);
        drift = drift.max((acc + ratio * logs[i] - start).abs());
    }
    Ok(SlantInvariant {
        pointwise,
        integral_drift: drift,
    })
}

/// Angles describing `∂_t` in the Frenet frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case4Angles {
    pub theta: f64,
    /// `None` when `sin θ` is below the rank threshold.
    pub w1: Option<f64>,
    pub w2: Option<f64>,
    /// Resolved `±`, the sign of `η(E₂)` (`+` at zero).
    pub sign: f64,
    pub span_residual: f64,
}

pub fn case4_angles(curve: &Curve, fd: &FrenetData) -> Result<Case4Angles> {
    if fd.r < 2 {
        return Err(Error::invalid(
            "case angles need osculating order at least 2",
        ));
    }
    let theta = fd.eta(1).clamp(-1.0, 1.0).acos();
    let sin = theta.sin();
    let sign = if fd.eta(2) < 0.0 { -1.0 } else { 1.0 };
    let span = span_residual(curve, fd)?;
    let (w1, w2) = if sin < DEFAULT_EPS_RANK {
        (None, None)
    } else {
        let w2 = (sign * fd.eta(3)).atan2(sign * fd.eta(2));
        let w1 = (sign * fd.eta(4) / sin).clamp(-1.0, 1.0).asin();
        (Some(w1), Some(w2))
    };
    Ok(Case4Angles {
        theta,
        w1,
        w2,
        sign,
        span_residual: span,
    })
}
