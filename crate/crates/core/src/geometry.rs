//! Space forms and warped products `I ×_f Mⁿ(c)` with metric `dt² + f(t)² g`.
//!
//! Coordinates are `(t, x₁, .., xₙ)`; index 0 is always the base direction
//! `∂_t`. Fiber charts:
//!
//! * euclidean (`c = 0`): Cartesian coordinates, `g = δ`.
//! * spherical (`c > 0`): `g_ii = Π_{j<i} cos² x_j`, valid for `|x_j| < π/2`
//!   when `j < n` (for `n = 2` this is `dx₁² + cos²x₁ dx₂²`).
//! * half-space (`c < 0`): `g_ij = δ_ij / xₙ²`, valid for `xₙ > 0`.
//!
//! The curved charts are scaled by `1/|c|`, which leaves the Christoffel
//! symbols unchanged and gives sectional curvature exactly `c`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::expr::{eval_jet, Expr};
use crate::jet::Jet4;

/// Number of samples used to check that the warping function does not vanish.
pub const WARPING_CHECK_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Euclidean,
    Spherical,
    HalfSpace,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::Euclidean => "euclidean",
            Chart::Spherical => "sphere",
            Chart::HalfSpace => "hyperbolic",
        }
    }
}

/// Simply connected space form `Mⁿ(c)` in one fixed chart.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceForm {
    n: usize,
    c: f64,
    chart: Chart,
}

impl SpaceForm {
    /// Picks the chart from the sign of `c`.
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!(
                "fiber dimension must be >= 2, got {n}"
            )));
        }
        if !c.is_finite() {
            return Err(Error::invalid("fiber curvature must be finite"));
        }
        let chart = if c > 0.0 {
            Chart::Spherical
        } else if c < 0.0 {
            Chart::HalfSpace
        } else {
            Chart::Euclidean
        };
        Ok(SpaceForm { n, c, chart })
    }

    /// Builds a space form and checks that `chart` agrees with the sign of `c`.
    pub fn with_chart(chart: Chart, n: usize, c: f64) -> Result<Self> {
        let sf = SpaceForm::new(n, c)?;
        if sf.chart != chart {
            return Err(Error::invalid(format!(
                "{} fiber requires {} curvature, got c = {c}",
                chart.name(),
                match chart {
                    Chart::Euclidean => "zero",
                    Chart::Spherical => "positive",
                    Chart::HalfSpace => "negative",
                }
            )));
        }
        Ok(sf)
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        SpaceForm::with_chart(Chart::Euclidean, n, 0.0)
    }

    pub fn sphere(n: usize, c: f64) -> Result<Self> {
        SpaceForm::with_chart(Chart::Spherical, n, c)
    }

    pub fn hyperbolic(n: usize, c: f64) -> Result<Self> {
        SpaceForm::with_chart(Chart::HalfSpace, n, c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// Constant factor multiplying the unit-model metric.
    pub fn scale(&self) -> f64 {
        if self.c == 0.0 {
            1.0
        } else {
            1.0 / self.c.abs()
        }
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::invalid(format!(
                "fiber point has {} coordinates, expected {}",
                x.len(),
                self.n
            )));
        }
        if let Some(v) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("fiber coordinate {v}")));
        }
        match self.chart {
            Chart::Euclidean => Ok(()),
            Chart::Spherical => {
                for (j, &xj) in x.iter().enumerate().take(self.n - 1) {
                    if xj.abs() >= FRAC_PI_2 {
                        return Err(Error::domain(format!("spherical chart x{}", j + 1), xj));
                    }
                }
                Ok(())
            }
            Chart::HalfSpace => {
                let last = x[self.n - 1];
                if last <= 0.0 {
                    Err(Error::domain(format!("half-space chart x{}", self.n), last))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Diagonal of the (scaled) fiber metric along a jet-valued point.
    pub fn metric_diag(&self, x: &[Jet4]) -> Vec<Jet4> {
        let scale = self.scale();
        match self.chart {
            Chart::Euclidean => vec![Jet4::constant(1.0); self.n],
            Chart::Spherical => {
                let mut out = Vec::with_capacity(self.n);
                let mut prod = Jet4::constant(scale);
                for xi in x.iter().take(self.n) {
                    out.push(prod);
                    let c = xi.cos();
                    prod = prod * c * c;
                }
                out
            }
            Chart::HalfSpace => {
                let last = x[self.n - 1];
                let g = (last * last).recip() * scale;
                vec![g; self.n]
            }
        }
    }

    /// Christoffel symbols `Γᵏ_ij` of the fiber chart along a jet-valued
    /// point, as an `n × n × n` table.
    pub fn christoffels(&self, x: &[Jet4]) -> Result<ChristoffelTable<Jet4>> {
        let vals: Vec<f64> = x.iter().map(|j| j.value()).collect();
        self.check_point(&vals)?;
        let n = self.n;
        let mut table = ChristoffelTable::zeros(n);
        match self.chart {
            Chart::Euclidean => {}
            Chart::Spherical => {
                let sin: Vec<Jet4> = x.iter().map(|v| v.sin()).collect();
                let cos: Vec<Jet4> = x.iter().map(|v| v.cos()).collect();
                let tan: Vec<Jet4> = x.iter().map(|v| v.tan()).collect();
                for i in 0..n {
                    for j in 0..i {
                        // Γ^i_{ij} = Γ^i_{ji} = -tan x_j
                        table.set_sym(i, i, j, -tan[j]);
                        // Γ^j_{ii} = sin x_j cos x_j Π_{j<l<i} cos² x_l
                        let mut v = sin[j] * cos[j];
                        for c in cos.iter().take(i).skip(j + 1) {
                            v = v * *c * *c;
                        }
                        table.set(j, i, i, v);
                    }
                }
            }
            Chart::HalfSpace => {
                let m = n - 1;
                let inv = x[m].recip();
                // Γ^k_ij = δ_ik φ_j + δ_jk φ_i - δ_ij φ_k with φ = -log x_n
                for i in 0..m {
                    table.set_sym(i, i, m, -inv);
                    table.set(m, i, i, inv);
                }
                table.set(m, m, m, -inv);
            }
        }
        Ok(table)
    }
}

/// Dense table of Christoffel symbols `Γᵏ_ij`, indexed `(k, i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelTable<T = f64> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Copy + Default> ChristoffelTable<T> {
    pub fn zeros(dim: usize) -> Self {
        ChristoffelTable {
            dim,
            data: vec![T::default(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> T {
        self.data[(k * self.dim + i) * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, k: usize, i: usize, j: usize, v: T) {
        let d = self.dim;
        self.data[(k * d + i) * d + j] = v;
    }

    /// Sets both `Γᵏ_ij` and `Γᵏ_ji`.
    pub fn set_sym(&mut self, k: usize, i: usize, j: usize, v: T) {
        self.set(k, i, j, v);
        self.set(k, j, i, v);
    }

    pub fn map<U: Copy + Default>(&self, f: impl Fn(T) -> U) -> ChristoffelTable<U> {
        ChristoffelTable {
            dim: self.dim,
            data: self.data.iter().map(|v| f(*v)).collect(),
        }
    }
}

/// A tangent vector in coordinates `(∂_t, ∂_{x₁}, .., ∂_{xₙ})` at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub point: Vec<f64>,
    pub comps: Vec<f64>,
}

impl TangentVector {
    pub fn new(point: Vec<f64>, comps: Vec<f64>) -> Self {
        TangentVector { point, comps }
    }

    /// The coordinate field `∂_k` at `point` (k = 0 is `∂_t`).
    pub fn coordinate(point: &[f64], k: usize) -> Self {
        let mut comps = vec![0.0; point.len()];
        comps[k] = 1.0;
        TangentVector {
            point: point.to_vec(),
            comps,
        }
    }

    pub fn zero(point: &[f64]) -> Self {
        TangentVector {
            point: point.to_vec(),
            comps: vec![0.0; point.len()],
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        TangentVector {
            point: self.point.clone(),
            comps: self.comps.iter().map(|v| v * k).collect(),
        }
    }

    /// Vertical part: the vector minus its `∂_t` component.
    pub fn vertical(&self) -> Self {
        let mut out = self.clone();
        out.comps[0] = 0.0;
        out
    }
}

/// `η(X) = g̃(X, ∂_t)`, which is the `∂_t` component since `∂_t` is unit and
/// orthogonal to the fiber.
pub fn eta(x: &TangentVector) -> f64 {
    x.comps[0]
}

/// Warping function composed along a curve: `f∘γ₀`, `f'∘γ₀`, `f''∘γ₀` as
/// jets in the curve parameter, valid to orders 4, 3 and 2 respectively.
#[derive(Debug, Clone, Copy)]
pub struct WarpingJets {
    pub f: Jet4,
    pub f1: Jet4,
    pub f2: Jet4,
}

impl WarpingJets {
    /// `B = f''/f − (f'/f)² + c/f²` at the base point.
    pub fn b(&self, c: f64) -> f64 {
        let (f, f1, f2) = (self.f.value(), self.f1.value(), self.f2.value());
        let q = f1 / f;
        f2 / f - q * q + c / (f * f)
    }

    /// `A = (f'/f)² − c/f²` at the base point.
    pub fn a(&self, c: f64) -> f64 {
        let (f, f1) = (self.f.value(), self.f1.value());
        let q = f1 / f;
        q * q - c / (f * f)
    }

    /// `f'/f` at the base point.
    pub fn log_derivative(&self) -> f64 {
        self.f1.value() / self.f.value()
    }
}

/// Metric and connection of the ambient space along a jet-valued point.
#[derive(Debug, Clone)]
pub struct AmbientJets {
    pub metric: Vec<Jet4>,
    pub gamma: ChristoffelTable<Jet4>,
    pub warping: WarpingJets,
}

/// The warped product `I ×_f Mⁿ(c)` with metric `dt² + f(t)² g`.
#[derive(Debug, Clone)]
pub struct WarpedProduct {
    interval: (f64, f64),
    warping: Expr,
    fiber: SpaceForm,
}

impl WarpedProduct {
    /// Validates the interval and checks `f ≠ 0` on a sampling grid.
    pub fn new(interval: (f64, f64), warping: Expr, fiber: SpaceForm) -> Result<Self> {
        let (a, b) = interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!(
                "interval ({a}, {b}) must be finite with a < b"
            )));
        }
        let m = WARPING_CHECK_POINTS;
        for i in 0..m {
            let t = a + (b - a) * (i as f64 + 0.5) / m as f64;
            let v = warping
                .eval(t)
                .map_err(|e| Error::invalid(format!("warping function fails at t = {t}: {e}")))?;
            if v == 0.0 {
                return Err(Error::invalid(format!(
                    "warping function vanishes at t = {t}"
                )));
            }
            if i > 0 {
                let prev = warping.eval(a + (b - a) * (i as f64 - 0.5) / m as f64)?;
                if prev.signum() != v.signum() {
                    return Err(Error::invalid(format!(
                        "warping function changes sign near t = {t}"
                    )));
                }
            }
        }
        Ok(WarpedProduct {
            interval,
            warping,
            fiber,
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn warping(&self) -> &Expr {
        &self.warping
    }

    pub fn fiber(&self) -> &SpaceForm {
        &self.fiber
    }

    /// Ambient dimension `n + 1`.
    pub fn dim(&self) -> usize {
        self.fiber.n + 1
    }

    pub fn c(&self) -> f64 {
        self.fiber.c
    }

    /// `f` and its first four derivatives at `t`.
    pub fn warping_jet(&self, t: f64) -> Result<Jet4> {
        let j = eval_jet(&self.warping, t)?;
        if j.value() == 0.0 {
            return Err(Error::domain("warping function", t));
        }
        Ok(j)
    }

    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::invalid(format!(
                "point has {} coordinates, expected {}",
                p.len(),
                self.dim()
            )));
        }
        let (a, b) = self.interval;
        if !(p[0] > a && p[0] < b) {
            return Err(Error::domain("base interval", p[0]));
        }
        self.fiber.check_point(&p[1..])
    }

    /// Metric, Christoffel symbols and warping jets along a jet-valued point.
    pub fn along(&self, p: &[Jet4]) -> Result<AmbientJets> {
        let vals: Vec<f64> = p.iter().map(|j| j.value()).collect();
        self.check_point(&vals)?;
        let dim = self.dim();
        let t = p[0];
        let fj = self.warping_jet(t.value())?;
        let warping = WarpingJets {
            f: Jet4::compose(&fj, &t),
            f1: Jet4::compose(&fj.derivative(), &t),
            f2: Jet4::compose(&fj.derivative().derivative(), &t),
        };
        let fiber_metric = self.fiber.metric_diag(&p[1..]);
        let ff = warping.f * warping.f;
        let mut metric = Vec::with_capacity(dim);
        metric.push(Jet4::constant(1.0));
        metric.extend(fiber_metric.iter().map(|g| ff * *g));

        let fiber_gamma = self.fiber.christoffels(&p[1..])?;
        let mut gamma = ChristoffelTable::zeros(dim);
        let ffp = warping.f * warping.f1;
        let logd = warping.f1 / warping.f;
        for i in 1..dim {
            // Γ̃ᵗ_ij = -f f' g_ij (diagonal fiber metric)
            gamma.set(0, i, i, -(ffp * fiber_metric[i - 1]));
            // Γ̃ᵏ_tk = Γ̃ᵏ_kt = f'/f
            gamma.set_sym(i, 0, i, logd);
            for j in 1..dim {
                for k in 1..dim {
                    gamma.set(k, i, j, fiber_gamma.get(k - 1, i - 1, j - 1));
                }
            }
        }
        let out = AmbientJets {
            metric,
            gamma,
            warping,
        };
        if out.metric.iter().all(|m| m.is_finite()) && out.gamma.data.iter().all(|g| g.is_finite())
        {
            Ok(out)
        } else {
            Err(Error::NonFinite(format!("ambient geometry at {vals:?}")))
        }
    }

    fn at_point(&self, p: &[f64]) -> Result<AmbientJets> {
        let jets: Vec<Jet4> = p.iter().map(|v| Jet4::constant(*v)).collect();
        self.along(&jets)
    }

    /// Diagonal of `g̃` at `p`.
    pub fn metric_diag(&self, p: &[f64]) -> Result<Vec<f64>> {
        Ok(self.at_point(p)?.metric.iter().map(|j| j.value()).collect())
    }

    /// `g̃(X, Y) = X₁Y₁ + f² g(X₂, Y₂)`.
    pub fn metric(&self, x: &TangentVector, y: &TangentVector) -> Result<f64> {
        same_base(x, y)?;
        let g = self.metric_diag(&x.point)?;
        Ok(dot(&g, &x.comps, &y.comps))
    }

    pub fn norm(&self, x: &TangentVector) -> Result<f64> {
        Ok(self.metric(x, x)?.max(0.0).sqrt())
    }

    /// Full Christoffel table of `g̃` at `p`.
    pub fn christoffels(&self, p: &[f64]) -> Result<ChristoffelTable<f64>> {
        Ok(self.at_point(p)?.gamma.map(|j| j.value()))
    }

    /// The curvature coefficients `(A, B)` at base coordinate `t`.
    pub fn curvature_coefficients(&self, t: f64) -> Result<(f64, f64)> {
        let fj = self.warping_jet(t)?;
        let w = WarpingJets {
            f: Jet4::constant(fj.d[0]),
            f1: Jet4::constant(fj.d[1]),
            f2: Jet4::constant(fj.d[2]),
        };
        Ok((w.a(self.c()), w.b(self.c())))
    }

    /// Closed-form curvature tensor
    /// `R̃(X,Y)Z = A[g̃(X,Z)Y − g̃(Y,Z)X]
    ///          + B[g̃(X,Z)η(Y)∂_t − g̃(Y,Z)η(X)∂_t − η(Y)η(Z)X + η(X)η(Z)Y]`.
    pub fn curvature(
        &self,
        x: &TangentVector,
        y: &TangentVector,
        z: &TangentVector,
    ) -> Result<TangentVector> {
        same_base(x, y)?;
        same_base(x, z)?;
        let g = self.metric_diag(&x.point)?;
        let (a, b) = self.curvature_coefficients(x.point[0])?;
        Ok(TangentVector::new(
            x.point.clone(),
            curvature_closed_form(&g, a, b, &x.comps, &y.comps, &z.comps),
        ))
    }
}

/// Closed-form curvature on raw components with a diagonal metric.
pub(crate) fn curvature_closed_form(
    g: &[f64],
    a: f64,
    b: f64,
    x: &[f64],
    y: &[f64],
    z: &[f64],
) -> Vec<f64> {
    let gxz = dot(g, x, z);
    let gyz = dot(g, y, z);
    let (ex, ey, ez) = (x[0], y[0], z[0]);
    let mut out: Vec<f64> = (0..x.len())
        .map(|k| a * (gxz * y[k] - gyz * x[k]) + b * (-ey * ez * x[k] + ex * ez * y[k]))
        .collect();
    out[0] += b * (gxz * ey - gyz * ex);
    out
}

pub(crate) fn dot(g: &[f64], x: &[f64], y: &[f64]) -> f64 {
    g.iter().zip(x).zip(y).map(|((g, a), b)| g * a * b).sum()
}

fn same_base(x: &TangentVector, y: &TangentVector) -> Result<()> {
    if x.point != y.point {
        return Err(Error::invalid("tangent vectors have different base points"));
    }
    if x.comps.len() != x.point.len() || y.comps.len() != y.point.len() {
        return Err(Error::invalid("tangent vector dimension mismatch"));
    }
    Ok(())
}
