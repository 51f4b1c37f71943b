//! Inverse problems: warping functions carrying biharmonic helices, slant
//! curvature targets and loci of biharmonic Legendre circles.

use crate::curvekit::Grid;
use crate::error::{Error, Result};
use crate::expr::{eval_jet, parse_in, Expr};
use crate::geometry::WarpedProduct;
use crate::DEFAULT_EPS_RANK;

/// Points scanned for sign changes in [`find_case3_locus`].
pub const LOCUS_SCAN_POINTS: usize = 1024;
/// Bracket width at which bisection stops.
pub const BISECTION_TOL: f64 = 1e-12;
/// `sup |h|` below which the locus equation counts as an identity.
pub const IDENTITY_TOL: f64 = 1e-10;

/// The family `f(t) = √(c/K)·sin(√K·t + c₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpingSolution {
    /// `K = k₁² + k₂²`.
    pub k: f64,
    pub c0: f64,
    pub c: f64,
}

impl WarpingSolution {
    pub fn amplitude(&self) -> f64 {
        (self.c / self.k).sqrt()
    }

    pub fn frequency(&self) -> f64 {
        self.k.sqrt()
    }

    /// Human-readable form with the phase left symbolic.
    pub fn form(&self) -> String {
        let a = self.amplitude();
        let w = self.frequency();
        let amp = if is_one(a) {
            String::new()
        } else {
            format!("{}*", format_decimal(a, 10))
        };
        let freq = if is_one(w) {
            String::new()
        } else {
            format!("{}*", format_decimal(w, 10))
        };
        format!("f(t) = {amp}sin({freq}t + c0)")
    }

    /// The member of the family with this solution's `c₀`, as an expression in `t`.
    pub fn to_expr(&self) -> Result<Expr> {
        parse_in(
            &format!(
                "({:?})*sin(({:?})*t + ({:?}))",
                self.amplitude(),
                self.frequency(),
                self.c0
            ),
            "t",
        )
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.amplitude() * (self.frequency() * t + self.c0).sin()
    }

    /// Fixes `c₀` so that `f(t_star) = v`.
    pub fn pin_phase(&self, t_star: f64, v: f64) -> Result<WarpingSolution> {
        let a = self.amplitude();
        if v.abs() > a {
            return Err(Error::NoSolution(format!(
                "|{v}| exceeds the amplitude {a} of the family"
            )));
        }
        Ok(WarpingSolution {
            c0: (v / a).asin() - self.frequency() * t_star,
            ..*self
        })
    }
}

fn is_one(x: f64) -> bool {
    (x - 1.0).abs() < 1e-12
}

/// Fixed-point decimal with trailing zeros removed.
pub fn format_decimal(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// Warping functions admitting a biharmonic helix with curvatures `k1`, `k2`
/// in the `B = 0` branch. `None` when no global solution exists (`c ≤ 0`).
pub fn solve_case1_warping(k1: f64, k2: f64, c: f64) -> Result<Option<WarpingSolution>> {
    if !(k1.is_finite() && k2.is_finite() && c.is_finite()) || k1 < 0.0 || k2 < 0.0 {
        return Err(Error::invalid("curvatures must be finite and non-negative"));
    }
    let k = k1 * k1 + k2 * k2;
    if k == 0.0 {
        return Err(Error::invalid("k1 = k2 = 0 describes a geodesic"));
    }
    if c <= 0.0 {
        return Ok(None);
    }
    Ok(Some(WarpingSolution { k, c0: 0.0, c }))
}

/// Sup-norm residuals of `f'' + Kf = 0` and `ff'' − f'² + c = 0` over `grid`.
pub fn compatibility_residual(f: &Expr, k: f64, c: f64, grid: &Grid) -> Result<(f64, f64)> {
    let mut r1 = 0.0f64;
    let mut r2 = 0.0f64;
    for &t in grid.points() {
        let j = eval_jet(f, t)?;
        let (f0, f1, f2) = (j.d[0], j.d[1], j.d[2]);
        r1 = r1.max((f2 + k * f0).abs());
        r2 = r2.max((f0 * f2 - f1 * f1 + c).abs());
    }
    Ok((r1, r2))
}

/// `K = k₁² + k₂²` required of a biharmonic non-Legendre slant helix with
/// `f|_γ = c₁ csc θ`.
pub fn slant_curvature_target(c: f64, c1: f64, theta: f64) -> Result<f64> {
    let (sin, cos) = theta.sin_cos();
    if sin.abs() < DEFAULT_EPS_RANK || cos.abs() < DEFAULT_EPS_RANK {
        return Err(Error::invalid(format!(
            "theta = {theta} is not a non-Legendre slant angle"
        )));
    }
    if !(c1 > 0.0 && c1.is_finite()) {
        return Err(Error::invalid("c1 must be positive"));
    }
    if c <= 0.0 {
        return Err(Error::NoSolution("requires c > 0".to_string()));
    }
    Ok(c / (c1 * c1) * sin.powi(4))
}

/// A root of `ff'' + f'² = 0` with `−f''/f > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusPoint {
    pub t0: f64,
    /// `|f'/f|` at `t0`.
    pub k1: f64,
    /// `−sign(f'/f)`.
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Case3Locus {
    /// `ff'' + f'² ≡ 0` on the interval.
    Identically,
    Roots(Vec<LocusPoint>),
}

/// Roots of `h = ff'' + f'²` on the open interval, by sign-change bracketing
/// and bisection.
pub fn find_case3_locus(f: &Expr, interval: (f64, f64)) -> Result<Case3Locus> {
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid(format!(
            "interval ({a}, {b}) must be finite with a < b"
        )));
    }
    let h = |t: f64| -> Result<f64> {
        let j = eval_jet(f, t)?;
        if j.d[0] == 0.0 {
            return Err(Error::domain("warping function", t));
        }
        Ok(j.d[0] * j.d[2] + j.d[1] * j.d[1])
    };
    let n = LOCUS_SCAN_POINTS;
    let ts: Vec<f64> = (0..n)
        .map(|i| a + (b - a) * (i + 1) as f64 / (n + 1) as f64)
        .collect();
    let hs = ts.iter().map(|&t| h(t)).collect::<Result<Vec<_>>>()?;
    if hs.iter().all(|v| v.abs() < IDENTITY_TOL) {
        return Ok(Case3Locus::Identically);
    }
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..n {
        if hs[i] == 0.0 {
            roots.push(ts[i]);
        } else if i + 1 < n && hs[i + 1] != 0.0 && hs[i].signum() != hs[i + 1].signum() {
            roots.push(bisect(&h, ts[i], ts[i + 1], hs[i])?);
        }
    }
    let mut points = Vec::new();
    for t0 in roots {
        let j = eval_jet(f, t0)?;
        let (f0, f1, f2) = (j.d[0], j.d[1], j.d[2]);
        if -f2 / f0 > 0.0 {
            let q = f1 / f0;
            points.push(LocusPoint {
                t0,
                k1: q.abs(),
                eps: if q > 0.0 { -1.0 } else { 1.0 },
            });
        }
    }
    Ok(Case3Locus::Roots(points))
}

fn bisect(h: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, mut hlo: f64) -> Result<f64> {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let hm = h(mid)?;
        if hm == 0.0 {
            return Ok(mid);
        }
        if hm.signum() == hlo.signum() {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `|k₁² + k₂² − (c/f² − (f'/f)² − B cos²θ)|` at `t0`.
pub fn helix_curvature_residual(
    k1: f64,
    k2: f64,
    theta: f64,
    wp: &WarpedProduct,
    t0: f64,
) -> Result<f64> {
    let j = wp.warping_jet(t0)?;
    let (f, f1) = (j.d[0], j.d[1]);
    let (_, b) = wp.curvature_coefficients(t0)?;
    let q = f1 / f;
    let cos = theta.cos();
    Ok((k1 * k1 + k2 * k2 - (wp.c() / (f * f) - q * q - b * cos * cos)).abs())
}
