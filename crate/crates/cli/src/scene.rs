use std::path::Path;

use serde::Deserialize;
use warpcurve::curvekit::Curve;
use warpcurve::expr::parse_in;
use warpcurve::geometry::{Chart, SpaceForm, WarpedProduct};
use warpcurve::{AnalysisOptions, Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub manifold: Manifold,
    pub curve: CurveSpec,
    #[serde(default)]
    pub analysis: Analysis,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifold {
    pub interval: [f64; 2],
    pub warping: String,
    pub fiber: Fiber,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fiber {
    pub kind: FiberKind,
    pub n: usize,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberKind {
    Euclidean,
    Sphere,
    Hyperbolic,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub components: Vec<String>,
    pub domain: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Analysis {
    pub grid_points: usize,
    pub tol: f64,
    pub eps_rank: f64,
}

impl Default for Analysis {
    fn default() -> Self {
        let d = AnalysisOptions::default();
        Analysis {
            grid_points: d.grid_points,
            tol: d.tol,
            eps_rank: d.eps_rank,
        }
    }
}

impl Scene {
    pub fn load(path: &Path) -> Result<Scene> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
    }

    pub fn build(&self) -> Result<(Curve, AnalysisOptions)> {
        let m = &self.manifold;
        let chart = match m.fiber.kind {
            FiberKind::Euclidean => Chart::Euclidean,
            FiberKind::Sphere => Chart::Spherical,
            FiberKind::Hyperbolic => Chart::HalfSpace,
        };
        let fiber = SpaceForm::with_chart(chart, m.fiber.n, m.fiber.c)?;
        let warping = parse_in(&m.warping, "t")?;
        let wp = WarpedProduct::new((m.interval[0], m.interval[1]), warping, fiber)?;
        let curve = Curve::from_sources(
            wp,
            &self.curve.components,
            (self.curve.domain[0], self.curve.domain[1]),
        )?;
        let a = &self.analysis;
        if a.grid_points < 2 {
            return Err(Error::Invalid("grid_points must be at least 2".into()));
        }
        if !(a.tol > 0.0 && a.eps_rank > 0.0) {
            return Err(Error::Invalid("tol and eps_rank must be positive".into()));
        }
        Ok((
            curve,
            AnalysisOptions {
                grid_points: a.grid_points,
                tol: a.tol,
                eps_rank: a.eps_rank,
            },
        ))
    }
}
