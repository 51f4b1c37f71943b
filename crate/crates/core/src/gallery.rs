//! Named curves with known answers, and a checker that runs the analysis on
//! them.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::fmt;

use crate::biharmonic::{verdict_with, BiharmonicReport, SampleReport};
use crate::curvekit::Curve;
use crate::error::{Error, Result};
use crate::expr::parse_in;
use crate::geometry::{SpaceForm, WarpedProduct};
use crate::AnalysisOptions;

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Published value.
    Reference,
    /// Immediate from the definitions.
    Immediate,
    /// Worked out by hand substitution.
    Derived,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Reference => "reference",
            Provenance::Immediate => "immediate",
            Provenance::Derived => "derived",
        }
    }
}

/// Per-sample quantities an expectation can pin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    K1,
    K2,
    K3,
    /// `k₁² + k₂²`.
    CurvatureSum,
    EtaE2,
    Tau2Norm,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::K1 => "k1",
            Quantity::K2 => "k2",
            Quantity::K3 => "k3",
            Quantity::CurvatureSum => "k1^2+k2^2",
            Quantity::EtaE2 => "eta(E2)",
            Quantity::Tau2Norm => "|tau2|",
        }
    }

    fn read(self, s: &SampleReport) -> f64 {
        match self {
            Quantity::K1 => s.k[0],
            Quantity::K2 => s.k[1],
            Quantity::K3 => s.k[2],
            Quantity::CurvatureSum => s.k[0] * s.k[0] + s.k[1] * s.k[1],
            Quantity::EtaE2 => s.eta_e[1],
            Quantity::Tau2Norm => s.norm,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    /// The quantity equals `value` within `tol` at every sample.
    Scalar {
        quantity: Quantity,
        value: f64,
        tol: f64,
    },
    Verdict(bool),
    Classification(&'static str),
    /// The case tag is among those reported.
    CaseTag(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub expected: Expected,
    pub provenance: Provenance,
}

impl Expectation {
    fn scalar(quantity: Quantity, value: f64, tol: f64, provenance: Provenance) -> Self {
        Expectation {
            expected: Expected::Scalar {
                quantity,
                value,
                tol,
            },
            provenance,
        }
    }

    fn new(expected: Expected, provenance: Provenance) -> Self {
        Expectation {
            expected,
            provenance,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: String,
    pub curve: Curve,
    pub expected: Vec<Expectation>,
}

impl GalleryEntry {
    pub fn ambient(&self) -> &WarpedProduct {
        self.curve.ambient()
    }
}

/// `I ×_{sin t} S²(1)` with `I = (0, π)`.
pub fn sin_s2() -> WarpedProduct {
    WarpedProduct::new(
        (0.0, PI),
        parse_in("sin(t)", "t").expect("literal warping parses"),
        SpaceForm::sphere(2, 1.0).expect("unit sphere"),
    )
    .expect("sin is positive on (0, pi)")
}

fn num(x: f64) -> String {
    format!("({x:?})")
}

/// `γ(s) = (±s + c₀, c₁, .., cₙ)`.
pub fn make_geodesic(
    wp: WarpedProduct,
    sign: f64,
    constants: &[f64],
    domain: (f64, f64),
) -> Result<GalleryEntry> {
    if constants.len() != wp.dim() {
        return Err(Error::invalid(format!(
            "geodesic needs {} constants, got {}",
            wp.dim(),
            constants.len()
        )));
    }
    let sign = if sign < 0.0 { -1.0 } else { 1.0 };
    let mut comps = vec![format!("{}*s + {}", num(sign), num(constants[0]))];
    comps.extend(constants[1..].iter().map(|c| num(*c)));
    let curve = Curve::from_sources(wp, &comps, domain)?;
    for s in [domain.0, domain.1] {
        curve.position(s)?;
    }
    let p = Provenance::Immediate;
    Ok(GalleryEntry {
        name: "geodesic".into(),
        curve,
        expected: vec![
            Expectation::scalar(Quantity::K1, 0.0, 1e-12, p),
            Expectation::scalar(Quantity::Tau2Norm, 0.0, 1e-12, p),
            Expectation::new(Expected::Verdict(true), p),
            Expectation::new(Expected::Classification("geodesic-axis"), p),
        ],
    })
}

/// The geodesic `(s + 0.3, 0.1, 0.2)` of `I ×_{sin t} S²(1)`.
pub fn default_geodesic() -> GalleryEntry {
    make_geodesic(sin_s2(), 1.0, &[0.3, 0.1, 0.2], (0.0, 2.5)).expect("inside the chart")
}

/// `(π/4, √2 s, π)` in `I ×_{sin t} S²(1)`.
pub fn example1() -> GalleryEntry {
    let curve = Curve::from_sources(sin_s2(), &["pi/4", "sqrt(2)*s", "pi"], (-1.0, 1.0))
        .expect("literal curve parses");
    let p = Provenance::Reference;
    GalleryEntry {
        name: "example1".into(),
        curve,
        expected: vec![
            Expectation::scalar(Quantity::K1, 1.0, 1e-9, p),
            Expectation::scalar(Quantity::K2, 0.0, 1e-8, p),
            Expectation::scalar(Quantity::EtaE2, -1.0, 1e-9, p),
            Expectation::scalar(Quantity::Tau2Norm, 0.0, 1e-8, p),
            Expectation::new(Expected::Verdict(true), p),
            Expectation::new(Expected::Classification("legendre"), p),
            Expectation::new(Expected::CaseTag("I"), Provenance::Derived),
            Expectation::new(Expected::CaseTag("III"), p),
        ],
    }
}

/// Safe parameter range for [`example2`].
pub fn example2_domain(u: f64) -> Result<(f64, f64)> {
    let a = u.cos();
    if a.abs() < 1e-9 {
        return Err(Error::invalid(format!(
            "u = {u} puts the curve on the chart boundary"
        )));
    }
    let scale = FRAC_PI_6.cos() / a.abs();
    Ok((0.3 * scale, 1.2 * scale))
}

/// The helix with `a = cos u`, `b = sin u` in `I ×_{sin t} S²(1)`.
pub fn example2(u: f64) -> Result<GalleryEntry> {
    let domain = example2_domain(u)?;
    let (a, b) = (num(u.cos()), num(u.sin()));
    let cc = format!("cos({a}*s)*cos({b}*s)");
    let comps = [
        format!("acos({cc})"),
        format!("asin(cos({a}*s)*sin({b}*s)/sqrt(1 - ({cc})^2))"),
        format!("{b}*s"),
    ];
    let curve = Curve::from_sources(sin_s2(), &comps, domain)?;
    let p = Provenance::Reference;
    let tol = 1e-6;
    Ok(GalleryEntry {
        name: format!("example2:u={u}"),
        curve,
        expected: vec![
            Expectation::scalar(Quantity::K1, (2.0 * u).sin().abs(), tol, p),
            Expectation::scalar(Quantity::K2, (2.0 * u).cos().abs(), tol, p),
            Expectation::scalar(Quantity::K3, 0.0, tol, p),
            Expectation::scalar(Quantity::CurvatureSum, 1.0, tol, p),
            Expectation::new(Expected::Verdict(true), p),
            Expectation::new(Expected::CaseTag("I"), p),
        ],
    })
}

/// `(t₀, s/sin t₀, π)` in `I ×_{sin t} S²(1)`.
pub fn latitude_circle(t0: f64) -> Result<GalleryEntry> {
    if !(t0 > 0.0 && t0 < PI) {
        return Err(Error::domain("base interval", t0));
    }
    let st = t0.sin();
    let comps = [num(t0), format!("s/{}", num(st)), "pi".to_string()];
    let curve = Curve::from_sources(sin_s2(), &comps, (-0.7 * st, 0.7 * st))?;
    let cot = t0.cos() / st;
    let k1 = cot.abs();
    let norm = k1 * (1.0 - k1 * k1).abs();
    let d = Provenance::Derived;
    let mut expected = vec![
        Expectation::scalar(Quantity::K1, k1, 1e-8, d),
        Expectation::scalar(Quantity::Tau2Norm, norm, 1e-6, d),
        Expectation::new(Expected::Verdict(norm < 1e-9), d),
        Expectation::new(Expected::Classification("legendre"), Provenance::Immediate),
        Expectation::new(Expected::CaseTag("I"), d),
    ];
    if k1 > 1e-6 {
        expected.push(Expectation::scalar(Quantity::EtaE2, -cot.signum(), 1e-9, d));
        expected.push(Expectation::new(Expected::CaseTag("III"), d));
    }
    Ok(GalleryEntry {
        name: format!("latitude:t0={t0}"),
        curve,
        expected,
    })
}

/// `(s cos θ, π/2 − ρ, ωs)` in `I ×_F S²(c)` with constant `F`: a slant helix
/// over a small circle of angular radius `ρ`.
pub fn slant_helix(f: f64, c: f64, theta: f64, rho: f64) -> Result<GalleryEntry> {
    if !(f > 0.0 && c > 0.0) {
        return Err(Error::invalid("slant helix needs F > 0 and c > 0"));
    }
    if !(rho > 0.0 && rho < PI) {
        return Err(Error::invalid(format!("rho = {rho} must lie in (0, pi)")));
    }
    let (sin, cos) = theta.sin_cos();
    if sin.abs() < 1e-9 || cos.abs() < 1e-9 {
        return Err(Error::invalid(format!(
            "theta = {theta} is not a non-Legendre slant angle"
        )));
    }
    let wp = WarpedProduct::new(
        (-2.0, 2.0),
        parse_in(&num(f), "t")?,
        SpaceForm::sphere(2, c)?,
    )?;
    let omega = sin * c.sqrt() / (f * rho.sin());
    let comps = [
        format!("{}*s", num(cos)),
        num(FRAC_PI_2 - rho),
        format!("{}*s", num(omega)),
    ];
    let curve = Curve::from_sources(wp, &comps, (-1.0, 1.0))?;
    let kappa = c.sqrt() * (rho.cos() / rho.sin()).abs() / f;
    let k1 = kappa * sin * sin;
    let k2 = kappa * (sin * cos).abs();
    let d = Provenance::Derived;
    let biharmonic = (kappa * kappa - c / (f * f)).abs() < 1e-12;
    let mut expected = vec![
        Expectation::scalar(Quantity::K1, k1, 1e-8, d),
        Expectation::new(Expected::Verdict(biharmonic), d),
        Expectation::new(Expected::Classification("slant"), d),
    ];
    if k1 > 1e-6 {
        expected.push(Expectation::scalar(Quantity::K2, k2, 1e-8, d));
        expected.push(Expectation::scalar(Quantity::EtaE2, 0.0, 1e-9, d));
        expected.push(Expectation::new(Expected::CaseTag("II"), d));
    }
    Ok(GalleryEntry {
        name: format!("slant-helix:theta={theta},rho={rho}"),
        curve,
        expected,
    })
}

/// Every built-in entry used by the test suites.
pub fn standard() -> Vec<GalleryEntry> {
    let mut out = vec![
        default_geodesic(),
        make_geodesic(sin_s2(), -1.0, &[1.0, 0.0, 0.0], (-1.5, 0.9)).expect("inside the chart"),
        example1(),
    ];
    for u in [FRAC_PI_6, PI / 5.0, 1.0, FRAC_PI_4] {
        out.push(example2(u).expect("u away from the boundary"));
    }
    for t0 in [FRAC_PI_3, FRAC_PI_4, FRAC_PI_2, 2.0 * FRAC_PI_3] {
        out.push(latitude_circle(t0).expect("t0 inside (0, pi)"));
    }
    out.push(slant_helix(1.0, 1.0, FRAC_PI_3, FRAC_PI_4).expect("valid parameters"));
    out.push(slant_helix(2.0, 1.0, FRAC_PI_6, 0.6).expect("valid parameters"));
    out
}

/// Resolves `geodesic`, `example1`, `example2:u=<v>`, `latitude:t0=<v>` and
/// `slant-helix:theta=<v>,rho=<v>`.
pub fn from_selector(selector: &str) -> Result<GalleryEntry> {
    let (name, args) = match selector.split_once(':') {
        Some((n, a)) => (n.trim(), parse_args(a)?),
        None => (selector.trim(), Vec::new()),
    };
    let get = |key: &str| -> Result<f64> {
        args.iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::invalid(format!("selector `{selector}` needs {key}=<value>")))
    };
    let expect_keys = |keys: &[&str]| -> Result<()> {
        match args.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
            Some((k, _)) => Err(Error::invalid(format!(
                "unknown parameter `{k}` in `{selector}`"
            ))),
            None => Ok(()),
        }
    };
    match name {
        "geodesic" => {
            expect_keys(&[])?;
            Ok(default_geodesic())
        }
        "example1" => {
            expect_keys(&[])?;
            Ok(example1())
        }
        "example2" => {
            expect_keys(&["u"])?;
            example2(get("u")?)
        }
        "latitude" => {
            expect_keys(&["t0"])?;
            latitude_circle(get("t0")?)
        }
        "slant-helix" => {
            expect_keys(&["theta", "rho"])?;
            slant_helix(1.0, 1.0, get("theta")?, get("rho")?)
        }
        _ => Err(Error::invalid(format!("unknown gallery entry `{name}`"))),
    }
}

fn parse_args(src: &str) -> Result<Vec<(String, f64)>> {
    src.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("expected key=value, got `{kv}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("`{v}` is not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// One checked expectation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub label: String,
    pub provenance: Provenance,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<16} expected {:<24} got {:<24} [{}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.label,
            self.expected,
            self.actual,
            self.provenance.tag()
        )
    }
}

#[derive(Debug, Clone)]
pub struct Verification {
    pub report: BiharmonicReport,
    pub outcomes: Vec<Outcome>,
}

impl Verification {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

/// Runs the analysis on `entry` and compares every expectation.
pub fn verify(entry: &GalleryEntry, opts: &AnalysisOptions) -> Result<Verification> {
    let grid = entry.curve.grid(opts.grid_points);
    let report = verdict_with(&entry.curve, &grid, opts)?;
    let outcomes = entry.expected.iter().map(|e| check(e, &report)).collect();
    Ok(Verification { report, outcomes })
}

fn check(e: &Expectation, report: &BiharmonicReport) -> Outcome {
    let (label, expected, actual, pass) = match &e.expected {
        Expected::Scalar {
            quantity,
            value,
            tol,
        } => {
            let mut worst = 0.0f64;
            let mut at = *value;
            for s in &report.samples {
                let v = quantity.read(s);
                let dev = (v - value).abs();
                if !(dev <= worst) {
                    worst = dev;
                    at = v;
                }
            }
            (
                quantity.name().to_string(),
                format!("{value:.10} ± {tol:.0e}"),
                format!("{at:.10}"),
                worst < *tol,
            )
        }
        Expected::Verdict(v) => (
            "verdict".to_string(),
            v.to_string(),
            report.verdict.to_string(),
            *v == report.verdict,
        ),
        Expected::Classification(c) => (
            "classification".to_string(),
            c.to_string(),
            report.classification.name().to_string(),
            *c == report.classification.name(),
        ),
        Expected::CaseTag(t) => (
            "case tag".to_string(),
            format!("contains {t}"),
            report.case_tags.to_string(),
            report.case_tags.contains(t),
        ),
    };
    Outcome {
        label,
        provenance: e.provenance,
        expected,
        actual,
        pass,
    }
}
