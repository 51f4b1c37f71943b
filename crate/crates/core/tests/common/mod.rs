//! Random unit-speed curves in warped products with all three fiber kinds.
//!
//! Each curve is `γ(s) = (t(s), x(σ(s)))` where `(t, σ)` is a unit-speed
//! profile in `dt² + f(t)²dσ²` and `x` is a unit-speed curve of the fiber.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warpcurve::curvekit::{unit_speed_residual, Curve};
use warpcurve::expr::parse_in;
use warpcurve::geometry::{SpaceForm, WarpedProduct};

pub const SEED: u64 = 0x5eed_2024;

pub fn n(x: f64) -> String {
    format!("({x:?})")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberKind {
    Euclidean,
    Sphere,
    Hyperbolic,
}

pub const KINDS: [FiberKind; 3] = [
    FiberKind::Euclidean,
    FiberKind::Sphere,
    FiberKind::Hyperbolic,
];

#[derive(Debug, Clone)]
pub struct Sample {
    pub label: String,
    pub kind: FiberKind,
    pub curve: Curve,
}

struct Profile {
    warping: String,
    interval: (f64, f64),
    t: String,
    sigma: String,
    domain: (f64, f64),
    geodesic: bool,
    name: &'static str,
}

fn phase(rng: &mut ChaCha8Rng) -> String {
    format!("(s + {})", n(rng.gen_range(-0.3..0.3)))
}

fn slant(
    rng: &mut ChaCha8Rng,
    warping: &str,
    interval: (f64, f64),
    c0: f64,
    g: &dyn Fn(&str) -> String,
) -> Profile {
    let theta: f64 = rng.gen_range(0.3..1.3) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let th = if theta < 0.0 {
        std::f64::consts::PI + theta
    } else {
        theta
    };
    let t = format!("s*{} + {}", n(th.cos()), n(c0));
    let sigma = format!("{}*({})", n(th.tan()), g(&format!("({t})")));
    Profile {
        warping: warping.into(),
        interval,
        t,
        sigma,
        domain: (-0.4, 0.4),
        geodesic: false,
        name: "slant",
    }
}

fn profile(rng: &mut ChaCha8Rng) -> Profile {
    match rng.gen_range(0..10) {
        0 => {
            // straight line of the plane in polar coordinates
            let a: f64 = rng.gen_range(0.8..2.0);
            let s = phase(rng);
            Profile {
                warping: "t".into(),
                interval: (0.01, 50.0),
                t: format!("sqrt({}^2 + {s}^2)", n(a)),
                sigma: format!("atan({s}/{})", n(a)),
                domain: (-0.4, 0.4),
                geodesic: true,
                name: "polar-line",
            }
        }
        1 => {
            // off-centre circle of the plane in polar coordinates
            let d: f64 = rng.gen_range(2.0..3.0);
            let r: f64 = rng.gen_range(0.4..1.2);
            let s = phase(rng);
            let cs = format!("cos({s}/{})", n(r));
            let sn = format!("sin({s}/{})", n(r));
            Profile {
                warping: "t".into(),
                interval: (0.01, 50.0),
                t: format!("sqrt({} + {}*{cs})", n(d * d + r * r), n(2.0 * d * r)),
                sigma: format!("atan({}*{sn}/({} + {}*{cs}))", n(r), n(d), n(r)),
                domain: (-0.4, 0.4),
                geodesic: false,
                name: "polar-circle",
            }
        }
        2 => {
            // small circle of the round sphere in polar coordinates
            let alpha: f64 = rng.gen_range(-0.5..0.5);
            let rho: f64 = rng.gen_range(0.2..0.6);
            let w = 1.0 / rho.sin();
            let s = phase(rng);
            let cw = format!("cos({}*{s})", n(w));
            let sw = format!("sin({}*{s})", n(w));
            let px = format!(
                "({} - {}*{cw})",
                n(rho.cos() * alpha.cos()),
                n(rho.sin() * alpha.sin())
            );
            let py = format!("({}*{sw})", n(rho.sin()));
            let pz = format!(
                "({} + {}*{cw})",
                n(rho.cos() * alpha.sin()),
                n(rho.sin() * alpha.cos())
            );
            Profile {
                warping: "sin(t)".into(),
                interval: (0.0, std::f64::consts::PI),
                t: format!("acos({pz})"),
                sigma: format!("atan({py}/{px})"),
                domain: (-0.4, 0.4),
                geodesic: false,
                name: "sphere-circle",
            }
        }
        3 => {
            // geodesic of the hyperboloid in polar coordinates
            let d: f64 = rng.gen_range(1.0..1.5);
            let psi: f64 = rng.gen_range(0.9..1.4);
            let s = phase(rng);
            let (ch, sh) = (format!("cosh({s})"), format!("sinh({s})"));
            let p0 = format!("({}*{ch} + {}*{sh})", n(d.cosh()), n(d.sinh() * psi.cos()));
            let p1 = format!("({}*{ch} + {}*{sh})", n(d.sinh()), n(d.cosh() * psi.cos()));
            let p2 = format!("({}*{sh})", n(psi.sin()));
            Profile {
                warping: "sinh(t)".into(),
                interval: (0.001, 8.0),
                t: format!("log({p0} + sqrt({p0}^2 - 1))"),
                sigma: format!("atan({p2}/{p1})"),
                domain: (-0.4, 0.4),
                geodesic: true,
                name: "hyperboloid-geodesic",
            }
        }
        4 => {
            // semicircle of the upper half-plane, y = exp(-t)
            let r: f64 = rng.gen_range(0.5..2.0);
            let s = phase(rng);
            Profile {
                warping: "exp(t)".into(),
                interval: (-4.0, 4.0),
                t: format!("log(cosh({s})/{})", n(r)),
                sigma: format!("{}*tanh({s})", n(r)),
                domain: (-0.4, 0.4),
                geodesic: true,
                name: "half-plane-geodesic",
            }
        }
        5 => {
            let f: f64 = rng.gen_range(0.5..2.0);
            let r: f64 = rng.gen_range(0.5..1.5);
            let s = phase(rng);
            Profile {
                warping: n(f),
                interval: (-5.0, 5.0),
                t: format!("{}*cos({s}/{})", n(r), n(r)),
                sigma: format!("{}*sin({s}/{})", n(r / f), n(r)),
                domain: (-0.4, 0.4),
                geodesic: false,
                name: "flat-circle",
            }
        }
        6 => {
            let c0 = rng.gen_range(1.0..2.0);
            match rng.gen_range(0..3) {
                0 => slant(rng, "t", (0.01, 50.0), c0, &|t| format!("log({t})")),
                1 => slant(rng, "sin(t)", (0.0, std::f64::consts::PI), c0, &|t| {
                    format!("log(tan({t}/2))")
                }),
                _ => slant(rng, "sinh(t)", (0.001, 8.0), c0, &|t| {
                    format!("log(tanh({t}/2))")
                }),
            }
        }
        7 => {
            let c0 = rng.gen_range(-1.0..1.0);
            slant(rng, "exp(t)", (-4.0, 4.0), c0, &|t| format!("-exp(-{t})"))
        }
        8 => {
            let c0 = rng.gen_range(-1.0..1.0);
            if rng.gen_bool(0.5) {
                slant(rng, "cosh(t)", (-4.0, 4.0), c0, &|t| {
                    format!("atan(sinh({t}))")
                })
            } else {
                slant(rng, "1 + t^2", (-4.0, 4.0), c0, &|t| format!("atan({t})"))
            }
        }
        _ => {
            let f: f64 = rng.gen_range(0.5..2.0);
            let mut p = slant(rng, &n(f), (-5.0, 5.0), 0.0, &|t| format!("{t}/{}", n(f)));
            p.geodesic = true;
            p
        }
    }
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let l = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / l).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthogonal_unit(rng: &mut ChaCha8Rng, basis: &[Vec<f64>], dim: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for b in basis {
            let p = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        if dot(&v, &v) > 1e-2 {
            return unit(v);
        }
    }
}

/// Unit-speed fiber curve in `σ`; returns components and whether it is a geodesic.
fn fiber_curve(
    rng: &mut ChaCha8Rng,
    kind: FiberKind,
    dim: usize,
    c: f64,
    sigma: &str,
    avoid_geodesic: bool,
) -> (Vec<String>, &'static str) {
    match kind {
        FiberKind::Euclidean => {
            let r: f64 = rng.gen_range(0.3..1.5);
            let h: f64 = if dim >= 3 {
                rng.gen_range(0.0..1.0)
            } else {
                0.0
            };
            let l = (r * r + h * h).sqrt();
            let mut comps = vec![
                format!("{}*cos({sigma}/{})", n(r), n(l)),
                format!("{}*sin({sigma}/{})", n(r), n(l)),
            ];
            if dim >= 3 {
                comps.push(format!("{}*{sigma}", n(h / l)));
            }
            for _ in 3..dim {
                comps.push(n(rng.gen_range(-1.0..1.0)));
            }
            (comps, "helix")
        }
        FiberKind::Sphere => {
            let rho: f64 = rng.gen_range(0.2..0.8);
            let mut pole = vec![0.0; dim + 1];
            pole[dim] = 1.0;
            for x in pole.iter_mut().take(dim) {
                *x = rng.gen_range(-0.3..0.3);
            }
            let a = unit(pole);
            let e1 = orthogonal_unit(rng, std::slice::from_ref(&a), dim + 1);
            let e2 = orthogonal_unit(rng, &[a.clone(), e1.clone()], dim + 1);
            let w = 1.0 / rho.sin();
            let u = format!("({}*{sigma})", n(c.sqrt() * w));
            let xs: Vec<String> = (0..=dim)
                .map(|k| {
                    format!(
                        "({} + {}*cos({u}) + {}*sin({u}))",
                        n(rho.cos() * a[k]),
                        n(rho.sin() * e1[k]),
                        n(rho.sin() * e2[k])
                    )
                })
                .collect();
            let mut comps = Vec::with_capacity(dim);
            let mut used = String::from("1");
            for k in 0..dim - 1 {
                comps.push(format!("asin({}/sqrt({used}))", xs[k]));
                used = format!("{used} - {}^2", xs[k]);
            }
            comps.push(format!("atan({}/{})", xs[dim - 1], xs[dim]));
            (comps, "small-circle")
        }
        FiberKind::Hyperbolic => {
            let u = format!("({}*{sigma})", n((-c).sqrt()));
            let pick = if avoid_geodesic {
                rng.gen_range(1..3)
            } else {
                rng.gen_range(0..3)
            };
            let offsets: Vec<f64> = (0..dim - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
            match pick {
                0 => {
                    let r: f64 = rng.gen_range(0.5..2.0);
                    let dir = unit((0..dim - 1).map(|_| rng.gen_range(-1.0..1.0)).collect());
                    let mut comps: Vec<String> = (0..dim - 1)
                        .map(|i| format!("{} + {}*tanh({u})", n(offsets[i]), n(r * dir[i])))
                        .collect();
                    comps.push(format!("{}/cosh({u})", n(r)));
                    (comps, "geodesic")
                }
                1 => {
                    let h: f64 = rng.gen_range(0.5..2.0);
                    let dir = unit((0..dim - 1).map(|_| rng.gen_range(-1.0..1.0)).collect());
                    let mut comps: Vec<String> = (0..dim - 1)
                        .map(|i| format!("{} + {}*{u}", n(offsets[i]), n(h * dir[i])))
                        .collect();
                    comps.push(n(h));
                    (comps, "horocycle")
                }
                _ => {
                    let vn: f64 = rng.gen_range(0.3..0.9);
                    let dir = unit((0..dim - 1).map(|_| rng.gen_range(-1.0..1.0)).collect());
                    let horiz = (1.0 - vn * vn).sqrt();
                    let e = format!("exp({}*{u})", n(vn));
                    let mut comps: Vec<String> = (0..dim - 1)
                        .map(|i| format!("{} + {}*{e}", n(offsets[i]), n(horiz * dir[i])))
                        .collect();
                    comps.push(format!("{}*{e}", n(vn)));
                    (comps, "hypercycle")
                }
            }
        }
    }
}

fn fiber_space(kind: FiberKind, dim: usize, c: f64) -> SpaceForm {
    match kind {
        FiberKind::Euclidean => SpaceForm::euclidean(dim).unwrap(),
        FiberKind::Sphere => SpaceForm::sphere(dim, c).unwrap(),
        FiberKind::Hyperbolic => SpaceForm::hyperbolic(dim, c).unwrap(),
    }
}

/// One random candidate; `None` when it fails validation.
pub fn candidate(rng: &mut ChaCha8Rng, kind: FiberKind) -> Option<Sample> {
    let dim = rng.gen_range(2..=3);
    let c = match kind {
        FiberKind::Euclidean => 0.0,
        FiberKind::Sphere => {
            if rng.gen_bool(0.5) {
                1.0
            } else {
                rng.gen_range(0.5..2.0)
            }
        }
        FiberKind::Hyperbolic => rng.gen_range(-2.0..-0.5),
    };
    let p = profile(rng);
    let sigma = format!("({})", p.sigma);
    let (fiber_comps, fname) = fiber_curve(rng, kind, dim, c, &sigma, p.geodesic);
    let warping = parse_in(&p.warping, "t").ok()?;
    let wp = WarpedProduct::new(p.interval, warping, fiber_space(kind, dim, c)).ok()?;
    let mut comps = vec![p.t.clone()];
    comps.extend(fiber_comps);
    let curve = Curve::from_sources(wp, &comps, p.domain).ok()?;
    let grid = curve.grid(257);
    match unit_speed_residual(&curve, &grid) {
        Ok(r) if r < 1e-9 => {}
        _ => return None,
    }
    Some(Sample {
        label: format!(
            "{kind:?}(n={dim}, c={c:.3}) f={} {}/{fname}",
            p.warping, p.name
        ),
        kind,
        curve,
    })
}

/// `count` validated curves cycling through the fiber kinds, and the number
/// of rejected candidates.
pub fn corpus(seed: u64, count: usize) -> (Vec<Sample>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut rejected = 0;
    while out.len() < count {
        let kind = KINDS[out.len() % 3];
        match candidate(&mut rng, kind) {
            Some(s) => out.push(s),
            None => rejected += 1,
        }
        assert!(rejected < 10 * count, "corpus generator rejects too often");
    }
    (out, rejected)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
