//! End-to-end acceptance checks, one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::Rng;
use warpcurve::biharmonic::{verdict, verdict_with};
use warpcurve::curvekit::{eval_state, unit_speed_residual, Grid};
use warpcurve::expr::parse_in;
use warpcurve::gallery::{self, GalleryEntry};
use warpcurve::geometry::{Chart, SpaceForm, TangentVector, WarpedProduct};
use warpcurve::solver::{
    compatibility_residual, find_case3_locus, solve_case1_warping, Case3Locus,
};
use warpcurve::AnalysisOptions;

const TOL: f64 = 1e-7;

static FAILURES: AtomicUsize = AtomicUsize::new(0);

fn line(id: u32, name: &str, pass: bool, detail: String) {
    println!(
        "[{}] {id} {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    if !pass {
        FAILURES.fetch_add(1, Ordering::Relaxed);
    }
}

fn max_over(
    rep: &warpcurve::biharmonic::BiharmonicReport,
    f: impl Fn(&warpcurve::biharmonic::SampleReport) -> f64,
) -> f64 {
    rep.samples.iter().map(f).fold(0.0, f64::max)
}

fn a1_legendre_circle_at_quarter_pi() {
    let start = Instant::now();
    let e = gallery::example1();
    let rep = verdict(&e.curve, &e.curve.grid(257), TOL).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let k1 = max_over(&rep, |s| (s.k[0] - 1.0).abs());
    let k2 = max_over(&rep, |s| s.k[1].abs());
    let eta = max_over(&rep, |s| (s.eta_e[1] + 1.0).abs());
    let pass = k1 < 1e-9
        && k2 < 1e-8
        && eta < 1e-9
        && rep.sup_norm < 1e-8
        && rep.verdict
        && rep.case_tags.iii
        && elapsed < 1.0;
    line(
        1,
        "circle (pi/4, sqrt2 s, pi)",
        pass,
        format!(
            "|k1-1|={k1:.1e} |k2|={k2:.1e} |eta(E2)+1|={eta:.1e} sup|tau2|={:.1e} verdict={} tags={} time={elapsed:.3}s",
            rep.sup_norm, rep.verdict, rep.case_tags
        ),
    );
}

fn a2_unit_helices() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for u in [FRAC_PI_6, PI / 5.0, 1.0] {
        let e = gallery::example2(u).unwrap();
        let grid = e.curve.grid(257);
        let speed = unit_speed_residual(&e.curve, &grid).unwrap();
        let rep = verdict(&e.curve, &grid, TOL).unwrap();
        let (k1e, k2e) = ((2.0 * u).sin().abs(), (2.0 * u).cos().abs());
        let d1 = max_over(&rep, |s| (s.k[0] - k1e).abs());
        let d2 = max_over(&rep, |s| (s.k[1] - k2e).abs());
        let d3 = max_over(&rep, |s| s.k[2].abs());
        let ds = max_over(&rep, |s| (s.k[0] * s.k[0] + s.k[1] * s.k[1] - 1.0).abs());
        pass &= speed < 1e-7 && d1 < 1e-6 && d2 < 1e-6 && d3 < 1e-6 && ds < 1e-6 && rep.verdict;
        detail.push(format!(
            "u={u:.4}: speed={speed:.1e} dk1={d1:.1e} dk2={d2:.1e} k3={d3:.1e} dsum={ds:.1e} verdict={}",
            rep.verdict
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 5.0;
    line(
        2,
        "unit helices",
        pass,
        format!("{} time={elapsed:.3}s", detail.join("; ")),
    );
}

fn a3_latitude_negative_control() {
    let e = gallery::latitude_circle(FRAC_PI_3).unwrap();
    let rep = verdict(&e.curve, &e.curve.grid(257), TOL).unwrap();
    let k1 = max_over(&rep, |s| (s.k[0] - 1.0 / 3f64.sqrt()).abs());
    let want = 2.0 / (3.0 * 3f64.sqrt());
    let pass = k1 < 1e-8 && (rep.sup_norm - want).abs() < 1e-6 && !rep.verdict;
    line(
        3,
        "latitude t0 = pi/3",
        pass,
        format!(
            "|k1-1/sqrt3|={k1:.1e} sup|tau2|={:.8} (want {want:.8}) verdict={}",
            rep.sup_norm, rep.verdict
        ),
    );
}

fn a4_legendre_locus() {
    let sin = parse_in("sin(t)", "t").unwrap();
    let roots = find_case3_locus(&sin, (0.0, FRAC_PI_2)).unwrap();
    let sin_ok = match &roots {
        Case3Locus::Roots(r) => r.len() == 1 && (r[0].t0 - FRAC_PI_4).abs() < 1e-10,
        Case3Locus::Identically => false,
    };
    let sq = find_case3_locus(&parse_in("sqrt(2*t + 1)", "t").unwrap(), (0.0, 2.0)).unwrap();
    let ex = find_case3_locus(&parse_in("exp(t)", "t").unwrap(), (0.0, 2.0)).unwrap();
    let pass = sin_ok && sq == Case3Locus::Identically && ex == Case3Locus::Roots(vec![]);
    line(
        4,
        "legendre circle locus",
        pass,
        format!("sin: {roots:?}; sqrt(2t+1): {sq:?}; exp: {ex:?}"),
    );
}

fn a5_helix_warping_round_trip() {
    let mut rng = common::rng(common::SEED ^ 5);
    let mut worst = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let k: f64 = rng.gen_range(0.1..10.0);
        let phi: f64 = rng.gen_range(0.0..FRAC_PI_2);
        let (k1, k2) = (k.sqrt() * phi.cos(), k.sqrt() * phi.sin());
        let sol = solve_case1_warping(k1, k2, 1.0)
            .unwrap()
            .expect("c > 0 has a solution");
        let f = sol.to_expr().unwrap();
        let grid = Grid::for_domain((0.0, PI / sol.frequency()), 257);
        let (r1, r2) = compatibility_residual(&f, k1 * k1 + k2 * k2, 1.0, &grid).unwrap();
        worst = (worst.0.max(r1), worst.1.max(r2));
    }
    let none0 = solve_case1_warping(1.0, 0.5, 0.0).unwrap().is_none();
    let none1 = solve_case1_warping(1.0, 0.5, -1.0).unwrap().is_none();
    let pass = worst.0 < 1e-10 && worst.1 < 1e-10 && none0 && none1;
    line(
        5,
        "helix warping round trip",
        pass,
        format!(
            "max ode residuals ({:.1e}, {:.1e}) over 20 K; c=0 none={none0}; c=-1 none={none1}",
            worst.0, worst.1
        ),
    );
}

fn a6_tau2_two_ways() {
    let (samples, rejected) = common::corpus(common::SEED, 50);
    let mut worst = 0.0f64;
    let mut counted = 0usize;
    let mut kinds = [0usize; 3];
    for smp in &samples {
        let rep = verdict_with(
            &smp.curve,
            &smp.curve.grid(257),
            &AnalysisOptions::default(),
        )
        .unwrap();
        for s in &rep.samples {
            if let Some(c) = s.cross_check {
                worst = worst.max(c);
                counted += 1;
            }
        }
        kinds[common::KINDS.iter().position(|k| *k == smp.kind).unwrap()] += 1;
    }
    let pass = samples.len() == 50 && worst < 1e-6 && counted > 0 && kinds.iter().all(|k| *k > 0);
    line(
        6,
        "tau2 direct vs frame",
        pass,
        format!(
            "{} curves (euclidean/sphere/hyperbolic = {:?}, {rejected} rejected), {counted} samples with r >= 2, max deviation {worst:.2e}",
            samples.len(),
            kinds
        ),
    );
}

struct GeoStats {
    antisym: f64,
    bianchi: f64,
    pair: f64,
    compat: f64,
    christoffel: f64,
}

fn random_ambient(rng: &mut rand_chacha::ChaCha8Rng, chart: Chart) -> WarpedProduct {
    let n = rng.gen_range(2..=4);
    let c = match chart {
        Chart::Euclidean => 0.0,
        Chart::Spherical => rng.gen_range(0.3..2.0),
        Chart::HalfSpace => -rng.gen_range(0.3..2.0),
    };
    let warpings = [
        "sin(t)",
        "t",
        "exp(t)",
        "cosh(t)",
        "1 + t^2",
        "2 + sin(3*t)",
    ];
    let w = warpings[rng.gen_range(0..warpings.len())];
    WarpedProduct::new(
        (0.2, 2.8),
        parse_in(w, "t").unwrap(),
        SpaceForm::with_chart(chart, n, c).unwrap(),
    )
    .unwrap()
}

fn random_point(rng: &mut rand_chacha::ChaCha8Rng, wp: &WarpedProduct) -> Vec<f64> {
    let n = wp.dim() - 1;
    let mut p = vec![rng.gen_range(0.3..2.7)];
    for i in 0..n {
        let v = match wp.fiber().chart() {
            Chart::HalfSpace if i == n - 1 => rng.gen_range(0.5..2.0),
            Chart::Spherical if i < n - 1 => rng.gen_range(-1.2..1.2),
            _ => rng.gen_range(-2.0..2.0),
        };
        p.push(v);
    }
    p
}

fn random_vector(rng: &mut rand_chacha::ChaCha8Rng, p: &[f64]) -> TangentVector {
    TangentVector::new(
        p.to_vec(),
        p.iter().map(|_| rng.gen_range(-1.0..1.0)).collect(),
    )
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn geometry_checks(chart: Chart, points: usize, seed: u64) -> GeoStats {
    let mut rng = common::rng(seed);
    let mut st = GeoStats {
        antisym: 0.0,
        bianchi: 0.0,
        pair: 0.0,
        compat: 0.0,
        christoffel: 0.0,
    };
    let h = 1e-5;
    for _ in 0..points {
        let wp = random_ambient(&mut rng, chart);
        let p = random_point(&mut rng, &wp);
        let dim = wp.dim();
        let (x, y, z, w) = (
            random_vector(&mut rng, &p),
            random_vector(&mut rng, &p),
            random_vector(&mut rng, &p),
            random_vector(&mut rng, &p),
        );
        let r = |a: &TangentVector, b: &TangentVector, c: &TangentVector| {
            wp.curvature(a, b, c).unwrap().comps
        };
        let rxy = r(&x, &y, &z);
        let ryx = r(&y, &x, &z);
        st.antisym = st.antisym.max(norm_inf(
            &rxy.iter().zip(&ryx).map(|(a, b)| a + b).collect::<Vec<_>>(),
        ));
        let b2 = r(&y, &z, &x);
        let b3 = r(&z, &x, &y);
        let bianchi: Vec<f64> = (0..dim).map(|k| rxy[k] + b2[k] + b3[k]).collect();
        st.bianchi = st.bianchi.max(norm_inf(&bianchi));
        let g = |a: &[f64], b: &[f64]| {
            wp.metric(
                &TangentVector::new(p.clone(), a.to_vec()),
                &TangentVector::new(p.clone(), b.to_vec()),
            )
            .unwrap()
        };
        let rxyw = r(&x, &y, &w);
        st.pair = st.pair.max((g(&rxy, &w.comps) + g(&rxyw, &z.comps)).abs());

        // metric compatibility: ∂_k g_ij = Γ^j_ki g_jj + Γ^i_kj g_ii, by central differences
        let gam = wp.christoffels(&p).unwrap();
        let gd = wp.metric_diag(&p).unwrap();
        let shifted = |k: usize, d: f64| {
            let mut q = p.clone();
            q[k] += d;
            q
        };
        for k in 0..dim {
            let gp = wp.metric_diag(&shifted(k, h)).unwrap();
            let gm = wp.metric_diag(&shifted(k, -h)).unwrap();
            for i in 0..dim {
                for j in 0..dim {
                    let fd = if i == j {
                        (gp[i] - gm[i]) / (2.0 * h)
                    } else {
                        0.0
                    };
                    let conn = gam.get(j, k, i) * gd[j] + gam.get(i, k, j) * gd[i];
                    st.compat = st.compat.max((fd - conn).abs());
                }
            }
        }

        // curvature from the connection: R^l_ijk = ∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik
        let dgam: Vec<_> = (0..dim)
            .map(|i| {
                (
                    wp.christoffels(&shifted(i, h)).unwrap(),
                    wp.christoffels(&shifted(i, -h)).unwrap(),
                )
            })
            .collect();
        let d = |i: usize, l: usize, j: usize, k: usize| {
            (dgam[i].0.get(l, j, k) - dgam[i].1.get(l, j, k)) / (2.0 * h)
        };
        let mut from_gamma = vec![0.0; dim];
        for l in 0..dim {
            let mut acc = 0.0;
            for i in 0..dim {
                for j in 0..dim {
                    for k in 0..dim {
                        let mut rl = d(i, l, j, k) - d(j, l, i, k);
                        for m in 0..dim {
                            rl += gam.get(l, i, m) * gam.get(m, j, k)
                                - gam.get(l, j, m) * gam.get(m, i, k);
                        }
                        acc += x.comps[i] * y.comps[j] * z.comps[k] * rl;
                    }
                }
            }
            from_gamma[l] = acc;
        }
        let diff: Vec<f64> = from_gamma.iter().zip(&rxy).map(|(a, b)| a - b).collect();
        st.christoffel = st.christoffel.max(norm_inf(&diff));
    }
    st
}

fn a7_geometry_properties() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, chart) in [Chart::Euclidean, Chart::Spherical, Chart::HalfSpace]
        .into_iter()
        .enumerate()
    {
        let st = geometry_checks(chart, 128, common::SEED + 70 + i as u64);
        pass &= st.antisym < 1e-12
            && st.bianchi < 1e-10
            && st.pair < 1e-9
            && st.compat < 1e-6
            && st.christoffel < 1e-5;
        detail.push(format!(
            "{}: antisym {:.1e}, bianchi {:.1e}, pair {:.1e}, compat {:.1e}, from-christoffel {:.1e}",
            chart.name(),
            st.antisym,
            st.bianchi,
            st.pair,
            st.compat,
            st.christoffel
        ));
    }
    line(
        7,
        "geometry at 128 points per chart",
        pass,
        detail.join("; "),
    );
}

fn gallery_and_corpus() -> Vec<(String, warpcurve::curvekit::Curve, bool)> {
    let mut all: Vec<(String, warpcurve::curvekit::Curve, bool)> = gallery::standard()
        .into_iter()
        .map(|e: GalleryEntry| (e.name, e.curve, true))
        .collect();
    let (samples, _) = common::corpus(common::SEED, 50);
    all.extend(samples.into_iter().map(|s| (s.label, s.curve, false)));
    all
}

fn a8_verdict_agrees_with_equations() {
    let all = gallery_and_corpus();
    let mut disagreements = Vec::new();
    let (mut pos, mut neg) = (0, 0);
    for (name, curve, _) in &all {
        let rep = verdict_with(curve, &curve.grid(257), &AnalysisOptions::default()).unwrap();
        if rep.verdict {
            pos += 1;
        } else {
            neg += 1;
        }
        if rep.verdict != rep.theorem_holds {
            disagreements.push(name.clone());
        }
    }
    line(
        8,
        "verdict vs equations",
        disagreements.is_empty(),
        format!(
            "{} curves ({pos} biharmonic, {neg} not), disagreements: {disagreements:?}",
            all.len()
        ),
    );
}

fn a9_identities() {
    let all = gallery_and_corpus();
    let mut sup_b = 0.0f64;
    let mut sin_curves = 0;
    let mut angle = 0.0f64;
    let mut evolution = 0.0f64;
    for (_, curve, in_gallery) in &all {
        let wp = curve.ambient();
        let unit_sin = wp.warping().to_source("t")
            == parse_in("sin(t)", "t").unwrap().to_source("t")
            && wp.c() == 1.0
            && wp.fiber().chart() == Chart::Spherical;
        let grid = curve.grid(257);
        let rep = verdict_with(curve, &grid, &AnalysisOptions::default()).unwrap();
        if unit_sin {
            sin_curves += 1;
            sup_b = sup_b.max(rep.sup_b());
        }
        for &s in grid.points() {
            let st = eval_state(curve, s).unwrap();
            let fw = wp.metric(&st.vertical, &st.vertical).unwrap();
            angle = angle.max((st.theta.cos().powi(2) + fw - 1.0).abs());
        }
        if *in_gallery {
            evolution = evolution.max(rep.max_theta_evolution());
        }
    }
    let pass = sin_curves > 0 && sup_b < 1e-12 && angle < 1e-9 && evolution < 1e-7;
    line(
        9,
        "identities",
        pass,
        format!(
            "sup|B| = {sup_b:.1e} on {sin_curves} curves with f = sin t, c = 1; max|cos^2 + f^2 g(W,W) - 1| = {angle:.1e}; max angle evolution residual on gallery = {evolution:.1e}"
        ),
    );
}

fn main() {
    a1_legendre_circle_at_quarter_pi();
    a2_unit_helices();
    a3_latitude_negative_control();
    a4_legendre_locus();
    a5_helix_warping_round_trip();
    a6_tau2_two_ways();
    a7_geometry_properties();
    a8_verdict_agrees_with_equations();
    a9_identities();
    let failed = FAILURES.load(Ordering::Relaxed);
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
