use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};
use warpcurve::biharmonic::BiharmonicReport;
use warpcurve::curvekit::Classification;

pub const CSV_HEADER: &str = "s,t,k1,k2,k3,theta,eta_E2,eta_E3,eta_E4,tau2_norm";

pub fn write_all(dir: &Path, report: &BiharmonicReport) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(&report_json(report)).map_err(io::Error::other)?;
    fs::write(dir.join("report.json"), json + "\n")?;
    let mut f = io::BufWriter::new(fs::File::create(dir.join("samples.csv"))?);
    write_csv(&mut f, report)?;
    f.flush()
}

pub fn write_csv(w: &mut impl Write, report: &BiharmonicReport) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for x in &report.samples {
        let row = [
            x.s,
            x.position[0],
            x.k[0],
            x.k[1],
            x.k[2],
            x.theta,
            x.eta_e[1],
            x.eta_e[2],
            x.eta_e[3],
            x.norm,
        ];
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

fn stats(report: &BiharmonicReport, i: usize) -> Value {
    let (min, mean, max) = report.k_stats(i);
    json!({ "min": min, "mean": mean, "max": max })
}

pub fn report_json(report: &BiharmonicReport) -> Value {
    let classification = match report.classification {
        Classification::Slant(theta) => json!({ "kind": "slant", "theta": theta }),
        c => json!({ "kind": c.name() }),
    };
    let r = &report.max_residuals;
    json!({
        "verdict": report.verdict,
        "theorem_holds": report.theorem_holds,
        "case_tags": report.case_tags.names(),
        "classification": classification,
        "grid_points": report.samples.len(),
        "tol": report.tol,
        "sup_tau2_norm": report.sup_norm,
        "max_cross_check": report.max_cross_check,
        "max_residuals": {
            "res_T": r.res_t,
            "res_E2": r.res_e2,
            "res_E3": r.res_e3,
            "res_E4": r.res_e4,
            "res_dt": r.res_dt,
        },
        "k1": stats(report, 1),
        "k2": stats(report, 2),
        "k3": stats(report, 3),
        "max_osculating_order": report.max_osculating_order(),
        "marginal_samples": report.samples.iter().filter(|s| s.marginal).count(),
        "sup_abs_B": report.sup_b(),
        "max_theta_evolution_residual": report.max_theta_evolution(),
    })
}
