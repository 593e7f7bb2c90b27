use std::fmt::Write as _;
use std::path::Path;

use plane_sheaves::strata::{dim_audit, orbit_audit, registry, verify_row, DimAudit, OrbitAudit};
use plane_sheaves::{RowReport, StratumRow};
use serde::Serialize;

use crate::commands::{to_json, Output};
use crate::{Failure, Format};

#[derive(Serialize)]
struct RowResult {
    chi: i64,
    id: String,
    conditions: String,
    source: Vec<i64>,
    target: Vec<i64>,
    codim: u32,
    report: Option<RowReport>,
    dims: DimAudit,
    orbit: Option<OrbitAudit>,
    orbit_error: Option<String>,
    pass: bool,
}

#[derive(Serialize)]
struct TablesReport {
    seed: u64,
    samples: usize,
    rows: Vec<RowResult>,
    all_pass: bool,
}

fn selected(chi: Option<i64>) -> Result<Vec<&'static StratumRow>, Failure> {
    if let Some(c) = chi {
        if !(0..=3).contains(&c) {
            return Err(Failure::new(4, format!("chi must be 0, 1, 2 or 3, got {}", c)));
        }
    }
    Ok(registry().iter().filter(|r| chi.is_none_or(|c| r.chi == c)).collect())
}

fn twists(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn audit_row(row: &StratumRow, samples: usize, seed: u64) -> Result<RowResult, Failure> {
    let report = if samples > 0 { Some(verify_row(row.chi, &row.id, samples, seed)?) } else { None };
    let (orbit, orbit_error) = match orbit_audit(row, seed) {
        Ok(o) => (Some(o), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let pass = report.as_ref().is_none_or(|r| r.passed()) && orbit.as_ref().is_some_and(|o| o.holds);
    Ok(RowResult {
        chi: row.chi,
        id: row.id.clone(),
        conditions: row.conditions.to_string(),
        source: row.source.clone(),
        target: row.target.clone(),
        codim: row.codim,
        report,
        dims: dim_audit(row),
        orbit,
        orbit_error,
        pass,
    })
}

fn markdown(rep: &TablesReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "seed {}, {} samples per row\n", rep.seed, rep.samples);
    let _ = writeln!(s, "| χ | stratum | conditions | resolution | codim | samples ok | dim W − dim G | orbit dim X | stabilizer | status |");
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|---|---|");
    for r in &rep.rows {
        let ok = r.report.as_ref().map_or("-".to_string(), |x| format!("{}/{}", x.profile_matches, x.attempted));
        let (ox, st) = r.orbit.as_ref().map_or(("-".into(), "-".into()), |o| (o.dim_x.to_string(), o.stabilizer.to_string()));
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} → {} | {} | {} | {} | {} | {} | {} |",
            r.chi,
            r.id,
            r.conditions,
            twists(&r.source),
            twists(&r.target),
            r.codim,
            ok,
            r.dims.dim_x,
            ox,
            st,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    let _ = writeln!(s, "\nexpected dim X = 37 − codim; {}", if rep.all_pass { "all rows pass" } else { "some rows FAIL" });
    s
}

pub fn verify_tables(
    chi: Option<i64>,
    samples: usize,
    seed: u64,
    format: Format,
    out_dir: Option<&Path>,
) -> Result<Output, Failure> {
    let rows = selected(chi)?.into_iter().map(|r| audit_row(r, samples, seed)).collect::<Result<Vec<_>, _>>()?;
    let all_pass = rows.iter().all(|r| r.pass);
    let rep = TablesReport {
        seed,
        samples,
        rows,
        all_pass,
    };
    let json = to_json(&rep);
    let md = markdown(&rep);
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::new(1, format!("{}: {}", dir.display(), e)))?;
        std::fs::write(dir.join("report.json"), &json).map_err(|e| Failure::new(1, e.to_string()))?;
        std::fs::write(dir.join("report.md"), &md).map_err(|e| Failure::new(1, e.to_string()))?;
    }
    Ok(Output {
        text: match format {
            Format::Json => json,
            Format::Markdown => md,
        },
        code: if all_pass { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct DimsRow {
    naive: DimAudit,
    orbit: Option<OrbitAudit>,
}

pub fn dims(chi: Option<i64>, seed: u64, format: Format) -> Result<Output, Failure> {
    let rows: Vec<DimsRow> = selected(chi)?
        .into_iter()
        .map(|r| DimsRow {
            naive: dim_audit(r),
            orbit: orbit_audit(r, seed).ok(),
        })
        .collect();
    let pass = rows.iter().all(|r| r.orbit.as_ref().is_some_and(|o| o.holds));
    let text = match format {
        Format::Json => to_json(&rows),
        Format::Markdown => {
            let mut s = String::from("| χ | stratum | dim W | dim G | dim W − dim G | orbit dim X | stabilizer | 37 − codim |\n|---|---|---|---|---|---|---|---|\n");
            for r in &rows {
                let (ox, st) = r.orbit.as_ref().map_or(("-".into(), "-".into()), |o| (o.dim_x.to_string(), o.stabilizer.to_string()));
                let a = &r.naive;
                let _ = writeln!(s, "| {} | {} | {} | {} | {} | {} | {} | {} |", a.chi, a.id, a.dim_w, a.dim_g, a.dim_x, ox, st, a.expected);
            }
            s
        }
    };
    Ok(Output {
        text,
        code: if pass { 0 } else { 1 },
    })
}
