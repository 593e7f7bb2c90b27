use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{find_row, generate, StratumRow};
use crate::error::Result;
use crate::presentation::{HilbertData, Presentation};
use crate::stability::{bounds_check, BoundsQuery, BoundsVerdict};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowReport {
    pub chi: i64,
    pub id: String,
    pub attempted: usize,
    pub accepted: usize,
    pub hilbert_matches: usize,
    pub profile_matches: usize,
    pub bounds_allowed: usize,
    pub duality_matches: usize,
    pub euler_matches: usize,
    /// (sample seed, what went wrong)
    pub failures: Vec<(u64, String)>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        let n = self.attempted;
        self.failures.is_empty()
            && [self.accepted, self.hilbert_matches, self.profile_matches, self.bounds_allowed, self.duality_matches, self.euler_matches]
                .iter()
                .all(|&c| c == n)
    }
}

/// Seed of the k-th sample.
pub fn sample_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

#[derive(Default)]
struct Checks {
    hilbert: bool,
    profile: bool,
    bounds: bool,
    duality: bool,
    euler: bool,
    problems: Vec<String>,
}

/// h1(F(t)) = h0(F^D(−t)) for |t| ≤ 3, and χ(F^D) = −χ(F).
fn duality_holds(p: &Presentation) -> Result<bool> {
    let d = p.dual();
    let h = p.hilbert()?;
    if d.hilbert()? != (HilbertData { r: h.r, chi: -h.chi }) {
        return Ok(false);
    }
    for t in -3..=3 {
        if p.h1_twist(t)? != d.h0_twist(-t) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn run_checks(row: &StratumRow, p: &Presentation) -> Result<Checks> {
    let mut c = Checks::default();
    let h = p.hilbert()?;
    c.hilbert = h == HilbertData { r: 6, chi: row.chi };
    if !c.hilbert {
        c.problems.push(format!("hilbert {}m + {}", h.r, h.chi));
    }
    let prof = p.profile()?;
    c.profile = row.conditions.matches(&prof);
    if !c.profile {
        c.problems.push(format!("profile {:?} against {}", prof.as_array(), row.conditions));
    }
    match bounds_check(&BoundsQuery::from_presentation(p)?) {
        BoundsVerdict::Allowed => c.bounds = true,
        BoundsVerdict::Forbidden(rule) => c.problems.push(format!("forbidden by {}", rule)),
    }
    c.duality = duality_holds(p)?;
    if !c.duality {
        c.problems.push("Serre duality identity".into());
    }
    let euler = p.h0_omega()? as i64 - p.h1_omega()? as i64;
    c.euler = euler == 2 * h.chi - 6;
    if !c.euler {
        c.problems.push(format!("h0 - h1 of F ⊗ Ω¹(1) is {}", euler));
    }
    Ok(c)
}

/// Generate `samples` instances of a row and check each against its
/// invariants. Failures are data, not errors.
pub fn verify_row(chi: i64, id: &str, samples: usize, seed: u64) -> Result<RowReport> {
    let row = find_row(chi, id)?;
    let results: Vec<(u64, Result<Checks>)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let s = sample_seed(seed, k);
            (s, generate(chi, id, s).and_then(|p| run_checks(row, &p)))
        })
        .collect();
    let mut rep = RowReport {
        chi,
        id: id.to_string(),
        attempted: samples,
        ..Default::default()
    };
    for (s, r) in results {
        match r {
            Err(e) => rep.failures.push((s, e.to_string())),
            Ok(c) => {
                rep.accepted += 1;
                rep.hilbert_matches += c.hilbert as usize;
                rep.profile_matches += c.profile as usize;
                rep.bounds_allowed += c.bounds as usize;
                rep.duality_matches += c.duality as usize;
                rep.euler_matches += c.euler as usize;
                rep.failures.extend(c.problems.into_iter().map(|m| (s, m)));
            }
        }
    }
    Ok(rep)
}
