//! Strata of M(6, χ) for χ ∈ {0, 1, 2, 3}: the registry of resolution shapes,
//! the cohomological classifier, instance generators and dimension audits.

mod audit;
mod generate;
mod side;
mod verify;

pub use audit::{dim_audit, orbit_audit, DimAudit, OrbitAudit};
pub use generate::{generate, MAX_ATTEMPTS};
pub use side::{side_condition, SideOutcome, SIDE_CONDITIONS};
pub use verify::{sample_seed, verify_row, RowReport};

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{CohomologyProfile, Presentation};

const REGISTRY_JSON: &str = include_str!("../../data/registry.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientKind {
    Geometric,
    Good,
    Categorical,
    /// geometric only on the stable locus
    Mixed,
}

/// The three cohomological conditions of a row; χ = 0 rows use h1(F(1))
/// in place of h0(F ⊗ Ω¹(1)).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conditions {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h0_fm1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h1_f: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h0_omega: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h1_f1: Option<u64>,
}

impl Conditions {
    pub fn matches(&self, p: &CohomologyProfile) -> bool {
        let ok = |want: Option<u64>, got: u64| want.is_none_or(|w| w == got);
        ok(self.h0_fm1, p.h0_fm1) && ok(self.h1_f, p.h1_f) && ok(self.h0_omega, p.h0_omega) && ok(self.h1_f1, p.h1_f1)
    }

    /// Values in a fixed order, None where the row does not constrain.
    pub fn as_array(&self) -> [Option<u64>; 4] {
        [self.h0_fm1, self.h1_f, self.h0_omega, self.h1_f1]
    }
}

impl fmt::Display for Conditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<u64>| v.map_or("·".to_string(), |x| x.to_string());
        write!(
            f,
            "({},{},{},{})",
            show(self.h0_fm1),
            show(self.h1_f),
            show(self.h0_omega),
            show(self.h1_f1)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRow {
    pub chi: i64,
    pub id: String,
    pub conditions: Conditions,
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub side_condition: String,
    pub codim: u32,
    pub quotient_kind: QuotientKind,
    /// (row, column) positions that vanish on the whole stratum
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forced_zeros: Vec<[usize; 2]>,
    /// groups of positions the generator may zero out together, to reach
    /// the non-generic normal forms
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub optional_zeros: Vec<Vec<[usize; 2]>>,
}

impl StratumRow {
    pub fn label(&self) -> StratumLabel {
        StratumLabel {
            chi: self.chi,
            id: self.id.clone(),
            codim: self.codim,
        }
    }

    pub fn is_forced_zero(&self, i: usize, j: usize) -> bool {
        self.forced_zeros.contains(&[i, j])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumLabel {
    pub chi: i64,
    pub id: String,
    pub codim: u32,
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, codim {})", self.chi, self.id, self.codim)
    }
}

pub fn registry() -> &'static [StratumRow] {
    static ROWS: OnceLock<Vec<StratumRow>> = OnceLock::new();
    ROWS.get_or_init(|| serde_json::from_str(REGISTRY_JSON).expect("registry data parses"))
}

pub fn registry_json() -> &'static str {
    REGISTRY_JSON
}

pub fn find_row(chi: i64, id: &str) -> Result<&'static StratumRow> {
    registry()
        .iter()
        .find(|r| r.chi == chi && r.id == id)
        .ok_or_else(|| Error::NoSuchRow { chi, id: id.to_string() })
}

pub fn rows_for(chi: i64) -> impl Iterator<Item = &'static StratumRow> {
    registry().iter().filter(move |r| r.chi == chi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChiStep {
    /// F -> F(k), χ -> χ + 6k
    Twist(i64),
    /// F -> F^D, χ -> −χ
    Dualize,
}

/// Canonical representative of χ modulo twists and duality, with the steps
/// that carry a sheaf of invariant χ there.
pub fn normalize_chi(r: i64, chi: i64) -> Result<(i64, Vec<ChiStep>)> {
    if r != 6 {
        return Err(Error::UnsupportedMultiplicity(r));
    }
    let m = chi.rem_euclid(6);
    let mut steps = Vec::new();
    let (start, target) = if m <= 3 {
        (chi, m)
    } else {
        steps.push(ChiStep::Dualize);
        (-chi, 6 - m)
    };
    let k = (target - start) / 6;
    if k != 0 {
        steps.push(ChiStep::Twist(k));
    }
    Ok((target, steps))
}

pub fn apply_steps(p: &Presentation, steps: &[ChiStep]) -> Presentation {
    let mut out = p.clone();
    for s in steps {
        out = match s {
            ChiStep::Twist(k) => out.twist(*k),
            ChiStep::Dualize => out.dual(),
        };
    }
    out
}

/// Bring a multiplicity-6 presentation to χ ∈ {0, 1, 2, 3}.
pub fn normalize(p: &Presentation) -> Result<Presentation> {
    let h = p.hilbert()?;
    let (_, steps) = normalize_chi(h.r, h.chi)?;
    Ok(apply_steps(p, &steps))
}

/// Stratum of the sheaf presented by `p`, read off its cohomology.
/// Meaningful only for semistable sheaves, which is not checked.
pub fn classify(p: &Presentation) -> Result<StratumLabel> {
    if !p.is_injective() {
        return Err(Error::Precondition("presentation is not injective".into()));
    }
    let q = normalize(p)?;
    let chi = q.hilbert()?.chi;
    let prof = q.profile()?;
    let mut hits = rows_for(chi).filter(|r| r.conditions.matches(&prof));
    match (hits.next(), hits.next()) {
        (Some(r), None) => Ok(r.label()),
        (Some(_), Some(_)) => Err(Error::Inconsistent(format!("profile {:?} matches several rows", prof.as_array()))),
        _ => Err(Error::ProfileNotInTable {
            chi,
            profile: prof.as_array(),
        }),
    }
}

/// Positions grouped by equal twists: block (a, b) is target group a by
/// source group b, both 1-based.
pub(crate) fn groups(twists: &[i64]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &t) in twists.iter().enumerate() {
        match out.last_mut() {
            Some(g) if twists[g[0]] == t => g.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}
