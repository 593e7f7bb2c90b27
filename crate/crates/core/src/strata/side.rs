use serde::{Deserialize, Serialize};

use super::{groups, StratumRow};
use crate::error::{Error, Result};
use crate::exact::{divides, gcd_all, span_rank, Form};
use crate::kronecker::{entries_independent, is_semistable, minors_semistable, KroneckerModule, KroneckerVerdict};
use crate::presentation::Presentation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideOutcome {
    Pass,
    Fail(String),
    Unknown(String),
}

impl SideOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, SideOutcome::Fail(_))
    }
}

pub const SIDE_CONDITIONS: [&str; 19] = [
    "nonzero-determinant",
    "kronecker-11",
    "kronecker-12",
    "zero-12-kronecker-11-22",
    "orbit-forms",
    "zero-12-orbit-forms",
    "linear-block-mod-det",
    "independent-11-minors-22",
    "unit-or-linear-pair",
    "nonzero-12-not-dividing-22",
    "zero-13-not-dividing-11-minors-23",
    "independent-11-not-dividing-22-32",
    "independent-12",
    "nonzero-12",
    "zero-13-two-non-divisors",
    "independent-11-independent-22",
    "unit-pattern-forms",
    "minors-12",
    "minors-11",
];

const ORBIT: &str = "orbit-form membership undecided";
const KRONECKER_BUDGET: usize = 24;

/// Block (a, b) of the matrix: target group a by source group b, 1-based.
fn block(p: &Presentation, a: usize, b: usize) -> Vec<Vec<Form>> {
    let rg = groups(p.target());
    let cg = groups(p.source());
    rg[a - 1]
        .iter()
        .map(|&i| cg[b - 1].iter().map(|&j| p.entry(i, j).clone()).collect())
        .collect()
}

fn single(p: &Presentation, a: usize, b: usize) -> Form {
    block(p, a, b)[0][0].clone()
}

fn flat(m: Vec<Vec<Form>>) -> Vec<Form> {
    m.into_iter().flatten().collect()
}

fn check(ok: bool, what: &str) -> SideOutcome {
    if ok {
        SideOutcome::Pass
    } else {
        SideOutcome::Fail(what.to_string())
    }
}

fn all(parts: impl IntoIterator<Item = SideOutcome>) -> SideOutcome {
    let mut unknown = None;
    for s in parts {
        match s {
            SideOutcome::Pass => {}
            SideOutcome::Fail(_) => return s,
            SideOutcome::Unknown(r) => unknown = unknown.or(Some(r)),
        }
    }
    unknown.map_or(SideOutcome::Pass, SideOutcome::Unknown)
}

fn kronecker(m: Vec<Vec<Form>>, name: &str) -> Result<SideOutcome> {
    let k = KroneckerModule::new(&m)?;
    Ok(match is_semistable(&k, KRONECKER_BUDGET, 0) {
        KroneckerVerdict::Semistable => SideOutcome::Pass,
        KroneckerVerdict::Unstable(_) => SideOutcome::Fail(format!("{} is not semistable as a Kronecker module", name)),
        KroneckerVerdict::ProbablySemistable => {
            SideOutcome::Unknown(format!("{}: no destabilizer found, no certificate either", name))
        }
    })
}

fn minors(m: Vec<Vec<Form>>, name: &str) -> Result<SideOutcome> {
    let k = KroneckerModule::new(&m)?;
    Ok(check(minors_semistable(&k)?, &format!("{} has dependent maximal minors", name)))
}

fn independent(fs: &[Form], name: &str) -> SideOutcome {
    check(entries_independent(fs), &format!("{} has dependent entries", name))
}

fn nonzero(f: &Form, name: &str) -> SideOutcome {
    check(!f.is_zero(), &format!("{} vanishes", name))
}

/// `f ≠ 0` and `f ∤ g`.
fn not_dividing(f: &Form, g: &Form, fname: &str, gname: &str) -> Result<SideOutcome> {
    if f.is_zero() {
        return Ok(SideOutcome::Fail(format!("{} vanishes", fname)));
    }
    Ok(check(!divides(f, g)?, &format!("{} divides {}", fname, gname)))
}

fn determinant_nonzero(p: &Presentation) -> SideOutcome {
    check(p.is_injective(), "determinant vanishes identically")
}

/// Rows 0, 1 by columns 0, 1, 2 as [[q1, ℓ11, ℓ12], [q2, ℓ21, ℓ22]]: the linear
/// determinant d is nonzero and the two cubic minors are independent modulo d.
fn linear_block_mod_det(p: &Presentation) -> SideOutcome {
    let e = |i, j| p.entry(i, j);
    let d = &(e(0, 1) * e(1, 2)) - &(e(0, 2) * e(1, 1));
    if d.is_zero() {
        return SideOutcome::Fail("linear block has zero determinant".into());
    }
    let m1 = &(e(0, 0) * e(1, 1)) - &(e(1, 0) * e(0, 1));
    let m2 = &(e(0, 0) * e(1, 2)) - &(e(1, 0) * e(0, 2));
    let span = [d.mul_var(0), d.mul_var(1), d.mul_var(2), m1, m2];
    check(span_rank(&span) == 5, "cubic minors are dependent modulo the linear determinant")
}

/// O(-2) <- O(-2) constant nonzero: cancel it and ask the remaining 2 x 2
/// for a coprime first row. Otherwise the linear-pair normal form.
fn unit_or_linear_pair(p: &Presentation) -> Result<SideOutcome> {
    if !p.entry(0, 2).is_zero() {
        let m = p.minimize();
        if m.source() != [-3, -3] || m.target() != [-1, 1] {
            return Err(Error::Inconsistent(format!("unexpected minimal shape {:?} -> {:?}", m.source(), m.target())));
        }
        let g = gcd_all(&[m.entry(0, 0).clone(), m.entry(0, 1).clone()]);
        return Ok(check(g.is_some_and(|g| g.degree() == 0), "quadrics of the first row share a factor"));
    }
    let base = all([
        independent(&[p.entry(0, 0).clone(), p.entry(0, 1).clone()], "linear row"),
        nonzero(p.entry(1, 2), "linear entry"),
    ]);
    Ok(all([base, SideOutcome::Unknown(ORBIT.into())]))
}

/// The four normal forms on 2O(-3) ⊕ O(-2) ⊕ O(-1) -> O(-2) ⊕ O(-1) ⊕ 2O,
/// told apart by which of the two unit positions vanish.
fn unit_pattern_forms(p: &Presentation) -> Result<SideOutcome> {
    let c1 = !p.entry(0, 2).is_zero();
    let c2 = !p.entry(1, 3).is_zero();
    let m = p.minimize();
    let e = |i: usize, j: usize| m.entry(i, j).clone();
    Ok(match (c1, c2) {
        (true, true) => SideOutcome::Pass,
        (false, true) => all([
            independent(&[e(0, 0), e(0, 1)], "linear row"),
            independent(&[e(1, 2), e(2, 2)], "quadric column"),
        ]),
        (true, false) => all([
            independent(&[e(0, 0), e(0, 1)], "quadric row"),
            independent(&[e(1, 2), e(2, 2)], "linear column"),
        ]),
        (false, false) => all([
            independent(&[e(0, 0), e(0, 1)], "linear row"),
            nonzero(&e(1, 2), "linear entry"),
            independent(&[e(2, 3), e(3, 3)], "linear column"),
        ]),
    })
}

/// Evaluate the row's side condition on `p`. Forced zero positions are
/// checked first.
pub fn side_condition(p: &Presentation, row: &StratumRow) -> Result<SideOutcome> {
    if p.source() != row.source.as_slice() || p.target() != row.target.as_slice() {
        return Err(Error::Shape(format!(
            "row ({}, {}) needs {:?} -> {:?}, got {:?} -> {:?}",
            row.chi,
            row.id,
            row.source,
            row.target,
            p.source(),
            p.target()
        )));
    }
    if let Some([i, j]) = row.forced_zeros.iter().find(|[i, j]| !p.entry(*i, *j).is_zero()) {
        return Ok(SideOutcome::Fail(format!("entry ({}, {}) must vanish", i, j)));
    }
    let out = match row.side_condition.as_str() {
        "nonzero-determinant" => determinant_nonzero(p),
        "kronecker-11" => kronecker(block(p, 1, 1), "φ11")?,
        "kronecker-12" => kronecker(block(p, 1, 2), "φ12")?,
        "zero-12-kronecker-11-22" => all([kronecker(block(p, 1, 1), "φ11")?, kronecker(block(p, 2, 2), "φ22")?]),
        "orbit-forms" | "zero-12-orbit-forms" => SideOutcome::Unknown(ORBIT.into()),
        "linear-block-mod-det" => all([
            linear_block_mod_det(p),
            independent(&[p.entry(2, 3).clone(), p.entry(3, 3).clone()], "linear column"),
        ]),
        "independent-11-minors-22" => all([independent(&flat(block(p, 1, 1)), "φ11"), minors(block(p, 2, 2), "φ22")?]),
        "unit-or-linear-pair" => unit_or_linear_pair(p)?,
        "nonzero-12-not-dividing-22" => not_dividing(&single(p, 1, 2), &single(p, 2, 2), "φ12", "φ22")?,
        "zero-13-not-dividing-11-minors-23" => all([
            not_dividing(&single(p, 1, 2), &single(p, 1, 1), "φ12", "φ11")?,
            minors(block(p, 2, 3), "φ23")?,
        ]),
        "independent-11-not-dividing-22-32" => all([
            independent(&flat(block(p, 1, 1)), "φ11"),
            not_dividing(&single(p, 2, 2), &single(p, 3, 2), "φ22", "φ32")?,
        ]),
        "independent-12" => independent(&flat(block(p, 1, 2)), "φ12"),
        "nonzero-12" => nonzero(&single(p, 1, 2), "φ12"),
        "zero-13-two-non-divisors" => all([
            not_dividing(&single(p, 1, 2), &single(p, 1, 1), "φ12", "φ11")?,
            not_dividing(&single(p, 2, 3), &single(p, 3, 3), "φ23", "φ33")?,
        ]),
        "independent-11-independent-22" => all([
            independent(&flat(block(p, 1, 1)), "φ11"),
            independent(&flat(block(p, 2, 2)), "φ22"),
        ]),
        "unit-pattern-forms" => unit_pattern_forms(p)?,
        "minors-12" => minors(block(p, 1, 2), "φ12")?,
        "minors-11" => minors(block(p, 1, 1), "φ11")?,
        other => return Err(Error::Inconsistent(format!("unknown side condition {}", other))),
    };
    Ok(out)
}
