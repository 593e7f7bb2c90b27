//! Stability verdicts from the resolution shape, plus slope arithmetic and
//! cohomology bounds for semistable sheaves.
//!
//! Every criterion is hypothesis-gated: when a precondition fails the verdict
//! is Inconclusive and names the hypothesis.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    det_forms, divides, form_gcd, gcd_all, monomials, rational_roots, span_rank, Form, Matrix, Rational, UPoly,
};
use crate::presentation::{GradedPiece, HilbertData, Presentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    Stable,
    ProperlySemistable,
    Semistable,
    Inconclusive,
}

/// The subsheaf 0 -> O(source) -> O(target) -> S -> 0 of equal slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsheafWitness {
    pub source: i64,
    pub target: i64,
}

impl SubsheafWitness {
    pub fn hilbert(&self) -> HilbertData {
        let h = |k: i64| (k + 1) * (k + 2) / 2;
        HilbertData {
            r: self.target - self.source,
            chi: h(self.target) - h(self.source),
        }
    }

    pub fn slope(&self) -> Rational {
        let h = self.hilbert();
        slope(h.r, h.chi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub kind: VerdictKind,
    pub reason: String,
    pub witness: Option<SubsheafWitness>,
}

impl StabilityVerdict {
    fn stable(reason: impl Into<String>) -> Self {
        StabilityVerdict {
            kind: VerdictKind::Stable,
            reason: reason.into(),
            witness: None,
        }
    }

    fn inconclusive(reason: impl Into<String>) -> Self {
        StabilityVerdict {
            kind: VerdictKind::Inconclusive,
            reason: reason.into(),
            witness: None,
        }
    }

    fn properly_semistable(reason: impl Into<String>, source: i64, target: i64) -> Self {
        StabilityVerdict {
            kind: VerdictKind::ProperlySemistable,
            reason: reason.into(),
            witness: Some(SubsheafWitness { source, target }),
        }
    }
}

pub fn slope(r: i64, chi: i64) -> Rational {
    Rational::new(chi.into(), r.into())
}

fn sq(v: &[i64]) -> i64 {
    v.iter().map(|x| x * x).sum()
}

/// Sheaf with minors of the last n−1 columns coprime: stable unless a
/// subsheaf O(d1) -> O(ρ−d1) of equal slope exists.
pub fn coprime_minors_criterion(p: &Presentation) -> Result<StabilityVerdict> {
    let n = p.cols();
    if p.rows() != n || n == 0 {
        return Err(Error::Shape(format!("criterion needs a square presentation, got {} x {}", p.rows(), n)));
    }
    let d = p.source();
    let e = p.target();
    let tail_r: i64 = e[1..].iter().sum::<i64>() - d[1..].iter().sum::<i64>();
    if e[0] - d[0] < tail_r {
        return Ok(StabilityVerdict::inconclusive(format!(
            "twist condition e1 - d1 >= sum of remaining differences fails ({} < {})",
            e[0] - d[0],
            tail_r
        )));
    }
    let tail_sq = sq(&e[1..]) - sq(&d[1..]);
    let ratio_ok = tail_r > 0 && (e[0] + d[0]) * tail_r <= tail_sq;
    let dominant = (1..n).all(|i| e[i] >= d[i]);
    if !ratio_ok && !dominant {
        return Ok(StabilityVerdict::inconclusive(
            "twist condition on e1 + d1 fails and e_i >= d_i does not hold for i >= 2",
        ));
    }
    // maximal minors of the restriction to the last n-1 summands
    let mut minors = Vec::with_capacity(n);
    for del in 0..n {
        let rows: Vec<Vec<Form>> = (0..n)
            .filter(|&i| i != del)
            .map(|i| (1..n).map(|j| p.entry(i, j).clone()).collect())
            .collect();
        let deg: i64 = (0..n).filter(|&i| i != del).map(|i| e[i]).sum::<i64>() - d[1..].iter().sum::<i64>();
        if let Some(m) = det_forms(&rows) {
            if deg == 0 {
                return Ok(StabilityVerdict::inconclusive("a maximal minor of the restriction has degree zero"));
            }
            minors.push(m);
        }
    }
    match gcd_all(&minors) {
        None => return Ok(StabilityVerdict::inconclusive("the maximal minors of the restriction all vanish")),
        Some(g) if g.degree() > 0 => {
            return Ok(StabilityVerdict::inconclusive(format!(
                "the maximal minors of the restriction share the factor {}",
                g
            )))
        }
        _ => {}
    }
    let r = p.hilbert()?.r;
    let num = sq(e) - sq(d);
    if num % r != 0 {
        return Ok(StabilityVerdict::stable(format!("ratio {}/{} is not an integer", num, r)));
    }
    let rho = num / r;
    let s = rho - 2 * d[0];
    if s < 1 || s >= r {
        return Ok(StabilityVerdict::stable(format!(
            "a subsheaf O({}) -> O({}) would have multiplicity {} outside 1..{}",
            d[0],
            rho - d[0],
            s,
            r - 1
        )));
    }
    match special_section(p, d[0] - rho, s as u32)? {
        SectionSearch::Absent(why) => Ok(StabilityVerdict::stable(why)),
        SectionSearch::Found => Ok(StabilityVerdict::properly_semistable(
            format!("a section of F({}) is annihilated by a form of degree {}", d[0] - rho, s),
            d[0],
            rho - d[0],
        )),
        SectionSearch::Undecided(why) => Ok(StabilityVerdict::inconclusive(why)),
    }
}

enum SectionSearch {
    Absent(String),
    Found,
    Undecided(String),
}

/// Multiplication by all degree-s monomials on a section, in quotient coordinates.
fn multiplication(from: &GradedPiece, to: &GradedPiece, sigma: &[Rational], s: u32) -> Matrix {
    let mut amb = vec![Rational::zero(); from.ambient];
    for (c, &b) in sigma.iter().zip(&from.basis) {
        amb[b] = c.clone();
    }
    let cols: Vec<Vec<Rational>> = monomials(s)
        .into_iter()
        .map(|m| to.project(&crate::presentation::multiply_ambient(from, to, &amb, m)))
        .collect();
    Matrix::from_cols(&cols, to.dim())
}

fn annihilated(p: &Presentation, from: &GradedPiece, t: i64, sigma: &[Rational], s: u32) -> Result<bool> {
    let to = p.graded_piece(t + s as i64)?;
    Ok(!multiplication(from, &to, sigma, s).kernel_basis().is_empty())
}

/// Is some section of F(t) killed by a nonzero form of degree s?
fn special_section(p: &Presentation, t: i64, s: u32) -> Result<SectionSearch> {
    let from = p.graded_piece(t)?;
    let k = from.dim();
    let confirm = |sigma: &[Rational]| -> Result<SectionSearch> {
        for lower in 1..s {
            if annihilated(p, &from, t, sigma, lower)? {
                return Ok(SectionSearch::Undecided(format!(
                    "section is killed in degree {} < {}, contradicting the hypotheses",
                    lower, s
                )));
            }
        }
        Ok(SectionSearch::Found)
    };
    match k {
        0 => Ok(SectionSearch::Absent(format!("h0(F({})) = 0", t))),
        1 => {
            if annihilated(p, &from, t, &[Rational::one()], s)? {
                confirm(&[Rational::one()])
            } else {
                Ok(SectionSearch::Absent(format!("the section of F({}) has no annihilator of degree {}", t, s)))
            }
        }
        2 => {
            let to = p.graded_piece(t + s as i64)?;
            let e1 = [Rational::one(), Rational::zero()];
            let e2 = [Rational::zero(), Rational::one()];
            let m1 = multiplication(&from, &to, &e1, s);
            let m2 = multiplication(&from, &to, &e2, s);
            if !m1.kernel_basis().is_empty() {
                return confirm(&e1);
            }
            let nm = m1.cols();
            if nm > 24 {
                return Ok(SectionSearch::Undecided(format!("pencil search over {} monomials is out of range", nm)));
            }
            // det(R·(u·M1 + M2)) for random projections R; common roots are the candidates
            let mut rng = ChaCha8Rng::seed_from_u64(0x5ec7);
            let mut g = UPoly::zero();
            for _ in 0..3 {
                let rv: Vec<i64> = (0..nm * to.dim()).map(|_| rng.gen_range(-5..=5)).collect();
                let r = Matrix::from_ints(nm, to.dim(), &rv);
                let (a, b) = (r.mul(&m1), r.mul(&m2));
                g = g.gcd(&det_pencil(&a, &b));
            }
            if g.is_zero() {
                if !m2.kernel_basis().is_empty() {
                    return confirm(&e2);
                }
                return Ok(SectionSearch::Undecided("projected determinants vanish identically".into()));
            }
            if g.deg() == 0 {
                return Ok(SectionSearch::Absent(format!(
                    "no section of F({}) has an annihilator of degree {}",
                    t, s
                )));
            }
            for u in rational_roots(&g) {
                let sigma = [u, Rational::one()];
                if annihilated(p, &from, t, &sigma, s)? {
                    return confirm(&sigma);
                }
            }
            Ok(SectionSearch::Undecided("candidate special sections are not defined over Q".into()))
        }
        _ => Ok(SectionSearch::Undecided(format!("h0(F({})) = {} is too large for the exact search", t, k))),
    }
}

/// det(u·A + B) as a polynomial in u, by interpolation.
fn det_pencil(a: &Matrix, b: &Matrix) -> UPoly {
    let n = a.rows();
    let mut rows = Vec::with_capacity(n + 1);
    let mut vals = Vec::with_capacity(n + 1);
    for x in 0..=n as i64 {
        let u = Rational::from_integer(x.into());
        let mut m = b.clone();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = &u * &a[(i, j)] + &b[(i, j)];
            }
        }
        vals.push(m.det());
        let mut pw = Rational::one();
        let mut row = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            row.push(pw.clone());
            pw *= &u;
        }
        rows.push(row);
    }
    let coeffs = Matrix::from_rows(rows).solve(&vals).expect("Vandermonde");
    UPoly::new(coeffs)
}

/// Two-summand resolutions: with φ12, φ22 coprime the sheaf is stable unless the
/// twist differences agree and φ is equivalent to a matrix with φ11 = 0.
pub fn two_summand_criterion(p: &Presentation) -> Result<StabilityVerdict> {
    if p.rows() != 2 || p.cols() != 2 {
        return Err(Error::Shape(format!("criterion needs a 2 x 2 presentation, got {} x {}", p.rows(), p.cols())));
    }
    let (d1, d2) = (p.source()[0], p.source()[1]);
    let (e1, e2) = (p.target()[0], p.target()[1]);
    if d2 >= e1 {
        return Ok(StabilityVerdict::inconclusive(format!("twist ordering d2 < e1 fails ({} >= {})", d2, e1)));
    }
    if e1 - d1 < e2 - d2 {
        return Ok(StabilityVerdict::inconclusive(format!(
            "twist condition e1 - d1 >= e2 - d2 fails ({} < {})",
            e1 - d1,
            e2 - d2
        )));
    }
    let (f11, f12, f21, f22) = (p.entry(0, 0), p.entry(0, 1), p.entry(1, 0), p.entry(1, 1));
    match form_gcd(f12, f22) {
        Ok(g) if g.degree() == 0 => {}
        Ok(g) => return Ok(StabilityVerdict::inconclusive(format!("φ12 and φ22 share the factor {}", g))),
        Err(_) => return Ok(StabilityVerdict::inconclusive("φ12 and φ22 both vanish")),
    }
    if e1 - d1 > e2 - d2 {
        return Ok(StabilityVerdict::stable("twist differences are strictly unbalanced"));
    }
    let special = if d1 < d2 {
        divides(f12, f11)?
    } else {
        dependent_combination(&[f11, f21], &[f12, f22])
    };
    if special {
        Ok(StabilityVerdict::properly_semistable(
            "φ is equivalent to a matrix with vanishing (1,1) entry",
            d1,
            e2,
        ))
    } else {
        Ok(StabilityVerdict::stable("no equivalent matrix has a vanishing (1,1) entry"))
    }
}

/// Whether u·a + v·b has proportional entries for some (u:v) over C.
fn dependent_combination(a: &[&Form; 2], b: &[&Form; 2]) -> bool {
    let n = a[0].coeffs().len();
    let mut at_infinity = true;
    let mut g = UPoly::zero();
    for c in 0..n {
        for c2 in c + 1..n {
            let (a0, a0b) = (&a[0].coeffs()[c], &a[0].coeffs()[c2]);
            let (a1, a1b) = (&a[1].coeffs()[c], &a[1].coeffs()[c2]);
            let (b0, b0b) = (&b[0].coeffs()[c], &b[0].coeffs()[c2]);
            let (b1, b1b) = (&b[1].coeffs()[c], &b[1].coeffs()[c2]);
            let uu = a0 * a1b - a0b * a1;
            let uv = a0 * b1b + b0 * a1b - a0b * b1 - b0b * a1;
            let vv = b0 * b1b - b0b * b1;
            if !uu.is_zero() {
                at_infinity = false;
            }
            g = g.gcd(&UPoly::new(vec![vv, uv, uu]));
        }
    }
    at_infinity || g.is_zero() || g.deg() > 0
}

/// Linear block [[q1, ℓ11, ℓ12], [q2, ℓ21, ℓ22], [f, g1, g2]] on
/// O(-3) ⊕ 2O(-2) -> 2O(-1) ⊕ O(1): stable when the linear block has nonzero
/// determinant d and the two cubic minors stay independent modulo d·V*.
pub fn linear_block_criterion(p: &Presentation) -> Result<bool> {
    if p.source() != [-3, -2, -2] || p.target() != [-1, -1, 1] {
        return Err(Error::Shape(format!(
            "linear block criterion needs [-3,-2,-2] -> [-1,-1,1], got {:?} -> {:?}",
            p.source(),
            p.target()
        )));
    }
    let e = |i, j| p.entry(i, j);
    let d = &(e(0, 1) * e(1, 2)) - &(e(0, 2) * e(1, 1));
    if d.is_zero() {
        return Ok(false);
    }
    let m1 = &(e(0, 0) * e(1, 1)) - &(e(1, 0) * e(0, 1));
    let m2 = &(e(0, 0) * e(1, 2)) - &(e(1, 0) * e(0, 2));
    let span = [d.mul_var(0), d.mul_var(1), d.mul_var(2), m1, m2];
    Ok(span_rank(&span) == 5)
}

pub fn linear_block_verdict(p: &Presentation) -> Result<StabilityVerdict> {
    Ok(if linear_block_criterion(p)? {
        StabilityVerdict::stable("linear block is nondegenerate and the cubic minors are independent modulo it")
    } else {
        StabilityVerdict::inconclusive("linear block determinant vanishes or the cubic minors are dependent modulo it")
    })
}

/// Cohomology data of a sheaf giving a point of M(r, χ).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsQuery {
    pub r: i64,
    pub chi: i64,
    pub h0_fm1: Option<u64>,
    pub h1_f: Option<u64>,
    pub h1_f1: Option<u64>,
    pub h0_fm2: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundsVerdict {
    Allowed,
    Forbidden(String),
}

struct ForbiddenVector {
    name: &'static str,
    chi: i64,
    h0_fm1: (u64, u64),
    h1_f: (u64, u64),
    h1_f1_zero: bool,
}

/// Excluded cohomology vectors for multiplicity 6, as closed ranges.
const FORBIDDEN: [ForbiddenVector; 7] = [
    ForbiddenVector { name: "chi1-few-sections-large-h1", chi: 1, h0_fm1: (0, 1), h1_f: (3, u64::MAX), h1_f1_zero: true },
    ForbiddenVector { name: "chi1-one-section-h1-one", chi: 1, h0_fm1: (1, 1), h1_f: (1, 1), h1_f1_zero: false },
    ForbiddenVector { name: "chi1-two-sections", chi: 1, h0_fm1: (2, 2), h1_f: (0, u64::MAX), h1_f1_zero: true },
    ForbiddenVector { name: "chi2-few-sections-large-h1", chi: 2, h0_fm1: (0, 1), h1_f: (3, u64::MAX), h1_f1_zero: true },
    ForbiddenVector { name: "chi2-no-sections-h1-two", chi: 2, h0_fm1: (0, 0), h1_f: (2, 2), h1_f1_zero: true },
    ForbiddenVector { name: "chi3-few-sections-large-h1", chi: 3, h0_fm1: (0, 1), h1_f: (2, u64::MAX), h1_f1_zero: true },
    ForbiddenVector { name: "chi0-no-sections-large-h1", chi: 0, h0_fm1: (0, 0), h1_f: (3, u64::MAX), h1_f1_zero: true },
];

pub fn forbidden_rule_names() -> Vec<&'static str> {
    FORBIDDEN.iter().map(|f| f.name).collect()
}

pub fn bounds_check(q: &BoundsQuery) -> BoundsVerdict {
    if q.r == 6 {
        for f in &FORBIDDEN {
            if q.chi != f.chi {
                continue;
            }
            let (Some(h0), Some(h1)) = (q.h0_fm1, q.h1_f) else { continue };
            if h0 < f.h0_fm1.0 || h0 > f.h0_fm1.1 || h1 < f.h1_f.0 || h1 > f.h1_f.1 {
                continue;
            }
            if f.h1_f1_zero && q.h1_f1 != Some(0) {
                continue;
            }
            return BoundsVerdict::Forbidden(f.name.into());
        }
    }
    // h1 growth: h1(F(1)) > 2h1(F) − h1(F(−1)), with h1(F(−1)) = h0(F(−1)) + r − χ
    if 0 <= q.chi && q.chi < q.r {
        if let (Some(h0m1), Some(h1), Some(h1p1)) = (q.h0_fm1, q.h1_f, q.h1_f1) {
            let h1m1 = h0m1 as i64 + q.r - q.chi;
            if h1 > 0 && h1p1 as i64 <= 2 * h1 as i64 - h1m1 {
                return BoundsVerdict::Forbidden("h1-growth".into());
            }
        }
    }
    // h0 growth: h0(F(−2)) > 2h0(F(−1)) − h0(F), with h0(F) = h1(F) + χ
    if 0 < q.chi && q.chi <= q.r {
        if let (Some(h0m2), Some(h0m1), Some(h1)) = (q.h0_fm2, q.h0_fm1, q.h1_f) {
            let h0 = h1 as i64 + q.chi;
            if h0m1 > 0 && h0m2 as i64 <= 2 * h0m1 as i64 - h0 {
                return BoundsVerdict::Forbidden("h0-growth".into());
            }
        }
    }
    BoundsVerdict::Allowed
}

impl BoundsQuery {
    /// Query with every field computed from a presentation.
    pub fn from_presentation(p: &Presentation) -> Result<Self> {
        let h = p.hilbert()?;
        Ok(BoundsQuery {
            r: h.r,
            chi: h.chi,
            h0_fm1: Some(p.h0_twist(-1)),
            h1_f: Some(p.h1_twist(0)?),
            h1_f1: Some(p.h1_twist(1)?),
            h0_fm2: Some(p.h0_twist(-2)),
        })
    }
}
