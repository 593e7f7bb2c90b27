//! Matrices of linear forms up to the left-right action (Kronecker modules)
//! and their semistability.
//!
//! A module K: Q^p -> Q^q ⊗ V* is unstable iff some subspace S of the source
//! satisfies q·dim S > p·dim L(S), where L(S) is spanned by K_X S, K_Y S, K_Z S.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{
    form::span_rank, gcd::UPoly, linearly_independent, modp, rational_roots, rref_rows, Form, Matrix, Rational,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerModule {
    p: usize,
    q: usize,
    /// coefficient matrices of X, Y, Z, each q × p
    coeffs: [Matrix; 3],
}

/// S of dimension `p_sub` mapping into T of dimension q - `q_sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Destabilizer {
    pub p_sub: usize,
    pub q_sub: usize,
    pub s: Vec<Vec<Rational>>,
    pub t: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KroneckerVerdict {
    Semistable,
    Unstable(Destabilizer),
    ProbablySemistable,
}

impl KroneckerVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            KroneckerVerdict::Semistable => "Semistable",
            KroneckerVerdict::Unstable(_) => "Unstable",
            KroneckerVerdict::ProbablySemistable => "ProbablySemistable",
        }
    }
}

impl KroneckerModule {
    /// From a q × p matrix of linear (or zero) forms.
    pub fn new(entries: &[Vec<Form>]) -> Result<Self> {
        let q = entries.len();
        let p = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|r| r.len() != p) {
            return Err(Error::Shape("ragged Kronecker matrix".into()));
        }
        let mut coeffs = [Matrix::zeros(q, p), Matrix::zeros(q, p), Matrix::zeros(q, p)];
        for (i, row) in entries.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                if f.degree() != 1 {
                    return Err(Error::DegreeMismatch(format!(
                        "Kronecker entry ({}, {}) has degree {}",
                        i,
                        j,
                        f.degree()
                    )));
                }
                for (c, m) in coeffs.iter_mut().enumerate() {
                    m[(i, j)] = f.coeffs()[c].clone();
                }
            }
        }
        Ok(KroneckerModule { p, q, coeffs })
    }

    pub fn from_coeffs(coeffs: [Matrix; 3]) -> Self {
        let q = coeffs[0].rows();
        let p = coeffs[0].cols();
        KroneckerModule { p, q, coeffs }
    }

    pub fn random<R: Rng + ?Sized>(q: usize, p: usize, bound: i64, rng: &mut R) -> Self {
        let entries: Vec<Vec<Form>> = (0..q).map(|_| (0..p).map(|_| Form::random(1, bound, rng)).collect()).collect();
        Self::new(&entries).expect("linear entries")
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn coeff(&self, c: usize) -> &Matrix {
        &self.coeffs[c]
    }

    pub fn entries(&self) -> Vec<Vec<Form>> {
        (0..self.q)
            .map(|i| {
                (0..self.p)
                    .map(|j| {
                        Form::from_coeffs(1, (0..3).map(|c| self.coeffs[c][(i, j)].clone()).collect()).expect("linear")
                    })
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        KroneckerModule {
            p: self.q,
            q: self.p,
            coeffs: [self.coeffs[0].transpose(), self.coeffs[1].transpose(), self.coeffs[2].transpose()],
        }
    }

    /// g · K · h for invertible g (q × q) and h (p × p).
    pub fn conjugate(&self, g: &Matrix, h: &Matrix) -> Self {
        KroneckerModule {
            p: self.p,
            q: self.q,
            coeffs: [
                g.mul(&self.coeffs[0]).mul(h),
                g.mul(&self.coeffs[1]).mul(h),
                g.mul(&self.coeffs[2]).mul(h),
            ],
        }
    }

    /// Basis of L(S) = span of K_c s.
    pub fn image_span(&self, s: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let mut rows = Vec::new();
        for v in s {
            for c in 0..3 {
                rows.push(self.coeffs[c].mul_vec(v));
            }
        }
        rref_rows(rows, self.q).rows
    }

    /// Scaled to integer coefficients (same orbit up to a scalar).
    fn integral(&self) -> KroneckerModule {
        use num_integer::Integer;
        let mut l = num_bigint::BigInt::one();
        for m in &self.coeffs {
            for i in 0..self.q {
                for x in m.row(i) {
                    l = l.lcm(x.denom());
                }
            }
        }
        let s = Rational::from_integer(l);
        let scale = |m: &Matrix| {
            let mut out = m.clone();
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out[(i, j)] = &m[(i, j)] * &s;
                }
            }
            out
        };
        KroneckerModule {
            p: self.p,
            q: self.q,
            coeffs: [scale(&self.coeffs[0]), scale(&self.coeffs[1]), scale(&self.coeffs[2])],
        }
    }
}

fn independent(vs: &[Vec<Rational>], n: usize) -> bool {
    rref_rows(vs.to_vec(), n).rank() == vs.len()
}

/// Exact check of a claimed destabilizing pair.
pub fn verify_destabilizer(k: &KroneckerModule, d: &Destabilizer) -> bool {
    let (p, q) = (k.p, k.q);
    if d.p_sub == 0 || d.p_sub > p || d.q_sub > q {
        return false;
    }
    if d.p_sub * q + d.q_sub * p <= p * q {
        return false;
    }
    if d.s.len() != d.p_sub || d.t.len() != q - d.q_sub {
        return false;
    }
    if d.s.iter().any(|v| v.len() != p) || d.t.iter().any(|v| v.len() != q) {
        return false;
    }
    if !independent(&d.s, p) || !independent(&d.t, q) {
        return false;
    }
    let span = rref_rows(d.t.clone(), q);
    d.s.iter().all(|v| (0..3).all(|c| span.contains(&k.coeffs[c].mul_vec(v))))
}

fn destabilizer(k: &KroneckerModule, s: Vec<Vec<Rational>>) -> Option<Destabilizer> {
    let s = rref_rows(s, k.p).rows;
    if s.is_empty() {
        return None;
    }
    let t = k.image_span(&s);
    let d = Destabilizer {
        p_sub: s.len(),
        q_sub: k.q - t.len(),
        s,
        t,
    };
    verify_destabilizer(k, &d).then_some(d)
}

fn minors_of(entries: &[Vec<Form>]) -> Vec<Form> {
    // 3 × 2 matrix; minors obtained by deleting one row
    (0..3)
        .map(|del| {
            let r: Vec<usize> = (0..3).filter(|&i| i != del).collect();
            &(&entries[r[0]][0] * &entries[r[1]][1]) - &(&entries[r[0]][1] * &entries[r[1]][0])
        })
        .collect()
}

/// Semistability of 2 -> 3 (or 3 -> 2) linear modules: the three maximal
/// minors are linearly independent.
pub fn minors_semistable(k: &KroneckerModule) -> Result<bool> {
    let k = match (k.p, k.q) {
        (2, 3) => k.clone(),
        (3, 2) => k.transpose(),
        (p, q) => return Err(Error::Shape(format!("minors criterion needs a 3 x 2 or 2 x 3 module, got {} x {}", q, p))),
    };
    linearly_independent(&minors_of(&k.entries()))
}

/// Orthogonal complement in Q^n.
fn complement(vs: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    if vs.is_empty() {
        return (0..n)
            .map(|i| {
                let mut e = vec![Rational::zero(); n];
                e[i] = Rational::one();
                e
            })
            .collect();
    }
    rref_rows(vs.to_vec(), n).kernel()
}

/// Exact witness for an unstable 2 -> 3 module.
fn witness_two_three(k: &KroneckerModule) -> Option<Destabilizer> {
    // whole source into a plane: row dependency among the entries
    let all = vec![vec![Rational::one(), Rational::zero()], vec![Rational::zero(), Rational::one()]];
    if k.image_span(&all).len() <= 2 {
        return destabilizer(k, all);
    }
    // a source vector whose three images span at most a line
    let col = |j: usize| -> Matrix {
        let mut m = Matrix::zeros(3, 3);
        for c in 0..3 {
            for i in 0..3 {
                m[(i, c)] = k.coeffs[c][(i, j)].clone();
            }
        }
        m
    };
    let (a, b) = (col(0), col(1));
    let mut top = Vec::new();
    let mut g = UPoly::zero();
    for r in [(0, 1), (0, 2), (1, 2)] {
        for c in [(0, 1), (0, 2), (1, 2)] {
            let a11 = &a[(r.0, c.0)];
            let a12 = &a[(r.0, c.1)];
            let a21 = &a[(r.1, c.0)];
            let a22 = &a[(r.1, c.1)];
            let b11 = &b[(r.0, c.0)];
            let b12 = &b[(r.0, c.1)];
            let b21 = &b[(r.1, c.0)];
            let b22 = &b[(r.1, c.1)];
            let uu = a11 * a22 - a12 * a21;
            let uv = a11 * b22 + b11 * a22 - a12 * b21 - b12 * a21;
            let vv = b11 * b22 - b12 * b21;
            top.push(uu.clone());
            g = g.gcd(&UPoly::new(vec![vv, uv, uu]));
        }
    }
    if top.iter().all(Zero::is_zero) || g.is_zero() {
        if let Some(d) = destabilizer(k, vec![vec![Rational::one(), Rational::zero()]]) {
            return Some(d);
        }
    }
    if g.is_zero() {
        return None;
    }
    for u in rational_roots(&g) {
        if let Some(d) = destabilizer(k, vec![vec![u, Rational::one()]]) {
            return Some(d);
        }
    }
    None
}

/// Turn a witness for the transpose into one for the module itself.
fn from_transpose(k: &KroneckerModule, dt: &Destabilizer) -> Option<Destabilizer> {
    let s = complement(&dt.t, k.p);
    destabilizer(k, s)
}

fn random_int_matrix(r: usize, c: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    (0..r).map(|_| (0..c).map(|_| rng.gen_range(-50..=50)).collect()).collect()
}

const MAX_BLOWUP: usize = 40;

/// Outcome of one blow-up draw.
enum Blowup {
    Certified,
    Witness(Destabilizer),
    Undecided,
}

/// B = Σ K_c ⊗ A_c from Q^p ⊗ Q^a to Q^q ⊗ Q^b, square because p·a = q·b.
fn blowup_round(k: &KroneckerModule, ki: &KroneckerModule, a: usize, b: usize, rng: &mut ChaCha8Rng) -> Blowup {
    let (p, q) = (k.p, k.q);
    let n = p * a;
    let draws: Vec<Vec<Vec<i64>>> = (0..3).map(|_| random_int_matrix(b, a, rng)).collect();
    let mut big = Matrix::zeros(q * b, n);
    for c in 0..3 {
        for i in 0..q {
            for s in 0..p {
                let kc = &ki.coeffs[c][(i, s)];
                if kc.is_zero() {
                    continue;
                }
                for (kk, row) in draws[c].iter().enumerate() {
                    for (l, &x) in row.iter().enumerate() {
                        if x != 0 {
                            big[(i * b + kk, s * a + l)] += kc * Rational::from_integer(x.into());
                        }
                    }
                }
            }
        }
    }
    // integer matrix: full rank mod p gives det != 0 over Z
    if big.rank_mod_p(modp::PRIME) == Some(n) {
        return Blowup::Certified;
    }
    let image = big.transpose().rref();
    if image.rank() == n {
        return Blowup::Certified;
    }
    // second Wong sequence on the tensor-blown space
    let mut t: Vec<Vec<Rational>> = Vec::new();
    loop {
        let perp = complement(&t, q);
        let mut rows = Vec::new();
        for y in &perp {
            for kk in 0..b {
                let mut row = vec![Rational::zero(); n];
                for (i, yi) in y.iter().enumerate() {
                    if yi.is_zero() {
                        continue;
                    }
                    for (col, x) in big.row(i * b + kk).iter().enumerate() {
                        if !x.is_zero() {
                            row[col] += yi * x;
                        }
                    }
                }
                rows.push(row);
            }
        }
        let u = if rows.is_empty() {
            complement(&[], n)
        } else {
            rref_rows(rows, n).kernel()
        };
        let mut cols = Vec::new();
        for v in &u {
            for l in 0..a {
                cols.push((0..p).map(|s| v[s * a + l].clone()).collect::<Vec<_>>());
            }
        }
        let c_span = rref_rows(cols, p).rows;
        let t_next = ki.image_span(&c_span);
        if t_next.len() == t.len() {
            // W* ⊆ im B makes the limit the minimal maximally shrunk subspace
            for y in &t {
                for kk in 0..b {
                    let mut w = vec![Rational::zero(); q * b];
                    for (i, yi) in y.iter().enumerate() {
                        w[i * b + kk] = yi.clone();
                    }
                    if !image.contains(&w) {
                        return Blowup::Undecided;
                    }
                }
            }
            return match destabilizer(k, c_span) {
                Some(d) => Blowup::Witness(d),
                None => Blowup::Undecided,
            };
        }
        t = t_next;
    }
}

/// Blow-up certificates and Wong-sequence witnesses, without closed forms.
pub fn blowup_search(k: &KroneckerModule, budget: usize, seed: u64) -> KroneckerVerdict {
    let (p, q) = (k.p, k.q);
    if p == 0 || q == 0 {
        return KroneckerVerdict::Semistable;
    }
    let g = num_integer::gcd(p, q);
    let ki = k.integral();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scales = Vec::new();
    let mut m = 1;
    while m * p * q / g <= MAX_BLOWUP || m == 1 {
        scales.push(m);
        m += 1;
    }
    let mut tries = 0;
    while tries < budget.max(1) {
        for &m in &scales {
            let (a, b) = (m * q / g, m * p / g);
            match blowup_round(k, &ki, a, b, &mut rng) {
                Blowup::Certified => return KroneckerVerdict::Semistable,
                Blowup::Witness(d) => return KroneckerVerdict::Unstable(d),
                Blowup::Undecided => {}
            }
            tries += 1;
            if tries >= budget.max(1) {
                break;
            }
        }
    }
    KroneckerVerdict::ProbablySemistable
}

/// Semistability verdict: closed forms for p ≤ 1, q ≤ 1 and 2 x 3 shapes,
/// blow-up certificates otherwise.
pub fn is_semistable(k: &KroneckerModule, budget: usize, seed: u64) -> KroneckerVerdict {
    let (p, q) = (k.p, k.q);
    if p == 0 || q == 0 {
        return KroneckerVerdict::Semistable;
    }
    if p == 1 {
        let e1 = vec![vec![Rational::one()]];
        if k.image_span(&e1).len() == q {
            return KroneckerVerdict::Semistable;
        }
        return match destabilizer(k, e1) {
            Some(d) => KroneckerVerdict::Unstable(d),
            None => unreachable!("dependent column always destabilizes"),
        };
    }
    if q == 1 {
        let mut stacked = Vec::new();
        for c in 0..3 {
            stacked.push(k.coeffs[c].row(0).to_vec());
        }
        let ker = rref_rows(stacked, p).kernel();
        if ker.is_empty() {
            return KroneckerVerdict::Semistable;
        }
        return match destabilizer(k, ker) {
            Some(d) => KroneckerVerdict::Unstable(d),
            None => unreachable!("kernel vectors always destabilize a single row"),
        };
    }
    if (p, q) == (2, 3) || (p, q) == (3, 2) {
        if minors_semistable(k).expect("shape checked") {
            return KroneckerVerdict::Semistable;
        }
        let found = if (p, q) == (2, 3) {
            witness_two_three(k)
        } else {
            witness_two_three(&k.transpose()).and_then(|dt| from_transpose(k, &dt))
        };
        if let Some(d) = found {
            return KroneckerVerdict::Unstable(d);
        }
        if let KroneckerVerdict::Unstable(d) = blowup_search(k, budget, seed) {
            return KroneckerVerdict::Unstable(d);
        }
        // the maximal destabilizer is canonical hence rational; not reached in practice
        return KroneckerVerdict::ProbablySemistable;
    }
    blowup_search(k, budget, seed)
}

/// n·p·q − p² − q² + 1.
pub fn dim_kronecker_moduli(n: i64, p: i64, q: i64) -> i64 {
    n * p * q - p * p - q * q + 1
}

/// True iff the entries of a matrix of forms span as many dimensions as there are entries.
pub fn entries_independent(entries: &[Form]) -> bool {
    entries.iter().all(|f| f.degree() == entries[0].degree()) && span_rank(entries) == entries.len()
}
