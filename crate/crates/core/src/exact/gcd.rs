//! GCD of ternary forms through bivariate polynomials over Q.

use num_traits::{One, Zero};

use super::form::{monomial_index, Form};
use super::Rational;
use crate::error::{Error, Result};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<Rational>);

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with -1 for zero.
    pub fn deg(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn lc(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        UPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        UPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }

    pub fn scale(&self, s: &Rational) -> UPoly {
        UPoly::new(self.0.iter().map(|a| a * s).collect())
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let inv = d.lc().recip();
        if r.len() < d.0.len() {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, b) in d.0.iter().enumerate() {
                    r[k + j] -= &c * b;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }
}

/// Polynomial in y whose coefficients are polynomials in x.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly2(Vec<UPoly>);

impl Poly2 {
    fn new(mut c: Vec<UPoly>) -> Self {
        while c.last().is_some_and(UPoly::is_zero) {
            c.pop();
        }
        Poly2(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &UPoly {
        self.0.last().expect("nonzero")
    }

    fn content(&self) -> UPoly {
        let mut g = UPoly::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.deg() == 0 {
                break;
            }
        }
        g
    }

    fn div_upoly(&self, c: &UPoly) -> Poly2 {
        Poly2::new(
            self.0
                .iter()
                .map(|a| {
                    let (q, r) = a.divrem(c);
                    debug_assert!(r.is_zero());
                    q
                })
                .collect(),
        )
    }

    fn mul_upoly(&self, c: &UPoly) -> Poly2 {
        Poly2::new(self.0.iter().map(|a| a.mul(c)).collect())
    }

    fn primitive(&self) -> Poly2 {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        self.div_upoly(&c)
    }

    /// Pseudo-remainder with respect to y.
    fn prem(&self, b: &Poly2) -> Poly2 {
        let mut r = self.clone();
        let db = b.deg();
        let lb = b.lc().clone();
        while !r.is_zero() && r.deg() >= db {
            let shift = r.deg() - db;
            let lr = r.lc().clone();
            let mut next: Vec<UPoly> = r.0.iter().map(|c| c.mul(&lb)).collect();
            for (j, c) in b.0.iter().enumerate() {
                next[j + shift] = next[j + shift].sub(&c.mul(&lr));
            }
            r = Poly2::new(next);
        }
        r
    }
}

/// Primitive PRS gcd of y-primitive bivariate polynomials.
fn primitive_gcd(a: &Poly2, b: &Poly2) -> Poly2 {
    let (mut a, mut b) = if a.deg() >= b.deg() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    while !b.is_zero() {
        let r = a.prem(&b);
        a = b;
        b = r.primitive();
    }
    a
}

fn bivariate_gcd(a: &Poly2, b: &Poly2) -> Poly2 {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let ca = a.content();
    let cb = b.content();
    let c = ca.gcd(&cb);
    let g = primitive_gcd(&a.div_upoly(&ca), &b.div_upoly(&cb)).primitive();
    g.mul_upoly(&c)
}

fn z_valuation(f: &Form) -> u32 {
    f.terms().map(|(e, _)| e[2]).min().unwrap_or(0)
}

/// f(x, y, 1) after dividing out Z^k.
fn dehomogenize(f: &Form, k: u32) -> Poly2 {
    let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); f.degree() as usize + 1];
    for (e, c) in f.terms() {
        debug_assert!(e[2] >= k);
        let row = &mut rows[e[1] as usize];
        let a = e[0] as usize;
        if row.len() <= a {
            row.resize(a + 1, Rational::zero());
        }
        row[a] = c.clone();
    }
    Poly2::new(rows.into_iter().map(UPoly::new).collect())
}

fn homogenize(p: &Poly2) -> Form {
    let mut d = 0u32;
    for (b, c) in p.0.iter().enumerate() {
        if !c.is_zero() {
            d = d.max(b as u32 + c.deg() as u32);
        }
    }
    let mut out = Form::zero(d);
    let mut coeffs = out.coeffs().to_vec();
    for (b, c) in p.0.iter().enumerate() {
        for (a, v) in c.0.iter().enumerate() {
            if !v.is_zero() {
                let (a, b) = (a as u32, b as u32);
                coeffs[monomial_index(a, b, d - a - b)] = v.clone();
            }
        }
    }
    out = Form::from_coeffs(d, coeffs).expect("sized");
    out
}

/// Monic greatest common divisor of two forms.
pub fn form_gcd(f: &Form, g: &Form) -> Result<Form> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Err(Error::GcdUndefined),
        (true, false) => return Ok(g.monic()),
        (false, true) => return Ok(f.monic()),
        _ => {}
    }
    let kf = z_valuation(f);
    let kg = z_valuation(g);
    let k = kf.min(kg);
    let h = homogenize(&bivariate_gcd(&dehomogenize(f, kf), &dehomogenize(g, kg)));
    let zk = Form::monomial([0, 0, k], Rational::one());
    Ok((&h * &zk).monic())
}

/// Gcd of a list of forms, skipping zeros. None if all are zero.
pub fn gcd_all(fs: &[Form]) -> Option<Form> {
    let mut acc: Option<Form> = None;
    for f in fs {
        if f.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => f.monic(),
            Some(a) => form_gcd(&a, f).expect("nonzero"),
        });
        if acc.as_ref().is_some_and(|a| a.degree() == 0) {
            break;
        }
    }
    acc
}

/// True iff `f` divides `g`.
pub fn divides(f: &Form, g: &Form) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if g.is_zero() {
        return Ok(true);
    }
    if f.degree() > g.degree() {
        return Ok(false);
    }
    Ok(form_gcd(f, g)?.degree() == f.degree())
}

/// Exact quotient g / f, or None when f does not divide g.
pub fn exact_quotient(g: &Form, f: &Form) -> Result<Option<Form>> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if g.is_zero() {
        return Ok(Some(Form::zero(g.degree().saturating_sub(f.degree()))));
    }
    if f.degree() > g.degree() {
        return Ok(None);
    }
    let s = g.degree() - f.degree();
    let m = super::form::mult_map(f, s);
    match m.solve(g.coeffs()) {
        Some(h) => Ok(Some(Form::from_coeffs(s, h)?)),
        None => Ok(None),
    }
}
