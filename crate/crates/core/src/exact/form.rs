use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::matrix::Matrix;
use super::Rational;
use crate::error::{Error, Result};

/// h0(O(d)) on the plane, i.e. the number of monomials of degree `d`.
pub fn dim_forms(d: i64) -> usize {
    if d < 0 {
        0
    } else {
        let d = d as usize;
        (d + 1) * (d + 2) / 2
    }
}

/// Position of X^a Y^b Z^c in the graded-lex basis (X > Y > Z) of its degree.
pub fn monomial_index(_a: u32, b: u32, c: u32) -> usize {
    let m = (b + c) as usize;
    m * (m + 1) / 2 + c as usize
}

/// Exponent triples of degree `d` in basis order.
pub fn monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(dim_forms(d as i64));
    for m in 0..=d {
        for c in 0..=m {
            out.push([d - m, m - c, c]);
        }
    }
    out
}

/// A homogeneous polynomial in X, Y, Z with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    degree: u32,
    coeffs: Vec<Rational>,
}

impl Form {
    pub fn zero(degree: u32) -> Self {
        Form {
            degree,
            coeffs: vec![Rational::zero(); dim_forms(degree as i64)],
        }
    }

    pub fn constant(c: Rational) -> Self {
        Form {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The coordinate form: 0 = X, 1 = Y, 2 = Z.
    pub fn var(v: usize) -> Self {
        let mut f = Form::zero(1);
        f.coeffs[v] = Rational::one();
        f
    }

    pub fn monomial(exp: [u32; 3], c: Rational) -> Self {
        let mut f = Form::zero(exp[0] + exp[1] + exp[2]);
        f.coeffs[monomial_index(exp[0], exp[1], exp[2])] = c;
        f
    }

    pub fn from_coeffs(degree: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != dim_forms(degree as i64) {
            return Err(Error::DegreeMismatch(format!(
                "{} coefficients for degree {}",
                coeffs.len(),
                degree
            )));
        }
        Ok(Form { degree, coeffs })
    }

    pub fn from_ints(degree: u32, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(
            degree,
            coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(),
        )
    }

    /// Integer coefficients drawn uniformly from [-bound, bound].
    pub fn random<R: Rng + ?Sized>(degree: u32, bound: i64, rng: &mut R) -> Self {
        let coeffs = (0..dim_forms(degree as i64))
            .map(|_| Rational::from_integer(rng.gen_range(-bound..=bound).into()))
            .collect();
        Form { degree, coeffs }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: [u32; 3]) -> &Rational {
        &self.coeffs[monomial_index(exp[0], exp[1], exp[2])]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero (exponent, coefficient) pairs in basis order.
    pub fn terms(&self) -> impl Iterator<Item = ([u32; 3], &Rational)> + '_ {
        monomials(self.degree)
            .into_iter()
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    /// Scaled so the graded-lex leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn eval(&self, pt: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in self.terms() {
            let mut t = c.clone();
            for v in 0..3 {
                for _ in 0..e[v] {
                    t *= &pt[v];
                }
            }
            acc += t;
        }
        acc
    }

    /// Multiply by a coordinate variable.
    pub fn mul_var(&self, v: usize) -> Self {
        let mut out = Form::zero(self.degree + 1);
        for (mut e, c) in self.terms() {
            e[v] += 1;
            out.coeffs[monomial_index(e[0], e[1], e[2])] += c;
        }
        out
    }

    /// Proportional integer coefficients with content 1.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        super::primitive_integer_vector(&self.coeffs)
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degrees");
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        assert_eq!(self.degree, rhs.degree, "subtracting forms of different degrees");
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Form {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        let mut out = Form::zero(self.degree + rhs.degree);
        let rt: Vec<_> = rhs.terms().collect();
        for (e, a) in self.terms() {
            for (f, b) in &rt {
                let idx = monomial_index(e[0] + f[0], e[1] + f[1], e[2] + f[2]);
                out.coeffs[idx] += a * *b;
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Form {
            type Output = Form;
            fn $m(self, rhs: Form) -> Form {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            let mono = monomial_text(e);
            if mono.is_empty() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", a, mono)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn monomial_text(e: [u32; 3]) -> String {
    let mut parts = Vec::new();
    for (v, name) in ["X", "Y", "Z"].iter().enumerate() {
        match e[v] {
            0 => {}
            1 => parts.push(name.to_string()),
            k => parts.push(format!("{}^{}", name, k)),
        }
    }
    parts.join("*")
}

/// Matrix of g -> f*g from degree-`s` forms to degree `s + deg f` forms.
pub fn mult_map(f: &Form, s: u32) -> Matrix {
    let rows = dim_forms((s + f.degree) as i64);
    let basis = monomials(s);
    let mut m = Matrix::zeros(rows, basis.len());
    let ft: Vec<_> = f.terms().collect();
    for (j, g) in basis.iter().enumerate() {
        for (e, c) in &ft {
            let i = monomial_index(e[0] + g[0], e[1] + g[1], e[2] + g[2]);
            m[(i, j)] = (*c).clone();
        }
    }
    m
}

/// True iff the forms are linearly independent over Q.
pub fn linearly_independent(fs: &[Form]) -> Result<bool> {
    if fs.is_empty() {
        return Ok(true);
    }
    let d = fs[0].degree;
    if let Some(bad) = fs.iter().find(|f| f.degree != d) {
        return Err(Error::DegreeMismatch(format!(
            "independence test on degrees {} and {}",
            d, bad.degree
        )));
    }
    Ok(span_rank(fs) == fs.len())
}

/// Dimension of the span of same-degree forms.
pub fn span_rank(fs: &[Form]) -> usize {
    if fs.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = fs.iter().map(|f| f.coeffs.clone()).collect();
    Matrix::from_rows(rows).rank()
}

/// Reducibility test for conics through the Gram determinant.
pub fn conic_is_irreducible(q: &Form) -> Result<bool> {
    if q.degree != 2 {
        return Err(Error::DegreeMismatch(format!(
            "conic test on a form of degree {}",
            q.degree
        )));
    }
    if q.is_zero() {
        return Err(Error::Precondition("conic test on the zero form".into()));
    }
    let half = Rational::new(1.into(), 2.into());
    let c = &q.coeffs;
    // X^2, XY, XZ, Y^2, YZ, Z^2
    let g = Matrix::from_rows(vec![
        vec![c[0].clone(), &c[1] * &half, &c[2] * &half],
        vec![&c[1] * &half, c[3].clone(), &c[4] * &half],
        vec![&c[2] * &half, &c[4] * &half, c[5].clone()],
    ]);
    Ok(!g.det().is_zero())
}

/// Determinant of a square matrix of forms with graded degrees, by Laplace
/// expansion along the first row. None when it vanishes identically.
pub fn det_forms(m: &[Vec<Form>]) -> Option<Form> {
    let n = m.len();
    if n == 0 {
        return Some(Form::one());
    }
    let mut acc: Option<Form> = None;
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Form>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, f)| f.clone()).collect())
            .collect();
        let Some(sub) = det_forms(&minor) else { continue };
        let mut term = &m[0][j] * &sub;
        if j % 2 == 1 {
            term = -&term;
        }
        acc = Some(match acc {
            None => term,
            Some(a) => &a + &term,
        });
    }
    acc.filter(|f| !f.is_zero())
}
