//! Presentations 0 -> ⊕O(d_j) -> ⊕O(e_i) -> F -> 0 and the invariants of F.

mod graded;
mod json;

pub use graded::{multiply_ambient, GradedPiece};
pub use json::PresentationJson;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{dim_forms, Form, Matrix, Rational};

/// h0(O(k)).
pub fn h0_line(k: i64) -> i64 {
    dim_forms(k) as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    source: Vec<i64>,
    target: Vec<i64>,
    /// target row × source column
    matrix: Vec<Vec<Form>>,
}

/// Hilbert polynomial r·m + χ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertData {
    pub r: i64,
    pub chi: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyProfile {
    pub h0_fm1: u64,
    pub h1_f: u64,
    pub h0_omega: u64,
    pub h1_f1: u64,
}

impl CohomologyProfile {
    pub fn as_array(&self) -> [u64; 4] {
        [self.h0_fm1, self.h1_f, self.h0_omega, self.h1_f1]
    }
}

fn sort_perm(v: &[i64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by_key(|&i| v[i]);
    idx
}

impl Presentation {
    /// Checks every entry degree and sorts both twist lists ascending,
    /// permuting rows and columns along.
    pub fn new(source: Vec<i64>, target: Vec<i64>, matrix: Vec<Vec<Form>>) -> Result<Self> {
        if matrix.len() != target.len() || matrix.iter().any(|r| r.len() != source.len()) {
            return Err(Error::Shape(format!(
                "matrix must be {} x {}",
                target.len(),
                source.len()
            )));
        }
        let mut checked = Vec::with_capacity(target.len());
        for (i, row) in matrix.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, f) in row.into_iter().enumerate() {
                let k = target[i] - source[j];
                if f.is_zero() {
                    out.push(Form::zero(k.max(0) as u32));
                } else if k < 0 || f.degree() as i64 != k {
                    return Err(Error::EntryDegree {
                        row: i,
                        col: j,
                        found: f.degree(),
                        expected: k as i32,
                    });
                } else {
                    out.push(f);
                }
            }
            checked.push(out);
        }
        let rp = sort_perm(&target);
        let cp = sort_perm(&source);
        let matrix = rp
            .iter()
            .map(|&i| cp.iter().map(|&j| checked[i][j].clone()).collect())
            .collect();
        Ok(Presentation {
            source: cp.iter().map(|&j| source[j]).collect(),
            target: rp.iter().map(|&i| target[i]).collect(),
            matrix,
        })
    }

    /// Build entry by entry; `entry(i, j, k)` receives the required degree k ≥ 0.
    pub fn from_fn(
        source: Vec<i64>,
        target: Vec<i64>,
        mut entry: impl FnMut(usize, usize, u32) -> Form,
    ) -> Result<Self> {
        let matrix = (0..target.len())
            .map(|i| {
                (0..source.len())
                    .map(|j| {
                        let k = target[i] - source[j];
                        if k < 0 {
                            Form::zero(0)
                        } else {
                            entry(i, j, k as u32)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(source, target, matrix)
    }

    pub fn source(&self) -> &[i64] {
        &self.source
    }

    pub fn target(&self) -> &[i64] {
        &self.target
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Form>] {
        &self.matrix
    }

    pub fn required_degree(&self, i: usize, j: usize) -> i64 {
        self.target[i] - self.source[j]
    }

    /// Same twists, replaced matrix (entries are re-checked).
    pub fn with_matrix(&self, matrix: Vec<Vec<Form>>) -> Result<Self> {
        Self::new(self.source.clone(), self.target.clone(), matrix)
    }

    pub fn hilbert(&self) -> Result<HilbertData> {
        if self.source.len() != self.target.len() {
            return Err(Error::NotOneDimensional(format!(
                "{} source and {} target summands leave a quadratic Hilbert term",
                self.source.len(),
                self.target.len()
            )));
        }
        let r: i64 = self.target.iter().sum::<i64>() - self.source.iter().sum::<i64>();
        if r <= 0 {
            return Err(Error::NotOneDimensional(format!("multiplicity {}", r)));
        }
        let chi = self.target.iter().map(|&e| h0_poly(e)).sum::<i64>()
            - self.source.iter().map(|&d| h0_poly(d)).sum::<i64>();
        Ok(HilbertData { r, chi })
    }

    /// Evaluation at a point as a rational matrix.
    pub fn eval(&self, pt: &[Rational; 3]) -> Matrix {
        let mut m = Matrix::zeros(self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if self.required_degree(i, j) >= 0 {
                    m[(i, j)] = self.matrix[i][j].eval(pt);
                }
            }
        }
        m
    }

    /// Generic-rank certificate: full column rank at one of 8 random points
    /// proves the sheaf map injective.
    pub fn is_injective(&self) -> bool {
        if self.cols() > self.rows() {
            return false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x1d_c0de);
        for _ in 0..8 {
            let pt = [
                Rational::from_integer(rng.gen_range(-100i64..=100).into()),
                Rational::from_integer(rng.gen_range(-100i64..=100).into()),
                Rational::from_integer(rng.gen_range(-100i64..=100).into()),
            ];
            if pt.iter().all(Zero::is_zero) {
                continue;
            }
            if self.eval(&pt).rank() == self.cols() {
                return true;
            }
        }
        false
    }

    pub fn h0_twist(&self, t: i64) -> u64 {
        let v = self.target.iter().map(|&e| h0_line(e + t)).sum::<i64>()
            - self.source.iter().map(|&d| h0_line(d + t)).sum::<i64>();
        v.max(0) as u64
    }

    pub fn h1_twist(&self, t: i64) -> Result<u64> {
        let h = self.hilbert()?;
        let h0 = self.target.iter().map(|&e| h0_line(e + t)).sum::<i64>()
            - self.source.iter().map(|&d| h0_line(d + t)).sum::<i64>();
        let v = h0 - (h.r * t + h.chi);
        if h0 < 0 || v < 0 {
            return Err(Error::Inconsistent(format!(
                "negative cohomology at twist {} (h0 {}, h1 {})",
                t, h0, v
            )));
        }
        Ok(v as u64)
    }

    pub fn graded_piece(&self, t: i64) -> Result<GradedPiece> {
        GradedPiece::new(self, t)
    }

    /// h0(F ⊗ Ω¹(1)): kernel of V ⊗ H0(F) -> H0(F(1)).
    pub fn h0_omega(&self) -> Result<u64> {
        graded::h0_omega(self)
    }

    pub fn h1_omega(&self) -> Result<u64> {
        let v = self.h0_omega()? as i64 - 3 * self.h0_twist(0) as i64
            + self.h0_twist(1) as i64
            + 3 * self.h1_twist(0)? as i64
            - self.h1_twist(1)? as i64;
        if v < 0 {
            return Err(Error::Inconsistent(format!("h1(F ⊗ Ω¹(1)) = {}", v)));
        }
        Ok(v as u64)
    }

    pub fn profile(&self) -> Result<CohomologyProfile> {
        Ok(CohomologyProfile {
            h0_fm1: self.h0_twist(-1),
            h1_f: self.h1_twist(0)?,
            h0_omega: self.h0_omega()?,
            h1_f1: self.h1_twist(1)?,
        })
    }

    /// Presentation of Ext¹(F, ω): twists reflected through -3, matrix transposed.
    pub fn dual(&self) -> Presentation {
        let source = self.target.iter().map(|e| -3 - e).collect();
        let target = self.source.iter().map(|d| -3 - d).collect();
        let matrix = (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self.matrix[i][j].clone()).collect())
            .collect();
        Presentation::new(source, target, matrix).expect("transpose keeps degrees")
    }

    pub fn twist(&self, k: i64) -> Presentation {
        Presentation {
            source: self.source.iter().map(|d| d + k).collect(),
            target: self.target.iter().map(|e| e + k).collect(),
            matrix: self.matrix.clone(),
        }
    }

    /// Cancel every nonzero constant entry between equal twists.
    pub fn minimize(&self) -> Presentation {
        let mut p = self.clone();
        loop {
            let hit = (0..p.rows()).find_map(|i| {
                (0..p.cols()).find(|&j| p.required_degree(i, j) == 0 && !p.matrix[i][j].is_zero()).map(|j| (i, j))
            });
            let Some((i0, j0)) = hit else {
                return p;
            };
            let c = p.matrix[i0][j0].coeffs()[0].clone();
            let inv = Form::constant(c.recip());
            let mut matrix = Vec::new();
            for i in 0..p.rows() {
                if i == i0 {
                    continue;
                }
                let factor = &p.matrix[i][j0] * &inv;
                let mut row = Vec::new();
                for j in 0..p.cols() {
                    if j == j0 {
                        continue;
                    }
                    let k = p.required_degree(i, j);
                    if k < 0 {
                        row.push(Form::zero(0));
                        continue;
                    }
                    let mut e = p.matrix[i][j].clone();
                    if p.required_degree(i, j0) >= 0 && p.required_degree(i0, j) >= 0 {
                        e = &e - &(&factor * &p.matrix[i0][j]);
                    }
                    row.push(e);
                }
                matrix.push(row);
            }
            let source = (0..p.cols()).filter(|&j| j != j0).map(|j| p.source[j]).collect();
            let target = (0..p.rows()).filter(|&i| i != i0).map(|i| p.target[i]).collect();
            p = Presentation::new(source, target, matrix).expect("elimination keeps degrees");
        }
    }

    /// Left/right action by block-triangular automorphisms: returns b·φ·a.
    pub fn act(&self, b: &[Vec<Form>], a: &[Vec<Form>]) -> Result<Presentation> {
        let n = self.rows();
        let m = self.cols();
        let mut prod = vec![vec![Form::zero(0); m]; n];
        for i in 0..n {
            for j in 0..m {
                let k = self.required_degree(i, j);
                if k < 0 {
                    continue;
                }
                let mut acc = Form::zero(k as u32);
                for i2 in 0..n {
                    let kb = self.target[i] - self.target[i2];
                    if kb < 0 {
                        continue;
                    }
                    for j2 in 0..m {
                        let ka = self.source[j2] - self.source[j];
                        if ka < 0 || self.required_degree(i2, j2) < 0 {
                            continue;
                        }
                        let t = &(&b[i][i2] * &self.matrix[i2][j2]) * &a[j2][j];
                        acc = &acc + &t;
                    }
                }
                prod[i][j] = acc;
            }
        }
        self.with_matrix(prod)
    }
}

/// (k+1)(k+2)/2 as a polynomial in k, valid for negative k too.
fn h0_poly(k: i64) -> i64 {
    (k + 1) * (k + 2) / 2
}
