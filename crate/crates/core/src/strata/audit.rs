use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{generate, StratumRow};
use crate::error::Result;
use crate::exact::{monomial_index, monomials, Form, Matrix, Rational};
use crate::presentation::{h0_line, Presentation};

/// dim M(6, χ)
pub const MODULI_DIM: i64 = 37;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimAudit {
    pub chi: i64,
    pub id: String,
    /// dim Hom(A, B)
    pub dim_w: i64,
    /// dim (Aut A × Aut B) / scalars
    pub dim_g: i64,
    pub dim_x: i64,
    pub expected: i64,
    pub holds: bool,
}

fn hom_dim(from: &[i64], to: &[i64]) -> i64 {
    to.iter().map(|&e| from.iter().map(|&d| h0_line(e - d)).sum::<i64>()).sum()
}

/// Naive count dim W − dim G against 37 − codim.
pub fn dim_audit(row: &StratumRow) -> DimAudit {
    let dim_w = hom_dim(&row.source, &row.target);
    let dim_g = hom_dim(&row.source, &row.source) + hom_dim(&row.target, &row.target) - 1;
    let expected = MODULI_DIM - row.codim as i64;
    DimAudit {
        chi: row.chi,
        id: row.id.clone(),
        dim_w,
        dim_g,
        dim_x: dim_w - dim_g,
        expected,
        holds: dim_w - dim_g == expected,
    }
}

/// Dimension count at a generated point: the stratum is (G·W) / G where W
/// is cut out by the forced zeros, so
/// dim X = dim(T W + T orbit) − dim orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitAudit {
    pub chi: i64,
    pub id: String,
    pub seed: u64,
    pub free_dim: i64,
    pub orbit_dim: i64,
    /// stabilizer in Aut A × Aut B, scalars included
    pub stabilizer: i64,
    pub tangent_dim: i64,
    pub dim_x: i64,
    pub expected: i64,
    pub holds: bool,
}

struct Coords {
    offsets: Vec<Vec<Option<usize>>>,
    len: usize,
}

impl Coords {
    fn new(p: &Presentation) -> Self {
        let mut len = 0;
        let offsets = (0..p.rows())
            .map(|i| {
                (0..p.cols())
                    .map(|j| {
                        let k = p.required_degree(i, j);
                        (k >= 0).then(|| {
                            let o = len;
                            len += h0_line(k) as usize;
                            o
                        })
                    })
                    .collect()
            })
            .collect();
        Coords { offsets, len }
    }

    fn add(&self, v: &mut [Rational], i: usize, j: usize, f: &Form) {
        let Some(o) = self.offsets[i][j] else { return };
        for (e, c) in f.terms() {
            v[o + monomial_index(e[0], e[1], e[2])] += c;
        }
    }
}

fn orbit_vectors(p: &Presentation, c: &Coords) -> (Vec<Vec<Rational>>, i64) {
    let mut out = Vec::new();
    let mut group_dim = 0;
    let (n, m) = (p.rows(), p.cols());
    for i in 0..n {
        for i2 in 0..n {
            let k = p.target()[i] - p.target()[i2];
            if k < 0 {
                continue;
            }
            for mono in monomials(k as u32) {
                group_dim += 1;
                let g = Form::monomial(mono, Rational::one());
                let mut v = vec![Rational::zero(); c.len];
                for j in 0..m {
                    if p.required_degree(i2, j) >= 0 && p.required_degree(i, j) >= 0 {
                        c.add(&mut v, i, j, &(&g * p.entry(i2, j)));
                    }
                }
                out.push(v);
            }
        }
    }
    for j2 in 0..m {
        for j in 0..m {
            let k = p.source()[j2] - p.source()[j];
            if k < 0 {
                continue;
            }
            for mono in monomials(k as u32) {
                group_dim += 1;
                let g = Form::monomial(mono, Rational::one());
                let mut v = vec![Rational::zero(); c.len];
                for i in 0..n {
                    if p.required_degree(i, j2) >= 0 && p.required_degree(i, j) >= 0 {
                        c.add(&mut v, i, j, &(p.entry(i, j2) * &g));
                    }
                }
                out.push(v);
            }
        }
    }
    (out, group_dim)
}

pub fn orbit_audit(row: &StratumRow, seed: u64) -> Result<OrbitAudit> {
    let p = generate(row.chi, &row.id, seed)?;
    let c = Coords::new(&p);
    let (orbit, group_dim) = orbit_vectors(&p, &c);
    let orbit_dim = Matrix::from_rows(orbit.clone()).rank() as i64;
    let mut rows = orbit;
    let mut free_dim = 0;
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            let Some(o) = c.offsets[i][j] else { continue };
            if row.is_forced_zero(i, j) {
                continue;
            }
            for t in 0..h0_line(p.required_degree(i, j)) as usize {
                let mut v = vec![Rational::zero(); c.len];
                v[o + t] = Rational::one();
                rows.push(v);
                free_dim += 1;
            }
        }
    }
    let tangent_dim = Matrix::from_rows(rows).rank() as i64;
    let dim_x = tangent_dim - orbit_dim;
    let expected = MODULI_DIM - row.codim as i64;
    Ok(OrbitAudit {
        chi: row.chi,
        id: row.id.clone(),
        seed,
        free_dim,
        orbit_dim,
        stabilizer: group_dim - orbit_dim,
        tangent_dim,
        dim_x,
        expected,
        holds: dim_x == expected,
    })
}
