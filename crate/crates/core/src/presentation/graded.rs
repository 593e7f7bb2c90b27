use num_traits::Zero;

use super::Presentation;
use crate::error::{Error, Result};
use crate::exact::{dim_forms, monomial_index, monomials, rref_rows, Matrix, Rational, Rref};

/// H0(F(t)) as the cokernel of H0(φ(t)): ambient ⊕ S^{e_i+t}, modulo the image.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub t: i64,
    /// start of each target block in the ambient space
    pub offsets: Vec<usize>,
    /// e_i + t per block
    pub degrees: Vec<i64>,
    pub ambient: usize,
    pub image: Rref,
    /// ambient coordinates whose unit vectors give a quotient basis
    pub basis: Vec<usize>,
}

impl GradedPiece {
    pub fn new(p: &Presentation, t: i64) -> Result<Self> {
        let degrees: Vec<i64> = p.target().iter().map(|e| e + t).collect();
        let mut offsets = Vec::with_capacity(degrees.len());
        let mut ambient = 0;
        for &d in &degrees {
            offsets.push(ambient);
            ambient += dim_forms(d);
        }
        let mut rows = Vec::new();
        for (j, &dj) in p.source().iter().enumerate() {
            let s = dj + t;
            if s < 0 {
                continue;
            }
            for mono in monomials(s as u32) {
                let mut v = vec![Rational::zero(); ambient];
                for i in 0..p.rows() {
                    if p.required_degree(i, j) < 0 {
                        continue;
                    }
                    for (e, c) in p.entry(i, j).terms() {
                        let idx = monomial_index(e[0] + mono[0], e[1] + mono[1], e[2] + mono[2]);
                        v[offsets[i] + idx] = c.clone();
                    }
                }
                rows.push(v);
            }
        }
        let image = rref_rows(rows, ambient);
        let basis = image.free_columns();
        let piece = GradedPiece {
            t,
            offsets,
            degrees,
            ambient,
            image,
            basis,
        };
        let expected = p.h0_twist(t) as usize;
        if piece.dim() != expected {
            return Err(Error::Inconsistent(format!(
                "graded piece at twist {} has dimension {}, expected {} (map not injective on sections)",
                t,
                piece.dim(),
                expected
            )));
        }
        Ok(piece)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Quotient coordinates of an ambient vector.
    pub fn project(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = v.to_vec();
        self.image.reduce(&mut w);
        self.basis.iter().map(|&b| w[b].clone()).collect()
    }

    /// Which block and exponent an ambient coordinate stands for.
    pub fn locate(&self, idx: usize) -> (usize, [u32; 3]) {
        let block = self.offsets.iter().rposition(|&o| o <= idx).expect("in range");
        let local = idx - self.offsets[block];
        let mono = monomials(self.degrees[block] as u32)[local];
        (block, mono)
    }
}

/// Multiply an ambient vector of `from` by a monomial of degree `s`,
/// landing in the ambient space of `to` (twist from.t + s).
pub fn multiply_ambient(from: &GradedPiece, to: &GradedPiece, v: &[Rational], mono: [u32; 3]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); to.ambient];
    for (idx, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (block, e) = from.locate(idx);
        let j = monomial_index(e[0] + mono[0], e[1] + mono[1], e[2] + mono[2]);
        out[to.offsets[block] + j] += c;
    }
    out
}

pub(super) fn h0_omega(p: &Presentation) -> Result<u64> {
    let g0 = GradedPiece::new(p, 0)?;
    let g1 = GradedPiece::new(p, 1)?;
    if g0.dim() == 0 {
        return Ok(0);
    }
    let mut cols = Vec::with_capacity(3 * g0.dim());
    for &b in &g0.basis {
        let mut unit = vec![Rational::zero(); g0.ambient];
        unit[b] = Rational::from_integer(1.into());
        for var in 0..3 {
            let mut mono = [0u32; 3];
            mono[var] = 1;
            cols.push(g1.project(&multiply_ambient(&g0, &g1, &unit, mono)));
        }
    }
    let m = Matrix::from_cols(&cols, g1.dim());
    Ok((3 * g0.dim() - m.rank()) as u64)
}
