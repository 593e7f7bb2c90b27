//! Reduced point configurations in the plane, their ideals and minimal free
//! resolutions, and the sheaves built from them.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    dim_forms, divides, monomials, mult_map, parse_rational, primitive_integer_vector, rref_rows, Form, Matrix, Rational,
};
use crate::presentation::Presentation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    points: Vec<[Rational; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiShape {
    pub generators: Vec<u32>,
    pub syzygies: Vec<u32>,
}

impl BettiShape {
    pub fn new(mut generators: Vec<u32>, mut syzygies: Vec<u32>) -> Self {
        generators.sort_unstable();
        syzygies.sort_unstable();
        BettiShape { generators, syzygies }
    }

    /// dim I_t predicted by the resolution 0 -> ⊕S(−b) -> ⊕S(−a) -> I -> 0.
    pub fn hilbert(&self, t: i64) -> i64 {
        let g: i64 = self.generators.iter().map(|&a| dim_forms(t - a as i64) as i64).sum();
        let s: i64 = self.syzygies.iter().map(|&b| dim_forms(t - b as i64) as i64).sum();
        g - s
    }
}

fn normalize(p: &[Rational; 3]) -> Option<[Rational; 3]> {
    let last = p.iter().rev().find(|c| !c.is_zero())?.clone();
    Some([&p[0] / &last, &p[1] / &last, &p[2] / &last])
}

#[derive(Serialize, Deserialize)]
struct PointConfigJson {
    points: Vec<Vec<String>>,
}

impl PointConfig {
    pub fn new(points: Vec<[Rational; 3]>) -> Result<Self> {
        let mut out: Vec<[Rational; 3]> = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let n = normalize(p).ok_or_else(|| Error::Precondition(format!("point {} is zero", i)))?;
            if out.contains(&n) {
                return Err(Error::Precondition(format!("point {} repeats an earlier point", i)));
            }
            out.push(n);
        }
        Ok(PointConfig { points: out })
    }

    pub fn from_ints(points: &[[i64; 3]]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|p| p.map(|c| Rational::from_integer(c.into())))
                .collect(),
        )
    }

    /// n distinct points with integer coordinates in [−bound, bound].
    pub fn random<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Self {
        let mut pts: Vec<[Rational; 3]> = Vec::with_capacity(n);
        while pts.len() < n {
            let p = [0; 3].map(|_| Rational::from_integer(rng.gen_range(-bound..=bound).into()));
            if let Some(q) = normalize(&p) {
                if !pts.contains(&q) {
                    pts.push(q);
                }
            }
        }
        PointConfig { points: pts }
    }

    pub fn points(&self) -> &[[Rational; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn subset(&self, idx: &[usize]) -> PointConfig {
        PointConfig {
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: PointConfigJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: e.to_string(),
        })?;
        let mut pts = Vec::with_capacity(j.points.len());
        for p in &j.points {
            if p.len() != 3 {
                return Err(Error::Shape(format!("point with {} coordinates", p.len())));
            }
            pts.push([parse_rational(&p[0])?, parse_rational(&p[1])?, parse_rational(&p[2])?]);
        }
        Self::new(pts)
    }

    pub fn to_json(&self) -> String {
        let j = PointConfigJson {
            points: self.points.iter().map(|p| p.iter().map(|c| c.to_string()).collect()).collect(),
        };
        serde_json::to_string(&j).expect("serializable")
    }
}

fn det3(a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]) -> Rational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

pub fn colinear_triple_exists(cfg: &PointConfig) -> bool {
    max_on_a_line(cfg) >= 3
}

/// Largest number of points on one line (1 for a single point).
pub fn max_on_a_line(cfg: &PointConfig) -> usize {
    let p = &cfg.points;
    let n = p.len();
    if n < 3 {
        return n;
    }
    let mut best = 2;
    for i in 0..n {
        for j in i + 1..n {
            let on = (0..n).filter(|&k| k == i || k == j || det3(&p[i], &p[j], &p[k]).is_zero()).count();
            best = best.max(on);
        }
    }
    best
}

fn evaluation_rows(cfg: &PointConfig, k: u32) -> Vec<Vec<Rational>> {
    let monos = monomials(k);
    cfg.points
        .iter()
        .map(|p| {
            monos
                .iter()
                .map(|e| {
                    let mut v = Rational::one();
                    for (c, &x) in p.iter().zip(e) {
                        for _ in 0..x {
                            v *= c;
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

pub fn contained_in_curve_of_degree(cfg: &PointConfig, k: u32) -> bool {
    !ideal_slice(cfg, k).is_empty()
}

/// Basis of the degree-t forms vanishing on the configuration.
pub fn ideal_slice(cfg: &PointConfig, t: u32) -> Vec<Form> {
    rref_rows(evaluation_rows(cfg, t), dim_forms(t as i64))
        .kernel()
        .into_iter()
        .map(|v| Form::from_coeffs(t, v).expect("sized"))
        .collect()
}

/// Whether some `size` of the points lie on a curve of degree `k`.
pub fn some_subset_on_curve(cfg: &PointConfig, size: usize, k: u32) -> bool {
    fn walk(cfg: &PointConfig, size: usize, k: u32, start: usize, idx: &mut Vec<usize>) -> bool {
        if idx.len() == size {
            return contained_in_curve_of_degree(&cfg.subset(idx), k);
        }
        for i in start..cfg.len() {
            idx.push(i);
            if walk(cfg, size, k, i + 1, idx) {
                return true;
            }
            idx.pop();
        }
        false
    }
    size <= cfg.len() && walk(cfg, size, k, 0, &mut Vec::with_capacity(size))
}

fn times_variables(vs: &[Vec<Rational>], from: u32) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(3 * vs.len());
    for v in vs {
        let f = Form::from_coeffs(from, v.clone()).expect("sized");
        for var in 0..3 {
            out.push(f.mul_var(var).coeffs().to_vec());
        }
    }
    out
}

pub const DEFAULT_CAP: u32 = 8;

pub fn minimal_resolution(cfg: &PointConfig, cap: u32) -> Result<BettiShape> {
    resolve(cfg, cap, None)
}

/// Same computation with the complement bases drawn in a shuffled order;
/// the Betti numbers do not depend on the choice.
pub fn minimal_resolution_shuffled(cfg: &PointConfig, cap: u32, seed: u64) -> Result<BettiShape> {
    resolve(cfg, cap, Some(seed))
}

fn resolve(cfg: &PointConfig, cap: u32, shuffle: Option<u64>) -> Result<BettiShape> {
    let mut rng = ChaCha8Rng::seed_from_u64(shuffle.unwrap_or(0));
    // generators degree by degree
    let mut gens: Vec<Form> = Vec::new();
    let mut prev: Vec<Vec<Rational>> = Vec::new();
    let mut last_new = 0;
    for t in 0..=cap {
        let mut slice: Vec<Vec<Rational>> = ideal_slice(cfg, t).into_iter().map(|f| integral(f.coeffs())).collect();
        if shuffle.is_some() {
            slice = scramble(slice, &mut rng);
        }
        let mut span = if t == 0 { Vec::new() } else { times_variables(&prev, t - 1) };
        let mut reduced = rref_rows(span.clone(), dim_forms(t as i64));
        for v in &slice {
            if !reduced.contains(v) {
                gens.push(Form::from_coeffs(t, v.clone()).expect("sized"));
                span.push(v.clone());
                reduced = rref_rows(span.clone(), dim_forms(t as i64));
                last_new = t;
            }
        }
        prev = slice;
    }
    // syzygies: kernels of (h_k) -> Σ h_k g_k, modulo V times the previous kernel
    let mut syz: Vec<u32> = Vec::new();
    let mut prev_kernel: Vec<Vec<Rational>> = Vec::new();
    let mut prev_layout: Vec<(usize, i64)> = Vec::new();
    for t in 1..=cap {
        // the syzygy module is free of rank #gens − 1, so nothing minimal is left
        if syz.len() + 1 >= gens.len() {
            break;
        }
        let layout: Vec<(usize, i64)> = {
            let mut off = 0;
            gens.iter()
                .map(|g| {
                    let d = t as i64 - g.degree() as i64;
                    let o = off;
                    off += dim_forms(d);
                    (o, d)
                })
                .collect()
        };
        let width: usize = layout.iter().map(|&(_, d)| dim_forms(d)).sum();
        if width == 0 {
            prev_layout = layout;
            continue;
        }
        let mut cols = Vec::with_capacity(width);
        for (g, &(_, d)) in gens.iter().zip(&layout) {
            if d < 0 {
                continue;
            }
            let m = mult_map(g, d as u32);
            for j in 0..m.cols() {
                cols.push(m.col(j));
            }
        }
        let map = Matrix::from_cols(&cols, dim_forms(t as i64));
        let mut kernel: Vec<Vec<Rational>> = map.kernel_basis().iter().map(|v| integral(v)).collect();
        if shuffle.is_some() {
            kernel = scramble(kernel, &mut rng);
        }
        // V · previous kernel, re-laid out in degree t
        let mut lifted = Vec::new();
        for v in &prev_kernel {
            for var in 0..3 {
                let mut w = vec![Rational::zero(); width];
                for (k, &(o_prev, d_prev)) in prev_layout.iter().enumerate() {
                    if d_prev < 0 {
                        continue;
                    }
                    let block = v[o_prev..o_prev + dim_forms(d_prev)].to_vec();
                    let f = Form::from_coeffs(d_prev as u32, block).expect("sized").mul_var(var);
                    let o = layout[k].0;
                    for (i, c) in f.coeffs().iter().enumerate() {
                        w[o + i] = c.clone();
                    }
                }
                lifted.push(w);
            }
        }
        let base = rref_rows(lifted, width).rank();
        let new = kernel.len() - base;
        for _ in 0..new {
            syz.push(t);
        }
        if new > 0 {
            last_new = last_new.max(t);
        }
        prev_kernel = kernel;
        prev_layout = layout;
    }
    let shape = BettiShape::new(gens.iter().map(Form::degree).collect(), syz);
    let complete = shape.generators.len() == shape.syzygies.len() + 1
        && last_new < cap
        && (0..=cap as i64).all(|t| shape.hilbert(t) == ideal_slice(cfg, t as u32).len() as i64)
        && {
            // the Hilbert polynomial of n reduced points
            let far = cap as i64 + cfg.len() as i64 + 3;
            shape.hilbert(far) == dim_forms(far) as i64 - cfg.len() as i64
        };
    if !complete {
        return Err(Error::ResolutionIncomplete { cap });
    }
    Ok(shape)
}

fn integral(v: &[Rational]) -> Vec<Rational> {
    primitive_integer_vector(v).into_iter().map(Rational::from_integer).collect()
}

/// Random unitriangular recombination of a basis, in random order.
fn scramble(mut vs: Vec<Vec<Rational>>, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    vs.shuffle(rng);
    let mut out = vs.clone();
    for i in 0..vs.len() {
        for j in 0..i {
            let c = Rational::from_integer(rng.gen_range(-3i64..=3).into());
            for (x, y) in out[i].iter_mut().zip(&vs[j]) {
                *x += &c * y;
            }
        }
    }
    out
}

/// Resolution-shape statements about ideals of general point configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointClaim {
    EightGeneral,
    FiveGeneral,
    SevenGeneral,
    NineOnCubic,
    OnePoint,
    TwoPoints,
    ThreeGeneral,
    ThreeColinear,
}

impl PointClaim {
    pub const ALL: [PointClaim; 8] = [
        PointClaim::EightGeneral,
        PointClaim::FiveGeneral,
        PointClaim::SevenGeneral,
        PointClaim::NineOnCubic,
        PointClaim::OnePoint,
        PointClaim::TwoPoints,
        PointClaim::ThreeGeneral,
        PointClaim::ThreeColinear,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            PointClaim::EightGeneral => "eight-general",
            PointClaim::FiveGeneral => "five-general",
            PointClaim::SevenGeneral => "seven-general",
            PointClaim::NineOnCubic => "nine-on-cubic",
            PointClaim::OnePoint => "one-point",
            PointClaim::TwoPoints => "two-points",
            PointClaim::ThreeGeneral => "three-general",
            PointClaim::ThreeColinear => "three-colinear",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.id() == id)
    }

    pub fn size(&self) -> usize {
        match self {
            PointClaim::EightGeneral => 8,
            PointClaim::FiveGeneral => 5,
            PointClaim::SevenGeneral => 7,
            PointClaim::NineOnCubic => 9,
            PointClaim::OnePoint => 1,
            PointClaim::TwoPoints => 2,
            PointClaim::ThreeGeneral | PointClaim::ThreeColinear => 3,
        }
    }

    pub fn predicted(&self) -> BettiShape {
        let (g, s): (&[u32], &[u32]) = match self {
            PointClaim::EightGeneral => (&[3, 3, 4], &[5, 5]),
            PointClaim::FiveGeneral => (&[2, 3, 3], &[4, 4]),
            PointClaim::SevenGeneral => (&[3, 3, 3], &[4, 5]),
            PointClaim::NineOnCubic => (&[3, 4, 4, 4], &[5, 5, 5]),
            PointClaim::OnePoint => (&[1, 1], &[2]),
            PointClaim::TwoPoints => (&[1, 2], &[3]),
            PointClaim::ThreeGeneral => (&[2, 2, 2], &[3, 3]),
            PointClaim::ThreeColinear => (&[1, 3], &[4]),
        };
        BettiShape::new(g.to_vec(), s.to_vec())
    }

    /// First violated genericity predicate, if any.
    pub fn check_predicates(&self, cfg: &PointConfig) -> Option<String> {
        if cfg.len() != self.size() {
            return Some(format!("needs {} points, got {}", self.size(), cfg.len()));
        }
        match self {
            PointClaim::EightGeneral => {
                if max_on_a_line(cfg) >= 4 {
                    return Some("four of the points lie on a line".into());
                }
                if some_subset_on_curve(cfg, 7, 2) {
                    return Some("seven of the points lie on a conic".into());
                }
            }
            PointClaim::FiveGeneral | PointClaim::ThreeGeneral => {
                if colinear_triple_exists(cfg) {
                    return Some("three of the points lie on a line".into());
                }
            }
            PointClaim::SevenGeneral => {
                if max_on_a_line(cfg) >= 4 {
                    return Some("four of the points lie on a line".into());
                }
                if contained_in_curve_of_degree(cfg, 2) {
                    return Some("the points lie on a conic".into());
                }
            }
            PointClaim::NineOnCubic => {
                if ideal_slice(cfg, 3).len() != 1 {
                    return Some("the points do not lie on a unique cubic".into());
                }
            }
            PointClaim::ThreeColinear => {
                if !colinear_triple_exists(cfg) {
                    return Some("the three points are not colinear".into());
                }
            }
            PointClaim::OnePoint | PointClaim::TwoPoints => {}
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClaimOutcome {
    Match,
    Mismatch(BettiShape),
}

pub fn verify_point_claim(claim: PointClaim, cfg: &PointConfig) -> Result<ClaimOutcome> {
    if let Some(why) = claim.check_predicates(cfg) {
        return Err(Error::Precondition(format!("{}: {}", claim.id(), why)));
    }
    let shape = minimal_resolution(cfg, DEFAULT_CAP)?;
    Ok(if shape == claim.predicted() {
        ClaimOutcome::Match
    } else {
        ClaimOutcome::Mismatch(shape)
    })
}

/// Random configuration satisfying the claim's predicates.
pub fn sample_for_claim(claim: PointClaim, seed: u64) -> PointConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let cfg = match claim {
            PointClaim::ThreeColinear => {
                // two random points and a rational combination of them
                let base = PointConfig::random(2, 9, &mut rng);
                let (a, b) = (&base.points[0], &base.points[1]);
                let s = Rational::from_integer(rng.gen_range(1i64..=5).into());
                let c = [&a[0] + &s * &b[0], &a[1] + &s * &b[1], &a[2] + &s * &b[2]];
                match PointConfig::new(vec![a.clone(), b.clone(), c]) {
                    Ok(c) => c,
                    Err(_) => continue,
                }
            }
            _ => PointConfig::random(claim.size(), 9, &mut rng),
        };
        if claim.check_predicates(&cfg).is_none() {
            return cfg;
        }
    }
}

/// Sheaf on a sextic f through two points: [[h, ℓ], [g, q]] on O(−4) ⊕ O(−1) -> O ⊕ O(1)
/// with ℓ the line through the points, q a conic cutting out the pair on ℓ, and
/// h·q − g·ℓ = f.
pub fn flag_pair_presentation(cfg: &PointConfig, sextic: &Form) -> Result<Presentation> {
    if cfg.len() != 2 {
        return Err(Error::Precondition(format!("needs 2 points, got {}", cfg.len())));
    }
    if sextic.degree() != 6 || sextic.is_zero() {
        return Err(Error::DegreeMismatch(format!("expected a nonzero sextic, got degree {}", sextic.degree())));
    }
    for (i, p) in cfg.points.iter().enumerate() {
        if !sextic.eval(p).is_zero() {
            return Err(Error::Precondition(format!("sextic does not vanish at point {}", i)));
        }
    }
    let line = ideal_slice(cfg, 1).pop().expect("two points lie on a line");
    let conic = ideal_slice(cfg, 2)
        .into_iter()
        .find(|q| !divides(&line, q).expect("nonzero line"))
        .ok_or_else(|| Error::Precondition("no conic through the points avoids the line".into()))?;
    // unknown h (degree 4) and g (degree 5): q·h − ℓ·g = f
    let a = mult_map(&conic, 4);
    let b = mult_map(&line, 5);
    let mut cols: Vec<Vec<Rational>> = (0..a.cols()).map(|j| a.col(j)).collect();
    cols.extend((0..b.cols()).map(|j| b.col(j).into_iter().map(|x| -x).collect::<Vec<_>>()));
    let m = Matrix::from_cols(&cols, dim_forms(6));
    let sol = m
        .solve(sextic.coeffs())
        .ok_or_else(|| Error::Inconsistent("sextic is not in the ideal of the two points".into()))?;
    let h = Form::from_coeffs(4, sol[..a.cols()].to_vec())?;
    let g = Form::from_coeffs(5, sol[a.cols()..].to_vec())?;
    Presentation::new(vec![-4, -1], vec![0, 1], vec![vec![h, line], vec![g, conic]])
}
