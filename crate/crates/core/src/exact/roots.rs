//! Rational roots of univariate polynomials by Sturm isolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::gcd::UPoly;
use super::Rational;

fn sturm_chain(p: &UPoly) -> Vec<UPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].divrem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-Rational::one()));
    }
    chain
}

fn sign_changes(chain: &[UPoly], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for q in chain {
        let v = q.eval(x);
        let s = if v.is_zero() {
            continue;
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Rational with the smallest denominator in [l, r].
pub fn simplest_between(l: &Rational, r: &Rational) -> Rational {
    debug_assert!(l <= r);
    if !l.is_positive() && !r.is_negative() {
        return Rational::zero();
    }
    if r.is_negative() {
        return -simplest_between(&-r, &-l);
    }
    let fl = l.floor();
    if &fl == l {
        return fl;
    }
    let up = &fl + Rational::one();
    if &up <= r {
        return up;
    }
    let inner = simplest_between(&(r - &fl).recip(), &(l - &fl).recip());
    fl + inner.recip()
}

/// All rational roots, sorted, without multiplicity.
pub fn rational_roots(p: &UPoly) -> Vec<Rational> {
    if p.deg() <= 0 {
        return Vec::new();
    }
    // square-free part keeps the roots simple
    let g = p.gcd(&p.derivative());
    let sf = if g.deg() > 0 { p.divrem(&g).0 } else { p.clone() };
    let sf = sf.monic();
    if sf.deg() == 1 {
        return vec![-sf.0[0].clone()];
    }
    let ints = super::primitive_integer_vector(&sf.0);
    let lead: BigInt = ints.last().unwrap().abs();
    let ip = UPoly::new(ints.iter().map(|c| Rational::from_integer(c.clone())).collect());
    let bound = {
        let mut m = BigInt::zero();
        for c in &ints[..ints.len() - 1] {
            m = m.max(c.abs());
        }
        Rational::new(m, lead.clone()) + Rational::one()
    };
    // two distinct candidates a/b, c/d with b, d <= lead differ by >= 1/lead^2
    let width = Rational::new(BigInt::one(), 2 * &lead * &lead);
    let chain = sturm_chain(&ip);
    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let count = sign_changes(&chain, &a) - sign_changes(&chain, &b);
        if count == 0 {
            continue;
        }
        if count > 1 || &b - &a > width {
            let mid = (&a + &b) / Rational::from_integer(2.into());
            stack.push((a, mid.clone()));
            stack.push((mid, b));
            continue;
        }
        if ip.eval(&b).is_zero() {
            roots.push(b);
            continue;
        }
        let c = simplest_between(&a, &b);
        if c.denom() <= &lead && ip.eval(&c).is_zero() {
            roots.push(c);
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Integer vector proportional to `v` with gcd 1 and the first nonzero entry positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in v {
        l = l.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if !g.is_zero() {
        let first_neg = ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        if first_neg {
            g = -g;
        }
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
    }
    ints
}
