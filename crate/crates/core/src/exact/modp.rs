//! Prime-field arithmetic for randomized certificates and cross-checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::Rational;

/// A 30-bit prime.
pub const PRIME: u64 = 1_073_741_789;

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    (a * b) % p
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

pub fn reduce_int(n: &BigInt, p: u64) -> u64 {
    let m = n.mod_floor(&BigInt::from(p));
    m.to_u64().expect("residue fits")
}

/// num / den mod p, or None if p divides the denominator.
pub fn reduce(q: &Rational, p: u64) -> Option<u64> {
    let d = reduce_int(q.denom(), p);
    if d.is_zero() {
        return None;
    }
    Some(mul(reduce_int(q.numer(), p), inv(d, p), p))
}

/// Rank by elimination in place.
pub fn rank(rows: &mut [Vec<u64>], p: u64) -> usize {
    let n = rows.len();
    if n == 0 {
        return 0;
    }
    let cols = rows[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..n).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let iv = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mul(*x, iv, p);
        }
        for i in 0..n {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in c..cols {
                    let t = mul(f, rows[r][j], p);
                    rows[i][j] = (rows[i][j] + p - t) % p;
                }
            }
        }
        r += 1;
        if r == n {
            break;
        }
    }
    r
}
