use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{classify, find_row, side_condition, StratumRow};
use crate::error::{Error, Result};
use crate::exact::Form;
use crate::presentation::Presentation;

pub const MAX_ATTEMPTS: usize = 1000;
const COEFF_BOUND: i64 = 9;

fn draw(row: &StratumRow, rng: &mut ChaCha8Rng) -> Result<Presentation> {
    let mut zero: Vec<[usize; 2]> = row.forced_zeros.clone();
    for group in &row.optional_zeros {
        if rng.gen_bool(0.5) {
            zero.extend(group.iter().copied());
        }
    }
    Presentation::from_fn(row.source.clone(), row.target.clone(), |i, j, k| {
        if zero.contains(&[i, j]) {
            Form::zero(k)
        } else {
            Form::random(k, COEFF_BOUND, rng)
        }
    })
}

fn accept(row: &StratumRow, p: &Presentation) -> bool {
    if !p.is_injective() {
        return false;
    }
    match side_condition(p, row) {
        Ok(s) if !s.is_fail() => {}
        _ => return false,
    }
    matches!(classify(p), Ok(l) if l.chi == row.chi && l.id == row.id)
}

/// Rejection sampling inside the row's shape until the instance passes the
/// exact side conditions and classifies back to the row.
pub fn generate(chi: i64, id: &str, seed: u64) -> Result<Presentation> {
    let row = find_row(chi, id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let p = draw(row, &mut rng)?;
        if accept(row, &p) {
            return Ok(p);
        }
    }
    Err(Error::BudgetExhausted {
        chi,
        id: id.to_string(),
        seed,
    })
}
