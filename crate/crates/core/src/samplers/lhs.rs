use rand::seq::SliceRandom;

use crate::domain::{grid, normalise, SamplerConfig};
use crate::error::{Error, Result};

use super::{rng_from_seed, Strategy, WeightBatch};

/// Bi-objective Latin hypercube weights.
///
/// Each round draws one value per grid cell (two from the middle cell when
/// `d` is odd), shuffles the round, pairs adjacent entries and normalises
/// each pair. Yields `s·d/2` vectors for even `d`, `s·(d+1)/2` for odd `d`.
pub fn sample_lhs_p2(d: usize, s: usize, seed: u64) -> Result<WeightBatch> {
    if d < 2 {
        return Err(Error::dim(format!("LHS needs d >= 2, got {d}")));
    }
    if s < 1 {
        return Err(Error::dim("LHS needs s >= 1"));
    }
    let cells = grid(d)?;
    let middle = d.div_ceil(2) - 1;
    let mut rng = rng_from_seed(seed);
    let per_round = if d.is_multiple_of(2) { d } else { d + 1 };
    let mut vectors = Vec::with_capacity(s * per_round / 2);
    let mut round = Vec::with_capacity(per_round);

    for _ in 0..s {
        round.clear();
        for (k, cell) in cells.iter().enumerate() {
            round.push(cell.sample(&mut rng));
            if d % 2 == 1 && k == middle {
                round.push(cell.sample(&mut rng));
            }
        }
        round.shuffle(&mut rng);
        for pair in round.chunks_exact(2) {
            vectors.push(normalise(pair)?);
        }
    }

    Ok(WeightBatch {
        vectors,
        strategy: Strategy::Lhs,
        config: SamplerConfig {
            p: 2,
            d,
            s,
            seed,
            ..Default::default()
        },
    })
}

/// Latin hypercube weights for `p ≥ 3`: per round, one draw per cell for every
/// weight axis, each axis's column shuffled independently, rows normalised.
pub fn sample_lhs_general(p: usize, d: usize, s: usize, seed: u64) -> Result<WeightBatch> {
    if p < 3 {
        return Err(Error::dim(format!("general LHS is for p >= 3, got {p}")));
    }
    if d < 2 {
        return Err(Error::dim(format!("LHS needs d >= 2, got {d}")));
    }
    if s < 1 {
        return Err(Error::dim("LHS needs s >= 1"));
    }
    let cells = grid(d)?;
    let mut rng = rng_from_seed(seed);
    let mut vectors = Vec::with_capacity(s * d);
    let mut columns = vec![vec![0.0; d]; p];
    let mut row = vec![0.0; p];

    for _ in 0..s {
        for col in columns.iter_mut() {
            for (slot, cell) in col.iter_mut().zip(&cells) {
                *slot = cell.sample(&mut rng);
            }
            col.shuffle(&mut rng);
        }
        for i in 0..d {
            for (r, col) in row.iter_mut().zip(&columns) {
                *r = col[i];
            }
            vectors.push(normalise(&row)?);
        }
    }

    Ok(WeightBatch {
        vectors,
        strategy: Strategy::Lhs,
        config: SamplerConfig {
            p,
            d,
            s,
            seed,
            ..Default::default()
        },
    })
}
