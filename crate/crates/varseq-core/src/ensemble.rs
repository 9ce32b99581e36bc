//! Deterministic seeded ensembles of test sequences.
//!
//! Member `k` of an ensemble is a pure function of `(family, grid, seed, k)`;
//! evaluation order never matters, so trials can run in any order or in
//! parallel and reproduce bit for bit.

use alloc::vec::Vec;

use crate::operators::Grid;
use crate::rng::SplitMix64;
use crate::spaces::Seq;

/// The five sequence families used by the harness.
///
/// - `Delta`: spike trains; member 0 is always the single unit spike at the
///   grid center.
/// - `SparseRandom`: ±1 entries with density 5%.
/// - `DenseRandom`: i.i.d. uniform values in [-1, 1].
/// - `Oscillatory`: sign-alternating `(1+|i-c|)^{-0.6}` truncated at a seeded
///   half-width.
/// - `Block`: indicator of a random subinterval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleFamily {
    Delta,
    SparseRandom,
    DenseRandom,
    Oscillatory,
    Block,
}

/// All families, in their canonical cycling order.
pub const ALL_FAMILIES: [EnsembleFamily; 5] = [
    EnsembleFamily::Delta,
    EnsembleFamily::SparseRandom,
    EnsembleFamily::DenseRandom,
    EnsembleFamily::Oscillatory,
    EnsembleFamily::Block,
];

impl EnsembleFamily {
    fn tag(self) -> u64 {
        match self {
            EnsembleFamily::Delta => 1,
            EnsembleFamily::SparseRandom => 2,
            EnsembleFamily::DenseRandom => 3,
            EnsembleFamily::Oscillatory => 4,
            EnsembleFamily::Block => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EnsembleFamily::Delta => "delta",
            EnsembleFamily::SparseRandom => "sparse_random",
            EnsembleFamily::DenseRandom => "dense_random",
            EnsembleFamily::Oscillatory => "oscillatory",
            EnsembleFamily::Block => "block",
        }
    }
}

/// A deterministic family of sequences on a grid.
#[derive(Debug, Clone, Copy)]
pub struct Ensemble {
    pub family: EnsembleFamily,
    pub size: usize,
    pub grid: Grid,
    pub seed: u64,
}

impl Ensemble {
    pub fn new(family: EnsembleFamily, size: usize, grid: Grid, seed: u64) -> Self {
        Ensemble {
            family,
            size,
            grid,
            seed,
        }
    }

    /// Member `k`; depends only on `(family, grid, seed, k)`.
    pub fn member(&self, k: usize) -> Seq {
        generate(self.family, self.grid, self.seed, k)
    }

    pub fn members(&self) -> impl Iterator<Item = Seq> + '_ {
        (0..self.size).map(move |k| self.member(k))
    }
}

/// Generate member `k` of the `(family, grid, seed)` ensemble.
pub fn generate(family: EnsembleFamily, grid: Grid, seed: u64, k: usize) -> Seq {
    let mut rng = SplitMix64::substream(seed, (k as u64) * 8 + family.tag());
    let n = grid.len();
    let center = (grid.lo() + grid.hi()).div_euclid(2);
    match family {
        EnsembleFamily::Delta => {
            if k == 0 {
                return Seq::delta(center);
            }
            let spikes = 1 + k % 4;
            let mut values = alloc::vec![0.0f64; n];
            for _ in 0..spikes {
                let pos = rng.index(n);
                values[pos] += rng.sign();
            }
            Seq::new(grid.lo(), values).expect("finite values")
        }
        EnsembleFamily::SparseRandom => {
            let values = (0..n)
                .map(|_| {
                    let u = rng.next_f64();
                    if u < 0.025 {
                        -1.0
                    } else if u < 0.05 {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            Seq::new(grid.lo(), values).expect("finite values")
        }
        EnsembleFamily::DenseRandom => {
            let values = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
            Seq::new(grid.lo(), values).expect("finite values")
        }
        EnsembleFamily::Oscillatory => {
            let max_half = ((n - 1) / 2).max(1);
            let half = 1 + rng.index(max_half);
            let values: Vec<f64> = grid
                .indices()
                .map(|i| {
                    let d = (i - center).unsigned_abs();
                    if d as usize > half {
                        0.0
                    } else {
                        let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
                        sign * crate::fmath::powf(1.0 + d as f64, -0.6)
                    }
                })
                .collect();
            Seq::new(grid.lo(), values).expect("finite values")
        }
        EnsembleFamily::Block => {
            let max_len = (n / 4).max(1);
            let len = 1 + rng.index(max_len);
            let start = rng.index(n - len + 1);
            let mut values = alloc::vec![0.0f64; n];
            for v in values.iter_mut().skip(start).take(len) {
                *v = 1.0;
            }
            Seq::new(grid.lo(), values).expect("finite values")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_are_reproducible() {
        let grid = Grid::symmetric(32);
        for family in ALL_FAMILIES {
            let e = Ensemble::new(family, 4, grid, 42);
            for k in 0..4 {
                assert_eq!(e.member(k), e.member(k), "family {family:?}");
            }
        }
    }

    #[test]
    fn first_delta_member_is_central_spike() {
        let grid = Grid::symmetric(10);
        let e = Ensemble::new(EnsembleFamily::Delta, 1, grid, 999);
        assert_eq!(e.member(0), Seq::delta(0));
        let grid = Grid::new(0, 10).unwrap();
        let e = Ensemble::new(EnsembleFamily::Delta, 1, grid, 999);
        assert_eq!(e.member(0), Seq::delta(5));
    }

    #[test]
    fn supports_stay_inside_grid() {
        let grid = Grid::new(-17, 9).unwrap();
        for family in ALL_FAMILIES {
            let e = Ensemble::new(family, 8, grid, 7);
            for member in e.members() {
                assert!(grid.contains_support(&member), "family {family:?}");
            }
        }
    }

    #[test]
    fn families_have_expected_shape() {
        let grid = Grid::symmetric(64);
        let sparse = generate(EnsembleFamily::SparseRandom, grid, 3, 1);
        assert!(sparse.values().iter().all(|&v| v == 0.0 || v == 1.0 || v == -1.0));

        let block = generate(EnsembleFamily::Block, grid, 3, 1);
        assert!(block.values().iter().all(|&v| v == 0.0 || v == 1.0));
        assert!(!block.is_zero());

        let osc = generate(EnsembleFamily::Oscillatory, grid, 3, 1);
        assert_eq!(osc.at(0), 1.0); // center value
        assert!(!osc.is_zero());

        let dense = generate(EnsembleFamily::DenseRandom, grid, 3, 1);
        assert!(dense.values().iter().all(|&v| (-1.0..1.0).contains(&v)));
    }

    #[test]
    fn different_seeds_differ() {
        let grid = Grid::symmetric(32);
        let a = generate(EnsembleFamily::DenseRandom, grid, 1, 0);
        let b = generate(EnsembleFamily::DenseRandom, grid, 2, 0);
        assert_ne!(a, b);
    }
}
