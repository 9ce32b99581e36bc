//! Discrete operators: fractional maximal, Hilbert transform, Riesz potential,
//! grid-restricted maximal iteration, and pointwise `ℓ^θ` aggregation.
//!
//! All outputs are tabulated on a finite [`Grid`]. For the fractional maximal
//! of a finitely supported input the grid truncation is lossless: a window
//! reaching past the convex hull of `support ∪ {j}` gains length but no mass,
//! and the length weight `(n-m+1)^{α-1}` is decreasing, so windows inside the
//! hull are always at least as good. Since the grid contains the support, the
//! grid-window maximum equals the supremum over all windows of ℤ.
//!
//! [`grid_maximal`] is different on purpose: its windows are confined to the
//! grid even when the input fills the grid, so it underestimates the maximal
//! over ℤ in general. It is the coherent finite model used by the Rubio de
//! Francia iteration, and it is still sublinear, positively homogeneous, and
//! pointwise dominating, so the iteration's algebra holds verbatim.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::fmath;
use crate::spaces::Seq;

/// Number of terms above which kernel sums switch to compensated summation.
const COMPENSATED_SUM_THRESHOLD: usize = 10_000;

/// Integer interval `[lo, hi]` on which truncated computations run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    lo: i64,
    hi: i64,
}

impl Grid {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(CoreError::InvalidInput("grid requires lo <= hi"));
        }
        Ok(Grid { lo, hi })
    }

    /// Symmetric grid `[-half_span, half_span]`.
    pub fn symmetric(half_span: i64) -> Self {
        Grid {
            lo: -half_span.abs(),
            hi: half_span.abs(),
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false // lo <= hi by construction
    }

    pub fn contains(&self, i: i64) -> bool {
        i >= self.lo && i <= self.hi
    }

    /// Whether the (nonzero) support of `a` lies inside the grid.
    pub fn contains_support(&self, a: &Seq) -> bool {
        a.iter_nonzero().all(|(i, _)| self.contains(i))
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    /// Grid with both endpoints doubled (used by grid-doubling stability checks).
    pub fn doubled(&self) -> Grid {
        Grid {
            lo: self.lo * 2,
            hi: self.hi * 2,
        }
    }

    /// Tabulate `|a|` on this grid; entries of `a` outside the grid are ignored.
    fn tabulate_abs(&self, a: &Seq) -> Vec<f64> {
        let mut vals = alloc::vec![0.0; self.len()];
        for (i, v) in a.iter_nonzero() {
            if self.contains(i) {
                vals[(i - self.lo) as usize] = fmath::abs(v);
            }
        }
        vals
    }

    fn seq_from_values(&self, values: Vec<f64>) -> Seq {
        Seq::new(self.lo, values).expect("grid-tabulated values are finite")
    }
}

/// For each position `j`, the maximum over windows `[m, n] ∋ j` inside the
/// array of `(n-m+1)^{alpha-1} * Σ values[m..=n]`. `values` must be
/// non-negative. O(n²): per window length, a monotone deque yields the best
/// window sum covering each `j` in amortized O(1).
pub(crate) fn window_maximal_tabulated(values: &[f64], alpha: f64) -> Vec<f64> {
    let n = values.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0f64);
    let mut acc = 0.0;
    for &v in values {
        acc += v;
        prefix.push(acc);
    }
    let window_sum = |m: usize, len: usize| prefix[m + len] - prefix[m];

    let mut out = alloc::vec![0.0f64; n];
    let mut deque: VecDeque<usize> = VecDeque::new();
    for len in 1..=n {
        let weight = fmath::powf(len as f64, alpha - 1.0);
        deque.clear();
        let mut next_start = 0usize; // next window start not yet offered to the deque
        for (j, slot) in out.iter_mut().enumerate() {
            // admissible starts for windows of this length containing j
            let m_lo = (j + 1).saturating_sub(len);
            let m_hi = j.min(n - len);
            while next_start <= m_hi {
                let s = window_sum(next_start, len);
                while let Some(&back) = deque.back() {
                    if window_sum(back, len) <= s {
                        deque.pop_back();
                    } else {
                        break;
                    }
                }
                deque.push_back(next_start);
                next_start += 1;
            }
            while let Some(&front) = deque.front() {
                if front < m_lo {
                    deque.pop_front();
                } else {
                    break;
                }
            }
            let best = deque
                .front()
                .map(|&m| weight * window_sum(m, len))
                .unwrap_or(0.0);
            if best > *slot {
                *slot = best;
            }
        }
    }
    out
}

/// Same quantity as [`window_maximal_tabulated`] by exhaustive enumeration of
/// all windows per point (quadratic per point, cubic overall). Kept as the
/// cross-check for the optimized search; use small grids.
pub(crate) fn window_maximal_reference(values: &[f64], alpha: f64) -> Vec<f64> {
    let n = values.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0f64);
    let mut acc = 0.0;
    for &v in values {
        acc += v;
        prefix.push(acc);
    }
    let mut out = alloc::vec![0.0f64; n];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut best = 0.0f64;
        for m in 0..=j {
            for end in j..n {
                let len = end - m + 1;
                let candidate =
                    fmath::powf(len as f64, alpha - 1.0) * (prefix[end + 1] - prefix[m]);
                if candidate > best {
                    best = candidate;
                }
            }
        }
        *slot = best;
    }
    out
}

fn validate_fractional_inputs(a: &Seq, alpha: f64, grid: Grid) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(CoreError::InvalidParameter {
            name: "alpha",
            value: alpha,
            requires: "0 <= alpha < 1",
        });
    }
    if !grid.contains_support(a) {
        return Err(CoreError::SupportOutsideGrid {
            support_lo: a.support_lo(),
            support_hi: a.support_hi(),
            grid_lo: grid.lo,
            grid_hi: grid.hi,
        });
    }
    Ok(())
}

/// Fractional maximal `(M_α a)(j) = sup (n-m+1)^{α-1} Σ_{i=m}^{n} |a(i)|`
/// over windows `m <= j <= n`, tabulated on `grid`.
///
/// Exact for finitely supported `a` when the grid contains the support (see
/// module docs); requires `0 <= alpha < 1` and `grid ⊇ support`.
pub fn fractional_maximal(a: &Seq, alpha: f64, grid: Grid) -> Result<Seq> {
    validate_fractional_inputs(a, alpha, grid)?;
    let values = grid.tabulate_abs(a);
    Ok(grid.seq_from_values(window_maximal_tabulated(&values, alpha)))
}

/// Reference implementation of [`fractional_maximal`] by exhaustive window
/// enumeration. Cubic in the grid length; kept for cross-checking only.
pub fn fractional_maximal_reference(a: &Seq, alpha: f64, grid: Grid) -> Result<Seq> {
    validate_fractional_inputs(a, alpha, grid)?;
    let values = grid.tabulate_abs(a);
    Ok(grid.seq_from_values(window_maximal_reference(&values, alpha)))
}

/// Grid-restricted Hardy-Littlewood maximal: windows are confined to `grid`.
///
/// The input must be tabulated on the grid (support inside it); panics
/// otherwise, since silently dropping mass would corrupt every downstream
/// iteration.
pub fn grid_maximal(b: &Seq, grid: Grid) -> Seq {
    assert!(
        grid.contains_support(b),
        "grid_maximal input support [{}, {}] not inside grid [{}, {}]",
        b.support_lo(),
        b.support_hi(),
        grid.lo,
        grid.hi
    );
    let values = grid.tabulate_abs(b);
    grid.seq_from_values(window_maximal_tabulated(&values, 0.0))
}

/// `k`-fold composition of [`grid_maximal`]; `k = 0` is the identity.
pub fn iterate_maximal(b: &Seq, k: usize, grid: Grid) -> Seq {
    let mut current = b.clone();
    for _ in 0..k {
        current = grid_maximal(&current, grid);
    }
    current
}

fn sum_terms(terms: impl Iterator<Item = f64>, compensated: bool) -> f64 {
    if compensated {
        // Kahan summation
        let mut sum = 0.0f64;
        let mut c = 0.0f64;
        for t in terms {
            let y = t - c;
            let s = sum + y;
            c = (s - sum) - y;
            sum = s;
        }
        sum
    } else {
        let mut sum = 0.0f64;
        for t in terms {
            sum += t;
        }
        sum
    }
}

/// Discrete Hilbert transform `(Ha)(j) = Σ_{i != j} a(i)/(i-j)` on `grid`.
///
/// Each output point is an exact finite sum over the support of `a`, summed
/// in ascending `i` (compensated once the support exceeds 10⁴ points), so the
/// result is reproducible bit for bit.
pub fn hilbert_transform(a: &Seq, grid: Grid) -> Seq {
    let entries: Vec<(i64, f64)> = a.iter_nonzero().collect();
    let compensated = entries.len() > COMPENSATED_SUM_THRESHOLD;
    let values = grid
        .indices()
        .map(|j| {
            sum_terms(
                entries
                    .iter()
                    .filter(|&&(i, _)| i != j)
                    .map(|&(i, v)| v / ((i - j) as f64)),
                compensated,
            )
        })
        .collect();
    grid.seq_from_values(values)
}

/// Discrete Riesz potential `(I_α a)(j) = Σ_{i != j} a(i)/|i-j|^{1-α}` on
/// `grid`, for `0 < alpha < 1`.
///
/// Ascending-`i` summation as for the Hilbert transform. The distance kernel
/// `d^{α-1}` is precomputed once per distance, which changes nothing in the
/// result (same factor bits) but avoids a `powf` per term.
pub fn riesz_potential(a: &Seq, alpha: f64, grid: Grid) -> Result<Seq> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CoreError::InvalidParameter {
            name: "alpha",
            value: alpha,
            requires: "0 < alpha < 1",
        });
    }
    let entries: Vec<(i64, f64)> = a.iter_nonzero().collect();
    let compensated = entries.len() > COMPENSATED_SUM_THRESHOLD;
    // largest possible |i - j|
    let max_dist = if entries.is_empty() {
        0
    } else {
        let lo = entries.first().unwrap().0.min(grid.lo);
        let hi = entries.last().unwrap().0.max(grid.hi);
        (hi - lo) as usize
    };
    let mut kernel = Vec::with_capacity(max_dist + 1);
    kernel.push(0.0); // distance 0 excluded from sums
    for d in 1..=max_dist {
        kernel.push(fmath::powf(d as f64, alpha - 1.0));
    }
    let values = grid
        .indices()
        .map(|j| {
            sum_terms(
                entries
                    .iter()
                    .filter(|&&(i, _)| i != j)
                    .map(|&(i, v)| v * kernel[(i - j).unsigned_abs() as usize]),
                compensated,
            )
        })
        .collect();
    Ok(grid.seq_from_values(values))
}

/// Pointwise `ℓ^θ` aggregation `(Σ_k |a_k(j)|^θ)^{1/θ}` on `grid`.
///
/// Requires `theta > 1`; entries of family members outside the grid are
/// rejected.
pub fn theta_aggregate(family: &[Seq], theta: f64, grid: Grid) -> Result<Seq> {
    if !(theta > 1.0 && theta.is_finite()) {
        return Err(CoreError::InvalidParameter {
            name: "theta",
            value: theta,
            requires: "1 < theta < inf",
        });
    }
    let mut powers = alloc::vec![0.0f64; grid.len()];
    for a in family {
        for (i, v) in a.iter_nonzero() {
            if !grid.contains(i) {
                return Err(CoreError::SupportOutsideGrid {
                    support_lo: a.support_lo(),
                    support_hi: a.support_hi(),
                    grid_lo: grid.lo,
                    grid_hi: grid.hi,
                });
            }
            powers[(i - grid.lo) as usize] += fmath::powf(fmath::abs(v), theta);
        }
    }
    let inv = 1.0 / theta;
    let values = powers
        .into_iter()
        .map(|s| if s == 0.0 { 0.0 } else { fmath::powf(s, inv) })
        .collect();
    Ok(grid.seq_from_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(lo: i64, vals: &[f64]) -> Seq {
        Seq::new(lo, vals.to_vec()).unwrap()
    }

    #[test]
    fn maximal_of_delta_is_closed_form() {
        let grid = Grid::symmetric(12);
        for &alpha in &[0.0, 0.25, 0.5, 0.75] {
            let out = fractional_maximal(&Seq::delta(0), alpha, grid).unwrap();
            for j in grid.indices() {
                let want = ((j.abs() + 1) as f64).powf(alpha - 1.0);
                assert_eq!(out.at(j), want, "alpha {alpha}, j {j}");
            }
        }
    }

    #[test]
    fn maximal_inside_flat_block_is_one() {
        let a = seq(0, &[1.0; 10]);
        let grid = Grid::new(-5, 15).unwrap();
        let out = fractional_maximal(&a, 0.0, grid).unwrap();
        assert_eq!(out.at(4), 1.0);
    }

    #[test]
    fn maximal_rejects_bad_inputs() {
        let a = Seq::delta(0);
        assert!(fractional_maximal(&a, 1.0, Grid::symmetric(3)).is_err());
        assert!(fractional_maximal(&a, -0.1, Grid::symmetric(3)).is_err());
        assert!(fractional_maximal(&Seq::delta(9), 0.0, Grid::symmetric(3)).is_err());
    }

    #[test]
    fn maximal_matches_reference_on_random_inputs() {
        let mut rng = crate::rng::SplitMix64::new(2024);
        for _ in 0..25 {
            let half = 3 + rng.index(12) as i64;
            let grid = Grid::symmetric(half);
            let n = grid.len();
            let vals: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let a = seq(grid.lo(), &vals);
            let alpha = rng.uniform(0.0, 0.999);
            let fast = fractional_maximal(&a, alpha, grid).unwrap();
            let slow = fractional_maximal_reference(&a, alpha, grid).unwrap();
            for j in grid.indices() {
                let (f, s) = (fast.at(j), slow.at(j));
                assert!(
                    (f - s).abs() <= 1e-12 * s.abs().max(1e-300),
                    "mismatch at j={j}: {f} vs {s}"
                );
            }
        }
    }

    #[test]
    fn hilbert_of_delta() {
        let grid = Grid::symmetric(6);
        let out = hilbert_transform(&Seq::delta(0), grid);
        assert_eq!(out.at(0), 0.0);
        for j in grid.indices() {
            if j != 0 {
                assert_eq!(out.at(j), -1.0 / j as f64);
            }
        }
    }

    #[test]
    fn hilbert_even_input_vanishes_at_origin() {
        let a = seq(-2, &[0.5, 1.0, 2.0, 1.0, 0.5]);
        let out = hilbert_transform(&a, Grid::symmetric(2));
        assert!(out.at(0).abs() < 1e-15);
    }

    #[test]
    fn hilbert_two_spikes() {
        let a = seq(0, &[1.0, 1.0]);
        let out = hilbert_transform(&a, Grid::symmetric(4));
        assert_eq!(out.at(2), -1.5);
    }

    #[test]
    fn riesz_of_delta() {
        let grid = Grid::symmetric(9);
        let out = riesz_potential(&Seq::delta(0), 0.5, grid).unwrap();
        assert_eq!(out.at(0), 0.0);
        for j in grid.indices() {
            if j != 0 {
                assert_eq!(out.at(j), (j.abs() as f64).powf(-0.5));
            }
        }
    }

    #[test]
    fn riesz_two_spikes_middle_point() {
        let a = Seq::delta(0).add(&Seq::delta(2));
        let out = riesz_potential(&a, 0.5, Grid::symmetric(4)).unwrap();
        assert_eq!(out.at(1), 2.0);
    }

    #[test]
    fn riesz_is_linear() {
        let grid = Grid::symmetric(8);
        let a = seq(-3, &[1.0, -2.0, 0.0, 4.0]);
        let b = seq(0, &[0.5, 0.25]);
        let c = 3.5;
        let lhs = riesz_potential(&a.add(&b.scaled(c)), 0.3, grid).unwrap();
        let ra = riesz_potential(&a, 0.3, grid).unwrap();
        let rb = riesz_potential(&b, 0.3, grid).unwrap();
        for j in grid.indices() {
            let want = ra.at(j) + c * rb.at(j);
            assert!((lhs.at(j) - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn riesz_rejects_alpha() {
        assert!(riesz_potential(&Seq::delta(0), 0.0, Grid::symmetric(2)).is_err());
        assert!(riesz_potential(&Seq::delta(0), 1.0, Grid::symmetric(2)).is_err());
    }

    #[test]
    fn hilbert_long_support_uses_compensated_sum() {
        // 10_001 support points crosses the compensation threshold; cross-check
        // one output point against an independently accumulated Kahan sum.
        let n = 10_001usize;
        let a = seq(0, &vec![1.0; n]);
        let j = -5i64;
        let out = hilbert_transform(&a, Grid::new(j, j).unwrap());
        let (mut sum, mut c) = (0.0f64, 0.0f64);
        for i in 0..n as i64 {
            let term = 1.0 / ((i - j) as f64);
            let y = term - c;
            let s = sum + y;
            c = (s - sum) - y;
            sum = s;
        }
        assert_eq!(out.at(j), sum);
    }

    #[test]
    fn grid_maximal_basics() {
        let grid = Grid::symmetric(10);
        let ones = seq(-10, &[1.0; 21]);
        let out = grid_maximal(&ones, grid);
        for j in grid.indices() {
            assert_eq!(out.at(j), 1.0);
        }

        let out = grid_maximal(&Seq::delta(0), grid);
        for j in grid.indices() {
            assert_eq!(out.at(j), 1.0 / (j.abs() + 1) as f64);
        }

        // forced one-sided window
        let grid = Grid::new(0, 10).unwrap();
        let out = grid_maximal(&Seq::delta(0), grid);
        assert_eq!(out.at(10), 1.0 / 11.0);
    }

    #[test]
    fn grid_maximal_grows_with_grid() {
        let b = seq(0, &[1.0, 0.0, 3.0, 0.5]);
        let small = Grid::new(-2, 6).unwrap();
        let large = Grid::new(-6, 10).unwrap();
        let out_small = grid_maximal(&b, small);
        let out_large = grid_maximal(&b, large);
        for j in small.indices() {
            assert!(out_small.at(j) <= out_large.at(j) + 1e-15);
        }
    }

    #[test]
    fn iterate_maximal_examples() {
        let grid = Grid::symmetric(6);
        let b = seq(-1, &[0.5, 2.0, 0.25]);
        assert_eq!(iterate_maximal(&b, 0, grid), b);
        let m1 = iterate_maximal(&b, 1, grid);
        let m2 = iterate_maximal(&b, 2, grid);
        for j in grid.indices() {
            assert!(m1.at(j) >= b.at(j).abs() - 1e-15);
            assert!(m2.at(j) >= m1.at(j) - 1e-15);
        }
    }

    #[test]
    fn theta_aggregate_examples() {
        let grid = Grid::symmetric(3);
        let single = theta_aggregate(&[seq(0, &[-2.0])], 2.0, grid).unwrap();
        assert_eq!(single.at(0), 2.0);

        let two = theta_aggregate(&[Seq::delta(0), Seq::delta(0)], 2.0, grid).unwrap();
        assert!((two.at(0) - 2.0f64.sqrt()).abs() < 1e-15);

        let disjoint = theta_aggregate(&[Seq::delta(0), Seq::delta(1)], 2.0, grid).unwrap();
        assert_eq!(disjoint.at(0), 1.0);
        assert_eq!(disjoint.at(1), 1.0);

        assert!(theta_aggregate(&[Seq::delta(0)], 1.0, grid).is_err());
    }
}
