//! Discrete Muckenhoupt weight constants on a grid.
//!
//! All constants are computed over the subintervals of the weight's grid with
//! normalized (average-based) forms, so every constant is at least 1 and is
//! invariant under scaling of the weight. Constants are nondecreasing as the
//! grid grows (more intervals become available), so reported values always
//! state their grid.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::fmath;
use crate::operators::{grid_maximal, Grid};
use crate::spaces::Seq;

/// Closed-form tags allowing exact regeneration on a different grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightForm {
    /// `w(i) = (1 + |i|)^delta`
    Power { delta: f64 },
}

/// A strictly positive sequence tabulated on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    grid: Grid,
    values: Vec<f64>,
    form: Option<WeightForm>,
}

impl Weight {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(CoreError::InvalidInput(
                "weight values length must match grid length",
            ));
        }
        for (k, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(CoreError::NonPositiveWeight {
                    index: grid.lo() + k as i64,
                    value: v,
                });
            }
        }
        Ok(Weight {
            grid,
            values,
            form: None,
        })
    }

    /// Power weight `w(i) = (1 + |i|)^delta`, tagged for regeneration.
    pub fn power(delta: f64, grid: Grid) -> Self {
        let values = grid
            .indices()
            .map(|i| fmath::powf(1.0 + fmath::abs(i as f64), delta))
            .collect();
        Weight {
            grid,
            values,
            form: Some(WeightForm::Power { delta }),
        }
    }

    /// Re-tabulate on another grid; only possible for tagged closed forms.
    pub fn regenerate(&self, grid: Grid) -> Option<Weight> {
        self.form
            .map(|WeightForm::Power { delta }| Weight::power(delta, grid))
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn form(&self) -> Option<WeightForm> {
        self.form
    }

    pub fn at(&self, i: i64) -> f64 {
        assert!(self.grid.contains(i), "index {i} outside weight grid");
        self.values[(i - self.grid.lo()) as usize]
    }

    /// Pointwise power `w^e` (loses the closed-form tag unless `e = 1`).
    pub fn pow(&self, e: f64) -> Weight {
        Weight {
            grid: self.grid,
            values: self.values.iter().map(|&v| fmath::powf(v, e)).collect(),
            form: self
                .form
                .map(|WeightForm::Power { delta }| WeightForm::Power { delta: delta * e }),
        }
    }

    fn as_seq(&self) -> Seq {
        Seq::new(self.grid.lo(), self.values.clone()).expect("weight values are finite")
    }
}

/// Smallest `C` with `(Mw)(j) <= C w(j)` on the grid, `M` the grid-restricted
/// maximal. This is the canonical A1 constant.
pub fn a1_constant(w: &Weight) -> f64 {
    let maximal = grid_maximal(&w.as_seq(), w.grid());
    let mut best = 0.0f64;
    for (k, &v) in w.values().iter().enumerate() {
        let ratio = maximal.values()[k] / v;
        if ratio > best {
            best = ratio;
        }
    }
    best
}

/// `sup` over subintervals of `avg(w) / min(w)` — the interval-infimum A1
/// form. Agrees with [`a1_constant`] on the grid: both range over the same
/// pairs (interval, point in it).
pub fn a1_interval_constant(w: &Weight) -> f64 {
    let vals = w.values();
    let n = vals.len();
    let mut best = 0.0f64;
    for m in 0..n {
        let mut sum = 0.0f64;
        let mut min = f64::INFINITY;
        for (len, &v) in vals[m..].iter().enumerate() {
            sum += v;
            if v < min {
                min = v;
            }
            let ratio = sum / ((len + 1) as f64 * min);
            if ratio > best {
                best = ratio;
            }
        }
    }
    best
}

/// `sup` over subintervals of `avg(w) / inf(w over the whole grid)` — the
/// global-infimum reading of the A1 display. Never below
/// [`a1_interval_constant`].
pub fn a1_global_constant(w: &Weight) -> f64 {
    let vals = w.values();
    let global_min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let n = vals.len();
    let mut best_avg = 0.0f64;
    for m in 0..n {
        let mut sum = 0.0f64;
        for (len, &v) in vals[m..].iter().enumerate() {
            sum += v;
            let avg = sum / (len + 1) as f64;
            if avg > best_avg {
                best_avg = avg;
            }
        }
    }
    best_avg / global_min
}

/// Normalized A_r constant for `r > 1`:
/// `sup over [m, n] of avg(w) * avg(w^{-1/(r-1)})^{r-1}`.
///
/// O(n²) over prefix sums of `w` and `w^{-1/(r-1)}`. The unnormalized form in
/// terms of plain interval sums is recovered by multiplying through by
/// `(n-m+1)^r`.
pub fn ar_constant(w: &Weight, r: f64) -> Result<f64> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(CoreError::InvalidParameter {
            name: "r",
            value: r,
            requires: "r > 1",
        });
    }
    let vals = w.values();
    let n = vals.len();
    let dual_exp = -1.0 / (r - 1.0);
    let mut prefix_w = Vec::with_capacity(n + 1);
    let mut prefix_dual = Vec::with_capacity(n + 1);
    prefix_w.push(0.0f64);
    prefix_dual.push(0.0f64);
    let (mut acc_w, mut acc_d) = (0.0f64, 0.0f64);
    for &v in vals {
        acc_w += v;
        acc_d += fmath::powf(v, dual_exp);
        prefix_w.push(acc_w);
        prefix_dual.push(acc_d);
    }
    let mut best = 0.0f64;
    for m in 0..n {
        for end in m..n {
            let len = (end - m + 1) as f64;
            let avg_w = (prefix_w[end + 1] - prefix_w[m]) / len;
            let avg_d = (prefix_dual[end + 1] - prefix_dual[m]) / len;
            let c = avg_w * fmath::powf(avg_d, r - 1.0);
            if c > best {
                best = c;
            }
        }
    }
    Ok(best)
}

/// A_{r,s} constant for `1 < r <= s < ∞`:
/// `sup over [m, n] of (avg w^s)^{1/s} * (avg w^{-r'})^{1/r'}`, `r' = r/(r-1)`.
pub fn ars_constant(w: &Weight, r: f64, s: f64) -> Result<f64> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(CoreError::InvalidParameter {
            name: "r",
            value: r,
            requires: "r > 1",
        });
    }
    if !(s >= r && s.is_finite()) {
        return Err(CoreError::InvalidParameter {
            name: "s",
            value: s,
            requires: "r <= s < inf",
        });
    }
    let vals = w.values();
    let n = vals.len();
    let r_conj = r / (r - 1.0);
    let mut prefix_pow_s = Vec::with_capacity(n + 1);
    let mut prefix_dual = Vec::with_capacity(n + 1);
    prefix_pow_s.push(0.0f64);
    prefix_dual.push(0.0f64);
    let (mut acc_s, mut acc_d) = (0.0f64, 0.0f64);
    for &v in vals {
        acc_s += fmath::powf(v, s);
        acc_d += fmath::powf(v, -r_conj);
        prefix_pow_s.push(acc_s);
        prefix_dual.push(acc_d);
    }
    let mut best = 0.0f64;
    for m in 0..n {
        for end in m..n {
            let len = (end - m + 1) as f64;
            let avg_s = (prefix_pow_s[end + 1] - prefix_pow_s[m]) / len;
            let avg_d = (prefix_dual[end + 1] - prefix_dual[m]) / len;
            let c = fmath::powf(avg_s, 1.0 / s) * fmath::powf(avg_d, 1.0 / r_conj);
            if c > best {
                best = c;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(half: i64) -> Grid {
        Grid::symmetric(half)
    }

    #[test]
    fn power_weight_values() {
        let w = Weight::power(0.0, grid(4));
        assert!(w.values().iter().all(|&v| v == 1.0));
        let w = Weight::power(1.0, grid(4));
        assert_eq!(w.at(3), 4.0);
        let w = Weight::power(-0.5, grid(10));
        assert!((w.at(8) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn unit_weight_constants_are_one() {
        let w = Weight::power(0.0, grid(16));
        assert_eq!(a1_constant(&w), 1.0);
        assert_eq!(a1_interval_constant(&w), 1.0);
        assert_eq!(a1_global_constant(&w), 1.0);
        assert!((ar_constant(&w, 2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((ars_constant(&w, 1.5, 2.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_weight_scale_invariance() {
        let g = grid(16);
        let w = Weight::new(g, alloc::vec![3.7; g.len()]).unwrap();
        assert!((ar_constant(&w, 2.5).unwrap() - 1.0).abs() < 1e-12);
        assert!((ars_constant(&w, 2.0, 3.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((a1_constant(&w) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constants_invariant_under_weight_scaling() {
        let g = grid(24);
        let mut rng = crate::rng::SplitMix64::new(5);
        let values: Vec<f64> = (0..g.len()).map(|_| rng.uniform(0.2, 3.0)).collect();
        let w = Weight::new(g, values.clone()).unwrap();
        let scaled = Weight::new(g, values.iter().map(|&v| 3.7 * v).collect()).unwrap();
        let pairs = [
            (a1_constant(&w), a1_constant(&scaled)),
            (ar_constant(&w, 2.0).unwrap(), ar_constant(&scaled, 2.0).unwrap()),
            (
                ars_constant(&w, 1.5, 2.5).unwrap(),
                ars_constant(&scaled, 1.5, 2.5).unwrap(),
            ),
        ];
        for (plain, rescaled) in pairs {
            assert!((plain - rescaled).abs() <= 1e-12 * plain, "{plain} vs {rescaled}");
        }
    }

    #[test]
    fn single_point_ars_is_one() {
        let g = Grid::new(5, 5).unwrap();
        let w = Weight::new(g, alloc::vec![2.31]).unwrap();
        assert!((ars_constant(&w, 1.5, 2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constants_at_least_one() {
        let g = grid(32);
        let w = Weight::power(-0.4, g);
        assert!(a1_constant(&w) >= 1.0 - 1e-12);
        assert!(ar_constant(&w, 1.7).unwrap() >= 1.0 - 1e-12);
        assert!(ars_constant(&w, 1.7, 2.4).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn interval_form_matches_maximal_form() {
        for &delta in &[-0.5, -0.3, 0.4] {
            let w = Weight::power(delta, grid(24));
            let a = a1_constant(&w);
            let b = a1_interval_constant(&w);
            assert!((a - b).abs() < 1e-10 * a, "delta {delta}: {a} vs {b}");
        }
    }

    #[test]
    fn global_form_dominates_interval_form() {
        let w = Weight::power(0.7, grid(24));
        assert!(a1_global_constant(&w) >= a1_interval_constant(&w) - 1e-12);
    }

    #[test]
    fn r_monotonicity_of_normalized_constants() {
        let w = Weight::power(-0.4, grid(32));
        let c_small = ar_constant(&w, 1.5).unwrap();
        let c_large = ar_constant(&w, 2.5).unwrap();
        assert!(c_large <= c_small * (1.0 + 1e-9));
    }

    #[test]
    fn a1_power_weight_in_class() {
        // (1+|i|)^{-1/2} is an A1 weight; constant finite and > 1.
        let w = Weight::power(-0.5, grid(64));
        let c = a1_constant(&w);
        assert!(c.is_finite() && c >= 1.0);
    }

    #[test]
    fn a1_power_rescaling_lands_in_two_exponent_class() {
        // w in A1 => w^{1/s} in A_{r,s} with constant <= a1^{1/s}
        for &delta in &[-0.5, -0.3, 0.0] {
            for &(r, s) in &[(1.5, 2.0), (2.0, 3.0)] {
                let w = Weight::power(delta, grid(64));
                let lhs = ars_constant(&w.pow(1.0 / s), r, s).unwrap();
                let rhs = fmath::powf(a1_interval_constant(&w), 1.0 / s);
                assert!(
                    lhs <= rhs * (1.0 + 1e-9),
                    "delta {delta}, r {r}, s {s}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let w = Weight::power(0.0, grid(4));
        assert!(ar_constant(&w, 1.0).is_err());
        assert!(ars_constant(&w, 0.9, 2.0).is_err());
        assert!(ars_constant(&w, 2.0, 1.5).is_err());
        assert!(Weight::new(grid(1), alloc::vec![1.0, 0.0, 1.0]).is_err());
        assert!(Weight::new(grid(1), alloc::vec![1.0, -1.0, 1.0]).is_err());
        assert!(Weight::new(grid(1), alloc::vec![1.0]).is_err());
    }
}
