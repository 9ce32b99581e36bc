//! Variable exponents `p(·): ℤ → [1, ∞)` and their derived quantities.
//!
//! An exponent is stored as explicit values on a finite window plus a constant
//! tail used for every index outside the window. With this representation the
//! infimum `p_-`, the supremum `p_+`, pointwise conjugation, and the
//! log-Hölder decay constant are all finite, exact computations: the tail
//! pins the behaviour of the infinitely many off-window indices.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::fmath;
use crate::operators::Grid;

/// Default guard below which `p_-` is considered too close to 1 to conjugate.
pub const CLASS_P_GUARD: f64 = 1e-9;

/// A variable exponent: tabulated window values plus a constant tail.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSequence {
    window_lo: i64,
    values: Vec<f64>,
    tail: f64,
}

impl ExponentSequence {
    /// Build from a window starting at `window_lo` and a tail value.
    ///
    /// Every value (and the tail) must be finite and at least 1.
    pub fn new(window_lo: i64, values: Vec<f64>, tail: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(CoreError::InvalidInput("exponent window must be non-empty"));
        }
        if !(tail.is_finite() && tail >= 1.0) {
            return Err(CoreError::InvalidParameter {
                name: "tail",
                value: tail,
                requires: "finite and >= 1",
            });
        }
        for &v in &values {
            if !(v.is_finite() && v >= 1.0) {
                return Err(CoreError::InvalidParameter {
                    name: "exponent value",
                    value: v,
                    requires: "finite and >= 1",
                });
            }
        }
        Ok(ExponentSequence {
            window_lo,
            values,
            tail,
        })
    }

    /// The constant exponent `p ≡ c`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(0, alloc::vec![c], c)
    }

    /// `p(i) = p_inf + c_inf / log(e + |i|)` tabulated on `grid`, tail `p_inf`.
    pub fn log_holder(p_inf: f64, c_inf: f64, grid: Grid) -> Result<Self> {
        if !(c_inf.is_finite() && c_inf >= 0.0) {
            return Err(CoreError::InvalidParameter {
                name: "c_inf",
                value: c_inf,
                requires: "finite and >= 0",
            });
        }
        let values: Vec<f64> = grid
            .indices()
            .map(|i| p_inf + c_inf / fmath::ln(core::f64::consts::E + fmath::abs(i as f64)))
            .collect();
        Self::new(grid.lo(), values, p_inf)
    }

    pub fn window_lo(&self) -> i64 {
        self.window_lo
    }

    pub fn window_hi(&self) -> i64 {
        self.window_lo + self.values.len() as i64 - 1
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn window_values(&self) -> &[f64] {
        &self.values
    }

    /// `p(i)`: window lookup, tail outside.
    pub fn at(&self, i: i64) -> f64 {
        if i >= self.window_lo && i <= self.window_hi() {
            self.values[(i - self.window_lo) as usize]
        } else {
            self.tail
        }
    }

    /// `(p_-, p_+)`: exact min and max over window values and tail.
    pub fn bounds(&self) -> (f64, f64) {
        let mut lo = self.tail;
        let mut hi = self.tail;
        for &v in &self.values {
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        (lo, hi)
    }

    pub fn min_exponent(&self) -> f64 {
        self.bounds().0
    }

    pub fn max_exponent(&self) -> f64 {
        self.bounds().1
    }

    /// Pointwise conjugate `p'(i) = p(i) / (p(i) - 1)` with the default guard.
    pub fn conjugate(&self) -> Result<Self> {
        self.conjugate_with_guard(CLASS_P_GUARD)
    }

    /// Pointwise conjugate, rejecting exponents with `p_- <= 1 + guard`.
    pub fn conjugate_with_guard(&self, guard: f64) -> Result<Self> {
        let p_minus = self.min_exponent();
        if p_minus <= 1.0 + guard {
            return Err(CoreError::ExponentNotInClassP { p_minus, guard });
        }
        let values = self.values.iter().map(|&v| v / (v - 1.0)).collect();
        Ok(ExponentSequence {
            window_lo: self.window_lo,
            values,
            tail: self.tail / (self.tail - 1.0),
        })
    }

    /// Pointwise division `p(·)/r`.
    ///
    /// Panics if `r <= 0` or `r > p_-` (the quotient would dip below 1 and stop
    /// being an exponent).
    pub fn scaled(&self, r: f64) -> Self {
        assert!(r > 0.0, "scale factor must be positive, got {r}");
        let p_minus = self.min_exponent();
        assert!(
            r <= p_minus,
            "scale factor {r} exceeds p_- = {p_minus}; quotient would not be an exponent"
        );
        ExponentSequence {
            window_lo: self.window_lo,
            values: self.values.iter().map(|&v| v / r).collect(),
            tail: self.tail / r,
        }
    }

    /// The exponent `q` with `1/q(i) = 1/p(i) - alpha`.
    ///
    /// Requires `0 <= alpha < 1` and `p_+ < 1/alpha`. `alpha = 0` returns the
    /// exponent unchanged.
    pub fn sobolev_shifted(&self, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(CoreError::InvalidParameter {
                name: "alpha",
                value: alpha,
                requires: "0 <= alpha < 1",
            });
        }
        if alpha == 0.0 {
            return Ok(self.clone());
        }
        let p_plus = self.max_exponent();
        if p_plus >= 1.0 / alpha {
            return Err(CoreError::SobolevUndefined { p_plus, alpha });
        }
        let shift = |v: f64| v / (1.0 - alpha * v);
        Ok(ExponentSequence {
            window_lo: self.window_lo,
            values: self.values.iter().map(|&v| shift(v)).collect(),
            tail: shift(self.tail),
        })
    }

    /// The exponent `p` with `1/p(i) = 1/q(i) + alpha`, `q` being `self`.
    ///
    /// Inverse direction of [`Self::sobolev_shifted`]. Requires
    /// `0 <= alpha < 1` and `q_- > 1/(1 - alpha)` so the result stays an
    /// exponent (at least 1 everywhere).
    pub fn sobolev_preimage(&self, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(CoreError::InvalidParameter {
                name: "alpha",
                value: alpha,
                requires: "0 <= alpha < 1",
            });
        }
        if alpha == 0.0 {
            return Ok(self.clone());
        }
        let q_minus = self.min_exponent();
        if q_minus * (1.0 - alpha) < 1.0 {
            return Err(CoreError::InvalidParameter {
                name: "q_-",
                value: q_minus,
                requires: "q_- >= 1/(1 - alpha) so that 1/p = 1/q + alpha stays an exponent",
            });
        }
        let unshift = |v: f64| v / (1.0 + alpha * v);
        Ok(ExponentSequence {
            window_lo: self.window_lo,
            values: self.values.iter().map(|&v| unshift(v)).collect(),
            tail: unshift(self.tail),
        })
    }

    /// Smallest `C` with `|p(i) - tail| <= C / log(e + |i|)` for all `i`.
    ///
    /// Off-window indices equal the tail and contribute 0, so the maximum over
    /// the window is exact.
    pub fn log_holder_constant(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (k, &v) in self.values.iter().enumerate() {
            let i = self.window_lo + k as i64;
            let c = fmath::abs(v - self.tail) * fmath::ln(core::f64::consts::E + fmath::abs(i as f64));
            if c > best {
                best = c;
            }
        }
        best
    }

    /// Compact human-readable descriptor, used by reports.
    #[cfg(feature = "std")]
    pub fn describe(&self) -> alloc::string::String {
        use alloc::format;
        let (lo, hi) = self.bounds();
        if lo == hi {
            format!("constant({lo})")
        } else {
            format!(
                "window[{}..{}] range [{lo}, {hi}] tail {}",
                self.window_lo,
                self.window_hi(),
                self.tail
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lh(p_inf: f64, c_inf: f64, lo: i64, hi: i64) -> ExponentSequence {
        ExponentSequence::log_holder(p_inf, c_inf, Grid::new(lo, hi).unwrap()).unwrap()
    }

    #[test]
    fn bounds_constant() {
        let p = ExponentSequence::constant(2.0).unwrap();
        assert_eq!(p.bounds(), (2.0, 2.0));
    }

    #[test]
    fn bounds_window_and_tail() {
        let p = ExponentSequence::new(0, alloc::vec![1.5, 3.0], 2.0).unwrap();
        assert_eq!(p.bounds(), (1.5, 3.0));
    }

    #[test]
    fn bounds_log_holder() {
        // p(i) = 2 + 1/log(e + |i|): max at i = 0 is 2 + 1/log(e) = 3, inf is the tail 2.
        let p = lh(2.0, 1.0, -100, 100);
        let (lo, hi) = p.bounds();
        assert_eq!(lo, 2.0);
        assert!((hi - 3.0).abs() < 1e-12);
    }

    #[test]
    fn conjugate_constants() {
        let cases = [(2.0, 2.0), (3.0, 1.5), (4.0 / 3.0, 4.0)];
        for (c, want) in cases {
            let p = ExponentSequence::constant(c).unwrap().conjugate().unwrap();
            assert!((p.at(17) - want).abs() < 1e-12, "conjugate of {c}");
        }
    }

    #[test]
    fn conjugate_rejects_near_one() {
        let p = ExponentSequence::constant(1.0).unwrap();
        assert!(matches!(
            p.conjugate(),
            Err(CoreError::ExponentNotInClassP { .. })
        ));
        let p = ExponentSequence::new(0, alloc::vec![1.0 + 1e-12, 2.0], 2.0).unwrap();
        assert!(p.conjugate().is_err());
    }

    #[test]
    fn conjugate_involution() {
        let p = lh(2.0, 1.0, -20, 20);
        let pp = p.conjugate().unwrap().conjugate().unwrap();
        for i in -25..=25 {
            assert!((pp.at(i) - p.at(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn scaled_pointwise() {
        let p = ExponentSequence::constant(3.0).unwrap();
        let q = p.scaled(1.5);
        assert_eq!(q.at(5), 2.0);

        let p = ExponentSequence::new(0, alloc::vec![2.0, 4.0], 3.0).unwrap();
        let q = p.scaled(2.0);
        assert_eq!(q.window_values(), &[1.0, 2.0]);
        assert_eq!(q.tail(), 1.5);
    }

    #[test]
    fn scaled_then_conjugated_closed_form() {
        // (p/r)'(i) = p(i) / (p(i) - r)
        let p = lh(2.5, 1.0, -30, 30);
        let r = 1.5;
        let q = p.scaled(r).conjugate().unwrap();
        for i in -35..=35 {
            let want = p.at(i) / (p.at(i) - r);
            assert!((q.at(i) - want).abs() < 1e-12);
        }
    }

    #[test]
    #[should_panic(expected = "exceeds p_-")]
    fn scaled_rejects_large_factor() {
        let p = ExponentSequence::constant(2.0).unwrap();
        let _ = p.scaled(2.5);
    }

    #[test]
    fn sobolev_examples() {
        let p = ExponentSequence::constant(2.0).unwrap();
        assert_eq!(p.sobolev_shifted(0.0).unwrap(), p);
        let q = p.sobolev_shifted(0.25).unwrap();
        assert!((q.at(0) - 4.0).abs() < 1e-12);
        let q = ExponentSequence::constant(3.0)
            .unwrap()
            .sobolev_shifted(1.0 / 6.0)
            .unwrap();
        assert!((q.at(9) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn sobolev_rejects_out_of_range() {
        let p = ExponentSequence::constant(2.0).unwrap();
        assert!(matches!(
            p.sobolev_shifted(0.5),
            Err(CoreError::SobolevUndefined { .. })
        ));
        assert!(p.sobolev_shifted(-0.1).is_err());
        assert!(p.sobolev_shifted(1.0).is_err());
    }

    #[test]
    fn sobolev_preimage_inverts_shift() {
        let p = lh(2.0, 0.5, -20, 20);
        let alpha = 0.2;
        let q = p.sobolev_shifted(alpha).unwrap();
        let back = q.sobolev_preimage(alpha).unwrap();
        for i in -25..=25 {
            assert!((back.at(i) - p.at(i)).abs() < 1e-12);
            assert!((1.0 / back.at(i) - 1.0 / q.at(i) - alpha).abs() < 1e-12);
        }
        // q_- too small for the given alpha
        let q = ExponentSequence::constant(1.5).unwrap();
        assert!(q.sobolev_preimage(0.5).is_err());
    }

    #[test]
    fn log_holder_constant_examples() {
        let p = ExponentSequence::constant(2.0).unwrap();
        assert_eq!(p.log_holder_constant(), 0.0);

        // single window point p(0) = 3, tail 2: |3-2| * log(e + 0) = 1
        let p = ExponentSequence::new(0, alloc::vec![3.0], 2.0).unwrap();
        assert!((p.log_holder_constant() - 1.0).abs() < 1e-12);

        // p = 2 + 1/log(e+|i|): the product is identically 1 on the window
        let p = lh(2.0, 1.0, -50, 50);
        assert!((p.log_holder_constant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_values() {
        assert!(ExponentSequence::constant(0.9).is_err());
        assert!(ExponentSequence::constant(f64::INFINITY).is_err());
        assert!(ExponentSequence::new(0, alloc::vec![], 2.0).is_err());
        assert!(ExponentSequence::new(0, alloc::vec![2.0, f64::NAN], 2.0).is_err());
    }
}
