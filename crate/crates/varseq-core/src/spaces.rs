//! Finitely supported sequences and the variable-exponent norm machinery.
//!
//! The Luxemburg norm is the infimum of `λ > 0` with `Σ |a(i)/λ|^{p(i)} <= 1`.
//! For a finitely supported sequence with finite exponents the modular is
//! continuous and strictly decreasing in `λ`, so the infimum is the unique
//! root of `modular = 1` and a bracketed bisection finds it to any relative
//! tolerance.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::exponents::ExponentSequence;
use crate::fmath;
use crate::rng::SplitMix64;

/// A finitely supported real sequence on ℤ.
///
/// Values outside `[support_lo, support_hi]` are identically zero. The stored
/// window may contain zeros; `support_points` counts the nonzero entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Seq {
    support_lo: i64,
    values: Vec<f64>,
}

impl Seq {
    /// Build from the first support index and the window of values.
    pub fn new(support_lo: i64, values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            if !v.is_finite() {
                return Err(CoreError::InvalidInput("sequence values must be finite"));
            }
        }
        Ok(Seq { support_lo, values })
    }

    /// The zero sequence.
    pub fn zero() -> Self {
        Seq {
            support_lo: 0,
            values: Vec::new(),
        }
    }

    /// Unit spike at `position`.
    pub fn delta(position: i64) -> Self {
        Seq {
            support_lo: position,
            values: alloc::vec![1.0],
        }
    }

    pub fn support_lo(&self) -> i64 {
        self.support_lo
    }

    pub fn support_hi(&self) -> i64 {
        self.support_lo + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a(i)`, zero outside the stored window.
    pub fn at(&self, i: i64) -> f64 {
        if i >= self.support_lo && i <= self.support_hi() {
            self.values[(i - self.support_lo) as usize]
        } else {
            0.0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Number of nonzero entries.
    pub fn support_points(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0.0).count()
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for &v in &self.values {
            let a = fmath::abs(v);
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Iterate over the nonzero entries as `(index, value)`, ascending index.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(move |(k, &v)| (self.support_lo + k as i64, v))
    }

    /// Pointwise absolute value.
    pub fn abs(&self) -> Seq {
        Seq {
            support_lo: self.support_lo,
            values: self.values.iter().map(|&v| fmath::abs(v)).collect(),
        }
    }

    /// Pointwise `|a(i)|^r`.
    pub fn abs_pow(&self, r: f64) -> Seq {
        Seq {
            support_lo: self.support_lo,
            values: self
                .values
                .iter()
                .map(|&v| {
                    if v == 0.0 {
                        0.0
                    } else {
                        fmath::powf(fmath::abs(v), r)
                    }
                })
                .collect(),
        }
    }

    /// Pointwise scaling `c * a`.
    pub fn scaled(&self, c: f64) -> Seq {
        Seq {
            support_lo: self.support_lo,
            values: self.values.iter().map(|&v| c * v).collect(),
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Seq) -> Seq {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let lo = self.support_lo.min(other.support_lo);
        let hi = self.support_hi().max(other.support_hi());
        let mut values = alloc::vec![0.0; (hi - lo + 1) as usize];
        for (i, v) in self.iter_nonzero() {
            values[(i - lo) as usize] += v;
        }
        for (i, v) in other.iter_nonzero() {
            values[(i - lo) as usize] += v;
        }
        Seq {
            support_lo: lo,
            values,
        }
    }
}

/// The modular `Σ |a(i)|^{p(i)}` over the support of `a`.
pub fn modular(a: &Seq, p: &ExponentSequence) -> f64 {
    modular_scaled(a, p, 1.0)
}

/// `Σ |a(i)/lambda|^{p(i)}` over the support of `a`.
pub fn modular_scaled(a: &Seq, p: &ExponentSequence, lambda: f64) -> f64 {
    let mut sum = 0.0;
    for (i, v) in a.iter_nonzero() {
        sum += fmath::powf(fmath::abs(v) / lambda, p.at(i));
    }
    sum
}

/// The Luxemburg norm, bracketed bisection to relative width `rel_tol`.
///
/// Returns 0 exactly for the zero sequence. The initial bracket
/// `[max|a| * N^(-1/p_-), max|a| * N^(1/p_-)]` (N = number of nonzero points)
/// always contains the root; it is nevertheless verified against the modular
/// and expanded geometrically if floating-point evaluation disagrees.
pub fn luxemburg_norm(a: &Seq, p: &ExponentSequence, rel_tol: f64) -> f64 {
    assert!(rel_tol > 0.0, "rel_tol must be positive");
    if a.is_zero() {
        return 0.0;
    }
    let n = a.support_points() as f64;
    let p_minus = p.min_exponent();
    let peak = a.max_abs();
    let spread = fmath::powf(n, 1.0 / p_minus);
    let mut lo = peak / spread;
    let mut hi = peak * spread;
    // Bracket verification: modular is decreasing in lambda; want
    // modular(lo) >= 1 >= modular(hi).
    while modular_scaled(a, p, lo) < 1.0 {
        lo *= 0.5;
    }
    while modular_scaled(a, p, hi) > 1.0 {
        hi *= 2.0;
    }
    // Geometric bisection on the verified bracket.
    while hi - lo > rel_tol * hi {
        let mid = fmath::sqrt(lo * hi);
        if mid <= lo || mid >= hi {
            break; // bracket exhausted at float resolution
        }
        if modular_scaled(a, p, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Newton polish: the modular is smooth and strictly decreasing, so two
    // steps from a bracket-width start land within an ulp of the root.
    let mut root = 0.5 * (lo + hi);
    for _ in 0..2 {
        let mut value = 0.0;
        let mut derivative = 0.0;
        for (i, v) in a.iter_nonzero() {
            let exponent = p.at(i);
            let term = fmath::powf(fmath::abs(v) / root, exponent);
            value += term;
            derivative -= exponent * term / root;
        }
        if derivative == 0.0 {
            break;
        }
        let next = root - (value - 1.0) / derivative;
        if next.is_finite() && next > 0.0 {
            root = next.clamp(lo, hi);
        } else {
            break;
        }
    }
    root
}

/// Both sides of the norm power identity `‖a‖^r = ‖ |a|^r ‖_{p/r}`.
///
/// Returns `(lhs, rhs)` computed by two independent bisections; the caller
/// asserts equality. Requires `0 < r < p_-`.
pub fn power_norm_identity(
    a: &Seq,
    p: &ExponentSequence,
    r: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    let p_minus = p.min_exponent();
    if !(r > 0.0 && r < p_minus) {
        return Err(CoreError::InvalidParameter {
            name: "r",
            value: r,
            requires: "0 < r < p_-",
        });
    }
    let lhs = fmath::powf(luxemburg_norm(a, p, rel_tol), r);
    let rhs = luxemburg_norm(&a.abs_pow(r), &p.scaled(r), rel_tol);
    Ok((lhs, rhs))
}

/// `Σ |a(i) b(i)|` over the intersection of supports.
pub fn holder_pairing(a: &Seq, b: &Seq) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let lo = a.support_lo().max(b.support_lo());
    let hi = a.support_hi().min(b.support_hi());
    let mut sum = 0.0;
    let mut i = lo;
    while i <= hi {
        sum += fmath::abs(a.at(i) * b.at(i));
        i += 1;
    }
    sum
}

/// Lower bound for `sup { Σ |a b| : ‖b‖_{p'} <= 1 }`.
///
/// The analytic candidate `b*(i) = |a(i)/λ*|^{p(i)-1}` (with `λ*` the
/// Luxemburg norm of `a`) has conjugate modular equal to the modular of
/// `a/λ*`, hence unit conjugate norm up to bisection tolerance, and pairs
/// with `a` to exactly `λ*`. Random multiplicative perturbations of `b*`,
/// renormalized to unit conjugate norm, can only improve the bound.
///
/// Requires `p` in class P (conjugation) and `a != 0`.
pub fn dual_norm_estimate(
    a: &Seq,
    p: &ExponentSequence,
    trials: usize,
    seed: u64,
    rel_tol: f64,
) -> Result<f64> {
    if a.is_zero() {
        return Err(CoreError::ZeroSequence);
    }
    let p_conj = p.conjugate()?;
    let lambda = luxemburg_norm(a, p, rel_tol);
    let base: Vec<(i64, f64)> = a
        .iter_nonzero()
        .map(|(i, v)| (i, fmath::powf(fmath::abs(v) / lambda, p.at(i) - 1.0)))
        .collect();
    let lo_idx = base.first().map(|&(i, _)| i).unwrap_or(0);
    let hi_idx = base.last().map(|&(i, _)| i).unwrap_or(0);
    let mut window = alloc::vec![0.0; (hi_idx - lo_idx + 1) as usize];

    let mut best = 0.0f64;
    for trial in 0..=trials {
        for v in window.iter_mut() {
            *v = 0.0;
        }
        if trial == 0 {
            for &(i, v) in &base {
                window[(i - lo_idx) as usize] = v;
            }
        } else {
            // multiplicative jitter in [0.5, 1.5), per-trial substream
            let mut rng = SplitMix64::substream(seed, trial as u64);
            for &(i, v) in &base {
                window[(i - lo_idx) as usize] = v * rng.uniform(0.5, 1.5);
            }
        }
        let candidate = Seq {
            support_lo: lo_idx,
            values: window.clone(),
        };
        let nrm = luxemburg_norm(&candidate, &p_conj, rel_tol);
        if nrm == 0.0 {
            continue;
        }
        let pairing = holder_pairing(a, &candidate) / nrm;
        if pairing > best {
            best = pairing;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(lo: i64, vals: &[f64]) -> Seq {
        Seq::new(lo, vals.to_vec()).unwrap()
    }

    fn constant(c: f64) -> ExponentSequence {
        ExponentSequence::constant(c).unwrap()
    }

    #[test]
    fn modular_examples() {
        let p = constant(2.0);
        assert_eq!(modular(&Seq::zero(), &p), 0.0);
        assert_eq!(modular(&Seq::delta(0), &p), 1.0);
        let a = seq(0, &[2.0]);
        assert_eq!(modular(&a, &constant(3.0)), 8.0);
    }

    #[test]
    fn norm_euclidean_case() {
        let p = constant(2.0);
        let a = seq(0, &[3.0, 4.0]);
        let nrm = luxemburg_norm(&a, &p, 1e-12);
        assert!((nrm - 5.0).abs() < 5e-11, "got {nrm}");
    }

    #[test]
    fn norm_single_point_exact() {
        let p = constant(7.3);
        let a = seq(11, &[4.25]);
        assert_eq!(luxemburg_norm(&a, &p, 1e-12), 4.25);
    }

    #[test]
    fn norm_zero_exact() {
        assert_eq!(luxemburg_norm(&Seq::zero(), &constant(2.0), 1e-12), 0.0);
        assert_eq!(luxemburg_norm(&seq(3, &[0.0, 0.0]), &constant(2.0), 1e-12), 0.0);
    }

    #[test]
    fn norm_golden_ratio_case() {
        // p(0) = 1, p(1) = 2, a = (1, 1): 1/λ + 1/λ² = 1 at λ = (1+√5)/2.
        let p = ExponentSequence::new(0, alloc::vec![1.0, 2.0], 2.0).unwrap();
        let a = seq(0, &[1.0, 1.0]);
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let nrm = luxemburg_norm(&a, &p, 1e-12);
        assert!((nrm - phi).abs() < 1e-10, "got {nrm}, want {phi}");
    }

    #[test]
    fn power_identity_examples() {
        let p = constant(4.0);
        let a = seq(0, &[1.0, 1.0, 1.0, 1.0]);
        let (lhs, rhs) = power_norm_identity(&a, &p, 2.0, 1e-12).unwrap();
        assert!((lhs - 2.0).abs() < 1e-10);
        assert!((rhs - 2.0).abs() < 1e-10);

        let a = seq(5, &[2.5]);
        let (lhs, rhs) = power_norm_identity(&a, &constant(3.0), 1.7, 1e-12).unwrap();
        assert!((lhs - 2.5f64.powf(1.7)).abs() < 1e-9);
        assert!((lhs - rhs).abs() < 1e-9 * rhs.abs());
    }

    #[test]
    fn power_identity_rejects_large_r() {
        let a = seq(0, &[1.0]);
        assert!(power_norm_identity(&a, &constant(2.0), 2.0, 1e-12).is_err());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(holder_pairing(&Seq::delta(0), &Seq::delta(5)), 0.0);
        assert_eq!(holder_pairing(&Seq::delta(0), &Seq::delta(0)), 1.0);
        let a = seq(0, &[1.0, 2.0]);
        let b = seq(0, &[3.0, 1.0]);
        assert_eq!(holder_pairing(&a, &b), 5.0);
    }

    #[test]
    fn dual_estimate_cauchy_schwarz() {
        let p = constant(2.0);
        let a = seq(0, &[3.0, 4.0]);
        let est = dual_norm_estimate(&a, &p, 8, 42, 1e-12).unwrap();
        assert!(est >= 5.0 * (1.0 - 1e-9), "got {est}");
        assert!(est <= 2.0 * 5.0 * (1.0 + 1e-9));
    }

    #[test]
    fn dual_estimate_single_point() {
        let p = constant(3.0);
        let a = seq(-4, &[2.0]);
        let est = dual_norm_estimate(&a, &p, 4, 1, 1e-12).unwrap();
        assert!((est - 2.0).abs() < 1e-9);
    }

    #[test]
    fn dual_estimate_rejects_zero() {
        assert!(matches!(
            dual_norm_estimate(&Seq::zero(), &constant(2.0), 4, 1, 1e-12),
            Err(CoreError::ZeroSequence)
        ));
    }

    #[test]
    fn add_and_at() {
        let a = seq(0, &[1.0, 2.0]);
        let b = seq(1, &[10.0]);
        let c = a.add(&b);
        assert_eq!(c.at(0), 1.0);
        assert_eq!(c.at(1), 12.0);
        assert_eq!(c.at(2), 0.0);
    }
}
