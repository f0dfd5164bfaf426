//! Compensated accumulation for machine-precision paths.

use std::ops::{Add, AddAssign, Neg, Sub};

/// Neumaier's variant of Kahan summation.
///
/// Unlike plain Kahan it stays exact when an addend is larger in magnitude
/// than the running sum, which happens at the start of every partial sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum into this one. Merging in a fixed order
    /// gives results that do not depend on how the work was scheduled.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// The unrounded pair as a double-double.
    pub fn to_dd(&self) -> Dd {
        Dd::from_sum(self.sum, self.comp)
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum `hi + lo` of two doubles (about 32 significant digits).
///
/// Used where a machine-precision quantity must be reconstructed exactly,
/// e.g. `f_k(x) + x/ζ(k) = Q_k(x)` at `x = 10⁸`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Product with a double, exact up to the final renormalisation.
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_recovers_small_addends() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..1_000_000 {
            s.add(1e-16);
        }
        assert!((s.value() - (1.0 + 1e-10)).abs() < 1e-22);
        let naive = (0..1_000_000).fold(1.0f64, |acc, _| acc + 1e-16);
        assert_eq!(naive, 1.0);
    }

    #[test]
    fn neumaier_handles_large_addend() {
        let s: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (1..10_000).map(|i| 1.0 / i as f64).collect();
        let seq: CompensatedSum = xs.iter().copied().collect();
        let mut merged = CompensatedSum::new();
        for chunk in xs.chunks(777) {
            let part: CompensatedSum = chunk.iter().copied().collect();
            merged.merge(&part);
        }
        assert!((seq.value() - merged.value()).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn dd_product_keeps_low_bits() {
        let hi = 1.0 / 3.0;
        let third = Dd::from_sum(hi, (-3.0f64).mul_add(hi, 1.0) / 3.0);
        let x = 1e8;
        let p = third.mul_f64(x);
        let r = p - Dd::from(33_333_333.0);
        assert!((r.to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }
}
