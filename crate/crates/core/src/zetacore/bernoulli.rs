//! Exact Bernoulli numbers for the Euler–Maclaurin corrections.

use std::sync::OnceLock;

use rug::{Integer, Rational};

/// Highest Bernoulli index in the table (`B_120`).
pub const MAX_INDEX: usize = 120;

static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
static EM_COEFFS: OnceLock<Vec<Rational>> = OnceLock::new();

/// `B_0 ..= B_120` (convention `B_1 = -1/2`).
///
/// Runs `Σ_{j=0}^{m} C(m+1, j) B_j = 0` once; later calls share the table.
pub fn table() -> &'static [Rational] {
    TABLE.get_or_init(|| {
        let mut b: Vec<Rational> = Vec::with_capacity(MAX_INDEX + 1);
        b.push(Rational::from(1));
        for m in 1..=MAX_INDEX {
            if m > 1 && m % 2 == 1 {
                b.push(Rational::new());
                continue;
            }
            let mut acc = Rational::new();
            let mut binom = Integer::from(1);
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    acc += Rational::from(bj * &binom);
                }
                // C(m+1, j+1) from C(m+1, j)
                binom *= (m + 1 - j) as u32;
                binom /= (j + 1) as u32;
            }
            b.push(-acc / Rational::from(m as u32 + 1));
        }
        b
    })
}

pub fn bernoulli(n: usize) -> &'static Rational {
    &table()[n]
}

/// `B_{2i} / (2i)!` for `i = 1 ..= 60`; index 0 is unused.
pub fn em_coefficients() -> &'static [Rational] {
    EM_COEFFS.get_or_init(|| {
        let mut out = vec![Rational::new()];
        let mut fact = Integer::from(1);
        for i in 1..=MAX_INDEX / 2 {
            fact *= (2 * i - 1) as u32;
            fact *= (2 * i) as u32;
            out.push(Rational::from(bernoulli(2 * i) / &fact));
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn known_values() {
        assert_eq!(*bernoulli(0), q(1, 1));
        assert_eq!(*bernoulli(1), q(-1, 2));
        assert_eq!(*bernoulli(2), q(1, 6));
        assert_eq!(*bernoulli(3), q(0, 1));
        assert_eq!(*bernoulli(4), q(-1, 30));
        assert_eq!(*bernoulli(12), q(-691, 2730));
        assert_eq!(*bernoulli(20), q(-174611, 330));
        let b60: Rational = "-1215233140483755572040304994079820246041491/56786730"
            .parse()
            .unwrap();
        assert_eq!(*bernoulli(60), b60);
    }

    #[test]
    fn signs_alternate_and_denominators_follow_von_staudt() {
        for i in 1..=60 {
            let b = bernoulli(2 * i);
            assert_eq!(b.cmp0().is_gt(), i % 2 == 1, "B_{}", 2 * i);
            // Von Staudt–Clausen: denominator is the product of primes p with (p-1) | 2i
            let mut den = Integer::from(1);
            for p in 2..=(2 * i + 1) as u32 {
                let is_prime = (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
                if is_prime && (2 * i as u32) % (p - 1) == 0 {
                    den *= p;
                }
            }
            assert_eq!(*b.denom(), den, "B_{}", 2 * i);
        }
    }

    #[test]
    fn em_coefficient_magnitude() {
        // |B_{2i}|/(2i)! ~ 2/(2π)^{2i}
        let c = &em_coefficients()[30];
        let approx = 2.0 / (2.0 * std::f64::consts::PI).powi(60);
        assert!((c.to_f64().abs() / approx - 1.0).abs() < 1e-10);
    }
}
