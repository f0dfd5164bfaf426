//! Extended-precision `ζ(s)`, its derivatives, the Euler–Mascheroni constant
//! and the Stieltjes constants.
//!
//! Everything here is a pure function of its arguments. The Bernoulli table
//! is built once behind a `OnceLock`, so concurrent first calls are safe.

pub mod bernoulli;
mod real;

use rug::ops::Pow;
use rug::{Float, Rational};

pub use real::{bits_for_digits, to_fixed, ComplexX, RealX, GUARD_BITS};
pub use rug::float::Round;

use crate::contour::{self, Circle};
use crate::{Error, Result};

/// Largest precision accepted by the public entry points.
pub const MAX_DIGITS: u32 = 200;
/// Internal callers may add guard digits on top of [`MAX_DIGITS`].
const MAX_INTERNAL_DIGITS: u32 = 300;
/// Euler–Maclaurin correction terms available from the Bernoulli table.
pub const MAX_EM_DEPTH: usize = bernoulli::MAX_INDEX / 2;
/// Largest Stieltjes index served by [`stieltjes_gamma`].
pub const MAX_STIELTJES: usize = 16;

/// Truncation point of the Euler–Maclaurin head sum.
///
/// `max(⌈|s|⌉ + 10, ⌈1.3 P⌉)`, raised to `⌈2.5 P⌉ − 120` for `P > 80` so the
/// first omitted correction still drops below `10^(−P−2)` within the 60
/// available terms.
pub fn em_truncation(abs_s: f64, digits: u32) -> u64 {
    let p = digits as f64;
    let a = abs_s.ceil() + 10.0;
    let b = (1.3 * p).ceil();
    let c = (2.5 * p).ceil() - 120.0;
    a.max(b).max(c) as u64
}

fn check_digits(digits: u32, limit: u32) -> Result<()> {
    if digits < 15 {
        return Err(Error::Precision(format!("{digits} digits requested, minimum is 15")));
    }
    if digits > limit {
        return Err(Error::Precision(format!(
            "{digits} digits requested, the Bernoulli table supports at most {limit}"
        )));
    }
    Ok(())
}

fn rational_to_float(q: &Rational, prec: u32) -> Float {
    Float::with_val(prec, q)
}

/// `10^(-e)` at precision `prec`.
fn ten_pow_neg(e: u32, prec: u32) -> Float {
    let mut t = Float::with_val(prec, 10);
    t = t.pow(-(e as i32));
    t
}

/// `ζ(s)` by Euler–Maclaurin summation, absolute error at most `10^(1−P)`.
pub fn zeta_em(s: &ComplexX, digits: u32) -> Result<ComplexX> {
    check_digits(digits, MAX_DIGITS)?;
    zeta_em_derivative_impl(s, 0, digits)
}

/// `ζ^(j)(s) = Σ (−ln n)^j n^(−s)` continued by Euler–Maclaurin.
pub fn zeta_em_derivative(s: &ComplexX, j: usize, digits: u32) -> Result<ComplexX> {
    check_digits(digits, MAX_DIGITS)?;
    zeta_em_derivative_impl(s, j, digits)
}

/// Convenience wrapper for real `s` given as `f64`.
pub fn zeta_real(s: f64, digits: u32) -> Result<RealX> {
    let z = zeta_em(&ComplexX::with_digits(digits, s, 0.0), digits)?;
    Ok(RealX::new(z.re, digits))
}

/// `ζ(k)` at integer `k` as a [`RealX`].
pub fn zeta_at_integer(k: u32, digits: u32) -> Result<RealX> {
    zeta_derivative(0, k, digits)
}

/// `ζ^(j)(k)` at integer `k ≥ 2`.
pub fn zeta_derivative(j: usize, k: u32, digits: u32) -> Result<RealX> {
    check_digits(digits, MAX_DIGITS)?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 2")));
    }
    let s = ComplexX::with_digits(digits, k as f64, 0.0);
    let z = zeta_em_derivative_impl(&s, j, digits)?;
    Ok(RealX::new(z.re, digits))
}

pub(crate) fn zeta_em_derivative_impl(s: &ComplexX, j: usize, digits: u32) -> Result<ComplexX> {
    check_digits(digits, MAX_INTERNAL_DIGITS)?;
    if s.im.is_zero() && s.re == 1 {
        return Err(Error::Pole("1".into()));
    }
    let abs_s = s.abs().to_f64();
    let n_trunc = em_truncation(abs_s, digits);
    // The head sum grows like N^(1−ℜs) while the result stays O(1); carry
    // enough extra bits to absorb that cancellation.
    let sigma = s.re.to_f64();
    let growth = ((1.0 - sigma).max(0.0) * (n_trunc as f64).log2()).ceil() as u32;
    let log_growth = (j as f64 * (n_trunc as f64).ln().log2()).ceil() as u32;
    let prec = bits_for_digits(digits) + growth + log_growth + 16;
    let s = s.clone().set_prec(prec);

    let mut total = ComplexX::zero(prec);
    if j == 0 {
        total.re += 1;
    }
    for n in 2..n_trunc {
        let ln = Float::with_val(prec, n).ln();
        let mut term = s.neg_power_of(&ln);
        if j > 0 {
            let w = Float::with_val(prec, -&ln).pow(j as u32);
            term = term.scale(&w);
        }
        total = &total + &term;
    }

    let big_n = Float::with_val(prec, n_trunc);
    let ln_n = Float::with_val(prec, big_n.ln_ref());
    let n_pow_neg_s = s.neg_power_of(&ln_n);

    // ∫_N^∞ (−ln x)^j x^(−s) dx = (−1)^j N^(1−s) Σ_{i≤j} (j!/i!) L^i / (s−1)^(j−i+1)
    let w = s.add_real(&Float::with_val(prec, -1)).recip();
    let mut inner = ComplexX::zero(prec);
    let mut w_pow = w.clone();
    let mut fact_ratio = Float::with_val(prec, 1); // j!/i! for i = j, j−1, ...
    for i in (0..=j).rev() {
        let l_pow = Float::with_val(prec, ln_n.clone().pow(i as u32));
        let coeff = Float::with_val(prec, &fact_ratio * &l_pow);
        inner = &inner + &w_pow.scale(&coeff);
        w_pow = &w_pow * &w;
        fact_ratio *= i as u32;
    }
    let mut integral = (&inner * &n_pow_neg_s).scale(&big_n);
    if j % 2 == 1 {
        integral = -&integral;
    }
    total = &total + &integral;

    // f(N)/2
    let neg_l_pow_j = Float::with_val(prec, (-ln_n.clone()).pow(j as u32));
    let half = n_pow_neg_s.scale(&Float::with_val(prec, &neg_l_pow_j / 2u32));
    total = &total + &half;

    // f^(m)(x) = x^(−s−m) Σ_i a_{m,i} (ln x)^i, starting from a_{0,j} = (−1)^j.
    let mut poly: Vec<ComplexX> = vec![ComplexX::zero(prec); j + 1];
    poly[j].re = Float::with_val(prec, if j % 2 == 0 { 1 } else { -1 });
    let neg_s = -&s;
    let tol = ten_pow_neg(digits + 2, prec);
    let inv_n2 = Float::with_val(prec, big_n.square_ref()).recip();
    let mut n_pow = Float::with_val(prec, 1); // N^(1−2i)
    let coeffs = bernoulli::em_coefficients();
    let mut m = 0usize;
    for i in 1..=MAX_EM_DEPTH {
        // advance poly to derivative order 2i − 1
        while m < 2 * i - 1 {
            let shift = neg_s.add_real(&Float::with_val(prec, -(m as i64)));
            let mut next = Vec::with_capacity(j + 1);
            for idx in 0..=j {
                let mut c = &poly[idx] * &shift;
                if idx < j {
                    c = &c + &poly[idx + 1].scale(&Float::with_val(prec, idx + 1));
                }
                next.push(c);
            }
            poly = next;
            m += 1;
        }
        if i > 1 {
            n_pow *= &inv_n2;
        } else {
            n_pow = Float::with_val(prec, 1) / &big_n;
        }
        let mut p_at_l = ComplexX::zero(prec);
        for c in poly.iter().rev() {
            p_at_l = &p_at_l.scale(&ln_n) + c;
        }
        let factor = Float::with_val(prec, &n_pow * &rational_to_float(&coeffs[i], prec));
        let term = -&(&p_at_l * &n_pow_neg_s).scale(&factor);
        if term.abs() < tol {
            return Ok(total.set_prec(bits_for_digits(digits)));
        }
        total = &total + &term;
    }
    Err(Error::Precision(format!(
        "Euler–Maclaurin corrections did not fall below 1e-{} within {MAX_EM_DEPTH} terms",
        digits + 2
    )))
}

/// Euler–Mascheroni constant from `H_{N−1} − ln N + 1/(2N) + Σ B_{2i}/(2i N^{2i})`.
pub fn euler_gamma(digits: u32) -> Result<RealX> {
    check_digits(digits, MAX_DIGITS)?;
    let n = em_truncation(1.0, digits);
    let prec = bits_for_digits(digits) + 16;
    let big_n = Float::with_val(prec, n);
    let mut h = Float::with_val(prec, 0);
    for i in 1..n {
        h += Float::with_val(prec, i).recip();
    }
    let mut g = h - Float::with_val(prec, big_n.ln_ref()) + Float::with_val(prec, 2u32 * &big_n).recip();
    let tol = ten_pow_neg(digits + 2, prec);
    let inv_n2 = Float::with_val(prec, big_n.square_ref()).recip();
    let mut n_pow = Float::with_val(prec, 1);
    for i in 1..=MAX_EM_DEPTH {
        n_pow *= &inv_n2;
        let b = rational_to_float(bernoulli::bernoulli(2 * i), prec);
        let term = Float::with_val(prec, &b * &n_pow) / (2 * i as u32);
        if Float::with_val(prec, term.abs_ref()) < tol {
            return Ok(RealX::new(g, digits));
        }
        g += term;
    }
    Err(Error::Precision("Euler–Mascheroni series did not converge".into()))
}

/// Stieltjes constant `γ_n`, the `n`-th regular Laurent coefficient of `ζ`
/// at `s = 1`: `ζ(s) = 1/(s−1) + Σ (−1)^n γ_n (s−1)^n / n!`.
pub fn stieltjes_gamma(n: usize, digits: u32) -> Result<RealX> {
    Ok(stieltjes_gammas(n, digits)?.swap_remove(n))
}

/// `γ_0 ..= γ_nmax` from one contour pass.
pub fn stieltjes_gammas(nmax: usize, digits: u32) -> Result<Vec<RealX>> {
    check_digits(digits, MAX_DIGITS)?;
    if nmax > MAX_STIELTJES {
        return Err(Error::Range(format!("Stieltjes index {nmax} exceeds {MAX_STIELTJES}")));
    }
    let circle = Circle::new(1.0, 0.5, 256)?;
    let work = digits + contour::amplification_digits(nmax, circle.radius);
    let prec = bits_for_digits(work);
    let one = Float::with_val(prec, 1);
    let taylor = circle.taylor_coefficients(nmax, work, |s| {
        let z = zeta_em_derivative_impl(s, 0, work)?;
        let pole = s.add_real(&-one.clone()).recip();
        Ok(&z - &pole)
    })?;
    let mut fact = Float::with_val(prec, 1);
    let mut out = Vec::with_capacity(nmax + 1);
    for (n, a) in taylor.into_iter().enumerate() {
        if n > 0 {
            fact *= n as u32;
        }
        contour::check_real(&a, &fact, digits, n)?;
        let mut g = Float::with_val(prec, &a.re * &fact);
        if n % 2 == 1 {
            g = -g;
        }
        out.push(RealX::new(g, digits));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }

    fn close(a: &Float, b: &Float, tol_exp: i32) -> bool {
        let d = Float::with_val(a.prec(), a - b).abs();
        d < Float::with_val(a.prec(), 10).pow(tol_exp)
    }

    #[test]
    fn zeta_two_and_four() {
        for digits in [20, 60, 120] {
            let prec = bits_for_digits(digits);
            let z2 = zeta_real(2.0, digits).unwrap();
            let expect = pi(prec).square() / 6;
            assert!(close(z2.value(), &expect, -(digits as i32) + 2), "P = {digits}");
            let z4 = zeta_real(4.0, digits).unwrap();
            let expect = pi(prec).pow(4) / 90;
            assert!(close(z4.value(), &expect, -(digits as i32) + 2), "P = {digits}");
        }
    }

    #[test]
    fn zeta_half_and_negative() {
        let z = zeta_real(0.5, 30).unwrap();
        let s = z.to_sci(20);
        assert!(s.starts_with("-1.46035450880958681"), "{s}");
        let z = zeta_real(-1.0, 30).unwrap();
        let expect = Float::with_val(200, -1) / 12;
        assert!(close(z.value(), &expect, -28));
    }

    #[test]
    fn zeta_at_200_digits() {
        let z = zeta_real(2.0, 200).unwrap();
        let prec = bits_for_digits(200);
        let expect = pi(prec).square() / 6;
        assert!(close(z.value(), &expect, -199));
        assert!(zeta_real(2.0, 201).is_err());
    }

    #[test]
    fn pole_is_rejected() {
        assert!(matches!(zeta_real(1.0, 20), Err(Error::Pole(_))));
    }

    #[test]
    fn complex_zeta_first_zero() {
        // ζ(1/2 + 14.134725141734693790457251983562 i) = 0
        let prec = bits_for_digits(40);
        let s = ComplexX::new(
            Float::with_val(prec, 0.5),
            Float::with_val(prec, Float::parse("14.134725141734693790457251983562470270784").unwrap()),
        );
        let z = zeta_em(&s, 40).unwrap();
        assert!(z.abs().to_f64() < 1e-30, "{z}");
    }

    #[test]
    fn complex_conjugate_symmetry() {
        let s = ComplexX::with_digits(30, 1.3, 2.7);
        let a = zeta_em(&s, 30).unwrap();
        let b = zeta_em(&s.conj(), 30).unwrap();
        assert!(close(&a.re, &b.re, -30));
        assert!(close(&a.im, &(-b.im.clone()), -30));
    }

    #[test]
    fn derivative_at_two() {
        // ζ'(2) = (π²/6)(γ + ln 2π − 12 ln A); the digits below come from that identity.
        let d = zeta_derivative(1, 2, 30).unwrap();
        assert!(d.to_sci(20).starts_with("-9.3754825431584375370"), "{}", d.to_sci(25));
        let z = zeta_derivative(0, 2, 30).unwrap();
        assert!(z.to_sci(16).starts_with("1.644934066848226"));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let digits = 40;
        let (a, b) = (3.0 + 1e-8, 3.0 - 1e-8);
        let h = (a - b) / 2.0;
        let zp = zeta_real(a, digits).unwrap().into_float();
        let zm = zeta_real(b, digits).unwrap().into_float();
        let fd = ((zp - zm) / (2.0 * h)).to_f64();
        let d = zeta_derivative(1, 3, digits).unwrap().to_f64();
        assert!((fd - d).abs() < 1e-12, "{fd} vs {d}");
        let dd = zeta_em_derivative(&ComplexX::with_digits(digits, a, 0.0), 1, digits).unwrap();
        let dm = zeta_em_derivative(&ComplexX::with_digits(digits, b, 0.0), 1, digits).unwrap();
        let second_fd = ((dd.re - dm.re) / (2.0 * h)).to_f64();
        let second = zeta_derivative(2, 3, digits).unwrap().to_f64();
        assert!((second_fd - second).abs() < 1e-7, "{second_fd} vs {second}");
    }

    #[test]
    fn large_k_derivative_vanishes() {
        let d = zeta_derivative(1, 60, 30).unwrap().to_f64();
        let bound = 2.0 * 2f64.ln() / 2f64.powi(60);
        assert!(d < 0.0 && d.abs() <= bound);
    }

    #[test]
    fn euler_gamma_against_mpfr() {
        for digits in [20, 50, 200] {
            let g = euler_gamma(digits).unwrap();
            let mpfr = Float::with_val(bits_for_digits(digits), Constant::Euler);
            assert!(close(g.value(), &mpfr, -(digits as i32)), "P = {digits}");
        }
        assert!(euler_gamma(20).unwrap().to_fixed(22).starts_with("0.57721566490153286060"));
        let g30 = euler_gamma(30).unwrap().to_fixed(25);
        let g20 = euler_gamma(20).unwrap().to_fixed(25);
        assert_eq!(&g30[..22], &g20[..22]);
    }

    #[test]
    fn stieltjes_low_orders() {
        let g = stieltjes_gammas(2, 30).unwrap();
        let gamma = euler_gamma(30).unwrap();
        assert!(g[0].agreement_digits(&gamma) > 28.0);
        assert!(g[1].to_sci(16).starts_with("-7.28158454836767"), "{}", g[1]);
        assert!(g[2].is_sign_negative() && g[2].to_f64().abs() < 0.01);
        assert!(matches!(stieltjes_gamma(17, 30), Err(Error::Range(_))));
    }

    #[test]
    fn precision_bounds() {
        assert!(matches!(zeta_real(2.0, 10), Err(Error::Precision(_))));
        assert!(matches!(euler_gamma(250), Err(Error::Precision(_))));
    }
}
