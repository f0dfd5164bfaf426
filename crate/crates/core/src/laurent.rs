//! Regular Laurent coefficients of `ζ(s)/ζ(ks)` at its pole `s = 1`:
//!
//! `ζ(s)/ζ(ks) = 1/(ζ(k)(s−1)) + Σ_n γ^{M,k}_n (s−1)^n / n!`.
//!
//! Three analytic routes are provided: the closed form for `n = 0`, Cauchy
//! contour extraction of all coefficients from `ζ` samples, and the product
//! of the Laurent series of `ζ(s)` with the Taylor series of `1/ζ(ks)`.

use rug::Float;

use crate::contour::{self, Circle};
use crate::zetacore::{
    self, bits_for_digits, euler_gamma, stieltjes_gammas, zeta_at_integer, zeta_derivative,
    ComplexX, RealX,
};
use crate::{Error, Result};

/// Largest coefficient index any route will produce.
pub const MAX_ORDER: usize = 16;
pub const DEFAULT_RADIUS: f64 = 0.5;
pub const DEFAULT_NODES: usize = 256;
pub const DEFAULT_DIGITS: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedFormN0,
    Contour,
    SeriesProduct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentExpansion {
    pub k: u32,
    /// `1/ζ(k)`.
    pub residue: RealX,
    /// `γ^{M,k}_0 ..= γ^{M,k}_N`.
    pub coeffs: Vec<RealX>,
    pub digits: u32,
    pub method: Method,
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 2")));
    }
    Ok(())
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::Range(format!("order {n} exceeds the cap of {MAX_ORDER}")));
    }
    Ok(())
}

/// `γ^{M,k}_0 = γ/ζ(k) − k ζ'(k)/ζ(k)²`.
pub fn closed_form_gamma0(k: u32, digits: u32) -> Result<RealX> {
    check_k(k)?;
    let work = digits + 5;
    let prec = bits_for_digits(work);
    let gamma = euler_gamma(work)?.into_float();
    let z = zeta_at_integer(k, work)?.into_float();
    let dz = zeta_derivative(1, k, work)?.into_float();
    let first = Float::with_val(prec, &gamma / &z);
    let second = Float::with_val(prec, &dz * k) / Float::with_val(prec, z.square_ref());
    Ok(RealX::new(first - second, digits))
}

/// Radius of the disk about `s = 1` on which the regular part is analytic,
/// bounded by the trivial zero of `ζ(ks)` at `s = −2/k`.
pub fn convergence_radius(k: u32) -> f64 {
    1.0 + 2.0 / k as f64
}

/// Contour extraction with the default radius, node count and precision.
pub fn extract_coeffs_default(k: u32, n: usize) -> Result<LaurentExpansion> {
    extract_coeffs(k, n, DEFAULT_DIGITS, DEFAULT_RADIUS, DEFAULT_NODES)
}

/// `γ^{M,k}_0 ..= γ^{M,k}_N` from `M` samples of
/// `g(s) = ζ(s)/ζ(ks) − 1/(ζ(k)(s−1))` on `|s − 1| = r`.
pub fn extract_coeffs(
    k: u32,
    n: usize,
    digits: u32,
    radius: f64,
    nodes: usize,
) -> Result<LaurentExpansion> {
    check_k(k)?;
    check_order(n)?;
    if radius >= convergence_radius(k) {
        return Err(Error::Contour(format!(
            "radius {radius} reaches the singularity at distance {}",
            convergence_radius(k)
        )));
    }
    if nodes < 4 * n {
        return Err(Error::Contour(format!("{nodes} nodes cannot resolve order {n}")));
    }
    let circle = Circle::new(1.0, radius, nodes)?;
    let work = digits + contour::amplification_digits(n, radius);
    let prec = bits_for_digits(work);
    let residue = zeta_at_integer(k, work)?.into_float().recip();
    let kf = Float::with_val(prec, k);
    let one = Float::with_val(prec, -1);
    let taylor = circle.taylor_coefficients(n, work, |s| {
        let num = zetacore::zeta_em_derivative_impl(s, 0, work)?;
        let den = zetacore::zeta_em_derivative_impl(&s.scale(&kf), 0, work)?;
        let ratio = &num / &den;
        let pole = s.add_real(&one).recip().scale(&residue);
        let g = &ratio - &pole;
        guard_cancellation(&ratio, &pole, &g, work)?;
        Ok(g)
    })?;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut fact = Float::with_val(prec, 1);
    for (i, a) in taylor.into_iter().enumerate() {
        if i > 0 {
            fact *= i as u32;
        }
        contour::check_real(&a, &fact, digits, i)?;
        coeffs.push(RealX::new(Float::with_val(prec, &a.re * &fact), digits));
    }
    Ok(LaurentExpansion {
        k,
        residue: RealX::new(residue, digits),
        coeffs,
        digits,
        method: Method::Contour,
    })
}

/// The subtraction `ratio − pole` is the only cancellation point; at least
/// ten significant digits must survive it.
fn guard_cancellation(a: &ComplexX, b: &ComplexX, diff: &ComplexX, digits: u32) -> Result<()> {
    let big = a.abs().max(&b.abs()).to_f64();
    let small = diff.abs().to_f64();
    let lost = if small == 0.0 { f64::INFINITY } else { (big / small).log10().max(0.0) };
    if digits as f64 - lost < 10.0 {
        return Err(Error::Precision(format!(
            "pole subtraction lost {lost:.1} of {digits} digits"
        )));
    }
    Ok(())
}

/// Coefficients from `[1/(s−1) + Σ (−1)^i γ_i (s−1)^i/i!] · 1/ζ(ks)`, with the
/// Taylor series of `ζ(ks)` built from `ζ^(j)(k) k^j / j!` and inverted as a
/// formal power series.
pub fn series_product_coeffs(k: u32, n: usize, digits: u32) -> Result<LaurentExpansion> {
    check_k(k)?;
    check_order(n)?;
    let extra = 10 + contour_free_growth(n);
    let work = digits + extra;
    let prec = bits_for_digits(work);

    // ζ(ks) = Σ_j d_j (s−1)^j
    let mut d = Vec::with_capacity(n + 2);
    let mut scale = Float::with_val(prec, 1); // k^j / j!
    for j in 0..=n + 1 {
        if j > 0 {
            scale *= k;
            scale /= j as u32;
        }
        let z = zeta_derivative(j, k, work)?.into_float();
        d.push(Float::with_val(prec, &z * &scale));
    }

    let e = reciprocal_series(&d, work)?;
    let gammas = stieltjes_gammas(n, work)?;
    let mut reg = Vec::with_capacity(n + 1); // (−1)^i γ_i / i!
    let mut fact = Float::with_val(prec, 1);
    for (i, g) in gammas.iter().enumerate() {
        if i > 0 {
            fact *= i as u32;
        }
        let mut r = Float::with_val(prec, g.value() / &fact);
        if i % 2 == 1 {
            r = -r;
        }
        reg.push(r);
    }

    let mut coeffs = Vec::with_capacity(n + 1);
    let mut fact = Float::with_val(prec, 1);
    for m in 0..=n {
        if m > 0 {
            fact *= m as u32;
        }
        let mut a = e[m + 1].clone();
        for i in 0..=m {
            a += Float::with_val(prec, &reg[i] * &e[m - i]);
        }
        coeffs.push(RealX::new(a * &fact, digits));
    }
    Ok(LaurentExpansion {
        k,
        residue: RealX::new(e[0].clone(), digits),
        coeffs,
        digits,
        method: Method::SeriesProduct,
    })
}

fn contour_free_growth(n: usize) -> u32 {
    // n! growth of the returned coefficients relative to the series terms
    (1..=n).map(|i| (i as f64).log10()).sum::<f64>().ceil() as u32
}

/// `1/d` as a power series, truncated to `d.len()` terms.
pub fn reciprocal_series(d: &[Float], digits: u32) -> Result<Vec<Float>> {
    let prec = d[0].prec();
    if d[0].is_zero() {
        return Err(Error::InvalidArgument("series has zero constant term".into()));
    }
    let inv0 = Float::with_val(prec, d[0].recip_ref());
    let mut e = vec![inv0.clone()];
    for m in 1..d.len() {
        let mut acc = Float::with_val(prec, 0);
        let mut largest = 0.0f64;
        for i in 1..=m {
            let t = Float::with_val(prec, &d[i] * &e[m - i]);
            largest = largest.max(t.to_f64().abs());
            acc += t;
        }
        let em = -acc * &inv0;
        let lost = if em.is_zero() { f64::INFINITY } else { (largest * inv0.to_f64().abs() / em.to_f64().abs()).log10() };
        if lost > digits as f64 - 10.0 {
            return Err(Error::Precision(format!("series reciprocal lost {lost:.1} digits at order {m}")));
        }
        e.push(em);
    }
    Ok(e)
}
