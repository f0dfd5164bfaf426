//! Taylor coefficients from samples on a circle.
//!
//! For `f` analytic on a disk around `c` of radius greater than `r`, the
//! trapezoidal rule on `M` equispaced nodes gives
//! `a_n ≈ (1/(M rⁿ)) Σ_j f(c + r e^{iθ_j}) e^{−inθ_j}`, `θ_j = 2πj/M`, with an
//! aliasing error that decays geometrically in `M`.

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::zetacore::{bits_for_digits, ComplexX};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: f64,
    pub radius: f64,
    pub nodes: usize,
}

impl Circle {
    pub fn new(center: f64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Contour(format!("radius {radius} must be positive")));
        }
        if nodes < 4 || !nodes.is_power_of_two() {
            return Err(Error::Contour(format!("node count {nodes} must be a power of two >= 4")));
        }
        Ok(Self { center, radius, nodes })
    }

    /// `a_0 ..= a_nmax` of `f` about the center, evaluated at `digits`.
    /// Node evaluations run in parallel; the reduction is sequential.
    pub fn taylor_coefficients<F>(&self, nmax: usize, digits: u32, f: F) -> Result<Vec<ComplexX>>
    where
        F: Fn(&ComplexX) -> Result<ComplexX> + Sync,
    {
        let prec = bits_for_digits(digits);
        let m = self.nodes;
        let roots = unit_roots(m, prec);
        let radius = Float::with_val(prec, self.radius);
        let center = Float::with_val(prec, self.center);
        let values: Vec<ComplexX> = (0..m)
            .into_par_iter()
            .map(|j| {
                let s = roots[j].conj().scale(&radius).add_real(&center);
                f(&s)
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(nmax + 1);
        let mut r_pow = Float::with_val(prec, m);
        for n in 0..=nmax {
            let mut acc = ComplexX::zero(prec);
            for (j, v) in values.iter().enumerate() {
                acc = &acc + &(v * &roots[(n * j) % m]);
            }
            out.push(ComplexX::new(
                Float::with_val(prec, &acc.re / &r_pow),
                Float::with_val(prec, &acc.im / &r_pow),
            ));
            r_pow *= &radius;
        }
        Ok(out)
    }
}

/// `e^{−2πiq/M}` for `q = 0 .. M`.
fn unit_roots(m: usize, prec: u32) -> Vec<ComplexX> {
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    (0..m)
        .map(|q| {
            let theta = Float::with_val(prec, &two_pi * q as u32) / m as u32;
            let (s, c) = theta.sin_cos(Float::new(prec));
            ComplexX::new(c, -s)
        })
        .collect()
}

/// Extra decimal digits lost when turning `a_n` into `n! a_n` at radius `r`.
pub fn amplification_digits(nmax: usize, radius: f64) -> u32 {
    let mut log10 = 0.0f64;
    let mut worst = 0.0f64;
    for n in 1..=nmax {
        log10 += (n as f64 / radius).log10();
        worst = worst.max(log10);
    }
    worst.ceil() as u32 + 4
}

/// Fails unless `n! · Im(a_n)` is below `10^(4 − digits)`.
pub fn check_real(a: &ComplexX, n_fact: &Float, digits: u32, n: usize) -> Result<()> {
    let im = Float::with_val(a.prec(), &a.im * n_fact).abs();
    let limit = Float::with_val(a.prec(), 10).pow(4 - digits as i32);
    if im >= limit {
        return Err(Error::Precision(format!(
            "coefficient {n} has imaginary residue {} above 1e{}",
            im.to_f64(),
            4 - digits as i32
        )));
    }
    Ok(())
}
