//! `ζ(s)/ζ(ks)` in the strip `ℜ(s) > 1/(2k)` from truncated k-free Dirichlet
//! sums, and the estimators of `1/ζ(k)` and `ζ(1/k)` built on them.
//!
//! Values are plain `f64`/[`Complex64`]; convergence at this depth is far
//! slower than double precision.

use std::io::Write;

use num_complex::Complex64;

use crate::counting::Census;
use crate::limits::log_grid;
use crate::sum::CompensatedSum;
use crate::zetacore;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Partial sum minus the growing main term.
    Basic,
    /// Also subtracts the boundary remainder `f_k(x)/x^s`.
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationEstimate {
    pub s: Complex64,
    pub k: u32,
    pub x: u64,
    pub value: Complex64,
    pub order: Order,
}

fn check_s(k: u32, s: Complex64) -> Result<()> {
    if !(s.re > 0.5 / k as f64) {
        return Err(Error::Domain(format!("Re(s) = {} is not above 1/(2k) = {}", s.re, 0.5 / k as f64)));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("s = 1".into()));
    }
    Ok(())
}

#[derive(Default)]
struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `n^{-s}`.
#[inline]
fn npow(n: u64, s: Complex64) -> Complex64 {
    (-s * (n as f64).ln()).exp()
}

/// `Σ_{n≤x} μ^(k)(n) n^{-s}` minus `x^{1−s}/(ζ(k)(1−s))`, and for
/// [`Order::Corrected`] minus `f_k(x)/x^s` as well.
pub fn continued_value(census: &Census, s: Complex64, x: u64, order: Order) -> Result<ContinuationEstimate> {
    let k = census.k();
    check_s(k, s)?;
    if x < 10 {
        return Err(Error::InvalidArgument(format!("x = {x} is below 10")));
    }
    census.require(x)?;
    let mut sum = ComplexSum::default();
    for n in census.block().iter_ones().take_while(|&n| n <= x) {
        sum.add(npow(n, s));
    }
    let iz = census.inv_zeta();
    let one_minus_s = Complex64::new(1.0, 0.0) - s;
    let xs = npow(x, s);
    let mut value = sum.value() - xs * x as f64 * iz / one_minus_s;
    if order == Order::Corrected {
        let f = census.q_at(x) as f64 - x as f64 * iz;
        value -= xs * f;
    }
    Ok(ContinuationEstimate { s, k, x, value, order })
}

/// `exp(z) − 1` without cancellation near 0.
pub fn expm1(z: Complex64) -> Complex64 {
    let em = z.re.exp_m1();
    let half = (0.5 * z.im).sin();
    Complex64::new(em * z.im.cos() - 2.0 * half * half, z.re.exp() * z.im.sin())
}

/// `1/(ζ(k)(s−1)) + 1/ζ(k) + s ∫_{1⁻}^{xmax} t^{−s−1} f_k(t) dt`, the integral
/// taken exactly on each unit interval where `f_k` is affine.
pub fn integral_continuation(census: &Census, s: Complex64, xmax: u64) -> Result<Complex64> {
    let k = census.k();
    check_s(k, s)?;
    if xmax < 2 {
        return Err(Error::InvalidArgument("xmax must be at least 2".into()));
    }
    census.require(xmax)?;
    let iz = census.inv_zeta();
    let one = Complex64::new(1.0, 0.0);
    let one_minus_s = one - s;
    let mut acc = ComplexSum::default();
    let mut q = 0u64;
    for m in 1..xmax {
        q += census.is_kfree(m) as u64;
        let d = (1.0 / m as f64).ln_1p();
        let ms = npow(m, s);
        // s ∫_m^{m+1} t^{−s−1} dt and s ∫_m^{m+1} t^{−s} dt
        let sa = -ms * expm1(-s * d);
        let sb = s * ms * m as f64 * expm1(one_minus_s * d) / one_minus_s;
        acc.add(sa * q as f64 - sb * iz);
    }
    Ok(iz / (s - one) + iz + acc.value())
}

/// `(1 − 1/k) x^{−(1−1/k)} Σ_{n≤x} μ^(k)(n) n^{−1/k}`, tending to `1/ζ(k)`.
pub fn zeta_reciprocal_limit(census: &Census, x: u64) -> Result<f64> {
    if x < 100 {
        return Err(Error::InvalidArgument(format!("x = {x} is below 100")));
    }
    census.require(x)?;
    let a = 1.0 - 1.0 / census.k() as f64;
    let mut acc = InvKAccumulator::new(census)?;
    acc.advance_to(x);
    Ok(a * (x as f64).powf(-a) * acc.s0.value())
}

/// Two estimators of `ζ(1/k)` obtained by differentiating at `s = 1/k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvKForm {
    /// `−(1/k) Σ μ^(k)(n) log n / n^{1/k} − x^{1−1/k}(k/(k−1) − log x)/(ζ(k)(k−1))`.
    Derivative,
    /// `−(1/k) Σ μ^(k)(n)(log n + k/(k−1))/n^{1/k} + x^{1−1/k} log x/(ζ(k)(k−1))`.
    Shifted,
}

/// Running sums `Σ μ^(k)(n)/n^{1/k}` and `Σ μ^(k)(n) log n/n^{1/k}`.
pub struct InvKAccumulator<'a> {
    census: &'a Census,
    n: u64,
    s0: CompensatedSum,
    s1: CompensatedSum,
}

impl<'a> InvKAccumulator<'a> {
    pub fn new(census: &'a Census) -> Result<Self> {
        if census.k() < 2 {
            return Err(Error::InvalidArgument("k must be at least 2".into()));
        }
        Ok(Self { census, n: 0, s0: CompensatedSum::new(), s1: CompensatedSum::new() })
    }

    /// Adds terms up to and including `x` (which must not be behind).
    pub fn advance_to(&mut self, x: u64) {
        let inv_k = 1.0 / self.census.k() as f64;
        while self.n < x {
            self.n += 1;
            if self.census.is_kfree(self.n) {
                let l = (self.n as f64).ln();
                let t = (-inv_k * l).exp();
                self.s0.add(t);
                self.s1.add(t * l);
            }
        }
    }

    pub fn estimate(&self, form: InvKForm) -> f64 {
        let k = self.census.k() as f64;
        let x = self.n as f64;
        let l = x.ln();
        let km1 = k - 1.0;
        let grow = x.powf(1.0 - 1.0 / k) * self.census.inv_zeta() / km1;
        match form {
            InvKForm::Derivative => -self.s1.value() / k - grow * (k / km1 - l),
            InvKForm::Shifted => -(self.s1.value() + k / km1 * self.s0.value()) / k + grow * l,
        }
    }
}

pub fn zeta_inv_k(census: &Census, x: u64, form: InvKForm) -> Result<f64> {
    if x < 100 {
        return Err(Error::InvalidArgument(format!("x = {x} is below 100")));
    }
    census.require(x)?;
    let mut acc = InvKAccumulator::new(census)?;
    acc.advance_to(x);
    Ok(acc.estimate(form))
}

/// `ζ(1/k)` from the Euler–Maclaurin evaluator.
pub fn zeta_inv_k_reference(k: u32) -> Result<f64> {
    Ok(zetacore::zeta_real(1.0 / k as f64, 20)?.to_f64())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stride {
    Every,
    /// About this many points per decade.
    Log(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRow {
    pub x: u64,
    pub estimate: f64,
    pub reference: f64,
    pub deviation: f64,
}

/// The [`InvKForm::Shifted`] estimator against `ζ(1/k)` along `x`.
pub fn figure_series(census: &Census, xmax: u64, stride: Stride) -> Result<Vec<FigureRow>> {
    census.require(xmax)?;
    let reference = zeta_inv_k_reference(census.k())?;
    let xs: Vec<u64> = match stride {
        Stride::Every => (1..=xmax).collect(),
        Stride::Log(per_decade) => log_grid(1, xmax, per_decade),
    };
    let mut acc = InvKAccumulator::new(census)?;
    Ok(xs
        .into_iter()
        .map(|x| {
            acc.advance_to(x);
            let estimate = acc.estimate(InvKForm::Shifted);
            FigureRow { x, estimate, reference, deviation: estimate - reference }
        })
        .collect())
}

/// `fig1.csv` for `k = 2` up to `fig4.csv` for `k = 5`.
pub fn figure_file_name(k: u32) -> String {
    format!("fig{}.csv", k.saturating_sub(1))
}

pub fn write_figure_csv<W: Write>(rows: &[FigureRow], out: &mut W) -> Result<()> {
    writeln!(out, "x,estimate,reference,deviation")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.x, r.estimate, r.reference, r.deviation)?;
    }
    Ok(())
}

/// Mean deviation over rows with `x` in the last `fraction` of the range.
pub fn trailing_window_mean(rows: &[FigureRow], fraction: f64) -> f64 {
    let Some(last) = rows.last() else { return f64::NAN };
    let from = last.x as f64 * (1.0 - fraction);
    let tail: CompensatedSum = rows.iter().filter(|r| r.x as f64 > from).map(|r| r.deviation).collect();
    let n = rows.iter().filter(|r| r.x as f64 > from).count();
    tail.value() / n as f64
}

/// Sign changes of the deviation among rows with `lo ≤ x ≤ hi`.
pub fn sign_changes(rows: &[FigureRow], lo: u64, hi: u64) -> usize {
    let mut prev: Option<bool> = None;
    let mut changes = 0;
    for r in rows.iter().filter(|r| r.x >= lo && r.x <= hi && r.deviation != 0.0) {
        let neg = r.deviation < 0.0;
        if prev.is_some_and(|p| p != neg) {
            changes += 1;
        }
        prev = Some(neg);
    }
    changes
}
