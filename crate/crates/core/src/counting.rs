//! The k-free counting function `Q_k(x)` and remainder
//! `f_k(x) = Q_k(x) − x/ζ(k)`.

use std::io::Write;
use std::path::Path;

use crate::sieve::{self, cache, IndicatorBlock, SieveConfig};
use crate::sum::Dd;
use crate::zetacore;
use crate::{Error, Result};

/// Sieved k-free indicator on `[1, xmax]` together with `1/ζ(k)`.
///
/// Every sum-side estimator reads from one of these, so all of them share the
/// same `1/ζ(k)`.
#[derive(Debug, Clone)]
pub struct Census {
    block: IndicatorBlock,
    inv_zeta: Dd,
}

impl Census {
    pub fn new(k: u32, xmax: u64) -> Result<Self> {
        Self::with_config(k, xmax, &SieveConfig::default(), None)
    }

    /// Sieves `[1, xmax]`, going through the block cache when `cache_dir` is set.
    pub fn with_config(
        k: u32,
        xmax: u64,
        config: &SieveConfig,
        cache_dir: Option<&Path>,
    ) -> Result<Self> {
        let block = match cache_dir {
            Some(dir) => cache::load_or_sieve(k, 1, xmax, config, dir)?,
            None => sieve::sieve_kfree_with(k, 1, xmax, config)?,
        };
        Self::from_block(block)
    }

    pub fn from_block(block: IndicatorBlock) -> Result<Self> {
        if block.start() != 1 {
            return Err(Error::InvalidArgument(format!(
                "census blocks start at 1, got {}",
                block.start()
            )));
        }
        let inv_zeta = inv_zeta_dd(block.k())?;
        Ok(Self { block, inv_zeta })
    }

    pub fn k(&self) -> u32 {
        self.block.k()
    }

    pub fn xmax(&self) -> u64 {
        self.block.last()
    }

    pub fn block(&self) -> &IndicatorBlock {
        &self.block
    }

    /// `1/ζ(k)` rounded to a double.
    pub fn inv_zeta(&self) -> f64 {
        self.inv_zeta.to_f64()
    }

    pub fn inv_zeta_dd(&self) -> Dd {
        self.inv_zeta
    }

    #[inline]
    pub fn is_kfree(&self, n: u64) -> bool {
        self.block.get(n)
    }

    /// `Q_k(n)` for integer `n`, right-continuous.
    pub fn q_at(&self, n: u64) -> u64 {
        if n == 0 {
            0
        } else {
            self.block.count_through(n)
        }
    }

    pub fn require(&self, x: u64) -> Result<()> {
        if x > self.xmax() {
            return Err(Error::Range(format!(
                "sieve covers [1, {}], {x} requested",
                self.xmax()
            )));
        }
        Ok(())
    }
}

/// `1/ζ(k)` as a double-double from a 40-digit evaluation.
pub fn inv_zeta_dd(k: u32) -> Result<Dd> {
    let z = zetacore::zeta_at_integer(k, 40)?;
    let inv = rug::Float::with_val(z.value().prec(), z.value().recip_ref());
    let hi = inv.to_f64();
    let lo = (inv - hi).to_f64();
    Ok(Dd::from_sum(hi, lo))
}

/// Which side of a unit step is reported at an integer abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `Σ_{n<x}`.
    Left,
    /// `Σ_{n≤x}`.
    Right,
    /// Mean of the two sides, the midpoint of the step.
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingCheckpoint {
    pub x: f64,
    pub q: f64,
    /// `q − x/ζ(k)` carried as a double-double.
    pub f: Dd,
}

impl CountingCheckpoint {
    pub fn f64_f(&self) -> f64 {
        self.f.to_f64()
    }
}

/// `Q_k(x)` and `f_k(x)` at real `x ≥ 0`. For `x = 1` with
/// [`Convention::Left`] this is the state just before the first step,
/// `q = 0`, `f = −1/ζ(k)`.
pub fn count_q(census: &Census, x: f64, convention: Convention) -> Result<CountingCheckpoint> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("x = {x} must be finite and >= 0")));
    }
    census.require(x.ceil() as u64)?;
    let n = x.floor() as u64;
    let right = census.q_at(n) as f64;
    let q = if x == x.floor() && n >= 1 {
        let step = census.is_kfree(n) as u8 as f64;
        match convention {
            Convention::Right => right,
            Convention::Left => right - step,
            Convention::Average => right - step / 2.0,
        }
    } else {
        right
    };
    let f = Dd::from(q) - census.inv_zeta_dd().mul_f64(x);
    Ok(CountingCheckpoint { x, q, f })
}

/// Right-continuous checkpoints at `x = 1, 2, …, xmax`, with `f`
/// accumulated step by step in double-double arithmetic.
pub struct CheckpointStream<'a> {
    census: &'a Census,
    next: u64,
    xmax: u64,
    q: u64,
    f: Dd,
}

impl<'a> CheckpointStream<'a> {
    /// The state at `x = 1⁻`.
    pub fn initial(&self) -> CountingCheckpoint {
        CountingCheckpoint {
            x: 1.0,
            q: 0.0,
            f: -self.census.inv_zeta_dd(),
        }
    }
}

impl Iterator for CheckpointStream<'_> {
    type Item = CountingCheckpoint;

    #[inline]
    fn next(&mut self) -> Option<CountingCheckpoint> {
        if self.next > self.xmax {
            return None;
        }
        let n = self.next;
        if self.census.is_kfree(n) {
            self.q += 1;
            self.f = self.f + Dd::from(1.0);
        }
        // the linear part falls by 1/ζ(k) per unit of x; at x = 1 the stream
        // starts from f(1⁻) after the zero-length interval
        if n > 1 {
            self.f = self.f - self.census.inv_zeta_dd();
        }
        self.next += 1;
        Some(CountingCheckpoint {
            x: n as f64,
            q: self.q as f64,
            f: self.f,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.xmax + 1 - self.next) as usize;
        (left, Some(left))
    }
}

pub fn checkpoint_stream(census: &Census, xmax: u64) -> Result<CheckpointStream<'_>> {
    if xmax < 1 {
        return Err(Error::InvalidArgument("xmax must be at least 1".into()));
    }
    census.require(xmax)?;
    Ok(CheckpointStream {
        census,
        next: 1,
        xmax,
        q: 0,
        f: -census.inv_zeta_dd(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderScan {
    /// `sup |f_k(x)| / x^(1/k)` over `[2, xmax]`.
    pub c_obs: f64,
    /// Least-squares slope of `log |f_k|` against `log x` at the decade peaks.
    pub exponent_fit: f64,
    /// `(x, |f_k(x)|)` at the largest `|f_k|` of each full decade from 10 on.
    pub peaks: Vec<(f64, f64)>,
}

/// Scans both one-sided limits of `f_k` at every integer of `[2, xmax]`.
pub fn remainder_bound_scan(census: &Census, xmax: u64) -> Result<RemainderScan> {
    if xmax < 10_000 {
        return Err(Error::InvalidArgument(format!("xmax = {xmax} is below 10^4")));
    }
    let inv_k = 1.0 / census.k() as f64;
    let mut c_obs = 0.0f64;
    let mut decade_end = 100u64;
    let mut peak = (0.0f64, 0.0f64);
    let mut peaks = Vec::new();
    for cp in checkpoint_stream(census, xmax)?.skip(1) {
        let n = cp.x as u64;
        let right = cp.f.to_f64().abs();
        let left = (cp.f - Dd::from(census.is_kfree(n) as u8 as f64)).to_f64().abs();
        let worst = right.max(left);
        c_obs = c_obs.max(worst / cp.x.powf(inv_k));
        if n >= 10 {
            if n == decade_end {
                peaks.push(peak);
                peak = (0.0, 0.0);
                if decade_end > xmax / 10 {
                    break;
                }
                decade_end *= 10;
            }
            if worst > peak.1 {
                peak = (cp.x, worst);
            }
        }
    }
    let exponent_fit = loglog_slope(&peaks);
    Ok(RemainderScan { c_obs, exponent_fit, peaks })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// CSV `x,q,f` every `stride` integers up to `xmax` (and at `xmax`).
pub fn write_checkpoints_csv<W: Write>(
    census: &Census,
    xmax: u64,
    stride: u64,
    out: &mut W,
) -> Result<()> {
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be positive".into()));
    }
    writeln!(out, "x,q,f")?;
    for cp in checkpoint_stream(census, xmax)? {
        let n = cp.x as u64;
        if n % stride == 0 || n == xmax {
            writeln!(out, "{},{},{}", n, cp.q, cp.f.to_f64())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn census(k: u32, xmax: u64) -> Census {
        Census::new(k, xmax).unwrap()
    }

    #[test]
    fn conventions_at_and_between_steps() {
        let c = census(2, 100);
        for conv in [Convention::Left, Convention::Right, Convention::Average] {
            assert_eq!(count_q(&c, 10.5, conv).unwrap().q, 7.0);
        }
        assert_eq!(count_q(&c, 10.0, Convention::Average).unwrap().q, 6.5);
        assert_eq!(count_q(&c, 10.0, Convention::Right).unwrap().q, 7.0);
        assert_eq!(count_q(&c, 10.0, Convention::Left).unwrap().q, 6.0);
        // non k-free integer: no step
        assert_eq!(count_q(&c, 12.0, Convention::Average).unwrap().q, 8.0);
        assert_eq!(count_q(&c, 0.5, Convention::Right).unwrap().q, 0.0);
    }

    #[test]
    fn just_below_one() {
        let c = census(2, 100);
        let cp = count_q(&c, 1.0, Convention::Left).unwrap();
        assert_eq!(cp.q, 0.0);
        let six_over_pi2 = 6.0 / std::f64::consts::PI.powi(2);
        assert!((cp.f.to_f64() + six_over_pi2).abs() < 1e-16);
        let s = checkpoint_stream(&c, 3).unwrap();
        assert_eq!(s.initial().f, cp.f);
    }

    #[test]
    fn stream_values() {
        let c = census(2, 1_000_000);
        let q: Vec<f64> = checkpoint_stream(&c, 3).unwrap().map(|cp| cp.q).collect();
        assert_eq!(q, [1.0, 2.0, 3.0]);
        let c3 = census(3, 100);
        assert_eq!(checkpoint_stream(&c3, 8).unwrap().last().unwrap().q, 7.0);
        let last = checkpoint_stream(&c, 1_000_000).unwrap().last().unwrap();
        assert!((last.q / 1e6 - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-3);
    }

    #[test]
    fn stream_agrees_with_direct_count() {
        let c = census(3, 50_000);
        for cp in checkpoint_stream(&c, 50_000).unwrap().step_by(997) {
            let direct = count_q(&c, cp.x, Convention::Right).unwrap();
            assert_eq!(cp.q, direct.q);
            assert!((cp.f - direct.f).to_f64().abs() < 1e-20);
        }
    }

    #[test]
    fn stream_increments_and_order_in_k() {
        let c2 = census(2, 100_000);
        let c3 = census(3, 100_000);
        let mut prev = 0.0;
        for (a, b) in checkpoint_stream(&c2, 100_000).unwrap().zip(checkpoint_stream(&c3, 100_000).unwrap()) {
            let step = a.q - prev;
            assert!(step == 0.0 || step == 1.0);
            assert_eq!(step == 1.0, c2.is_kfree(a.x as u64));
            assert!(b.q >= a.q);
            prev = a.q;
        }
    }

    #[test]
    fn remainder_scan_small() {
        let c = census(5, 100_000);
        let scan = remainder_bound_scan(&c, 100_000).unwrap();
        assert!(scan.c_obs.is_finite() && scan.c_obs < 2.0, "{scan:?}");
        assert_eq!(scan.peaks.len(), 4);
        assert!(remainder_bound_scan(&c, 9_999).is_err());
    }

    #[test]
    fn range_errors() {
        let c = census(2, 100);
        assert!(matches!(count_q(&c, 100.5, Convention::Right), Err(Error::Range(_))));
        assert!(matches!(checkpoint_stream(&c, 101), Err(Error::Range(_))));
        assert!(count_q(&c, -1.0, Convention::Right).is_err());
    }

    #[test]
    fn csv_has_header_and_stride() {
        let c = census(2, 1000);
        let mut buf = Vec::new();
        write_checkpoints_csv(&c, 1000, 250, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,q,f");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("1000,608,"));
    }
}
