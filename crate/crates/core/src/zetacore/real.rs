use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::{AssignRound, PowAssign};
use rug::{Float, Integer};

/// Bits carried beyond the requested decimal digits.
pub const GUARD_BITS: u32 = 64;

/// Working precision in bits for `digits` decimal digits plus guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// Extended-precision real with an explicit decimal-digit contract.
///
/// Backed by an MPFR float rounded to nearest (ties to even) at
/// [`bits_for_digits`]`(digits)` bits.
#[derive(Clone, Debug, PartialEq)]
pub struct RealX {
    value: Float,
    digits: u32,
}

impl RealX {
    pub fn new(value: Float, digits: u32) -> Self {
        let mut v = Float::new(bits_for_digits(digits));
        v.assign_round(&value, Round::Nearest);
        Self { value: v, digits }
    }

    pub fn from_f64(x: f64, digits: u32) -> Self {
        Self {
            value: Float::with_val(bits_for_digits(digits), x),
            digits,
        }
    }

    /// Parses a decimal literal such as `"-0.2361528864771229748605"`.
    pub fn parse(text: &str, digits: u32) -> Option<Self> {
        let parsed = Float::parse(text).ok()?;
        Some(Self {
            value: Float::with_val(bits_for_digits(digits), parsed),
            digits,
        })
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn into_float(self) -> Float {
        self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn abs(&self) -> RealX {
        Self {
            value: self.value.clone().abs(),
            digits: self.digits,
        }
    }

    pub fn is_sign_negative(&self) -> bool {
        self.value.is_sign_negative()
    }

    /// Fixed-point decimal rounded to nearest at `decimals` places.
    pub fn to_fixed(&self, decimals: usize) -> String {
        to_fixed(&self.value, decimals, Round::Nearest)
    }

    /// Fixed-point decimal cut (not rounded) after `decimals` places.
    pub fn to_fixed_truncated(&self, decimals: usize) -> String {
        to_fixed(&self.value, decimals, Round::Zero)
    }

    /// Fixed-point text of exactly `width` characters besides the sign, the
    /// decimals shrinking as the integer part grows.
    pub fn to_width(&self, width: usize, round: Round) -> String {
        let whole = self.value.clone().abs().trunc();
        let int_digits = match whole.to_integer() {
            Some(i) if i > 0 => i.to_string().len(),
            _ => 1,
        };
        to_fixed(&self.value, width.saturating_sub(int_digits + 1), round)
    }

    /// Scientific notation with `significant` digits, e.g. `1.6449e0`.
    pub fn to_sci(&self, significant: usize) -> String {
        self.value.to_string_radix(10, Some(significant))
    }

    /// Number of leading significant decimal digits on which `self` and
    /// `reference` agree, `-log10(|self - reference| / |reference|)`.
    pub fn agreement_digits(&self, reference: &RealX) -> f64 {
        let prec = self.value.prec().max(reference.value.prec());
        let diff = Float::with_val(prec, &self.value - &reference.value).abs();
        if diff.is_zero() {
            return f64::INFINITY;
        }
        let rel = if reference.value.is_zero() {
            diff
        } else {
            diff / reference.value.clone().abs()
        };
        -rel.log10().to_f64()
    }

    pub fn with_digits(&self, digits: u32) -> RealX {
        RealX::new(self.value.clone(), digits)
    }
}

/// Prints `x` with `decimals` places and no exponent, rounding the last
/// place as `round` says.
pub fn to_fixed(x: &Float, decimals: usize, round: Round) -> String {
    let prec = x.prec() + 8 + (decimals as f64 * std::f64::consts::LOG2_10) as u32;
    let mut scale = Float::with_val(prec, 10);
    scale.pow_assign(decimals as u32);
    let scaled = Float::with_val(prec, x * &scale);
    let (int, _) = scaled
        .to_integer_round(round)
        .unwrap_or((Integer::new(), Ordering::Equal));
    let negative = int < 0;
    let mut digits = int.abs().to_string();
    if digits.len() <= decimals {
        digits = format!("{}{digits}", "0".repeat(decimals + 1 - digits.len()));
    }
    let (whole, frac) = digits.split_at(digits.len() - decimals);
    let sign = if negative { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

impl fmt::Display for RealX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(self.digits as usize))
    }
}

impl PartialOrd for RealX {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&RealX> for &RealX {
            type Output = RealX;
            fn $method(self, rhs: &RealX) -> RealX {
                let digits = self.digits.min(rhs.digits);
                RealX {
                    value: Float::with_val(bits_for_digits(digits), (&self.value).$method(&rhs.value)),
                    digits,
                }
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for &RealX {
    type Output = RealX;
    fn neg(self) -> RealX {
        RealX {
            value: -self.value.clone(),
            digits: self.digits,
        }
    }
}

/// Extended-precision complex number; both parts share one precision.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexX {
    pub re: Float,
    pub im: Float,
}

impl ComplexX {
    pub fn new(re: Float, im: Float) -> Self {
        assert_eq!(re.prec(), im.prec(), "real and imaginary precision differ");
        Self { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn with_digits(digits: u32, re: f64, im: f64) -> Self {
        Self::from_f64(bits_for_digits(digits), re, im)
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 0.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// Rounds both parts to `prec` bits.
    pub fn set_prec(mut self, prec: u32) -> Self {
        self.re.set_prec(prec);
        self.im.set_prec(prec);
        self
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn scale(&self, x: &Float) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re * x),
            im: Float::with_val(p, &self.im * x),
        }
    }

    pub fn add_real(&self, x: &Float) -> Self {
        Self {
            re: Float::with_val(self.prec(), &self.re + x),
            im: self.im.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let d = Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref());
        Self {
            re: Float::with_val(p, &self.re / &d),
            im: Float::with_val(p, -(&self.im / d)),
        }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Self {
            re: c * &m,
            im: s * m,
        }
    }

    /// `exp(-self · ln_base)`, i.e. `base^(-self)` given `ln(base)`.
    pub fn neg_power_of(&self, ln_base: &Float) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, &self.re * ln_base);
        let m = (-m).exp();
        let angle = Float::with_val(p, &self.im * ln_base);
        let (s, c) = angle.sin_cos(Float::new(p));
        Self {
            re: c * &m,
            im: -(s * m),
        }
    }
}

impl Add<&ComplexX> for &ComplexX {
    type Output = ComplexX;
    fn add(self, o: &ComplexX) -> ComplexX {
        let p = self.prec();
        ComplexX {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }
}

impl Sub<&ComplexX> for &ComplexX {
    type Output = ComplexX;
    fn sub(self, o: &ComplexX) -> ComplexX {
        let p = self.prec();
        ComplexX {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }
}

impl Mul<&ComplexX> for &ComplexX {
    type Output = ComplexX;
    fn mul(self, o: &ComplexX) -> ComplexX {
        let p = self.prec();
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        ComplexX {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl Div<&ComplexX> for &ComplexX {
    type Output = ComplexX;
    fn div(self, o: &ComplexX) -> ComplexX {
        self * &o.recip()
    }
}

impl Neg for &ComplexX {
    type Output = ComplexX;
    fn neg(self) -> ComplexX {
        ComplexX {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl fmt::Display for ComplexX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec().saturating_sub(GUARD_BITS)) as f64 / std::f64::consts::LOG2_10)
            .floor()
            .max(1.0) as usize;
        let re = self.re.to_string_radix(10, Some(digits));
        if self.im.is_zero() {
            return f.write_str(&re);
        }
        let im = self.im.to_string_radix(10, Some(digits));
        if self.im.is_sign_negative() {
            write!(f, "{re}{im}i")
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}
