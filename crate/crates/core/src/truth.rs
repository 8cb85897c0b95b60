//! Exact rational truth values in the unit interval.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

/// Errors raised when building a [`Truth`] from raw parts or text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("truth value outside [0,1]")]
    OutOfRange,
    #[error("malformed truth literal `{0}`")]
    Malformed(String),
    #[error("truth literal `{0}` is too large to represent exactly")]
    Overflow(String),
}

/// A rational number in `[0, 1]`, always stored in lowest terms.
///
/// Zero is `0/1` and one is `1/1`. Because the representation is canonical,
/// the derived `Eq`/`Hash` agree with numeric equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Truth {
    num: u64,
    den: u64,
}

impl Truth {
    pub const ZERO: Truth = Truth { num: 0, den: 1 };
    pub const ONE: Truth = Truth { num: 1, den: 1 };

    /// Builds `num/den`, reducing it. Fails on a zero denominator or a value above one.
    pub fn new(num: u64, den: u64) -> Result<Truth, TruthError> {
        Self::from_wide(num as u128, den as u128)
    }

    /// Like [`Truth::new`] but panics on invalid input; meant for literals in code.
    pub fn ratio(num: u64, den: u64) -> Truth {
        Self::new(num, den).expect("invalid truth literal")
    }

    /// Compile-time variant of [`Truth::ratio`].
    pub const fn ratio_const(num: u64, den: u64) -> Truth {
        assert!(den > 0 && num <= den, "invalid truth literal");
        if num == 0 {
            return Truth::ZERO;
        }
        let (mut x, mut y) = (num, den);
        while y != 0 {
            let r = x % y;
            x = y;
            y = r;
        }
        Truth {
            num: num / x,
            den: den / x,
        }
    }

    fn from_wide(num: u128, den: u128) -> Result<Truth, TruthError> {
        if den == 0 {
            return Err(TruthError::ZeroDenominator);
        }
        if num > den {
            return Err(TruthError::OutOfRange);
        }
        if num == 0 {
            return Ok(Truth::ZERO);
        }
        let g = num.gcd(&den);
        let (n, d) = (num / g, den / g);
        match (u64::try_from(n), u64::try_from(d)) {
            (Ok(num), Ok(den)) => Ok(Truth { num, den }),
            _ => Err(TruthError::Overflow(format!("{n}/{d}"))),
        }
    }

    // Results of the lattice/arithmetic operations always lie in [0,1] and have a
    // denominator dividing the lcm of the inputs, so reduction cannot overflow.
    fn wide(num: u128, den: u128) -> Truth {
        Self::from_wide(num, den).expect("truth arithmetic left [0,1]")
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    pub fn min(self, other: Truth) -> Truth {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Truth) -> Truth {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// `1 - self`.
    pub fn complement(self) -> Truth {
        Truth {
            num: self.den - self.num,
            den: self.den,
        }
    }

    /// Truncated subtraction `max(self - other, 0)`.
    pub fn truncated_sub(self, other: Truth) -> Truth {
        if self <= other {
            return Truth::ZERO;
        }
        let (a, b, l) = self.common(other);
        Self::wide(a - b, l)
    }

    /// `|self - other|`.
    pub fn abs_diff(self, other: Truth) -> Truth {
        if self >= other {
            self.truncated_sub(other)
        } else {
            other.truncated_sub(self)
        }
    }

    /// `min(self + other, 1)`.
    pub fn saturating_add(self, other: Truth) -> Truth {
        let (a, b, l) = self.common(other);
        if a + b >= l {
            Truth::ONE
        } else {
            Self::wide(a + b, l)
        }
    }

    /// `self / k` for a positive integer `k`.
    pub fn div_int(self, k: u64) -> Truth {
        assert!(k > 0, "division by zero");
        Self::wide(self.num as u128, self.den as u128 * k as u128)
    }

    /// Numerators of both values over their least common denominator.
    fn common(self, other: Truth) -> (u128, u128, u128) {
        let l = (self.den as u128).lcm(&(other.den as u128));
        (
            self.num as u128 * (l / self.den as u128),
            other.num as u128 * (l / other.den as u128),
            l,
        )
    }

    /// Renders the value as a decimal: exact when the expansion terminates,
    /// otherwise rounded to six places and prefixed with `~`.
    pub fn to_decimal(self) -> String {
        let mut d = self.den;
        while d % 2 == 0 {
            d /= 2;
        }
        while d % 5 == 0 {
            d /= 5;
        }
        let terminating = d == 1;
        let int = self.num / self.den;
        let mut rem = (self.num % self.den) as u128;
        let den = self.den as u128;
        if rem == 0 {
            return int.to_string();
        }
        let mut digits = String::new();
        let limit = if terminating { usize::MAX } else { 7 };
        while rem != 0 && digits.len() < limit {
            rem *= 10;
            digits.push(char::from(b'0' + (rem / den) as u8));
            rem %= den;
        }
        if terminating {
            return format!("{int}.{digits}");
        }
        // round the seventh digit away
        let mut scaled: u64 = digits[..6].parse().unwrap();
        if digits.as_bytes()[6] >= b'5' {
            scaled += 1;
        }
        if scaled >= 1_000_000 {
            return format!("~{}", int + 1);
        }
        let s = format!("{scaled:06}");
        format!("~{int}.{}", s.trim_end_matches('0'))
    }

    /// Approximate value as `f64`, for display and heuristics only.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for Truth {
    fn default() -> Self {
        Truth::ZERO
    }
}

impl PartialOrd for Truth {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Truth {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Truth {
    type Err = TruthError;

    /// Accepts `p/q`, a plain integer, or a finite decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Truth, TruthError> {
        let malformed = || TruthError::Malformed(s.to_string());
        let overflow = || TruthError::Overflow(s.to_string());
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if let Some((n, d)) = s.split_once('/') {
            if !digits(n) || !digits(d) {
                return Err(malformed());
            }
            let n: u128 = n.parse().map_err(|_| overflow())?;
            let d: u128 = d.parse().map_err(|_| overflow())?;
            return Truth::from_wide(n, d);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if !digits(int) || !digits(frac) {
                return Err(malformed());
            }
            if frac.len() > 30 {
                return Err(overflow());
            }
            let scale = 10u128.pow(frac.len() as u32);
            let i: u128 = int.parse().map_err(|_| overflow())?;
            let f: u128 = frac.parse().map_err(|_| overflow())?;
            let num = i
                .checked_mul(scale)
                .and_then(|x| x.checked_add(f))
                .ok_or_else(overflow)?;
            return Truth::from_wide(num, scale);
        }
        if !digits(s) {
            return Err(malformed());
        }
        let n: u128 = s.parse().map_err(|_| overflow())?;
        Truth::from_wide(n, 1)
    }
}

/// Least common multiple of the denominators of `values` (1 for an empty input).
pub fn common_denominator<I: IntoIterator<Item = Truth>>(values: I) -> u64 {
    values.into_iter().fold(1u64, |acc, t| acc.lcm(&t.denom()))
}
