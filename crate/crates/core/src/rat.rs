//! Exact rational numbers used for probabilities and transition weights.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// An exact rational, always kept in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(Ratio<i128>);

impl Rat {
    pub const ZERO: Rat = Rat(Ratio::new_raw(0, 1));
    pub const ONE: Rat = Rat(Ratio::new_raw(1, 1));

    /// Panics if `den` is zero.
    pub fn new(num: i128, den: i128) -> Rat {
        Rat(Ratio::new(num, den))
    }

    pub fn from_int(n: i128) -> Rat {
        Rat(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn min(self, other: Rat) -> Rat {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl From<u64> for Rat {
    fn from(n: u64) -> Rat {
        Rat::from_int(n as i128)
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        Rat(self.0 + rhs.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        Rat(self.0 - rhs.0)
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        Rat(self.0 * rhs.0)
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Zero for Rat {
    fn zero() -> Rat {
        Rat::ZERO
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rat {
    fn one() -> Rat {
        Rat::ONE
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |acc, x| acc + *x)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRatError {
    #[error("decimals not accepted; write {0}")]
    Decimal(String),
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Accepts `num/den` or a bare integer. Decimal literals are rejected with a
/// hint giving the equivalent fraction when one is easy to compute.
impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let s = s.trim();
        if s.contains('.') {
            return Err(ParseRatError::Decimal(decimal_hint(s)));
        }
        let parse_int = |t: &str| -> Result<i128, ParseRatError> {
            if t.is_empty() || !t.trim_start_matches(['-', '+']).chars().all(|c| c.is_ascii_digit()) {
                return Err(ParseRatError::Malformed(s.to_string()));
            }
            t.parse::<i128>().map_err(|_| ParseRatError::Malformed(s.to_string()))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let n = parse_int(n)?;
                let d = parse_int(d)?;
                if d == 0 {
                    return Err(ParseRatError::ZeroDenominator(s.to_string()));
                }
                Ok(Rat::new(n, d))
            }
            None => Ok(Rat::from_int(parse_int(s)?)),
        }
    }
}

fn decimal_hint(s: &str) -> String {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = frac.len() as u32;
    if digits == 0 || digits > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return "num/den".to_string();
    }
    let neg = int.starts_with('-');
    let int_part: i128 = match int.trim_start_matches(['-', '+']) {
        "" => 0,
        t => match t.parse() {
            Ok(v) => v,
            Err(_) => return "num/den".to_string(),
        },
    };
    let frac_part: i128 = frac.parse().unwrap_or(0);
    let den = 10i128.pow(digits);
    let mut r = Rat::new(int_part * den + frac_part, den);
    if neg {
        r = -r;
    }
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!("1/2".parse::<Rat>().unwrap(), Rat::new(1, 2));
        assert_eq!("2/4".parse::<Rat>().unwrap(), Rat::new(1, 2));
        assert_eq!("1".parse::<Rat>().unwrap(), Rat::ONE);
        assert_eq!(Rat::new(2, 4).to_string(), "1/2");
        assert_eq!(Rat::new(-3, -6).denom(), 2);
    }

    #[test]
    fn rejects_decimals_with_hint() {
        let err = "0.5".parse::<Rat>().unwrap_err();
        assert_eq!(err.to_string(), "decimals not accepted; write 1/2");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("a/2".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
    }

    proptest! {
        #[test]
        fn sums_are_exact(a in -1000i128..=1000, b in 1i128..=1000, c in -1000i128..=1000, d in 1i128..=1000) {
            let sum = Rat::new(a, b) + Rat::new(c, d);
            let expected = Rat::new(a * d + c * b, b * d);
            prop_assert_eq!(sum, expected);
            let g = num_integer::gcd(sum.numer(), sum.denom());
            prop_assert_eq!(g.abs(), 1);
            prop_assert!(sum.denom() > 0);
        }
    }
}
