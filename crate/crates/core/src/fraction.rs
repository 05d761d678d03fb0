use std::fmt;
use std::str::FromStr;

/// Exact non-negative rational, used for every threshold (support,
/// confidence, ubiquitousness) so that boundary cases never depend on
/// float rounding. Comparisons cross-multiply in `u128` and cannot
/// overflow for any pair of `u64`-backed fractions.
#[derive(Clone, Copy, Debug)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    /// Builds `num/den`. Panics if `den` is zero; fractions are kept
    /// unreduced so a value round-trips exactly through its display form.
    pub fn new(num: u64, den: u64) -> Fraction {
        assert!(den != 0, "fraction denominator must be non-zero");
        Fraction { num, den }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// True iff the value lies in [0, 1].
    pub fn in_unit_interval(&self) -> bool {
        self.num <= self.den
    }

    /// Exact test for `num/den >= self`; `den` must be non-zero in the
    /// caller's domain (a zero denominator makes the ratio vacuously pass
    /// only when `self` is zero, which no caller relies on).
    pub fn is_met_by(&self, num: u64, den: u64) -> bool {
        (num as u128) * (self.den as u128) >= (self.num as u128) * (den as u128)
    }

    /// Exact test for `num/den > self` (strict).
    pub fn is_exceeded_by(&self, num: u64, den: u64) -> bool {
        (num as u128) * (self.den as u128) > (self.num as u128) * (den as u128)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Fraction) -> bool {
        (self.num as u128) * (other.den as u128) == (other.num as u128) * (self.den as u128)
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Fraction) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Fraction) -> std::cmp::Ordering {
        let lhs = (self.num as u128) * (other.den as u128);
        let rhs = (other.num as u128) * (self.den as u128);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseFractionError {
    #[error("'{0}' is not a decimal or num/den fraction")]
    Invalid(String),
    #[error("'{0}' has more precision than a u64-backed fraction can hold")]
    TooPrecise(String),
    #[error("'{0}' has a zero denominator")]
    ZeroDenominator(String),
}

impl FromStr for Fraction {
    type Err = ParseFractionError;

    /// Accepts `"a/b"` rationals and plain decimals (`"0.35"`, `".5"`,
    /// `"2"`). Decimals become `digits / 10^places` unreduced, so the
    /// parsed value is exactly the written one.
    fn from_str(s: &str) -> Result<Fraction, ParseFractionError> {
        let invalid = || ParseFractionError::Invalid(s.to_string());
        if let Some((a, b)) = s.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| invalid())?;
            let den: u64 = b.trim().parse().map_err(|_| invalid())?;
            if den == 0 {
                return Err(ParseFractionError::ZeroDenominator(s.to_string()));
            }
            return Ok(Fraction::new(num, den));
        }
        let (int_part, frac_part) = match s.split_once('.') {
            Some(parts) => parts,
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(invalid());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(invalid());
        }
        let too_precise = || ParseFractionError::TooPrecise(s.to_string());
        let mut num: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| too_precise())?
        };
        let mut den: u64 = 1;
        for b in frac_part.bytes() {
            num = num
                .checked_mul(10)
                .and_then(|n| n.checked_add(u64::from(b - b'0')))
                .ok_or_else(too_precise)?;
            den = den.checked_mul(10).ok_or_else(too_precise)?;
        }
        Ok(Fraction::new(num, den))
    }
}

/// Smallest occurrence count m with m/n >= s, i.e. ceil(s * n) computed
/// exactly. Zero support yields zero, so every subset with any count (or
/// none) qualifies.
pub fn min_support_count(n: u64, support: Fraction) -> u64 {
    let num = support.num as u128 * n as u128;
    let den = support.den as u128;
    let m = num.div_ceil(den);
    u64::try_from(m).expect("minimum support count exceeds u64 range")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scan-based reference: the smallest m in 0..=n with m/n >= s.
    fn min_count_by_scan(n: u64, s: Fraction) -> u64 {
        (0..=n)
            .find(|&m| s.is_met_by(m, n))
            .expect("support above 1 has no satisfying count")
    }

    #[test]
    fn min_support_count_matches_scan() {
        let fractions = [
            Fraction::ZERO,
            Fraction::new(1, 100),
            Fraction::new(3, 10),
            Fraction::new(1, 3),
            Fraction::new(1, 2),
            Fraction::new(2, 3),
            Fraction::new(7, 10),
            Fraction::new(99, 100),
            Fraction::ONE,
        ];
        for n in 0..=50 {
            for s in fractions {
                assert_eq!(
                    min_support_count(n, s),
                    min_count_by_scan(n, s),
                    "n={n} s={s}"
                );
            }
        }
    }

    #[test]
    fn min_support_count_known_values() {
        assert_eq!(min_support_count(100, Fraction::new(3, 10)), 30);
        assert_eq!(min_support_count(7, Fraction::new(1, 2)), 4);
        assert_eq!(min_support_count(3, Fraction::new(2, 3)), 2);
        assert_eq!(min_support_count(10, Fraction::ZERO), 0);
        assert_eq!(min_support_count(0, Fraction::ONE), 0);
    }

    #[test]
    fn threshold_comparisons_are_exact_at_boundaries() {
        let two_thirds = Fraction::new(2, 3);
        assert!(two_thirds.is_met_by(2, 3));
        assert!(!two_thirds.is_met_by(666_666, 1_000_000));
        assert!(two_thirds.is_met_by(666_667, 1_000_000));

        let u = Fraction::new(7, 10);
        assert!(!u.is_exceeded_by(70, 100));
        assert!(u.is_exceeded_by(71, 100));
    }

    #[test]
    fn parses_decimals_and_rationals() {
        assert_eq!("0.35".parse::<Fraction>().unwrap(), Fraction::new(35, 100));
        assert_eq!("0.35".parse::<Fraction>().unwrap(), Fraction::new(7, 20));
        assert_eq!(".5".parse::<Fraction>().unwrap(), Fraction::new(1, 2));
        assert_eq!("1".parse::<Fraction>().unwrap(), Fraction::ONE);
        assert_eq!("2/3".parse::<Fraction>().unwrap(), Fraction::new(2, 3));
        assert_eq!("1.".parse::<Fraction>().unwrap(), Fraction::ONE);

        assert!("".parse::<Fraction>().is_err());
        assert!("-0.5".parse::<Fraction>().is_err());
        assert!("1e-3".parse::<Fraction>().is_err());
        assert!("1/0".parse::<Fraction>().is_err());
        assert!("0.123456789012345678901".parse::<Fraction>().is_err());
    }

    #[test]
    fn display_round_trips_unreduced() {
        let f = Fraction::new(30, 100);
        assert_eq!(f.to_string(), "30/100");
        assert_eq!(f.to_string().parse::<Fraction>().unwrap(), f);
    }

    #[test]
    fn ordering_cross_multiplies() {
        assert!(Fraction::new(1, 3) < Fraction::new(1, 2));
        assert!(Fraction::new(2, 4) == Fraction::new(1, 2));
        assert!(Fraction::new(2, 3) > Fraction::new(66, 100));
    }
}
