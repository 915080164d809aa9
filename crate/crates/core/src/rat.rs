//! Exact rationals and the handful of helpers the rest of the crate leans on.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Parses `NUM/DEN` (or a bare integer). Decimals are rejected on purpose.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidParameters(format!("expected NUM/DEN, got {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

pub fn check_probability(p: &Rat) -> Result<()> {
    if *p <= Rat::zero() || *p >= Rat::one() {
        return Err(Error::ProbabilityOutOfRange(p.to_string()));
    }
    Ok(())
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn pow(x: &Rat, e: usize) -> Rat {
    num::traits::pow(x.clone(), e)
}

/// `p^k (1-p)^(n-k)` for every `k` in `0..=n`.
pub fn level_weights(p: &Rat, n: usize) -> Vec<Rat> {
    let q = Rat::one() - p;
    (0..=n).map(|k| pow(p, k) * pow(&q, n - k)).collect()
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num::integer::binomial(BigInt::from(n), BigInt::from(k))
}

pub fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Falling power `x (x-1) ... (x-e+1)`.
pub fn falling(x: usize, e: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..e {
        if i >= x {
            return BigInt::zero();
        }
        acc *= BigInt::from(x - i);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_only() {
        assert_eq!(parse_rat("3/10").unwrap(), rat(3, 10));
        assert_eq!(parse_rat("6/20").unwrap(), rat(3, 10));
        assert_eq!(parse_rat("2").unwrap(), int(2));
        assert!(parse_rat("0.3").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn probability_bounds() {
        assert!(check_probability(&rat(1, 2)).is_ok());
        assert!(check_probability(&int(0)).is_err());
        assert!(check_probability(&int(1)).is_err());
    }

    #[test]
    fn small_combinatorics() {
        assert_eq!(binomial_u128(64, 32), 1832624140942590534);
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(falling(5, 3), BigInt::from(60));
        assert_eq!(falling(2, 3), BigInt::zero());
    }
}
