//! Closed-form maximum measure of a t-intersecting family on `n` points.

use std::cmp::Ordering;
use std::fmt;

use num::traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::rat::{binomial, check_probability, pow, rat, Rat};

/// Which case of the closed form produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    FranklUnique,
    FranklTwo,
    T1PSmall,
    T1PLargeOdd,
    T1PLargeEven,
    T1PHalfMany,
    PHalf,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::FranklUnique => "frankl-unique",
            Regime::FranklTwo => "frankl-two",
            Regime::T1PSmall => "t1-psmall",
            Regime::T1PLargeOdd => "t1-plarge-odd",
            Regime::T1PLargeEven => "t1-plarge-even",
            Regime::T1PHalfMany => "t1-phalf-many",
            Regime::PHalf => "phalf",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WResult {
    pub value: Rat,
    /// Radii of the optimal Frankl families, ascending.
    pub optimal_r: Vec<usize>,
    pub regime: Regime,
}

/// The p at which `F_{t,r}` and `F_{t,r+1}` have equal measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Breakpoint {
    pub t: usize,
    pub r: usize,
    pub p: Rat,
}

pub fn breakpoint(t: usize, r: usize) -> Breakpoint {
    Breakpoint { t, r, p: rat((r + 1) as i64, (t + 2 * r + 1) as i64) }
}

/// Lower end `r / (t + 2r - 1)` of the window on which `F_{t,r}` is optimal.
pub fn window_start(t: usize, r: usize) -> Rat {
    if r == 0 {
        Rat::zero()
    } else {
        rat(r as i64, (t + 2 * r - 1) as i64)
    }
}

/// Largest radius that fits on `n` points.
pub fn max_radius(n: usize, t: usize) -> usize {
    (n - t) / 2
}

pub fn mu_frankl(t: usize, r: usize, p: &Rat) -> Result<Rat> {
    if t == 0 {
        return Err(invalid("t must be at least 1"));
    }
    check_probability(p)?;
    Ok(mu_frankl_unchecked(t, r, p))
}

pub(crate) fn mu_frankl_unchecked(t: usize, r: usize, p: &Rat) -> Rat {
    let k = t + 2 * r;
    let q = Rat::one() - p;
    (t + r..=k).fold(Rat::zero(), |acc, j| acc + Rat::from_integer(binomial(k, j)) * pow(p, j) * pow(&q, k - j))
}

/// Sign of `mu(F_{t,r}) - mu(F_{t,r+1})`; positive below the breakpoint.
pub fn compare_frankl(t: usize, r: usize, p: &Rat) -> Result<Ordering> {
    let a = mu_frankl(t, r, p)?;
    let b = mu_frankl(t, r + 1, p)?;
    Ok(a.cmp(&b))
}

pub fn w_closed(n: usize, t: usize, p: &Rat) -> Result<WResult> {
    if t == 0 || t > n {
        return Err(invalid(format!("need 1 <= t <= n, got t = {t}, n = {n}")));
    }
    check_probability(p)?;
    let half = rat(1, 2);
    let rmax = max_radius(n, t);

    if t == 1 {
        return Ok(match p.cmp(&half) {
            Ordering::Less => WResult { value: p.clone(), optimal_r: vec![0], regime: Regime::T1PSmall },
            Ordering::Equal => WResult { value: half, optimal_r: (0..=rmax).collect(), regime: Regime::T1PHalfMany },
            Ordering::Greater => WResult {
                value: mu_frankl_unchecked(1, rmax, p),
                optimal_r: vec![rmax],
                regime: if n % 2 == 1 { Regime::T1PLargeOdd } else { Regime::T1PLargeEven },
            },
        });
    }

    // Largest r <= r* whose window has started by p.
    let r = (0..=rmax).rev().find(|&r| window_start(t, r) <= *p).unwrap_or(0);
    let value = mu_frankl_unchecked(t, r, p);
    if r >= 1 && window_start(t, r) == *p {
        return Ok(WResult { value, optimal_r: vec![r - 1, r], regime: Regime::FranklTwo });
    }
    let regime = if *p == half { Regime::PHalf } else { Regime::FranklUnique };
    Ok(WResult { value, optimal_r: vec![r], regime })
}

/// Supremum of the optimum over all ground set sizes.
pub fn wsup_closed(t: usize, p: &Rat) -> Result<Rat> {
    if t == 0 {
        return Err(invalid("t must be at least 1"));
    }
    check_probability(p)?;
    let half = rat(1, 2);
    match p.cmp(&half) {
        Ordering::Greater => Ok(Rat::one()),
        Ordering::Equal => Ok(half),
        Ordering::Less if t == 1 => Ok(p.clone()),
        Ordering::Less => {
            let mut r = 0;
            while window_start(t, r + 1) <= *p {
                r += 1;
            }
            Ok(mu_frankl_unchecked(t, r, p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn frankl_measures() {
        assert_eq!(mu_frankl(2, 0, &rat(1, 3)).unwrap(), rat(1, 9));
        assert_eq!(mu_frankl(2, 1, &rat(1, 3)).unwrap(), rat(1, 9));
        assert_eq!(mu_frankl(1, 1, &rat(1, 2)).unwrap(), rat(1, 2));
        assert!(mu_frankl(0, 1, &rat(1, 2)).is_err());
    }

    #[test]
    fn comparison_signs() {
        assert_eq!(compare_frankl(2, 0, &rat(1, 4)).unwrap(), Ordering::Greater);
        assert_eq!(compare_frankl(2, 0, &rat(1, 3)).unwrap(), Ordering::Equal);
        assert_eq!(compare_frankl(2, 0, &rat(2, 5)).unwrap(), Ordering::Less);
    }

    #[test]
    fn closed_form_examples() {
        let a = w_closed(4, 2, &rat(3, 10)).unwrap();
        assert_eq!((a.value, a.optimal_r, a.regime), (rat(9, 100), vec![0], Regime::FranklUnique));
        let b = w_closed(4, 2, &rat(2, 5)).unwrap();
        assert_eq!((b.value, b.optimal_r), (rat(112, 625), vec![1]));
        let c = w_closed(4, 2, &rat(1, 3)).unwrap();
        assert_eq!((c.optimal_r, c.regime), (vec![0, 1], Regime::FranklTwo));
        assert_eq!(w_closed(5, 1, &rat(1, 2)).unwrap().regime, Regime::T1PHalfMany);
        assert_eq!(w_closed(4, 1, &rat(3, 4)).unwrap().regime, Regime::T1PLargeEven);
        assert_eq!(w_closed(5, 3, &rat(1, 2)).unwrap().regime, Regime::PHalf);
        assert!(w_closed(3, 4, &rat(1, 2)).is_err());
        assert!(w_closed(3, 1, &rat(1, 1)).is_err());
    }

    #[test]
    fn supremum_examples() {
        assert_eq!(wsup_closed(1, &rat(3, 5)).unwrap(), rat(1, 1));
        assert_eq!(wsup_closed(2, &rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(wsup_closed(3, &rat(1, 4)).unwrap(), rat(1, 64));
    }

    fn prob() -> impl Strategy<Value = Rat> {
        (1i64..99).prop_map(|k| rat(k, 100))
    }

    proptest! {
        #[test]
        fn comparison_matches_breakpoint(t in 1usize..6, r in 0usize..6, p in prob()) {
            let bp = breakpoint(t, r).p;
            let want = bp.cmp(&p);
            prop_assert_eq!(compare_frankl(t, r, &p).unwrap(), want);
        }

        #[test]
        fn closed_form_is_monotone_in_n(t in 1usize..5, n in 1usize..14, p in prob()) {
            prop_assume!(n >= t);
            let a = w_closed(n, t, &p).unwrap().value;
            let b = w_closed(n + 1, t, &p).unwrap().value;
            prop_assert!(a <= b);
            prop_assert!(b <= wsup_closed(t, &p).unwrap());
        }

        #[test]
        fn closed_form_is_monotone_in_p(n in 1usize..12, t in 1usize..5, k in 1i64..98) {
            prop_assume!(n >= t);
            let a = w_closed(n, t, &rat(k, 100)).unwrap().value;
            let b = w_closed(n, t, &rat(k + 1, 100)).unwrap().value;
            prop_assert!(a < b);
        }

        #[test]
        fn optimal_radius_beats_all_others(n in 1usize..14, t in 2usize..5, p in prob()) {
            prop_assume!(n >= t);
            let w = w_closed(n, t, &p).unwrap();
            for r in 0..=max_radius(n, t) {
                prop_assert!(mu_frankl(t, r, &p).unwrap() <= w.value);
            }
        }
    }
}
