//! Subsets of the discrete circle `Z_m`, s-agreement, intervals, and an
//! exhaustive check of the cross-agreeing size bound.

use std::fmt;

use num::traits::Zero;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::rat::{rat, Rat};

pub const MAX_KATONA_MODULUS: usize = 14;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZmSet {
    m: usize,
    mask: u64,
}

impl ZmSet {
    pub fn new(m: usize, mask: u64) -> Result<Self> {
        if m == 0 || m > 64 {
            return Err(invalid(format!("modulus {m} outside 1..=64")));
        }
        if m < 64 && mask >> m != 0 {
            return Err(invalid(format!("mask {mask:#x} has residues >= {m}")));
        }
        Ok(ZmSet { m, mask })
    }

    pub fn from_residues(m: usize, residues: &[usize]) -> Result<Self> {
        if let Some(&r) = residues.iter().find(|&&r| r >= m) {
            return Err(invalid(format!("residue {r} not below {m}")));
        }
        ZmSet::new(m, residues.iter().fold(0, |acc, &r| acc | 1 << r))
    }

    pub fn modulus(&self) -> usize {
        self.m
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.m && self.mask >> x & 1 == 1
    }

    pub fn residues(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(|&x| self.contains(x))
    }

    fn rotate(&self, k: usize) -> u64 {
        (0..self.m).filter(|&x| self.contains(x)).fold(0, |acc, x| acc | 1 << ((x + k) % self.m))
    }
}

impl fmt::Debug for ZmSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.residues().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}/Z{}", items.join(","), self.m)
    }
}

fn check_window(m: usize, s: usize) -> Result<()> {
    if s == 0 || 2 * s > m {
        return Err(invalid(format!("need 1 <= s <= m/2, got s = {s}, m = {m}")));
    }
    Ok(())
}

/// Residues `b` with `a - b` in `{-(s-1), ..., s-1}` for every `a` in `a_set`.
fn agreeing_with(a_set: u64, m: usize, s: usize) -> u64 {
    let mut out = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    for a in (0..m).filter(|&a| a_set >> a & 1 == 1) {
        let window = (0..m)
            .filter(|&b| {
                let d = (a + m - b) % m;
                d < s || m - d < s
            })
            .fold(0u64, |acc, b| acc | 1 << b);
        out &= window;
    }
    out
}

pub fn is_cross_s_agreeing(a: &ZmSet, b: &ZmSet, s: usize) -> Result<bool> {
    if a.m != b.m {
        return Err(invalid("sets live on different circles"));
    }
    check_window(a.m, s)?;
    Ok(b.mask & !agreeing_with(a.mask, a.m, s) == 0)
}

pub fn is_s_agreeing(a: &ZmSet, s: usize) -> Result<bool> {
    is_cross_s_agreeing(a, a, s)
}

/// Center of `a` if it is a circular interval. Odd lengths have an integer
/// center and even lengths a half-integer one, normalised into `[0, m)`. The
/// whole circle is read as the interval starting at 0.
pub fn interval_center(a: &ZmSet) -> Option<Rat> {
    let k = a.len();
    if k == 0 {
        return None;
    }
    let m = a.m;
    let run = |start: usize| (0..k).fold(0u64, |acc, i| acc | 1 << ((start + i) % m));
    let start = (0..m).find(|&x| a.contains(x) && run(x) == a.mask)?;
    let c = rat(2 * start as i64 + k as i64 - 1, 2);
    let mm = rat(m as i64, 1);
    Some(if c >= mm { c - mm } else { c })
}

fn format_center(c: &Option<Rat>) -> String {
    match c {
        Some(c) => c.to_string(),
        None => "-".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityPair {
    pub a: ZmSet,
    pub b: ZmSet,
    /// Common center of both sets when they are concentric intervals.
    pub center: Option<Rat>,
}

impl EqualityPair {
    pub fn line(&self) -> String {
        format!("{} {} {} {} {}", self.a.len(), self.b.len(), self.a.mask, self.b.mask, format_center(&self.center))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatonaReport {
    pub m: usize,
    pub s: usize,
    /// Nonempty sets `A` that admit a nonempty cross-agreeing partner.
    pub sets_with_partner: usize,
    pub max_pair_size: usize,
    pub equality_pairs: Vec<EqualityPair>,
    pub max_agreeing_size: usize,
    /// Every maximum-size s-agreeing set is an interval.
    pub max_agreeing_are_intervals: bool,
    pub violations: Vec<String>,
}

impl KatonaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// One line per equality pair: `|A| |B| A-mask B-mask center`.
    pub fn serialize(&self) -> String {
        self.equality_pairs.iter().map(|p| p.line() + "\n").collect()
    }
}

/// Checks `|A| + |B| <= 2s` for all nonempty cross-s-agreeing pairs on `Z_m`
/// and characterises the pairs attaining it.
///
/// Partners of a fixed `A` are exactly the nonempty subsets of the residues
/// agreeing with all of `A`, so each `A` needs only its largest partner for the
/// bound, and equality forces `B` to be that largest partner.
pub fn verify_katona_cross(m: usize, s: usize) -> Result<KatonaReport> {
    if m > MAX_KATONA_MODULUS {
        return Err(Error::TooLarge(format!("m = {m}, limit {MAX_KATONA_MODULUS}")));
    }
    check_window(m, s)?;
    let half = 2 * s == m;
    let rows: Vec<(u64, u64)> = (1u64..1 << m).into_par_iter().map(|a| (a, agreeing_with(a, m, s))).collect();
    let mut report = KatonaReport {
        m,
        s,
        sets_with_partner: 0,
        max_pair_size: 0,
        equality_pairs: Vec::new(),
        max_agreeing_size: 0,
        max_agreeing_are_intervals: true,
        violations: Vec::new(),
    };
    for &(a, partners) in &rows {
        let za = ZmSet { m, mask: a };
        if a & !partners == 0 {
            let k = za.len();
            if k > report.max_agreeing_size {
                report.max_agreeing_size = k;
                report.max_agreeing_are_intervals = true;
            }
            if k == report.max_agreeing_size && interval_center(&za).is_none() {
                report.max_agreeing_are_intervals = false;
            }
        }
        if partners == 0 {
            continue;
        }
        report.sets_with_partner += 1;
        let zb = ZmSet { m, mask: partners };
        let size = za.len() + zb.len();
        report.max_pair_size = report.max_pair_size.max(size);
        if size > 2 * s {
            report.violations.push(format!("{za:?} and {zb:?} exceed 2s"));
        }
        if size != 2 * s {
            continue;
        }
        let (ca, cb) = (interval_center(&za), interval_center(&zb));
        let center = if ca.is_some() && ca == cb { ca } else { None };
        if half {
            let expected = (0..m).filter(|&x| !za.contains((x + s) % m)).fold(0u64, |acc, x| acc | 1 << x);
            if partners != expected {
                report.violations.push(format!("{za:?} and {zb:?} are not complementary"));
            }
        } else if center.is_none() {
            report.violations.push(format!("{za:?} and {zb:?} are not concentric intervals"));
        }
        report.equality_pairs.push(EqualityPair { a: za, b: zb, center });
    }
    if half {
        // Every proper nonempty A then has an equality partner.
        let want = (1usize << m) - 2;
        if report.equality_pairs.len() != want {
            report.violations.push(format!("{} equality pairs, expected {want}", report.equality_pairs.len()));
        }
    }
    if report.max_agreeing_size > s {
        report.violations.push(format!("an s-agreeing set has {} > s elements", report.max_agreeing_size));
    }
    if !half && !report.max_agreeing_are_intervals {
        report.violations.push("a maximum s-agreeing set is not an interval".into());
    }
    Ok(report)
}

/// Residues rotated by `k`; used to check that the report is rotation invariant.
pub fn rotate(a: &ZmSet, k: usize) -> ZmSet {
    ZmSet { m: a.m, mask: a.rotate(k) }
}

pub fn center_is_valid(c: &Rat, m: usize) -> bool {
    *c >= Rat::zero() && *c < rat(m as i64, 1) && (c * rat(2, 1)).is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(m: usize, r: &[usize]) -> ZmSet {
        ZmSet::from_residues(m, r).unwrap()
    }

    #[test]
    fn agreement_examples() {
        assert!(is_s_agreeing(&z(10, &[0, 1, 2]), 3).unwrap());
        assert!(!is_s_agreeing(&z(10, &[0, 3]), 3).unwrap());
        assert!(is_s_agreeing(&z(10, &[9, 0, 1]), 3).unwrap());
        assert!(!is_s_agreeing(&z(10, &[9, 0, 1]), 2).unwrap());
        assert!(is_s_agreeing(&z(10, &[9, 0]), 2).unwrap());
        assert!(is_s_agreeing(&z(10, &[0, 1]), 6).is_err());
        assert!(ZmSet::new(4, 1 << 4).is_err());
    }

    #[test]
    fn interval_examples() {
        assert_eq!(interval_center(&z(10, &[3, 4, 5])), Some(rat(4, 1)));
        assert_eq!(interval_center(&z(10, &[3, 4])), Some(rat(7, 2)));
        assert_eq!(interval_center(&z(10, &[0, 2])), None);
        assert_eq!(interval_center(&z(10, &[9, 0, 1])), Some(rat(0, 1)));
        assert_eq!(interval_center(&z(10, &[9, 0])), Some(rat(19, 2)));
        assert_eq!(interval_center(&z(10, &[])), None);
    }

    #[test]
    fn katona_examples() {
        let r = verify_katona_cross(7, 3).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.max_agreeing_size, 3);
        assert!(r.max_agreeing_are_intervals);
        let r = verify_katona_cross(4, 2).unwrap();
        assert!(r.passed());
        let a = z(4, &[0, 1]);
        let pair = r.equality_pairs.iter().find(|p| p.a == a).unwrap();
        assert_eq!(pair.b, z(4, &[0, 1]));
        assert!(r.serialize().lines().any(|l| l == "2 2 3 3 1/2"));
        assert!(verify_katona_cross(15, 2).is_err());
        assert!(verify_katona_cross(6, 4).is_err());
    }

    #[test]
    fn all_moduli_pass() {
        for m in 2..=MAX_KATONA_MODULUS {
            for s in 1..=m / 2 {
                let r = verify_katona_cross(m, s).unwrap();
                assert!(r.passed(), "m={m} s={s}: {:?}", r.violations);
                assert_eq!(r.max_pair_size, 2 * s);
                for p in &r.equality_pairs {
                    if let Some(c) = &p.center {
                        assert!(center_is_valid(c, m));
                    }
                }
            }
        }
    }

    #[test]
    fn pairwise_search_agrees_with_partner_sets() {
        for m in 2..=7usize {
            for s in 1..=m / 2 {
                let mut best = 0;
                let mut eq = 0;
                for a in 1u64..1 << m {
                    for b in 1u64..1 << m {
                        let (za, zb) = (ZmSet::new(m, a).unwrap(), ZmSet::new(m, b).unwrap());
                        if is_cross_s_agreeing(&za, &zb, s).unwrap() {
                            let k = za.len() + zb.len();
                            best = best.max(k);
                            eq += usize::from(k == 2 * s);
                        }
                    }
                }
                let r = verify_katona_cross(m, s).unwrap();
                assert_eq!(best, r.max_pair_size);
                assert_eq!(eq, r.equality_pairs.len());
            }
        }
    }

    proptest! {
        #[test]
        fn agreement_is_rotation_invariant(m in 2usize..20, a in any::<u64>(), b in any::<u64>(), k in 0usize..20, s in 1usize..10) {
            prop_assume!(2 * s <= m);
            let full = (1u64 << m) - 1;
            let (za, zb) = (ZmSet::new(m, a & full).unwrap(), ZmSet::new(m, b & full).unwrap());
            prop_assert_eq!(
                is_cross_s_agreeing(&za, &zb, s).unwrap(),
                is_cross_s_agreeing(&rotate(&za, k), &rotate(&zb, k), s).unwrap()
            );
            prop_assert_eq!(is_cross_s_agreeing(&za, &zb, s).unwrap(), is_cross_s_agreeing(&zb, &za, s).unwrap());
        }

        #[test]
        fn rotated_intervals_move_their_center(m in 2usize..20, start in 0usize..20, len in 1usize..20, k in 0usize..20) {
            prop_assume!(len <= m);
            let a = ZmSet::from_residues(m, &(0..len).map(|i| (start + i) % m).collect::<Vec<_>>()).unwrap();
            let c = interval_center(&a).unwrap();
            prop_assert!(center_is_valid(&c, m));
            if len < m {
                let mut want = c + rat(k as i64, 1);
                while want >= rat(m as i64, 1) {
                    want -= rat(m as i64, 1);
                }
                prop_assert_eq!(interval_center(&rotate(&a, k)).unwrap(), want);
            }
        }
    }
}
