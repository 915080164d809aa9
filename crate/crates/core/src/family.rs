//! Families of subsets of `[n]`, stored as indicator bit-vectors over `2^[n]`.
//!
//! Point `i` (1-based) is bit `i - 1` of a subset mask.

use std::fmt;

use num::traits::Zero;

use crate::error::{invalid, Result};
use crate::rat::{check_probability, level_weights, Rat};

pub const MAX_POINTS: usize = 24;

#[inline]
pub fn bit(i: usize) -> u32 {
    1 << (i - 1)
}

pub fn mask_of(elems: &[usize]) -> u32 {
    elems.iter().fold(0, |m, &i| m | bit(i))
}

pub fn elements(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// A subset of `[n]` with its ground size attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    pub n: usize,
    pub mask: u32,
}

impl Subset {
    pub fn new(n: usize, elems: &[usize]) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(invalid(format!("n = {n} exceeds {MAX_POINTS}")));
        }
        if let Some(&e) = elems.iter().find(|&&e| e == 0 || e > n) {
            return Err(invalid(format!("element {e} outside [1, {n}]")));
        }
        Ok(Subset { n, mask: mask_of(elems) })
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.n && self.mask & bit(i) != 0
    }

    pub fn elements(&self) -> Vec<usize> {
        elements(self.mask)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.elements().iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", e.join(","))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    words: Vec<u64>,
}

impl SetFamily {
    /// The empty family on `n` points. Panics if `n > MAX_POINTS`.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_POINTS, "ground set too large: {n}");
        let words = (1usize << n).div_ceil(64);
        SetFamily { n, words: vec![0; words] }
    }

    pub fn full(n: usize) -> Self {
        let mut f = Self::empty(n);
        for m in 0..f.universe() {
            f.insert(m);
        }
        f
    }

    pub fn from_masks(n: usize, masks: impl IntoIterator<Item = u32>) -> Self {
        let mut f = Self::empty(n);
        for m in masks {
            f.insert(m);
        }
        f
    }

    /// Convenience constructor from 1-based element lists.
    pub fn from_sets(n: usize, sets: &[&[usize]]) -> Self {
        Self::from_masks(n, sets.iter().map(|s| mask_of(s)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn universe(&self) -> u32 {
        1u32 << self.n
    }

    pub fn full_mask(&self) -> u32 {
        self.universe() - 1
    }

    #[inline]
    pub fn contains(&self, mask: u32) -> bool {
        let m = mask as usize;
        m < (1usize << self.n) && self.words[m >> 6] >> (m & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, mask: u32) {
        assert!(mask < self.universe(), "mask outside the ground set");
        let m = mask as usize;
        self.words[m >> 6] |= 1 << (m & 63);
    }

    #[inline]
    pub fn remove(&mut self, mask: u32) {
        let m = mask as usize;
        if m < (1usize << self.n) {
            self.words[m >> 6] &= !(1 << (m & 63));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in ascending mask order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((wi as u32) * 64 + b)
            })
        })
    }

    pub fn members(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// The whole indicator as one integer; only meaningful for `n <= 6`.
    pub fn indicator(&self) -> u64 {
        assert!(self.n <= 6);
        self.words[0]
    }

    pub fn level_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.n + 1];
        for m in self.iter() {
            c[m.count_ones() as usize] += 1;
        }
        c
    }

    pub fn measure(&self, p: &Rat) -> Result<Rat> {
        check_probability(p)?;
        Ok(self.measure_unchecked(p))
    }

    pub(crate) fn measure_unchecked(&self, p: &Rat) -> Rat {
        let w = level_weights(p, self.n);
        self.level_counts()
            .iter()
            .zip(w)
            .filter(|(c, _)| **c > 0)
            .fold(Rat::zero(), |acc, (c, w)| acc + w * Rat::from_integer((*c).into()))
    }

    pub fn is_t_intersecting(&self, t: usize) -> bool {
        self.is_cross_t_intersecting(self, t)
    }

    pub fn is_cross_t_intersecting(&self, other: &SetFamily, t: usize) -> bool {
        let a = self.members();
        let b = other.members();
        a.iter().all(|&x| b.iter().all(|&y| (x & y).count_ones() as usize >= t))
    }

    pub fn up_set(&self) -> SetFamily {
        let mut f = self.clone();
        let u = self.universe();
        for b in 0..self.n {
            let bb = 1u32 << b;
            for m in 0..u {
                if m & bb == 0 && f.contains(m) {
                    f.insert(m | bb);
                }
            }
        }
        f
    }

    pub fn is_monotone(&self) -> bool {
        self.iter().all(|m| (0..self.n).all(|b| self.contains(m | 1 << b)))
    }

    pub fn is_left_compressed(&self) -> bool {
        crate::shifting::is_left_compressed(self)
    }

    /// Largest point occurring in some member, 0 if none.
    pub fn max_point(&self) -> usize {
        self.iter().fold(0u32, |a, m| a | m).checked_ilog2().map_or(0, |b| b as usize + 1)
    }

    pub fn union(&self, other: &SetFamily) -> SetFamily {
        assert_eq!(self.n, other.n);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        SetFamily { n: self.n, words }
    }

    pub fn difference(&self, other: &SetFamily) -> SetFamily {
        assert_eq!(self.n, other.n);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect();
        SetFamily { n: self.n, words }
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Members of size `k`.
    pub fn level(&self, k: usize) -> SetFamily {
        SetFamily::from_masks(self.n, self.iter().filter(|m| m.count_ones() as usize == k))
    }

    /// Same members, viewed on `n + 1` points.
    pub fn widen(&self) -> SetFamily {
        SetFamily::from_masks(self.n + 1, self.iter())
    }

    /// `F ∪ {A ∪ {n+1} : A ∈ F}` on `n + 1` points.
    pub fn extend_free(&self) -> SetFamily {
        let top = bit(self.n + 1);
        SetFamily::from_masks(self.n + 1, self.iter().flat_map(|m| [m, m | top]))
    }

    /// Members avoiding point `n`, viewed on `n - 1` points.
    pub fn restrict_last(&self) -> SetFamily {
        assert!(self.n > 0);
        let top = bit(self.n);
        SetFamily::from_masks(self.n - 1, self.iter().filter(|m| m & top == 0))
    }

    /// Image under the point map `i -> perm[i - 1]` (1-based values).
    pub fn permute(&self, perm: &[usize]) -> SetFamily {
        assert_eq!(perm.len(), self.n);
        let map = |m: u32| (1..=self.n).filter(|&i| m & bit(i) != 0).fold(0, |acc, i| acc | bit(perm[i - 1]));
        SetFamily::from_masks(self.n, self.iter().map(map))
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(n={}; ", self.n)?;
        let parts: Vec<String> = self.iter().map(|m| Subset { n: self.n, mask: m }.to_string()).collect();
        write!(f, "{})", parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FranklParams {
    pub n: usize,
    pub t: usize,
    pub r: usize,
}

impl FranklParams {
    pub fn support(&self) -> usize {
        self.t + 2 * self.r
    }
}

/// All sets meeting `support` in at least `threshold` points.
pub fn threshold_family(n: usize, support: u32, threshold: usize) -> SetFamily {
    let f = SetFamily::empty(n);
    SetFamily::from_masks(n, (0..f.universe()).filter(|m| (m & support).count_ones() as usize >= threshold))
}

/// `{A : |A ∩ [t+2r]| >= t+r}` on `n` points.
pub fn frankl(n: usize, t: usize, r: usize) -> Result<SetFamily> {
    if t == 0 {
        return Err(invalid("t must be at least 1"));
    }
    if n > MAX_POINTS {
        return Err(invalid(format!("n = {n} exceeds {MAX_POINTS}")));
    }
    if t + 2 * r > n {
        return Err(invalid(format!("t + 2r = {} exceeds n = {n}", t + 2 * r)));
    }
    Ok(threshold_family(n, (1u32 << (t + 2 * r)) - 1, t + r))
}

/// Finds a support `S` of size `t + 2r` with `F = {A : |A ∩ S| >= t+r}`.
pub fn frankl_equivalence_witness(f: &SetFamily, t: usize, r: usize) -> Option<Subset> {
    let n = f.n();
    let k = t + 2 * r;
    if t == 0 || k > n {
        return None;
    }
    let expected = (0..=k).filter(|&j| j >= t + r).map(|j| crate::rat::binomial_u128(k, j) << (n - k)).sum::<u128>();
    if f.len() as u128 != expected {
        return None;
    }
    (0..f.universe())
        .filter(|s| s.count_ones() as usize == k)
        .find(|&s| threshold_family(n, s, t + r) == *f)
        .map(|mask| Subset { n, mask })
}
