//! Symmetric extent, its boundary, and the moves that push sets across it.

use std::collections::BTreeMap;

use crate::error::{require, Result, Violation};
use crate::family::{bit, SetFamily};
use crate::generating::{check_surgery_input, generating_data, gs2_transform, is_nontrivial};
use crate::rat::{rat, Rat};
use crate::shifting::{left_compress, shift_changes};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryData {
    /// Largest `l` such that `F` is invariant under every shift inside `[l]`.
    pub sym_extent: usize,
    /// Members blocking a larger symmetric extent; empty when `l = n`.
    pub boundary: SetFamily,
    /// `slices[a]` holds the parts outside `[l+1]` of boundary sets meeting
    /// `[l]` in `a` points. Stored on the full ground set.
    pub slices: BTreeMap<usize, SetFamily>,
}

impl SymmetryData {
    pub fn slice(&self, a: usize) -> SetFamily {
        self.slices.get(&a).cloned().unwrap_or_else(|| SetFamily::empty(self.boundary.n()))
    }
}

fn prefix(l: usize) -> u32 {
    (1u32 << l) - 1
}

fn invariant_between(f: &SetFamily, i: usize, j: usize) -> bool {
    !shift_changes(f, bit(i), bit(j)) && !shift_changes(f, bit(j), bit(i))
}

pub fn symmetry_data(f: &SetFamily) -> Result<SymmetryData> {
    require(f.is_left_compressed(), Violation::NotLeftCompressed)?;
    let n = f.n();
    let mut l = n.min(1);
    while l < n && (1..=l).all(|i| invariant_between(f, i, l + 1)) {
        l += 1;
    }
    let mut boundary = SetFamily::empty(n);
    let mut slices: BTreeMap<usize, SetFamily> = BTreeMap::new();
    if l < n {
        let next = bit(l + 1);
        for a in f.iter().filter(|a| a & next == 0) {
            let inside = a & prefix(l);
            let blocked = (1..=l).filter(|&i| inside & bit(i) != 0).any(|i| !f.contains((a & !bit(i)) | next));
            if blocked {
                boundary.insert(a);
                slices
                    .entry(inside.count_ones() as usize)
                    .or_insert_with(|| SetFamily::empty(n))
                    .insert(a & !prefix(l));
            }
        }
    }
    Ok(SymmetryData { sym_extent: l, boundary, slices })
}

/// `{K ∪ R : K ⊆ points, |K| = k, R ∈ rest}`.
fn product(n: usize, points: u32, k: usize, rest: &SetFamily) -> SetFamily {
    let mut out = SetFamily::empty(n);
    let mut sub = points;
    loop {
        if sub.count_ones() as usize == k {
            for r in rest.iter() {
                out.insert(sub | r);
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & points;
    }
    out
}

/// Measure of the `a`-th boundary slice, `C([l], a) × X_a`.
pub fn slice_measure(f: &SetFamily, sd: &SymmetryData, a: usize, p: &Rat) -> Rat {
    product(f.n(), prefix(sd.sym_extent), a, &sd.slice(a)).measure_unchecked(p)
}

/// For `a != b` with `a + b = l + t`: `F1` drops the `b` slice and lifts the
/// `a` slice by trading one point of `[l]` for `l + 1`; `F2` does the reverse.
pub fn sym2_transform(f: &SetFamily, t: usize, a: usize, b: usize) -> Result<(SetFamily, SetFamily)> {
    let sd = symmetry_data(f)?;
    require(f.is_t_intersecting(t), Violation::NotTIntersecting)?;
    let n = f.n();
    let l = sd.sym_extent;
    require(l < n, Violation::FullySymmetric)?;
    require(a != b, Violation::EqualSlices)?;
    require(a + b == l + t, Violation::SliceSum { expected: l + t, got: a + b })?;
    let (xa, xb) = (sd.slice(a), sd.slice(b));
    require(!xa.is_empty() || !xb.is_empty(), Violation::EmptySlices)?;
    let next = bit(l + 1);
    let build = |drop: usize, xd: &SetFamily, lift: usize, xl: &SetFamily| {
        let mut g = f.difference(&product(n, prefix(l), drop, xd));
        if lift >= 1 {
            for m in product(n, prefix(l), lift - 1, xl).iter() {
                g.insert(m | next);
            }
        }
        g
    };
    Ok((build(b, &xb, a, &xa), build(a, &xa, b, &xb)))
}

/// Points `s > m` other than `l + 1`, ascending.
pub fn admissible_points(n: usize, extent: usize, sym_extent: usize) -> Vec<usize> {
    (extent + 1..=n).filter(|&s| s != sym_extent + 1).collect()
}

/// For `a = (l + t) / 2`: replaces `C([l], a) × X_a` by `C([l+1], a) × X'_a`
/// where `X'_a` keeps the slice sets containing the chosen point `s`.
/// With `s = None` the smallest admissible point is used.
pub fn sym3_transform(f: &SetFamily, t: usize, s: Option<usize>) -> Result<SetFamily> {
    let gd = check_surgery_input(f, t)?;
    let sd = symmetry_data(f)?;
    let n = f.n();
    let (m, l) = (gd.extent, sd.sym_extent);
    let admissible = admissible_points(n, m, l);
    let s = match s {
        Some(s) => {
            require(admissible.contains(&s), Violation::PointOutOfRange(s))?;
            s
        }
        None => *admissible.first().ok_or(crate::Error::Precondition(Violation::NoAdmissiblePoint))?,
    };
    require((l + t).is_multiple_of(2), Violation::OddSum)?;
    let a = (l + t) / 2;
    let xa = sd.slice(a);
    require(!xa.is_empty(), Violation::EmptySlices)?;
    let kept = SetFamily::from_masks(n, xa.iter().filter(|r| r & bit(s) != 0));
    let mut g = f.difference(&product(n, prefix(l), a, &xa));
    for m in product(n, prefix(l + 1), a, &kept).iter() {
        g.insert(m);
    }
    Ok(g)
}

/// Threshold above which the lifting move gains measure.
pub fn sym3_threshold(l: usize, t: usize) -> Rat {
    rat(l as i64 + 2 - t as i64, 2 * (l as i64 + 1))
}

fn measure(f: &SetFamily, p: &Rat) -> Rat {
    f.measure_unchecked(p)
}

/// Makes a t-intersecting family monotone and left-compressed without losing measure.
fn normalize(f: &SetFamily) -> SetFamily {
    left_compress(f).0.up_set()
}

/// Tries the lifting move, then every pushing pair, returning the first strict gain.
fn sym_moves(f: &SetFamily, t: usize, p: &Rat) -> Option<SetFamily> {
    let base = measure(f, p);
    if let Ok(g) = sym3_transform(f, t, None) {
        if measure(&g, p) > base {
            return Some(g);
        }
    }
    let sd = symmetry_data(f).ok()?;
    let l = sd.sym_extent;
    for a in 0..=l + t {
        let b = l + t - a;
        if a >= b {
            break;
        }
        if let Ok((f1, f2)) = sym2_transform(f, t, a, b) {
            let best = if measure(&f2, p) > measure(&f1, p) { f2 } else { f1 };
            if measure(&best, p) > base {
                return Some(best);
            }
        }
    }
    None
}

/// Best non-losing extent-removal move, if any pair applies.
fn gs2_step(f: &SetFamily, t: usize, p: &Rat) -> Option<SetFamily> {
    let gd = generating_data(f).ok()?;
    let target = gd.extent + t;
    let base = measure(f, p);
    let mut best: Option<SetFamily> = None;
    for a in 0..=target / 2 {
        let b = target - a;
        if let Ok((f1, f2)) = gs2_transform(f, t, a, b) {
            for g in [f1, f2] {
                let mg = measure(&g, p);
                if mg >= base && best.as_ref().is_none_or(|h| mg > measure(h, p)) {
                    best = Some(g);
                }
            }
        }
    }
    best
}

/// Produces a t-intersecting family on the same points with strictly larger
/// measure, following the extend / lift / collapse route. `None` when the
/// preconditions fail or the route yields no strict gain.
pub fn sym3plus_improve(f: &SetFamily, t: usize, p: &Rat) -> Option<SetFamily> {
    let gd = check_surgery_input(f, t).ok()?;
    let sd = symmetry_data(f).ok()?;
    let n = f.n();
    let (m, l) = (gd.extent, sd.sym_extent);
    if !(l < m || m < n) || !(n + t).is_multiple_of(2) {
        return None;
    }
    if *p <= sym3_threshold(l, t) || *p > rat(1, 2) {
        return None;
    }
    let base = measure(f, p);
    let out = if l < m && m == n {
        let lifted = sym_moves(&f.extend_free(), t, p)?;
        let mut h = normalize(&lifted);
        // The extended ground set has odd n + 1 + t, so the removal move applies
        // until the last point is no longer relevant.
        let mut rounds = 0;
        while generating_data(&h).ok()?.extent > n {
            h = normalize(&gs2_step(&h, t, p)?);
            rounds += 1;
            if rounds > 1 << 12 {
                return None;
            }
        }
        h.restrict_last()
    } else if l == m && m + 1 == n {
        gs2_step(f, t, p)?
    } else {
        sym_moves(f, t, p)?
    };
    (is_nontrivial(&out) && out.is_t_intersecting(t) && measure(&out, p) > base).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::frankl;
    use crate::generating::tests::compressed_family;
    use num::traits::One;
    use proptest::prelude::*;

    #[test]
    fn frankl_is_symmetric_within_support() {
        let f = frankl(6, 2, 1).unwrap();
        let sd = symmetry_data(&f).unwrap();
        assert_eq!(sd.sym_extent, 4);
        // Exactly the sets with three points of [4] and without point 5 block it.
        assert_eq!(sd.slices.keys().copied().collect::<Vec<_>>(), vec![3]);
        assert_eq!(sd.slice(3), SetFamily::from_sets(6, &[&[], &[6]]));
        assert_eq!(symmetry_data(&frankl(4, 2, 1).unwrap()).unwrap().sym_extent, 4);
        let full = symmetry_data(&SetFamily::full(4)).unwrap();
        assert_eq!(full.sym_extent, 4);
        assert!(full.boundary.is_empty());
    }

    #[test]
    fn star_boundary() {
        let star = SetFamily::from_sets(3, &[&[1], &[1, 2], &[1, 3], &[1, 2, 3]]);
        let sd = symmetry_data(&star).unwrap();
        assert_eq!(sd.sym_extent, 1);
        // Sets with 1 but not 2, whose swap 1 -> 2 leaves the star.
        assert_eq!(sd.boundary, SetFamily::from_sets(3, &[&[1], &[1, 3]]));
        assert_eq!(sd.slice(1), SetFamily::from_sets(3, &[&[], &[3]]));
    }

    #[test]
    fn sym_errors() {
        let star3 = SetFamily::from_sets(3, &[&[3], &[1, 3], &[2, 3], &[1, 2, 3]]);
        assert!(symmetry_data(&star3).is_err());
        let f = frankl(4, 2, 1).unwrap();
        assert_eq!(sym2_transform(&f, 2, 1, 3), Err(crate::Error::Precondition(Violation::FullySymmetric)));
        // Extent equals n and the family is symmetric on all of it.
        assert_eq!(sym3_transform(&f, 2, None), Err(crate::Error::Precondition(Violation::NoAdmissiblePoint)));
        let g = frankl(4, 2, 0).unwrap();
        assert_eq!(sym3_transform(&g, 1, None), Err(crate::Error::Precondition(Violation::OddSum)));
    }

    #[test]
    fn threshold_at_window_start() {
        for t in 1..5 {
            for r in 1..5 {
                let l = t + 2 * r - 2;
                assert_eq!(sym3_threshold(l, t), rat(r as i64, (t + 2 * r - 1) as i64));
            }
        }
    }

    #[test]
    fn improvement_routes() {
        let p = rat(2, 5);
        // Symmetric on its extent, two spare points: lift directly.
        let f = frankl(4, 2, 0).unwrap();
        let g = sym3plus_improve(&f, 2, &p).unwrap();
        assert!(g.is_t_intersecting(2) && measure(&g, &p) > measure(&f, &p));
        // Extent is the whole ground set: extend, lift, collapse.
        let h = SetFamily::from_sets(4, &[&[1, 2, 3], &[1, 2, 4]]).up_set();
        let sd = symmetry_data(&h).unwrap();
        assert_eq!((sd.sym_extent, generating_data(&h).unwrap().extent), (2, 4));
        let g = sym3plus_improve(&h, 2, &p).unwrap();
        assert_eq!(g.n(), 4);
        assert!(g.is_t_intersecting(2) && measure(&g, &p) > measure(&h, &p));
        // Outside the window nothing is returned.
        assert!(sym3plus_improve(&f, 2, &rat(3, 5)).is_none());
        assert!(sym3plus_improve(&f, 2, &rat(1, 4)).is_none());
    }

    proptest! {
        #[test]
        fn boundary_decomposes_into_slices(order in proptest::collection::vec(any::<u32>(), 1..40), n in 2usize..7, t in 1usize..3) {
            let f = compressed_family(n, t, &order);
            prop_assume!(is_nontrivial(&f));
            let sd = symmetry_data(&f).unwrap();
            let l = sd.sym_extent;
            prop_assert!(l <= generating_data(&f).unwrap().extent);
            let mut rebuilt = SetFamily::empty(n);
            for (&a, x) in &sd.slices {
                rebuilt = rebuilt.union(&product(n, prefix(l), a, x));
            }
            prop_assert_eq!(&rebuilt, &sd.boundary);
            let members = sd.boundary.members();
            for &x in &members {
                for &y in &members {
                    if (x & y).count_ones() as usize == t {
                        let sizes = (x & prefix(l)).count_ones() + (y & prefix(l)).count_ones();
                        prop_assert_eq!(sizes as usize, l + t);
                    }
                }
            }
        }

        #[test]
        fn sym2_identity(order in proptest::collection::vec(any::<u32>(), 1..40), n in 2usize..7, t in 1usize..4, k in 1i64..20) {
            let f = compressed_family(n, t, &order);
            prop_assume!(is_nontrivial(&f));
            let sd = symmetry_data(&f).unwrap();
            let l = sd.sym_extent;
            prop_assume!(l < n);
            let p = rat(k, 20);
            for a in 0..=l + t {
                let b = l + t - a;
                if a >= b || (sd.slice(a).is_empty() && sd.slice(b).is_empty()) {
                    continue;
                }
                let (f1, f2) = sym2_transform(&f, t, a, b).unwrap();
                prop_assert!(f1.is_t_intersecting(t) && f2.is_t_intersecting(t));
                let (ma, mb) = (slice_measure(&f, &sd, a, &p), slice_measure(&f, &sd, b, &p));
                let lhs = rat(l as i64 - a as i64 + 1, 1) * measure(&f1, &p)
                    + rat(l as i64 - b as i64 + 1, 1) * measure(&f2, &p);
                let rhs = rat(l as i64 - t as i64 + 2, 1) * measure(&f, &p)
                    + rat(t as i64 - 1, 1) * (ma + mb);
                prop_assert_eq!(lhs, rhs);
                if t > 1 {
                    prop_assert!(measure(&f1, &p).max(measure(&f2, &p)) > measure(&f, &p));
                }
            }
        }

        #[test]
        fn sym3_identity(order in proptest::collection::vec(any::<u32>(), 1..40), n in 3usize..8, t in 1usize..3, k in 1i64..20) {
            let f = compressed_family(n, t, &order);
            prop_assume!(is_nontrivial(&f));
            let Ok(g) = sym3_transform(&f, t, None) else { return Ok(()); };
            prop_assert!(g.is_t_intersecting(t));
            let sd = symmetry_data(&f).unwrap();
            let l = sd.sym_extent;
            let a = (l + t) / 2;
            let p = rat(k, 20);
            let ma = slice_measure(&f, &sd, a, &p);
            let coeff = (rat(a as i64, 1) - (Rat::one() - &p) * rat(l as i64 + 1, 1)) / rat((l + 1 - a) as i64, 1);
            prop_assert_eq!(measure(&g, &p), measure(&f, &p) + coeff * &ma);
            prop_assert_eq!(measure(&g, &p) > measure(&f, &p), p > sym3_threshold(l, t));
        }

        #[test]
        fn sym3plus_strictly_improves(order in proptest::collection::vec(any::<u32>(), 1..40), n in 2usize..7, t in 1usize..4, k in 1i64..=10) {
            let f = compressed_family(n, t, &order);
            prop_assume!(is_nontrivial(&f));
            let p = rat(k, 20);
            if let Some(g) = sym3plus_improve(&f, t, &p) {
                prop_assert_eq!(g.n(), n);
                prop_assert!(g.is_t_intersecting(t));
                prop_assert!(measure(&g, &p) > measure(&f, &p));
            }
        }
    }
}
