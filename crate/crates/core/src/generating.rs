//! Minimal members of a monotone family and the two moves that strip the
//! largest relevant point from its boundary generators.

use std::collections::BTreeMap;

use crate::error::{require, Result, Violation};
use crate::family::{bit, SetFamily};
use crate::rat::{level_weights, Rat};
use num::traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingData {
    /// Inclusion-minimal members.
    pub generators: SetFamily,
    /// Largest point appearing in a generator.
    pub extent: usize,
    /// Generators containing the extent.
    pub boundary: SetFamily,
    /// `boundary` split by member size.
    pub boundary_by_size: BTreeMap<usize, SetFamily>,
}

impl GeneratingData {
    pub fn boundary_level(&self, k: usize) -> SetFamily {
        self.boundary_by_size.get(&k).cloned().unwrap_or_else(|| SetFamily::empty(self.generators.n()))
    }
}

pub fn is_nontrivial(f: &SetFamily) -> bool {
    !f.is_empty() && !f.contains(0)
}

pub fn generating_data(f: &SetFamily) -> Result<GeneratingData> {
    require(f.is_monotone(), Violation::NotMonotone)?;
    require(is_nontrivial(f), Violation::Trivial)?;
    let n = f.n();
    let generators =
        SetFamily::from_masks(n, f.iter().filter(|&m| (0..n).all(|b| m >> b & 1 == 0 || !f.contains(m & !(1 << b)))));
    let extent = generators.max_point();
    let top = bit(extent);
    let boundary = SetFamily::from_masks(n, generators.iter().filter(|m| m & top != 0));
    let mut boundary_by_size = BTreeMap::new();
    for m in boundary.iter() {
        boundary_by_size.entry(m.count_ones() as usize).or_insert_with(|| SetFamily::empty(n)).insert(m);
    }
    Ok(GeneratingData { generators, extent, boundary, boundary_by_size })
}

/// Measure of the cylinder `{S : S ∩ [m] ∈ g}`, i.e. of `g` viewed on the
/// extent's own ground set. Removing a boundary generator from a family on
/// more than `m` points removes its whole cylinder, so this is the weight the
/// surgery identities need.
pub fn boundary_measure(g: &SetFamily, extent: usize, p: &Rat) -> Rat {
    let w = level_weights(p, extent);
    g.iter().fold(Rat::zero(), |acc, s| acc + &w[s.count_ones() as usize])
}

/// Shared preconditions of every surgery move.
pub(crate) fn check_surgery_input(f: &SetFamily, t: usize) -> Result<GeneratingData> {
    let gd = generating_data(f)?;
    require(f.is_left_compressed(), Violation::NotLeftCompressed)?;
    require(f.is_t_intersecting(t), Violation::NotTIntersecting)?;
    Ok(gd)
}

fn drop_point(f: &SetFamily, point: usize) -> impl Iterator<Item = u32> + '_ {
    let b = bit(point);
    f.iter().map(move |m| m & !b)
}

/// For `a != b` with `a + b = m + t`, removes both boundary slices and adds back
/// one of them with the extent deleted. Returns `(F1, F2)` where `F1` keeps the
/// `b` slice and `F2` keeps the `a` slice.
pub fn gs2_transform(f: &SetFamily, t: usize, a: usize, b: usize) -> Result<(SetFamily, SetFamily)> {
    let gd = check_surgery_input(f, t)?;
    let m = gd.extent;
    require(a != b, Violation::EqualSlices)?;
    require(a + b == m + t, Violation::SliceSum { expected: m + t, got: a + b })?;
    let ga = gd.boundary_level(a);
    let gb = gd.boundary_level(b);
    require(!ga.is_empty() || !gb.is_empty(), Violation::EmptySlices)?;
    let base = gd.generators.difference(&ga.union(&gb));
    let build = |kept: &SetFamily| {
        let mut g = base.clone();
        for s in drop_point(kept, m) {
            g.insert(s);
        }
        g.up_set()
    };
    Ok((build(&gb), build(&ga)))
}

/// For `a = (m + t) / 2`, removes the `a` slice of the boundary and adds back,
/// with the extent deleted, those of its sets that avoid point `i`.
pub fn gs3_transform(f: &SetFamily, t: usize, i: usize) -> Result<SetFamily> {
    let gd = check_surgery_input(f, t)?;
    let m = gd.extent;
    require(m > 1, Violation::ExtentTooSmall)?;
    require((m + t).is_multiple_of(2), Violation::OddSum)?;
    require(i >= 1 && i < m, Violation::PointOutOfRange(i))?;
    let a = (m + t) / 2;
    let ga = gd.boundary_level(a);
    require(!ga.is_empty(), Violation::EmptySlices)?;
    let mut g = gd.generators.difference(&ga);
    let avoiding = SetFamily::from_masks(f.n(), ga.iter().filter(|s| s & bit(i) == 0));
    for s in drop_point(&avoiding, m) {
        g.insert(s);
    }
    Ok(g.up_set())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::family::frankl;
    use crate::rat::rat;
    use crate::shifting::left_compress;
    use num::traits::One;
    use proptest::prelude::*;

    fn mu(f: &SetFamily, p: &Rat) -> Rat {
        f.measure(p).unwrap()
    }

    #[test]
    fn majority_example() {
        let f = frankl(3, 1, 1).unwrap();
        let gd = generating_data(&f).unwrap();
        assert_eq!(gd.extent, 3);
        assert_eq!(gd.boundary_level(2), SetFamily::from_sets(3, &[&[1, 3], &[2, 3]]));
        let f1 = gs3_transform(&f, 1, 1).unwrap();
        assert_eq!(f1, SetFamily::from_sets(3, &[&[2], &[1, 2], &[2, 3], &[1, 2, 3]]));
        let p = rat(1, 3);
        assert_eq!(mu(&f1, &p), p);
        assert!(mu(&f1, &p) > mu(&f, &p));
        assert_eq!(gs3_transform(&f, 1, 3), Err(crate::Error::Precondition(Violation::PointOutOfRange(3))));
    }

    #[test]
    fn gs2_on_frankl_family() {
        // F_{2,1} on 5 points: extent 4, boundary sets of size 3, so a = 3 is forced.
        let f = frankl(5, 2, 1).unwrap();
        let gd = generating_data(&f).unwrap();
        assert_eq!(gd.extent, 4);
        let err = gs2_transform(&f, 2, 2, 4).unwrap_err();
        assert_eq!(err, crate::Error::Precondition(Violation::EmptySlices));
        assert!(gs2_transform(&f, 2, 3, 3).is_err());
        assert!(gs2_transform(&f, 2, 1, 4).is_err());
    }

    #[test]
    fn gs2_rejects_bad_input() {
        let not_mono = SetFamily::from_sets(3, &[&[1]]);
        assert_eq!(gs2_transform(&not_mono, 1, 1, 2), Err(crate::Error::Precondition(Violation::NotMonotone)));
        let trivial = SetFamily::full(3);
        assert_eq!(generating_data(&trivial), Err(crate::Error::Precondition(Violation::Trivial)));
        let star3 = SetFamily::from_sets(3, &[&[3], &[1, 3], &[2, 3], &[1, 2, 3]]);
        assert_eq!(gs2_transform(&star3, 1, 1, 2), Err(crate::Error::Precondition(Violation::NotLeftCompressed)));
    }

    /// Random monotone left-compressed t-intersecting family from a bit pattern.
    pub(crate) fn compressed_family(n: usize, t: usize, order: &[u32]) -> SetFamily {
        let mut f = SetFamily::empty(n);
        for &m in order {
            let m = m & ((1 << n) - 1);
            if (m.count_ones() as usize) >= t && f.iter().all(|x| (x & m).count_ones() as usize >= t) {
                f.insert(m);
            }
        }
        left_compress(&f).0.up_set()
    }

    proptest! {
        #[test]
        fn generator_closure_identities(order in proptest::collection::vec(any::<u32>(), 1..40), n in 2usize..7, t in 1usize..3) {
            let f = compressed_family(n, t, &order);
            prop_assume!(is_nontrivial(&f));
            let gd = generating_data(&f).unwrap();
            prop_assert_eq!(gd.generators.up_set(), f.clone());
            // Removing boundary generators removes exactly their cylinders; adding
            // them back without the extent adds exactly those cylinders.
            let inside = (1u32 << gd.extent) - 1;
            for g in gd.boundary_by_size.values() {
                let cyl = |h: &SetFamily| SetFamily::from_masks(n, (0..1u32 << n).filter(|x| h.contains(x & inside)));
                prop_assert_eq!(gd.generators.difference(g).up_set(), f.difference(&cyl(g)));
                let mut added = gd.generators.difference(g);
                let mut dropped = SetFamily::empty(n);
                for s in drop_point(g, gd.extent) {
                    added.insert(s);
                    dropped.insert(s);
                }
                prop_assert_eq!(added.up_set(), f.union(&cyl(&dropped)));
            }
        }

        #[test]
        fn gs2_identities(order in proptest::collection::vec(any::<u32>(), 1..40), n in 2usize..7, t in 1usize..3, k in 1i64..20) {
            let f = compressed_family(n, t, &order);
            prop_assume!(is_nontrivial(&f));
            let gd = generating_data(&f).unwrap();
            let p = rat(k, 20);
            let q = (Rat::one() - &p) / &p;
            for a in 0..=gd.extent + t {
                let b = gd.extent + t - a;
                if a >= b || (gd.boundary_level(a).is_empty() && gd.boundary_level(b).is_empty()) {
                    continue;
                }
                let (f1, f2) = gs2_transform(&f, t, a, b).unwrap();
                prop_assert!(f1.is_t_intersecting(t) && f2.is_t_intersecting(t));
                let m = gd.extent;
                let (ma, mb) = (boundary_measure(&gd.boundary_level(a), m, &p), boundary_measure(&gd.boundary_level(b), m, &p));
                prop_assert_eq!(mu(&f1, &p), mu(&f, &p) - &ma + &q * &mb);
                prop_assert_eq!(mu(&f2, &p), mu(&f, &p) - &mb + &q * &ma);
                if p < rat(1, 2) {
                    prop_assert!(mu(&f1, &p).max(mu(&f2, &p)) > mu(&f, &p));
                }
            }
        }

        #[test]
        fn gs3_identities(order in proptest::collection::vec(any::<u32>(), 1..40), n in 2usize..7, t in 1usize..3, k in 1i64..20) {
            let f = compressed_family(n, t, &order);
            prop_assume!(is_nontrivial(&f));
            let gd = generating_data(&f).unwrap();
            let m = gd.extent;
            let a = (m + t) / 2;
            prop_assume!(m > 1 && (m + t).is_multiple_of(2) && !gd.boundary_level(a).is_empty());
            let p = rat(k, 20);
            let ga = gd.boundary_level(a);
            let base = mu(&f, &p);
            let mut total = Rat::from_integer(0.into());
            for i in 1..m {
                let fi = gs3_transform(&f, t, i).unwrap();
                prop_assert!(fi.is_t_intersecting(t));
                let gai = SetFamily::from_masks(n, ga.iter().filter(|s| s & bit(i) != 0));
                let want = &base + (Rat::one() - &p) / &p * boundary_measure(&ga, m, &p) - boundary_measure(&gai, m, &p) / &p;
                prop_assert_eq!(mu(&fi, &p), want);
                total += mu(&fi, &p);
            }
            let coeff = (Rat::one() - &p) / &p - rat((a - 1) as i64, 1) / (&p * rat((m - 1) as i64, 1));
            prop_assert_eq!(total / rat((m - 1) as i64, 1), &base + coeff * boundary_measure(&ga, m, &p));
        }
    }
}
