//! Shifting operators: single-point shifts, left compression and
//! `(s, s+1)`-stabilisation.

use crate::error::{invalid, require, Result, Violation};
use crate::family::{bit, SetFamily};

/// Replaces point `i` by point `j` in every member where that is possible,
/// i.e. where the member contains `i`, misses `j`, and the image is new.
pub fn shift_ij(f: &SetFamily, i: usize, j: usize) -> Result<SetFamily> {
    let n = f.n();
    if i == 0 || j == 0 || i > n || j > n || i == j {
        return Err(invalid(format!("shift needs distinct points in [1, {n}], got {i}, {j}")));
    }
    Ok(shift_masks(f, bit(i), bit(j)))
}

/// Replaces `a` by `b` in members that contain `a`, avoid `b`, and whose image is absent.
pub fn shift_ab(f: &SetFamily, a: u32, b: u32) -> Result<SetFamily> {
    if a & b != 0 {
        return Err(invalid("shift sets must be disjoint"));
    }
    if a >= f.universe() || b >= f.universe() {
        return Err(invalid("shift sets outside the ground set"));
    }
    Ok(shift_masks(f, a, b))
}

pub(crate) fn shift_masks(f: &SetFamily, a: u32, b: u32) -> SetFamily {
    let mut out = f.clone();
    for m in f.iter() {
        if m & a == a && m & b == 0 {
            let img = (m & !a) | b;
            if !f.contains(img) {
                out.remove(m);
                out.insert(img);
            }
        }
    }
    out
}

pub(crate) fn shift_changes(f: &SetFamily, a: u32, b: u32) -> bool {
    // Walk supersets of `a` avoiding `b`.
    let free = f.full_mask() & !(a | b);
    let mut sub = free;
    loop {
        let m = sub | a;
        if f.contains(m) && !f.contains((m & !a) | b) {
            return true;
        }
        if sub == 0 {
            return false;
        }
        sub = (sub - 1) & free;
    }
}

/// Sum over members of the sum of their points; drops strictly under a shift
/// towards smaller points that changes the family.
pub fn potential(f: &SetFamily) -> u64 {
    f.iter().map(|m| (0..32).filter(|b| m >> b & 1 == 1).map(|b| b as u64 + 1).sum::<u64>()).sum()
}

pub fn is_left_compressed(f: &SetFamily) -> bool {
    let n = f.n();
    (1..=n).all(|j| (j + 1..=n).all(|i| !shift_changes(f, bit(i), bit(j))))
}

/// Applies shifts `i -> j` (`j < i`) in lexicographic order of `(j, i)`,
/// restarting after every shift that changes the family.
pub fn left_compress(f: &SetFamily) -> (SetFamily, Vec<(usize, usize)>) {
    let n = f.n();
    let mut cur = f.clone();
    let mut trace = Vec::new();
    'restart: loop {
        for j in 1..=n {
            for i in j + 1..=n {
                if shift_changes(&cur, bit(i), bit(j)) {
                    cur = shift_masks(&cur, bit(i), bit(j));
                    trace.push((i, j));
                    continue 'restart;
                }
            }
        }
        return (cur, trace);
    }
}

pub fn format_trace(trace: &[(usize, usize)]) -> String {
    trace.iter().map(|(i, j)| format!("{i} {j}\n")).collect()
}

fn subsets_of_size(universe: u32, k: usize) -> impl Iterator<Item = u32> {
    (0..=universe).filter(move |m| m & !universe == 0 && m.count_ones() as usize == k)
}

/// First pair `(A, B)` with `|A| = s`, `|B| = s + 1` whose shift changes `f`,
/// in bitmask order of `A` and then `B`.
fn first_unstable_pair(f: &SetFamily, s: usize) -> Option<(u32, u32)> {
    let full = f.full_mask();
    for a in subsets_of_size(full, s) {
        for b in subsets_of_size(full & !a, s + 1) {
            if shift_changes(f, a, b) {
                return Some((a, b));
            }
        }
    }
    None
}

pub fn is_stable(f: &SetFamily, s: usize) -> bool {
    2 * s + 1 > f.n() || first_unstable_pair(f, s).is_none()
}

pub fn is_fully_stable(f: &SetFamily) -> bool {
    (0..=f.n()).all(|s| is_stable(f, s))
}

/// Repeatedly applies the first destabilising `(A, B)` shift with the smallest
/// `|A|` until the family is `(s, s+1)`-stable for every `s`.
pub fn stabilize(f: &SetFamily, t: usize) -> Result<SetFamily> {
    require(f.is_t_intersecting(t), Violation::NotTIntersecting)?;
    let n = f.n();
    let mut cur = f.clone();
    'pass: loop {
        for s in 0..=n {
            if 2 * s + 1 > n {
                break;
            }
            if let Some((a, b)) = first_unstable_pair(&cur, s) {
                cur = shift_masks(&cur, a, b);
                continue 'pass;
            }
        }
        debug_assert!(cur.is_t_intersecting(t));
        return Ok(cur);
    }
}
