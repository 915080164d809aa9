//! Exact maximum-weight clique search on at most 128 vertices, and the
//! brute-force extremal values it yields for small set systems.
//!
//! Cliques of the compatibility graph are independent sets of its complement
//! (the conflict graph). The solver branches on a vertex of maximum conflict
//! degree, splits the remaining conflict graph into connected components, and
//! memoizes on the remaining vertex set. Components multiply optimum counts,
//! which keeps instances with astronomically many optima (e.g. one vector from
//! each antipodal pair) cheap.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::family::SetFamily;
use crate::rat::{binomial_u128, check_probability, Rat};

pub const MAX_VERTICES: usize = 128;
pub const MAX_SET_POINTS: usize = 6;
pub const MAX_ENUM_POINTS: usize = 5;

/// Vertex weights plus a symmetric compatibility relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    pub weights: Vec<Rat>,
    /// Bit `v` of `adjacency[u]` is set iff `u` and `v` may share a clique.
    pub adjacency: Vec<u128>,
}

impl CliqueInstance {
    pub fn new(weights: Vec<Rat>, compatible: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let k = weights.len();
        if k > MAX_VERTICES {
            return Err(Error::TooLarge(format!("{k} vertices, limit {MAX_VERTICES}")));
        }
        if weights.iter().any(|w| *w <= Rat::zero()) {
            return Err(invalid("clique weights must be positive"));
        }
        let adjacency =
            (0..k).map(|u| (0..k).filter(|&v| v != u && compatible(u, v)).fold(0u128, |m, v| m | 1 << v)).collect();
        Ok(CliqueInstance { weights, adjacency })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueOptimum {
    pub weight: Rat,
    /// Number of maximum-weight cliques.
    pub count: u128,
}

struct Solver {
    conflict: Vec<u128>,
    weight: Vec<u128>,
    memo: HashMap<u128, (u128, u128)>,
}

impl Solver {
    fn new(inst: &CliqueInstance) -> Result<(Self, BigInt)> {
        let k = inst.len();
        let scale = inst.weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let weight = inst
            .weights
            .iter()
            .map(|w| (w.numer() * (&scale / w.denom())).to_u128())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::TooLarge("weights do not fit the integer solver".into()))?;
        let total = weight.iter().try_fold(0u128, |a, &w| a.checked_add(w));
        if total.is_none() || total.unwrap() > u128::MAX / 2 {
            return Err(Error::TooLarge("weights do not fit the integer solver".into()));
        }
        let all = if k == 128 { u128::MAX } else { (1u128 << k) - 1 };
        let conflict = inst.adjacency.iter().enumerate().map(|(u, a)| all & !a & !(1 << u)).collect();
        Ok((Solver { conflict, weight, memo: HashMap::new() }, scale))
    }

    fn component(&self, mask: u128) -> u128 {
        let mut comp = mask & mask.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.conflict[v] & mask;
            }
            frontier = next & !comp;
            comp |= next;
        }
        comp
    }

    fn pivot(&self, mask: u128) -> (usize, u32) {
        let mut best = (0, 0);
        let mut first = true;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let d = (self.conflict[v] & mask).count_ones();
            if first || d > best.1 {
                best = (v, d);
                first = false;
            }
        }
        best
    }

    fn solve(&mut self, mask: u128) -> (u128, u128) {
        if mask == 0 {
            return (0, 1);
        }
        if let Some(&r) = self.memo.get(&mask) {
            return r;
        }
        let comp = self.component(mask);
        let r = if comp != mask {
            let (w1, c1) = self.solve(comp);
            let (w2, c2) = self.solve(mask & !comp);
            (w1 + w2, c1 * c2)
        } else {
            let (v, deg) = self.pivot(mask);
            let bv = 1u128 << v;
            let (wi, ci) = self.solve(mask & !self.conflict[v] & !bv);
            let inc = (wi + self.weight[v], ci);
            if deg == 0 {
                inc
            } else {
                let exc = self.solve(mask & !bv);
                match inc.0.cmp(&exc.0) {
                    std::cmp::Ordering::Greater => inc,
                    std::cmp::Ordering::Less => exc,
                    std::cmp::Ordering::Equal => (inc.0, inc.1 + exc.1),
                }
            }
        };
        self.memo.insert(mask, r);
        r
    }

    fn enumerate(&mut self, mask: u128, limit: usize, out: &mut Vec<u128>, acc: u128) -> bool {
        if mask == 0 {
            out.push(acc);
            return out.len() <= limit;
        }
        let best = self.solve(mask).0;
        let (v, _) = self.pivot(mask);
        let bv = 1u128 << v;
        let inc = mask & !self.conflict[v] & !bv;
        if self.solve(inc).0 + self.weight[v] == best && !self.enumerate(inc, limit, out, acc | bv) {
            return false;
        }
        let exc = mask & !bv;
        if self.solve(exc).0 == best {
            return self.enumerate(exc, limit, out, acc);
        }
        true
    }
}

fn full_mask(k: usize) -> u128 {
    if k == 128 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    }
}

pub fn max_weight_clique(inst: &CliqueInstance) -> Result<CliqueOptimum> {
    let (mut s, scale) = Solver::new(inst)?;
    let (w, count) = s.solve(full_mask(inst.len()));
    Ok(CliqueOptimum { weight: Rat::new(BigInt::from(w), scale), count })
}

/// Every maximum-weight clique as a vertex bitmask, ascending. Fails if there
/// are more than `limit`.
pub fn enumerate_max_cliques(inst: &CliqueInstance, limit: usize) -> Result<Vec<u128>> {
    let (mut s, _) = Solver::new(inst)?;
    let mut out = Vec::new();
    if !s.enumerate(full_mask(inst.len()), limit, &mut out, 0) {
        return Err(Error::TooLarge(format!("more than {limit} optimal cliques")));
    }
    out.sort_unstable();
    Ok(out)
}

/// One maximum-weight clique, the first one the enumeration order reaches.
pub fn witness_max_clique(inst: &CliqueInstance) -> Result<u128> {
    let (mut s, _) = Solver::new(inst)?;
    let mut mask = full_mask(inst.len());
    let mut acc = 0u128;
    while mask != 0 {
        let best = s.solve(mask).0;
        let (v, _) = s.pivot(mask);
        let bv = 1u128 << v;
        let inc = mask & !s.conflict[v] & !bv;
        if s.solve(inc).0 + s.weight[v] == best {
            acc |= bv;
            mask = inc;
        } else {
            mask &= !bv;
        }
    }
    Ok(acc)
}

fn t_intersecting_instance(n: usize, t: usize, p: &Rat) -> Result<(CliqueInstance, Vec<u32>)> {
    if t == 0 || t > n {
        return Err(invalid(format!("need 1 <= t <= n, got t = {t}, n = {n}")));
    }
    check_probability(p)?;
    let verts: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() as usize >= t).collect();
    let w = crate::rat::level_weights(p, n);
    let weights = verts.iter().map(|m| w[m.count_ones() as usize].clone()).collect();
    let inst = CliqueInstance::new(weights, |u, v| (verts[u] & verts[v]).count_ones() as usize >= t)?;
    Ok((inst, verts))
}

/// Maximum measure of a t-intersecting family on `n <= 6` points, and the
/// number of families attaining it.
pub fn max_weight_t_intersecting(n: usize, t: usize, p: &Rat) -> Result<(Rat, u128)> {
    if n > MAX_SET_POINTS {
        return Err(Error::TooLarge(format!("n = {n}, limit {MAX_SET_POINTS}")));
    }
    let (inst, _) = t_intersecting_instance(n, t, p)?;
    let opt = max_weight_clique(&inst)?;
    Ok((opt.weight, opt.count))
}

/// All maximum-measure t-intersecting families on `n <= 5` points, ordered by
/// indicator bitmask.
pub fn enumerate_optimal(n: usize, t: usize, p: &Rat) -> Result<Vec<SetFamily>> {
    if n > MAX_ENUM_POINTS {
        return Err(Error::TooLarge(format!("n = {n}, limit {MAX_ENUM_POINTS}")));
    }
    let (inst, verts) = t_intersecting_instance(n, t, p)?;
    let cliques = enumerate_max_cliques(&inst, 1 << 20)?;
    let mut fams: Vec<SetFamily> = cliques
        .iter()
        .map(|&c| SetFamily::from_masks(n, (0..verts.len()).filter(|&v| c >> v & 1 == 1).map(|v| verts[v])))
        .collect();
    fams.sort_by_key(|f| f.indicator());
    Ok(fams)
}

/// Largest t-intersecting subfamily of `C([n], k)` and the number of maximum ones.
/// `k`-subsets of `[n]` in increasing mask order (Gosper's successor step).
fn k_subsets(n: usize, k: usize) -> Vec<u64> {
    let limit = 1u128 << n;
    let mut out = Vec::new();
    let mut m: u128 = (1u128 << k) - 1;
    while m < limit {
        out.push(m as u64);
        if m == 0 {
            break;
        }
        let low = m & m.wrapping_neg();
        let ripple = m + low;
        m = (((ripple ^ m) >> 2) / low) | ripple;
    }
    out
}

pub fn max_uniform_t_intersecting(n: usize, k: usize, t: usize) -> Result<(u64, u128)> {
    if k > n || n > 64 {
        return Err(invalid(format!("need k <= n, got n = {n}, k = {k}")));
    }
    if binomial_u128(n, k) > 64 {
        return Err(Error::TooLarge(format!("C({n},{k}) exceeds 64 vertices")));
    }
    let verts = k_subsets(n, k);
    if k < t {
        return Ok((0, 1));
    }
    let inst =
        CliqueInstance::new(vec![Rat::one(); verts.len()], |u, v| (verts[u] & verts[v]).count_ones() as usize >= t)?;
    let opt = max_weight_clique(&inst)?;
    Ok((opt.weight.to_integer().to_u64().unwrap_or(0), opt.count))
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i + 1);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Smallest indicator over all relabellings of the points.
pub fn canonical_form(f: &SetFamily, perms: &[Vec<usize>]) -> u64 {
    perms.iter().map(|p| f.permute(p).indicator()).min().unwrap_or(0)
}

/// Groups families into classes under point permutations; classes and their
/// members keep the input order.
pub fn equivalence_classes(fams: &[SetFamily]) -> Vec<Vec<SetFamily>> {
    let Some(first) = fams.first() else { return Vec::new() };
    let perms = permutations(first.n());
    let mut keys: Vec<u64> = Vec::new();
    let mut classes: Vec<Vec<SetFamily>> = Vec::new();
    for f in fams {
        let key = canonical_form(f, &perms);
        match keys.iter().position(|&k| k == key) {
            Some(i) => classes[i].push(f.clone()),
            None => {
                keys.push(key);
                classes.push(vec![f.clone()]);
            }
        }
    }
    classes
}
