//! Families of vectors in `Z_m^n × {0,1}^l`, agreement up to a circular
//! window, the window correspondence with set families, and the
//! coordinate-by-coordinate reduction that turns an agreeing family into a
//! t-intersecting set family of no smaller measure.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, require, Error, Result, Violation};
use crate::family::{SetFamily, MAX_POINTS as MAX_SET_POINTS};
use crate::oracle::{enumerate_max_cliques, max_weight_clique, witness_max_clique, CliqueInstance};
use crate::rat::{rat, Rat};

/// Cap on `m^n · 2^l`.
pub const MAX_HAMMING_POINTS: usize = 1 << 20;
/// Cap on `m^n` for the exhaustive oracle.
pub const MAX_ORACLE_POINTS: usize = 100;
/// Cap on the exhaustive half-integral search.
pub const MAX_EXHAUSTIVE_VERTICES: usize = 20;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HammingFamily {
    m: usize,
    n: usize,
    binary_count: usize,
    members: Vec<bool>,
}

fn point_count(m: usize, n: usize, binary_count: usize) -> Option<usize> {
    let circ = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(m))?;
    let total = circ.checked_mul(1usize.checked_shl(binary_count as u32)?)?;
    (total <= MAX_HAMMING_POINTS).then_some(total)
}

impl HammingFamily {
    pub fn empty(m: usize, n: usize, binary_count: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("modulus must be positive"));
        }
        let size = point_count(m, n, binary_count)
            .ok_or_else(|| Error::TooLarge(format!("{m}^{n} * 2^{binary_count} points")))?;
        Ok(HammingFamily { m, n, binary_count, members: vec![false; size] })
    }

    pub fn full(m: usize, n: usize, binary_count: usize) -> Result<Self> {
        let mut f = HammingFamily::empty(m, n, binary_count)?;
        f.members.iter_mut().for_each(|b| *b = true);
        Ok(f)
    }

    pub fn from_points(m: usize, n: usize, binary_count: usize, points: &[Vec<usize>]) -> Result<Self> {
        let mut f = HammingFamily::empty(m, n, binary_count)?;
        for p in points {
            f.insert(p)?;
        }
        Ok(f)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn binary_count(&self) -> usize {
        self.binary_count
    }

    /// Number of points of the ambient space.
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn dims(&self) -> usize {
        self.n + self.binary_count
    }

    /// Mixed-radix index: circular coordinates first and most significant.
    pub fn encode(&self, point: &[usize]) -> Result<usize> {
        if point.len() != self.dims() {
            return Err(invalid(format!("point has {} coordinates, expected {}", point.len(), self.dims())));
        }
        let mut idx = 0;
        for (i, &x) in point.iter().enumerate() {
            let radix = if i < self.n { self.m } else { 2 };
            if x >= radix {
                return Err(invalid(format!("coordinate {} = {x} out of range", i + 1)));
            }
            idx = idx * radix + x;
        }
        Ok(idx)
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims()];
        for i in (0..self.dims()).rev() {
            let radix = if i < self.n { self.m } else { 2 };
            out[i] = idx % radix;
            idx /= radix;
        }
        out
    }

    pub fn contains(&self, point: &[usize]) -> bool {
        self.encode(point).map(|i| self.members[i]).unwrap_or(false)
    }

    pub fn insert(&mut self, point: &[usize]) -> Result<()> {
        let i = self.encode(point)?;
        self.members[i] = true;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    /// Members in index order.
    pub fn points(&self) -> Vec<Vec<usize>> {
        self.indices().map(|i| self.decode(i)).collect()
    }
}

impl fmt::Debug for HammingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.m <= 10 { "" } else { "." };
        let pts: Vec<String> =
            self.points().iter().map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)).collect();
        write!(f, "Z{}^{}x2^{}{{{}}}", self.m, self.n, self.binary_count, pts.join(","))
    }
}

fn check_window(m: usize, s: usize) -> Result<()> {
    if s == 0 || 2 * s > m {
        return Err(invalid(format!("need 1 <= s <= m/2, got s = {s}, m = {m}")));
    }
    Ok(())
}

/// Coordinates on which `x` and `y` agree: circular ones within distance
/// `s - 1`, binary ones when both are 1.
pub fn agreements(m: usize, n: usize, s: usize, x: &[usize], y: &[usize]) -> usize {
    let circ = (0..n)
        .filter(|&i| {
            let d = (x[i] + m - y[i]) % m;
            d < s || m - d < s
        })
        .count();
    circ + (n..x.len()).filter(|&i| x[i] == 1 && y[i] == 1).count()
}

/// Product mass of one point: uniform on circular coordinates, `s/m`-biased
/// on binary ones.
fn point_mass(m: usize, n: usize, s: usize, point: &[usize]) -> Rat {
    let p = rat(s as i64, m as i64);
    let q = Rat::one() - &p;
    let mut w = rat(1, 1) / Rat::from_integer(BigInt::from(m).pow(n as u32));
    for &b in &point[n..] {
        w *= if b == 1 { &p } else { &q };
    }
    w
}

pub fn hybrid_measure(f: &HammingFamily, s: usize) -> Result<Rat> {
    check_window(f.m, s)?;
    Ok(f.indices().fold(Rat::zero(), |acc, i| acc + point_mass(f.m, f.n, s, &f.decode(i))))
}

pub fn is_t_agreeing_upto_s(f: &HammingFamily, t: usize, s: usize) -> Result<bool> {
    check_window(f.m, s)?;
    let pts = f.points();
    Ok(pts.iter().enumerate().all(|(i, x)| pts[i..].iter().all(|y| agreements(f.m, f.n, s, x, y) >= t)))
}

/// Set of coordinates where `point` sits in the window `(y_i, y_i + s]`, plus
/// the binary coordinates equal to 1 (shifted past the circular ones).
pub fn sigma(point: &[usize], y: &[usize], m: usize, s: usize) -> u32 {
    let n = y.len();
    let mut mask = 0;
    for (i, &x) in point.iter().enumerate() {
        let inside = if i < n { (1..=s).contains(&((x + m - y[i]) % m)) } else { x == 1 };
        if inside {
            mask |= 1 << i;
        }
    }
    mask
}

/// Pulls a set family on `y.len() + l` points back along the window map at `y`.
pub fn sigma_pullback(g: &SetFamily, m: usize, y: &[usize], s: usize) -> Result<HammingFamily> {
    check_window(m, s)?;
    let n = y.len();
    if g.n() < n {
        return Err(invalid(format!("set family on {} points cannot cover {n} circular coordinates", g.n())));
    }
    if y.iter().any(|&v| v >= m) {
        return Err(invalid("base point outside Z_m"));
    }
    let mut f = HammingFamily::empty(m, n, g.n() - n)?;
    for i in 0..f.size() {
        if g.contains(sigma(&f.decode(i), y, m, s)) {
            f.members[i] = true;
        }
    }
    Ok(f)
}

fn all_vectors(m: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = m.pow(n as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0; n];
        for i in (0..n).rev() {
            v[i] = k % m;
            k /= m;
        }
        v
    })
}

/// Finds a base point `y` and a set family `g` with `f` equal to the
/// pullback of `g` at `y`, trying base points in index order.
pub fn is_equivalent_to_set_family(f: &HammingFamily, s: usize) -> Result<Option<(Vec<usize>, SetFamily)>> {
    check_window(f.m, s)?;
    if f.dims() > MAX_SET_POINTS {
        return Err(Error::TooLarge(format!("{} coordinates", f.dims())));
    }
    let pts: Vec<Vec<usize>> = (0..f.size()).map(|i| f.decode(i)).collect();
    for y in all_vectors(f.m, f.n) {
        let g = SetFamily::from_masks(f.dims(), f.indices().map(|i| sigma(&pts[i], &y, f.m, s)));
        if (0..f.size()).all(|i| f.members[i] == g.contains(sigma(&pts[i], &y, f.m, s))) {
            return Ok(Some((y, g)));
        }
    }
    Ok(None)
}

/// A value of a half-integral point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Half {
    Zero,
    Half,
    One,
}

impl Half {
    pub fn to_rat(self) -> Rat {
        match self {
            Half::Zero => Rat::zero(),
            Half::Half => rat(1, 2),
            Half::One => Rat::one(),
        }
    }

    fn twice(self) -> u8 {
        match self {
            Half::Zero => 0,
            Half::Half => 1,
            Half::One => 2,
        }
    }
}

/// Weighted graph for the fractional stable set program, with a solution slot.
/// A loop `(x, x)` caps `v_x` at 1/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableSetInstance {
    /// Context vector of each vertex.
    pub labels: Vec<Vec<usize>>,
    pub weights: Vec<Rat>,
    pub edges: Vec<(usize, usize)>,
    pub solution: Vec<Half>,
}

impl StableSetInstance {
    pub fn new(weights: Vec<Rat>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let k = weights.len();
        if weights.iter().any(|w| *w <= Rat::zero()) {
            return Err(invalid("stable set weights must be positive"));
        }
        if edges.iter().any(|&(u, v)| u >= k || v >= k) {
            return Err(invalid("edge endpoint out of range"));
        }
        Ok(StableSetInstance { labels: (0..k).map(|i| vec![i]).collect(), weights, edges, solution: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_feasible(&self, sol: &[Half]) -> bool {
        sol.len() == self.len() && self.edges.iter().all(|&(u, v)| sol[u].twice() + sol[v].twice() <= 2)
    }

    pub fn objective(&self, values: &[Rat]) -> Rat {
        self.weights.iter().zip(values).fold(Rat::zero(), |acc, (w, v)| acc + w * v)
    }

    pub fn half_objective(&self, sol: &[Half]) -> Rat {
        self.objective(&sol.iter().map(|h| h.to_rat()).collect::<Vec<_>>())
    }
}

struct FlowNetwork {
    head: Vec<usize>,
    cap: Vec<u128>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork { head: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    fn add(&mut self, u: usize, v: usize, c: u128) {
        self.adj[u].push(self.head.len());
        self.head.push(v);
        self.cap.push(c);
        self.adj[v].push(self.head.len());
        self.head.push(u);
        self.cap.push(0);
    }

    /// Nodes reachable from `src` in the residual graph.
    fn reachable(&self, src: usize) -> (Vec<bool>, Vec<Option<usize>>) {
        let mut seen = vec![false; self.adj.len()];
        let mut via = vec![None; self.adj.len()];
        let mut queue = VecDeque::from([src]);
        seen[src] = true;
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    via[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        (seen, via)
    }

    /// Runs shortest augmenting paths to a maximum flow and returns the
    /// source side of the minimum cut closest to the source.
    fn min_cut(&mut self, src: usize, sink: usize) -> Vec<bool> {
        loop {
            let (seen, via) = self.reachable(src);
            if !seen[sink] {
                return seen;
            }
            let mut path = Vec::new();
            let mut v = sink;
            while v != src {
                let e = via[v].expect("path edge");
                path.push(e);
                v = self.head[e ^ 1];
            }
            let push = path.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
            for e in path {
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
            }
        }
    }
}

fn integer_weights(weights: &[Rat]) -> Result<Vec<u128>> {
    let scale = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let out = weights
        .iter()
        .map(|w| (w.numer() * (&scale / w.denom())).to_u128())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::TooLarge("weights do not fit the flow solver".into()))?;
    match out.iter().try_fold(0u128, |a, &w| a.checked_add(w)) {
        Some(total) if total < u128::MAX / 4 => Ok(out),
        _ => Err(Error::TooLarge("weights do not fit the flow solver".into())),
    }
}

/// Maximises `Σ c_x v_x` over `0 <= v <= 1`, `v_x + v_y <= 1` on edges, at a
/// half-integral point. Each vertex gets a left and a right copy, every edge
/// joins left copies to right copies in both directions, and a minimum
/// weight vertex cover of that bipartite graph is read off a minimum cut.
/// Averaging the two copies of the complementary independent set gives the
/// solution.
pub fn half_integral_max(inst: &StableSetInstance) -> Result<Vec<Half>> {
    let k = inst.len();
    let c = integer_weights(&inst.weights)?;
    let inf = c.iter().sum::<u128>() + 1;
    let (src, sink) = (2 * k, 2 * k + 1);
    let mut net = FlowNetwork::new(2 * k + 2);
    for (x, &cx) in c.iter().enumerate() {
        net.add(src, x, cx);
        net.add(k + x, sink, cx);
    }
    for &(u, v) in &inst.edges {
        net.add(u, k + v, inf);
        net.add(v, k + u, inf);
    }
    let side = net.min_cut(src, sink);
    Ok((0..k)
        .map(|x| match (side[x], !side[k + x]) {
            (true, true) => Half::One,
            (false, false) => Half::Zero,
            _ => Half::Half,
        })
        .collect())
}

/// Best objective over all feasible `{0, 1/2, 1}` points, by backtracking.
pub fn exhaustive_half_integral(inst: &StableSetInstance) -> Result<Rat> {
    let k = inst.len();
    if k > MAX_EXHAUSTIVE_VERTICES {
        return Err(Error::TooLarge(format!("{k} vertices, limit {MAX_EXHAUSTIVE_VERTICES}")));
    }
    let c = integer_weights(&inst.weights)?;
    let scale = inst.weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let mut nbrs = vec![Vec::new(); k];
    for &(u, v) in &inst.edges {
        nbrs[u].push(v);
        if u != v {
            nbrs[v].push(u);
        }
    }
    // suffix[i]: most the vertices from i on can add, in half units.
    let mut suffix = vec![0u128; k + 1];
    for i in (0..k).rev() {
        suffix[i] = suffix[i + 1] + 2 * c[i];
    }
    fn rec(i: usize, cur: u128, vals: &mut [u8], c: &[u128], nbrs: &[Vec<usize>], suffix: &[u128], best: &mut u128) {
        if cur + suffix[i] <= *best && i < c.len() {
            return;
        }
        if i == c.len() {
            *best = (*best).max(cur);
            return;
        }
        let looped = nbrs[i].contains(&i);
        let cap = (2 - nbrs[i].iter().filter(|&&j| j < i).map(|&j| vals[j]).max().unwrap_or(0)).min(if looped {
            1
        } else {
            2
        });
        for v in (0..=cap).rev() {
            vals[i] = v;
            rec(i + 1, cur + v as u128 * c[i], vals, c, nbrs, suffix, best);
        }
        vals[i] = 0;
    }
    let mut best = 0;
    rec(0, 0, &mut vec![0; k], &c, &nbrs, &suffix, &mut best);
    Ok(Rat::new(BigInt::from(best), scale * 2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateReduction {
    /// Family on `Z_m^(n-1) × {0,1}^(l+1)`, the new binary coordinate first.
    pub family: HammingFamily,
    /// The stable set program over non-isolated fibers, with the solution used.
    pub instance: StableSetInstance,
    /// Number of nonempty fibers.
    pub fibers: usize,
    pub degenerate: bool,
}

/// Removes the last circular coordinate. Members are grouped by the remaining
/// coordinates (the context); each nonempty fiber over a context is replaced
/// by a subset of `{0,1}` chosen from a half-integral optimum of the stable
/// set program whose edges join contexts (possibly equal) that agree on fewer
/// than `t` coordinates.
pub fn reduce_coordinate(f: &HammingFamily, t: usize, s: usize) -> Result<CoordinateReduction> {
    check_window(f.m, s)?;
    if f.n == 0 {
        return Err(invalid("no circular coordinate left to reduce"));
    }
    require(is_t_agreeing_upto_s(f, t, s)?, Violation::NotTAgreeing)?;
    let (m, n, l) = (f.m, f.n, f.binary_count);
    let mut out = HammingFamily::empty(m, n - 1, l + 1)?;
    let mut fibers: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for p in f.points() {
        let mut ctx = p.clone();
        ctx.remove(n - 1);
        *fibers.entry(ctx).or_default() += 1;
    }
    let place = |out: &mut HammingFamily, ctx: &[usize], h: usize| {
        let mut q = ctx.to_vec();
        q.insert(n - 1, h);
        out.insert(&q)
    };
    let ctxs: Vec<(Vec<usize>, usize)> = fibers.into_iter().collect();
    let empty = StableSetInstance { labels: Vec::new(), weights: Vec::new(), edges: Vec::new(), solution: Vec::new() };
    if n + l == t {
        for (ctx, _) in &ctxs {
            place(&mut out, ctx, 1)?;
        }
        return Ok(CoordinateReduction { family: out, instance: empty, fibers: ctxs.len(), degenerate: true });
    }
    let k = ctxs.len();
    // A context with binary zeros may agree with itself on fewer than t
    // coordinates; it then gets a loop.
    let mut edges = Vec::new();
    for u in 0..k {
        for v in u..k {
            if agreements(m, n - 1, s, &ctxs[u].0, &ctxs[v].0) < t {
                edges.push((u, v));
            }
        }
    }
    let mut isolated = vec![true; k];
    for &(u, v) in &edges {
        isolated[u] = false;
        isolated[v] = false;
    }
    let kept: Vec<usize> = (0..k).filter(|&x| !isolated[x]).collect();
    let pos: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut inst = StableSetInstance {
        labels: kept.iter().map(|&x| ctxs[x].0.clone()).collect(),
        weights: kept.iter().map(|&x| point_mass(m, n - 1, s, &ctxs[x].0)).collect(),
        edges: edges.iter().map(|&(u, v)| (pos[&u], pos[&v])).collect(),
        solution: Vec::new(),
    };
    inst.solution = if (s, m) == (1, 2) { vec![Half::Half; kept.len()] } else { half_integral_max(&inst)? };
    for (x, (ctx, _)) in ctxs.iter().enumerate() {
        let value = if isolated[x] { Half::One } else { inst.solution[pos[&x]] };
        match value {
            Half::One => {
                place(&mut out, ctx, 0)?;
                place(&mut out, ctx, 1)?;
            }
            Half::Half => place(&mut out, ctx, 1)?,
            Half::Zero => {}
        }
    }
    Ok(CoordinateReduction { family: out, instance: inst, fibers: k, degenerate: false })
}

/// Fiber-size point `|F_x| / (2s)` that the reduction's optimum must beat.
pub fn fiber_point(f: &HammingFamily, red: &CoordinateReduction, s: usize) -> Vec<Rat> {
    let n = f.n;
    red.instance
        .labels
        .iter()
        .map(|ctx| {
            let size = (0..f.m)
                .filter(|&a| {
                    let mut q = ctx.clone();
                    q.insert(n - 1, a);
                    f.contains(&q)
                })
                .count();
            rat(size as i64, 2 * s as i64)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionChain {
    /// Final family as a set family on `n` points.
    pub family: SetFamily,
    /// Hybrid measure before the first and after every step.
    pub measures: Vec<Rat>,
    pub steps: Vec<CoordinateReduction>,
}

/// Reduces every circular coordinate in turn.
pub fn reduce_full(f: &HammingFamily, t: usize, s: usize) -> Result<ReductionChain> {
    check_window(f.m, s)?;
    if f.dims() > MAX_SET_POINTS {
        return Err(Error::TooLarge(format!("{} coordinates", f.dims())));
    }
    let mut cur = f.clone();
    let mut measures = vec![hybrid_measure(f, s)?];
    let mut steps = Vec::new();
    while cur.n > 0 {
        let red = reduce_coordinate(&cur, t, s)?;
        cur = red.family.clone();
        measures.push(hybrid_measure(&cur, s)?);
        steps.push(red);
    }
    let family = SetFamily::from_masks(
        cur.binary_count,
        cur.points().iter().map(|p| p.iter().enumerate().filter(|(_, &b)| b == 1).fold(0u32, |a, (i, _)| a | 1 << i)),
    );
    Ok(ReductionChain { family, measures, steps })
}

fn oracle_instance(m: usize, n: usize, t: usize, s: usize) -> Result<(CliqueInstance, HammingFamily)> {
    check_window(m, s)?;
    if t == 0 || t > n {
        return Err(invalid(format!("need 1 <= t <= n, got t = {t}, n = {n}")));
    }
    let space = HammingFamily::full(m, n, 0)?;
    if space.size() > MAX_ORACLE_POINTS {
        return Err(Error::TooLarge(format!("{m}^{n} points, limit {MAX_ORACLE_POINTS}")));
    }
    let pts = space.points();
    let inst = CliqueInstance::new(vec![Rat::one(); pts.len()], |u, v| agreements(m, n, s, &pts[u], &pts[v]) >= t)?;
    Ok((inst, HammingFamily::empty(m, n, 0)?))
}

fn family_of(mut empty: HammingFamily, clique: u128) -> HammingFamily {
    for i in 0..empty.size() {
        empty.members[i] = clique >> i & 1 == 1;
    }
    empty
}

/// Largest family in `Z_m^n` that is t-agreeing up to `s`, and how many attain it.
pub fn hamming_oracle(m: usize, n: usize, t: usize, s: usize) -> Result<(u64, u128)> {
    let (inst, _) = oracle_instance(m, n, t, s)?;
    let opt = max_weight_clique(&inst)?;
    Ok((opt.weight.to_integer().to_u64().unwrap_or(0), opt.count))
}

pub fn hamming_witness(m: usize, n: usize, t: usize, s: usize) -> Result<HammingFamily> {
    let (inst, empty) = oracle_instance(m, n, t, s)?;
    Ok(family_of(empty, witness_max_clique(&inst)?))
}

/// All maximum families, in index order of their indicator.
pub fn hamming_optimal_families(m: usize, n: usize, t: usize, s: usize, limit: usize) -> Result<Vec<HammingFamily>> {
    let (inst, empty) = oracle_instance(m, n, t, s)?;
    Ok(enumerate_max_cliques(&inst, limit)?.into_iter().map(|c| family_of(empty.clone(), c)).collect())
}
