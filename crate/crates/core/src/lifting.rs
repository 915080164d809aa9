//! Passing between uniform families on `C([n], k)` and p-biased families on a
//! fixed number of points.

use num::bigint::BigInt;
use num::traits::{Signed, Zero};

use crate::error::{invalid, Result};
use crate::family::SetFamily;
use crate::rat::{binomial, check_probability, falling, level_weights, Rat};

/// Number of `k`-subsets of `[n]` meeting `[t+2r]` in at least `t+r` points.
pub fn uniform_frankl_count(n: usize, k: usize, t: usize, r: usize) -> Result<BigInt> {
    let width = t + 2 * r;
    if t == 0 || width > n || k > n || t + r > k {
        return Err(invalid(format!("need t >= 1, t+r <= k <= n and t+2r <= n, got n={n} k={k} t={t} r={r}")));
    }
    Ok((t + r..=width.min(k)).fold(BigInt::zero(), |acc, j| acc + binomial(width, j) * binomial(n - width, k - j)))
}

/// Fraction of `k`-subsets of `[n]` whose trace on the first `m` points lies
/// in `h`, where `m` is the ground size of `h`.
pub fn lifted_measure(h: &SetFamily, n: usize, k: usize) -> Result<Rat> {
    let m = h.n();
    if k > n || m > n {
        return Err(invalid(format!("need k <= n and m <= n, got n={n} k={k} m={m}")));
    }
    let num = h
        .level_counts()
        .iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (j, &c)| acc + BigInt::from(c) * falling(k, j) * falling(n - k, m - j));
    Ok(Rat::new(num, falling(n, m)))
}

/// `(n, |lifted_measure(h, n, floor(p n)) - measure(h, p)|)` for each `n`.
pub fn convergence_probe(h: &SetFamily, p: &Rat, ns: &[usize]) -> Result<Vec<(usize, Rat)>> {
    let target = h.measure(p)?;
    ns.iter()
        .map(|&n| {
            let k = (p * Rat::from_integer(BigInt::from(n))).floor().to_integer();
            let k = usize::try_from(k).map_err(|_| invalid("level out of range"))?;
            Ok((n, (lifted_measure(h, n, k)? - &target).abs()))
        })
        .collect()
}

/// Whether the measure equals the level-by-level sum `Σ_k p^k (1-p)^(n-k) |F_k|`.
pub fn level_sum_identity(f: &SetFamily, p: &Rat) -> Result<bool> {
    check_probability(p)?;
    let w = level_weights(p, f.n());
    let by_level = f
        .level_counts()
        .iter()
        .enumerate()
        .fold(Rat::zero(), |acc, (k, &c)| acc + &w[k] * Rat::from_integer(BigInt::from(c)));
    Ok(f.measure(p)? == by_level)
}
