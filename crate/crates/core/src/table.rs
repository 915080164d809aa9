//! Curves `p -> w(n, t, p)` sampled on a grid plus every breakpoint.

use std::collections::BTreeSet;

use crate::closed_form::{max_radius, w_closed, window_start};
use crate::error::{invalid, Result};
use crate::rat::{rat, to_f64, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub t: usize,
    pub p: Rat,
    pub w: Rat,
    pub optimal_r: Vec<usize>,
}

pub const CSV_HEADER: &str = "t,p_num,p_den,w_num,w_den,optimal_r,w_float";

impl TableRow {
    pub fn csv(&self) -> String {
        let r: Vec<String> = self.optimal_r.iter().map(|r| r.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{}",
            self.t,
            self.p.numer(),
            self.p.denom(),
            self.w.numer(),
            self.w.denom(),
            r.join(";"),
            to_f64(&self.w)
        )
    }
}

/// Breakpoints `r / (t + 2r - 1)` with `1 <= r <= r*` for one curve.
pub fn curve_breakpoints(n: usize, t: usize) -> BTreeSet<Rat> {
    (1..=max_radius(n, t)).map(|r| window_start(t, r)).collect()
}

/// Rows ordered by `t` then `p`; each `p` appears once per curve.
pub fn table(n: usize, tmax: usize, grid: usize) -> Result<Vec<TableRow>> {
    if tmax == 0 || tmax > n || grid < 2 {
        return Err(invalid(format!("need 1 <= tmax <= n and grid >= 2, got n={n} tmax={tmax} grid={grid}")));
    }
    let mut rows = Vec::new();
    for t in 1..=tmax {
        let mut ps: BTreeSet<Rat> = (1..grid).map(|k| rat(k as i64, grid as i64)).collect();
        ps.extend(curve_breakpoints(n, t));
        for p in ps {
            let w = w_closed(n, t, &p)?;
            rows.push(TableRow { t, p, w: w.value, optimal_r: w.optimal_r });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_csv() {
        let rows = table(20, 5, 200).unwrap();
        let star = rows.iter().find(|r| r.t == 1 && r.p == rat(1, 4)).unwrap();
        assert_eq!(star.w, rat(1, 4));
        for t in 1..=5 {
            let curve: Vec<&TableRow> = rows.iter().filter(|r| r.t == t).collect();
            assert!(curve.windows(2).all(|w| w[0].p < w[1].p && w[0].w <= w[1].w));
            for b in curve_breakpoints(20, t) {
                assert_eq!(curve.iter().filter(|r| r.p == b).count(), 1);
            }
        }
        let csv = to_csv(&rows[..2]);
        assert!(csv.starts_with("t,p_num,p_den,w_num,w_den,optimal_r,w_float\n1,1,200,1,200,0,0.005\n"));
        assert!(table(4, 5, 10).is_err());
    }
}
