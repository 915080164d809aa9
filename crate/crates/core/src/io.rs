//! Text formats for set families, Hamming families and shift traces.
//!
//! ```text
//! SETFAM 1        HAMFAM 1
//! n=3             m=4
//! 1               n=2
//! 1,2             l=0
//! {}              0 1
//! ```

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::family::{elements, SetFamily, MAX_POINTS};
use crate::hamming::HammingFamily;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-blank lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

fn header<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>, magic: &str) -> Result<()> {
    match it.next() {
        Some((_, l)) if l == magic => Ok(()),
        Some((n, l)) => Err(parse_err(n, format!("expected `{magic}`, found `{l}`"))),
        None => Err(parse_err(1, format!("missing `{magic}` header"))),
    }
}

fn field<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>, key: &str, last: usize) -> Result<(usize, usize)> {
    let (n, l) = it.next().ok_or_else(|| parse_err(last + 1, format!("missing `{key}=` line")))?;
    let v = l
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| parse_err(n, format!("expected `{key}=<int>`, found `{l}`")))?;
    let v = v.trim().parse().map_err(|_| parse_err(n, format!("`{v}` is not a nonnegative integer")))?;
    Ok((n, v))
}

pub fn parse_setfam(text: &str) -> Result<SetFamily> {
    let mut it = lines(text);
    header(&mut it, "SETFAM 1")?;
    let (at, n) = field(&mut it, "n", 1)?;
    if n > MAX_POINTS {
        return Err(parse_err(at, format!("n = {n} exceeds {MAX_POINTS}")));
    }
    let mut f = SetFamily::empty(n);
    for (no, l) in it {
        let mask = if l == "{}" {
            0
        } else {
            let mut mask = 0u32;
            let mut prev = 0;
            for tok in l.split(',') {
                let tok = tok.trim();
                let e: usize = tok.parse().map_err(|_| parse_err(no, format!("`{tok}` is not a point")))?;
                if e == 0 || e > n {
                    return Err(parse_err(no, format!("point {e} outside [1, {n}]")));
                }
                if e <= prev {
                    return Err(parse_err(no, "points must be strictly ascending"));
                }
                prev = e;
                mask |= 1 << (e - 1);
            }
            mask
        };
        if f.contains(mask) {
            return Err(parse_err(no, "duplicate member"));
        }
        f.insert(mask);
    }
    Ok(f)
}

pub fn write_setfam(f: &SetFamily) -> String {
    let mut out = format!("SETFAM 1\nn={}\n", f.n());
    for m in f.iter() {
        if m == 0 {
            out.push_str("{}\n");
        } else {
            let items: Vec<String> = elements(m).iter().map(|e| e.to_string()).collect();
            out.push_str(&items.join(","));
            out.push('\n');
        }
    }
    out
}

pub fn parse_hamfam(text: &str) -> Result<HammingFamily> {
    let mut it = lines(text);
    header(&mut it, "HAMFAM 1")?;
    let (at, m) = field(&mut it, "m", 1)?;
    let (at, n) = field(&mut it, "n", at)?;
    let (at, l) = field(&mut it, "l", at)?;
    let mut f = HammingFamily::empty(m, n, l).map_err(|e| parse_err(at, e.to_string()))?;
    let mut seen = HashSet::new();
    for (no, line) in it {
        let point = line
            .split_whitespace()
            .map(|tok| tok.parse::<usize>().map_err(|_| parse_err(no, format!("`{tok}` is not a coordinate"))))
            .collect::<Result<Vec<_>>>()?;
        let idx = f.encode(&point).map_err(|e| parse_err(no, e.to_string()))?;
        if !seen.insert(idx) {
            return Err(parse_err(no, "duplicate member"));
        }
        f.insert(&point).map_err(|e| parse_err(no, e.to_string()))?;
    }
    Ok(f)
}

pub fn write_hamfam(f: &HammingFamily) -> String {
    let mut out = format!("HAMFAM 1\nm={}\nn={}\nl={}\n", f.m(), f.n(), f.binary_count());
    for p in f.points() {
        let items: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        out.push_str(&items.join(" "));
        out.push('\n');
    }
    out
}

/// Parses shift-trace lines `i j`.
pub fn parse_trace(text: &str) -> Result<Vec<(usize, usize)>> {
    lines(text)
        .map(|(no, l)| {
            let nums: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(no, format!("`{t}` is not a point"))))
                .collect::<Result<_>>()?;
            match nums[..] {
                [i, j] => Ok((i, j)),
                _ => Err(parse_err(no, "expected two points")),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::frankl;
    use crate::shifting::{format_trace, left_compress};
    use proptest::prelude::*;

    #[test]
    fn setfam_examples() {
        let f = parse_setfam("SETFAM 1\nn=3\n1\n1,2\n{}\n").unwrap();
        assert_eq!(f, SetFamily::from_sets(3, &[&[1], &[1, 2], &[]]));
        assert_eq!(write_setfam(&f), "SETFAM 1\nn=3\n{}\n1\n1,2\n");
        assert_eq!(parse_setfam(&write_setfam(&frankl(5, 2, 1).unwrap())).unwrap(), frankl(5, 2, 1).unwrap());
        assert_eq!(parse_setfam(&write_setfam(&SetFamily::empty(0))).unwrap(), SetFamily::empty(0));
    }

    #[test]
    fn setfam_errors_carry_lines() {
        let line = |text: &str| match parse_setfam(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line("SETFAM 2\nn=3\n"), 1);
        assert_eq!(line("SETFAM 1\nk=3\n"), 2);
        assert_eq!(line("SETFAM 1\nn=3\n1\n1,4\n"), 4);
        assert_eq!(line("SETFAM 1\nn=3\n1,2\n\n1,2\n"), 5);
        assert_eq!(line("SETFAM 1\nn=3\n2,1\n"), 3);
        assert_eq!(line("SETFAM 1\nn=3\nx\n"), 3);
        assert_eq!(line(""), 1);
    }

    #[test]
    fn hamfam_examples() {
        let text = "HAMFAM 1\nm=4\nn=2\nl=1\n0 1 1\n3 3 0\n";
        let f = parse_hamfam(text).unwrap();
        assert_eq!(f.points(), vec![vec![0, 1, 1], vec![3, 3, 0]]);
        assert_eq!(write_hamfam(&f), text);
        assert!(matches!(parse_hamfam("HAMFAM 1\nm=4\nn=2\nl=1\n0 4 1\n"), Err(Error::Parse { line: 5, .. })));
        assert!(matches!(parse_hamfam("HAMFAM 1\nm=4\nn=2\nl=0\n0 1\n0 1\n"), Err(Error::Parse { line: 6, .. })));
        assert!(matches!(parse_hamfam("HAMFAM 1\nm=4\nl=0\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn trace_round_trip() {
        let (_, trace) = left_compress(&SetFamily::from_sets(3, &[&[2], &[3]]));
        assert_eq!(parse_trace(&format_trace(&trace)).unwrap(), trace);
        assert!(parse_trace("1 2 3\n").is_err());
    }

    proptest! {
        #[test]
        fn setfam_round_trips(bits in proptest::collection::vec(any::<bool>(), 32)) {
            let f = SetFamily::from_masks(5, (0..32u32).filter(|&i| bits[i as usize]));
            prop_assert_eq!(parse_setfam(&write_setfam(&f)).unwrap(), f);
        }

        #[test]
        fn hamfam_round_trips(bits in proptest::collection::vec(any::<bool>(), 36)) {
            let mut f = HammingFamily::empty(3, 2, 2).unwrap();
            for i in (0..36).filter(|&i| bits[i]) {
                let p = f.decode(i);
                f.insert(&p).unwrap();
            }
            prop_assert_eq!(parse_hamfam(&write_hamfam(&f)).unwrap(), f);
        }
    }
}
