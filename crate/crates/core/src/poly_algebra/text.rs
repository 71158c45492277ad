//! Line-oriented text format for series.
//!
//! ```text
//! # resnf-series v1
//! # dims 2 1
//! # columns: l | k | m1 | m2 | re im | eps_order
//! 1 0 | 0 -1 | 1 | 0 | 5e-1 -2.5e-1 | 1
//! ```
//!
//! Floats are written in shortest round-trip form, so reading back
//! reproduces every coefficient bit for bit.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::index::MultiIndex;
use super::series::{Series, TruncationPolicy};
use crate::error::{Error, Result};

fn join(v: &[i32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Serialize a series whose terms all carry the same perturbation order.
pub fn write_series(f: &Series, eps_order: usize) -> String {
    let mut out = String::new();
    let (n1, n2) = f.dims();
    out.push_str("# resnf-series v1\n");
    let _ = writeln!(out, "# dims {n1} {n2}");
    out.push_str("# columns: l | k | m1 | m2 | re im | eps_order\n");
    for (idx, c) in f.iter() {
        let _ = writeln!(
            out,
            "{} | {} | {} | {} | {:e} {:e} | {}",
            join(idx.l()),
            join(idx.k()),
            join(idx.m1()),
            join(idx.m2()),
            c.re,
            c.im,
            eps_order
        );
    }
    out
}

fn parse_ints(s: &str, n: usize, line: usize) -> Result<Vec<i32>> {
    let v: std::result::Result<Vec<i32>, _> = s.split_whitespace().map(str::parse).collect();
    let v = v.map_err(|e| Error::Parse {
        line,
        msg: e.to_string(),
    })?;
    if v.len() != n {
        return Err(Error::Parse {
            line,
            msg: format!("expected {n} integers, found {}", v.len()),
        });
    }
    Ok(v)
}

/// Parse a series. Returns the series and the perturbation order of its
/// terms (`None` for an empty series).
pub fn read_series(text: &str, trunc: TruncationPolicy) -> Result<(Series, Option<usize>)> {
    let mut dims: Option<(usize, usize)> = None;
    let mut out: Option<Series> = None;
    let mut order = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(d) = rest.strip_prefix("dims") {
                let v = parse_ints(d, 2, line)?;
                let (n1, n2) = (v[0] as usize, v[1] as usize);
                dims = Some((n1, n2));
                out = Some(Series::new(n1, n2, trunc));
            }
            continue;
        }
        let (n1, n2) = dims.ok_or(Error::Parse {
            line,
            msg: "term before dims header".into(),
        })?;
        let cols: Vec<&str> = s.split('|').collect();
        if cols.len() != 6 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 6 columns, found {}", cols.len()),
            });
        }
        let l = parse_ints(cols[0], n1, line)?;
        let k = parse_ints(cols[1], n1, line)?;
        let m1 = parse_ints(cols[2], n2, line)?;
        let m2 = parse_ints(cols[3], n2, line)?;
        if l.iter().chain(&m1).chain(&m2).any(|&e| e < 0) {
            return Err(Error::Parse {
                line,
                msg: "negative exponent".into(),
            });
        }
        let c: Vec<f64> = cols[4]
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e: std::num::ParseFloatError| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
        if c.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: "coefficient needs re and im".into(),
            });
        }
        let o: usize = cols[5].trim().parse().map_err(|e: std::num::ParseIntError| Error::Parse {
            line,
            msg: e.to_string(),
        })?;
        if let Some(prev) = order {
            if prev != o {
                return Err(Error::Parse {
                    line,
                    msg: format!("mixed perturbation orders {prev} and {o}"),
                });
            }
        }
        order = Some(o);
        if let Some(series) = out.as_mut() {
            series.add_term(MultiIndex::new(&l, &k, &m1, &m2), Complex64::new(c[0], c[1]));
        }
    }
    let mut series = out.ok_or(Error::Parse {
        line: 0,
        msg: "missing dims header".into(),
    })?;
    series.canonicalize();
    Ok((series, order))
}
