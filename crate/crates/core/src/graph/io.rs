//! Edge-list and vector text formats.

use crate::error::{Error, Result};
use crate::graph::cut::WeightedDigraph;

/// Parses `n m` followed by `m` lines `u v cap` with 1-based vertices.
pub fn parse_edge_list(text: &str) -> Result<WeightedDigraph> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let nums: Vec<&str> = header.split_whitespace().collect();
    if nums.len() != 2 {
        return Err(Error::Parse(format!("header must be `n m`, got {header:?}")));
    }
    let n: usize = nums[0].parse().map_err(|_| Error::Parse(format!("bad vertex count {:?}", nums[0])))?;
    let m: usize = nums[1].parse().map_err(|_| Error::Parse(format!("bad arc count {:?}", nums[1])))?;
    let mut arcs = Vec::with_capacity(m);
    for (i, line) in lines.enumerate() {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::Parse(format!("line {}: expected `u v cap`, got {line:?}", i + 2)));
        }
        let idx = |s: &str| -> Result<usize> {
            let k: usize = s.parse().map_err(|_| Error::Parse(format!("bad vertex {s:?}")))?;
            if k == 0 || k > n {
                return Err(Error::Parse(format!("vertex {k} outside 1..={n}")));
            }
            Ok(k - 1)
        };
        let cap: f64 = f[2].parse().map_err(|_| Error::Parse(format!("bad capacity {:?}", f[2])))?;
        arcs.push((idx(f[0])?, idx(f[1])?, cap));
    }
    if arcs.len() != m {
        return Err(Error::Parse(format!("header announces {m} arcs, found {}", arcs.len())));
    }
    WeightedDigraph::new(n, arcs, false)
}

/// Serializes the expanded directed arcs in the edge-list format.
pub fn write_edge_list(g: &WeightedDigraph) -> String {
    let arcs = g.directed_arcs();
    let mut out = format!("{} {}\n", g.n, arcs.len());
    for (u, v, c) in arcs {
        out.push_str(&format!("{} {} {}\n", u + 1, v + 1, c));
    }
    out
}

/// One value per line.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {l:?}"))))
        .collect()
}

pub fn write_vector(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}\n")).collect()
}

/// Lines `i j` (1-based) meaning `w_i >= w_j`.
pub fn parse_constraints(text: &str, p: usize) -> Result<Vec<(usize, usize)>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<usize> = l
                .split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad index {s:?}"))))
                .collect::<Result<_>>()?;
            match f[..] {
                [i, j] if (1..=p).contains(&i) && (1..=p).contains(&j) => Ok((i - 1, j - 1)),
                _ => Err(Error::Parse(format!("bad constraint line {l:?}"))),
            }
        })
        .collect()
}

/// Rows of comma-separated numbers.
pub fn parse_matrix_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s:?}")))).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_roundtrip() {
        let g = parse_edge_list("3 2\n1 2 1.5\n2 3 2\n").unwrap();
        assert_eq!(g.arcs, vec![(0, 1, 1.5), (1, 2, 2.0)]);
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
        assert!(parse_edge_list("2 1\n1 3 1\n").is_err());
        assert!(parse_edge_list("2 2\n1 2 1\n").is_err());
    }

    #[test]
    fn constraints_and_vectors() {
        assert_eq!(parse_constraints("1 2\n3 1\n", 3).unwrap(), vec![(0, 1), (2, 0)]);
        assert_eq!(parse_vector("1\n-2.5\n").unwrap(), vec![1.0, -2.5]);
    }
}
