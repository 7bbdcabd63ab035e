//! Ground sets, subsets stored as bitsets, and orderings.

use std::fmt;
use std::sync::Arc;

use crate::error::{precondition, Error, Result};

/// A finite ground set `{0, .., p-1}` with optional element labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    p: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(p: usize) -> Self {
        GroundSet { p, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        GroundSet { p: labels.len(), labels: Some(labels) }
    }

    pub fn len(&self) -> usize {
        self.p
    }

    pub fn is_empty(&self) -> bool {
        self.p == 0
    }

    pub fn label(&self, k: usize) -> String {
        match &self.labels {
            Some(l) => l[k].clone(),
            None => (k + 1).to_string(),
        }
    }
}

/// A subset of a ground set of size `p`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    p: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(p: usize) -> Self {
        Subset { p, words: vec![0; p.div_ceil(64)] }
    }

    pub fn full(p: usize) -> Self {
        let mut s = Subset::empty(p);
        for k in 0..p {
            s.insert(k);
        }
        s
    }

    pub fn from_indices(p: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Subset::empty(p);
        for k in idx {
            assert!(k < p, "element {k} outside ground set of size {p}");
            s.insert(k);
        }
        s
    }

    /// Subset whose bits are the low `p` bits of `mask` (`p <= 64`).
    pub fn from_mask(p: usize, mask: u64) -> Self {
        assert!(p <= 64);
        let mut s = Subset::empty(p);
        if p > 0 {
            s.words[0] = mask;
        }
        s
    }

    pub fn from_indicator(ind: &[bool]) -> Self {
        Subset::from_indices(ind.len(), ind.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k))
    }

    /// Low 64 bits of the bitset.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn ground_size(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn contains(&self, k: usize) -> bool {
        k < self.p && (self.words[k >> 6] >> (k & 63)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, k: usize) {
        self.words[k >> 6] |= 1 << (k & 63);
    }

    #[inline]
    pub fn remove(&mut self, k: usize) {
        self.words[k >> 6] &= !(1 << (k & 63));
    }

    pub fn toggle(&mut self, k: usize) {
        self.words[k >> 6] ^= 1 << (k & 63);
    }

    pub fn with(&self, k: usize) -> Self {
        let mut s = self.clone();
        s.insert(k);
        s
    }

    pub fn without(&self, k: usize) -> Self {
        let mut s = self.clone();
        s.remove(k);
        s
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.p
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.p).filter(move |&k| self.contains(k))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Self {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        let rem = self.p & 63;
        if rem != 0 {
            if let Some(last) = s.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
        s
    }

    pub fn union(&self, other: &Subset) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Subset) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Subset) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip(&self, other: &Subset, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.p, other.p, "subsets of different ground sets");
        Subset { p: self.p, words: self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect() }
    }

    pub fn indicator(&self) -> Vec<f64> {
        (0..self.p).map(|k| if self.contains(k) { 1.0 } else { 0.0 }).collect()
    }

    /// `s(A) = sum of s_k over k in A`.
    pub fn sum(&self, s: &[f64]) -> f64 {
        self.iter().map(|k| s[k]).sum()
    }

    /// Maps a subset of `{0..elems.len()}` to the ground set of size `p` via `elems`.
    pub fn lift(&self, p: usize, elems: &[usize]) -> Subset {
        Subset::from_indices(p, self.iter().map(|k| elems[k]))
    }

    /// Parses a comma separated list of 1-based indices.
    pub fn parse_one_based(p: usize, text: &str) -> Result<Subset> {
        let mut s = Subset::empty(p);
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let k: usize = tok.parse().map_err(|_| Error::Parse(format!("bad index {tok:?}")))?;
            if k == 0 || k > p {
                return Err(Error::Parse(format!("index {k} outside 1..={p}")));
            }
            s.insert(k - 1);
        }
        Ok(s)
    }

    /// 1-based comma separated serialization.
    pub fn to_one_based_string(&self) -> String {
        self.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_one_based_string())
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_one_based_string())
    }
}

/// A permutation of `{0, .., p-1}`. Cloning is cheap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ordering(Arc<[usize]>);

impl Ordering {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let p = order.len();
        let mut seen = vec![false; p];
        for &k in &order {
            if k >= p || seen[k] {
                return precondition(format!("not a permutation of 0..{p}: {order:?}"));
            }
            seen[k] = true;
        }
        Ok(Ordering(order.into()))
    }

    pub fn identity(p: usize) -> Self {
        Ordering((0..p).collect())
    }

    /// Wraps `order` without checking that it is a permutation.
    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        Ordering(order.into())
    }

    /// Decreasing order of `w`, ties broken by increasing index.
    pub fn decreasing(w: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..w.len()).collect();
        order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
        Ordering(order.into())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.to_vec()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// All subsets of a ground set of size `p <= 30`, as bitmasks in increasing order.
pub fn all_subsets(p: usize) -> impl Iterator<Item = Subset> {
    assert!(p <= 30, "exhaustive enumeration limited to p <= 30");
    (0u64..(1u64 << p)).map(move |m| Subset::from_mask(p, m))
}
