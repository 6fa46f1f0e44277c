//! Natural-number multisets over finite ground sets.
//!
//! A [`Multiset`] stores one count per ground label, in ground order. Two
//! multisets compare colexicographically on that count vector (the count of
//! the last label is most significant), which is also the order in which all
//! enumerators in this module yield their results.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ket;

pub type Natural = BigUint;

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Labels {
    Levels(usize),
    Named(Vec<String>),
}

/// A nonempty, ordered set of distinct labels.
///
/// Either the numeric levels `0..N` or a list of opaque names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet(Arc<Labels>);

impl GroundSet {
    pub fn levels(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        Ok(GroundSet(Arc::new(Labels::Levels(n))))
    }

    pub fn named<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyGround);
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || l.contains(['|', '>', '+']) || l.contains(char::is_whitespace) {
                return Err(Error::Parse(format!("invalid label `{l}`")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(GroundSet(Arc::new(Labels::Named(labels))))
    }

    pub fn len(&self) -> usize {
        match &*self.0 {
            Labels::Levels(n) => *n,
            Labels::Named(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_numeric(&self) -> bool {
        matches!(&*self.0, Labels::Levels(_))
    }

    pub fn label(&self, index: usize) -> String {
        match &*self.0 {
            Labels::Levels(_) => index.to_string(),
            Labels::Named(v) => v[index].clone(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &*self.0 {
            Labels::Levels(n) => label.parse::<usize>().ok().filter(|i| i < n),
            Labels::Named(v) => v.iter().position(|l| l == label),
        }
    }
}

/// A finite multiset over a [`GroundSet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multiset {
    ground: GroundSet,
    counts: Vec<usize>,
}

impl Ord for Multiset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ground
            .cmp(&other.ground)
            .then_with(|| self.counts.iter().rev().cmp(other.counts.iter().rev()))
    }
}

impl PartialOrd for Multiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Multiset {
    pub fn empty(ground: &GroundSet) -> Self {
        Multiset {
            ground: ground.clone(),
            counts: vec![0; ground.len()],
        }
    }

    /// Build from a dense count vector aligned with the ground order.
    pub fn from_counts(ground: &GroundSet, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != ground.len() {
            return Err(Error::Domain(format!(
                "count vector has length {}, ground set has {} labels",
                counts.len(),
                ground.len()
            )));
        }
        Ok(Multiset {
            ground: ground.clone(),
            counts,
        })
    }

    pub fn from_pairs<'a, I>(ground: &GroundSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, usize)>,
    {
        let mut m = Multiset::empty(ground);
        for (label, n) in pairs {
            let idx = ground
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            m.counts[idx] += n;
        }
        Ok(m)
    }

    /// Multiset over the levels `0..levels` from `(level, count)` pairs.
    pub fn on_levels(levels: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let ground = GroundSet::levels(levels)?;
        let mut m = Multiset::empty(&ground);
        for &(level, n) in pairs {
            if level >= levels {
                return Err(Error::UnknownLabel(level.to_string()));
            }
            m.counts[level] += n;
        }
        Ok(m)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// Dense count vector in ground order.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, index: usize) -> usize {
        self.counts.get(index).copied().unwrap_or(0)
    }

    pub fn count_of(&self, label: &str) -> usize {
        self.ground.index_of(label).map_or(0, |i| self.counts[i])
    }

    /// Total number of elements, with multiplicity.
    pub fn size(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Ground indices with nonzero multiplicity.
    pub fn support(&self) -> Vec<usize> {
        (0..self.counts.len()).filter(|&i| self.counts[i] > 0).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Number of sequences accumulating to this multiset: `size! / prod count!`.
    pub fn coefficient(&self) -> Natural {
        let mut out = factorial(self.size());
        for &c in &self.counts {
            out /= factorial(c);
        }
        out
    }

    /// Total weight `sum_j count(j) * j` of a multiset over numeric levels.
    pub fn som(&self) -> Result<usize> {
        if !self.ground.is_numeric() {
            return Err(Error::NonNumericGround);
        }
        Ok(self.counts.iter().enumerate().map(|(j, &c)| j * c).sum())
    }

    /// Level reversal `j -> N-1-j`.
    pub fn reverse(&self) -> Result<Multiset> {
        if !self.ground.is_numeric() {
            return Err(Error::NonNumericGround);
        }
        let mut counts = self.counts.clone();
        counts.reverse();
        Ok(Multiset {
            ground: self.ground.clone(),
            counts,
        })
    }

    /// Pointwise order.
    pub fn leq(&self, other: &Multiset) -> Result<bool> {
        self.same_ground(other)?;
        Ok(self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b))
    }

    pub fn plus(&self, other: &Multiset) -> Result<Multiset> {
        self.same_ground(other)?;
        Ok(Multiset {
            ground: self.ground.clone(),
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
        })
    }

    /// `k`-fold sum of the multiset with itself.
    pub fn scale(&self, k: usize) -> Multiset {
        Multiset {
            ground: self.ground.clone(),
            counts: self.counts.iter().map(|c| c * k).collect(),
        }
    }

    /// Move one element from index `from` to index `to`, or `None` when
    /// there is nothing at `from`.
    pub fn moved(&self, from: usize, to: usize) -> Option<Multiset> {
        if self.count(from) == 0 || to >= self.counts.len() {
            return None;
        }
        let mut counts = self.counts.clone();
        counts[from] -= 1;
        counts[to] += 1;
        Some(Multiset {
            ground: self.ground.clone(),
            counts,
        })
    }

    pub(crate) fn same_ground(&self, other: &Multiset) -> Result<()> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        Ok(())
    }

    /// Parse ket syntax such as `3|0> + 1|3>` against a known ground set.
    pub fn parse(text: &str, ground: &GroundSet) -> Result<Multiset> {
        let mut m = Multiset::empty(ground);
        for (coef, label) in ket::split_terms(text)? {
            let n: usize = coef
                .parse()
                .map_err(|_| Error::Parse(format!("`{coef}` is not a multiplicity")))?;
            let idx = ground
                .index_of(&label)
                .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
            m.counts[idx] += n;
        }
        Ok(m)
    }

    /// Parse ket syntax with named labels, taking the ground set to be the
    /// labels in order of first appearance.
    pub fn parse_named(text: &str) -> Result<Multiset> {
        let terms = ket::split_terms(text)?;
        let mut labels: Vec<String> = Vec::new();
        for (_, label) in &terms {
            if !labels.contains(label) {
                labels.push(label.clone());
            }
        }
        let ground = GroundSet::named(labels)?;
        Multiset::parse(text, &ground)
    }
}

impl fmt::Display for Multiset {
    /// Ket form, labels in ground order, zero multiplicities omitted; the
    /// empty multiset prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{}|{}>", c, self.ground.label(i))?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Order-forgetting map from a sequence of ground indices to a multiset.
pub fn accumulate(ground: &GroundSet, seq: &[usize]) -> Result<Multiset> {
    let mut m = Multiset::empty(ground);
    for &x in seq {
        if x >= ground.len() {
            return Err(Error::UnknownLabel(x.to_string()));
        }
        m.counts[x] += 1;
    }
    Ok(m)
}

/// [`accumulate`] for a sequence of labels.
pub fn accumulate_labels(ground: &GroundSet, seq: &[&str]) -> Result<Multiset> {
    let idx = seq
        .iter()
        .map(|l| ground.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string())))
        .collect::<Result<Vec<_>>>()?;
    accumulate(ground, &idx)
}

pub fn factorial(n: usize) -> Natural {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `n! / ((n-i)! i!)`.
pub fn binom(n: u64, i: u64) -> Result<Natural> {
    if i > n {
        return Err(Error::Domain(format!("binom({n}, {i}) needs i <= n")));
    }
    let i = i.min(n - i);
    let mut out = BigUint::one();
    for k in 0..i {
        out *= BigUint::from(n - k);
        out /= BigUint::from(k + 1);
    }
    Ok(out)
}

/// Number of size-`j` multisets over an `m`-element set: `(m+j-1)! / ((m-1)! j!)`.
pub fn multichoose(m: u64, j: u64) -> Result<Natural> {
    if m == 0 {
        return Err(Error::Domain(format!("multichoose({m}, {j}) needs m >= 1")));
    }
    binom(m + j - 1, j)
}

/// Lazy enumeration of count vectors `c` with `sum c = size`, `c[j] <= caps[j]`
/// and, when a target is given, `sum j * c[j] = target`.
///
/// Vectors come out in ascending colexicographic order. Levels are filled from
/// the top down with remaining-size and remaining-sum pruning, so the work is
/// proportional to the output rather than to all multisets of the given size.
#[derive(Debug, Clone)]
pub struct BoundedCompositions {
    caps: Vec<usize>,
    target: Option<usize>,
    counts: Vec<usize>,
    // remaining (size, sum) before choosing the count at each index
    remaining: Vec<(usize, usize)>,
    // total capacity of indices 0..=j
    prefix_cap: Vec<usize>,
    started: bool,
    done: bool,
}

impl BoundedCompositions {
    pub fn new(caps: Vec<usize>, size: usize, target: Option<usize>) -> Self {
        let n = caps.len();
        let mut prefix_cap = Vec::with_capacity(n);
        let mut acc = 0usize;
        for &c in &caps {
            acc = acc.saturating_add(c);
            prefix_cap.push(acc);
        }
        let mut remaining = vec![(0, 0); n];
        if n > 0 {
            remaining[n - 1] = (size, target.unwrap_or(0));
        }
        BoundedCompositions {
            counts: vec![0; n],
            caps,
            target,
            remaining,
            prefix_cap,
            started: false,
            done: n == 0,
        }
    }

    pub fn uncapped(len: usize, size: usize, target: Option<usize>) -> Self {
        Self::new(vec![usize::MAX; len], size, target)
    }

    fn feasible(&self, idx: usize, v: usize) -> bool {
        let (r, s) = self.remaining[idx];
        if v > r || v > self.caps[idx] {
            return false;
        }
        let r2 = r - v;
        if idx == 0 {
            return r2 == 0 && (self.target.is_none() || s == 0);
        }
        if r2 > self.prefix_cap[idx - 1] {
            return false;
        }
        if self.target.is_some() {
            let used = v * idx;
            if used > s {
                return false;
            }
            if s - used > (idx - 1) * r2 {
                return false;
            }
        }
        true
    }

    fn advance(&mut self, mut idx: usize, mut fresh: bool) -> bool {
        let n = self.counts.len();
        loop {
            let (r, s) = self.remaining[idx];
            let mut v = if fresh { 0 } else { self.counts[idx] + 1 };
            let hi = r.min(self.caps[idx]);
            let mut found = false;
            while v <= hi {
                if self.target.is_some() && idx > 0 && v * idx > s {
                    break;
                }
                if self.feasible(idx, v) {
                    found = true;
                    break;
                }
                v += 1;
            }
            if found {
                self.counts[idx] = v;
                if idx == 0 {
                    return true;
                }
                let (r, s) = self.remaining[idx];
                self.remaining[idx - 1] = (r - v, if self.target.is_some() { s - v * idx } else { 0 });
                idx -= 1;
                fresh = true;
            } else {
                idx += 1;
                if idx == n {
                    return false;
                }
                fresh = false;
            }
        }
    }
}

impl Iterator for BoundedCompositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let n = self.counts.len();
        let ok = if !self.started {
            self.started = true;
            self.advance(n - 1, true)
        } else if n == 1 {
            false
        } else {
            self.advance(1, false)
        };
        if ok {
            Some(self.counts.clone())
        } else {
            self.done = true;
            None
        }
    }
}

/// All multisets of size `k` over `ground`, in colexicographic order.
pub fn enumerate_multisets(ground: &GroundSet, k: usize) -> impl Iterator<Item = Multiset> {
    let g = ground.clone();
    BoundedCompositions::uncapped(ground.len(), k, None).map(move |counts| Multiset {
        ground: g.clone(),
        counts,
    })
}

/// The multisets of size `k` over levels `0..n` whose [`Multiset::som`] is `i`.
pub fn enumerate_multisets_with_sum(
    n: usize,
    k: usize,
    i: usize,
) -> Result<impl Iterator<Item = Multiset>> {
    let ground = GroundSet::levels(n)?;
    let max = (n - 1) * k;
    if i > max {
        return Err(Error::OutOfRange {
            what: "sum",
            value: i as u64,
            max: max as u64,
        });
    }
    Ok(BoundedCompositions::uncapped(n, k, Some(i)).map(move |counts| Multiset {
        ground: ground.clone(),
        counts,
    }))
}

/// Multisets `phi <= bound` with `size(phi) = k`.
pub fn enumerate_below(bound: &Multiset, k: usize) -> impl Iterator<Item = Multiset> {
    let g = bound.ground.clone();
    BoundedCompositions::new(bound.counts.clone(), k, None).map(move |counts| Multiset {
        ground: g.clone(),
        counts,
    })
}
