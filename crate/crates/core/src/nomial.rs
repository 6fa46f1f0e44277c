//! N-nomial coefficients `C_N(K, i)`: the number of length-`K` sequences over
//! `0..N` whose entries add up to `i`.
//!
//! Four independent routes are provided (sequence enumeration, multiset
//! coefficients, memoised recursion, polynomial expansion) plus the closed
//! form `multichoose(K, i)` valid for `i < N`. [`nomial`] dispatches to the
//! cheap routes; the others exist so they can be checked against each other.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multiset::{enumerate_multisets_with_sum, multichoose, Natural};
use crate::par::Execution;

/// Default cap on brute-force enumeration steps.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Validated `(N, K, i)` with `N >= 1` and `0 <= i <= (N-1) K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NomialParams {
    levels: usize,
    length: usize,
    sum: usize,
}

impl NomialParams {
    pub fn new(levels: usize, length: usize, sum: usize) -> Result<Self> {
        if levels == 0 {
            return Err(Error::EmptyGround);
        }
        let max = max_sum(levels, length);
        if sum > max {
            return Err(Error::OutOfRange {
                what: "sum",
                value: sum as u64,
                max: max as u64,
            });
        }
        Ok(NomialParams { levels, length, sum })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn sum(&self) -> usize {
        self.sum
    }
}

/// Largest attainable sum, `(N-1) K`.
pub fn max_sum(levels: usize, length: usize) -> usize {
    levels.saturating_sub(1) * length
}

/// Odometer over all sequences in `[0, n)^k`, last position fastest.
#[derive(Debug, Clone)]
pub struct Sequences {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Sequences {
    pub fn new(n: usize, k: usize) -> Self {
        Sequences {
            n,
            cur: vec![0; k],
            done: n == 0 && k > 0,
        }
    }
}

impl Iterator for Sequences {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let mut pos = self.cur.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.cur[pos] += 1;
            if self.cur[pos] < self.n {
                break;
            }
            self.cur[pos] = 0;
        }
        Some(out)
    }
}

/// Refuse enumerations of `N^K` sequences beyond `budget`.
pub fn check_budget(levels: usize, length: usize, budget: u64) -> Result<()> {
    let total = BigUint::from(levels).pow(length as u32);
    if total > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: total.to_string(),
            budget,
        });
    }
    Ok(())
}

/// All sequences in `[0, N)^K` summing to `i`, in lexicographic order.
pub fn sequences_with_sum(p: NomialParams, budget: u64) -> Result<Vec<Vec<usize>>> {
    check_budget(p.levels, p.length, budget)?;
    Ok(Sequences::new(p.levels, p.length)
        .filter(|v| v.iter().sum::<usize>() == p.sum)
        .collect())
}

/// `C_N(K, i)` by counting sequences directly.
pub fn nomial_enum_sequences(p: NomialParams, budget: u64) -> Result<Natural> {
    nomial_enum_sequences_with(p, budget, Execution::default())
}

/// [`nomial_enum_sequences`] with an explicit execution policy; the work is
/// split on the first entry of the sequence.
pub fn nomial_enum_sequences_with(p: NomialParams, budget: u64, exec: Execution) -> Result<Natural> {
    check_budget(p.levels, p.length, budget)?;
    if p.length == 0 {
        return Ok(BigUint::from(u8::from(p.sum == 0)));
    }
    let counts = exec.map_range(0..p.levels, |first| {
        if first > p.sum {
            return 0u64;
        }
        let rest = p.sum - first;
        Sequences::new(p.levels, p.length - 1)
            .filter(|v| v.iter().sum::<usize>() == rest)
            .count() as u64
    });
    Ok(BigUint::from(counts.iter().sum::<u64>()))
}

/// `C_N(K, i)` as the sum of multiset coefficients over `M[K, i]`.
pub fn nomial_via_multisets(p: NomialParams) -> Natural {
    enumerate_multisets_with_sum(p.levels, p.length, p.sum)
        .expect("validated params")
        .map(|m| m.coefficient())
        .sum()
}

/// `C_N(K, i)` by the memoised recursion over (remaining size, remaining
/// level): peel off one entry `j < min(level + 1, N)` at a time.
///
/// Impossible branches contribute 0.
pub fn nomial_recursive(p: NomialParams) -> Natural {
    let mut memo: Vec<Vec<Option<Natural>>> = vec![vec![None; p.sum + 1]; p.length + 1];
    collect(p.levels, p.length, p.sum, &mut memo)
}

fn collect(levels: usize, size: usize, level: usize, memo: &mut [Vec<Option<Natural>>]) -> Natural {
    if let Some(v) = &memo[size][level] {
        return v.clone();
    }
    let out = if size == 0 {
        BigUint::from(u8::from(level == 0))
    } else if level > (levels - 1) * size {
        BigUint::zero()
    } else if size == 1 {
        BigUint::one()
    } else {
        let mut acc = BigUint::zero();
        for j in 0..levels.min(level + 1) {
            acc += collect(levels, size - 1, level - j, memo);
        }
        acc
    };
    memo[size][level] = Some(out.clone());
    out
}

/// `C_N(K, i) = multichoose(K, i)`, valid when `i < N` and `K >= 1`.
pub fn nomial_closed_form(p: NomialParams) -> Result<Natural> {
    if p.sum >= p.levels {
        return Err(Error::Domain(format!(
            "closed form needs i < N, got i = {} and N = {}",
            p.sum, p.levels
        )));
    }
    if p.length == 0 {
        return Err(Error::Domain("closed form needs K >= 1".into()));
    }
    multichoose(p.length as u64, p.sum as u64)
}

/// `C_N(K, i)`: closed form when it applies, memoised recursion otherwise.
pub fn nomial(p: NomialParams) -> Natural {
    if p.sum < p.levels && p.length >= 1 {
        nomial_closed_form(p).expect("precondition checked")
    } else {
        nomial_recursive(p)
    }
}

/// [`nomial`] from raw numbers, returning 0 outside the valid range.
pub fn nomial_or_zero(levels: usize, length: usize, sum: usize) -> Natural {
    match NomialParams::new(levels, length, sum) {
        Ok(p) => nomial(p),
        Err(_) => BigUint::zero(),
    }
}

/// `sum_{i < n} C_N(K, i)`, checked against `(n / K) multichoose(K, n)`.
///
/// Needs `K >= 1` and `n <= N`. A disagreement between the two sides is
/// reported as [`Error::IdentityMismatch`].
pub fn nomial_prefix_sum(levels: usize, length: usize, n: usize) -> Result<Natural> {
    if length == 0 {
        return Err(Error::Domain("prefix sum needs K >= 1".into()));
    }
    if levels == 0 {
        return Err(Error::EmptyGround);
    }
    if n > levels {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as u64,
            max: levels as u64,
        });
    }
    let row = NomialTable::new(levels, length).row(length).to_vec();
    let lhs: Natural = row.iter().take(n).sum();
    let scaled = BigUint::from(n) * multichoose(length as u64, n as u64)?;
    let k = BigUint::from(length);
    if &scaled % &k != BigUint::zero() || scaled / k != lhs {
        return Err(Error::IdentityMismatch(format!(
            "prefix sum N={levels} K={length} n={n}"
        )));
    }
    Ok(lhs)
}

/// Coefficients of `(1 + x + ... + x^(N-1))^K` by repeated convolution.
pub fn polynomial_expand(levels: usize, length: usize) -> Vec<Natural> {
    let factor = vec![BigUint::one(); levels];
    let mut poly = vec![BigUint::one()];
    for _ in 0..length {
        let mut next = vec![BigUint::zero(); poly.len() + factor.len() - 1];
        for (a, x) in poly.iter().enumerate() {
            for (b, y) in factor.iter().enumerate() {
                next[a + b] += x * y;
            }
        }
        poly = next;
    }
    poly
}

/// `C_N(K1 + K2, i) == sum_{i1 + i2 = i} C_N(K1, i1) C_N(K2, i2)`.
pub fn vandermonde_check(levels: usize, k1: usize, k2: usize, i: usize) -> Result<bool> {
    let whole = NomialParams::new(levels, k1 + k2, i)?;
    let lhs = nomial(whole);
    let mut rhs = BigUint::zero();
    for i1 in 0..=i.min(max_sum(levels, k1)) {
        let i2 = i - i1;
        if i2 > max_sum(levels, k2) {
            continue;
        }
        rhs += nomial_or_zero(levels, k1, i1) * nomial_or_zero(levels, k2, i2);
    }
    Ok(lhs == rhs)
}

/// Rows `C_N(K, 0..=(N-1)K)` for `K = 0..=K_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NomialTable {
    levels: usize,
    rows: Vec<Vec<Natural>>,
}

impl NomialTable {
    /// Row `K` is obtained from row `K-1` by summing windows of width `N`.
    pub fn new(levels: usize, max_length: usize) -> Self {
        assert!(levels >= 1, "N-nomial table needs N >= 1");
        let mut rows = vec![vec![BigUint::one()]];
        for k in 1..=max_length {
            let prev: &Vec<Natural> = &rows[k - 1];
            let width = max_sum(levels, k) + 1;
            let mut row = Vec::with_capacity(width);
            for i in 0..width {
                let lo = i.saturating_sub(levels - 1);
                let hi = i.min(prev.len() - 1);
                let s: Natural = if lo <= hi { prev[lo..=hi].iter().sum() } else { BigUint::zero() };
                row.push(s);
            }
            rows.push(row);
        }
        NomialTable { levels, rows }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn max_length(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, length: usize) -> &[Natural] {
        &self.rows[length]
    }

    pub fn get(&self, length: usize, sum: usize) -> Option<&Natural> {
        self.rows.get(length).and_then(|r| r.get(sum))
    }

    /// One line per `K`: `K,C(K,0),C(K,1),...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, row) in self.rows.iter().enumerate() {
            out.push_str(&k.to_string());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// The three multichoose summation identities for a given `n >= 1` and `m`:
///
/// 1. `sum_{j<m} mc(n, j) = mc(m, n)` for `m >= 1`
/// 2. `sum_{j<m} mc(n, j) j = n mc(m-1, n+1)` for `m >= 2`
/// 3. `sum_{j<m} mc(n, j) j^2 = n (n+1) mc(m-2, n+2) + n mc(m-1, n+1)` for `m >= 3`
///
/// Entries are `None` where `m` is below the identity's bound.
pub fn multichoose_sum_identities(n: u64, m: u64) -> Result<[Option<bool>; 3]> {
    if n == 0 {
        return Err(Error::Domain("identities need n >= 1".into()));
    }
    let terms = (0..m)
        .map(|j| multichoose(n, j).map(|c| (c, BigUint::from(j))))
        .collect::<Result<Vec<_>>>()?;
    let s0: Natural = terms.iter().map(|(c, _)| c.clone()).sum();
    let s1: Natural = terms.iter().map(|(c, j)| c * j).sum();
    let s2: Natural = terms.iter().map(|(c, j)| c * j * j).sum();
    let bn = BigUint::from(n);
    let first = (m >= 1).then(|| multichoose(m, n).map(|r| r == s0)).transpose()?;
    let second = (m >= 2)
        .then(|| multichoose(m - 1, n + 1).map(|r| &bn * r == s1))
        .transpose()?;
    let third = (m >= 3)
        .then(|| -> Result<bool> {
            let r = &bn * (n + 1) * multichoose(m - 2, n + 2)? + &bn * multichoose(m - 1, n + 1)?;
            Ok(r == s2)
        })
        .transpose()?;
    Ok([first, second, third])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiset::binom;

    fn p(n: usize, k: usize, i: usize) -> NomialParams {
        NomialParams::new(n, k, i).unwrap()
    }

    fn n(v: u64) -> Natural {
        BigUint::from(v)
    }

    #[test]
    fn sequence_route_examples() {
        assert_eq!(nomial_enum_sequences(p(3, 4, 2), DEFAULT_BUDGET).unwrap(), n(10));
        for k in 0..=8 {
            for i in 0..=k {
                assert_eq!(
                    nomial_enum_sequences(p(2, k, i), DEFAULT_BUDGET).unwrap(),
                    binom(k as u64, i as u64).unwrap()
                );
            }
        }
        for levels in 1..5 {
            assert_eq!(nomial_enum_sequences(p(levels, 0, 0), DEFAULT_BUDGET).unwrap(), n(1));
        }
    }

    #[test]
    fn sequence_route_budget() {
        let err = nomial_enum_sequences(p(10, 8, 3), DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn multiset_route_examples() {
        assert_eq!(nomial_via_multisets(p(4, 4, 3)), n(20));
        assert_eq!(nomial_via_multisets(p(9, 6, 8)), n(1287));
        assert_eq!(nomial_via_multisets(p(4, 5, 7)), n(155));
    }

    #[test]
    fn recursive_route_examples() {
        assert_eq!(nomial_recursive(p(3, 3, 3)), n(7));
        for k in 0..6 {
            assert_eq!(nomial_recursive(p(1, k, 0)), n(1));
        }
        assert_eq!(nomial_recursive(p(5, 4, 9)), nomial_via_multisets(p(5, 4, 9)));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(nomial_closed_form(p(9, 6, 8)).unwrap(), n(1287));
        assert_eq!(nomial_closed_form(p(4, 4, 3)).unwrap(), n(20));
        assert_eq!(nomial_closed_form(p(7, 3, 4)).unwrap(), n(15));
        assert_eq!(nomial_enum_sequences(p(7, 3, 4), DEFAULT_BUDGET).unwrap(), n(15));
        assert!(nomial_closed_form(p(3, 3, 4)).is_err());
        assert!(nomial_closed_form(p(3, 0, 0)).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(NomialParams::new(0, 1, 0).is_err());
        assert!(matches!(NomialParams::new(3, 2, 5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn prefix_sum_examples() {
        // n = N = 9, K = 6: both sides computed inside; value from the table.
        let table = NomialTable::new(9, 6);
        let direct: Natural = table.row(6)[..9].iter().sum();
        assert_eq!(nomial_prefix_sum(9, 6, 9).unwrap(), direct);
        // 9/6 * multichoose(6, 9) = 9/6 * C(14, 9) = 3003
        assert_eq!(direct, n(3003));
        assert_eq!(nomial_prefix_sum(5, 3, 0).unwrap(), n(0));
        assert_eq!(nomial_prefix_sum(5, 3, 1).unwrap(), n(1));
        assert!(nomial_prefix_sum(5, 0, 1).is_err());
        assert!(nomial_prefix_sum(5, 3, 6).is_err());
    }

    #[test]
    fn polynomial_rows() {
        let want: Vec<Natural> = [1u64, 4, 10, 16, 19, 16, 10, 4, 1].iter().map(|&v| n(v)).collect();
        assert_eq!(polynomial_expand(3, 4), want);
        let want: Vec<Natural> = [1u64, 4, 10, 20, 31, 40, 44, 40, 31, 20, 10, 4, 1]
            .iter()
            .map(|&v| n(v))
            .collect();
        assert_eq!(polynomial_expand(4, 4), want);
        for k in 0..5 {
            assert_eq!(polynomial_expand(1, k), vec![n(1)]);
        }
    }

    #[test]
    fn vandermonde_examples() {
        assert!(vandermonde_check(3, 2, 2, 4).unwrap());
        assert_eq!(nomial(p(3, 4, 4)), n(19));
        for k1 in 0..5 {
            for k2 in 0..5 {
                for i in 0..=(k1 + k2) {
                    assert!(vandermonde_check(2, k1, k2, i).unwrap());
                }
            }
        }
        assert!(vandermonde_check(3, 1, 1, 5).is_err());
    }

    #[test]
    fn table_shape() {
        let t = NomialTable::new(4, 5);
        assert_eq!(t.row(5).len(), 16);
        assert_eq!(t.get(5, 7), Some(&n(155)));
        assert_eq!(t.to_csv().lines().nth(2).unwrap(), "2,1,2,3,4,3,2,1");
    }

    #[test]
    fn lemma_identities_small() {
        for nn in 1..=8 {
            for m in 1..=10 {
                let r = multichoose_sum_identities(nn, m).unwrap();
                for v in r.iter().flatten() {
                    assert!(*v, "n={nn} m={m} {r:?}");
                }
            }
        }
        assert_eq!(multichoose_sum_identities(2, 1).unwrap()[1], None);
    }

    #[test]
    fn sequences_odometer() {
        assert_eq!(Sequences::new(3, 2).count(), 9);
        assert_eq!(Sequences::new(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }
}
