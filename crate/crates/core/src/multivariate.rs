//! Coefficients indexed by multisets and the urn-style distributions built
//! from them: hypergeometric, Pólya, nomial, and Boltzmann over several
//! kinds of particles.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::dist::{flrn, nat_ratio, Dist};
use crate::error::{Error, Result};
use crate::multiset::{binom, enumerate_below, enumerate_multisets, multichoose, GroundSet, Multiset, Natural};
use crate::nomial::{max_sum, nomial_or_zero};

/// `prod_x binom(psi(x), phi(x))`, for `phi <= psi`.
pub fn mult_binom(psi: &Multiset, phi: &Multiset) -> Result<Natural> {
    if !phi.leq(psi)? {
        return Err(Error::Domain(format!("{phi} is not below {psi}")));
    }
    psi.counts()
        .iter()
        .zip(phi.counts())
        .try_fold(BigUint::one(), |acc, (&a, &b)| Ok(acc * binom(a as u64, b as u64)?))
}

/// `prod_x multichoose(psi(x), phi(x))`, for `psi(x) >= 1` everywhere.
pub fn mult_multichoose(psi: &Multiset, phi: &Multiset) -> Result<Natural> {
    psi.same_ground(phi)?;
    require_full(psi)?;
    psi.counts()
        .iter()
        .zip(phi.counts())
        .try_fold(BigUint::one(), |acc, (&a, &b)| Ok(acc * multichoose(a as u64, b as u64)?))
}

fn require_full(psi: &Multiset) -> Result<()> {
    if psi.counts().contains(&0) {
        return Err(Error::Domain(format!(
            "{psi} must contain every element of its ground at least once"
        )));
    }
    Ok(())
}

/// Draw-and-remove: weight `mult_binom(psi, phi) / binom(L, K)` on `phi <=_K psi`.
pub fn hypergeometric(k: usize, psi: &Multiset) -> Result<Dist<Multiset>> {
    let l = psi.size();
    if k > l {
        return Err(Error::OutOfRange {
            what: "draw size",
            value: k as u64,
            max: l as u64,
        });
    }
    let total = binom(l as u64, k as u64)?;
    let pairs = enumerate_below(psi, k)
        .map(|phi| Ok((phi.clone(), nat_ratio(&mult_binom(psi, &phi)?, &total))))
        .collect::<Result<Vec<_>>>()?;
    Dist::new(pairs)
}

/// Draw-and-duplicate: weight `mult_multichoose(psi, phi) / multichoose(L, K)`
/// on `M[K](X)`.
pub fn polya(k: usize, psi: &Multiset) -> Result<Dist<Multiset>> {
    require_full(psi)?;
    let total = multichoose(psi.size() as u64, k as u64)?;
    let pairs = enumerate_multisets(psi.ground(), k)
        .map(|phi| Ok((phi.clone(), nat_ratio(&mult_multichoose(psi, &phi)?, &total))))
        .collect::<Result<Vec<_>>>()?;
    Dist::new(pairs)
}

/// `sum_{phi <=_K psi} mult_binom(psi, phi) == binom(L, K)`.
pub fn vandermonde_binom(psi: &Multiset, k: usize) -> Result<bool> {
    let lhs = enumerate_below(psi, k)
        .map(|phi| mult_binom(psi, &phi))
        .sum::<Result<Natural>>()?;
    Ok(lhs == binom(psi.size() as u64, k as u64)?)
}

/// `sum_{phi in M[K](X)} mult_multichoose(psi, phi) == multichoose(L, K)`.
pub fn vandermonde_multichoose(psi: &Multiset, k: usize) -> Result<bool> {
    let lhs = enumerate_multisets(psi.ground(), k)
        .map(|phi| mult_multichoose(psi, &phi))
        .sum::<Result<Natural>>()?;
    Ok(lhs == multichoose(psi.size() as u64, k as u64)?)
}

/// `C_N(psi, phi) = prod_x C_N(psi(x), phi(x))`, for `phi <= (N-1) psi`.
pub fn nomial_coeff_multisets(levels: usize, psi: &Multiset, phi: &Multiset) -> Result<Natural> {
    if levels == 0 {
        return Err(Error::EmptyGround);
    }
    if !phi.leq(&psi.scale(levels - 1))? {
        return Err(Error::Domain(format!("{phi} is not below {} * ({psi})", levels - 1)));
    }
    Ok(psi
        .counts()
        .iter()
        .zip(phi.counts())
        .map(|(&a, &b)| nomial_or_zero(levels, a, b))
        .product())
}

fn check_draw(levels: usize, psi: &Multiset, i: usize) -> Result<()> {
    if levels == 0 {
        return Err(Error::EmptyGround);
    }
    let max = max_sum(levels, psi.size());
    if i > max {
        return Err(Error::OutOfRange {
            what: "sum",
            value: i as u64,
            max: max as u64,
        });
    }
    Ok(())
}

/// `sum_{phi <=_i (N-1) psi} C_N(psi, phi) == C_N(L, i)`.
pub fn vandermonde_nomial(levels: usize, psi: &Multiset, i: usize) -> Result<bool> {
    check_draw(levels, psi, i)?;
    let lhs = enumerate_below(&psi.scale(levels - 1), i)
        .map(|phi| nomial_coeff_multisets(levels, psi, &phi))
        .sum::<Result<Natural>>()?;
    Ok(lhs == nomial_or_zero(levels, psi.size(), i))
}

/// Weight `C_N(psi, phi) / C_N(L, i)` on `phi <=_i (N-1) psi`, for any `N`.
pub fn nomial_distribution_with_levels(levels: usize, i: usize, psi: &Multiset) -> Result<Dist<Multiset>> {
    check_draw(levels, psi, i)?;
    let total = nomial_or_zero(levels, psi.size(), i);
    let pairs = enumerate_below(&psi.scale(levels - 1), i)
        .map(|phi| Ok((phi.clone(), nat_ratio(&nomial_coeff_multisets(levels, psi, &phi)?, &total))))
        .collect::<Result<Vec<_>>>()?;
    Dist::new(pairs)
}

/// [`nomial_distribution_with_levels`] with `N` the size of the ground.
pub fn nomial_distribution(i: usize, psi: &Multiset) -> Result<Dist<Multiset>> {
    nomial_distribution_with_levels(psi.ground().len(), i, psi)
}

/// One multiset per kind of particle, in ground order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(pub Vec<Multiset>);

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, m) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}

/// Boltzmann distribution for several kinds of particles: `psi(x)` particles
/// of kind `x` spread over `N` levels with total energy `i`. A tuple
/// `(phi_x)_x` with `||phi_x|| = psi(x)` gets weight
/// `prod coefficient(phi_x) / C_N(K, i)`.
pub fn boltzmann_multi(levels: usize, psi: &Multiset, i: usize) -> Result<Dist<Tuple>> {
    check_draw(levels, psi, i)?;
    let ground = GroundSet::levels(levels)?;
    let parts: Vec<Vec<(Multiset, usize, Natural)>> = psi
        .counts()
        .iter()
        .map(|&k| {
            enumerate_multisets(&ground, k)
                .map(|m| {
                    let s = m.som().expect("numeric ground");
                    let c = m.coefficient();
                    (m, s, c)
                })
                .collect()
        })
        .collect();
    let total = nomial_or_zero(levels, psi.size(), i);
    let mut pairs = Vec::new();
    let mut stack = Vec::with_capacity(parts.len());
    spread(&parts, i, BigUint::one(), &mut stack, &mut |tuple, w| {
        pairs.push((Tuple(tuple.to_vec()), nat_ratio(w, &total)));
    });
    Dist::new(pairs)
}

fn spread<F: FnMut(&[Multiset], &Natural)>(
    parts: &[Vec<(Multiset, usize, Natural)>],
    left: usize,
    weight: Natural,
    stack: &mut Vec<Multiset>,
    emit: &mut F,
) {
    let Some((first, rest)) = parts.split_first() else {
        if left == 0 {
            emit(stack, &weight);
        }
        return;
    };
    for (m, s, c) in first {
        if *s <= left {
            stack.push(m.clone());
            spread(rest, left - s, &weight * c, stack, emit);
            stack.pop();
        }
    }
}

/// Image of [`boltzmann_multi`] under componentwise frequentist learning:
/// a distribution on tuples of levels. Needs `psi(x) >= 1` everywhere.
pub fn boltzmann_multi_numbers(levels: usize, psi: &Multiset, i: usize) -> Result<Dist<Vec<usize>>> {
    require_full(psi)?;
    let joint = boltzmann_multi(levels, psi, i)?;
    let mut pairs = Vec::new();
    for (t, w) in joint.iter() {
        let mut prods: Vec<(Vec<usize>, crate::dist::Rational)> = vec![(Vec::new(), w.clone())];
        for m in &t.0 {
            let f = flrn(m)?;
            prods = prods
                .into_iter()
                .flat_map(|(v, p)| {
                    f.iter().map(move |(j, q)| {
                        let mut v = v.clone();
                        v.push(*j);
                        (v, &p * q)
                    })
                })
                .collect();
        }
        pairs.extend(prods);
    }
    Dist::new(pairs)
}
