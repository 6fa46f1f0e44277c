//! The Boltzmann distributions on multisets, on numbers and on energy.

use num_bigint::BigInt;

use crate::dist::{flrn_channel, nat_ratio, pushforward, to_f64, Dist, Rational};
use crate::error::{Error, Result};
use crate::multiset::{accumulate, enumerate_multisets_with_sum, multichoose, GroundSet, Multiset};
use crate::nomial::{max_sum, nomial, nomial_or_zero, sequences_with_sum, NomialParams};

/// `N` levels, `K` particles and total energy `i`, with `N >= 1`, `K >= 1`
/// and `i <= (N-1) K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EnergyConfig {
    levels: usize,
    particles: usize,
    sum: usize,
}

impl EnergyConfig {
    pub fn new(levels: usize, particles: usize, sum: usize) -> Result<Self> {
        if particles == 0 {
            return Err(Error::Domain("need at least one particle".into()));
        }
        NomialParams::new(levels, particles, sum)?;
        Ok(EnergyConfig {
            levels,
            particles,
            sum,
        })
    }

    /// The energy family's config: `N = E + 1`, with `E >= 1` and `K >= 2`.
    pub fn energy(total_energy: usize, particles: usize) -> Result<Self> {
        if total_energy == 0 {
            return Err(Error::Domain("total energy must be at least 1".into()));
        }
        if particles < 2 {
            return Err(Error::Domain("energy family needs at least 2 particles".into()));
        }
        Self::new(total_energy + 1, particles, total_energy)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn sum(&self) -> usize {
        self.sum
    }

    pub fn max_sum(&self) -> usize {
        max_sum(self.levels, self.particles)
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::levels(self.levels).expect("levels >= 1")
    }

    /// The same `N` and `K` with total energy `(N-1) K - i`.
    pub fn reversed(&self) -> Self {
        EnergyConfig {
            sum: self.max_sum() - self.sum,
            ..*self
        }
    }

    fn params(&self) -> NomialParams {
        NomialParams::new(self.levels, self.particles, self.sum).expect("validated")
    }
}

/// Weight `coefficient(phi) / C_N(K, i)` on each `phi` of size `K` and sum `i`.
pub fn boltzmann_on_multisets(cfg: EnergyConfig) -> Dist<Multiset> {
    let total = nomial(cfg.params());
    let pairs = enumerate_multisets_with_sum(cfg.levels, cfg.particles, cfg.sum)
        .expect("validated")
        .map(|m| {
            let w = nat_ratio(&m.coefficient(), &total);
            (m, w)
        });
    Dist::new(pairs).expect("multiset coefficients add up to the nomial")
}

/// Weight `C_N(K-1, i-j) / C_N(K, i)` on each level `j <= i`.
pub fn boltzmann_on_numbers(cfg: EnergyConfig) -> Dist<usize> {
    let total = nomial(cfg.params());
    let pairs = (0..cfg.levels.min(cfg.sum + 1)).map(|j| {
        let w = nat_ratio(&nomial_or_zero(cfg.levels, cfg.particles - 1, cfg.sum - j), &total);
        (j, w)
    });
    Dist::new(pairs).expect("Vandermonde normalisation")
}

/// [`boltzmann_on_numbers`] as the frequentist-learning image of
/// [`boltzmann_on_multisets`].
pub fn boltzmann_on_numbers_via_flrn(cfg: EnergyConfig) -> Result<Dist<usize>> {
    pushforward(&flrn_channel(), &boltzmann_on_multisets(cfg))
}

/// Weight `multichoose(K-1, E-j) / multichoose(K, E)` on `0..=E`.
pub fn boltzmann_on_energy(total_energy: usize, particles: usize) -> Result<Dist<usize>> {
    EnergyConfig::energy(total_energy, particles)?;
    let (e, k) = (total_energy as u64, particles as u64);
    let total = multichoose(k, e)?;
    let pairs = (0..=e)
        .map(|j| Ok((j as usize, nat_ratio(&multichoose(k - 1, e - j)?, &total))))
        .collect::<Result<Vec<_>>>()?;
    Dist::new(pairs)
}

/// Uniform distribution on the sequences in `[0, N)^K` with sum `i`.
pub fn microstate_uniform(cfg: EnergyConfig, budget: u64) -> Result<Dist<Vec<usize>>> {
    Dist::uniform(sequences_with_sum(cfg.params(), budget)?)
}

/// Image of a sequence distribution under accumulation.
pub fn accumulation_image(micro: &Dist<Vec<usize>>, ground: &GroundSet) -> Result<Dist<Multiset>> {
    for s in micro.support() {
        accumulate(ground, s)?;
    }
    Ok(micro.image(|s| accumulate(ground, s).expect("checked")))
}

/// Image of a sequence distribution under the `n`-th projection.
pub fn projection_marginal(micro: &Dist<Vec<usize>>, n: usize) -> Result<Dist<usize>> {
    if let Some(s) = micro.support().find(|s| s.len() <= n) {
        return Err(Error::OutOfRange {
            what: "projection index",
            value: n as u64,
            max: s.len().saturating_sub(1) as u64,
        });
    }
    Ok(micro.image(|s| s[n]))
}

/// `K * boltzmann_on_energy(E)(K)`, exact.
pub fn scaled_unnormalized_exact(total_energy: usize, particles: usize) -> Result<Vec<Rational>> {
    let d = boltzmann_on_energy(total_energy, particles)?;
    let k = Rational::from_integer(BigInt::from(particles));
    Ok((0..=total_energy).map(|j| d.weight(&j) * &k).collect())
}

/// [`scaled_unnormalized_exact`] as floats.
pub fn scaled_unnormalized(total_energy: usize, particles: usize) -> Result<Vec<f64>> {
    Ok(scaled_unnormalized_exact(total_energy, particles)?
        .iter()
        .map(to_f64)
        .collect())
}

/// Probabilities of a level distribution at `0..levels`, zeros included.
pub fn dense_weights(d: &Dist<usize>, levels: usize) -> Vec<Rational> {
    (0..levels).map(|j| d.weight(&j)).collect()
}
