//! The sum-preserving shift chain on `M[K, i](N)`, its inversion to a chain
//! on levels, and exact stationarity checks.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boltzmann::EnergyConfig;
use crate::dist::{flrn_channel, pushforward_with, ratio, to_f64, total_variation, Channel, Dist, Rational};
use crate::error::{Error, Result};
use crate::multiset::{enumerate_multisets_with_sum, Multiset, Natural};
use crate::nomial::nomial_or_zero;
use crate::par::Execution;

/// Largest space for which [`transition_matrix`] is produced.
pub const MATRIX_LIMIT: usize = 10_000;

/// The configurations `M[K, i](N)` in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSpace {
    config: EnergyConfig,
    states: Vec<Multiset>,
}

impl ShiftSpace {
    pub fn new(config: EnergyConfig) -> Self {
        let states = enumerate_multisets_with_sum(config.levels(), config.particles(), config.sum())
            .expect("validated config")
            .collect();
        ShiftSpace { config, states }
    }

    pub fn config(&self) -> EnergyConfig {
        self.config
    }

    pub fn states(&self) -> &[Multiset] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, phi: &Multiset) -> Option<usize> {
        if phi.ground().len() != self.config.levels() || !phi.ground().is_numeric() {
            return None;
        }
        self.states.binary_search(phi).ok()
    }

    pub fn contains(&self, phi: &Multiset) -> bool {
        self.index_of(phi).is_some()
    }

    fn check(&self, phi: &Multiset) -> Result<()> {
        if self.contains(phi) {
            Ok(())
        } else {
            Err(Error::NotInSpace(phi.to_string()))
        }
    }
}

/// One step of the chain from `phi`.
///
/// With probability `phi(0)/K` a ground-level particle is drawn and nothing
/// changes. Otherwise a particle at `d > 0` moves down to `d-1` (giving
/// `phi_d`), and then a particle at some `u < N-1` of `phi_d`, drawn in
/// proportion to `phi_d(u)`, moves up to `u+1`.
pub fn shift(space: &ShiftSpace, phi: &Multiset) -> Result<Dist<Multiset>> {
    space.check(phi)?;
    let n = space.config.levels();
    let k = phi.size() as u64;
    let mut pairs = vec![(phi.clone(), ratio(phi.count(0) as u64, k))];
    for d in 1..n {
        let Some(down) = phi.moved(d, d - 1) else {
            continue;
        };
        let free = k - down.count(n - 1) as u64;
        let pick = ratio(phi.count(d) as u64, k);
        for u in 0..n - 1 {
            if let Some(up) = down.moved(u, u + 1) {
                pairs.push((up, &pick * ratio(down.count(u) as u64, free)));
            }
        }
    }
    Dist::new(pairs)
}

pub fn shift_channel(space: Arc<ShiftSpace>) -> Channel<Multiset, Multiset> {
    Channel::new("shift", move |phi: &Multiset| shift(&space, phi))
}

/// `TV(c_*(omega), omega)`; zero exactly when `omega` is stationary for `c`.
pub fn stationarity_residual<X>(omega: &Dist<X>, c: &Channel<X, X>) -> Result<Rational>
where
    X: Ord + Clone + Send + Sync + 'static,
{
    stationarity_residual_with(omega, c, Execution::default())
}

pub fn stationarity_residual_with<X>(omega: &Dist<X>, c: &Channel<X, X>, exec: Execution) -> Result<Rational>
where
    X: Ord + Clone + Send + Sync + 'static,
{
    Ok(total_variation(&pushforward_with(c, omega, exec)?, omega))
}

/// `sum_phi coefficient(phi) phi(j)` over the space.
pub fn flrn_dagger_denominator(space: &ShiftSpace, j: usize) -> Natural {
    space
        .states
        .iter()
        .map(|phi| phi.coefficient() * BigUint::from(phi.count(j)))
        .sum()
}

/// `K * C_N(K-1, i-j)`, the closed form of [`flrn_dagger_denominator`].
pub fn flrn_dagger_denominator_closed(cfg: EnergyConfig, j: usize) -> Natural {
    if j > cfg.sum() {
        return BigUint::default();
    }
    BigUint::from(cfg.particles()) * nomial_or_zero(cfg.levels(), cfg.particles() - 1, cfg.sum() - j)
}

/// Bayesian inversion of frequentist learning against the Boltzmann prior:
/// weight proportional to `coefficient(phi) phi(j)`.
pub fn flrn_dagger(space: &ShiftSpace, j: usize) -> Result<Dist<Multiset>> {
    let pairs = space.states.iter().map(|phi| {
        let w = phi.coefficient() * BigUint::from(phi.count(j));
        (phi.clone(), Rational::from_integer(w.into()))
    });
    Dist::normalize(pairs).map_err(|e| match e {
        Error::EmptySupport => Error::Unattainable(j),
        other => other,
    })
}

pub fn flrn_dagger_channel(space: Arc<ShiftSpace>) -> Channel<usize, Multiset> {
    Channel::new("flrn-dagger", move |j: &usize| flrn_dagger(&space, *j))
}

/// `flrn . shift . flrn_dagger` as a chain on levels.
pub fn shift_on_numbers(space: Arc<ShiftSpace>) -> Channel<usize, usize> {
    flrn_dagger_channel(Arc::clone(&space))
        .then(&shift_channel(space))
        .then(&flrn_channel())
}

/// `(step, TV(omega_step, reference))` for `step = 0..=steps`, exact.
pub fn iterate_chain<X>(
    start: &Dist<X>,
    c: &Channel<X, X>,
    steps: usize,
    reference: &Dist<X>,
    exec: Execution,
) -> Result<Vec<(usize, Rational)>>
where
    X: Ord + Clone + Send + Sync + 'static,
{
    let mut out = Vec::with_capacity(steps + 1);
    let mut current = start.clone();
    out.push((0, total_variation(&current, reference)));
    for step in 1..=steps {
        current = pushforward_with(c, &current, exec)?;
        out.push((step, total_variation(&current, reference)));
    }
    Ok(out)
}

/// Nonzero entries `(from, to, probability)` of the shift chain, indexed by
/// position in [`ShiftSpace::states`].
pub fn transition_matrix(space: &ShiftSpace) -> Result<Vec<(usize, usize, Rational)>> {
    if space.len() > MATRIX_LIMIT {
        return Err(Error::BudgetExceeded {
            needed: space.len().to_string(),
            budget: MATRIX_LIMIT as u64,
        });
    }
    let mut out = Vec::new();
    for (from, phi) in space.states.iter().enumerate() {
        for (psi, w) in shift(space, phi)?.iter() {
            let to = space.index_of(psi).ok_or_else(|| Error::NotInSpace(psi.to_string()))?;
            out.push((from, to, w.clone()));
        }
    }
    Ok(out)
}

/// Draw from a distribution with a float inverse-CDF; for demos only.
pub fn sample<T: Ord + Clone, R: Rng>(d: &Dist<T>, rng: &mut R) -> T {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = None;
    for (x, w) in d.iter() {
        acc += to_f64(w);
        if u < acc {
            return x.clone();
        }
        last = Some(x);
    }
    last.expect("distributions are nonempty").clone()
}

/// A seeded random walk of `steps` shift moves from `start`.
pub fn sample_trajectory(space: &ShiftSpace, start: &Multiset, steps: usize, seed: u64) -> Result<Vec<Multiset>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut path = vec![start.clone()];
    let mut current = start.clone();
    for _ in 0..steps {
        current = sample(&shift(space, &current)?, &mut rng);
        path.push(current.clone());
    }
    Ok(path)
}
