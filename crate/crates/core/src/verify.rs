//! Exhaustive identity sweeps. Each check walks every case inside its bounds
//! and records the first few counterexamples.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approx::{max_entropy_dist, max_entropy_polynomial, mean_f64, ratio_approx};
use crate::boltzmann::{
    accumulation_image, boltzmann_on_energy, boltzmann_on_multisets, boltzmann_on_numbers,
    boltzmann_on_numbers_via_flrn, microstate_uniform, projection_marginal, EnergyConfig,
};
use crate::dist::{
    entropy_f64, flrn, flrn_channel, mean, multiset_coefficient_distribution, pushforward_with, ratio, variance,
    Channel, Dist, Rational,
};
use crate::error::Result;
use crate::markov::{
    flrn_dagger_channel, flrn_dagger_denominator, flrn_dagger_denominator_closed, shift, shift_channel,
    shift_on_numbers, ShiftSpace,
};
use crate::multiset::{accumulate, enumerate_multisets, multichoose, GroundSet, Multiset};
use crate::multivariate::{
    hypergeometric, nomial_distribution, polya, vandermonde_binom, vandermonde_multichoose, vandermonde_nomial,
};
use crate::nomial::{
    multichoose_sum_identities, nomial, nomial_closed_form, nomial_enum_sequences_with, nomial_prefix_sum,
    nomial_recursive, nomial_via_multisets, polynomial_expand, vandermonde_check, NomialParams, NomialTable,
    Sequences, DEFAULT_BUDGET,
};
use crate::par::Execution;

/// Sweep bounds: levels `N <= max_levels`, sizes `K <= max_size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_levels: usize,
    pub max_size: usize,
}

impl Bounds {
    pub fn new(max_levels: usize, max_size: usize) -> Self {
        Bounds { max_levels, max_size }
    }

    /// Every valid `(N, K, i)` with `N >= 1`, `K >= 1`.
    pub fn configs(&self) -> Vec<EnergyConfig> {
        let mut out = Vec::new();
        for n in 1..=self.max_levels {
            for k in 1..=self.max_size {
                for i in 0..=(n - 1) * k {
                    out.push(EnergyConfig::new(n, k, i).expect("in range"));
                }
            }
        }
        out
    }
}

/// Outcome of one property sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub cases: u64,
    pub failed: u64,
    /// The first few counterexamples.
    pub examples: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.cases > 0
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "PASS {} ({} cases)", self.name, self.cases)
        } else if self.cases == 0 {
            write!(f, "FAIL {} (no cases in range)", self.name)
        } else {
            write!(f, "FAIL {} ({} of {} cases)", self.name, self.failed, self.cases)?;
            for e in &self.examples {
                write!(f, "\n    {e}")?;
            }
            Ok(())
        }
    }
}

struct Recorder {
    check: Check,
}

impl Recorder {
    fn new(name: &'static str) -> Self {
        Recorder {
            check: Check {
                name,
                cases: 0,
                failed: 0,
                examples: Vec::new(),
            },
        }
    }

    /// Record one case; an `Err` counts as a failure.
    fn case<F: FnOnce() -> Result<bool>>(&mut self, label: impl fmt::Display, f: F) {
        self.check.cases += 1;
        let outcome = match f() {
            Ok(true) => return,
            Ok(false) => format!("{label}: identity fails"),
            Err(e) => format!("{label}: {e}"),
        };
        self.check.failed += 1;
        if self.check.examples.len() < 5 {
            self.check.examples.push(outcome);
        }
    }

    fn done(self) -> Check {
        self.check
    }
}

fn levels(n: usize) -> GroundSet {
    GroundSet::levels(n).expect("n >= 1")
}

pub type Sweep = fn(&Bounds, Execution) -> Check;

// multisets

pub fn multiset_enumeration_count(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("multiset enumeration yields multichoose(|X|, K) multisets");
    for n in 1..=b.max_levels {
        for k in 0..=b.max_size {
            r.case(format!("|X|={n} K={k}"), || {
                Ok(BigUint::from(enumerate_multisets(&levels(n), k).count()) == multichoose(n as u64, k as u64)?)
            });
        }
    }
    r.done()
}

pub fn coefficient_counts_sequences(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("multiset coefficient counts the sequences accumulating to it");
    for n in 1..=b.max_levels.min(4) {
        let g = levels(n);
        for k in 0..=b.max_size.min(6) {
            let mut counts: BTreeMap<Multiset, u64> = BTreeMap::new();
            for s in Sequences::new(n, k) {
                *counts.entry(accumulate(&g, &s).expect("levels")).or_default() += 1;
            }
            for phi in enumerate_multisets(&g, k) {
                let c = counts.get(&phi).copied().unwrap_or(0);
                r.case(&phi, || Ok(phi.coefficient() == BigUint::from(c)));
            }
        }
    }
    r.done()
}

pub fn coefficient_sum(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("multiset coefficients over M[K](X) add up to |X|^K");
    for n in 1..=b.max_levels {
        for k in 0..=b.max_size {
            r.case(format!("|X|={n} K={k}"), || {
                let s: BigUint = enumerate_multisets(&levels(n), k).map(|m| m.coefficient()).sum();
                Ok(s == BigUint::from(n).pow(k as u32))
            });
        }
    }
    r.done()
}

pub fn reversal_of_multisets(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("reversal keeps the coefficient and mirrors the sum");
    for n in 1..=b.max_levels {
        for k in 0..=b.max_size {
            for phi in enumerate_multisets(&levels(n), k) {
                r.case(&phi, || {
                    let rev = phi.reverse()?;
                    Ok(rev.coefficient() == phi.coefficient()
                        && rev.som()? == (n - 1) * k - phi.som()?
                        && rev.reverse()? == phi)
                });
            }
        }
    }
    r.done()
}

pub fn multichoose_sums(_: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("multichoose summation identities, n <= 8");
    for n in 1..=8u64 {
        for m in 1..=12u64 {
            r.case(format!("n={n} m={m}"), || {
                Ok(multichoose_sum_identities(n, m)?.iter().all(|x| x.unwrap_or(true)))
            });
        }
    }
    r.done()
}

// nomials

fn nomial_cases(b: &Bounds) -> Vec<NomialParams> {
    let mut out = Vec::new();
    for n in 1..=b.max_levels {
        for k in 0..=b.max_size {
            for i in 0..=(n - 1) * k {
                out.push(NomialParams::new(n, k, i).expect("in range"));
            }
        }
    }
    out
}

pub fn nomial_routes(b: &Bounds, exec: Execution) -> Check {
    let mut r = Recorder::new("all N-nomial routes agree");
    for p in nomial_cases(b) {
        let table = NomialTable::new(p.levels(), p.length());
        let poly = polynomial_expand(p.levels(), p.length());
        r.case(format!("C_{}({},{})", p.levels(), p.length(), p.sum()), || {
            let v = nomial_enum_sequences_with(p, DEFAULT_BUDGET, exec)?;
            let mut ok = nomial_via_multisets(p) == v
                && nomial_recursive(p) == v
                && nomial(p) == v
                && table.get(p.length(), p.sum()) == Some(&v)
                && poly[p.sum()] == v;
            if p.sum() < p.levels() && p.length() >= 1 {
                ok &= nomial_closed_form(p)? == v;
            }
            Ok(ok)
        });
    }
    r.done()
}

pub fn nomial_row_sums(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("N-nomial rows add up to N^K");
    for n in 1..=b.max_levels {
        let t = NomialTable::new(n, b.max_size);
        for k in 0..=b.max_size {
            r.case(format!("N={n} K={k}"), || {
                Ok(t.row(k).iter().sum::<BigUint>() == BigUint::from(n).pow(k as u32))
            });
        }
    }
    r.done()
}

pub fn nomial_palindrome(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("N-nomial rows are palindromes");
    for p in nomial_cases(b) {
        let top = (p.levels() - 1) * p.length();
        r.case(format!("C_{}({},{})", p.levels(), p.length(), p.sum()), || {
            Ok(nomial(p) == nomial(NomialParams::new(p.levels(), p.length(), top - p.sum())?))
        });
    }
    r.done()
}

pub fn nomial_vandermonde(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("N-nomial Vandermonde convolution");
    for n in 1..=b.max_levels {
        for k1 in 0..=b.max_size {
            for k2 in 0..=b.max_size - k1 {
                for i in 0..=(n - 1) * (k1 + k2) {
                    r.case(format!("N={n} K1={k1} K2={k2} i={i}"), || vandermonde_check(n, k1, k2, i));
                }
            }
        }
    }
    r.done()
}

pub fn nomial_prefix_sums(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("N-nomial prefix sums below N");
    for n in 1..=b.max_levels {
        for k in 1..=b.max_size {
            for m in 0..=n {
                r.case(format!("N={n} K={k} n={m}"), || nomial_prefix_sum(n, k, m).map(|_| true));
            }
        }
    }
    r.done()
}

pub fn nomial_polynomial_rows(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("polynomial expansion rows equal table rows");
    for n in 1..=b.max_levels {
        let t = NomialTable::new(n, b.max_size);
        for k in 0..=b.max_size {
            r.case(format!("N={n} K={k}"), || Ok(polynomial_expand(n, k) == t.row(k)));
        }
    }
    r.done()
}

// distributions

fn sums_to_one<T: Ord + Clone>(d: &Dist<T>) -> bool {
    d.iter().map(|(_, w)| w.clone()).sum::<Rational>().is_one()
}

pub fn distributions_normalised(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("constructed distributions add up to one");
    for n in 1..=b.max_levels {
        for k in 0..=b.max_size {
            let g = levels(n);
            r.case(format!("coefficients |X|={n} K={k}"), || {
                Ok(sums_to_one(&multiset_coefficient_distribution(&g, k)))
            });
            for phi in enumerate_multisets(&g, k).filter(|m| !m.is_empty()) {
                r.case(format!("flrn {phi}"), || Ok(sums_to_one(&flrn(&phi)?)));
            }
            r.case(format!("uniform {n}"), || Ok(sums_to_one(&Dist::uniform(0..n)?)));
        }
    }
    for cfg in b.configs() {
        r.case(format!("boltzmann {cfg:?}"), || {
            Ok(sums_to_one(&boltzmann_on_multisets(cfg)) && sums_to_one(&boltzmann_on_numbers(cfg)))
        });
    }
    r.done()
}

pub fn image_is_pushforward(b: &Bounds, exec: Execution) -> Check {
    let mut r = Recorder::new("image equals pushforward along a deterministic channel");
    let som = Channel::from_fn("som", |m: &Multiset| m.som().expect("levels"));
    for n in 1..=b.max_levels {
        for k in 0..=b.max_size {
            let omega = multiset_coefficient_distribution(&levels(n), k);
            r.case(format!("|X|={n} K={k}"), || {
                Ok(omega.image(|m| m.som().expect("levels")) == pushforward_with(&som, &omega, exec)?)
            });
        }
    }
    r.done()
}

pub fn learning_from_coefficients(b: &Bounds, exec: Execution) -> Check {
    let mut r = Recorder::new("learning from coefficient-weighted multisets is uniform");
    for n in 1..=b.max_levels.min(3) {
        for k in 1..=b.max_size.min(4) {
            let omega = multiset_coefficient_distribution(&levels(n), k);
            r.case(format!("|X|={n} K={k}"), || {
                Ok(pushforward_with(&flrn_channel(), &omega, exec)? == Dist::uniform(0..n)?)
            });
        }
    }
    r.done()
}

// boltzmann

pub fn boltzmann_routes(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("Boltzmann-on-numbers routes agree");
    for cfg in b.configs() {
        r.case(format!("{cfg:?}"), || {
            let d = boltzmann_on_numbers(cfg);
            let mut ok = boltzmann_on_numbers_via_flrn(cfg)? == d;
            if cfg.sum() >= 1 && cfg.particles() >= 2 && cfg.levels() == cfg.sum() + 1 {
                ok &= boltzmann_on_energy(cfg.sum(), cfg.particles())? == d;
            }
            Ok(ok)
        });
    }
    r.done()
}

pub fn boltzmann_multiset_reversal(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("Boltzmann-on-multisets is stable under reversal");
    for cfg in b.configs() {
        r.case(format!("{cfg:?}"), || {
            let d = boltzmann_on_multisets(cfg);
            Ok(d.image(|m| m.reverse().expect("levels")) == boltzmann_on_multisets(cfg.reversed()))
        });
    }
    r.done()
}

pub fn boltzmann_number_reversal(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("Boltzmann-on-numbers is stable under reversal");
    for cfg in b.configs() {
        let top = cfg.levels() - 1;
        r.case(format!("{cfg:?}"), || {
            Ok(boltzmann_on_numbers(cfg).image(|j| top - j) == boltzmann_on_numbers(cfg.reversed()))
        });
    }
    r.done()
}

pub fn boltzmann_mean(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("Boltzmann-on-numbers has mean i/K");
    for cfg in b.configs() {
        r.case(format!("{cfg:?}"), || {
            Ok(mean(&boltzmann_on_numbers(cfg)) == ratio(cfg.sum() as u64, cfg.particles() as u64))
        });
    }
    r.done()
}

pub fn energy_moments(_: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("Boltzmann-on-energy mean and variance, E <= 20, K <= 8");
    for e in 1..=20u64 {
        for k in 2..=8u64 {
            r.case(format!("E={e} K={k}"), || {
                let d = boltzmann_on_energy(e as usize, k as usize)?;
                Ok(mean(&d) == ratio(e, k) && variance(&d) == ratio(e * (e + k) * (k - 1), k * k * (k + 1)))
            });
        }
    }
    r.done()
}

pub fn support_truncation(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("Boltzmann-on-numbers lives on 0..=i when i < N");
    for cfg in b.configs().into_iter().filter(|c| c.sum() < c.levels()) {
        r.case(format!("{cfg:?}"), || {
            Ok(boltzmann_on_numbers(cfg).support().all(|&j| j <= cfg.sum()))
        });
    }
    r.done()
}

pub fn microstate_oracles(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("uniform microstates project onto both Boltzmann families");
    for cfg in b.configs() {
        r.case(format!("{cfg:?}"), || {
            let micro = microstate_uniform(cfg, DEFAULT_BUDGET)?;
            let numbers = boltzmann_on_numbers(cfg);
            let mut ok = accumulation_image(&micro, &cfg.ground())? == boltzmann_on_multisets(cfg);
            for n in 0..cfg.particles() {
                ok &= projection_marginal(&micro, n)? == numbers;
            }
            Ok(ok)
        });
    }
    r.done()
}

// markov

pub fn shift_conservation(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("shift is a distribution on the same size and sum");
    for cfg in b.configs() {
        let space = ShiftSpace::new(cfg);
        for phi in space.states() {
            r.case(phi, || {
                let d = shift(&space, phi)?;
                Ok(sums_to_one(&d)
                    && d.support()
                        .all(|psi| psi.size() == cfg.particles() && psi.som().ok() == Some(cfg.sum())))
            });
        }
    }
    r.done()
}

pub fn shift_stationarity(b: &Bounds, exec: Execution) -> Check {
    let mut r = Recorder::new("Boltzmann-on-multisets is stationary for shift");
    for cfg in b.configs() {
        r.case(format!("{cfg:?}"), || {
            let c = shift_channel(Arc::new(ShiftSpace::new(cfg)));
            let omega = boltzmann_on_multisets(cfg);
            Ok(pushforward_with(&c, &omega, exec)? == omega)
        });
    }
    r.done()
}

pub fn numbers_chain_stationarity(b: &Bounds, exec: Execution) -> Check {
    let mut r = Recorder::new("Boltzmann-on-numbers is stationary for the level chain");
    for cfg in b.configs() {
        r.case(format!("{cfg:?}"), || {
            let c = shift_on_numbers(Arc::new(ShiftSpace::new(cfg)));
            let omega = boltzmann_on_numbers(cfg);
            Ok(pushforward_with(&c, &omega, exec)? == omega)
        });
    }
    r.done()
}

pub fn bayesian_inversion(b: &Bounds, exec: Execution) -> Check {
    let mut r = Recorder::new("inverted learning restores Boltzmann-on-multisets");
    for cfg in b.configs() {
        r.case(format!("{cfg:?}"), || {
            let space = Arc::new(ShiftSpace::new(cfg));
            let ok = (0..cfg.levels())
                .all(|j| flrn_dagger_denominator(&space, j) == flrn_dagger_denominator_closed(cfg, j));
            let back = pushforward_with(&flrn_dagger_channel(space), &boltzmann_on_numbers(cfg), exec)?;
            Ok(ok && back == boltzmann_on_multisets(cfg))
        });
    }
    r.done()
}

// approximations

fn means(e: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..e).map(|m| ratio(m as u64, 1)).collect();
    out.push(ratio(1, 3));
    out.push(ratio(2 * e as u64 - 1, 2));
    out
}

pub fn ratio_geometric(_: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("ratio approximation is an exact geometric sequence");
    for e in 1..=12usize {
        for mu in means(e) {
            r.case(format!("E={e} mu={mu}"), || {
                let d = ratio_approx(e, &mu)?;
                let q = &mu / (&mu + Rational::one());
                Ok(sums_to_one(&d) && (0..e).all(|j| d.weight(&(j + 1)) == d.weight(&j) * &q))
            });
        }
    }
    r.done()
}

pub fn max_entropy_solution(_: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("maximum-entropy solve: single root, mean, entropy maximal");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for e in [2usize, 3, 5, 10, 25, 60] {
        for mu in means(e) {
            let m = crate::dist::to_f64(&mu);
            r.case(format!("E={e} mu={mu}"), || {
                // the coefficients (j - mu) change sign once, so there is one positive root
                let changes = (0..e).filter(|&j| (j as f64 - m) * (j as f64 + 1.0 - m) < 0.0).count()
                    + (0..=e).filter(|&j| j as f64 == m).count();
                let me = max_entropy_dist(e, &mu)?;
                let s = me.root.unwrap_or(f64::NAN);
                let scale: f64 = (0..=e).map(|j| s.powi(j as i32)).sum();
                let mut ok = changes == 1
                    && (max_entropy_polynomial(e, m, s) / scale).abs() < 1e-12
                    && (mean_f64(&me.weights) - m).abs() < 1e-9;
                let h = entropy_f64(me.weights.iter().copied());
                for _ in 0..20 {
                    let p = perturb(&me.weights, &mut rng);
                    ok &= entropy_f64(p.iter().copied()) <= h + 1e-12;
                }
                Ok(ok)
            });
        }
    }
    r.done()
}

/// A random distribution with the same total and mean as `w`.
pub fn perturb<R: Rng>(w: &[f64], rng: &mut R) -> Vec<f64> {
    let n = w.len();
    let js: Vec<f64> = (0..n).map(|j| j as f64).collect();
    let jm = js.iter().sum::<f64>() / n as f64;
    let cj: Vec<f64> = js.iter().map(|j| j - jm).collect();
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let avg = v.iter().sum::<f64>() / n as f64;
    v.iter_mut().for_each(|x| *x -= avg);
    let norm = cj.iter().map(|b| b * b).sum::<f64>();
    if norm > 0.0 {
        let coef = v.iter().zip(&cj).map(|(a, b)| a * b).sum::<f64>() / norm;
        v.iter_mut().zip(&cj).for_each(|(a, b)| *a -= coef * b);
    }
    let room = w
        .iter()
        .zip(&v)
        .filter(|(_, d)| **d < 0.0)
        .map(|(p, d)| p / -d)
        .fold(1.0f64, f64::min);
    w.iter().zip(&v).map(|(p, d)| p + 0.5 * room * d).collect()
}

// multivariate

/// A random urn over `size` kinds with `total` balls, each kind at least
/// `floor` times.
pub fn random_urn<R: Rng>(rng: &mut R, size: usize, total: usize, floor: usize) -> Multiset {
    let names: Vec<String> = (0..size).map(|c| char::from(b'a' + c as u8).to_string()).collect();
    let g = GroundSet::named(names).expect("distinct");
    let mut counts = vec![floor; size];
    for _ in 0..total - floor * size {
        counts[rng.gen_range(0..size)] += 1;
    }
    Multiset::from_counts(&g, counts).expect("sizes match")
}

fn urns(trials: usize, seed: u64, floor: usize) -> Vec<Multiset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let size = rng.gen_range(1..=4usize);
            let total = rng.gen_range((size * floor).max(1)..=8);
            random_urn(&mut rng, size, total, floor)
        })
        .collect()
}

/// Multiset Vandermonde identities on `trials` random urns.
pub fn urn_vandermonde(trials: usize, seed: u64) -> Check {
    let mut r = Recorder::new("multiset binomial and multichoose Vandermonde");
    for psi in urns(trials, seed, 0) {
        for k in 0..=psi.size() {
            r.case(format!("{psi} K={k}"), || vandermonde_binom(&psi, k));
        }
    }
    for psi in urns(trials, seed + 1, 1) {
        for k in 0..=8 {
            r.case(format!("{psi} K={k}"), || vandermonde_multichoose(&psi, k));
        }
    }
    r.done()
}

pub fn urn_nomial_vandermonde(trials: usize, seed: u64) -> Check {
    let mut r = Recorder::new("multiset N-nomial Vandermonde");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for psi in urns(trials, seed, 0) {
        let n = rng.gen_range(1..=5usize);
        for i in 0..=(n - 1) * psi.size() {
            r.case(format!("N={n} {psi} i={i}"), || vandermonde_nomial(n, &psi, i));
        }
    }
    r.done()
}

pub fn urn_learning(trials: usize, seed: u64, exec: Execution) -> Check {
    let mut r = Recorder::new("learning from hypergeometric, Polya and nomial draws recovers the urn");
    let f = flrn_channel();
    for psi in urns(trials, seed, 1) {
        let learned = flrn(&psi).expect("nonempty");
        let l = psi.size();
        let n = psi.ground().len();
        for k in 1..=l {
            r.case(format!("hypergeometric {psi} K={k}"), || {
                Ok(pushforward_with(&f, &hypergeometric(k, &psi)?, exec)? == learned)
            });
            r.case(format!("polya {psi} K={k}"), || {
                Ok(pushforward_with(&f, &polya(k, &psi)?, exec)? == learned)
            });
        }
        for i in 1..=(n - 1) * l {
            r.case(format!("nomial {psi} i={i}"), || {
                Ok(pushforward_with(&f, &nomial_distribution(i, &psi)?, exec)? == learned)
            });
        }
    }
    r.done()
}

pub fn urn_binary_case(trials: usize, seed: u64) -> Check {
    let mut r = Recorder::new("binary nomial distribution is hypergeometric");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let total = rng.gen_range(1..=8usize);
        let psi = random_urn(&mut rng, 2, total, 0);
        for i in 0..=total {
            r.case(format!("{psi} i={i}"), || Ok(nomial_distribution(i, &psi)? == hypergeometric(i, &psi)?));
        }
    }
    r.done()
}

pub fn multi_boltzmann_normalised(b: &Bounds, _: Execution) -> Check {
    let mut r = Recorder::new("multi-kind Boltzmann adds up to one");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 1..=b.max_levels.min(4) {
        for _ in 0..4 {
            let total = rng.gen_range(1..=b.max_size.clamp(1, 5));
            let kinds = rng.gen_range(1..=total.min(3));
            let psi = random_urn(&mut rng, kinds, total, 1);
            for i in 0..=(n - 1) * total {
                r.case(format!("N={n} {psi} i={i}"), || {
                    Ok(sums_to_one(&crate::multivariate::boltzmann_multi(n, &psi, i)?))
                });
            }
        }
    }
    r.done()
}

const URN_TRIALS: usize = 50;
const URN_SEED: u64 = 3;

fn vdm_sweep(_: &Bounds, _: Execution) -> Check {
    urn_vandermonde(URN_TRIALS, URN_SEED)
}

fn nomial_vdm_sweep(_: &Bounds, _: Execution) -> Check {
    urn_nomial_vandermonde(URN_TRIALS, URN_SEED)
}

fn learning_sweep(_: &Bounds, exec: Execution) -> Check {
    urn_learning(URN_TRIALS, URN_SEED, exec)
}

fn binary_sweep(_: &Bounds, _: Execution) -> Check {
    urn_binary_case(URN_TRIALS, URN_SEED)
}

/// Every sweep, in report order.
pub const ALL: &[Sweep] = &[
    multiset_enumeration_count,
    coefficient_counts_sequences,
    coefficient_sum,
    reversal_of_multisets,
    multichoose_sums,
    nomial_routes,
    nomial_row_sums,
    nomial_palindrome,
    nomial_vandermonde,
    nomial_prefix_sums,
    nomial_polynomial_rows,
    distributions_normalised,
    image_is_pushforward,
    learning_from_coefficients,
    boltzmann_routes,
    boltzmann_multiset_reversal,
    boltzmann_number_reversal,
    boltzmann_mean,
    energy_moments,
    support_truncation,
    microstate_oracles,
    shift_conservation,
    shift_stationarity,
    numbers_chain_stationarity,
    bayesian_inversion,
    ratio_geometric,
    max_entropy_solution,
    vdm_sweep,
    nomial_vdm_sweep,
    learning_sweep,
    binary_sweep,
    multi_boltzmann_normalised,
];

/// Run every sweep; checks run concurrently under [`Execution::Parallel`].
pub fn verify_all(bounds: &Bounds, exec: Execution) -> Vec<Check> {
    exec.map(ALL, |sweep| sweep(bounds, exec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes() {
        for check in verify_all(&Bounds::new(3, 3), Execution::default()) {
            assert!(check.passed(), "{check}");
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let b = Bounds::new(3, 3);
        assert_eq!(verify_all(&b, Execution::Sequential), verify_all(&b, Execution::Parallel));
    }

    #[test]
    fn failures_are_reported() {
        let mut r = Recorder::new("demo");
        r.case("one", || Ok(true));
        r.case("two", || Ok(false));
        r.case("three", || Err(crate::Error::EmptySupport));
        let c = r.done();
        assert!(!c.passed());
        assert_eq!((c.cases, c.failed), (3, 2));
        let text = c.to_string();
        assert!(text.starts_with("FAIL demo (2 of 3 cases)"));
        assert!(text.contains("three:"));
        assert!(!Recorder::new("empty").done().passed());
    }

    #[test]
    fn perturbations_keep_constraints() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = vec![0.4, 0.3, 0.2, 0.1];
        for _ in 0..50 {
            let p = perturb(&w, &mut rng);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((mean_f64(&p) - mean_f64(&w)).abs() < 1e-12);
            assert!(p.iter().all(|&x| x >= 0.0));
        }
    }
}
