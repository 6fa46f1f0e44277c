use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;

use nomials::approx::{max_entropy_dist, mean_f64, ratio_approx};
use nomials::boltzmann::{
    boltzmann_on_energy, boltzmann_on_multisets, boltzmann_on_numbers, boltzmann_on_numbers_via_flrn,
    microstate_uniform, projection_marginal, EnergyConfig,
};
use nomials::dist::{
    flrn, flrn_channel, kl_divergence, mean, pushforward, pushforward_with, ratio, total_variation, variance, Channel,
    Dist, Rational,
};
use nomials::markov::{shift, shift_channel, stationarity_residual, ShiftSpace};
use nomials::multiset::{enumerate_multisets, multichoose, GroundSet, Multiset};
use nomials::multivariate::{
    hypergeometric, nomial_distribution, polya, vandermonde_binom, vandermonde_multichoose, vandermonde_nomial,
};
use nomials::nomial::{
    nomial, nomial_closed_form, nomial_enum_sequences, nomial_recursive, nomial_via_multisets, polynomial_expand,
    vandermonde_check, NomialParams, NomialTable, DEFAULT_BUDGET,
};
use nomials::Execution;

/// `(N, K, i)` with `N <= max_n`, `1 <= K <= max_k`.
fn config(max_n: usize, max_k: usize) -> impl Strategy<Value = EnergyConfig> {
    (1..=max_n, 1..=max_k)
        .prop_flat_map(|(n, k)| (Just(n), Just(k), 0..=(n - 1) * k))
        .prop_map(|(n, k, i)| EnergyConfig::new(n, k, i).unwrap())
}

fn multiset(max_n: usize, max_k: usize) -> impl Strategy<Value = Multiset> {
    (1..=max_n)
        .prop_flat_map(move |n| prop::collection::vec(0..=max_k, n))
        .prop_map(|counts| Multiset::from_counts(&GroundSet::levels(counts.len()).unwrap(), counts).unwrap())
}

fn urn(min_each: usize) -> impl Strategy<Value = Multiset> {
    prop::collection::vec(min_each..=3usize, 1..=4)
        .prop_filter("size at most 8", |c| c.iter().sum::<usize>() <= 8 && c.iter().sum::<usize>() >= 1)
        .prop_map(|counts| {
            let names: Vec<String> = (0..counts.len()).map(|c| format!("k{c}")).collect();
            Multiset::from_counts(&GroundSet::named(names).unwrap(), counts).unwrap()
        })
}

fn weights() -> impl Strategy<Value = Dist<usize>> {
    prop::collection::vec((0..8usize, 1..20u64), 1..6).prop_map(|pairs| {
        Dist::normalize(pairs.into_iter().map(|(x, w)| (x, ratio(w, 1)))).unwrap()
    })
}

fn total(d: &Dist<impl Ord + Clone>) -> Rational {
    d.iter().map(|(_, w)| w.clone()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_count_is_multichoose(n in 1..6usize, k in 0..7usize) {
        let g = GroundSet::levels(n).unwrap();
        let all: Vec<Multiset> = enumerate_multisets(&g, k).collect();
        prop_assert_eq!(BigUint::from(all.len()), multichoose(n as u64, k as u64).unwrap());
        prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
        let coef: BigUint = all.iter().map(|m| m.coefficient()).sum();
        prop_assert_eq!(coef, BigUint::from(n).pow(k as u32));
    }

    #[test]
    fn reversal_is_involutive_and_keeps_coefficient(phi in multiset(6, 5)) {
        let rev = phi.reverse().unwrap();
        prop_assert_eq!(rev.reverse().unwrap(), phi.clone());
        prop_assert_eq!(rev.coefficient(), phi.coefficient());
        prop_assert_eq!(rev.som().unwrap() + phi.som().unwrap(), (phi.ground().len() - 1) * phi.size());
    }

    #[test]
    fn multiset_kets_round_trip(phi in multiset(6, 5)) {
        let back = Multiset::parse(&phi.to_string(), phi.ground()).unwrap();
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn nomial_routes_agree(n in 1..6usize, k in 0..7usize, seed in 0..1000usize) {
        let i = seed % ((n - 1) * k + 1);
        let p = NomialParams::new(n, k, i).unwrap();
        let v = nomial_enum_sequences(p, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(&nomial_via_multisets(p), &v);
        prop_assert_eq!(&nomial_recursive(p), &v);
        prop_assert_eq!(&nomial(p), &v);
        prop_assert_eq!(&polynomial_expand(n, k)[i], &v);
        if i < n && k >= 1 {
            prop_assert_eq!(&nomial_closed_form(p).unwrap(), &v);
        }
    }

    #[test]
    fn nomial_rows_sum_and_mirror(n in 1..7usize, k in 0..8usize) {
        let t = NomialTable::new(n, k);
        let row = t.row(k);
        prop_assert_eq!(row.iter().sum::<BigUint>(), BigUint::from(n).pow(k as u32));
        prop_assert!(row.iter().eq(row.iter().rev()));
    }

    #[test]
    fn nomial_vandermonde(n in 1..6usize, k1 in 0..5usize, k2 in 0..5usize, seed in 0..1000usize) {
        let i = seed % ((n - 1) * (k1 + k2) + 1);
        prop_assert!(vandermonde_check(n, k1, k2, i).unwrap());
    }

    #[test]
    fn normalised_distributions_sum_to_one(d in weights()) {
        prop_assert!(total(&d).is_one());
        prop_assert!(d.iter().all(|(_, w)| *w > Rational::zero()));
    }

    #[test]
    fn dist_kets_round_trip(d in weights()) {
        let back = Dist::parse_with(&d.to_string(), |s| {
            s.parse::<usize>().map_err(|e| nomials::Error::Parse(e.to_string()))
        }).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn image_is_deterministic_pushforward(d in weights(), m in 1..5usize) {
        let c = Channel::from_fn("mod", move |x: &usize| x % m);
        prop_assert_eq!(d.image(|x| x % m), pushforward(&c, &d).unwrap());
    }

    #[test]
    fn pushforward_policies_agree(cfg in config(4, 4)) {
        let omega = boltzmann_on_multisets(cfg);
        let f = flrn_channel();
        prop_assert_eq!(
            pushforward_with(&f, &omega, Execution::Sequential).unwrap(),
            pushforward_with(&f, &omega, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn distances_are_sane(a in weights(), b in weights()) {
        let tv = total_variation(&a, &b);
        prop_assert_eq!(tv.clone(), total_variation(&b, &a));
        prop_assert!(tv >= Rational::zero() && tv <= Rational::one());
        prop_assert!(total_variation(&a, &a).is_zero());
        prop_assert!(kl_divergence(&a, &a).unwrap().abs() < 1e-12);
        if let Ok(kl) = kl_divergence(&a, &b) {
            prop_assert!(kl >= 0.0);
        }
    }

    #[test]
    fn learning_from_coefficient_distribution(n in 1..4usize, k in 1..5usize) {
        let omega = nomials::dist::multiset_coefficient_distribution(&GroundSet::levels(n).unwrap(), k);
        prop_assert!(total(&omega).is_one());
        prop_assert_eq!(pushforward(&flrn_channel(), &omega).unwrap(), Dist::uniform(0..n).unwrap());
    }

    #[test]
    fn boltzmann_reversal(cfg in config(5, 5)) {
        let top = cfg.levels() - 1;
        prop_assert_eq!(
            boltzmann_on_multisets(cfg).image(|m| m.reverse().unwrap()),
            boltzmann_on_multisets(cfg.reversed())
        );
        prop_assert_eq!(
            boltzmann_on_numbers(cfg).image(|j| top - j),
            boltzmann_on_numbers(cfg.reversed())
        );
    }

    #[test]
    fn boltzmann_numbers_mean_and_routes(cfg in config(6, 6)) {
        let d = boltzmann_on_numbers(cfg);
        prop_assert_eq!(mean(&d), ratio(cfg.sum() as u64, cfg.particles() as u64));
        prop_assert_eq!(boltzmann_on_numbers_via_flrn(cfg).unwrap(), d.clone());
        if cfg.sum() < cfg.levels() {
            prop_assert!(d.support().all(|&j| j <= cfg.sum()));
        }
    }

    #[test]
    fn energy_moments(e in 1..21usize, k in 2..9usize) {
        let d = boltzmann_on_energy(e, k).unwrap();
        let (eb, kb) = (e as u64, k as u64);
        prop_assert_eq!(mean(&d), ratio(eb, kb));
        prop_assert_eq!(variance(&d), ratio(eb * (eb + kb) * (kb - 1), kb * kb * (kb + 1)));
        prop_assert_eq!(d, boltzmann_on_numbers(EnergyConfig::new(e + 1, k, e).unwrap()));
    }

    #[test]
    fn microstates_project(cfg in config(4, 5), n in 0..5usize) {
        let micro = microstate_uniform(cfg, DEFAULT_BUDGET).unwrap();
        let n = n % cfg.particles();
        prop_assert_eq!(projection_marginal(&micro, n).unwrap(), boltzmann_on_numbers(cfg));
    }

    #[test]
    fn shift_conserves(cfg in config(5, 5), pick in 0..10_000usize) {
        let space = ShiftSpace::new(cfg);
        let phi = &space.states()[pick % space.len()];
        let d = shift(&space, phi).unwrap();
        prop_assert!(total(&d).is_one());
        for psi in d.support() {
            prop_assert_eq!(psi.size(), cfg.particles());
            prop_assert_eq!(psi.som().unwrap(), cfg.sum());
        }
    }

    #[test]
    fn shift_stationary(cfg in config(4, 5)) {
        let space = Arc::new(ShiftSpace::new(cfg));
        let omega = boltzmann_on_multisets(cfg);
        prop_assert!(stationarity_residual(&omega, &shift_channel(space)).unwrap().is_zero());
    }

    #[test]
    fn ratio_approx_is_geometric(e in 1..15usize, p in 1..20u64, q in 1..20u64) {
        let mu = ratio(p, q);
        let d = ratio_approx(e, &mu).unwrap();
        prop_assert!(total(&d).is_one());
        let r = &mu / (&mu + Rational::one());
        for j in 0..e {
            prop_assert_eq!(d.weight(&(j + 1)), d.weight(&j) * &r);
        }
    }

    #[test]
    fn max_entropy_hits_mean(e in 2..200usize, frac in 0.01f64..0.99) {
        let num = ((frac * e as f64 * 100.0).round() as u64).max(1);
        let mu = ratio(num, 100);
        let me = max_entropy_dist(e, &mu).unwrap();
        prop_assert!((mean_f64(&me.weights) - num as f64 / 100.0).abs() < 1e-9);
        prop_assert!(me.root.unwrap() > 0.0);
    }

    #[test]
    fn urn_vandermonde(psi in urn(0), psi1 in urn(1), k in 0..9usize) {
        prop_assert!(vandermonde_binom(&psi, k.min(psi.size())).unwrap());
        prop_assert!(vandermonde_multichoose(&psi1, k).unwrap());
    }

    #[test]
    fn urn_nomial_vandermonde(psi in urn(0), n in 1..5usize, seed in 0..1000usize) {
        let i = seed % ((n - 1) * psi.size() + 1);
        prop_assert!(vandermonde_nomial(n, &psi, i).unwrap());
    }

    #[test]
    fn urn_learning(psi in urn(1), seed in 0..1000usize) {
        let learned = flrn(&psi).unwrap();
        let f = flrn_channel();
        let k = 1 + seed % psi.size();
        prop_assert_eq!(pushforward(&f, &hypergeometric(k, &psi).unwrap()).unwrap(), learned.clone());
        prop_assert_eq!(pushforward(&f, &polya(k, &psi).unwrap()).unwrap(), learned.clone());
        let n = psi.ground().len();
        let i = 1 + seed % ((n - 1) * psi.size()).max(1);
        if i <= (n - 1) * psi.size() {
            prop_assert_eq!(pushforward(&f, &nomial_distribution(i, &psi).unwrap()).unwrap(), learned);
        }
    }
}
