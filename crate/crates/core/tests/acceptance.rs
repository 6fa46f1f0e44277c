//! Acceptance suite: one PASS/FAIL line per criterion, each with its time limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nomials::approx::{compare, max_entropy_dist};
use nomials::boltzmann::{
    boltzmann_on_energy, boltzmann_on_multisets, boltzmann_on_numbers, boltzmann_on_numbers_via_flrn,
    dense_weights, scaled_unnormalized, EnergyConfig,
};
use nomials::dist::{entropy_f64, ratio, Rational};
use nomials::multiset::{GroundSet, Multiset};
use nomials::multivariate::{hypergeometric, nomial_distribution};
use nomials::nomial::{nomial, nomial_enum_sequences, NomialParams, NomialTable, DEFAULT_BUDGET};
use nomials::verify::{self, Bounds, Check};
use nomials::Execution;
use num_bigint::BigUint;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass_if(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn from_checks(checks: Vec<Check>) -> Outcome {
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| c.to_string()).collect();
    let cases: u64 = checks.iter().map(|c| c.cases).sum();
    if failed.is_empty() {
        pass_if(true, format!("{} properties, {cases} cases", checks.len()))
    } else {
        pass_if(false, failed.join("; "))
    }
}

fn fractions(pairs: &[(u64, u64)]) -> Vec<Rational> {
    pairs.iter().map(|&(n, d)| ratio(n, d)).collect()
}

fn nat(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

fn triangle_rows() -> Outcome {
    let trinomial: [&[u64]; 5] = [
        &[1],
        &[1, 1, 1],
        &[1, 2, 3, 2, 1],
        &[1, 3, 6, 7, 6, 3, 1],
        &[1, 4, 10, 16, 19, 16, 10, 4, 1],
    ];
    let quadrinomial: [&[u64]; 6] = [
        &[1],
        &[1, 1, 1, 1],
        &[1, 2, 3, 4, 3, 2, 1],
        &[1, 3, 6, 10, 12, 12, 10, 6, 3, 1],
        &[1, 4, 10, 20, 31, 40, 44, 40, 31, 20, 10, 4, 1],
        &[1, 5, 15, 35, 65, 101, 135, 155, 155, 135, 101, 65, 35, 15, 5, 1],
    ];
    let mut ok = true;
    for (n, rows) in [(3usize, &trinomial[..]), (4, &quadrinomial[..])] {
        let table = NomialTable::new(n, rows.len() - 1);
        for (k, row) in rows.iter().enumerate() {
            ok &= table.row(k) == nat(row).as_slice();
            for (i, v) in row.iter().enumerate() {
                let p = NomialParams::new(n, k, i).unwrap();
                ok &= nomial_enum_sequences(p, DEFAULT_BUDGET).unwrap() == BigUint::from(*v);
            }
        }
    }
    pass_if(ok, "C_3 rows K=0..4, C_4 rows K=0..5")
}

fn appendix_multisets() -> Outcome {
    let c = |n, k, i| nomial(NomialParams::new(n, k, i).unwrap());
    let mut ok = c(4, 4, 3) == BigUint::from(20u32) && c(9, 6, 8) == BigUint::from(1287u32);
    let g = GroundSet::levels(9).unwrap();
    let listed = [
        ("5|0> + 1|8>", 2, 429),
        ("4|0> + 1|1> + 1|7>", 10, 429),
        ("4|0> + 1|2> + 1|6>", 10, 429),
        ("4|0> + 1|3> + 1|5>", 10, 429),
        ("4|0> + 2|4>", 5, 429),
        ("3|0> + 2|1> + 1|6>", 20, 429),
        ("3|0> + 2|2> + 1|4>", 20, 429),
        ("3|0> + 1|2> + 2|3>", 20, 429),
        ("3|0> + 1|1> + 1|2> + 1|5>", 40, 429),
        ("3|0> + 1|1> + 1|3> + 1|4>", 40, 429),
        ("2|0> + 4|2>", 5, 429),
        ("2|0> + 2|1> + 2|3>", 10, 143),
        ("2|0> + 1|1> + 2|2> + 1|3>", 20, 143),
        ("2|0> + 2|1> + 1|2> + 1|4>", 20, 143),
        ("2|0> + 3|1> + 1|5>", 20, 429),
        ("1|0> + 4|1> + 1|4>", 10, 429),
        ("1|0> + 3|1> + 1|2> + 1|3>", 40, 429),
        ("1|0> + 2|1> + 3|2>", 20, 429),
        ("4|1> + 2|2>", 5, 429),
        ("5|1> + 1|3>", 2, 429),
    ];
    let d = boltzmann_on_multisets(EnergyConfig::new(9, 6, 8).unwrap());
    ok &= d.len() == listed.len();
    for (text, n, den) in listed {
        ok &= d.weight(&Multiset::parse(text, &g).unwrap()) == ratio(n, den);
    }
    pass_if(ok, "C_4(4,3)=20, C_9(6,8)=1287, 20 weights")
}

fn three_routes() -> Outcome {
    let want = fractions(&[(1, 2), (3, 10), (3, 20), (1, 20)]);
    let cfg = EnergyConfig::new(4, 4, 3).unwrap();
    let routes = [
        boltzmann_on_numbers_via_flrn(cfg).unwrap(),
        boltzmann_on_numbers(cfg),
        boltzmann_on_energy(3, 4).unwrap(),
    ];
    let ok = routes.iter().all(|d| dense_weights(d, 4) == want);
    pass_if(ok, "flrn image, nomial ratio, energy closed form")
}

fn appendix_energy() -> Outcome {
    let want = fractions(&[
        (5, 13),
        (10, 39),
        (70, 429),
        (14, 143),
        (70, 1287),
        (35, 1287),
        (5, 429),
        (5, 1287),
        (1, 1287),
    ]);
    let table = [2.31, 1.54, 0.979, 0.587, 0.326, 0.163, 0.0699, 0.0233, 0.00466];
    let d = boltzmann_on_energy(8, 6).unwrap();
    let scaled = scaled_unnormalized(8, 6).unwrap();
    let worst = scaled.iter().zip(table).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    pass_if(
        dense_weights(&d, 9) == want && scaled.len() == 9 && worst <= 0.005,
        format!("nine rationals exact, worst scaled deviation {worst:.5}"),
    )
}

fn identity_sweep() -> Outcome {
    let b = Bounds::new(5, 6);
    let exec = Execution::default();
    let sweeps: [verify::Sweep; 13] = [
        verify::nomial_routes,
        verify::nomial_row_sums,
        verify::nomial_palindrome,
        verify::nomial_vandermonde,
        verify::nomial_prefix_sums,
        verify::nomial_polynomial_rows,
        verify::multichoose_sums,
        verify::boltzmann_multiset_reversal,
        verify::boltzmann_number_reversal,
        verify::boltzmann_mean,
        verify::energy_moments,
        verify::support_truncation,
        verify::boltzmann_routes,
    ];
    from_checks(exec.map(&sweeps, |s| s(&b, exec)))
}

fn stationarity() -> Outcome {
    let b = Bounds::new(4, 5);
    let exec = Execution::default();
    from_checks(vec![
        verify::shift_stationarity(&b, exec),
        verify::numbers_chain_stationarity(&b, exec),
    ])
}

fn max_entropy() -> Outcome {
    let me = max_entropy_dist(25, &ratio(5, 1)).unwrap();
    let s = me.root.unwrap_or(f64::NAN);
    let report = compare(25, 5).unwrap();
    let h = entropy_f64(me.weights.iter().copied());
    let kl = |n: &str| report.candidate(n).map(|c| c.kl).unwrap_or(f64::NAN);
    let ok = (0.840..=0.842).contains(&s)
        && (0.171..=0.175).contains(&-s.ln())
        && (2.68..=2.70).contains(&h)
        && (2.66..=2.68).contains(&report.reference_entropy)
        && kl("max_entropy") <= kl("discrete_exponential");
    pass_if(
        ok,
        format!(
            "s={s:.5} -ln s={:.5} H={h:.4} H_ref={:.4} KL {:.5} <= {:.5}",
            -s.ln(),
            report.reference_entropy,
            kl("max_entropy"),
            kl("discrete_exponential")
        ),
    )
}

fn multivariate() -> Outcome {
    let psi = Multiset::parse_named("1|a> + 5|b> + 3|c>").unwrap();
    let g = psi.ground().clone();
    let listed = [
        ("2|a> + 10|b> + 3|c>", 7, 156),
        ("2|a> + 9|b> + 4|c>", 5, 26),
        ("1|a> + 10|b> + 4|c>", 1, 26),
        ("2|a> + 8|b> + 5|c>", 15, 52),
        ("1|a> + 9|b> + 5|c>", 5, 52),
        ("10|b> + 5|c>", 1, 52),
        ("2|a> + 7|b> + 6|c>", 5, 26),
        ("1|a> + 8|b> + 6|c>", 5, 52),
        ("9|b> + 6|c>", 5, 156),
    ];
    let d = nomial_distribution(15, &psi).unwrap();
    let mut ok = d.len() == 9;
    for (text, n, den) in listed {
        ok &= d.weight(&Multiset::parse(text, &g).unwrap()) == ratio(n, den);
    }
    let binary = Multiset::parse_named("3|x> + 4|y>").unwrap();
    ok &= (0..=7).all(|i| nomial_distribution(i, &binary).unwrap() == hypergeometric(i, &binary).unwrap());
    let checks = vec![
        verify::urn_learning(50, 8, Execution::default()),
        verify::urn_vandermonde(50, 8),
        verify::urn_binary_case(50, 8),
    ];
    let rest = from_checks(checks);
    pass_if(
        ok && rest.ok,
        format!("nine weights {}, {}", if ok { "exact" } else { "WRONG" }, rest.detail),
    )
}

fn oracles() -> Outcome {
    let b = Bounds::new(4, 5);
    let exec = Execution::default();
    from_checks(vec![verify::nomial_routes(&b, exec), verify::microstate_oracles(&b, exec)])
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        (1, "trinomial and quadrinomial triangles", 1, triangle_rows),
        (2, "appendix nomials and Boltzmann-on-multisets", 1, appendix_multisets),
        (3, "Boltzmann-on-numbers by three routes", 1, three_routes),
        (4, "appendix Boltzmann-on-energy and scaled decimals", 1, appendix_energy),
        (5, "identity sweep N<=5, K<=6", 60, identity_sweep),
        (6, "shift stationarity N<=4, K<=5", 120, stationarity),
        (7, "maximum-entropy solve at E=25, K=5", 1, max_entropy),
        (8, "multivariate distributions and identities", 30, multivariate),
        (9, "enumeration oracles N<=4, K<=5", 60, oracles),
    ];
    let mut failures = 0;
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(limit);
        let ok = outcome.ok && in_time;
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {n}: {name} [{:.3} s, limit {limit} s{}] {}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            if in_time { "" } else { ", OVER TIME" },
            outcome.detail
        );
    }
    println!("{}/9 criteria pass", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
