//! Approximations of the Boltzmann-on-energy distribution with mean `mu`
//! and how close they get.
//!
//! Float weights are indexed by level `0..=E`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::boltzmann::boltzmann_on_energy;
use crate::dist::{entropy_f64, kl_divergence_f64, ratio, to_f64, total_variation_f64, Dist, Rational};
use crate::error::{Error, Result};
use crate::format::sig;

fn check_mu(mu: &Rational) -> Result<()> {
    if !mu.is_positive() {
        return Err(Error::Domain(format!("mean must be positive, got {mu}")));
    }
    Ok(())
}

/// Geometric weights `(mu / (mu + 1))^j` on `0..=E`, normalised exactly.
pub fn ratio_approx(total_energy: usize, mu: &Rational) -> Result<Dist<usize>> {
    if total_energy == 0 {
        return Err(Error::Domain("total energy must be at least 1".into()));
    }
    check_mu(mu)?;
    let r = mu / (mu + Rational::one());
    let mut w = Rational::one();
    let mut pairs = Vec::with_capacity(total_energy + 1);
    for j in 0..=total_energy {
        pairs.push((j, w.clone()));
        w *= &r;
    }
    Dist::normalize(pairs)
}

/// Weights `exp(-j / mu)` on `0..=E`, normalised.
pub fn discrete_exponential(total_energy: usize, mu: f64) -> Result<Vec<f64>> {
    if mu.is_nan() || mu <= 0.0 {
        return Err(Error::Domain(format!("mean must be positive, got {mu}")));
    }
    Ok(normalized((0..=total_energy).map(|j| (-(j as f64) / mu).exp()).collect()))
}

fn normalized(mut w: Vec<f64>) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    w
}

/// Weights proportional to `s^j` on `0..=E`, computed in log space.
pub fn geometric_weights(total_energy: usize, s: f64) -> Vec<f64> {
    let ls = s.ln();
    let top = if ls > 0.0 { total_energy as f64 * ls } else { 0.0 };
    normalized((0..=total_energy).map(|j| (j as f64 * ls - top).exp()).collect())
}

pub fn mean_f64(w: &[f64]) -> f64 {
    w.iter().enumerate().map(|(j, p)| j as f64 * p).sum()
}

pub fn variance_f64(w: &[f64]) -> f64 {
    let m = mean_f64(w);
    w.iter().enumerate().map(|(j, p)| (j as f64 - m).powi(2) * p).sum()
}

/// `sum_{j <= E} x^j (j - mu)`.
pub fn max_entropy_polynomial(total_energy: usize, mu: f64, x: f64) -> f64 {
    (0..=total_energy).rev().fold(0.0, |acc, j| acc * x + (j as f64 - mu))
}

/// Solution of the maximum-entropy problem on `0..=E` with mean `mu`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxEntropy {
    /// Positive root of [`max_entropy_polynomial`]; `None` when `mu` is 0 or
    /// `E` and the answer is a point mass.
    pub root: Option<f64>,
    pub weights: Vec<f64>,
}

const ROOT_TOL: f64 = 1e-13;

/// The distribution proportional to `s^j` whose mean is `mu`.
///
/// The root is bracketed by doubling and halving from `mu / (mu + 1)`, then
/// refined by Newton steps on `mean(s) - mu` (derivative `variance(s) / s`)
/// that fall back to bisection whenever they leave the bracket.
pub fn max_entropy_dist(total_energy: usize, mu: &Rational) -> Result<MaxEntropy> {
    if mu.is_negative() || *mu > Rational::from_integer(BigInt::from(total_energy)) {
        return Err(Error::Domain(format!("mean {mu} outside [0, {total_energy}]")));
    }
    let point = |at: usize| {
        let mut w = vec![0.0; total_energy + 1];
        w[at] = 1.0;
        MaxEntropy { root: None, weights: w }
    };
    if mu.is_zero() {
        return Ok(point(0));
    }
    if *mu == Rational::from_integer(BigInt::from(total_energy)) {
        return Ok(point(total_energy));
    }
    let m = to_f64(mu);
    let g = |s: f64| mean_f64(&geometric_weights(total_energy, s)) - m;

    let start = m / (m + 1.0);
    let (mut lo, mut hi) = (start, start);
    while g(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoSignChange(format!("no upper bracket for mean {m}")));
        }
    }
    while g(lo) > 0.0 {
        lo /= 2.0;
        if lo < 1e-300 {
            return Err(Error::NoSignChange(format!("no lower bracket for mean {m}")));
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        let w = geometric_weights(total_energy, s);
        let r = mean_f64(&w) - m;
        if r.abs() < ROOT_TOL || hi - lo <= f64::EPSILON * hi {
            break;
        }
        if r < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let step = s - r * s / variance_f64(&w);
        s = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
    }
    Ok(MaxEntropy {
        root: Some(s),
        weights: geometric_weights(total_energy, s),
    })
}

/// `(1/mu) exp(-x/mu)`.
pub fn continuous_exponential_pdf(mu: f64, x: f64) -> f64 {
    (-x / mu).exp() / mu
}

/// One candidate approximation measured against the reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub name: &'static str,
    pub weights: Vec<f64>,
    pub mean: f64,
    pub entropy: f64,
    pub kl: f64,
    pub tv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxReport {
    pub total_energy: usize,
    pub particles: usize,
    /// `E / K` as `p/q`.
    pub mu: String,
    pub mu_approx: f64,
    pub reference: Vec<f64>,
    pub reference_exact: Vec<String>,
    pub reference_mean: f64,
    pub reference_entropy: f64,
    pub max_entropy_root: Option<f64>,
    pub candidates: Vec<Candidate>,
    /// Candidate names by increasing KL divergence.
    pub ranking: Vec<&'static str>,
}

impl ApproxReport {
    pub fn candidate(&self, name: &str) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.name == name)
    }

    /// Overlay table: `x,reference,<candidates...>,continuous_pdf`, with `grid`
    /// rows per unit of energy. Discrete columns are blank off the integers.
    pub fn overlay_csv(&self, grid: usize) -> String {
        let grid = grid.max(1);
        let mu = self.mu_approx;
        let mut out = String::from("x,reference");
        for c in &self.candidates {
            out.push(',');
            out.push_str(c.name);
        }
        out.push_str(",continuous_pdf\n");
        for step in 0..=self.total_energy * grid {
            let x = step as f64 / grid as f64;
            out.push_str(&sig(x));
            let on_level = step % grid == 0;
            let j = step / grid;
            let cell = |v: f64| if on_level { sig(v) } else { String::new() };
            out.push(',');
            out.push_str(&cell(self.reference[j]));
            for c in &self.candidates {
                out.push(',');
                out.push_str(&cell(c.weights[j]));
            }
            out.push(',');
            out.push_str(&sig(continuous_exponential_pdf(mu, x)));
            out.push('\n');
        }
        out
    }
}

/// Compare the ratio, discrete-exponential and maximum-entropy
/// approximations with `boltzmann_on_energy(E)(K)`, at `mu = E / K`.
pub fn compare(total_energy: usize, particles: usize) -> Result<ApproxReport> {
    let reference = boltzmann_on_energy(total_energy, particles)?;
    let mu = ratio(total_energy as u64, particles as u64);
    let mu_f = to_f64(&mu);
    let ref_exact: Vec<Rational> = (0..=total_energy).map(|j| reference.weight(&j)).collect();
    let ref_w: Vec<f64> = ref_exact.iter().map(to_f64).collect();

    let ratio_d = ratio_approx(total_energy, &mu)?;
    let max_ent = max_entropy_dist(total_energy, &mu)?;
    let raw = [
        (
            "ratio",
            (0..=total_energy).map(|j| to_f64(&ratio_d.weight(&j))).collect::<Vec<_>>(),
        ),
        ("discrete_exponential", discrete_exponential(total_energy, mu_f)?),
        ("max_entropy", max_ent.weights.clone()),
    ];
    let candidates = raw
        .into_iter()
        .map(|(name, weights)| {
            Ok(Candidate {
                name,
                mean: mean_f64(&weights),
                entropy: entropy_f64(weights.iter().copied()),
                kl: kl_divergence_f64(&ref_w, &weights)?,
                tv: total_variation_f64(&ref_w, &weights),
                weights,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ranking: Vec<&Candidate> = candidates.iter().collect();
    ranking.sort_by(|a, b| a.kl.total_cmp(&b.kl));
    let ranking = ranking.iter().map(|c| c.name).collect();
    Ok(ApproxReport {
        total_energy,
        particles,
        mu: mu.to_string(),
        mu_approx: mu_f,
        reference_mean: mean_f64(&ref_w),
        reference_entropy: entropy_f64(ref_w.iter().copied()),
        reference_exact: ref_exact.iter().map(|r| r.to_string()).collect(),
        reference: ref_w,
        max_entropy_root: max_ent.root,
        candidates,
        ranking,
    })
}
