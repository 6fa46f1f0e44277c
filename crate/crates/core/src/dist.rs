//! Finite discrete distributions with exact rational weights, channels
//! (kernels `X -> Dist<Y>`) and the usual operations on them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ket;
use crate::multiset::{enumerate_multisets, GroundSet, Multiset};
use crate::par::Execution;

pub type Rational = BigRational;

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn nat_ratio(num: &BigUint, den: &BigUint) -> Rational {
    Rational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parse `p/q` or `p`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("`{text}` is not a rational"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// A finitely supported probability distribution.
///
/// Weights are reduced rationals in `(0, 1]` summing to exactly one; zero
/// weights are never stored. Iteration follows the element order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dist<T: Ord> {
    weights: BTreeMap<T, Rational>,
}

impl<T: Ord + Clone> Dist<T> {
    /// Merge equal elements and require the weights to sum to one.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, Rational)>,
    {
        let d = Self::merge(pairs)?;
        let total: Rational = d.weights.values().sum();
        if !total.is_one() {
            return Err(Error::NotNormalized(total.to_string()));
        }
        Ok(d)
    }

    /// Divide nonnegative weights by their total.
    pub fn normalize<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, Rational)>,
    {
        let mut d = Self::merge(pairs)?;
        let total: Rational = d.weights.values().sum();
        if total.is_zero() {
            return Err(Error::EmptySupport);
        }
        for w in d.weights.values_mut() {
            *w = &*w / &total;
        }
        Ok(d)
    }

    fn merge<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, Rational)>,
    {
        let mut weights: BTreeMap<T, Rational> = BTreeMap::new();
        for (x, w) in pairs {
            if w.is_negative() {
                return Err(Error::NegativeWeight(w.to_string()));
            }
            if w.is_zero() {
                continue;
            }
            *weights.entry(x).or_insert_with(Rational::zero) += w;
        }
        if weights.is_empty() {
            return Err(Error::EmptySupport);
        }
        Ok(Dist { weights })
    }

    pub fn point(x: T) -> Self {
        Dist {
            weights: BTreeMap::from([(x, Rational::one())]),
        }
    }

    pub fn uniform<I>(items: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
    {
        let mut set: Vec<T> = items.into_iter().collect();
        set.sort();
        set.dedup();
        if set.is_empty() {
            return Err(Error::EmptySupport);
        }
        let w = ratio(1, set.len() as u64);
        Ok(Dist {
            weights: set.into_iter().map(|x| (x, w.clone())).collect(),
        })
    }

    pub fn weight(&self, x: &T) -> Rational {
        self.weights.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Rational)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.weights.keys()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Image distribution along a function, merging equal images.
    pub fn image<U, F>(&self, f: F) -> Dist<U>
    where
        U: Ord + Clone,
        F: Fn(&T) -> U,
    {
        let mut weights: BTreeMap<U, Rational> = BTreeMap::new();
        for (x, w) in &self.weights {
            *weights.entry(f(x)).or_insert_with(Rational::zero) += w;
        }
        Dist { weights }
    }

    /// Ket rendering `p|x> + ...` with a caller-supplied element format.
    pub fn to_kets_with<F: Fn(&T) -> String>(&self, show: F) -> String {
        self.weights
            .iter()
            .map(|(x, w)| format!("{}|{}>", w, show(x)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parse ket syntax with a caller-supplied element parser.
    pub fn parse_with<F: Fn(&str) -> Result<T>>(text: &str, parse: F) -> Result<Self> {
        let pairs = ket::split_terms(text)?
            .into_iter()
            .map(|(c, x)| Ok((parse(&x)?, parse_rational(&c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs)
    }

    /// `[{element, numerator, denominator, approx}]`; the exact fields are
    /// decimal strings, `approx` is a float for convenience.
    pub fn to_json_with<F: Fn(&T) -> Value>(&self, element: F) -> Value {
        Value::Array(
            self.weights
                .iter()
                .map(|(x, w)| {
                    json!({
                        "element": element(x),
                        "numerator": w.numer().to_string(),
                        "denominator": w.denom().to_string(),
                        "approx": to_f64(w),
                    })
                })
                .collect(),
        )
    }
}

impl<T: Ord + Clone + fmt::Display> fmt::Display for Dist<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_kets_with(|x| x.to_string()))
    }
}

type Kernel<X, Y> = dyn Fn(&X) -> Result<Dist<Y>> + Send + Sync;

/// A stochastic kernel `X -> Dist<Y>`.
pub struct Channel<X, Y: Ord> {
    name: String,
    kernel: Arc<Kernel<X, Y>>,
}

impl<X, Y: Ord> Clone for Channel<X, Y> {
    fn clone(&self) -> Self {
        Channel {
            name: self.name.clone(),
            kernel: Arc::clone(&self.kernel),
        }
    }
}

impl<X, Y: Ord> fmt::Debug for Channel<X, Y> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Channel").field("name", &self.name).finish()
    }
}

impl<X: 'static, Y: Ord + Clone + Send + Sync + 'static> Channel<X, Y> {
    pub fn new<F>(name: impl Into<String>, kernel: F) -> Self
    where
        F: Fn(&X) -> Result<Dist<Y>> + Send + Sync + 'static,
    {
        Channel {
            name: name.into(),
            kernel: Arc::new(kernel),
        }
    }

    /// Deterministic channel `x -> point(f(x))`.
    pub fn from_fn<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&X) -> Y + Send + Sync + 'static,
    {
        Channel::new(name, move |x| Ok(Dist::point(f(x))))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, x: &X) -> Result<Dist<Y>> {
        (self.kernel)(x)
    }

    /// `next after self`: `x -> next_*(self(x))`.
    pub fn then<Z>(&self, next: &Channel<Y, Z>) -> Channel<X, Z>
    where
        Z: Ord + Clone + Send + Sync + 'static,
    {
        let first = self.clone();
        let second = next.clone();
        Channel::new(format!("{} ; {}", first.name, second.name), move |x| {
            pushforward_with(&second, &first.apply(x)?, Execution::Sequential)
        })
    }
}

/// `c_*(omega) = sum_x omega(x) c(x)`.
pub fn pushforward<X, Y>(c: &Channel<X, Y>, omega: &Dist<X>) -> Result<Dist<Y>>
where
    X: Ord + Clone + Send + Sync + 'static,
    Y: Ord + Clone + Send + Sync + 'static,
{
    pushforward_with(c, omega, Execution::default())
}

/// [`pushforward`] with an explicit execution policy. Kernel evaluations run
/// independently; the merge walks the support in order.
pub fn pushforward_with<X, Y>(c: &Channel<X, Y>, omega: &Dist<X>, exec: Execution) -> Result<Dist<Y>>
where
    X: Ord + Clone + Send + Sync + 'static,
    Y: Ord + Clone + Send + Sync + 'static,
{
    let entries: Vec<(&X, &Rational)> = omega.iter().collect();
    let images = exec.map(&entries, |(x, _)| c.apply(x));
    let mut weights: BTreeMap<Y, Rational> = BTreeMap::new();
    for ((_, w), img) in entries.iter().zip(images) {
        for (y, v) in img?.weights {
            *weights.entry(y).or_insert_with(Rational::zero) += *w * v;
        }
    }
    Ok(Dist { weights })
}

/// Frequentist learning: normalise a nonempty multiset into a distribution
/// over ground indices.
pub fn flrn(phi: &Multiset) -> Result<Dist<usize>> {
    let size = phi.size();
    if size == 0 {
        return Err(Error::EmptyMultiset);
    }
    Ok(Dist {
        weights: phi
            .support()
            .into_iter()
            .map(|i| (i, ratio(phi.count(i) as u64, size as u64)))
            .collect(),
    })
}

/// [`flrn`] as a channel.
pub fn flrn_channel() -> Channel<Multiset, usize> {
    Channel::new("flrn", flrn)
}

/// Distribution on `M[K](X)` with weight `coefficient(phi) / |X|^K`.
pub fn multiset_coefficient_distribution(ground: &GroundSet, k: usize) -> Dist<Multiset> {
    let total = BigUint::from(ground.len()).pow(k as u32);
    Dist {
        weights: enumerate_multisets(ground, k)
            .map(|m| {
                let w = nat_ratio(&m.coefficient(), &total);
                (m, w)
            })
            .collect(),
    }
}

/// Elements that carry an integer value, for mean and variance.
pub trait Numeric {
    fn value(&self) -> BigInt;
}

impl Numeric for usize {
    fn value(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Numeric for u64 {
    fn value(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Numeric for i64 {
    fn value(&self) -> BigInt {
        BigInt::from(*self)
    }
}

pub fn mean<T: Ord + Numeric>(omega: &Dist<T>) -> Rational {
    omega
        .weights
        .iter()
        .map(|(x, w)| w * Rational::from_integer(x.value()))
        .sum()
}

/// `sum omega(j) j^2 - mean^2`.
pub fn variance<T: Ord + Numeric>(omega: &Dist<T>) -> Rational {
    let second: Rational = omega
        .weights
        .iter()
        .map(|(x, w)| {
            let v = Rational::from_integer(x.value());
            w * &v * &v
        })
        .sum();
    let m = mean(omega);
    second - &m * &m
}

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn entropy<T: Ord>(omega: &Dist<T>) -> f64 {
    entropy_f64(omega.weights.values().map(to_f64))
}

pub fn entropy_f64<I: IntoIterator<Item = f64>>(weights: I) -> f64 {
    -weights
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
}

/// `KL(omega || rho)` in nats. Needs `support(omega)` inside `support(rho)`.
pub fn kl_divergence<T: Ord>(omega: &Dist<T>, rho: &Dist<T>) -> Result<f64> {
    let mut out = 0.0;
    for (x, w) in &omega.weights {
        let v = rho.weights.get(x).ok_or(Error::SupportViolation)?;
        let p = to_f64(w);
        out += p * (p.ln() - to_f64(v).ln());
    }
    Ok(out.max(0.0))
}

/// [`kl_divergence`] for float weight vectors on a common index set.
pub fn kl_divergence_f64(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Domain("weight vectors differ in length".into()));
    }
    let mut out = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return Err(Error::SupportViolation);
            }
            out += a * (a.ln() - b.ln());
        }
    }
    Ok(out.max(0.0))
}

/// Total variation distance `1/2 sum |omega - rho|`, exact.
pub fn total_variation<T: Ord + Clone>(omega: &Dist<T>, rho: &Dist<T>) -> Rational {
    let mut acc = Rational::zero();
    for (x, w) in &omega.weights {
        acc += (w - rho.weight(x)).abs();
    }
    for (x, v) in &rho.weights {
        if !omega.weights.contains_key(x) {
            acc += v;
        }
    }
    acc / Rational::from_integer(BigInt::from(2))
}

pub fn total_variation_f64(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
