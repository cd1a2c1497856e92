//! Large-deviations layer: the rate function, deviation regions, and the
//! independent per-prime indicator model with a Monte-Carlo simulator plus an
//! exact small-instance oracle.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::rng::CounterRng;
use crate::Result;

/// A nonnegative vector indexed by class labels.
#[derive(Clone, Debug, PartialEq)]
pub struct RateVector {
    entries: BTreeMap<String, f64>,
}

impl RateVector {
    pub fn new(entries: BTreeMap<String, f64>) -> Result<Self> {
        for (label, &v) in &entries {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(alloc::format!(
                    "entry {label} = {v} is not a finite nonnegative real"
                )));
            }
        }
        Ok(RateVector { entries })
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        Self::new(pairs.into_iter().map(|(l, v)| (l.into(), v)).collect())
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.get(label).copied()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(l, &v)| (l.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.entries.values().sum()
    }

    fn same_labels(&self, other: &RateVector) -> Result<()> {
        if self.entries.len() == other.entries.len()
            && self.entries.keys().zip(other.entries.keys()).all(|(a, b)| a == b)
        {
            Ok(())
        } else {
            Err(Error::Shape("rate vectors have different label sets".into()))
        }
    }
}

/// A finite value or positive infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinity,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinity)
    }
}

/// The rate function `I_c(x) = 1 − Σ x_j + Σ x_j log(x_j/c_j)`.
///
/// Terms with `x_j = 0` contribute nothing; any `x_j > 0` over `c_j = 0`
/// makes the whole value infinite.
pub fn rate_function(c: &RateVector, x: &RateVector) -> Result<Extended> {
    c.same_labels(x)?;
    let mut acc = 1.0f64;
    for ((_, cj), (_, xj)) in c.iter().zip(x.iter()) {
        if xj == 0.0 {
            continue;
        }
        if cj == 0.0 {
            return Ok(Extended::Infinity);
        }
        acc += -xj + xj * libm::log(xj / cj);
    }
    Ok(Extended::Finite(acc))
}

/// Membership in the deviation region: `y` lies on the far side of `x` from
/// `c` in every coordinate where `x` actually deviates from `c`.
pub fn deviation_region_contains(c: &RateVector, x: &RateVector, y: &RateVector) -> Result<bool> {
    c.same_labels(x)?;
    c.same_labels(y)?;
    for (((_, cj), (_, xj)), (_, yj)) in c.iter().zip(x.iter()).zip(y.iter()) {
        if xj == cj {
            continue;
        }
        let want_positive = xj > cj;
        let diff = yj - xj;
        if diff == 0.0 || (diff > 0.0) != want_positive {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Independent-indicator model: each prime `p` of class `j` fires with
/// probability `s_j/p`, independently across primes.
#[derive(Clone, Debug)]
pub struct SanovModel {
    primes: Vec<u64>,
    class_of: Vec<String>,
    labels: Vec<String>,
    s: RateVector,
    /// Informational per-class densities; not used by the simulator.
    pub r: RateVector,
}

impl SanovModel {
    pub fn new(
        primes: Vec<u64>,
        class_of: Vec<String>,
        s: RateVector,
        r: RateVector,
    ) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::EmptyModel);
        }
        if primes.len() != class_of.len() {
            return Err(Error::Shape("one class label per prime required".into()));
        }
        let mut seen = primes.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate prime in model".into()));
        }
        for (&p, class) in primes.iter().zip(&class_of) {
            if !crate::arith::is_prime_u64(p) {
                return Err(Error::InvalidPrime(p));
            }
            let sj = s
                .get(class)
                .ok_or_else(|| Error::Shape(alloc::format!("class {class} missing from s")))?;
            if sj > p as f64 {
                return Err(Error::Domain(alloc::format!(
                    "s = {sj} gives probability > 1 at prime {p}"
                )));
            }
        }
        let labels: Vec<String> = s.labels().map(String::from).collect();
        Ok(SanovModel { primes, class_of, labels, s, r })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn s(&self) -> &RateVector {
        &self.s
    }

    fn fire_probability(&self, i: usize) -> f64 {
        let sj = self.s.get(&self.class_of[i]).expect("validated at construction");
        sj / self.primes[i] as f64
    }

    fn class_index(&self, i: usize) -> usize {
        self.labels.iter().position(|l| *l == self.class_of[i]).expect("validated")
    }
}

/// Empirical distribution of per-class hit-count vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationReport {
    /// Label order used for the count vectors.
    pub labels: Vec<String>,
    /// Count vector → number of trials that produced it.
    pub counts: BTreeMap<Vec<u32>, u64>,
    pub trials: u64,
}

impl SimulationReport {
    pub fn frequency(&self, vector: &[u32]) -> f64 {
        *self.counts.get(vector).unwrap_or(&0) as f64 / self.trials as f64
    }

    /// Total frequency of vectors satisfying a predicate.
    pub fn frequency_where(&self, mut predicate: impl FnMut(&[u32]) -> bool) -> f64 {
        let hits: u64 =
            self.counts.iter().filter(|(v, _)| predicate(v)).map(|(_, n)| *n).sum();
        hits as f64 / self.trials as f64
    }

    /// Combines disjoint trial ranges of the same model and seed.
    pub fn merge(mut self, other: SimulationReport) -> Result<SimulationReport> {
        if self.labels != other.labels {
            return Err(Error::Shape("reports from different models".into()));
        }
        for (v, n) in other.counts {
            *self.counts.entry(v).or_insert(0) += n;
        }
        self.trials += other.trials;
        Ok(self)
    }
}

/// Simulates trials `[lo, hi)`. Each draw depends only on
/// `(seed, trial, prime index)`, so any partition of the trial range yields
/// the same union of outcomes.
pub fn simulate_omega_model_range(
    model: &SanovModel,
    lo: u64,
    hi: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if lo >= hi {
        return Err(Error::Domain("empty trial range".into()));
    }
    let rng = CounterRng::new(seed);
    let probs: Vec<f64> = (0..model.primes.len()).map(|i| model.fire_probability(i)).collect();
    let class_idx: Vec<usize> = (0..model.primes.len()).map(|i| model.class_index(i)).collect();
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut vector = alloc::vec![0u32; model.labels.len()];
    for trial in lo..hi {
        vector.iter_mut().for_each(|v| *v = 0);
        for i in 0..model.primes.len() {
            if rng.uniform(trial, i as u64) < probs[i] {
                vector[class_idx[i]] += 1;
            }
        }
        *counts.entry(vector.clone()).or_insert(0) += 1;
    }
    Ok(SimulationReport { labels: model.labels.clone(), counts, trials: hi - lo })
}

/// Simulates `trials` independent trials starting from trial 0.
pub fn simulate_omega_model(
    model: &SanovModel,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial required".into()));
    }
    simulate_omega_model_range(model, 0, trials, seed)
}

/// Exact probability that the per-class hit-count vector satisfies the
/// predicate, by enumeration of all outcomes with rational arithmetic.
///
/// Fire probabilities are taken as exact rationals `s_j/p` with `s_j` read
/// through its rational representation, so integer-valued `s_j` are exact.
pub fn exact_region_probability(
    model: &SanovModel,
    mut predicate: impl FnMut(&[u32]) -> bool,
) -> Result<BigRational> {
    let n = model.primes.len();
    if n > 20 {
        return Err(Error::TooLarge(alloc::format!("{n} primes exceed the exact oracle cap of 20")));
    }
    let probs: Vec<BigRational> = (0..n)
        .map(|i| {
            let sj = model.s.get(&model.class_of[i]).expect("validated");
            let s_rat = BigRational::from_float(sj)
                .ok_or_else(|| Error::Domain("non-finite s".into()))?;
            Ok(s_rat / BigRational::from_integer(BigInt::from(model.primes[i])))
        })
        .collect::<Result<_>>()?;
    let class_idx: Vec<usize> = (0..n).map(|i| model.class_index(i)).collect();
    let mut total = BigRational::zero();
    let mut vector = alloc::vec![0u32; model.labels.len()];
    for mask in 0u32..1 << n {
        vector.iter_mut().for_each(|v| *v = 0);
        let mut weight = BigRational::one();
        for i in 0..n {
            if mask >> i & 1 == 1 {
                vector[class_idx[i]] += 1;
                weight *= &probs[i];
            } else {
                weight *= BigRational::one() - &probs[i];
            }
        }
        if predicate(&vector) {
            total += weight;
        }
    }
    Ok(total)
}
