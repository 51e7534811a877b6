//! Exact probability laws on a finite group: convolution of independent
//! group-valued variables and total-variation distance.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Magma};
use crate::rational::{self, Rational};

/// The law of a random variable on a finite group. `probs[k]` is
/// `P[X = g_k]`; entries are nonnegative and sum to exactly one.
#[derive(Clone, Debug)]
pub struct GroupDistribution {
    group: Arc<FiniteGroup>,
    probs: Vec<Rational>,
}

impl PartialEq for GroupDistribution {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.probs == other.probs
    }
}

impl Eq for GroupDistribution {}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a.magma() == b.magma()
}

impl GroupDistribution {
    /// Wraps an already normalized probability vector.
    pub fn new(group: Arc<FiniteGroup>, probs: Vec<Rational>) -> Result<Self> {
        if probs.len() != group.order() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities for a group of order {}",
                probs.len(),
                group.order()
            )));
        }
        if let Some(k) = probs.iter().position(Signed::is_negative) {
            return Err(Error::InvalidDistribution(format!(
                "probability of element {} is negative",
                k + 1
            )));
        }
        let total: Rational = probs.iter().sum();
        if total != rational::one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {}, not 1",
                rational::format(&total)
            )));
        }
        Ok(Self { group, probs })
    }

    pub fn point_mass(group: Arc<FiniteGroup>, k: usize) -> Result<Self> {
        let n = group.order();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, order: n });
        }
        let mut probs = vec![rational::zero(); n];
        probs[k] = rational::one();
        Ok(Self { group, probs })
    }

    pub fn uniform(group: Arc<FiniteGroup>) -> Self {
        let n = group.order() as i64;
        let probs = vec![rational::ratio(1, n); n as usize];
        Self { group, probs }
    }

    /// Normalizes nonnegative weights, at least one of them positive.
    pub fn from_weights(group: Arc<FiniteGroup>, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != group.order() {
            return Err(Error::InvalidDistribution(format!(
                "{} weights for a group of order {}",
                weights.len(),
                group.order()
            )));
        }
        if let Some(k) = weights.iter().position(Signed::is_negative) {
            return Err(Error::InvalidDistribution(format!(
                "weight of element {} is negative",
                k + 1
            )));
        }
        let total: Rational = weights.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidDistribution("all weights are zero".into()));
        }
        let probs = weights.into_iter().map(|w| w / &total).collect();
        Ok(Self { group, probs })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, k: usize) -> &Rational {
        &self.probs[k]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(rational::to_f64).collect()
    }

    fn check_same_group(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// Law of `X·Y` for independent `X ~ self` and `Y ~ other`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same_group(other)?;
        let probs = convolve_on(self.group.magma(), &self.probs, &other.probs);
        Ok(Self {
            group: Arc::clone(&self.group),
            probs,
        })
    }

    /// `(1/2) Σ_k |p_k - q_k|`.
    pub fn tv_distance(&self, other: &Self) -> Result<Rational> {
        self.check_same_group(other)?;
        Ok(tv_distance(&self.probs, &other.probs))
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_positive())
            .map(|(k, _)| k)
            .collect()
    }

    pub fn has_full_support(&self) -> bool {
        self.probs.iter().all(Signed::is_positive)
    }

    /// Largest numerator or denominator bit length over all entries.
    pub fn max_bits(&self) -> u64 {
        self.probs.iter().map(rational::bit_size).max().unwrap_or(0)
    }

    /// Writes the distribution file format, listing nonzero entries only.
    pub fn to_file_format(&self) -> String {
        let mut out = String::new();
        for (k, p) in self.probs.iter().enumerate() {
            if !p.is_zero() {
                out.push_str(&format!("{} {}\n", k + 1, rational::format(p)));
            }
        }
        out
    }
}

/// Convolution over an arbitrary table: `result[op(k, l)] += x[k]·y[l]`.
///
/// Works on raw magmas so that non-group fixtures can be pushed through the
/// same code path as real groups.
pub fn convolve_on(magma: &Magma, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let n = magma.order();
    assert_eq!(x.len(), n);
    assert_eq!(y.len(), n);
    // integer arithmetic over the common denominators, one reduction at the end
    let (xn, xd) = rational::common_denominator(x);
    let (yn, yd) = rational::common_denominator(y);
    let mut acc = vec![BigInt::zero(); n];
    for (k, a) in xn.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (l, b) in yn.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc[magma.op(k, l)] += a * b;
        }
    }
    let d = xd * yd;
    acc.into_iter()
        .map(|c| Rational::new(c, d.clone()))
        .collect()
}

pub fn tv_distance(x: &[Rational], y: &[Rational]) -> Rational {
    let total: Rational = x.iter().zip(y).map(|(a, b)| rational::abs_diff(a, b)).sum();
    total / rational::int(2)
}

/// Parses the distribution file format: `#` comments, then lines `k p`
/// with 1-based `k` and `p` as `num/den` or an integer. Missing indices get
/// zero. Without `normalize` the values must sum to exactly one; with it
/// they are treated as weights.
pub fn parse_distribution(
    group: Arc<FiniteGroup>,
    text: &str,
    normalize: bool,
) -> Result<GroupDistribution> {
    let n = group.order();
    let mut values = vec![rational::zero(); n];
    let mut seen = vec![false; n];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let mut parts = line.split_whitespace();
        let (Some(k), Some(p), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(format!("expected `index probability`, found {line:?}")));
        };
        let k: usize = match k.parse() {
            Ok(k) if (1..=n).contains(&k) => k - 1,
            _ => return Err(err(format!("index {k:?} is not in [1, {n}]"))),
        };
        if seen[k] {
            return Err(err(format!("index {} listed twice", k + 1)));
        }
        seen[k] = true;
        values[k] = rational::parse(p).ok_or_else(|| err(format!("{p:?} is not a rational")))?;
    }
    if normalize {
        GroupDistribution::from_weights(group, values)
    } else {
        GroupDistribution::new(group, values)
    }
}
