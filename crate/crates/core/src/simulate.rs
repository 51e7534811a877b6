//! Seeded Monte Carlo simulation of the walk.
//!
//! Randomness comes from ChaCha20 (`rand_chacha`): trajectory `t` of a run
//! with seed `s` uses `ChaCha20Rng::seed_from_u64(s)` switched to stream
//! `t`, so each trajectory owns an independent, platform-stable substream
//! and results do not depend on scheduling. Increments are drawn by exact
//! inverse-CDF sampling over the common denominator of the probabilities.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::{tv_distance, GroupDistribution};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::walk;

/// Samplers refuse distributions whose common denominator exceeds `2^256`.
pub const MAX_DENOMINATOR_BITS: u64 = 256;

/// Exact inverse-CDF sampler. The interval `[0, D)` is split into runs of
/// width `probs[k]·D`; a uniform integer in `[0, D)` selects its run.
#[derive(Clone, Debug)]
pub struct ExactSampler {
    denominator: BigUint,
    /// Exclusive upper ends of the runs, `cumulative[k] = D·Σ_{i<=k} probs[i]`.
    cumulative: Vec<BigUint>,
    small: Option<(u64, Vec<u64>)>,
}

impl ExactSampler {
    pub fn new(x: &GroupDistribution) -> Result<Self> {
        let (numerators, d) = rational::common_denominator(x.probs());
        let denominator = to_biguint(&d);
        if denominator > BigUint::one() << MAX_DENOMINATOR_BITS {
            return Err(Error::InvalidParameter(format!(
                "common denominator exceeds 2^{MAX_DENOMINATOR_BITS}"
            )));
        }
        let mut running = BigUint::zero();
        let cumulative: Vec<BigUint> = numerators
            .iter()
            .map(|a| {
                running += to_biguint(a);
                running.clone()
            })
            .collect();
        let small = denominator.to_u64().and_then(|d| {
            let c: Option<Vec<u64>> = cumulative.iter().map(ToPrimitive::to_u64).collect();
            c.map(|c| (d, c))
        });
        Ok(Self {
            denominator,
            cumulative,
            small,
        })
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Maps `u` in `[0, D)` to the element whose run contains it.
    pub fn select(&self, u: &BigUint) -> usize {
        self.cumulative.partition_point(|c| c <= u)
    }

    fn select_u64(cumulative: &[u64], u: u64) -> usize {
        cumulative.partition_point(|&c| c <= u)
    }

    /// Draws one element index.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.small {
            Some((d, c)) => Self::select_u64(c, uniform_below_u64(rng, *d)),
            None => self.select(&uniform_below(rng, &self.denominator)),
        }
    }
}

fn to_biguint(v: &BigInt) -> BigUint {
    match v.sign() {
        Sign::Minus => panic!("negative value in a probability vector"),
        _ => v.magnitude().clone(),
    }
}

/// Uniform integer in `[0, d)`: take `bits(d - 1)` random bits and reject
/// values `>= d`.
pub fn uniform_below_u64<R: RngCore + ?Sized>(rng: &mut R, d: u64) -> u64 {
    debug_assert!(d >= 1);
    if d == 1 {
        return 0;
    }
    let bits = 64 - (d - 1).leading_zeros();
    let mask = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    loop {
        let u = rng.next_u64() & mask;
        if u < d {
            return u;
        }
    }
}

/// Multi-word version of [`uniform_below_u64`].
pub fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, d: &BigUint) -> BigUint {
    debug_assert!(!d.is_zero());
    let top = d - 1u32;
    let bits = top.bits();
    if bits == 0 {
        return BigUint::zero();
    }
    let words = bits.div_ceil(64) as usize;
    let spare = words as u64 * 64 - bits;
    loop {
        let mut digits: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
        if spare > 0 {
            digits[words - 1] &= u64::MAX >> spare;
        }
        let bytes: Vec<u8> = digits.iter().flat_map(|w| w.to_le_bytes()).collect();
        let u = BigUint::from_bytes_le(&bytes);
        if &u < d {
            return u;
        }
    }
}

/// Generator for trajectory `t` under `seed`.
pub fn trajectory_rng(seed: u64, t: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(t);
    rng
}

pub fn sample_element<R: RngCore + ?Sized>(x: &GroupDistribution, rng: &mut R) -> Result<usize> {
    Ok(ExactSampler::new(x)?.sample(rng))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationResult {
    pub steps: u64,
    pub trajectories: u64,
    pub seed: u64,
    /// Number of trajectories ending at each element.
    pub counts: Vec<u64>,
    /// `counts[k] / trajectories`, exact.
    pub empirical: Vec<Rational>,
    pub tv_to_exact: f64,
    pub tv_to_uniform: f64,
}

#[derive(Serialize)]
struct SimulationJson<'a> {
    steps: u64,
    trajectories: u64,
    seed: u64,
    counts: &'a [u64],
    empirical: Vec<String>,
    tv_to_exact: f64,
    tv_to_uniform: f64,
}

impl Serialize for SimulationResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SimulationJson {
            steps: self.steps,
            trajectories: self.trajectories,
            seed: self.seed,
            counts: &self.counts,
            empirical: self.empirical.iter().map(rational::format).collect(),
            tv_to_exact: self.tv_to_exact,
            tv_to_uniform: self.tv_to_uniform,
        }
        .serialize(s)
    }
}

/// Runs `trajectories` independent copies of the walk for `steps` steps.
///
/// Distances are exact: the empirical law `counts/N` is compared with the
/// exact marginal from [`walk::exact_marginal`] and with the uniform law in
/// rational arithmetic, then rounded once.
pub fn simulate_walk(
    xi: &GroupDistribution,
    steps: u64,
    trajectories: u64,
    seed: u64,
) -> Result<SimulationResult> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    if trajectories == 0 {
        return Err(Error::InvalidParameter("trajectories must be at least 1".into()));
    }
    let group = Arc::clone(xi.group());
    let n = group.order();
    let sampler = ExactSampler::new(xi)?;

    let counts = (0..trajectories)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut acc, t| {
                let mut rng = trajectory_rng(seed, t);
                let mut x = sampler.sample(&mut rng);
                for _ in 1..steps {
                    x = group.multiply(x, sampler.sample(&mut rng));
                }
                acc[x] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let total = BigInt::from(trajectories);
    let empirical: Vec<Rational> = counts
        .iter()
        .map(|&c| Rational::new(BigInt::from(c), total.clone()))
        .collect();
    let exact = walk::exact_marginal(xi, steps, walk::DEFAULT_MAX_BITS)?;
    let uniform = GroupDistribution::uniform(Arc::clone(&group));
    Ok(SimulationResult {
        steps,
        trajectories,
        seed,
        counts,
        tv_to_exact: rational::to_f64(&tv_distance(&empirical, exact.probs())),
        tv_to_uniform: rational::to_f64(&tv_distance(&empirical, uniform.probs())),
        empirical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::rational::ratio;

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    #[test]
    fn point_mass_always_sampled() {
        let g = arc(FiniteGroup::cyclic(5).unwrap());
        let x = GroupDistribution::point_mass(g, 3).unwrap();
        let mut rng = trajectory_rng(1, 0);
        assert!((0..100).all(|_| sample_element(&x, &mut rng).unwrap() == 3));
    }

    #[test]
    fn partition_widths_are_exact() {
        let g = arc(FiniteGroup::cyclic(4).unwrap());
        let x = GroupDistribution::new(
            g,
            vec![ratio(1, 6), ratio(0, 1), ratio(1, 4), ratio(7, 12)],
        )
        .unwrap();
        let sampler = ExactSampler::new(&x).unwrap();
        let d = sampler.denominator().to_u64().unwrap();
        assert_eq!(d, 12);
        let mut counts = [0u64; 4];
        for u in 0..d {
            counts[sampler.select(&BigUint::from(u))] += 1;
        }
        // width of run k is probs[k]·D
        assert_eq!(counts, [2, 0, 3, 7]);
    }

    #[test]
    fn fair_coin_concentrates() {
        let g = arc(FiniteGroup::cyclic(2).unwrap());
        let x = GroupDistribution::uniform(g);
        let sampler = ExactSampler::new(&x).unwrap();
        let mut rng = trajectory_rng(2024, 0);
        let heads = (0..1_000_000).filter(|_| sampler.sample(&mut rng) == 0).count() as f64;
        // 3 standard deviations of Binomial(10^6, 1/2)
        assert!((heads - 500_000.0).abs() <= 3.0 * (1e6f64 * 0.25).sqrt());
    }

    #[test]
    fn big_denominators_use_multiword_draws() {
        let g = arc(FiniteGroup::cyclic(2).unwrap());
        let d = BigInt::one() << 100u32;
        let p = Rational::new(BigInt::one(), d);
        let x = GroupDistribution::new(g, vec![rational::one() - &p, p]).unwrap();
        let sampler = ExactSampler::new(&x).unwrap();
        assert!(sampler.small.is_none());
        let mut rng = trajectory_rng(5, 0);
        assert!((0..1000).all(|_| sampler.sample(&mut rng) == 0));

        let huge = Rational::new(BigInt::one(), BigInt::one() << 300u32);
        let g = arc(FiniteGroup::cyclic(2).unwrap());
        let x = GroupDistribution::new(g, vec![rational::one() - &huge, huge]).unwrap();
        assert!(ExactSampler::new(&x).is_err());
    }

    #[test]
    fn uniform_below_stays_in_range() {
        let mut rng = trajectory_rng(9, 3);
        for d in [1u64, 2, 3, 7, 1 << 40, u64::MAX] {
            assert!((0..200).all(|_| uniform_below_u64(&mut rng, d) < d));
        }
        let d = (BigUint::one() << 130u32) + 17u32;
        assert!((0..200).all(|_| uniform_below(&mut rng, &d) < d));
    }

    #[test]
    fn deterministic_walks() {
        let g = arc(FiniteGroup::dihedral(5).unwrap());
        let e = GroupDistribution::point_mass(g.clone(), g.identity()).unwrap();
        let r = simulate_walk(&e, 7, 100, 1).unwrap();
        assert_eq!(r.counts[g.identity()], 100);
        assert_eq!(r.tv_to_exact, 0.0);

        let k = 1;
        let r = simulate_walk(&GroupDistribution::point_mass(g.clone(), k).unwrap(), 3, 10, 1).unwrap();
        let target = g.multiply(g.multiply(k, k), k);
        assert_eq!(r.counts[target], 10);
    }

    #[test]
    fn single_trajectory_is_point_mass() {
        let g = arc(FiniteGroup::symmetric(3).unwrap());
        let r = simulate_walk(&GroupDistribution::uniform(g), 4, 1, 77).unwrap();
        assert_eq!(r.counts.iter().sum::<u64>(), 1);
        assert_eq!(r.empirical.iter().filter(|p| **p == rational::one()).count(), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = arc(FiniteGroup::cyclic(3).unwrap());
        let u = GroupDistribution::uniform(g);
        assert!(simulate_walk(&u, 0, 10, 0).is_err());
        assert!(simulate_walk(&u, 10, 0, 0).is_err());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let g = arc(FiniteGroup::symmetric(3).unwrap());
        let xi = GroupDistribution::from_weights(g, (1..=6).map(rational::int).collect()).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_walk(&xi, 10, 5000, 42).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one.counts.iter().sum::<u64>(), 5000);
    }
}
