//! The walk `X_1 = ξ_1`, `X_{m+1} = X_m ξ_{m+1}` with i.i.d. increments.
//!
//! Marginals are tracked exactly by repeated convolution until an entry
//! outgrows [`WalkOptions::max_bits`], then in binary64. Total variation to
//! the uniform law is recorded at every step.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use crate::cayley::{convolution_matrix, StochasticMatrix};
use crate::distribution::{tv_distance, GroupDistribution};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rational::{self, Rational};
use crate::spectral;

pub const DEFAULT_MAX_BITS: u64 = 1_000_000;
pub const DEFAULT_EPSILON: f64 = 1e-8;
pub const DEFAULT_MAX_STEPS: u64 = 10_000;
pub const PERIOD_WINDOW: usize = 256;
pub const PERIOD_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkOptions {
    pub epsilon: f64,
    pub max_steps: u64,
    /// Bit-size cap per rational entry before switching to binary64.
    pub max_bits: u64,
}

impl Default for WalkOptions {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            max_steps: DEFAULT_MAX_STEPS,
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

/// Law of `X_m`, by `m - 1` exact convolutions with `xi`.
pub fn exact_marginal(xi: &GroupDistribution, m: u64, max_bits: u64) -> Result<GroupDistribution> {
    if m == 0 {
        return Err(Error::InvalidParameter("step count must be at least 1".into()));
    }
    let mut law = xi.clone();
    for _ in 1..m {
        law = law.convolve(xi)?;
        if law.max_bits() > max_bits {
            return Err(Error::ResourceGuard { cap: max_bits });
        }
    }
    Ok(law)
}

/// `a^m` by binary exponentiation with exact products.
pub fn matrix_power(a: &StochasticMatrix, m: u64, max_bits: u64) -> Result<StochasticMatrix> {
    if m == 0 {
        return Err(Error::InvalidParameter("exponent must be at least 1".into()));
    }
    let guard = |x: StochasticMatrix| {
        if x.max_bits() > max_bits {
            Err(Error::ResourceGuard { cap: max_bits })
        } else {
            Ok(x)
        }
    };
    let mut result: Option<StochasticMatrix> = None;
    let mut base = a.clone();
    let mut e = m;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => guard(r.multiply(&base)?)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = guard(base.multiply(&base)?)?;
    }
    Ok(result.expect("m >= 1"))
}

/// Which arithmetic produced a TV value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkReport {
    pub group_order: usize,
    pub increment_support_full: bool,
    pub converged: bool,
    pub limit: Option<GroupDistribution>,
    pub steps_to_epsilon: Option<u64>,
    pub epsilon: f64,
    /// `(m, TV(L(X_m), uniform))` for `m = 1, 2, ...`.
    pub tv_sequence: Vec<(u64, f64)>,
    pub slem: Option<f64>,
    pub period: Option<u64>,
    /// First step computed in binary64, if the exact pipeline was abandoned.
    pub float_from_step: Option<u64>,
}

impl WalkReport {
    pub fn pipeline_at(&self, m: u64) -> Pipeline {
        match self.float_from_step {
            Some(s) if m >= s => Pipeline::Float,
            _ => Pipeline::Exact,
        }
    }

    pub fn final_tv(&self) -> Option<f64> {
        self.tv_sequence.last().map(|&(_, tv)| tv)
    }

    /// `m,tv,pipeline` rows with a header line.
    pub fn tv_csv(&self) -> String {
        let mut out = String::from("m,tv,pipeline\n");
        for &(m, tv) in &self.tv_sequence {
            let pipeline = match self.pipeline_at(m) {
                Pipeline::Exact => "exact",
                Pipeline::Float => "float",
            };
            out.push_str(&format!("{m},{tv:e},{pipeline}\n"));
        }
        out
    }
}

#[derive(Serialize)]
struct WalkReportJson<'a> {
    group_order: usize,
    increment_support_full: bool,
    converged: bool,
    limit: Option<Vec<String>>,
    steps_to_epsilon: Option<u64>,
    epsilon: f64,
    tv_sequence: &'a [(u64, f64)],
    slem: Option<f64>,
    period: Option<u64>,
    float_from_step: Option<u64>,
}

impl Serialize for WalkReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WalkReportJson {
            group_order: self.group_order,
            increment_support_full: self.increment_support_full,
            converged: self.converged,
            limit: self
                .limit
                .as_ref()
                .map(|d| d.probs().iter().map(rational::format).collect()),
            steps_to_epsilon: self.steps_to_epsilon,
            epsilon: self.epsilon,
            tv_sequence: &self.tv_sequence,
            slem: self.slem,
            period: self.period,
            float_from_step: self.float_from_step,
        }
        .serialize(s)
    }
}

enum Marginal {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl Marginal {
    fn to_f64(&self) -> Vec<f64> {
        match self {
            Marginal::Exact(p) => p.iter().map(rational::to_f64).collect(),
            Marginal::Float(p) => p.clone(),
        }
    }
}

fn float_convolve(group: &FiniteGroup, x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for (k, &a) in x.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (l, &b) in y.iter().enumerate() {
            out[group.multiply(k, l)] += a * b;
        }
    }
    out
}

fn float_tv(x: &[f64], y: &[f64]) -> f64 {
    0.5 * x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

pub fn analyze_walk(xi: &GroupDistribution, epsilon: f64, max_steps: u64) -> Result<WalkReport> {
    analyze_walk_with(
        xi,
        &WalkOptions {
            epsilon,
            max_steps,
            ..WalkOptions::default()
        },
    )
}

/// Follows the marginal law of `X_m` until its TV distance to uniform drops
/// to `epsilon`, `max_steps` is reached, or (for increments without full
/// support) the marginal repeats.
///
/// Period detection only runs when the increment misses some element: an
/// exact repeat of an earlier marginal ends the run at once; otherwise,
/// once `max_steps` is reached, the last [`PERIOD_WINDOW`] marginals are
/// compared with tolerance [`PERIOD_TOLERANCE`] in TV.
pub fn analyze_walk_with(xi: &GroupDistribution, options: &WalkOptions) -> Result<WalkReport> {
    let epsilon = options.epsilon;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if options.max_steps == 0 {
        return Err(Error::InvalidParameter("max_steps must be at least 1".into()));
    }
    let group = Arc::clone(xi.group());
    let n = group.order();
    let full_support = xi.has_full_support();
    let uniform_exact = GroupDistribution::uniform(Arc::clone(&group));
    let uniform_f = vec![1.0 / n as f64; n];
    let xi_f = xi.to_f64();

    let mut state = Marginal::Exact(xi.probs().to_vec());
    let mut float_from_step = None;
    let mut tv_sequence = Vec::new();
    let mut history: VecDeque<(u64, Marginal)> = VecDeque::new();
    let mut converged = false;
    let mut period = None;

    for m in 1..=options.max_steps {
        if m > 1 {
            state = match state {
                Marginal::Exact(p) => {
                    let next = crate::distribution::convolve_on(group.magma(), &p, xi.probs());
                    if next.iter().map(rational::bit_size).max().unwrap_or(0) > options.max_bits {
                        float_from_step = Some(m);
                        Marginal::Float(float_convolve(
                            &group,
                            &p.iter().map(rational::to_f64).collect::<Vec<_>>(),
                            &xi_f,
                        ))
                    } else {
                        Marginal::Exact(next)
                    }
                }
                Marginal::Float(p) => Marginal::Float(float_convolve(&group, &p, &xi_f)),
            };
        }
        let tv = match &state {
            Marginal::Exact(p) => rational::to_f64(&tv_distance(p, uniform_exact.probs())),
            Marginal::Float(p) => float_tv(p, &uniform_f),
        };
        tv_sequence.push((m, tv));
        if tv <= epsilon {
            converged = true;
            break;
        }
        if full_support {
            continue;
        }
        if let Marginal::Exact(p) = &state {
            let repeat = history.iter().rev().find_map(|(earlier, h)| match h {
                Marginal::Exact(q) if q == p => Some(m - earlier),
                _ => None,
            });
            if repeat.is_some() {
                period = repeat;
                break;
            }
        }
        if history.len() == PERIOD_WINDOW {
            history.pop_front();
        }
        let snapshot = match &state {
            Marginal::Exact(p) => Marginal::Exact(p.clone()),
            Marginal::Float(p) => Marginal::Float(p.clone()),
        };
        history.push_back((m, snapshot));
    }

    if !converged && !full_support && period.is_none() {
        let current = state.to_f64();
        let last = tv_sequence.last().map_or(0, |&(m, _)| m);
        period = history
            .iter()
            .rev()
            .filter(|(m, _)| *m < last)
            .find(|(_, h)| float_tv(&current, &h.to_f64()) < PERIOD_TOLERANCE)
            .map(|(m, _)| last - m);
    }

    let slem = spectral::slem(&convolution_matrix(xi)).ok();
    Ok(WalkReport {
        group_order: n,
        increment_support_full: full_support,
        converged,
        limit: converged.then(|| uniform_exact.clone()),
        steps_to_epsilon: converged.then(|| tv_sequence.last().unwrap().0),
        epsilon,
        tv_sequence,
        slem,
        period,
        float_from_step,
    })
}

/// Least `m` with `TV(L(X_m), uniform) <= epsilon`, for increments with
/// full support.
pub fn mixing_time(xi: &GroupDistribution, epsilon: f64) -> Result<u64> {
    mixing_time_with(
        xi,
        &WalkOptions {
            epsilon,
            ..WalkOptions::default()
        },
    )
}

pub fn mixing_time_with(xi: &GroupDistribution, options: &WalkOptions) -> Result<u64> {
    if !xi.has_full_support() {
        return Err(Error::HypothesisNotMet(
            "mixing time needs an increment with full support".into(),
        ));
    }
    let report = analyze_walk_with(xi, options)?;
    report.steps_to_epsilon.ok_or(Error::NotConverged {
        epsilon: options.epsilon,
        max_steps: options.max_steps,
    })
}
