//! Random exactly-normalized distributions with dyadic probabilities.

use std::sync::Arc;

use rand::seq::index;
use rand::Rng;

use crate::distribution::GroupDistribution;
use crate::group::FiniteGroup;
use crate::rational::{self, Rational};

/// Common denominator of generated probabilities.
pub const DYADIC_DENOMINATOR: u64 = 1 << 16;

/// Draws `n` integers summing to `2^16` by cutting `[0, 2^16]` at `n - 1`
/// random points and divides them by `2^16`.
///
/// With `full_support` the cut points are distinct and interior, so every
/// element gets positive mass. Panics if `full_support` is requested for a
/// group of order above `2^16`.
pub fn random_distribution<R: Rng + ?Sized>(
    group: &Arc<FiniteGroup>,
    rng: &mut R,
    full_support: bool,
) -> GroupDistribution {
    let n = group.order();
    let d = DYADIC_DENOMINATOR;
    let mut cuts: Vec<u64> = if full_support {
        assert!(n as u64 <= d, "order exceeds the dyadic denominator");
        index::sample(rng, (d - 1) as usize, n - 1)
            .into_iter()
            .map(|c| c as u64 + 1)
            .collect()
    } else {
        (1..n).map(|_| rng.random_range(0..=d)).collect()
    };
    cuts.push(0);
    cuts.push(d);
    cuts.sort_unstable();
    let probs: Vec<Rational> = cuts
        .windows(2)
        .map(|w| rational::ratio((w[1] - w[0]) as i64, d as i64))
        .collect();
    GroupDistribution::new(Arc::clone(group), probs).expect("cuts partition the denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_support_draws_are_positive() {
        let g = Arc::new(FiniteGroup::symmetric(4).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x = random_distribution(&g, &mut rng, true);
            assert!(x.has_full_support());
            assert!(x
                .probs()
                .iter()
                .all(|p| (p * Rational::from_integer(DYADIC_DENOMINATOR.into())).is_integer()));
        }
    }

    #[test]
    fn trivial_group_gets_point_mass() {
        let g = Arc::new(FiniteGroup::cyclic(1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(random_distribution(&g, &mut rng, true).probs(), &[rational::one()]);
        assert_eq!(random_distribution(&g, &mut rng, false).probs(), &[rational::one()]);
    }
}
