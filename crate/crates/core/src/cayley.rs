//! Permutation matrices of left translations and convolution matrices.
//!
//! Matrix convention: `P_σ[i][j] = 1` iff `i = σ(j)`. With it,
//! `P_σ P_τ = P_{σ∘τ}` and the left translations `σ_k` satisfy
//! `σ_k ∘ σ_l = σ_{k·l}`, so `Con(p) = Σ_k p_k P_{σ_k}` turns convolution
//! into matrix multiplication.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::distribution::{convolve_on, GroupDistribution};
use crate::error::{Error, Result};
use crate::group::{validate_group, FiniteGroup, Magma, Permutation, ValidateOptions};
use crate::linalg::RationalMatrix;
use crate::rational::{self, Rational};

/// Square 0/1 matrix. Holds permutation matrices and the all-ones `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl BinaryMatrix {
    pub fn all_ones(n: usize) -> Self {
        Self {
            n,
            entries: vec![1; n * n],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    /// Exactly one 1 in every row and every column.
    pub fn is_permutation_matrix(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).map(|j| self.get(i, j) as usize).sum::<usize>() == 1)
            && (0..n).all(|j| (0..n).map(|i| self.get(i, j) as usize).sum::<usize>() == 1)
    }

    pub fn to_rational(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) == 1 {
                    m.set(i, j, Rational::one());
                }
            }
        }
        m
    }
}

/// `P_σ` with `P_σ[i][j] = 1` iff `i = σ(j)`.
pub fn permutation_matrix(sigma: &Permutation) -> BinaryMatrix {
    let n = sigma.len();
    let mut entries = vec![0; n * n];
    for j in 0..n {
        entries[sigma.apply(j) * n + j] = 1;
    }
    BinaryMatrix { n, entries }
}

/// Exact nonnegative matrix whose rows and columns each sum to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochasticMatrix {
    inner: RationalMatrix,
}

impl StochasticMatrix {
    pub fn new(matrix: RationalMatrix) -> Result<Self> {
        let n = matrix.rows();
        if matrix.cols() != n {
            return Err(Error::NotStochastic(format!(
                "{}x{} is not square",
                n,
                matrix.cols()
            )));
        }
        if let Some(pos) = matrix.entries().iter().position(Signed::is_negative) {
            return Err(Error::NotStochastic(format!(
                "negative entry at ({}, {})",
                pos / n + 1,
                pos % n + 1
            )));
        }
        let one = Rational::one();
        for i in 0..n {
            let s: Rational = matrix.row_vec(i).iter().sum();
            if s != one {
                return Err(Error::NotStochastic(format!(
                    "row {} sums to {}",
                    i + 1,
                    rational::format(&s)
                )));
            }
        }
        for j in 0..n {
            let s: Rational = (0..n).map(|i| matrix.get(i, j)).sum();
            if s != one {
                return Err(Error::NotStochastic(format!(
                    "column {} sums to {}",
                    j + 1,
                    rational::format(&s)
                )));
            }
        }
        Ok(Self { inner: matrix })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(RationalMatrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: RationalMatrix::identity(n),
        }
    }

    /// `J/n`.
    pub fn uniform(n: usize) -> Self {
        let v = rational::ratio(1, n as i64);
        Self {
            inner: RationalMatrix::from_rows(vec![vec![v; n]; n]).unwrap(),
        }
    }

    pub fn from_permutation(sigma: &Permutation) -> Self {
        Self {
            inner: permutation_matrix(sigma).to_rational(),
        }
    }

    pub fn order(&self) -> usize {
        self.inner.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.inner.get(i, j)
    }

    pub fn as_rational(&self) -> &RationalMatrix {
        &self.inner
    }

    pub fn max_bits(&self) -> u64 {
        self.inner.max_bits()
    }

    pub fn is_positive(&self) -> bool {
        self.inner.entries().iter().all(Signed::is_positive)
    }

    /// Exact product; doubly stochastic matrices are closed under it, which
    /// is re-checked on the result.
    pub fn multiply(&self, other: &StochasticMatrix) -> Result<StochasticMatrix> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        StochasticMatrix::new(self.inner.mul(&other.inner)?)
    }

    /// Canonical form: rows of `"num/den"` strings.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        let n = self.order();
        (0..n)
            .map(|i| (0..n).map(|j| rational::format(self.get(i, j))).collect())
            .collect()
    }

    /// Decimal approximations, 17 significant digits, comma separated.
    pub fn to_csv(&self) -> String {
        let n = self.order();
        let mut out = String::new();
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| format_sig17(rational::to_f64(self.get(i, j))))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        let n = self.order();
        (0..n)
            .map(|i| (0..n).map(|j| rational::to_f64(self.get(i, j))).collect())
            .collect()
    }
}

/// `%.17g`-style formatting.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..17).contains(&exp) {
        return sci;
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let mut s = if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

/// `Con(p) = Σ_k p_k P_{σ_k}`.
pub fn convolution_matrix(x: &GroupDistribution) -> StochasticMatrix {
    let m = convolution_matrix_on(x.group().magma(), x.probs());
    StochasticMatrix { inner: m }
}

/// `Σ_k p_k M_k` where `M_k[i][j] = 1` iff `i = op(k, j)`. For a group
/// table this is the convolution matrix; for other tables the result need
/// not be doubly stochastic.
pub fn convolution_matrix_on(magma: &Magma, probs: &[Rational]) -> RationalMatrix {
    let n = magma.order();
    let mut m = RationalMatrix::zeros(n, n);
    for (k, p) in probs.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for (j, i) in magma.row(k).enumerate() {
            m.add_to(i, j, p);
        }
    }
    m
}

pub fn matrix_multiply(a: &StochasticMatrix, b: &StochasticMatrix) -> Result<StochasticMatrix> {
    a.multiply(b)
}

/// First entry where `Con(x·y)` and `Con(x) Con(y)` differ (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub row: usize,
    pub col: usize,
    pub convolved: Rational,
    pub product: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomomorphismCheck {
    pub holds: bool,
    pub witness: Option<Discrepancy>,
}

#[derive(Serialize)]
struct DiscrepancyJson {
    row: usize,
    col: usize,
    convolved: String,
    product: String,
}

impl Serialize for HomomorphismCheck {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HomomorphismCheck", 2)?;
        st.serialize_field("holds", &self.holds)?;
        st.serialize_field(
            "witness",
            &self.witness.as_ref().map(|d| DiscrepancyJson {
                row: d.row + 1,
                col: d.col + 1,
                convolved: rational::format(&d.convolved),
                product: rational::format(&d.product),
            }),
        )?;
        st.end()
    }
}

/// Exact check of `Con(x·y) = Con(x) Con(y)`.
pub fn check_homomorphism(x: &GroupDistribution, y: &GroupDistribution) -> Result<HomomorphismCheck> {
    if x.group().magma() != y.group().magma() {
        return Err(Error::GroupMismatch);
    }
    check_homomorphism_on(x.group().magma(), x.probs(), y.probs())
}

/// Same check on an arbitrary table.
pub fn check_homomorphism_on(
    magma: &Magma,
    x: &[Rational],
    y: &[Rational],
) -> Result<HomomorphismCheck> {
    let n = magma.order();
    if x.len() != n || y.len() != n {
        return Err(Error::InvalidDistribution(format!(
            "probability vectors must have length {n}"
        )));
    }
    let lhs = convolution_matrix_on(magma, &convolve_on(magma, x, y));
    let rhs = convolution_matrix_on(magma, x).mul(&convolution_matrix_on(magma, y))?;
    let witness = (0..n * n).find_map(|c| {
        let (i, j) = (c / n, c % n);
        (lhs.get(i, j) != rhs.get(i, j)).then(|| Discrepancy {
            row: i,
            col: j,
            convolved: lhs.get(i, j).clone(),
            product: rhs.get(i, j).clone(),
        })
    });
    Ok(HomomorphismCheck {
        holds: witness.is_none(),
        witness,
    })
}

/// For each cell `(i, j)` the number of `k` with `op(k, j) = i`.
fn hit_counts(magma: &Magma) -> Vec<usize> {
    let n = magma.order();
    let mut counts = vec![0usize; n * n];
    for k in 0..n {
        for (j, i) in magma.row(k).enumerate() {
            counts[i * n + j] += 1;
        }
    }
    counts
}

fn first_multiplicity_violation(magma: &Magma) -> Option<Error> {
    let n = magma.order();
    let counts = hit_counts(magma);
    counts
        .iter()
        .position(|&c| c != 1)
        .map(|pos| Error::Multiplicity {
            row: pos / n,
            col: pos % n,
            count: counts[pos],
        })
}

/// `K[i][j]` = the unique `k` with `P_{σ_k}[i][j] = 1`, i.e.
/// `g_k·g_j = g_i`.
pub fn unique_k_structure(group: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    unique_k_from_table(group.magma())
}

/// [`unique_k_structure`] on an unvalidated table.
///
/// The multiplicity count only needs the table's columns to be
/// permutations, so it is followed by the group-axiom precondition check:
/// a Latin square that is not a group fails with [`Error::Validation`],
/// anything else that breaks uniqueness with [`Error::Multiplicity`].
pub fn unique_k_structure_on(magma: &Magma) -> Result<Vec<Vec<usize>>> {
    if let Some(err) = first_multiplicity_violation(magma) {
        return Err(err);
    }
    let report = validate_group(magma, ValidateOptions::default());
    if !report.is_group {
        return Err(Error::Validation(report));
    }
    unique_k_from_table(magma)
}

fn unique_k_from_table(magma: &Magma) -> Result<Vec<Vec<usize>>> {
    let n = magma.order();
    let mut k_of = vec![vec![usize::MAX; n]; n];
    let mut counts = vec![0usize; n * n];
    for k in 0..n {
        for (j, i) in magma.row(k).enumerate() {
            k_of[i][j] = k;
            counts[i * n + j] += 1;
        }
    }
    if let Some(pos) = counts.iter().position(|&c| c != 1) {
        return Err(Error::Multiplicity {
            row: pos / n,
            col: pos % n,
            count: counts[pos],
        });
    }
    Ok(k_of)
}

/// The permutation matrices `P_{σ_k}` have pairwise disjoint supports
/// (from the unique-k structure) and the `n² x n` matrix of their
/// vectorizations has rank `n` by exact elimination.
pub fn check_linear_independence(group: &FiniteGroup) -> bool {
    unique_k_structure(group).is_ok() && stacked_rank(group.magma()) == group.order()
}

/// Rank of the `n² x n` matrix whose column `k` is `vec(M_k)`.
pub fn stacked_rank(magma: &Magma) -> usize {
    let n = magma.order();
    let mut stacked = RationalMatrix::zeros(n * n, n);
    for k in 0..n {
        for (j, i) in magma.row(k).enumerate() {
            stacked.set(i * n + j, k, Rational::one());
        }
    }
    stacked.rank()
}

/// `Σ_k P_{σ_k}`, which for a group is the all-ones matrix `J`.
pub fn sum_permutation_matrices(group: &FiniteGroup) -> Result<BinaryMatrix> {
    sum_permutation_matrices_on(group.magma())
}

pub fn sum_permutation_matrices_on(magma: &Magma) -> Result<BinaryMatrix> {
    match first_multiplicity_violation(magma) {
        Some(err) => Err(err),
        None => Ok(BinaryMatrix::all_ones(magma.order())),
    }
}

/// Reads a distribution back out of a matrix in the span of the `P_{σ_k}`.
///
/// `probs[k]` is taken from column `e` (the identity), where
/// `K[k][e] = k`; every other cell is then checked against
/// `entries[i][j] = probs[K[i][j]]`.
pub fn recover_distribution(
    matrix: &StochasticMatrix,
    group: &Arc<FiniteGroup>,
) -> Result<GroupDistribution> {
    let n = group.order();
    if matrix.order() != n {
        return Err(Error::OrderMismatch {
            left: matrix.order(),
            right: n,
        });
    }
    let k_of = unique_k_structure(group)?;
    let e = group.identity();
    let probs: Vec<Rational> = (0..n).map(|k| matrix.get(k, e).clone()).collect();
    for i in 0..n {
        for j in 0..n {
            if *matrix.get(i, j) != probs[k_of[i][j]] {
                return Err(Error::NotConvolutionMatrix(format!(
                    "entry ({}, {}) is {} but element {} has weight {}",
                    i + 1,
                    j + 1,
                    rational::format(matrix.get(i, j)),
                    k_of[i][j] + 1,
                    rational::format(&probs[k_of[i][j]])
                )));
            }
        }
    }
    GroupDistribution::new(Arc::clone(group), probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parse_magma, NONASSOCIATIVE_LOOP_5};
    use crate::random::random_distribution;
    use crate::rational::ratio;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    fn groups_up_to_24() -> Vec<Arc<FiniteGroup>> {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let mut gs: Vec<FiniteGroup> = vec![
            FiniteGroup::cyclic(1).unwrap(),
            FiniteGroup::cyclic(6).unwrap(),
            FiniteGroup::cyclic(12).unwrap(),
            FiniteGroup::dihedral(3).unwrap(),
            FiniteGroup::dihedral(4).unwrap(),
            FiniteGroup::dihedral(6).unwrap(),
            FiniteGroup::symmetric(3).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::direct_product(&z2, &z3).unwrap(),
        ];
        gs.push(FiniteGroup::direct_product(&z2, &FiniteGroup::dihedral(3).unwrap()).unwrap());
        gs.into_iter().map(arc).collect()
    }

    #[test]
    fn permutation_matrix_examples() {
        assert_eq!(
            permutation_matrix(&Permutation::identity(3)).to_rational(),
            RationalMatrix::identity(3)
        );
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let p = permutation_matrix(&z3.left_translation(1).unwrap());
        // 1-based ones at (2,1), (3,2), (1,3)
        let ones: Vec<(usize, usize)> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| p.get(i, j) == 1)
            .collect();
        assert_eq!(ones, vec![(0, 2), (1, 0), (2, 1)]);
        assert!(p.is_permutation_matrix());
    }

    #[test]
    fn permutation_matrices_compose_on_s3() {
        let perms: Vec<Permutation> = {
            let s3 = FiniteGroup::symmetric(3).unwrap();
            // the elements of S_3 as permutations of {0,1,2}
            s3.names()
                .unwrap()
                .iter()
                .map(|s| Permutation::new(s.bytes().map(|b| (b - b'1') as usize).collect()).unwrap())
                .collect()
        };
        for a in &perms {
            for b in &perms {
                let lhs = StochasticMatrix::from_permutation(a)
                    .multiply(&StochasticMatrix::from_permutation(b))
                    .unwrap();
                assert_eq!(lhs, StochasticMatrix::from_permutation(&a.compose(b).unwrap()));
            }
        }
    }

    #[test]
    fn convolution_matrix_examples() {
        let g = arc(FiniteGroup::symmetric(3).unwrap());
        let e = GroupDistribution::point_mass(g.clone(), g.identity()).unwrap();
        assert_eq!(convolution_matrix(&e), StochasticMatrix::identity(6));
        assert_eq!(
            convolution_matrix(&GroupDistribution::uniform(g.clone())),
            StochasticMatrix::uniform(6)
        );

        let z2 = arc(FiniteGroup::cyclic(2).unwrap());
        let p = ratio(2, 7);
        let q = ratio(5, 7);
        let x = GroupDistribution::new(z2, vec![p.clone(), q.clone()]).unwrap();
        let expected =
            StochasticMatrix::from_rows(vec![vec![p.clone(), q.clone()], vec![q, p]]).unwrap();
        assert_eq!(convolution_matrix(&x), expected);
    }

    #[test]
    fn convolution_matrix_is_doubly_stochastic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in groups_up_to_24() {
            let x = random_distribution(&g, &mut rng, false);
            let c = convolution_matrix(&x);
            assert!(StochasticMatrix::new(c.as_rational().clone()).is_ok());
        }
    }

    #[test]
    fn multiply_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = arc(FiniteGroup::dihedral(4).unwrap());
        let a = convolution_matrix(&random_distribution(&g, &mut rng, false));
        assert_eq!(a.multiply(&StochasticMatrix::identity(8)).unwrap(), a);
        assert_eq!(StochasticMatrix::uniform(8).multiply(&a).unwrap(), StochasticMatrix::uniform(8));
        assert!(a.multiply(&StochasticMatrix::identity(3)).is_err());
    }

    #[test]
    fn stochastic_matrix_rejects() {
        let bad = |rows: Vec<Vec<Rational>>| StochasticMatrix::from_rows(rows).is_err();
        assert!(bad(vec![vec![ratio(1, 2), ratio(1, 2)], vec![ratio(1, 2), ratio(1, 3)]]));
        assert!(bad(vec![vec![ratio(3, 2), ratio(-1, 2)], vec![ratio(-1, 2), ratio(3, 2)]]));
        // row stochastic only
        assert!(bad(vec![vec![ratio(1, 1), ratio(0, 1)], vec![ratio(1, 1), ratio(0, 1)]]));
    }

    #[test]
    fn homomorphism_with_identity_and_on_s3() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = arc(FiniteGroup::symmetric(3).unwrap());
        let e = GroupDistribution::point_mass(g.clone(), g.identity()).unwrap();
        for _ in 0..20 {
            let x = random_distribution(&g, &mut rng, false);
            let y = random_distribution(&g, &mut rng, false);
            assert!(check_homomorphism(&x, &e).unwrap().holds);
            let r = check_homomorphism(&x, &y).unwrap();
            assert!(r.holds && r.witness.is_none());
        }
    }

    /// Swapping the factor order in the product breaks the identity on a
    /// nonabelian group, which pins the orientation of the convention.
    #[test]
    fn convention_orientation_regression() {
        let g = arc(FiniteGroup::dihedral(3).unwrap());
        let r = GroupDistribution::point_mass(g.clone(), 1).unwrap();
        let s = GroupDistribution::point_mass(g.clone(), 3).unwrap();
        let lhs = convolution_matrix(&r.convolve(&s).unwrap());
        assert_eq!(lhs, convolution_matrix(&r).multiply(&convolution_matrix(&s)).unwrap());
        assert_ne!(lhs, convolution_matrix(&s).multiply(&convolution_matrix(&r)).unwrap());
    }

    #[test]
    fn homomorphism_fails_on_nonassociative_loop() {
        let (magma, _) = parse_magma(NONASSOCIATIVE_LOOP_5).unwrap();
        let point = |k: usize| {
            let mut v = vec![rational::zero(); 5];
            v[k] = rational::one();
            v
        };
        // associativity fails at (2,2,3) in 1-based indices
        let check = check_homomorphism_on(&magma, &point(1), &point(1)).unwrap();
        assert!(!check.holds);
        let w = check.witness.unwrap();
        assert_ne!(w.convolved, w.product);
        // identity element still behaves
        assert!(check_homomorphism_on(&magma, &point(0), &point(3)).unwrap().holds);
    }

    #[test]
    fn unique_k_examples() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(unique_k_structure(&z2).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        for g in groups_up_to_24() {
            let k = unique_k_structure(&g).unwrap();
            let n = g.order();
            for j in 0..n {
                // i = j forces σ_k(j) = j, so k is the identity
                assert_eq!(k[j][j], g.identity());
            }
            for i in 0..n {
                let mut row = k[i].clone();
                row.sort_unstable();
                assert_eq!(row, (0..n).collect::<Vec<_>>());
                let mut col: Vec<usize> = (0..n).map(|r| k[r][i]).collect();
                col.sort_unstable();
                assert_eq!(col, (0..n).collect::<Vec<_>>());
            }
            // K[i][j] = g_i · g_j^{-1}
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(k[i][j], g.multiply(i, g.inverse(j)));
                }
            }
        }
    }

    #[test]
    fn unique_k_rejects_non_groups() {
        let (loop5, _) = parse_magma(NONASSOCIATIVE_LOOP_5).unwrap();
        assert!(matches!(unique_k_structure_on(&loop5), Err(Error::Validation(_))));
        let broken = Magma::from_rows(&[vec![0, 1], vec![1, 1]]).unwrap();
        match unique_k_structure_on(&broken) {
            Err(Error::Multiplicity { row, col, count }) => {
                assert_eq!((row, col), (0, 1));
                assert_eq!(count, 0);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(sum_permutation_matrices_on(&broken), Err(Error::Multiplicity { .. })));
        assert_eq!(
            unique_k_structure_on(FiniteGroup::cyclic(5).unwrap().magma()).unwrap(),
            unique_k_structure(&FiniteGroup::cyclic(5).unwrap()).unwrap()
        );
    }

    #[test]
    fn structural_facts_on_builtin_groups() {
        for g in groups_up_to_24() {
            assert_eq!(sum_permutation_matrices(&g).unwrap(), BinaryMatrix::all_ones(g.order()));
            assert_eq!(stacked_rank(g.magma()), g.order());
            assert!(check_linear_independence(&g));
        }
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let j = sum_permutation_matrices(&s3).unwrap();
        assert!((0..6).all(|i| (0..6).all(|k| j.get(i, k) == 1)));
    }

    #[test]
    fn stacked_rank_drops_for_repeated_rows() {
        // two equal rows give equal M_k, so rank < n
        let m = Magma::from_rows(&[vec![0, 1, 2], vec![0, 1, 2], vec![2, 0, 1]]).unwrap();
        assert_eq!(stacked_rank(&m), 2);
    }

    #[test]
    fn recover_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for g in groups_up_to_24().into_iter().filter(|g| g.order() <= 12) {
            for _ in 0..10 {
                let x = random_distribution(&g, &mut rng, false);
                assert_eq!(recover_distribution(&convolution_matrix(&x), &g).unwrap(), x);
            }
            let n = g.order();
            assert_eq!(
                recover_distribution(&StochasticMatrix::identity(n), &g).unwrap(),
                GroupDistribution::point_mass(g.clone(), g.identity()).unwrap()
            );
            assert_eq!(
                recover_distribution(&StochasticMatrix::uniform(n), &g).unwrap(),
                GroupDistribution::uniform(g.clone())
            );
        }
    }

    #[test]
    fn recover_rejects_matrices_outside_the_span() {
        // a transposition matrix on 3 points is doubly stochastic but not in
        // the span of Z_3's translations
        let z3 = arc(FiniteGroup::cyclic(3).unwrap());
        let swap = StochasticMatrix::from_permutation(&Permutation::new(vec![1, 0, 2]).unwrap());
        assert!(matches!(
            recover_distribution(&swap, &z3),
            Err(Error::NotConvolutionMatrix(_))
        ));
    }

    #[test]
    fn distinct_distributions_have_distinct_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = arc(FiniteGroup::dihedral(4).unwrap());
        for _ in 0..20 {
            let x = random_distribution(&g, &mut rng, false);
            let y = random_distribution(&g, &mut rng, false);
            assert_eq!(x == y, convolution_matrix(&x) == convolution_matrix(&y));
        }
    }

    #[test]
    fn csv_and_json_forms() {
        let z2 = arc(FiniteGroup::cyclic(2).unwrap());
        let x = GroupDistribution::new(z2, vec![ratio(3, 4), ratio(1, 4)]).unwrap();
        let c = convolution_matrix(&x);
        assert_eq!(
            c.to_string_rows(),
            vec![vec!["3/4", "1/4"], vec!["1/4", "3/4"]]
        );
        assert_eq!(c.to_csv(), "0.75,0.25\n0.25,0.75\n");
        assert_eq!(format_sig17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_sig17(1.0), "1");
        assert_eq!(format_sig17(0.0), "0");
        assert_eq!(format_sig17(-2.5), "-2.5");
        assert_eq!(format_sig17(1e-7), "9.9999999999999995e-8");
    }
}
