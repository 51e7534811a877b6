//! Finite groups stored as multiplication tables, their validation, and the
//! left translations `σ_k` that embed a group into the symmetric group on
//! its own elements.
//!
//! Built-in constructors enumerate elements deterministically with the
//! identity at index 0:
//!
//! * [`FiniteGroup::cyclic`]: element `i` is the residue `i mod n`.
//! * [`FiniteGroup::dihedral`]: `r^0, ..., r^{m-1}` then `s r^0, ..., s r^{m-1}`.
//! * [`FiniteGroup::symmetric`]: permutations in lexicographic order of their
//!   one-line notation, multiplied as `(a·b)(x) = a(b(x))`.
//! * [`FiniteGroup::direct_product`]: pair `(i, j)` sits at `i·|h| + j`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest order any constructor or parser accepts.
pub const MAX_ORDER: usize = 5040;

/// Largest order for which the O(n³) associativity scan runs by default.
pub const DEFAULT_ASSOCIATIVITY_LIMIT: usize = 512;

/// A binary operation on `{0, ..., n-1}` with no axioms assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Magma {
    order: usize,
    table: Vec<u32>,
}

impl Magma {
    /// `rows[i][j]` is the 0-based index of `g_i·g_j`.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidParameter("table must be non-empty".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "order {order} exceeds the cap of {MAX_ORDER}"
            )));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidParameter(format!(
                    "row {} has {} entries, expected {order}",
                    i + 1,
                    row.len()
                )));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::IndexOutOfRange { index: v, order });
                }
                table.push(v as u32);
            }
        }
        Ok(Self { order, table })
    }

    fn from_fn(order: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                table.push(f(i, j) as u32);
            }
        }
        Self { order, table }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn op(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j] as usize
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.table[i * self.order..(i + 1) * self.order]
            .iter()
            .map(|&v| v as usize)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|i| self.row(i).collect()).collect()
    }

    /// The unique two-sided identity, if there is one.
    pub fn find_identity(&self) -> Option<usize> {
        (0..self.order)
            .find(|&e| (0..self.order).all(|j| self.op(e, j) == j && self.op(j, e) == j))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    LatinRows,
    LatinColumns,
    Identity,
    Inverses,
    Associativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::LatinRows => "latin-rows",
            Axiom::LatinColumns => "latin-columns",
            Axiom::Identity => "identity",
            Axiom::Inverses => "inverses",
            Axiom::Associativity => "associativity",
        };
        f.write_str(s)
    }
}

/// First witness of a violated axiom. Witness indices are 1-based:
///
/// * latin-rows: `[row, col]` of the first repeated entry in that row
/// * latin-columns: `[row, col]` of the first repeated entry in that column
/// * identity: empty
/// * inverses: `[element]` with no two-sided inverse
/// * associativity: `[i, j, k]` with `(g_i g_j) g_k != g_i (g_j g_k)`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupValidationReport {
    pub is_group: bool,
    pub violations: Vec<Violation>,
    /// False when the order exceeded the associativity scan limit.
    pub associativity_checked: bool,
}

impl GroupValidationReport {
    pub fn violation(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

impl fmt::Display for GroupValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_group {
            return f.write_str("group axioms hold");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{} {:?}", v.axiom, v.witness))
            .collect();
        write!(f, "violated: {}", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ValidateOptions {
    /// Skip the associativity scan above this order; `None` always scans.
    pub associativity_limit: Option<usize>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            associativity_limit: Some(DEFAULT_ASSOCIATIVITY_LIMIT),
        }
    }
}

/// Checks the group axioms on a table, recording the first witness of each
/// violated axiom.
pub fn validate_group(magma: &Magma, options: ValidateOptions) -> GroupValidationReport {
    let n = magma.order();
    let mut violations = Vec::new();

    let mut seen = vec![usize::MAX; n];
    'rows: for i in 0..n {
        for j in 0..n {
            let v = magma.op(i, j);
            if seen[v] == i {
                violations.push(Violation {
                    axiom: Axiom::LatinRows,
                    witness: vec![i + 1, j + 1],
                });
                break 'rows;
            }
            seen[v] = i;
        }
    }
    seen.fill(usize::MAX);
    'cols: for j in 0..n {
        for i in 0..n {
            let v = magma.op(i, j);
            if seen[v] == j {
                violations.push(Violation {
                    axiom: Axiom::LatinColumns,
                    witness: vec![i + 1, j + 1],
                });
                break 'cols;
            }
            seen[v] = j;
        }
    }

    match magma.find_identity() {
        None => violations.push(Violation {
            axiom: Axiom::Identity,
            witness: vec![],
        }),
        Some(e) => {
            let missing = (0..n).find(|&i| !(0..n).any(|j| magma.op(i, j) == e && magma.op(j, i) == e));
            if let Some(i) = missing {
                violations.push(Violation {
                    axiom: Axiom::Inverses,
                    witness: vec![i + 1],
                });
            }
        }
    }

    let associativity_checked = options.associativity_limit.is_none_or(|cap| n <= cap);
    if associativity_checked {
        if let Some(w) = associativity_witness(magma) {
            violations.push(Violation {
                axiom: Axiom::Associativity,
                witness: vec![w.0 + 1, w.1 + 1, w.2 + 1],
            });
        }
    }

    GroupValidationReport {
        is_group: violations.is_empty(),
        violations,
        associativity_checked,
    }
}

fn associativity_witness(magma: &Magma) -> Option<(usize, usize, usize)> {
    let n = magma.order();
    for i in 0..n {
        for j in 0..n {
            let ij = magma.op(i, j);
            for k in 0..n {
                if magma.op(ij, k) != magma.op(i, magma.op(j, k)) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// A permutation of `{0, ..., n-1}`; `image[j]` is `σ(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut hit = vec![false; n];
        for &v in &image {
            if v >= n || hit[v] {
                return Err(Error::InvalidParameter(format!(
                    "{:?} is not a bijection on [1, {n}]",
                    image.iter().map(|v| v + 1).collect::<Vec<_>>()
                )));
            }
            hit[v] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, j: usize) -> usize {
        self.image[j]
    }

    /// `(self ∘ other)(j) = self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::OrderMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Permutation {
            image: other.image.iter().map(|&j| self.image[j]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.len()];
        for (j, &v) in self.image.iter().enumerate() {
            image[v] = j;
        }
        Permutation { image }
    }
}

/// A validated finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    magma: Magma,
    identity: usize,
    inverses: Vec<usize>,
    names: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates `magma` and wraps it. Fails with the full report when any
    /// axiom is violated.
    pub fn from_magma(magma: Magma, names: Option<Vec<String>>) -> Result<Self> {
        Self::from_magma_with(magma, names, ValidateOptions::default())
    }

    pub fn from_magma_with(
        magma: Magma,
        names: Option<Vec<String>>,
        options: ValidateOptions,
    ) -> Result<Self> {
        let report = validate_group(&magma, options);
        if !report.is_group {
            return Err(Error::Validation(report));
        }
        Self::assemble(magma, names)
    }

    /// Only for tables that are groups by construction.
    fn assemble(magma: Magma, names: Option<Vec<String>>) -> Result<Self> {
        let n = magma.order();
        if let Some(names) = &names {
            check_names(names, n)?;
        }
        let identity = magma
            .find_identity()
            .ok_or_else(|| Error::InvalidParameter("table has no identity".into()))?;
        let mut inverses = vec![0; n];
        for (i, inv) in inverses.iter_mut().enumerate() {
            *inv = magma
                .row(i)
                .position(|v| v == identity)
                .expect("latin rows contain the identity");
        }
        Ok(Self {
            magma,
            identity,
            inverses,
            names,
        })
    }

    /// `Z_n` with `g_i·g_j = g_{(i + j) mod n}`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "cyclic order must be in [1, {MAX_ORDER}], got {n}"
            )));
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::assemble(Magma::from_fn(n, |i, j| (i + j) % n), Some(names))
    }

    /// The dihedral group of order `2m`, symmetries of a regular m-gon.
    pub fn dihedral(m: usize) -> Result<Self> {
        if m == 0 || 2 * m > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "dihedral parameter must be in [1, {}], got {m}",
                MAX_ORDER / 2
            )));
        }
        // index f*m + i stands for s^f r^i; r^i s = s r^{-i}.
        let mul = |a: usize, b: usize| {
            let (fa, ia) = (a / m, a % m);
            let (fb, ib) = (b / m, b % m);
            let rot = if fb == 0 { ia + ib } else { m - ia + ib };
            ((fa + fb) % 2) * m + rot % m
        };
        let power = |p: usize| match p {
            0 => String::new(),
            1 => "r".to_string(),
            p => format!("r^{p}"),
        };
        let names = (0..2 * m)
            .map(|x| {
                let (f, i) = (x / m, x % m);
                match (f, i) {
                    (0, 0) => "e".to_string(),
                    (0, i) => power(i),
                    (_, i) => format!("s{}", power(i)),
                }
            })
            .collect();
        Self::assemble(Magma::from_fn(2 * m, mul), Some(names))
    }

    /// The symmetric group `S_k`, `1 <= k <= 7`.
    pub fn symmetric(k: usize) -> Result<Self> {
        if k == 0 || k > 7 {
            return Err(Error::InvalidParameter(format!(
                "symmetric degree must be in [1, 7], got {k}"
            )));
        }
        let perms = lexicographic_permutations(k);
        let n = perms.len();
        let mut table = Vec::with_capacity(n * n);
        let mut composed = vec![0usize; k];
        for a in &perms {
            for b in &perms {
                for (x, slot) in composed.iter_mut().enumerate() {
                    *slot = a[b[x]];
                }
                table.push(lex_rank(&composed) as u32);
            }
        }
        let names = perms
            .iter()
            .map(|p| p.iter().map(|v| char::from(b'1' + *v as u8)).collect())
            .collect();
        Self::assemble(Magma { order: n, table }, Some(names))
    }

    /// `g × h` with componentwise multiplication.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let (a, b) = (g.order(), h.order());
        if a * b > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "product order {} exceeds the cap of {MAX_ORDER}",
                a * b
            )));
        }
        let magma = Magma::from_fn(a * b, |x, y| {
            g.multiply(x / b, y / b) * b + h.multiply(x % b, y % b)
        });
        let name = |x: usize| {
            format!("({},{})", g.name(x / b), h.name(x % b))
        };
        let names = (0..a * b).map(name).collect();
        Self::assemble(magma, Some(names))
    }

    pub fn order(&self) -> usize {
        self.magma.order()
    }

    pub fn magma(&self) -> &Magma {
        &self.magma
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of element `k`; falls back to its 1-based index.
    pub fn name(&self, k: usize) -> String {
        match &self.names {
            Some(names) => names[k].clone(),
            None => (k + 1).to_string(),
        }
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.order() {
            Err(Error::IndexOutOfRange {
                index: k,
                order: self.order(),
            })
        } else {
            Ok(())
        }
    }

    /// Index of `g_i·g_j`. Panics on out-of-range indices; see
    /// [`FiniteGroup::try_multiply`].
    #[inline]
    pub fn multiply(&self, i: usize, j: usize) -> usize {
        self.magma.op(i, j)
    }

    pub fn try_multiply(&self, i: usize, j: usize) -> Result<usize> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.multiply(i, j))
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn try_inverse(&self, i: usize) -> Result<usize> {
        self.check_index(i)?;
        Ok(self.inverse(i))
    }

    /// `σ_k`, with `σ_k(j) = index of g_k·g_j`.
    pub fn left_translation(&self, k: usize) -> Result<Permutation> {
        self.check_index(k)?;
        Ok(Permutation {
            image: self.magma.row(k).collect(),
        })
    }

    /// Least `d >= 1` with `g_k^d = e`.
    pub fn element_order(&self, k: usize) -> Result<usize> {
        self.check_index(k)?;
        let mut x = k;
        let mut d = 1;
        while x != self.identity {
            x = self.multiply(x, k);
            d += 1;
        }
        Ok(d)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (i + 1..n).all(|j| self.multiply(i, j) == self.multiply(j, i)))
    }

    /// Re-runs the full axiom check on this group's table.
    pub fn validate(&self, options: ValidateOptions) -> GroupValidationReport {
        validate_group(&self.magma, options)
    }

    /// Serializes into the Cayley table text format.
    pub fn to_cayley_table(&self) -> String {
        let n = self.order();
        let mut out = format!("{n}\n");
        for i in 0..n {
            let row: Vec<String> = self.magma.row(i).map(|v| (v + 1).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        if let Some(names) = &self.names {
            out.push_str("# names: ");
            out.push_str(&names.join(" "));
            out.push('\n');
        }
        out
    }
}

fn check_names(names: &[String], n: usize) -> Result<()> {
    if names.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} element names for order {n}",
            names.len()
        )));
    }
    if let Some(bad) = names
        .iter()
        .find(|s| s.is_empty() || s.chars().any(char::is_whitespace))
    {
        return Err(Error::InvalidParameter(format!(
            "element name {bad:?} must be non-empty without whitespace"
        )));
    }
    Ok(())
}

fn lexicographic_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..k).collect();
    let mut all = vec![current.clone()];
    // standard next-permutation step
    loop {
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return all;
        };
        let j = (i + 1..k).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
        all.push(current.clone());
    }
}

/// Position of `p` in the lexicographic enumeration (Lehmer code).
fn lex_rank(p: &[usize]) -> usize {
    let k = p.len();
    let mut rank = 0;
    for i in 0..k {
        let smaller = p[i + 1..].iter().filter(|&&v| v < p[i]).count();
        rank = rank * (k - i) + smaller;
    }
    rank
}

/// Parses the Cayley table text format and validates the result.
///
/// Lines starting with `#` are comments, except `# names: a b c ...` which
/// names the elements. The first other line holds `n`, the next `n` lines
/// the 1-based table rows. The identity need not be element 1.
pub fn parse_cayley_table(text: &str) -> Result<FiniteGroup> {
    parse_cayley_table_with(text, ValidateOptions::default())
}

pub fn parse_cayley_table_with(text: &str, options: ValidateOptions) -> Result<FiniteGroup> {
    let (magma, names) = parse_magma(text)?;
    FiniteGroup::from_magma_with(magma, names, options)
}

/// Parses the table without checking any group axiom.
pub fn parse_magma(text: &str) -> Result<(Magma, Option<Vec<String>>)> {
    let mut order: Option<usize> = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut names: Option<(usize, Vec<String>)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(list) = comment.trim_start().strip_prefix("names:") {
                if names.is_some() {
                    return Err(parse_err(line_no, "duplicate names line"));
                }
                names = Some((line_no, list.split_whitespace().map(str::to_string).collect()));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        match order {
            None => {
                let n: usize = line
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("expected the order, found {line:?}")))?;
                if n == 0 || n > MAX_ORDER {
                    return Err(parse_err(line_no, format!("order must be in [1, {MAX_ORDER}]")));
                }
                order = Some(n);
            }
            Some(n) => {
                if rows.len() == n {
                    return Err(parse_err(line_no, "more rows than the declared order"));
                }
                let row = line
                    .split_whitespace()
                    .map(|tok| match tok.parse::<usize>() {
                        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                        _ => Err(parse_err(line_no, format!("entry {tok:?} is not in [1, {n}]"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != n {
                    return Err(parse_err(
                        line_no,
                        format!("row has {} entries, expected {n}", row.len()),
                    ));
                }
                rows.push(row);
            }
        }
    }

    let n = order.ok_or_else(|| parse_err(last_line.max(1), "missing order line"))?;
    if rows.len() != n {
        return Err(parse_err(
            last_line.max(1),
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    let names = match names {
        Some((line_no, list)) => {
            check_names(&list, n).map_err(|e| parse_err(line_no, e.to_string()))?;
            Some(list)
        }
        None => None,
    };
    Ok((Magma::from_rows(&rows)?, names))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// An order-5 loop: a Latin square with two-sided identity (element 1)
/// that is not associative, so not a group. Used as a negative control.
pub const NONASSOCIATIVE_LOOP_5: &str = "\
# order-5 loop: latin square with identity 1, not associative
5
1 2 3 4 5
2 1 4 5 3
3 5 1 2 4
4 3 5 1 2
5 4 2 3 1
";
