//! The mod-2 Steenrod algebra on the cohomology side, its action on stunted
//! projective spaces, and the two-cell cone detection test.
//!
//! Composites `Sq^{a_1} ... Sq^{a_s}` act right to left. Normal form is the
//! admissible (Serre-Cartan) basis `a_k >= 2 a_{k+1}`, reached with the Adem
//! relation
//!
//! ```text
//! Sq^a Sq^b = sum_c C(b - c - 1, a - 2c) Sq^{a+b-c} Sq^c,   a < 2b.
//! ```

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binom::binom_mod2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SteenrodError {
    #[error("class dimension {m} is outside the cells [{lo}, {hi}] of the complex")]
    OutOfRange { m: u32, lo: u32, hi: u32 },
    #[error("inconsistent cone problem: {0}")]
    Inconsistent(String),
}

/// A composite `Sq^{a_1} ... Sq^{a_s}`; entries are positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SqWord(pub Vec<u32>);

impl SqWord {
    pub fn new(entries: Vec<u32>) -> SqWord {
        SqWord(entries.into_iter().filter(|&a| a != 0).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= 2 * w[1])
    }
}

impl fmt::Display for SqWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for a in &self.0 {
            write!(f, "Sq^{a}")?;
        }
        Ok(())
    }
}

/// An F2-sum of composites.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SqSum(pub BTreeSet<SqWord>);

impl SqSum {
    pub fn zero() -> SqSum {
        SqSum::default()
    }

    pub fn from_word(w: SqWord) -> SqSum {
        let mut s = SqSum::zero();
        s.toggle(w);
        s
    }

    pub fn toggle(&mut self, w: SqWord) {
        if !self.0.remove(&w) {
            self.0.insert(w);
        }
    }

    pub fn add_assign(&mut self, other: &SqSum) {
        for w in &other.0 {
            self.toggle(w.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SqWord> {
        self.0.iter()
    }
}

impl fmt::Display for SqSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

thread_local! {
    static ADEM_CACHE: RefCell<HashMap<SqWord, SqSum>> = RefCell::new(HashMap::new());
}

/// Admissible normal form of a single composite.
pub fn normalize_word(w: &SqWord) -> SqSum {
    let w = SqWord::new(w.0.clone());
    if let Some(hit) = ADEM_CACHE.with(|c| c.borrow().get(&w).cloned()) {
        return hit;
    }
    let result = match w.0.windows(2).position(|p| p[0] < 2 * p[1]) {
        None => SqSum::from_word(w.clone()),
        Some(k) => {
            let (a, b) = (w.0[k], w.0[k + 1]);
            let mut out = SqSum::zero();
            for c in 0..=a / 2 {
                if !binom_mod2(b as i64 - c as i64 - 1, a as i64 - 2 * c as i64) {
                    continue;
                }
                let mut v = w.0[..k].to_vec();
                v.push(a + b - c);
                v.push(c);
                v.extend_from_slice(&w.0[k + 2..]);
                out.add_assign(&normalize_word(&SqWord::new(v)));
            }
            out
        }
    };
    ADEM_CACHE.with(|c| c.borrow_mut().insert(w, result.clone()));
    result
}

/// Admissible normal form of a sum of composites.
pub fn adem_normalize_sq(sum: &SqSum) -> SqSum {
    let mut out = SqSum::zero();
    for w in sum.iter() {
        out.add_assign(&normalize_word(w));
    }
    out
}

/// Composition in the algebra: `left . right`, normalised.
pub fn compose(left: &SqSum, right: &SqSum) -> SqSum {
    let mut out = SqSum::zero();
    for a in left.iter() {
        for b in right.iter() {
            let mut v = a.0.clone();
            v.extend_from_slice(&b.0);
            out.add_assign(&normalize_word(&SqWord(v)));
        }
    }
    out
}

/// All admissible composites of a given degree.
pub fn admissible_basis(degree: u32) -> Vec<SqWord> {
    fn go(remaining: u32, max_first: u32, prefix: &mut Vec<u32>, out: &mut Vec<SqWord>) {
        // `prefix` is built from the right: the last entry pushed is leftmost.
        if remaining == 0 {
            let mut w = prefix.clone();
            w.reverse();
            out.push(SqWord(w));
            return;
        }
        let lower = prefix.last().map_or(1, |&p| 2 * p);
        for a in lower..=remaining.min(max_first) {
            prefix.push(a);
            go(remaining - a, max_first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if degree == 0 {
        return vec![SqWord(Vec::new())];
    }
    go(degree, degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Result of enumerating power-of-two composites of a degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pow2Decompositions {
    pub degree: u32,
    pub words: Vec<SqWord>,
    /// Set when `degree` is itself a power of two: `Sq^degree` is
    /// indecomposable, so the list cannot account for it.
    pub non_exhaustive_for_detection: bool,
}

/// All composites of length `>= 2` with power-of-two entries summing to `m`
/// whose admissible normal form is nonzero. The count grows exponentially
/// with `m`; intended for small degrees.
pub fn decompositions_pow2(m: u32) -> Pow2Decompositions {
    fn go(remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<SqWord>) {
        if remaining == 0 {
            if prefix.len() >= 2 {
                let w = SqWord(prefix.clone());
                if !normalize_word(&w).is_zero() {
                    out.push(w);
                }
            }
            return;
        }
        let mut p = 1;
        while p <= remaining {
            // Sq^1 Sq^1 = 0, so such words never survive normalisation.
            if !(p == 1 && prefix.last() == Some(&1)) {
                prefix.push(p);
                go(remaining - p, prefix, out);
                prefix.pop();
            }
            p <<= 1;
        }
    }
    let mut words = Vec::new();
    go(m, &mut Vec::new(), &mut words);
    words.sort();
    Pow2Decompositions { degree: m, words, non_exhaustive_for_detection: m.is_power_of_two() }
}

/// `Sigma^s P_a^b`: one cohomology class `a^e` in each dimension `s + e`,
/// `a <= e <= b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StuntedComplex {
    pub s: u32,
    pub a: u32,
    pub b: u32,
}

impl StuntedComplex {
    pub fn new(s: u32, a: u32, b: u32) -> Result<StuntedComplex, SteenrodError> {
        if a == 0 || a > b {
            return Err(SteenrodError::Inconsistent(format!("P_{a}^{b} needs 0 < a <= b")));
        }
        Ok(StuntedComplex { s, a, b })
    }

    pub fn bottom(&self) -> u32 {
        self.s + self.a
    }

    pub fn top(&self) -> u32 {
        self.s + self.b
    }

    pub fn has_class(&self, m: u32) -> bool {
        (self.bottom()..=self.top()).contains(&m)
    }

    pub fn cell_count(&self) -> u32 {
        self.b - self.a + 1
    }
}

impl fmt::Display for StuntedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sigma^{} P_{}^{}", self.s, self.a, self.b)
    }
}

/// `Sq^k` on the class of dimension `m` of `x`: `C(m - s, k) a^{m+k}`,
/// truncated at the top cell. Returns the target dimension when nonzero.
pub fn sq_stunted(k: u32, m: u32, x: &StuntedComplex) -> Result<Option<u32>, SteenrodError> {
    if !x.has_class(m) {
        return Err(SteenrodError::OutOfRange { m, lo: x.bottom(), hi: x.top() });
    }
    if k == 0 {
        return Ok(Some(m));
    }
    if m + k > x.top() {
        return Ok(None);
    }
    Ok(binom_mod2((m - x.s) as i64, k as i64).then_some(m + k))
}

/// Evaluates a composite on a class, right to left, inside `x`. Classes
/// landing outside `[bottom, limit)` are zero.
pub fn eval_word(w: &SqWord, m: u32, x: &StuntedComplex, limit: u32) -> Option<u32> {
    let mut cur = m;
    for &a in w.0.iter().rev() {
        if !x.has_class(cur) || cur >= limit {
            return None;
        }
        cur = sq_stunted(a, cur, x).ok()??;
        if cur >= limit {
            return None;
        }
    }
    Some(cur)
}

/// What the mapping cone is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeBase {
    Sphere { dim: u32 },
    Stunted(StuntedComplex),
}

/// `base cup_g e^{cone_dim}` with a class of dimension `detect_dim` that
/// would have to carry `Sq^{detect_dim}` onto the new cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeProblem {
    pub base: ConeBase,
    pub detect_dim: u32,
    pub cone_dim: u32,
}

impl ConeProblem {
    pub fn new(base: ConeBase, detect_dim: u32) -> ConeProblem {
        ConeProblem { base, detect_dim, cone_dim: 2 * detect_dim }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeStatus {
    Impossible,
    Possible,
    NeedsExternal,
}

/// One Adem relation `Sq^a Sq^b` evaluated on the class of dimension `on`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdemInstance {
    pub a: u32,
    pub b: u32,
    pub on: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeMethod {
    /// Hopf invariant one dimensions, taken from the facts table.
    HopfInvariantOne { hopf_dims: Vec<u32> },
    /// `Sq^{4k+2} = Sq^2 Sq^{4k} + Sq^1 Sq^{4k} Sq^1` with both right factors
    /// vanishing on the class.
    TwoFourRoute { k: u32 },
    /// The coefficient of the new cell in `Sq^m` is forced to vanish by the
    /// listed Adem relations (`certificate`) in every module extension.
    ExtensionRelations { certificate: Vec<AdemInstance> },
    /// A consistent extension exists with `Sq^m` hitting the new cell;
    /// `extension` lists the class dimensions `z` whose `Sq^{c - z}` hits it.
    ExtensionExists { extension: Vec<u32> },
    /// `Sq^m` with `m` a power of two is indecomposable.
    Indecomposable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeVerdict {
    pub status: ConeStatus,
    pub method: ConeMethod,
    /// Power-of-two routes that normalise to zero and were discarded, for
    /// small degrees only.
    pub zero_routes: Vec<SqWord>,
}

/// Largest detection degree for which the power-of-two route listing is
/// attached to verdicts.
pub const ROUTE_LISTING_LIMIT: u32 = 24;

/// Largest base complex accepted by the extension test.
pub const MAX_EXTENSION_CELLS: u32 = 24;

/// Decides whether `Sq^{detect_dim}` can map the detect class onto the cone
/// cell, using only the cohomology of the base.
///
/// The unknown part of the cone's module structure is the coefficient of the
/// new cell in `Sq^{c-z} z` for each base class `z` below the cell. Every
/// Adem relation `Sq^a Sq^b` with `a, b > 0` on a base class gives a linear
/// condition on those coefficients; the verdict is `Impossible` exactly when
/// the conditions force the coefficient for the detect class to vanish.
pub fn cone_detection_possible(p: &ConeProblem, hopf_dims: &[u32]) -> Result<ConeVerdict, SteenrodError> {
    let m = p.detect_dim;
    if m == 0 || p.cone_dim != 2 * m {
        return Err(SteenrodError::Inconsistent(format!(
            "cone cell {} must be twice the detect dimension {}",
            p.cone_dim, m
        )));
    }
    let zero_routes = if m <= ROUTE_LISTING_LIMIT { zero_pow2_routes(m) } else { Vec::new() };
    let complex = match p.base {
        ConeBase::Sphere { dim } => {
            if dim != m {
                return Err(SteenrodError::Inconsistent(format!(
                    "sphere of dimension {dim} has no class in dimension {m}"
                )));
            }
            None
        }
        ConeBase::Stunted(x) => {
            if !x.has_class(m) {
                return Err(SteenrodError::Inconsistent(format!("{x} has no class in dimension {m}")));
            }
            (x.cell_count() > 1).then_some(x)
        }
    };
    let Some(x) = complex else {
        let status = if hopf_dims.contains(&m) { ConeStatus::Possible } else { ConeStatus::Impossible };
        return Ok(ConeVerdict {
            status,
            method: ConeMethod::HopfInvariantOne { hopf_dims: hopf_dims.to_vec() },
            zero_routes,
        });
    };
    if x.cell_count() > MAX_EXTENSION_CELLS {
        return Err(SteenrodError::Inconsistent(format!("{x} has more than {MAX_EXTENSION_CELLS} cells")));
    }
    if m.is_power_of_two() {
        return Ok(ConeVerdict { status: ConeStatus::NeedsExternal, method: ConeMethod::Indecomposable, zero_routes });
    }
    if m % 4 == 2 {
        let k = (m - 2) / 4;
        let limit = p.cone_dim;
        let first = eval_word(&SqWord::new(vec![4 * k]), m, &x, limit);
        let second = eval_word(&SqWord::new(vec![4 * k, 1]), m, &x, limit);
        if first.is_none() && second.is_none() {
            return Ok(ConeVerdict { status: ConeStatus::Impossible, method: ConeMethod::TwoFourRoute { k }, zero_routes });
        }
    }
    let (status, method) = extension_test(&x, m, p.cone_dim);
    Ok(ConeVerdict { status, method, zero_routes })
}

fn zero_pow2_routes(m: u32) -> Vec<SqWord> {
    let mut out = Vec::new();
    let mut p = 1;
    while p < m {
        let q = m - p;
        if q.is_power_of_two() {
            let w = SqWord(vec![p, q]);
            if normalize_word(&w).is_zero() {
                out.push(w);
            }
        }
        p <<= 1;
    }
    out
}

/// Linear conditions on the unknown cone coefficients, one per Adem instance.
pub fn extension_conditions(x: &StuntedComplex, cone_dim: u32) -> Vec<(AdemInstance, u64)> {
    let top = x.top().min(cone_dim - 1);
    let bit = |dim: u32| 1u64 << (dim - x.bottom());
    let act = |k: u32, dim: u32| -> Option<u32> {
        if dim > top {
            return None;
        }
        sq_stunted(k, dim, x).ok().flatten().filter(|&t| t <= top)
    };
    let mut rows = Vec::new();
    for y in x.bottom()..=top {
        let total = cone_dim - y;
        for b in 1..total {
            let a = total - b;
            if a >= 2 * b {
                continue;
            }
            let mut row = 0u64;
            if let Some(t) = act(b, y) {
                row ^= bit(t);
            }
            for c in 0..=a / 2 {
                if binom_mod2(b as i64 - c as i64 - 1, a as i64 - 2 * c as i64) {
                    if let Some(t) = act(c, y) {
                        row ^= bit(t);
                    }
                }
            }
            if row != 0 {
                rows.push((AdemInstance { a, b, on: y }, row));
            }
        }
    }
    rows
}

fn extension_test(x: &StuntedComplex, m: u32, cone_dim: u32) -> (ConeStatus, ConeMethod) {
    let rows = extension_conditions(x, cone_dim);
    let target = 1u64 << (m - x.bottom());
    // Echelon basis: (row, combination of source rows as indices).
    let mut basis: Vec<(u64, Vec<usize>)> = Vec::new();
    for (idx, &(_, row)) in rows.iter().enumerate() {
        let (r, comb) = reduce(row, vec![idx], &basis);
        if r != 0 {
            basis.push((r, comb));
        }
    }
    let (rest, comb) = reduce(target, Vec::new(), &basis);
    if rest == 0 {
        let mut comb = comb;
        comb.sort_unstable();
        let certificate = comb.into_iter().map(|i| rows[i].0).collect();
        return (ConeStatus::Impossible, ConeMethod::ExtensionRelations { certificate });
    }
    let nu = solve_with_target(&rows.iter().map(|r| r.1).collect::<Vec<_>>(), target, x.cell_count());
    let extension = (0..64)
        .filter(|i| nu >> i & 1 == 1)
        .map(|i| x.bottom() + i)
        .collect();
    (ConeStatus::Possible, ConeMethod::ExtensionExists { extension })
}

fn reduce(mut row: u64, mut comb: Vec<usize>, basis: &[(u64, Vec<usize>)]) -> (u64, Vec<usize>) {
    loop {
        let Some((b, c)) = basis
            .iter()
            .find(|(b, _)| row != 0 && 63 - b.leading_zeros() == 63 - row.leading_zeros())
        else {
            return (row, comb);
        };
        row ^= b;
        for &i in c {
            if let Some(pos) = comb.iter().position(|&j| j == i) {
                comb.swap_remove(pos);
            } else {
                comb.push(i);
            }
        }
    }
}

/// Finds `nu` with `row . nu = 0` for every row and `target . nu = 1`.
fn solve_with_target(rows: &[u64], target: u64, width: u32) -> u64 {
    for nu in 0u64..(1u64 << width.min(24)) {
        if (nu & target).count_ones() % 2 == 1 && rows.iter().all(|r| (r & nu).count_ones() % 2 == 0) {
            return nu;
        }
    }
    unreachable!("target outside the row space always has a separating solution")
}

/// Replays an extension certificate: the listed conditions must sum to the
/// condition singling out the detect class.
pub fn check_certificate(x: &StuntedComplex, m: u32, cone_dim: u32, certificate: &[AdemInstance]) -> bool {
    let rows: HashMap<(u32, u32, u32), u64> = extension_conditions(x, cone_dim)
        .into_iter()
        .map(|(i, r)| ((i.a, i.b, i.on), r))
        .collect();
    let mut acc = 0u64;
    for inst in certificate {
        match rows.get(&(inst.a, inst.b, inst.on)) {
            Some(r) => acc ^= r,
            None => return false,
        }
    }
    acc == 1u64 << (m - x.bottom())
}
