//! Structure maps of the tower `Omega^l S^{n+l}`: basis enumeration, homology
//! suspension, height filtration and the dimension gap engine.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dl::{dim_lower, to_upper, Element, LoopBound, Product, Word};
use crate::steenrod::StuntedComplex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LoopspaceError {
    #[error("dimension cap {d} is below the base dimension {n}")]
    CapBelowBase { n: u32, d: u32 },
    #[error("n must be positive")]
    ZeroBase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisQuery {
    pub l: LoopBound,
    pub n: u32,
    pub d: u32,
}

impl BasisQuery {
    pub fn new(l: LoopBound, n: u32, d: u32) -> Result<BasisQuery, LoopspaceError> {
        if n == 0 {
            return Err(LoopspaceError::ZeroBase);
        }
        if d < n {
            return Err(LoopspaceError::CapBelowBase { n, d });
        }
        Ok(BasisQuery { l, n, d })
    }
}

/// Polynomial generators of dimension `<= d`, as upper words, ordered by
/// dimension and then by word.
///
/// For finite `l` these are the nondecreasing lower sequences with entries in
/// `(0, l)`; for `QS^n` the admissible upper words of excess `> n`.
pub fn enumerate_basis(q: &BasisQuery) -> Vec<Word> {
    let mut out = match q.l {
        LoopBound::Finite(l) => {
            let mut out = vec![Word::base()];
            let mut prefix = Vec::new();
            lower_sequences(q.n, q.d, l, &mut prefix, &mut out);
            out
        }
        LoopBound::Infinite => {
            let mut out = vec![Word::base()];
            let mut prefix = Vec::new();
            upper_sequences(q.n, q.d - q.n, &mut prefix, &mut out);
            out.retain(|w| w.is_generator(q.n));
            out
        }
    };
    out.sort_by_key(|w| (w.dim(q.n), w.clone()));
    out
}

// Builds the lower sequence from the innermost index outwards; entries must
// not increase in that direction.
fn lower_sequences(n: u32, d: u32, l: u32, inner_first: &mut Vec<u32>, out: &mut Vec<Word>) {
    let max = inner_first.last().copied().unwrap_or(l.saturating_sub(1));
    for j in 1..=max.min(l.saturating_sub(1)) {
        inner_first.push(j);
        let lower: Vec<u32> = inner_first.iter().rev().copied().collect();
        if dim_lower(&lower, n) > d {
            inner_first.pop();
            // Dimension is increasing in j.
            break;
        }
        out.push(to_upper(&lower, n));
        lower_sequences(n, d, l, inner_first, out);
        inner_first.pop();
    }
}

fn upper_sequences(n: u32, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Word>) {
    if !prefix.is_empty() {
        out.push(Word(prefix.clone()));
    }
    let lo = prefix.last().map_or(1, |&p| p.div_ceil(2)).max(1);
    let used: u32 = prefix.iter().sum();
    // Excess > n bounds the sum of everything after the first index.
    let hi = match prefix.first() {
        None => budget,
        Some(&i1) => (i1 - n - 1).saturating_sub(used - i1).min(budget - used),
    };
    for i in lo..=hi {
        // The first index must exceed n for any admissible word of excess > n.
        if prefix.is_empty() && i <= n {
            continue;
        }
        prefix.push(i);
        upper_sequences(n, budget, prefix, out);
        prefix.pop();
    }
}

/// All nonunit monomials in the generators of dimension `<= d`.
pub fn enumerate_monomials(q: &BasisQuery) -> Vec<Product> {
    let gens = enumerate_basis(q);
    let mut out = Vec::new();
    fn go(gens: &[Word], n: u32, start: usize, budget: u32, cur: &mut Vec<Word>, out: &mut Vec<Product>) {
        for k in start..gens.len() {
            let dim = gens[k].dim(n);
            if dim > budget {
                continue;
            }
            cur.push(gens[k].clone());
            out.push(Product::from_words(cur.clone()));
            go(gens, n, k, budget - dim, cur, out);
            cur.pop();
        }
    }
    go(&gens, q.n, 0, q.d, &mut Vec::new(), &mut out);
    out.sort_by_key(|p| (p.dim(q.n), p.clone()));
    out
}

/// One homology suspension `H_* -> H_{*+1}`: products go to zero, generator
/// words are re-based with the same upper indices and re-normalised.
fn suspend_once(e: &Element) -> Element {
    let n1 = e.n() + 1;
    let mut out = Element::zero(n1);
    for p in e.terms() {
        if let Some(w) = p.as_generator() {
            out.add_assign(&Element::from_upper(n1, w.indices()));
        }
    }
    out
}

pub fn suspend(e: &Element, steps: u32) -> Element {
    let mut cur = e.clone();
    for _ in 0..steps {
        if cur.is_zero() {
            return Element::zero(cur.n() + 1);
        }
        cur = suspend_once(&cur);
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SuspensionDepth {
    Finite(u32),
    /// A summand `x_n` survives every suspension.
    Stable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSuspension {
    pub depth: SuspensionDepth,
    /// `sigma^j e` for finite depth; for `Stable`, the image once every
    /// other summand has died.
    pub image: Element,
}

/// Largest `j` with `sigma^j e != 0`.
pub fn max_suspension(e: &Element) -> MaxSuspension {
    let base = Product::from_words(vec![Word::base()]);
    let stable = e.contains(&base);
    let mut cur = e.clone();
    let mut j = 0;
    loop {
        let next = suspend_once(&cur);
        let settled = stable && cur.len() == 1;
        if settled || next.is_zero() {
            let depth = if stable { SuspensionDepth::Stable } else { SuspensionDepth::Finite(j) };
            return MaxSuspension { depth, image: cur };
        }
        cur = next;
        j += 1;
    }
}

pub fn height(p: &Product) -> u64 {
    p.height()
}

/// Keeps exactly the terms of height `r`.
pub fn james_hopf_project(e: &Element, r: u64) -> Element {
    let mut out = Element::zero(e.n());
    for p in e.terms() {
        if p.height() == r {
            out.toggle(p.clone());
        }
    }
    out
}

/// `D_2(S^n, k) = Sigma^n P_n^{n+k-1}`.
pub fn d2_stunted(n: u32, k: u32) -> StuntedComplex {
    StuntedComplex { s: n, a: n, b: n + k - 1 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub l: u32,
    pub n: u32,
    pub l0: u32,
    pub d: u32,
    pub top: u64,
    pub margin: i64,
    pub d_plus_one_mod4_is_2: bool,
    pub d_plus_one_is_pow2: bool,
    pub eliminated_by_gap: bool,
    /// `dim Q_1 ... Q_{l0} x_n`, the least `d` over sequences of length `l0`.
    pub min_d_exact: u64,
    pub min_d_printed: i64,
    pub min_margin_exact: i64,
    pub min_margin_printed: i64,
    pub discrepancies: Vec<String>,
}

/// `dim Q_{l-2} ... Q_{l-2} x_{n+1}` with `l0` factors.
pub fn gap_top(l: u32, n: u32, l0: u32) -> u64 {
    let p = 1u64 << l0;
    (p - 1) * (l as u64 - 2) + p * (n as u64 + 1)
}

pub fn gap_report(j: &[u32], l: u32, n: u32) -> GapReport {
    gap_report_with_l0(j, l, n, j.len() as u32)
}

/// As [`gap_report`] with the length bound `l0` supplied for a family.
pub fn gap_report_with_l0(j: &[u32], l: u32, n: u32, l0: u32) -> GapReport {
    let d = dim_lower(j, n);
    let top = gap_top(l, n, l0);
    let margin = 2 * d as i64 + 1 - top as i64;
    let d1 = d + 1;
    let d_plus_one_mod4_is_2 = d1 % 4 == 2;
    let d_plus_one_is_pow2 = d1.is_power_of_two();
    let eliminated_by_gap = margin > 2 && d_plus_one_mod4_is_2 && !d_plus_one_is_pow2;

    let p = 1i64 << l0;
    let (l0i, ni, li) = (l0 as i64, n as i64, l as i64);
    let ones: Vec<u32> = (1..=l0).collect();
    let min_d_exact = dim_lower(&ones, n) as u64;
    let min_d_printed = (p / 2) * (l0i - 1) + 1 + p * ni;
    let min_margin_exact = 2 * min_d_exact as i64 + 1 - top as i64;
    let min_margin_printed = p * (l0i + ni - li) + li + 1;
    let mut discrepancies = Vec::new();
    if min_d_printed != min_d_exact as i64 {
        discrepancies.push(format!(
            "least dimension at length {l0}: closed form gives {min_d_printed}, direct count gives {min_d_exact}"
        ));
    }
    if min_margin_printed != min_margin_exact {
        discrepancies.push(format!(
            "least margin at length {l0}: closed form gives {min_margin_printed}, direct count gives {min_margin_exact}"
        ));
    }
    GapReport {
        l,
        n,
        l0,
        d,
        top,
        margin,
        d_plus_one_mod4_is_2,
        d_plus_one_is_pow2,
        eliminated_by_gap,
        min_d_exact,
        min_d_printed,
        min_margin_exact,
        min_margin_printed,
        discrepancies,
    }
}
