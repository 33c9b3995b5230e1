//! Dyer-Lashof monomials and polynomials over F2.
//!
//! `H_*QS^n` is the polynomial algebra on `Q^I x_n` with `I` admissible
//! (`i_k <= 2 i_{k+1}`) and `ex(I) > n`. The finite loop spaces
//! `Omega^l S^{n+l}` sit inside it as the subalgebra on words whose lower
//! indices are all `< l`, so every computation here is done in `H_*QS^n` at a
//! concrete `n`.
//!
//! Normal form of an [`Element`]: a set of [`Product`]s, each a sorted list of
//! generator [`Word`]s. Squares are repeated factors, never words of excess
//! `n`.
//!
//! Relations used by the normaliser:
//!
//! * `Q^a z = 0` for `a < dim z`, `Q^{dim z} z = z^2`;
//! * Adem: for `r > 2s`,
//!   `Q^r Q^s = sum_i C(i - s - 1, 2i - r) Q^{r+s-i} Q^i`;
//! * Cartan: `Q^m(xy) = sum_{i+j=m} Q^i x Q^j y`.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::binom::binom_mod2;

/// Loop bound `l` of `Omega^l S^{n+l}`; `Infinite` stands for `QS^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LoopBound {
    Finite(u32),
    Infinite,
}

impl LoopBound {
    /// Whether a lower index `j` is available in this loop space.
    pub fn admits(self, j: u32) -> bool {
        match self {
            LoopBound::Finite(l) => j < l,
            LoopBound::Infinite => true,
        }
    }
}

impl fmt::Display for LoopBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopBound::Finite(l) => write!(f, "{l}"),
            LoopBound::Infinite => write!(f, "inf"),
        }
    }
}

/// Excess of an upper sequence; the empty sequence has infinite excess.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Excess {
    Finite(i64),
    Infinite,
}

/// `dim Q_J x_n = 2^s n + sum_k 2^{k-1} j_k` (outermost index first).
pub fn dim_lower(lower: &[u32], n: u32) -> u32 {
    lower.iter().rev().fold(n, |dim, &j| 2 * dim + j)
}

/// Converts a lower-indexed word `Q_{j_1} ... Q_{j_s} x_n` to upper indices,
/// using `Q_j z = Q^{j + dim z} z` from the inside out.
pub fn to_upper(lower: &[u32], n: u32) -> Word {
    let mut dim = n;
    let mut upper = vec![0; lower.len()];
    for (k, &j) in lower.iter().enumerate().rev() {
        upper[k] = j + dim;
        dim = 2 * dim + j;
    }
    Word(upper)
}

/// Inverse of [`to_upper`]. Entries where the upper index is below the
/// dimension of the inner word come back as `None`.
pub fn to_lower(word: &Word, n: u32) -> Option<Vec<u32>> {
    let mut dim = n;
    let mut lower = vec![0; word.0.len()];
    for (k, &i) in word.0.iter().enumerate().rev() {
        lower[k] = i.checked_sub(dim)?;
        dim += i;
    }
    Some(lower)
}

/// An upper-indexed word `Q^{i_1} ... Q^{i_s}` (outermost first), applied to
/// the base class `x_n` of the enclosing element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn base() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    /// `dim Q^I x_n = n + sum I`.
    pub fn dim(&self, n: u32) -> u32 {
        n + self.0.iter().sum::<u32>()
    }

    /// `ex(I) = i_1 - (i_2 + ... + i_s)`.
    pub fn excess(&self) -> Excess {
        match self.0.split_first() {
            None => Excess::Infinite,
            Some((first, rest)) => {
                Excess::Finite(*first as i64 - rest.iter().map(|&i| i as i64).sum::<i64>())
            }
        }
    }

    /// `ex(I) - n`; for a word coming from a lower sequence this is `j_1`.
    pub fn relative_excess(&self, n: u32) -> Excess {
        match self.excess() {
            Excess::Finite(e) => Excess::Finite(e - n as i64),
            Excess::Infinite => Excess::Infinite,
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= 2 * w[1])
    }

    /// Admissible with excess `> n`: a polynomial generator of `H_*QS^n`.
    pub fn is_generator(&self, n: u32) -> bool {
        self.is_admissible() && self.excess() > Excess::Finite(n as i64)
    }

    /// The word obtained by dropping the outermost operation.
    pub fn tail(&self) -> Word {
        Word(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    /// Whether every lower index of the word is available in `Omega^l`.
    pub fn lives_in(&self, n: u32, l: LoopBound) -> bool {
        match to_lower(self, n) {
            Some(lower) => lower.iter().all(|&j| j > 0 && l.admits(j)),
            None => false,
        }
    }

    /// Height filtration: `ht(Q^I x_n) = 2^{l(I)}`.
    pub fn height(&self) -> u64 {
        1u64 << self.0.len()
    }

    pub fn display(&self, n: u32) -> String {
        let mut s = String::new();
        for i in &self.0 {
            s.push_str(&format!("Q^{i}"));
        }
        s.push_str(&format!("x_{n}"));
        s
    }
}

/// A monomial: sorted multiset of generator words. The empty product is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Product(Vec<Word>);

impl Product {
    pub fn unit() -> Product {
        Product(Vec::new())
    }

    pub fn from_words(mut words: Vec<Word>) -> Product {
        words.sort();
        Product(words)
    }

    pub fn factors(&self) -> &[Word] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// A single generator word (not a square, not a product).
    pub fn as_generator(&self) -> Option<&Word> {
        match self.0.as_slice() {
            [w] => Some(w),
            _ => None,
        }
    }

    pub fn is_decomposable(&self) -> bool {
        self.0.len() >= 2
    }

    pub fn dim(&self, n: u32) -> u32 {
        self.0.iter().map(|w| w.dim(n)).sum()
    }

    /// `ht(xy) = ht(x) + ht(y)`.
    pub fn height(&self) -> u64 {
        self.0.iter().map(Word::height).sum()
    }

    pub fn mul(&self, other: &Product) -> Product {
        let mut words = Vec::with_capacity(self.0.len() + other.0.len());
        words.extend_from_slice(&self.0);
        words.extend_from_slice(&other.0);
        Product::from_words(words)
    }

    pub fn display(&self, n: u32) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let mut k = i;
            while k < self.0.len() && self.0[k] == self.0[i] {
                k += 1;
            }
            let w = self.0[i].display(n);
            match k - i {
                1 => parts.push(w),
                m => parts.push(format!("({w})^{m}")),
            }
            i = k;
        }
        parts.join(" ")
    }
}

/// An F2-linear combination of monomials over the base class `x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Element {
    n: u32,
    terms: BTreeSet<Product>,
}

impl Element {
    pub fn zero(n: u32) -> Element {
        Element { n, terms: BTreeSet::new() }
    }

    pub fn unit(n: u32) -> Element {
        Element::from_product(n, Product::unit())
    }

    /// The fundamental class `x_n`.
    pub fn base(n: u32) -> Element {
        Element::from_product(n, Product(vec![Word::base()]))
    }

    pub fn from_product(n: u32, p: Product) -> Element {
        let mut terms = BTreeSet::new();
        terms.insert(p);
        Element { n, terms }
    }

    /// Builds `Q^I x_n` from an arbitrary (possibly inadmissible) upper
    /// sequence and normalises it.
    pub fn from_upper(n: u32, upper: &[u32]) -> Element {
        upper
            .iter()
            .rev()
            .fold(Element::base(n), |acc, &i| acc.apply_q(i))
    }

    /// `Q_J x_n` for a lower sequence `J`.
    pub fn from_lower(n: u32, lower: &[u32]) -> Element {
        Element::from_upper(n, &to_upper(lower, n).0)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = &Product> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, p: &Product) -> bool {
        self.terms.contains(p)
    }

    /// Adds a single monomial mod 2.
    pub fn toggle(&mut self, p: Product) {
        if !self.terms.remove(&p) {
            self.terms.insert(p);
        }
    }

    pub fn add_assign(&mut self, other: &Element) {
        debug_assert_eq!(self.n, other.n);
        for p in &other.terms {
            self.toggle(p.clone());
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn mul(&self, other: &Element) -> Element {
        debug_assert_eq!(self.n, other.n);
        let mut out = Element::zero(self.n);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn square(&self) -> Element {
        // Frobenius: (sum p)^2 = sum p^2 over F2.
        let mut out = Element::zero(self.n);
        for p in &self.terms {
            out.toggle(p.mul(p));
        }
        out
    }

    /// The set of term dimensions; homogeneous elements have exactly one.
    pub fn dims(&self) -> BTreeSet<u32> {
        self.terms.iter().map(|p| p.dim(self.n)).collect()
    }

    /// Dimension of a nonzero homogeneous element.
    pub fn dim(&self) -> Option<u32> {
        let dims = self.dims();
        if dims.len() == 1 {
            dims.into_iter().next()
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.dims().len() <= 1
    }

    /// Every term is a product of at least two generators.
    pub fn is_decomposable(&self) -> bool {
        self.terms.iter().all(Product::is_decomposable)
    }

    /// Applies `Q^a` and returns the result in normal form.
    pub fn apply_q(&self, a: u32) -> Element {
        let mut out = Element::zero(self.n);
        for p in &self.terms {
            out.add_assign(&q_on_product(self.n, a, p.factors()));
        }
        out
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|p| p.display(self.n))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// Multiplies two normal-form elements.
pub fn multiply(a: &Element, b: &Element) -> Element {
    a.mul(b)
}

/// A raw, possibly inadmissible, combination: a list of terms, each a product
/// of raw upper sequences applied to `x_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawElement {
    pub n: u32,
    pub terms: Vec<Vec<Vec<u32>>>,
}

/// Rewrites a raw combination into the unique normal form.
pub fn adem_normalize(raw: &RawElement) -> Element {
    let mut out = Element::zero(raw.n);
    for term in &raw.terms {
        let prod = term
            .iter()
            .fold(Element::unit(raw.n), |acc, seq| acc.mul(&Element::from_upper(raw.n, seq)));
        out.add_assign(&prod);
    }
    out
}

/// Re-normalises an element: every monomial is re-expanded from its words.
/// Identity on normal forms; useful as a checker.
pub fn renormalize(e: &Element) -> Element {
    adem_normalize(&RawElement {
        n: e.n,
        terms: e
            .terms
            .iter()
            .map(|p| p.factors().iter().map(|w| w.0.clone()).collect())
            .collect(),
    })
}

type QKey = (u32, u32, Word);

thread_local! {
    static Q_CACHE: RefCell<HashMap<QKey, Rc<Element>>> = RefCell::new(HashMap::new());
}

/// Drops the per-thread memo tables of the normaliser.
pub fn clear_cache() {
    Q_CACHE.with(|c| c.borrow_mut().clear());
}

fn q_on_product(n: u32, a: u32, factors: &[Word]) -> Element {
    match factors {
        [] => {
            if a == 0 {
                Element::unit(n)
            } else {
                Element::zero(n)
            }
        }
        [w] => (*q_on_word(n, a, w)).clone(),
        [first, rest @ ..] => {
            let d_first = first.dim(n);
            let d_rest: u32 = rest.iter().map(|w| w.dim(n)).sum();
            let mut out = Element::zero(n);
            if a < d_first + d_rest {
                return out;
            }
            for i in d_first..=a - d_rest {
                let left = q_on_word(n, i, first);
                if left.is_zero() {
                    continue;
                }
                let right = q_on_product(n, a - i, rest);
                if right.is_zero() {
                    continue;
                }
                out.add_assign(&left.mul(&right));
            }
            out
        }
    }
}

/// `Q^a` applied to a single generator word, memoised per thread.
fn q_on_word(n: u32, a: u32, w: &Word) -> Rc<Element> {
    let key = (n, a, w.clone());
    if let Some(hit) = Q_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let result = Rc::new(q_on_word_uncached(n, a, w));
    Q_CACHE.with(|c| c.borrow_mut().insert(key, result.clone()));
    result
}

fn q_on_word_uncached(n: u32, a: u32, w: &Word) -> Element {
    let d = w.dim(n);
    if a < d {
        return Element::zero(n);
    }
    if a == d {
        return Element::from_product(n, Product::from_words(vec![w.clone(), w.clone()]));
    }
    match w.0.first() {
        Some(&s) if a > 2 * s => {
            // Adem: Q^a Q^s = sum_i C(i - s - 1, 2i - a) Q^{a+s-i} Q^i.
            let tail = w.tail();
            let mut out = Element::zero(n);
            let lo = a.div_ceil(2);
            let hi = (a - s).saturating_sub(1);
            for i in lo..=hi {
                if !binom_mod2(i as i64 - s as i64 - 1, 2 * i as i64 - a as i64) {
                    continue;
                }
                let inner = q_on_word(n, i, &tail);
                if inner.is_zero() {
                    continue;
                }
                out.add_assign(&inner.apply_q(a + s - i));
            }
            out
        }
        _ => {
            let mut v = Vec::with_capacity(w.0.len() + 1);
            v.push(a);
            v.extend_from_slice(&w.0);
            Element::from_product(n, Product(vec![Word(v)]))
        }
    }
}
