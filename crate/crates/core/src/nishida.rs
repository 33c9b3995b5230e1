//! The dual Steenrod action `Sq^r_*` on `H_*QS^n`.
//!
//! On words, by iterating the Nishida relations
//!
//! ```text
//! Sq^r_* Q^a = sum_t C(a - r, r - 2t) Q^{a-r+t} Sq^t_*
//! ```
//!
//! with `Sq^r_* x_n = 0` for `r > 0`; on products by the Cartan formula
//! `Sq^r_*(xy) = sum_{i+j=r} Sq^i_* x Sq^j_* y`. The range of `t` is whatever
//! the binomial convention leaves nonzero.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binom::binom_mod2;
use crate::dl::{Element, Product, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NishidaError {
    #[error("element is not homogeneous (dimensions {0:?})")]
    NotHomogeneous(Vec<u32>),
    #[error("element is zero")]
    Zero,
}

/// A request `Sq^r_*(target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSqQuery {
    pub r: u32,
    pub target: Element,
}

impl DualSqQuery {
    pub fn eval(&self) -> Element {
        sq_dual(self.r, &self.target)
    }
}

/// Outcome of the A-annihilation test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Annihilation {
    Annihilated,
    /// `Sq^r_*` with `r` the least power of two acting nontrivially.
    Witness { r: u32, image: Element },
}

impl Annihilation {
    pub fn is_annihilated(&self) -> bool {
        matches!(self, Annihilation::Annihilated)
    }
}

type SqKey = (u32, u32, Word);

thread_local! {
    static SQ_CACHE: RefCell<HashMap<SqKey, Rc<Element>>> = RefCell::new(HashMap::new());
}

pub fn clear_cache() {
    SQ_CACHE.with(|c| c.borrow_mut().clear());
}

/// `Sq^r_* e`, in normal form.
pub fn sq_dual(r: u32, e: &Element) -> Element {
    let n = e.n();
    let mut out = Element::zero(n);
    for p in e.terms() {
        out.add_assign(&sq_on_product(n, r, p.factors()));
    }
    out
}

/// Tests whether every `Sq^{2^k}_*` with `2^k <= dim e` kills `e`.
pub fn is_a_annihilated(e: &Element) -> Result<Annihilation, NishidaError> {
    if e.is_zero() {
        return Err(NishidaError::Zero);
    }
    let d = e
        .dim()
        .ok_or_else(|| NishidaError::NotHomogeneous(e.dims().into_iter().collect()))?;
    let mut r = 1u32;
    while r <= d {
        let image = sq_dual(r, e);
        if !image.is_zero() {
            return Ok(Annihilation::Witness { r, image });
        }
        r <<= 1;
    }
    Ok(Annihilation::Annihilated)
}

fn sq_on_product(n: u32, r: u32, factors: &[Word]) -> Element {
    if r == 0 {
        return Element::from_product(n, Product::from_words(factors.to_vec()));
    }
    match factors {
        [] => Element::zero(n),
        [w] => (*sq_on_word(n, r, w)).clone(),
        [first, rest @ ..] => {
            let d_first = first.dim(n);
            let mut out = Element::zero(n);
            for i in 0..=r.min(d_first) {
                let left = if i == 0 {
                    Rc::new(Element::from_product(n, Product::from_words(vec![first.clone()])))
                } else {
                    sq_on_word(n, i, first)
                };
                if left.is_zero() {
                    continue;
                }
                let right = sq_on_product(n, r - i, rest);
                if right.is_zero() {
                    continue;
                }
                out.add_assign(&left.mul(&right));
            }
            out
        }
    }
}

fn sq_on_word(n: u32, r: u32, w: &Word) -> Rc<Element> {
    let key = (n, r, w.clone());
    if let Some(hit) = SQ_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let result = Rc::new(sq_on_word_uncached(n, r, w));
    SQ_CACHE.with(|c| c.borrow_mut().insert(key, result.clone()));
    result
}

fn sq_on_word_uncached(n: u32, r: u32, w: &Word) -> Element {
    if r == 0 {
        return Element::from_product(n, Product::from_words(vec![w.clone()]));
    }
    // Unstable: Sq^r_* vanishes on classes of dimension < 2r.
    if 2 * r > w.dim(n) {
        return Element::zero(n);
    }
    let Some(&a) = w.indices().first() else {
        return Element::zero(n);
    };
    let tail = w.tail();
    let mut out = Element::zero(n);
    for t in 0..=r / 2 {
        if !binom_mod2(a as i64 - r as i64, r as i64 - 2 * t as i64) {
            continue;
        }
        let inner = if t == 0 {
            Rc::new(Element::from_product(n, Product::from_words(vec![tail.clone()])))
        } else {
            sq_on_word(n, t, &tail)
        };
        if inner.is_zero() {
            continue;
        }
        out.add_assign(&inner.apply_q(a - r + t));
    }
    out
}
