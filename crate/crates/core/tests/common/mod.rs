//! Independent reference implementation used by the integration tests.
//!
//! Written from the defining relations only: Pascal's triangle for binomials,
//! the raw Adem relation for `Q^a Q^b`, the Cartan formula, and the Nishida
//! relation without the instability shortcut. Nothing here calls into the
//! library except to convert its output for comparison.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use spherical::dl::Element;

pub type OWord = Vec<u32>;
pub type OProduct = Vec<OWord>;
pub type OElement = BTreeSet<OProduct>;

/// `C(a, b) mod 2` from Pascal's rule, rows cached.
pub struct Pascal {
    rows: Vec<Vec<bool>>,
}

impl Pascal {
    pub fn new(max: usize) -> Pascal {
        let mut rows: Vec<Vec<bool>> = vec![vec![true]];
        for a in 1..=max {
            let prev = &rows[a - 1];
            let mut row = vec![true; a + 1];
            for b in 1..a {
                row[b] = prev[b - 1] ^ prev[b];
            }
            rows.push(row);
        }
        Pascal { rows }
    }

    pub fn get(&self, a: i64, b: i64) -> bool {
        if a < 0 || b < 0 || b > a {
            return false;
        }
        self.rows[a as usize][b as usize]
    }
}

fn toggle(e: &mut OElement, p: OProduct) {
    let mut p = p;
    p.sort();
    if !e.remove(&p) {
        e.insert(p);
    }
}

fn xor(e: &mut OElement, other: &OElement) {
    for p in other {
        toggle(e, p.clone());
    }
}

pub struct Oracle {
    pub n: u32,
    pascal: Pascal,
    q_memo: HashMap<(u32, OWord), OElement>,
    sq_memo: HashMap<(u32, OWord), OElement>,
}

impl Oracle {
    pub fn new(n: u32) -> Oracle {
        Oracle { n, pascal: Pascal::new(4096), q_memo: HashMap::new(), sq_memo: HashMap::new() }
    }

    fn b(&self, a: i64, c: i64) -> bool {
        self.pascal.get(a, c)
    }

    pub fn dim_word(&self, w: &OWord) -> u32 {
        self.n + w.iter().sum::<u32>()
    }

    /// `Q^a` on a single word.
    pub fn q_word(&mut self, a: u32, w: &OWord) -> OElement {
        if let Some(hit) = self.q_memo.get(&(a, w.clone())) {
            return hit.clone();
        }
        let d = self.dim_word(w);
        let mut out = OElement::new();
        if a < d {
        } else if a == d {
            toggle(&mut out, vec![w.clone(), w.clone()]);
        } else if !w.is_empty() && a > 2 * w[0] {
            let s = w[0];
            let inner: OWord = w[1..].to_vec();
            for i in a.div_ceil(2)..(a - s) {
                if self.b(i as i64 - s as i64 - 1, 2 * i as i64 - a as i64) {
                    let mid = self.q_word(i, &inner);
                    for p in &mid {
                        let next = self.q_product(a + s - i, p);
                        xor(&mut out, &next);
                    }
                }
            }
        } else {
            let mut w2 = vec![a];
            w2.extend_from_slice(w);
            toggle(&mut out, vec![w2]);
        }
        self.q_memo.insert((a, w.clone()), out.clone());
        out
    }

    /// `Q^a` on a product via the Cartan formula.
    pub fn q_product(&mut self, a: u32, p: &OProduct) -> OElement {
        match p.len() {
            0 => {
                let mut out = OElement::new();
                if a == 0 {
                    toggle(&mut out, vec![]);
                }
                out
            }
            1 => self.q_word(a, &p[0]),
            _ => {
                let first = p[0].clone();
                let rest: OProduct = p[1..].to_vec();
                let mut out = OElement::new();
                for i in 0..=a {
                    let x = self.q_word(i, &first);
                    if x.is_empty() {
                        continue;
                    }
                    let y = self.q_product(a - i, &rest);
                    for u in &x {
                        for v in &y {
                            let mut uv = u.clone();
                            uv.extend(v.iter().cloned());
                            toggle(&mut out, uv);
                        }
                    }
                }
                out
            }
        }
    }

    /// `Sq^r_*` on a word: `Sq^r_* Q^a = sum_t C(a-r, r-2t) Q^{a-r+t} Sq^t_*`.
    pub fn sq_word(&mut self, r: u32, w: &OWord) -> OElement {
        if let Some(hit) = self.sq_memo.get(&(r, w.clone())) {
            return hit.clone();
        }
        let mut out = OElement::new();
        if r == 0 {
            toggle(&mut out, vec![w.clone()]);
        } else if !w.is_empty() {
            let a = w[0];
            let tail: OWord = w[1..].to_vec();
            for t in 0..=r / 2 {
                if a + t < r {
                    continue;
                }
                if self.b(a as i64 - r as i64, r as i64 - 2 * t as i64) {
                    let inner = self.sq_word(t, &tail);
                    for p in &inner {
                        let next = self.q_product(a - r + t, p);
                        xor(&mut out, &next);
                    }
                }
            }
        }
        self.sq_memo.insert((r, w.clone()), out.clone());
        out
    }

    /// `Sq^r_*` on a product via the Cartan formula.
    pub fn sq_product(&mut self, r: u32, p: &OProduct) -> OElement {
        match p.len() {
            0 => {
                let mut out = OElement::new();
                if r == 0 {
                    toggle(&mut out, vec![]);
                }
                out
            }
            1 => self.sq_word(r, &p[0]),
            _ => {
                let first = p[0].clone();
                let rest: OProduct = p[1..].to_vec();
                let mut out = OElement::new();
                for i in 0..=r {
                    let x = self.sq_word(i, &first);
                    if x.is_empty() {
                        continue;
                    }
                    let y = self.sq_product(r - i, &rest);
                    for u in &x {
                        for v in &y {
                            let mut uv = u.clone();
                            uv.extend(v.iter().cloned());
                            toggle(&mut out, uv);
                        }
                    }
                }
                out
            }
        }
    }

    pub fn sq(&mut self, r: u32, e: &OElement) -> OElement {
        let mut out = OElement::new();
        for p in e {
            let part = self.sq_product(r, p);
            xor(&mut out, &part);
        }
        out
    }

    /// `Q^I x_n` from an upper sequence, applied innermost first.
    pub fn from_upper(&mut self, upper: &[u32]) -> OElement {
        let mut cur = OElement::new();
        toggle(&mut cur, vec![vec![]]);
        for &a in upper.iter().rev() {
            let mut next = OElement::new();
            for p in &cur {
                let part = self.q_product(a, p);
                xor(&mut next, &part);
            }
            cur = next;
        }
        cur
    }

    /// Every `Sq^r_*` with `1 <= r <= dim` vanishes.
    pub fn annihilated(&mut self, e: &OElement, dim: u32) -> bool {
        (1..=dim).all(|r| self.sq(r, e).is_empty())
    }
}

/// The library element as plain nested vectors.
pub fn lower(e: &Element) -> OElement {
    e.terms()
        .map(|p| {
            let mut words: OProduct = p.factors().iter().map(|w| w.indices().to_vec()).collect();
            words.sort();
            words
        })
        .collect()
}

/// Generator words `Q^I x_n` (upper indices) with `dim <= max_dim`, excess
/// greater than `n`, admissible; found by brute force over admissible
/// sequences without using lower indices.
pub fn brute_generators(n: u32, max_dim: u32) -> Vec<OWord> {
    fn go(n: u32, max_dim: u32, cur: &mut Vec<u32>, out: &mut Vec<OWord>) {
        // cur is built innermost first.
        let d = n + cur.iter().sum::<u32>();
        let word: OWord = cur.iter().rev().copied().collect();
        let ok = word.windows(2).all(|p| p[0] <= 2 * p[1])
            && match word.first() {
                None => true,
                Some(&i1) => i1 as i64 - word[1..].iter().sum::<u32>() as i64 > n as i64,
            };
        // A word of excess <= n has no generator extensions: admissibility
        // passes the excess bound down to every tail.
        if !ok {
            return;
        }
        out.push(word);
        let cap = cur.last().map_or(u32::MAX, |&inner| 2 * inner);
        for a in 1..=max_dim.saturating_sub(d).min(cap) {
            cur.push(a);
            go(n, max_dim, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_dim, &mut Vec::new(), &mut out);
    out
}
