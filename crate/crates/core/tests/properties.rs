mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use common::{brute_generators, lower, Oracle, Pascal};
use spherical::binom::binom_mod2;
use spherical::dl::{dim_lower, to_lower, to_upper, Element, LoopBound, Product, Word};
use spherical::loopspace::{enumerate_basis, enumerate_monomials, james_hopf_project, suspend, BasisQuery};
use spherical::nishida::{is_a_annihilated, sq_dual};
use spherical::steenrod::{admissible_basis, adem_normalize_sq, normalize_word, SqSum, SqWord};

fn corpus(l: u32, n: u32, d: u32) -> Vec<Word> {
    enumerate_basis(&BasisQuery::new(LoopBound::Finite(l), n, d).unwrap())
}

#[test]
fn lucas_matches_pascal() {
    let pascal = Pascal::new(4096);
    for a in 0..=4096i64 {
        for b in 0..=a {
            assert_eq!(binom_mod2(a, b), pascal.get(a, b), "C({a},{b})");
        }
    }
    assert!(!binom_mod2(-1, 0));
    assert!(!binom_mod2(3, 4));
    assert!(!binom_mod2(5, -1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100_000))]

    #[test]
    fn lower_upper_round_trip(j in prop::collection::vec(1u32..64, 0..8), n in 1u32..64) {
        let upper = to_upper(&j, n);
        prop_assert_eq!(upper.dim(n), dim_lower(&j, n));
        prop_assert_eq!(to_lower(&upper, n), Some(j));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn nondecreasing_lower_is_admissible(mut j in prop::collection::vec(1u32..16, 1..7), n in 1u32..32) {
        j.sort_unstable();
        let w = to_upper(&j, n);
        prop_assert!(w.is_admissible());
        prop_assert!(w.is_generator(n));
    }

    #[test]
    fn degree_bookkeeping(j in prop::collection::vec(1u32..8, 0..4), n in 1u32..8, r in 1u32..40) {
        let e = Element::from_lower(n, &j);
        let image = sq_dual(r, &e);
        if !image.is_zero() {
            prop_assert_eq!(image.dim(), Some(e.dim().unwrap() - r));
        }
    }
}

#[test]
fn sq1_specialisations() {
    // Sq^1_* Q^a z = (a - 1) Q^{a-1} z, checked for a <= 4096 on small bases.
    for n in 1..=4 {
        for z in corpus(8, n, 8).into_iter().filter(|w| w.len() <= 1) {
            let dz = z.dim(n);
            let zeta = Element::from_upper(n, z.indices());
            for a in dz..=4096 {
                let got = sq_dual(1, &zeta.apply_q(a));
                let want = if a % 2 == 0 { zeta.apply_q(a - 1) } else { Element::zero(n) };
                assert_eq!(got, want, "Sq^1_* Q^{a} on {}", zeta.display());
            }
        }
    }
}

#[test]
fn cartan_square_rule() {
    for n in 1..=6 {
        for w in corpus(8, n, 30) {
            let zeta = Element::from_upper(n, w.indices());
            let sq = zeta.square();
            let d = zeta.dim().unwrap();
            for r in 1..=2 * d {
                let got = sq_dual(r, &sq);
                let want = if r % 2 == 1 { Element::zero(n) } else { sq_dual(r / 2, &zeta).square() };
                assert_eq!(got, want, "Sq^{r}_* on ({})^2", zeta.display());
            }
        }
    }
}

#[test]
fn suspension_kernel_is_decomposables() {
    for l in 1..=8 {
        for n in 1..=6 {
            let q = BasisQuery::new(LoopBound::Finite(l), n, 30).unwrap();
            let monomials = enumerate_monomials(&q);
            for p in &monomials {
                let e = Element::from_product(n, p.clone());
                assert_eq!(suspend(&e, 1).is_zero(), p.is_decomposable(), "{}", e.display());
            }
            // Linear combinations within one dimension: the kernel is spanned
            // by the decomposables.
            let mut by_dim: BTreeMap<u32, Vec<&Product>> = BTreeMap::new();
            for p in &monomials {
                by_dim.entry(p.dim(n)).or_default().push(p);
            }
            for ps in by_dim.values() {
                let mut e = Element::zero(n);
                for p in ps {
                    e.toggle((*p).clone());
                }
                assert_eq!(suspend(&e, 1).is_zero(), e.is_decomposable());
            }
        }
    }
}

#[test]
fn annihilation_by_generators_matches_all_operations() {
    // Every positive-degree admissible composite acts through its entries, so
    // vanishing of all Sq^r_* for 1 <= r <= dim is the brute-force criterion.
    for n in 1..=6 {
        let mut oracle = Oracle::new(n);
        let gens = corpus(8, n, 40);
        for w in &gens {
            let e = Element::from_upper(n, w.indices());
            let d = e.dim().unwrap();
            let fast = is_a_annihilated(&e).unwrap().is_annihilated();
            let brute = oracle.annihilated(&lower(&e), d);
            assert_eq!(fast, brute, "{}", e.display());
        }
        // Squares and sums of equal dimension too.
        for pair in gens.windows(2) {
            let e = Element::from_upper(n, pair[0].indices()).add(&Element::from_upper(n, pair[1].indices()));
            if let Some(d) = e.dim() {
                assert_eq!(is_a_annihilated(&e).unwrap().is_annihilated(), oracle.annihilated(&lower(&e), d));
            }
        }
    }
}

#[test]
fn admissible_composites_act_through_entries() {
    // Applying every admissible composite of degree <= dim agrees with the
    // generator test, which is what the brute force above assumes.
    let n = 2;
    for w in corpus(8, n, 24) {
        let e = Element::from_upper(n, w.indices());
        let d = e.dim().unwrap();
        let mut any = false;
        for deg in 1..=d {
            for c in admissible_basis(deg) {
                let mut x = e.clone();
                for &a in c.0.iter().rev() {
                    x = sq_dual(a, &x);
                }
                any |= !x.is_zero();
            }
        }
        assert_eq!(!any, is_a_annihilated(&e).unwrap().is_annihilated());
    }
}

#[test]
fn nishida_matches_oracle() {
    for n in 1..=4 {
        let mut oracle = Oracle::new(n);
        for w in corpus(8, n, 36) {
            let e = Element::from_upper(n, w.indices());
            let ox = lower(&e);
            for r in 1..=e.dim().unwrap() {
                assert_eq!(lower(&sq_dual(r, &e)), oracle.sq(r, &ox), "Sq^{r}_* on {}", e.display());
            }
        }
    }
}

#[test]
fn normal_form_matches_oracle() {
    // Arbitrary (often inadmissible) upper sequences.
    for n in 1..=3 {
        let mut oracle = Oracle::new(n);
        for a in 1..=14 {
            for b in 1..=10 {
                for c in 0..=6 {
                    let upper: Vec<u32> = if c == 0 { vec![a, b] } else { vec![a, b, c] };
                    let e = Element::from_upper(n, &upper);
                    assert_eq!(lower(&e), oracle.from_upper(&upper), "Q^{upper:?} x_{n}");
                    for p in e.terms() {
                        for f in p.factors() {
                            assert!(f.is_admissible() && f.is_generator(n));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn contravariant_composition() {
    // (Sq^b Sq^a)_* = Sq^a_* Sq^b_*: apply b first, then a, and compare with
    // the duals of the Adem-normalised composite Sq^b Sq^a.
    let classes = [
        Element::from_lower(1, &[1, 2, 3, 4, 5]),
        Element::from_lower(2, &[3, 4, 5, 6]),
        Element::from_lower(3, &[1, 2, 3, 4, 7]),
        Element::from_lower(1, &[1, 2, 3, 4]).square(),
    ];
    for e in &classes {
        for a in 0..=64 {
            for b in 0..=64 {
                let direct = sq_dual(a, &sq_dual(b, e));
                let mut via = Element::zero(e.n());
                for w in normalize_word(&SqWord::new(vec![b, a])).iter() {
                    let mut x = e.clone();
                    for &k in &w.0 {
                        x = sq_dual(k, &x);
                    }
                    via.add_assign(&x);
                }
                assert_eq!(direct, via, "a={a} b={b} on {}", e.display());
            }
        }
    }
}

#[test]
fn generator_census() {
    for n in 1..=5 {
        let all = brute_generators(n, 48);
        let stable: BTreeSet<Vec<u32>> = all.iter().cloned().collect();
        let got: BTreeSet<Vec<u32>> = enumerate_basis(&BasisQuery::new(LoopBound::Infinite, n, 48).unwrap())
            .into_iter()
            .map(|w| w.0)
            .collect();
        assert_eq!(got, stable, "QS^{n}");
        for l in 1..=9 {
            // In Omega^l the innermost lower index i_s - n must be below l.
            let want: BTreeSet<Vec<u32>> =
                all.iter().filter(|w| w.last().is_none_or(|&i| i - n < l)).cloned().collect();
            let got: BTreeSet<Vec<u32>> = corpus(l, n, 48).into_iter().map(|w| w.0).collect();
            assert_eq!(got, want, "l={l} n={n}");
        }
    }
}

#[test]
fn stabilisation_is_a_subset() {
    for n in 1..=6 {
        let stable: BTreeSet<Word> =
            enumerate_basis(&BasisQuery::new(LoopBound::Infinite, n, 40).unwrap()).into_iter().collect();
        let mut prev: BTreeSet<Word> = BTreeSet::new();
        for l in 1..=12 {
            let cur: BTreeSet<Word> = corpus(l, n, 40).into_iter().collect();
            assert!(prev.is_subset(&cur), "l={l} n={n}");
            assert!(cur.is_subset(&stable), "l={l} n={n}");
            prev = cur;
        }
    }
}

#[test]
fn poincare_census() {
    // Monomials counted by dimension equal the coefficients of
    // prod over generators g of 1 / (1 - t^{dim g}).
    for l in [1, 2, 4, 8] {
        for n in 1..=4 {
            let d = 36;
            let q = BasisQuery::new(LoopBound::Finite(l), n, d).unwrap();
            let mut series = vec![0u64; d as usize + 1];
            series[0] = 1;
            for g in enumerate_basis(&q) {
                let k = g.dim(n) as usize;
                for i in k..=d as usize {
                    series[i] += series[i - k];
                }
            }
            let mut counted = vec![0u64; d as usize + 1];
            counted[0] = 1;
            for p in enumerate_monomials(&q) {
                counted[p.dim(n) as usize] += 1;
            }
            assert_eq!(counted, series, "l={l} n={n}");
        }
    }
}

#[test]
fn heights_partition_elements() {
    for n in 1..=3 {
        let q = BasisQuery::new(LoopBound::Finite(4), n, 24).unwrap();
        let monomials = enumerate_monomials(&q);
        let mut e = Element::zero(n);
        for p in monomials.iter().step_by(3) {
            e.toggle(p.clone());
        }
        let heights: BTreeSet<u64> = e.terms().map(Product::height).collect();
        let mut rebuilt = Element::zero(n);
        for &h in &heights {
            rebuilt.add_assign(&james_hopf_project(&e, h));
        }
        assert_eq!(rebuilt, e);
        for p in e.terms() {
            let h: u64 = p.factors().iter().map(|w| 1u64 << w.len()).sum();
            assert_eq!(p.height(), h);
        }
    }
}

#[test]
fn steenrod_normal_form_properties() {
    // Idempotent, degree preserving, and distinct admissible words stay
    // independent.
    fn words(deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<SqWord>) {
        if deg == 0 {
            out.push(SqWord(prefix.clone()));
            return;
        }
        for a in 1..=deg {
            prefix.push(a);
            words(deg - a, prefix, out);
            prefix.pop();
        }
    }
    for deg in 1..=14 {
        let mut all = Vec::new();
        words(deg, &mut Vec::new(), &mut all);
        for w in &all {
            let nf = normalize_word(w);
            for v in nf.iter() {
                assert!(v.is_admissible());
                assert_eq!(v.degree(), deg);
            }
            assert_eq!(adem_normalize_sq(&nf), nf);
        }
        for w in admissible_basis(deg) {
            assert_eq!(normalize_word(&w), SqSum::from_word(w.clone()));
        }
    }
}

#[test]
fn admissible_basis_count() {
    // Admissible sequences of degree d are in bijection with partitions of d
    // into parts 2^k - 1.
    for deg in 0..=24u32 {
        let parts: Vec<u32> = (1..6).map(|k| (1u32 << k) - 1).collect();
        let mut ways = vec![0usize; deg as usize + 1];
        ways[0] = 1;
        for &p in &parts {
            for i in p as usize..=deg as usize {
                ways[i] += ways[i - p as usize];
            }
        }
        assert_eq!(admissible_basis(deg).len(), ways[deg as usize], "degree {deg}");
    }
}
