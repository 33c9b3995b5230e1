mod common;

use common::{lower, Oracle};
use spherical::binom::binom_mod2;
use spherical::dl::{dim_lower, to_upper, Element, Excess, Product, Word};
use spherical::expr::parse_class;
use spherical::facts::FactsFile;
use spherical::loopspace::{d2_stunted, gap_report, james_hopf_project, max_suspension, suspend, SuspensionDepth};
use spherical::nishida::{is_a_annihilated, sq_dual, Annihilation};
use spherical::pipeline::{classify, Candidate, Pass, Status, Witness};
use spherical::steenrod::{
    cone_detection_possible, decompositions_pow2, normalize_word, sq_stunted, ConeBase, ConeMethod, ConeProblem,
    ConeStatus, SqWord, StuntedComplex,
};
use spherical::tables::{build_table, load_table_json, render, Format, TableKind};

fn word(upper: &[u32]) -> Product {
    Product::from_words(vec![Word(upper.to_vec())])
}

fn hopf() -> Vec<u32> {
    FactsFile::default().hopf_dims().unwrap()
}

#[test]
fn dimensions_and_indices() {
    assert_eq!(dim_lower(&[5, 6], 2), 25);
    assert_eq!(dim_lower(&[], 7), 7);
    assert_eq!(dim_lower(&[1, 2, 3, 4, 5, 6, 7], 1), 897);
    assert_eq!(to_upper(&[5, 6], 2), Word(vec![15, 8]));
    for j in 1..8 {
        for n in 1..20 {
            assert_eq!(to_upper(&[j], n), Word(vec![j + n]));
        }
    }
    assert_eq!(to_upper(&[], 3), Word(vec![]));
    assert_eq!(Word(vec![15, 8]).excess(), Excess::Finite(7));
    assert_eq!(Word(vec![]).excess(), Excess::Infinite);
    assert_eq!(Word(vec![9, 5]).excess(), Excess::Finite(4));
}

#[test]
fn binomials() {
    assert!(binom_mod2(7, 2));
    for d in 1..200 {
        assert!(binom_mod2(2 * d - 1, 1));
    }
    assert!(!binom_mod2(3, 4));
}

#[test]
fn normal_forms() {
    assert!(Element::from_upper(1, &[5, 2]).is_zero());
    assert_eq!(Element::from_upper(3, &[3]), Element::base(3).square());
    let e = Element::from_upper(1, &[7, 4]);
    assert_eq!(Element::from_upper(1, &[7, 4]).terms().count(), 1);
    assert!(e.contains(&word(&[7, 4])));
    let x = Element::base(1);
    let lhs = x.add(&Element::from_upper(1, &[3])).mul(&x);
    let rhs = x.square().add(&Element::from_upper(1, &[3]).mul(&x));
    assert_eq!(lhs, rhs);
    assert_eq!(x.mul(&Element::unit(1)), x);
}

#[test]
fn printed_nishida_values() {
    assert_eq!(sq_dual(1, &Element::from_upper(3, &[10])), Element::from_upper(3, &[9]));
    assert_eq!(sq_dual(2, &Element::from_upper(6, &[9])), Element::from_upper(6, &[7]));
    // Full expansion against the oracle, leading term as printed.
    let e = Element::from_upper(1, &[13, 7, 4]);
    let image = sq_dual(4, &e);
    assert!(image.contains(&word(&[11, 6, 3])));
    assert_eq!(lower(&image), Oracle::new(1).sq(4, &lower(&e)));
    assert!(sq_dual(4, &Element::from_upper(1, &[7, 5])).contains(&word(&[5, 3])));
    assert!(sq_dual(2, &Element::from_upper(2, &[7, 4])).contains(&word(&[6, 3])));
}

#[test]
fn annihilation_examples() {
    for n in 1..20 {
        assert!(is_a_annihilated(&Element::base(n)).unwrap().is_annihilated());
    }
    match is_a_annihilated(&Element::from_upper(2, &[6])).unwrap() {
        Annihilation::Witness { r, image } => {
            assert_eq!(r, 1);
            assert_eq!(image, Element::from_upper(2, &[5]));
        }
        Annihilation::Annihilated => panic!("Q^6 x_2 is not annihilated"),
    }
    assert!(is_a_annihilated(&Element::from_upper(6, &[7])).unwrap().is_annihilated());
    for r in [1, 2, 4, 8] {
        assert!(sq_dual(r, &Element::from_upper(6, &[7])).is_zero());
    }
}

#[test]
fn stunted_action_examples() {
    for n in (4..64).step_by(4) {
        let x = StuntedComplex::new(0, n + 3, n + 7).unwrap();
        assert_eq!(sq_stunted(2, n + 4, &x).unwrap(), None);
    }
    let p = StuntedComplex::new(0, 3, 9).unwrap();
    assert_eq!(sq_stunted(0, 5, &p).unwrap(), Some(5));
    assert_eq!(sq_stunted(1, 5, &p).unwrap(), Some(6));
}

#[test]
fn steenrod_relations() {
    assert!(normalize_word(&SqWord(vec![1, 1])).is_zero());
    let sq6 = normalize_word(&SqWord(vec![6]));
    let mut routes = normalize_word(&SqWord(vec![2, 4]));
    routes.add_assign(&normalize_word(&SqWord(vec![1, 4, 1])));
    assert_eq!(sq6, routes);
    let six = decompositions_pow2(6);
    assert!(six.words.contains(&SqWord(vec![2, 4])));
    assert!(six.words.contains(&SqWord(vec![1, 4, 1])));
    assert!(six.words.iter().all(|w| !w.0.windows(2).any(|p| p == [1, 1])));
    assert!(decompositions_pow2(3).words.contains(&SqWord(vec![1, 2])));
    assert!(decompositions_pow2(2).non_exhaustive_for_detection);
}

#[test]
fn two_four_route_shape() {
    // Detect class in dimension 4k + 2 with nothing in dimensions 2m - 2 and
    // 2m - 1, so both right-hand factors vanish.
    for m in [6u32, 14, 22, 30] {
        let a = m - 5;
        let x = StuntedComplex::new(1, a, (2 * m - 4).min(a + 20)).unwrap();
        assert!(x.top() <= 2 * m - 3);
        let v = cone_detection_possible(&ConeProblem::new(ConeBase::Stunted(x), m), &hopf()).unwrap();
        assert_eq!(v.status, ConeStatus::Impossible, "m={m}");
        assert!(matches!(v.method, ConeMethod::TwoFourRoute { k } if 4 * k + 2 == m));
    }
}

#[test]
fn cone_examples() {
    let n = 8;
    let x = StuntedComplex::new(n + 1, n + 3, n + 7).unwrap();
    let v = cone_detection_possible(&ConeProblem::new(ConeBase::Stunted(x), 2 * n + 4), &hopf()).unwrap();
    assert_eq!(v.status, ConeStatus::Impossible);
    // The class a^{n+3} is killed by Sq^4 when n = 0 mod 8.
    assert_eq!(sq_stunted(4, n + 1 + n + 3, &x).unwrap(), None);
    for n in 1..64 {
        let m = 2 * n + 8;
        let v = cone_detection_possible(&ConeProblem::new(ConeBase::Sphere { dim: m }, m), &hopf()).unwrap();
        assert_eq!(v.status, ConeStatus::Impossible);
    }
    for m in [1, 2, 4, 8] {
        let v = cone_detection_possible(&ConeProblem::new(ConeBase::Sphere { dim: m }, m), &hopf()).unwrap();
        assert_eq!(v.status, ConeStatus::Possible);
    }
}

#[test]
fn suspension_examples() {
    // Generators with excess above n + 1 are simply re-based.
    let e = Element::from_upper(2, &[11, 6]);
    assert_eq!(suspend(&e, 1), Element::from_upper(3, &[11, 6]));
    assert!(suspend(&Element::from_upper(2, &[5]).square(), 1).is_zero());
    // A lower index reaching zero turns the word into a square.
    for n in 1..10 {
        let q1q2 = Element::from_lower(n, &[1, 2]);
        assert_eq!(suspend(&q1q2, 1), Element::from_lower(n + 1, &[1]).square());
    }
    let m = max_suspension(&Element::base(4));
    assert_eq!(m.depth, SuspensionDepth::Stable);
    let sq = Element::from_upper(1, &[3]).square();
    let m = max_suspension(&sq);
    assert_eq!((m.depth, m.image), (SuspensionDepth::Finite(0), sq));
    // Q^3 x_1 becomes x_3^2 after two suspensions and dies on the third.
    let m = max_suspension(&parse_class("Q^3x_1 + (x_1)^2").unwrap());
    assert_eq!(m.depth, SuspensionDepth::Finite(2));
    assert_eq!(m.image, Element::base(3).square());
}

#[test]
fn height_projection() {
    assert!(james_hopf_project(&Element::base(3), 2).is_zero());
    let n = 2;
    let mut e = Element::zero(n);
    for j in [&[1u32, 2][..], &[3, 4], &[1], &[1, 2, 3]] {
        e.add_assign(&Element::from_lower(n, j));
    }
    let mut want = Element::from_lower(n, &[1, 2]);
    want.add_assign(&Element::from_lower(n, &[3, 4]));
    // Mixed dimensions are fine here: projection is termwise.
    assert_eq!(james_hopf_project(&e, 4), want);
}

#[test]
fn quadratic_construction() {
    let x = d2_stunted(5, 7);
    assert_eq!((x.s, x.a, x.b), (5, 5, 11));
    let one = d2_stunted(3, 1);
    assert_eq!(one.cell_count(), 1);
    assert_eq!(one.bottom(), 6);
    let x = d2_stunted(2, 7);
    assert_eq!((x.s, x.a, x.b), (2, 2, 8));
}

#[test]
fn gap_examples() {
    for n in 1..=128 {
        let g = gap_report(&[1, 6], 8, n);
        assert_eq!(g.top, 22 + 4 * n as u64);
        assert_eq!(g.margin, 4 * n as i64 + 5);
        let g = gap_report(&[5, 6], 8, n);
        assert_eq!(g.top, 22 + 4 * n as u64);
        assert_eq!(g.margin, 4 * n as i64 + 13);
        assert!(g.eliminated_by_gap);
    }
}

#[test]
fn pipeline_examples() {
    let facts = FactsFile::default();
    let c = |j: &[u32]| Candidate { j: j.to_vec(), l: 8, extra: false };
    let v = classify(&c(&[1]), 6, &facts).unwrap();
    assert_eq!((v.status, v.pass), (Status::Eliminated, Some(Pass::P4)));
    assert!(matches!(v.witness, Witness::Cone { ref verdict, .. } if matches!(verdict.method, ConeMethod::TwoFourRoute { .. })));

    let n = 11;
    let v = classify(&c(&[3, 4, 5, 6]), n, &facts).unwrap();
    assert_eq!((v.status, v.pass), (Status::Eliminated, Some(Pass::P2)));
    match v.witness {
        Witness::Steenrod { r, image } => {
            assert_eq!(r, 2);
            assert!(image.contains(&word(&[127, 21 + 4 * n, 11 + 2 * n, 6 + n])));
        }
        other => panic!("unexpected witness {other:?}"),
    }

    let v = classify(&c(&[1, 2]), 1, &facts).unwrap();
    assert_eq!(v.status, Status::External);
    assert!(matches!(v.witness, Witness::External { ref fact, stem: 17 } if fact == "stem-17"));
}

#[test]
fn table_examples() {
    let doc = build_table(TableKind::Lemma81, 8, 1..=16).unwrap();
    let row = doc.rows.iter().find(|r| r.family == "(1,2,j)").unwrap();
    assert_eq!(row.cells[2], "5+4j+8n");
    let top = doc.rows.iter().find(|r| r.family == "(1,2,3,4,5,6,7)").unwrap();
    assert_eq!(top.cells[2], "769+128n");

    let doc = build_table(TableKind::Degenerate43, 8, 1..=16).unwrap();
    let tops: Vec<&str> = doc.rows.iter().map(|r| r.cells[4].as_str()).collect();
    for t in ["22+4n", "50+8n", "106+16n", "218+32n", "442+64n", "890+128n"] {
        assert!(tops.contains(&t), "{t}");
    }
    for kind in [TableKind::Lemma81, TableKind::Degenerate43, TableKind::Mod4, TableKind::Nondegenerate] {
        let doc = build_table(kind, 8, 1..=12).unwrap();
        assert_eq!(load_table_json(&render(&doc, Format::Json).unwrap()).unwrap(), doc);
        for f in [Format::Text, Format::Csv, Format::Latex] {
            assert!(!render(&doc, f).unwrap().is_empty());
        }
    }
}
