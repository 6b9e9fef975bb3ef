use std::collections::BTreeMap;

use proptest::prelude::*;

use nugrass_core::atlas::{
    build_chart, compose, enumerate_charts, minor_consistency, transition, verify_cocycles, Chart, ChartTransition,
    CheckKind, Coordinate, GrassShape, Level, Method, MultiIndex, Outcome, Report,
};
use nugrass_core::superalgebra::{GrassmannElement, Parity};
use nugrass_core::supermatrix::Entry;

fn shape(k: usize, l: usize, m: usize, n: usize) -> GrassShape {
    GrassShape::new(k, l, m, n).unwrap()
}

fn chart(s: &GrassShape, index: &[usize]) -> Chart {
    build_chart(s, &MultiIndex::new(s, index.to_vec()).unwrap()).unwrap()
}

fn has_odd_unit(c: &Chart) -> bool {
    c.slots.iter().any(|s| s.wrapped)
}

fn images(t: &ChartTransition) -> BTreeMap<String, GrassmannElement> {
    t.map.images().into_iter().map(|(n, z)| (n, z.clone())).collect()
}

fn status(o: &Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Vacuous(_) => "vacuous",
        Outcome::Fail(_) => "fail",
    }
}

#[test]
fn chart_enumeration() {
    let s = shape(1, 1, 2, 2);
    let all = enumerate_charts(&s);
    assert_eq!(all.len(), 6);
    assert_eq!(all[0].as_slice(), &[1, 2]);
    let big = enumerate_charts(&shape(2, 2, 3, 3));
    assert_eq!(big.len(), 15);
    assert_eq!(big[0].as_slice(), &[1, 2, 3, 4]);
    assert!(MultiIndex::new(&s, vec![2, 1]).is_err());
    assert!(MultiIndex::new(&s, vec![1, 5]).is_err());
    assert!(GrassShape::new(3, 0, 2, 1)
        .unwrap_err()
        .to_string()
        .contains("require k < m"));
}

#[test]
fn small_charts() {
    let s = shape(1, 1, 2, 2);
    let c = chart(&s, &[1, 3]);
    let ctx = c.context().clone();
    let x = |i: usize| GrassmannElement::even_symbol(&ctx, i - 1);
    let e = |j| GrassmannElement::odd_generator(&ctx, j);
    let v = |z: GrassmannElement| Entry::Value(z);
    let want = [
        [Entry::One, v(x(1)), Entry::Zero, v(e(2))],
        [Entry::Zero, v(e(1)), Entry::One, v(x(2))],
    ];
    for (r, row) in want.iter().enumerate() {
        for (col, w) in row.iter().enumerate() {
            assert!(c.matrix.get(r, col).equals(w, &ctx), "({}, {})", r + 1, col + 1);
        }
    }

    let c = chart(&s, &[1, 2]);
    let want = [
        [Entry::One, Entry::Zero, v(x(1).nu().unwrap()), v(e(2))],
        [Entry::Zero, Entry::OddUnit, v(e(1).nu().unwrap()), v(x(2))],
    ];
    for (r, row) in want.iter().enumerate() {
        for (col, w) in row.iter().enumerate() {
            assert!(c.matrix.get(r, col).equals(w, &ctx), "({}, {})", r + 1, col + 1);
        }
    }
}

#[test]
fn slots_cover_every_coordinate_once() {
    for s in [
        shape(1, 1, 2, 2),
        shape(2, 2, 3, 3),
        shape(2, 1, 3, 2),
        shape(1, 2, 3, 4),
    ] {
        for index in enumerate_charts(&s) {
            let c = build_chart(&s, &index).unwrap();
            assert_eq!(c.slots.len(), s.p() + s.q());
            let evens = c
                .slots
                .iter()
                .filter(|x| matches!(x.coordinate, Coordinate::Even(_)))
                .count();
            assert_eq!(evens, s.p());
            let non_i: Vec<usize> = (1..=s.m + s.n).filter(|&col| !index.contains(col)).collect();
            let even_type = &non_i[..s.m - s.k];
            let (mut top_even, mut bottom_odd) = (0, 0);
            for slot in &c.slots {
                if even_type.contains(&slot.col) {
                    match (slot.row <= s.k, slot.coordinate) {
                        (true, Coordinate::Even(_)) => top_even += 1,
                        (false, Coordinate::Odd(_)) => bottom_odd += 1,
                        other => panic!("{s} {index}: even-type slot holds {other:?}"),
                    }
                }
            }
            assert_eq!((top_even, bottom_odd), (s.k * (s.m - s.k), s.l * (s.m - s.k)));
            let minor = c.matrix.minor(index.as_slice()).unwrap();
            let id = nugrass_core::supermatrix::pseudo_unit(index.as_slice(), s.ambient(), c.context()).unwrap();
            assert!(minor.equals_exact(&id));
        }
    }
}

#[test]
fn self_transition_is_identity() {
    let s = shape(2, 2, 3, 3);
    for index in enumerate_charts(&s) {
        let c = build_chart(&s, &index).unwrap();
        let t = transition(&c, &c).unwrap();
        assert!(t.map.is_identity(), "{index}: {:?}", t.map.first_non_identity());
        assert!(t.domain_condition().is_one());
    }
}

#[test]
fn worked_transition() {
    let s = shape(1, 1, 2, 2);
    let i = chart(&s, &[1, 3]);
    let j = chart(&s, &[2, 3]);
    let t = transition(&i, &j).unwrap();
    let ctx = i.context().clone();
    let x1 = GrassmannElement::even_symbol(&ctx, 0);
    let x2 = GrassmannElement::even_symbol(&ctx, 1);
    let e1 = GrassmannElement::odd_generator(&ctx, 1);
    let e2 = GrassmannElement::odd_generator(&ctx, 2);
    let inv = x1.invert().unwrap();
    let got = images(&t);
    assert_eq!(got["x1"], inv);
    assert_eq!(got["e1"], -(&e1 * &inv));
    assert_eq!(got["e2"], &e2 * &inv);
    assert_eq!(got["x2"], &x2 - &(&(&e1 * &e2) * &inv));
    assert_eq!(t.domain_condition(), x1);

    let back = transition(&j, &i).unwrap();
    let round = compose(&t, &back).unwrap();
    assert!(round.map.is_identity(), "{:?}", round.map.first_non_identity());
}

#[test]
fn composing_with_identity() {
    let s = shape(1, 1, 2, 2);
    let i = chart(&s, &[1, 3]);
    let j = chart(&s, &[2, 4]);
    let t = transition(&i, &j).unwrap();
    let left = compose(&ChartTransition::identity(&s, &i.index), &t).unwrap();
    let right = compose(&t, &ChartTransition::identity(&s, &j.index)).unwrap();
    assert_eq!(images(&left), images(&t));
    assert_eq!(images(&right), images(&t));
    assert!(compose(&t, &t).is_err());
}

#[test]
fn worked_triple() {
    let s = shape(1, 1, 2, 2);
    let (a, b, c) = (chart(&s, &[1, 3]), chart(&s, &[2, 3]), chart(&s, &[1, 4]));
    let ab = transition(&a, &b).unwrap();
    let bc = transition(&b, &c).unwrap();
    let ca = transition(&c, &a).unwrap();
    let round = compose(&compose(&ab, &bc).unwrap(), &ca).unwrap();
    assert!(round.map.is_identity(), "{:?}", round.map.first_non_identity());
}

/// Charts without a `1ν` entry glue exactly.
#[test]
fn charts_without_odd_units_glue() {
    for s in [shape(1, 1, 2, 2), shape(2, 2, 3, 3)] {
        let charts: Vec<Chart> = enumerate_charts(&s)
            .iter()
            .map(|i| build_chart(&s, i).unwrap())
            .filter(|c| !has_odd_unit(c))
            .collect();
        assert!(charts.len() >= 2);
        for a in &charts {
            for b in &charts {
                let Ok(ab) = transition(a, b) else { continue };
                let ba = transition(b, a).unwrap();
                let round = compose(&ab, &ba).unwrap();
                assert!(
                    round.map.is_identity(),
                    "{} {}: {:?}",
                    a.index,
                    b.index,
                    round.map.first_non_identity()
                );
                assert!(minor_consistency(a, &b.index).unwrap());
            }
        }
    }
}

#[test]
fn transitions_preserve_parity() {
    for s in [shape(1, 1, 2, 2), shape(2, 2, 3, 3)] {
        let charts: Vec<Chart> = enumerate_charts(&s)
            .iter()
            .map(|i| build_chart(&s, i).unwrap())
            .collect();
        for a in &charts {
            for b in &charts {
                let Ok(t) = transition(a, b) else { continue };
                for (name, z) in t.map.images() {
                    let want = if name.starts_with('x') {
                        Parity::Even
                    } else {
                        Parity::Odd
                    };
                    assert!(
                        z.is_zero() || z.parity() == want,
                        "{} {}: {name} ↦ {z}",
                        a.index,
                        b.index
                    );
                }
                assert!(!t.domain_condition().is_zero());
            }
        }
    }
}

fn tally(r: &Report, kind: CheckKind) -> usize {
    r.count(kind)
}

#[test]
fn report_covers_every_check() {
    let s = shape(1, 1, 2, 2);
    let r = verify_cocycles(&s, Level::Triples, Method::Exact).unwrap();
    assert_eq!(tally(&r, CheckKind::Identity), 6);
    assert_eq!(tally(&r, CheckKind::Pair), 36);
    assert_eq!(tally(&r, CheckKind::Triple), 216);
    assert_eq!(tally(&r, CheckKind::Chain), 216);
    assert!(r
        .records
        .iter()
        .filter(|c| c.kind == CheckKind::Identity)
        .all(|c| c.outcome == Outcome::Pass));
    assert_eq!(r.passed() + r.vacuous() + r.failures().count(), r.records.len());
    let again = verify_cocycles(&s, Level::Triples, Method::Exact).unwrap();
    let a: Vec<_> = r
        .records
        .iter()
        .map(|c| (c.kind, c.charts.clone(), c.outcome.clone()))
        .collect();
    let b: Vec<_> = again
        .records
        .iter()
        .map(|c| (c.kind, c.charts.clone(), c.outcome.clone()))
        .collect();
    assert_eq!(a, b);
    let pairs = verify_cocycles(&s, Level::Pairs, Method::Exact).unwrap();
    assert_eq!(tally(&pairs, CheckKind::Triple), 0);
}

#[test]
fn method_serializes_with_a_kind_tag() {
    let m = serde_json::to_value(Method::Modular { seed: 7, trials: 3 }).unwrap();
    assert_eq!(m["kind"], "modular");
    assert_eq!(m["seed"], 7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Exact and modular verification reach the same verdict on every record.
    #[test]
    fn modular_agrees_with_exact(seed in any::<u64>()) {
        let s = shape(1, 1, 2, 2);
        let exact = verify_cocycles(&s, Level::Triples, Method::Exact).unwrap();
        let modular = verify_cocycles(&s, Level::Triples, Method::Modular { seed, trials: 3 }).unwrap();
        prop_assert_eq!(exact.records.len(), modular.records.len());
        for (a, b) in exact.records.iter().zip(&modular.records) {
            prop_assert_eq!(&a.charts, &b.charts);
            prop_assert_eq!(status(&a.outcome), status(&b.outcome), "{:?} {:?}", a.kind, a.charts);
        }
    }
}
