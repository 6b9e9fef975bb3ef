mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::*;
use nugrass_core::atlas::{build_chart, enumerate_charts, GrassShape, MultiIndex};
use nugrass_core::superalgebra::{AlgebraContext, GrassmannElement};
use nugrass_core::supermatrix::{pseudo_unit, Entry, SuperMatrix, SuperShape};

fn diag(ctx: &Arc<AlgebraContext>, entries: &[Entry]) -> SuperMatrix {
    let n = entries.len();
    let mut flat = vec![Entry::Zero; n * n];
    for (i, e) in entries.iter().enumerate() {
        flat[i * n + i] = e.clone();
    }
    let k = n / 2;
    SuperMatrix::from_entries(SuperShape::square(k, n - k), ctx, flat).unwrap()
}

fn two_by_two(ctx: &Arc<AlgebraContext>, rows: [[GrassmannElement; 2]; 2]) -> SuperMatrix {
    SuperMatrix::from_elements(SuperShape::square(1, 1), ctx, rows.into_iter().map(Vec::from).collect()).unwrap()
}

#[test]
fn pseudo_unit_examples() {
    let ctx = context(1, 1);
    let big = SuperShape::new(2, 2, 3, 3);
    let id = pseudo_unit(&[1, 2, 3, 6], big, &ctx).unwrap();
    assert!(id.equals_exact(&diag(&ctx, &[Entry::One, Entry::One, Entry::OddUnit, Entry::One])));
    let small = SuperShape::new(1, 1, 2, 2);
    assert!(pseudo_unit(&[1, 3], small, &ctx)
        .unwrap()
        .equals_exact(&SuperMatrix::identity(1, 1, &ctx)));
    assert!(pseudo_unit(&[1, 2], small, &ctx)
        .unwrap()
        .equals_exact(&diag(&ctx, &[Entry::One, Entry::OddUnit])));
    assert!(pseudo_unit(&[1, 5], small, &ctx).is_err());
    assert!(pseudo_unit(&[1], small, &ctx).is_err());
}

#[test]
fn unipotent_product_is_identity() {
    let ctx = context(1, 1);
    let x1 = x(&ctx, 1);
    let inv = x1.invert().unwrap();
    let a = two_by_two(
        &ctx,
        [[inv.clone(), int(&ctx, 0)], [-(&e(&ctx, 1) * &inv), int(&ctx, 1)]],
    );
    let b = two_by_two(&ctx, [[x1, int(&ctx, 0)], [e(&ctx, 1), int(&ctx, 1)]]);
    assert!(a.matmul(&b).unwrap().equals_exact(&SuperMatrix::identity(1, 1, &ctx)));
    assert!(b.invert_even().unwrap().equals_exact(&a));
}

#[test]
fn inversion_edge_cases() {
    let ctx = context(1, 2);
    let id = SuperMatrix::identity(2, 1, &ctx);
    assert!(id.invert_even().unwrap().equals_exact(&id));
    let singular = two_by_two(
        &ctx,
        [[e(&ctx, 1) * e(&ctx, 2), e(&ctx, 1)], [e(&ctx, 2), int(&ctx, 1)]],
    );
    let err = singular.invert_even().unwrap_err().to_string();
    assert!(err.contains("det = 0"), "{err}");
}

#[test]
fn odd_unit_is_absorbed_on_both_sides() {
    let ctx = context(1, 2);
    let u = diag(&ctx, &[Entry::One, Entry::OddUnit]);
    let z = two_by_two(&ctx, [[x(&ctx, 1), e(&ctx, 2)], [e(&ctx, 2), x(&ctx, 1)]]);
    let right = z.matmul(&u).unwrap();
    let left = u.matmul(&z).unwrap();
    assert_eq!(right.element(0, 1).unwrap(), e(&ctx, 2).nu().unwrap());
    assert_eq!(left.element(1, 0).unwrap(), e(&ctx, 2).nu().unwrap());
    for m in [&right, &left] {
        for r in 0..2 {
            for c in 0..2 {
                assert!(!m.get(r, c).is_odd_unit());
            }
        }
    }
}

/// `(1·1ν)·e1 = ν(1)·e1 = 0` while `1·(1ν·e1) = ν(e1) = 1`: the toggle
/// involution is not linear, so products through `1ν` do not associate.
#[test]
fn odd_unit_products_do_not_associate() {
    let ctx = context(0, 1);
    let shape = SuperShape::square(0, 1);
    let one = SuperMatrix::from_entries(shape, &ctx, vec![Entry::One]).unwrap();
    let u = SuperMatrix::from_entries(shape, &ctx, vec![Entry::OddUnit]).unwrap();
    let w = SuperMatrix::from_entries(shape, &ctx, vec![Entry::Value(e(&ctx, 1))]).unwrap();
    let lhs = one.matmul(&u).unwrap().matmul(&w).unwrap();
    let rhs = one.matmul(&u.matmul(&w).unwrap()).unwrap();
    assert!(lhs.get(0, 0).is_zero());
    assert_eq!(rhs.element(0, 0).unwrap(), int(&ctx, 1));
}

#[test]
fn standard_format_validation() {
    let ctx = context(1, 1);
    assert!(SuperMatrix::identity(2, 1, &ctx).validate_standard().is_empty());
    let mut m = SuperMatrix::identity(2, 1, &ctx);
    m.set(0, 1, Entry::Value(e(&ctx, 1)));
    let v = m.validate_standard();
    assert_eq!(v.len(), 1);
    assert_eq!((v[0].row, v[0].col), (1, 2));
    for s in [
        GrassShape::new(1, 1, 2, 2).unwrap(),
        GrassShape::new(2, 2, 3, 3).unwrap(),
    ] {
        for index in enumerate_charts(&s) {
            assert!(
                build_chart(&s, &index).unwrap().matrix.validate_standard().is_empty(),
                "{s} {index}"
            );
        }
    }
}

#[test]
fn minors_of_identity() {
    let ctx = context(1, 1);
    let s = GrassShape::new(2, 1, 3, 2).unwrap();
    let index = MultiIndex::new(&s, vec![1, 2, 3]).unwrap();
    let chart = build_chart(&s, &index).unwrap();
    let m = chart.matrix.minor(index.as_slice()).unwrap();
    assert!(m.equals_exact(&pseudo_unit(index.as_slice(), s.ambient(), chart.context()).unwrap()));
    assert!(SuperMatrix::identity(2, 1, &ctx)
        .minor(&[1, 2, 3])
        .unwrap()
        .equals_exact(&SuperMatrix::identity(2, 1, &ctx)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matmul_associates_without_odd_units(seed in any::<u64>(), k in 0usize..3, l in 0usize..3, m in 1usize..3, n in 0usize..2) {
        let ctx = context(2, 3);
        let mut r = rng(seed);
        let a = random_standard(&mut r, &ctx, SuperShape::new(k, l, m, n));
        let b = random_standard(&mut r, &ctx, SuperShape::new(m, n, 2, 1));
        let c = random_standard(&mut r, &ctx, SuperShape::new(2, 1, 1, 1));
        let lhs = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let rhs = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        prop_assert!(lhs.equals_exact(&rhs));
    }

    #[test]
    fn standard_products_stay_standard(seed in any::<u64>(), k in 0usize..3, l in 0usize..3) {
        let ctx = context(2, 3);
        let mut r = rng(seed);
        let a = random_standard(&mut r, &ctx, SuperShape::new(k, l, 2, 1));
        let b = random_standard(&mut r, &ctx, SuperShape::new(2, 1, 1, 2));
        prop_assert!(a.matmul(&b).unwrap().is_standard());
    }

    #[test]
    fn minor_commutes_with_left_multiplication(seed in any::<u64>()) {
        let ctx = context(2, 3);
        let mut r = rng(seed);
        let a = random_standard(&mut r, &ctx, SuperShape::new(2, 1, 3, 2));
        let b = random_standard(&mut r, &ctx, SuperShape::new(1, 1, 2, 1));
        let index = [1, 3, 5];
        let lhs = b.matmul(&a).unwrap().minor(&index).unwrap();
        let rhs = b.matmul(&a.minor(&index).unwrap()).unwrap();
        prop_assert!(lhs.equals_exact(&rhs));
    }

    #[test]
    fn pseudo_units_square_to_identity(k in 0usize..3, l in 0usize..3, extra_m in 1usize..3, extra_n in 1usize..3) {
        prop_assume!(k + l > 0);
        let ctx = context(0, 1);
        let s = GrassShape::new(k, l, k + extra_m, l + extra_n).unwrap();
        for index in enumerate_charts(&s) {
            let id = pseudo_unit(index.as_slice(), s.ambient(), &ctx).unwrap();
            prop_assert!(id.matmul(&id).unwrap().equals_exact(&SuperMatrix::identity(k, l, &ctx)));
        }
    }

    #[test]
    fn inverse_is_two_sided_and_involutive(seed in any::<u64>(), k in 0usize..3, l in 0usize..3) {
        prop_assume!(k + l > 0);
        let ctx = context(2, 3);
        let mut r = rng(seed);
        let m = random_invertible_standard(&mut r, &ctx, k, l);
        let inv = m.invert_even().unwrap();
        let id = SuperMatrix::identity(k, l, &ctx);
        prop_assert!(m.matmul(&inv).unwrap().equals_exact(&id));
        prop_assert!(inv.matmul(&m).unwrap().equals_exact(&id));
        prop_assert!(inv.invert_even().unwrap().equals_exact(&m));
    }
}
