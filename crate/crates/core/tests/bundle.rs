mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use nugrass_core::atlas::{build_chart, enumerate_charts, transition, GrassShape, MultiIndex};
use nugrass_core::bundle::{
    gamma_transition, pullback_transitions, scalar_action, validate_bundle, BasisVector, BundleDescription,
    BundleIssue, GammaAtlas, Section,
};
use nugrass_core::superalgebra::{GrassmannElement, Parity, Substitution};
use nugrass_core::supermatrix::{Entry, SuperMatrix, SuperShape};

fn shape(k: usize, l: usize, m: usize, n: usize) -> GrassShape {
    GrassShape::new(k, l, m, n).unwrap()
}

#[test]
fn scalar_action_sign_rule() {
    let ctx = context(1, 2);
    let f1 = Section::basis(1, 1, &ctx, BasisVector::F(1));
    let e1 = Section::basis(1, 1, &ctx, BasisVector::E(1));
    assert!(scalar_action(&int(&ctx, 1), &f1).unwrap().equals_exact(&f1));
    let odd = scalar_action(&e(&ctx, 1), &f1).unwrap();
    assert_eq!(odd.coefficient(BasisVector::F(1)), &-e(&ctx, 1));
    assert_eq!(odd.parity(), Parity::Even);
    let even = scalar_action(&e(&ctx, 1), &e1).unwrap();
    assert_eq!(even.coefficient(BasisVector::E(1)), &e(&ctx, 1));
    assert!(scalar_action(&(int(&ctx, 1) + e(&ctx, 1)), &f1).is_err());
}

#[test]
fn gamma_examples() {
    let s = shape(1, 1, 2, 2);
    let i = build_chart(&s, &MultiIndex::new(&s, vec![1, 3]).unwrap()).unwrap();
    let j = build_chart(&s, &MultiIndex::new(&s, vec![2, 3]).unwrap()).unwrap();
    let same = gamma_transition(&i, &i).unwrap();
    assert!(same.m.equals_exact(&SuperMatrix::identity(1, 1, i.context())));
    let section = Section::from_coefficients(1, 1, vec![x(i.context(), 1), e(i.context(), 2)]).unwrap();
    assert!(same.apply(&section).unwrap().equals_exact(&section));

    let g = gamma_transition(&i, &j).unwrap();
    let ctx = i.context();
    let inv = x(ctx, 1).invert().unwrap();
    let want = SuperMatrix::from_elements(
        SuperShape::square(1, 1),
        ctx,
        vec![vec![inv.clone(), int(ctx, 0)], vec![-(&e(ctx, 1) * &inv), int(ctx, 1)]],
    )
    .unwrap();
    assert!(g.m.equals_exact(&want));
    assert_eq!(
        g.basis_image(BasisVector::E(1)).coefficient(BasisVector::F(1)),
        &-(&e(ctx, 1) * &inv)
    );
}

#[test]
fn gamma_matrices_are_standard() {
    for s in [shape(1, 1, 2, 2), shape(2, 2, 3, 3)] {
        let gamma = GammaAtlas::build(&s).unwrap();
        let n = gamma.atlas.charts.len();
        for a in 0..n {
            for b in 0..n {
                if let Ok(t) = gamma.transition(a, b) {
                    assert!(t.m.is_standard(), "{} {}", t.source, t.target);
                }
            }
        }
    }
}

/// Away from `1ν` entries, `m_IJ·φ*_IJ(m_JI)` is the identity.
#[test]
fn gamma_pair_condition_on_plain_charts() {
    let s = shape(2, 2, 3, 3);
    let charts: Vec<_> = enumerate_charts(&s)
        .iter()
        .map(|i| build_chart(&s, i).unwrap())
        .filter(|c| !c.slots.iter().any(|x| x.wrapped))
        .collect();
    let mut checked = 0;
    for a in &charts {
        for b in &charts {
            let (Ok(ab), Ok(ba)) = (gamma_transition(a, b), gamma_transition(b, a)) else {
                continue;
            };
            let pulled = ba.m.substitute(&ab.base.map).unwrap();
            let id = SuperMatrix::identity(2, 2, a.context());
            assert!(
                ab.m.matmul(&pulled).unwrap().equals_exact(&id),
                "{} {}",
                a.index,
                b.index
            );
            checked += 1;
        }
    }
    assert!(checked > charts.len());
}

fn unipotent(ctx: &std::sync::Arc<nugrass_core::superalgebra::AlgebraContext>) -> SuperMatrix {
    SuperMatrix::from_entries(
        SuperShape::square(1, 1),
        ctx,
        vec![Entry::One, Entry::Value(e(ctx, 1)), Entry::Zero, Entry::One],
    )
    .unwrap()
}

#[test]
fn bundle_validation_examples() {
    let ctx = context(1, 2);
    assert!(validate_bundle(&BundleDescription::trivial(3, 2, 1, &ctx)).is_valid());

    let mut d = BundleDescription::new(2, 1, 1, &ctx);
    d.insert(1, 2, unipotent(&ctx));
    d.complete().unwrap();
    assert!(validate_bundle(&d).is_valid());

    let mut broken = BundleDescription::trivial(2, 1, 1, &ctx);
    broken.insert(1, 2, unipotent(&ctx));
    let issues = validate_bundle(&broken).issues;
    assert!(
        issues.iter().any(|i| matches!(
            i,
            BundleIssue::Cocycle {
                alpha: 1,
                beta: 2,
                gamma: 1,
                ..
            }
        )),
        "{issues:?}"
    );

    let mut missing = BundleDescription::new(2, 1, 1, &ctx);
    missing.insert(1, 1, SuperMatrix::identity(1, 1, &ctx));
    assert!(validate_bundle(&missing)
        .issues
        .contains(&BundleIssue::Missing { alpha: 1, beta: 2 }));

    let mut odd_diag = BundleDescription::trivial(2, 1, 1, &ctx);
    let mut bad = SuperMatrix::identity(1, 1, &ctx);
    bad.set(0, 0, Entry::Value(e(&ctx, 1)));
    odd_diag.insert(1, 2, bad);
    let issues = validate_bundle(&odd_diag).issues;
    assert!(issues.iter().any(|i| matches!(
        i,
        BundleIssue::NotStandard {
            alpha: 1,
            beta: 2,
            row: 1,
            col: 1
        }
    )));
}

#[test]
fn identity_pullback_keeps_transitions() {
    let s = shape(1, 1, 2, 2);
    let gamma = GammaAtlas::build(&s).unwrap();
    let sigma: BTreeMap<MultiIndex, Substitution> = gamma
        .atlas
        .charts
        .iter()
        .map(|c| (c.index.clone(), Substitution::identity(c.context())))
        .collect();
    let pulled = pullback_transitions(&gamma, &sigma).unwrap();
    for (a, ca) in gamma.atlas.charts.iter().enumerate() {
        for (b, cb) in gamma.atlas.charts.iter().enumerate() {
            match gamma.transition(a, b) {
                Ok(t) => assert!(pulled.get(&ca.index, &cb.index).unwrap().equals_exact(&t.m)),
                Err(_) => assert!(pulled.get(&ca.index, &cb.index).is_none()),
            }
        }
    }
}

#[test]
fn pullback_preserves_rank_and_format() {
    let s = shape(1, 1, 2, 2);
    let gamma = GammaAtlas::build(&s).unwrap();
    let base = context(2, 2);
    let mut r = rng(4);
    let sigma: BTreeMap<MultiIndex, Substitution> = gamma
        .atlas
        .charts
        .iter()
        .map(|c| {
            let mut sub = Substitution::new(c.context(), &base);
            for v in 1..=s.p() {
                let z = random_invertible(&mut r, &base);
                sub.assign(&format!("x{v}"), z).unwrap();
            }
            for j in 1..=s.q() {
                sub.assign_odd(j, random_homogeneous(&mut r, &base, Parity::Odd, false))
                    .unwrap();
            }
            (c.index.clone(), sub)
        })
        .collect();
    let pulled = pullback_transitions(&gamma, &sigma).unwrap();
    assert!(!pulled.transitions.is_empty());
    for m in pulled.transitions.values() {
        assert_eq!(m.shape(), SuperShape::square(1, 1));
        assert!(m.is_standard());
    }
}

/// A transition `ψ*_IJ` is additive and `φ*`-semilinear: `ψ(z·s) = φ*(z)·ψ(s)`.
#[test]
fn gamma_action_is_semilinear() {
    let s = shape(1, 1, 2, 2);
    let i = build_chart(&s, &MultiIndex::new(&s, vec![1, 3]).unwrap()).unwrap();
    let j = build_chart(&s, &MultiIndex::new(&s, vec![2, 4]).unwrap()).unwrap();
    let g = gamma_transition(&i, &j).unwrap();
    let ctx = j.context();
    let mut r = rng(12);
    for _ in 0..20 {
        let sec = Section::from_coefficients(
            1,
            1,
            vec![
                random_homogeneous(&mut r, ctx, Parity::Even, false),
                random_homogeneous(&mut r, ctx, Parity::Odd, false),
            ],
        )
        .unwrap();
        let parity = if r.gen_bool(0.5) { Parity::Odd } else { Parity::Even };
        let z = random_homogeneous(&mut r, ctx, parity, false);
        let lhs = g.apply(&scalar_action(&z, &sec).unwrap()).unwrap();
        let rhs = scalar_action(&g.base.map.apply(&z).unwrap(), &g.apply(&sec).unwrap()).unwrap();
        assert!(lhs.equals_exact(&rhs));
    }
    assert!(transition(&i, &j).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn module_action_associates(seed in any::<u64>(), pz in any::<bool>(), pw in any::<bool>()) {
        let ctx = context(2, 4);
        let mut r = rng(seed);
        let par = |b| if b { Parity::Odd } else { Parity::Even };
        let z = random_homogeneous(&mut r, &ctx, par(pz), true);
        let w = random_homogeneous(&mut r, &ctx, par(pw), true);
        let s = Section::from_coefficients(2, 1, vec![
            random_homogeneous(&mut r, &ctx, Parity::Even, false),
            random_homogeneous(&mut r, &ctx, Parity::Odd, false),
            random_homogeneous(&mut r, &ctx, Parity::Odd, false),
        ]).unwrap();
        let lhs = scalar_action(&(&z * &w), &s).unwrap();
        let rhs = scalar_action(&z, &scalar_action(&w, &s).unwrap()).unwrap();
        prop_assert!(lhs.equals_exact(&rhs));
    }

    /// Seeded cocycles validate; corrupting one off-diagonal transition is
    /// reported at a triple that uses it.
    #[test]
    fn validation_detects_corruption(seed in any::<u64>(), t in 2usize..4, k in 0usize..3, l in 0usize..2) {
        prop_assume!(k + l > 0);
        let ctx = context(2, 2);
        let good = BundleDescription::random(seed, t, k, l, &ctx).unwrap();
        prop_assert!(validate_bundle(&good).is_valid());
        let mut bad = good.clone();
        let mut m = bad.get(1, 2).unwrap().clone();
        let c = (k + l) - 1;
        let z = m.element(0, c).unwrap();
        let bump = if SuperShape::square(k, l).block_parity(0, c) == Parity::Odd { e(&ctx, 2) } else { x(&ctx, 1) };
        m.set(0, c, Entry::Value(&z + &bump));
        bad.insert(1, 2, m);
        let issues = validate_bundle(&bad).issues;
        prop_assert!(issues.iter().any(|i| matches!(i,
            BundleIssue::Cocycle { alpha, beta, gamma, .. } if [*alpha, *beta, *gamma].windows(2).any(|w| w == [1, 2]))),
            "{:?}", issues);
    }
}

#[test]
fn random_sections_keep_parity() {
    let ctx = context(1, 3);
    let s = Section::from_coefficients(1, 1, vec![x(&ctx, 1), e(&ctx, 1)]).unwrap();
    assert_eq!(s.parity(), Parity::Even);
    let t = Section::from_coefficients(1, 1, vec![e(&ctx, 2), x(&ctx, 1)]).unwrap();
    assert_eq!(t.parity(), Parity::Odd);
    let z: GrassmannElement = e(&ctx, 3);
    assert_eq!(scalar_action(&z, &s).unwrap().parity(), Parity::Odd);
}
