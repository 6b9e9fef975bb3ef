mod common;

use proptest::prelude::*;

use common::*;
use nugrass_core::superalgebra::{
    equals_random, substitute, AlgebraContext, AlgebraError, GrassmannElement, OddMonomial, Parity, Substitution,
};

fn e12(ctx: &std::sync::Arc<AlgebraContext>) -> GrassmannElement {
    let (sign, mono) = OddMonomial::from_indices(&[1, 2]).unwrap();
    assert_eq!(sign, 1);
    GrassmannElement::from_terms(ctx, vec![(mono, GrassmannElement::one(ctx).body())])
}

#[test]
fn odd_generators_anticommute() {
    let ctx = context(1, 2);
    assert_eq!(e(&ctx, 1) * e(&ctx, 2), e12(&ctx));
    assert_eq!(e(&ctx, 2) * e(&ctx, 1), -e12(&ctx));
    assert!((e(&ctx, 1) * e(&ctx, 1)).is_zero());
}

#[test]
fn nilpotent_cross_terms_vanish() {
    let ctx = context(1, 2);
    let n = e(&ctx, 1) * e(&ctx, 2);
    let prod = (x(&ctx, 1) + n.clone()) * (x(&ctx, 1) - n);
    assert_eq!(prod, x(&ctx, 1) * x(&ctx, 1));
}

#[test]
fn constrained_square_root_rewrites() {
    let mut b = AlgebraContext::builder();
    b.even("rho");
    b.sqrt_of("s", "rho").unwrap();
    b.odd_count(2);
    let ctx = b.build().unwrap();
    let s = GrassmannElement::symbol(&ctx, "s").unwrap();
    let rho = GrassmannElement::symbol(&ctx, "rho").unwrap();
    let lhs = (&s * &e(&ctx, 1)) * (&s * &e(&ctx, 2));
    assert_eq!(lhs, &rho * &e12(&ctx));
    let rhs = (&e(&ctx, 1) * &s) * (&e(&ctx, 2) * &s);
    assert_eq!(lhs, rhs);
    assert_eq!(&(&s * &s) * &s, &s * &(&s * &s));
    assert_eq!(&(&s * &s) * &s, &rho * &s);
}

#[test]
fn partition_of_unity_is_eliminated_in_comparisons() {
    let mut b = AlgebraContext::builder();
    b.even("rho1");
    b.even("rho2");
    b.sum_to_one(&["rho1", "rho2"]);
    let ctx = b.build().unwrap();
    let r1 = GrassmannElement::symbol(&ctx, "rho1").unwrap();
    let r2 = GrassmannElement::symbol(&ctx, "rho2").unwrap();
    assert_eq!(&r1 + &r2, GrassmannElement::one(&ctx));
    assert_ne!(r1, r2);
}

#[test]
fn parities() {
    let ctx = context(1, 2);
    assert_eq!(x(&ctx, 1).parity(), Parity::Even);
    assert_eq!((x(&ctx, 1) * e(&ctx, 1)).parity(), Parity::Odd);
    assert_eq!((int(&ctx, 1) + e(&ctx, 1)).parity(), Parity::Mixed);
    assert_eq!(GrassmannElement::zero(&ctx).parity(), Parity::Zero);
}

#[test]
fn nu_examples() {
    let ctx = context(1, 2);
    assert_eq!(x(&ctx, 1).nu().unwrap(), x(&ctx, 1) * e(&ctx, 1));
    let z = x(&ctx, 1) * e(&ctx, 2);
    assert_eq!(z.nu().unwrap().nu().unwrap(), z);
    assert_eq!(e(&ctx, 1).nu().unwrap(), int(&ctx, 1));
    let even_only = context(1, 0);
    assert!(matches!(x(&even_only, 1).nu(), Err(AlgebraError::NoOddGenerators)));
}

#[test]
fn inverse_examples() {
    let ctx = context(1, 2);
    let n = e(&ctx, 1) * e(&ctx, 2);
    assert_eq!((int(&ctx, 1) + n.clone()).invert().unwrap(), int(&ctx, 1) - n.clone());
    let x1 = x(&ctx, 1);
    let inv = x1.invert().unwrap();
    assert_eq!(&inv * &x1, int(&ctx, 1));
    let z = &x1 + &n;
    let expected = &inv - &(&n * &(&inv * &inv));
    assert_eq!(z.invert().unwrap(), expected);
    assert_eq!(&z * &expected, int(&ctx, 1));
    assert!(e(&ctx, 1).invert().is_err());
}

#[test]
fn exact_equality_examples() {
    let ctx = context(2, 2);
    let x1 = x(&ctx, 1);
    let num = &(&x1 * &x1) - &int(&ctx, 1);
    let q = &num * &(&x1 - &int(&ctx, 1)).invert().unwrap();
    assert!(q.equals_exact(&(&x1 + &int(&ctx, 1))));
    assert!(e12(&ctx).equals_exact(&-(e(&ctx, 2) * e(&ctx, 1))));
    assert!(!x1.invert().unwrap().equals_exact(&x(&ctx, 2).invert().unwrap()));
}

#[test]
fn random_equality_examples() {
    let ctx = context(2, 2);
    let x1 = x(&ctx, 1);
    let x2 = x(&ctx, 2);
    for seed in 0..5 {
        assert!(equals_random(&x1, &x1, seed, 3).unwrap());
        assert!(equals_random(&x1, &(&x1 + &(&x2 - &x2)), seed, 3).unwrap());
        assert!(!equals_random(&x1, &(&x1 + &int(&ctx, 1)), seed, 3).unwrap());
    }
}

#[test]
fn substitution_examples() {
    let src = context(1, 1);
    let dst = AlgebraContext::with_symbols(&["y1"], 1).unwrap();
    let y1 = GrassmannElement::symbol(&dst, "y1").unwrap();
    let f1 = GrassmannElement::odd_generator(&dst, 1);
    let mut s = Substitution::new(&src, &dst);
    s.assign("x1", y1.invert().unwrap()).unwrap();
    s.assign_odd(1, -(&f1 * &y1.invert().unwrap())).unwrap();
    let got = substitute(&(x(&src, 1) * e(&src, 1)), &s).unwrap();
    assert_eq!(got, -(&f1 * &(&y1 * &y1).invert().unwrap()));

    let z = x(&src, 1) * e(&src, 1) + int(&src, 3);
    assert_eq!(substitute(&z, &Substitution::identity(&src)).unwrap(), z);

    let mut bad = Substitution::new(&src, &src);
    assert!(bad.assign_odd(1, x(&src, 1)).is_err());
}

#[test]
fn substitution_composes_inner_first() {
    let ctx = context(2, 1);
    let mut a = Substitution::identity(&ctx);
    a.assign("x1", x(&ctx, 1) + x(&ctx, 2)).unwrap();
    let mut b = Substitution::identity(&ctx);
    b.assign("x2", x(&ctx, 2) * x(&ctx, 2)).unwrap();
    let ab = a.after(&b).unwrap();
    let z = x(&ctx, 1) * e(&ctx, 1);
    assert_eq!(ab.apply(&z).unwrap(), a.apply(&b.apply(&z).unwrap()).unwrap());
}

fn parity_of(bit: bool) -> Parity {
    if bit {
        Parity::Odd
    } else {
        Parity::Even
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn supercommutative(seed in any::<u64>(), pa in any::<bool>(), pb in any::<bool>()) {
        let ctx = context(2, 4);
        let mut r = rng(seed);
        let a = random_homogeneous(&mut r, &ctx, parity_of(pa), true);
        let b = random_homogeneous(&mut r, &ctx, parity_of(pb), true);
        let sign = if pa && pb { -1 } else { 1 };
        prop_assert_eq!(&a * &b, &int(&ctx, sign) * &(&b * &a));
    }

    #[test]
    fn associative_and_distributive(seed in any::<u64>()) {
        let ctx = context(2, 4);
        let mut r = rng(seed);
        let p = |r: &mut _| if rand::Rng::gen_bool(r, 0.5) { Parity::Odd } else { Parity::Even };
        let (pa, pb, pc) = (p(&mut r), p(&mut r), p(&mut r));
        let a = random_homogeneous(&mut r, &ctx, pa, true);
        let b = random_homogeneous(&mut r, &ctx, pb, true);
        let c = random_homogeneous(&mut r, &ctx, pc, true);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn nu_is_an_involution_swapping_parity(seed in any::<u64>(), odd in any::<bool>()) {
        let ctx = context(2, 4);
        let mut r = rng(seed);
        let z = random_homogeneous(&mut r, &ctx, parity_of(odd), true);
        let f = random_homogeneous(&mut r, &ctx, Parity::Even, true);
        let f = GrassmannElement::from_coefficient(&ctx, f.body());
        prop_assert_eq!(z.nu().unwrap().nu().unwrap(), z.clone());
        if !z.is_zero() {
            prop_assert_eq!(z.nu().unwrap().parity(), parity_of(!odd));
        }
        prop_assert_eq!((&f * &z).nu().unwrap(), &f * &z.nu().unwrap());
    }

    #[test]
    fn inverse_is_two_sided_and_involutive(seed in any::<u64>()) {
        let ctx = context(2, 4);
        let mut r = rng(seed);
        let z = random_invertible(&mut r, &ctx);
        let inv = z.invert().unwrap();
        prop_assert_eq!(&z * &inv, int(&ctx, 1));
        prop_assert_eq!(&inv * &z, int(&ctx, 1));
        prop_assert_eq!(inv.invert().unwrap(), z);
    }

    #[test]
    fn homogeneous_terms_share_parity(seed in any::<u64>(), odd in any::<bool>()) {
        let ctx = context(2, 4);
        let mut r = rng(seed);
        let z = random_homogeneous(&mut r, &ctx, parity_of(odd), true);
        for (mono, c) in z.terms() {
            prop_assert_eq!(mono.degree() % 2 == 1, odd);
            prop_assert!(!c.is_zero());
        }
        let (even, oddp) = z.split_parity();
        prop_assert_eq!(&even + &oddp, z.clone());
        prop_assert_eq!(GrassmannElement::from_coefficient(&ctx, z.body()) + z.soul(), z);
    }

    #[test]
    fn random_equality_agrees_with_exact(seed in any::<u64>(), same in any::<bool>()) {
        let ctx = context(2, 3);
        let mut r = rng(seed);
        let a = random_homogeneous(&mut r, &ctx, Parity::Even, true);
        let b = random_homogeneous(&mut r, &ctx, Parity::Odd, true);
        let c = random_homogeneous(&mut r, &ctx, Parity::Odd, true);
        let lhs = &a * &(&b + &c);
        let rhs = if same {
            &(&c * &a) + &(&a * &b)
        } else {
            &(&a * &b) + &(&c * &c.nu().unwrap())
        };
        prop_assert_eq!(equals_random(&lhs, &rhs, seed, 3).unwrap(), lhs.equals_exact(&rhs));
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(seed in any::<u64>()) {
        let src = context(2, 2);
        let dst = context(2, 3);
        let mut r = rng(seed);
        let mut s = Substitution::new(&src, &dst);
        for v in 1..=2 {
            s.assign(&format!("x{v}"), random_homogeneous(&mut r, &dst, Parity::Even, false)).unwrap();
        }
        for j in 1..=2 {
            s.assign_odd(j, random_homogeneous(&mut r, &dst, Parity::Odd, false)).unwrap();
        }
        let a = random_homogeneous(&mut r, &src, Parity::Odd, false);
        let b = random_homogeneous(&mut r, &src, Parity::Even, false);
        prop_assert_eq!(s.apply(&(&a * &b)).unwrap(), &s.apply(&a).unwrap() * &s.apply(&b).unwrap());
        prop_assert_eq!(s.apply(&(&a + &b)).unwrap(), &s.apply(&a).unwrap() + &s.apply(&b).unwrap());
    }
}
