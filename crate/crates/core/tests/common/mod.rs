#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nugrass_core::superalgebra::{AlgebraContext, GrassmannElement, Parity};
use nugrass_core::supermatrix::{SuperMatrix, SuperShape};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `x1..x{even}` and `e1..e{odd}`.
pub fn context(even: usize, odd: usize) -> Arc<AlgebraContext> {
    let names: Vec<String> = (1..=even).map(|i| format!("x{i}")).collect();
    AlgebraContext::with_symbols(&names, odd).unwrap()
}

pub fn x(ctx: &Arc<AlgebraContext>, i: usize) -> GrassmannElement {
    GrassmannElement::symbol(ctx, &format!("x{i}")).unwrap()
}

pub fn e(ctx: &Arc<AlgebraContext>, j: usize) -> GrassmannElement {
    GrassmannElement::odd_generator(ctx, j)
}

pub fn int(ctx: &Arc<AlgebraContext>, n: i64) -> GrassmannElement {
    GrassmannElement::from_int(ctx, n)
}

/// Product of generators in the given order; the sign comes from the
/// multiplication itself.
pub fn odd_product(ctx: &Arc<AlgebraContext>, js: &[usize]) -> GrassmannElement {
    js.iter().fold(GrassmannElement::one(ctx), |acc, &j| acc * e(ctx, j))
}

/// A small random polynomial in the even symbols.
pub fn random_even_scalar(rng: &mut impl Rng, ctx: &Arc<AlgebraContext>) -> GrassmannElement {
    let mut z = int(ctx, rng.gen_range(-3..=3));
    for v in 1..=ctx.even_count() {
        if rng.gen_bool(0.5) {
            let mut t = int(ctx, rng.gen_range(-2..=2));
            for _ in 0..rng.gen_range(1..=2) {
                t = t * x(ctx, v);
            }
            z = z + t;
        }
    }
    z
}

/// A homogeneous element built by ring operations: a few terms of the form
/// `scalar · e_{j1}·…·e_{jr}` with `r` of the requested parity, optionally
/// divided by `1 + x1²` style denominators.
pub fn random_homogeneous(
    rng: &mut impl Rng,
    ctx: &Arc<AlgebraContext>,
    parity: Parity,
    fractions: bool,
) -> GrassmannElement {
    let q = ctx.odd_count();
    let want = if parity == Parity::Odd { 1 } else { 0 };
    let mut z = GrassmannElement::zero(ctx);
    for _ in 0..rng.gen_range(1..=3) {
        let mut degree = rng.gen_range(0..=q.min(3));
        if degree % 2 != want {
            if degree == 0 || (degree < q && rng.gen_bool(0.5)) {
                degree += 1;
            } else {
                degree -= 1;
            }
        }
        if degree > q || degree % 2 != want {
            continue;
        }
        let mut js: Vec<usize> = Vec::new();
        while js.len() < degree {
            let j = rng.gen_range(1..=q);
            if !js.contains(&j) {
                js.push(j);
            }
        }
        let mut term = random_even_scalar(rng, ctx) * odd_product(ctx, &js);
        if fractions && ctx.even_count() > 0 && rng.gen_bool(0.3) {
            let v = rng.gen_range(1..=ctx.even_count());
            let den = int(ctx, 1) + x(ctx, v) * x(ctx, v);
            term = term * den.invert().unwrap();
        }
        z = z + term;
    }
    z
}

/// An element with a nonzero constant body, hence invertible.
pub fn random_invertible(rng: &mut impl Rng, ctx: &Arc<AlgebraContext>) -> GrassmannElement {
    let c = if rng.gen_bool(0.5) {
        rng.gen_range(1..=4)
    } else {
        -rng.gen_range(1..=4)
    };
    let z = random_homogeneous(rng, ctx, Parity::Even, true);
    let body = GrassmannElement::from_coefficient(ctx, z.body());
    let mut z = z - body + int(ctx, c);
    if ctx.even_count() > 0 {
        z = z * (int(ctx, 2) + x(ctx, 1) * x(ctx, 1));
    }
    z
}

/// A random standard supermatrix: even diagonal blocks, odd off-diagonal.
pub fn random_standard(rng: &mut impl Rng, ctx: &Arc<AlgebraContext>, shape: SuperShape) -> SuperMatrix {
    let mut rows = Vec::new();
    for r in 0..shape.rows() {
        let mut row = Vec::new();
        for c in 0..shape.cols() {
            let parity = if shape.block_parity(r, c) == Parity::Odd {
                Parity::Odd
            } else {
                Parity::Even
            };
            row.push(random_homogeneous(rng, ctx, parity, false));
        }
        rows.push(row);
    }
    SuperMatrix::from_elements(shape, ctx, rows).unwrap()
}

/// A standard square matrix whose body is an invertible lower-triangular
/// matrix with constant diagonal.
pub fn random_invertible_standard(rng: &mut impl Rng, ctx: &Arc<AlgebraContext>, k: usize, l: usize) -> SuperMatrix {
    let shape = SuperShape::square(k, l);
    let mut rows = Vec::new();
    for r in 0..k + l {
        let mut row = Vec::new();
        for c in 0..k + l {
            let z = if shape.block_parity(r, c) == Parity::Odd {
                random_homogeneous(rng, ctx, Parity::Odd, false)
            } else if r == c {
                random_invertible(rng, ctx)
            } else if c < r {
                random_homogeneous(rng, ctx, Parity::Even, false)
            } else {
                let z = random_homogeneous(rng, ctx, Parity::Even, false);
                let body = GrassmannElement::from_coefficient(ctx, z.body());
                z - body
            };
            row.push(z);
        }
        rows.push(row);
    }
    SuperMatrix::from_elements(shape, ctx, rows).unwrap()
}
