//! Probabilistic identity testing by evaluation over GF(2^61 - 1).
//!
//! Even symbols are replaced by seeded random field elements while the odd
//! generators stay symbolic, so an element evaluates to a dense vector of
//! `2^q` field coefficients. Two elements are declared equal when those
//! vectors agree at every sampled point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::context::AlgebraContext;
use super::element::{GrassmannElement, OddMonomial};
use super::substitute::{EvalTarget, Evaluator};
use super::AlgebraError;

/// The Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

/// Default number of evaluation points per identity.
pub const DEFAULT_TRIALS: usize = 3;

#[inline]
pub fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64) -> u64 {
    let t = a as u128 * b as u128;
    let lo = (t as u64) & MODULUS;
    let hi = (t >> 61) as u64;
    add_mod(lo, hi)
}

pub fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64) -> Option<u64> {
    (a != 0).then(|| pow_mod(a, MODULUS - 2))
}

/// A square root, when one exists (`p ≡ 3 mod 4`).
pub fn sqrt_mod(a: u64) -> Option<u64> {
    let r = pow_mod(a, (MODULUS + 1) / 4);
    (mul_mod(r, r) == a).then_some(r)
}

fn bigint_mod(n: &BigInt) -> u64 {
    let m = BigInt::from(MODULUS);
    let r = n.mod_floor(&m);
    r.to_u64().expect("reduced below modulus")
}

/// Image of a rational number, `None` if its denominator vanishes mod p.
pub fn rational_mod(q: &BigRational) -> Option<u64> {
    let num = bigint_mod(q.numer());
    let den = bigint_mod(&q.denom().abs());
    let v = mul_mod(num, inv_mod(den)?);
    Some(if q.denom().is_negative() { sub_mod(0, v) } else { v })
}

/// A Grassmann element over GF(p) in dense form: `coeffs[mask]` is the
/// coefficient of the odd monomial with bit mask `mask`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModElement {
    pub coeffs: Vec<u64>,
}

impl ModElement {
    pub fn body(&self) -> u64 {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Largest odd generator count supported by dense modular elements.
pub const MAX_ODD: usize = 20;

/// The Grassmann algebra on `q` generators over GF(p).
#[derive(Clone, Copy, Debug)]
pub struct ModAlgebra {
    pub odd_count: usize,
}

impl ModAlgebra {
    pub fn new(odd_count: usize) -> Self {
        assert!(odd_count <= MAX_ODD, "dense modular elements need q <= {MAX_ODD}");
        ModAlgebra { odd_count }
    }

    fn len(&self) -> usize {
        1 << self.odd_count
    }

    pub fn scalar(&self, c: u64) -> ModElement {
        let mut coeffs = vec![0; self.len()];
        coeffs[0] = c;
        ModElement { coeffs }
    }

    /// The generator `e_j` (one-based).
    pub fn generator(&self, j: usize) -> ModElement {
        let mut coeffs = vec![0; self.len()];
        coeffs[1 << (j - 1)] = 1;
        ModElement { coeffs }
    }

    pub fn sub(&self, a: &ModElement, b: &ModElement) -> ModElement {
        ModElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| sub_mod(x, y)).collect(),
        }
    }

    pub fn scale(&self, a: &ModElement, c: u64) -> ModElement {
        ModElement {
            coeffs: a.coeffs.iter().map(|&x| mul_mod(x, c)).collect(),
        }
    }

    /// The odd involution on dense elements, toggling generator `d`.
    pub fn nu(&self, a: &ModElement, d: usize) -> ModElement {
        let bit = 1 << (d - 1);
        let mut coeffs = vec![0; self.len()];
        for (m, &c) in a.coeffs.iter().enumerate() {
            coeffs[m ^ bit] = c;
        }
        ModElement { coeffs }
    }
}

impl EvalTarget for ModAlgebra {
    type Elem = ModElement;

    fn zero(&self) -> ModElement {
        self.scalar(0)
    }

    fn one(&self) -> ModElement {
        self.scalar(1)
    }

    fn rational(&self, c: &BigRational) -> Option<ModElement> {
        rational_mod(c).map(|v| self.scalar(v))
    }

    fn add(&self, a: &ModElement, b: &ModElement) -> ModElement {
        ModElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| add_mod(x, y)).collect(),
        }
    }

    fn mul(&self, a: &ModElement, b: &ModElement) -> ModElement {
        let mut out = vec![0u64; self.len()];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                if let Some((sign, m)) = OddMonomial(i as u64).mul(OddMonomial(j as u64)) {
                    let v = mul_mod(x, y);
                    let slot = &mut out[m.0 as usize];
                    *slot = if sign > 0 { add_mod(*slot, v) } else { sub_mod(*slot, v) };
                }
            }
        }
        ModElement { coeffs: out }
    }

    fn invert(&self, a: &ModElement) -> Option<ModElement> {
        let body_inv = inv_mod(a.body())?;
        let mut soul = a.clone();
        soul.coeffs[0] = 0;
        let step = self.scale(&soul, sub_mod(0, body_inv));
        let mut acc = self.one();
        let mut power = self.one();
        for _ in 0..self.odd_count {
            power = self.mul(&power, &step);
            if power.is_zero() {
                break;
            }
            acc = self.add(&acc, &power);
        }
        Some(self.scale(&acc, body_inv))
    }
}

/// Deterministic random source for evaluation points. Independent tasks get
/// independent streams of the same seed via [`PointSampler::split`].
pub struct PointSampler {
    rng: ChaCha8Rng,
}

impl PointSampler {
    pub fn new(seed: u64) -> Self {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A sampler on its own stream, for task number `stream`.
    pub fn split(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        PointSampler { rng }
    }

    pub fn field_element(&mut self) -> u64 {
        self.rng.gen_range(0..MODULUS)
    }

    /// Values for every even symbol consistent with the registered partition
    /// relation and the square rewrites, or `None` when a constrained symbol's
    /// square has no root at this draw.
    pub fn point(&mut self, ctx: &AlgebraContext) -> Option<Vec<u64>> {
        let n = ctx.even_count();
        let mut values = vec![0u64; n];
        for v in 0..n {
            if !ctx.is_constrained(v) {
                values[v] = self.field_element();
            }
        }
        if let Some((&last, rest)) = ctx.sum_to_one_symbols().split_last() {
            let mut acc = 1;
            for &v in rest {
                acc = sub_mod(acc, values[v]);
            }
            values[last] = acc;
        }
        for (v, sym) in ctx.even_symbols().iter().enumerate() {
            if let Some(square) = &sym.square {
                let alg = ModAlgebra::new(0);
                let images: Vec<Option<ModElement>> = values.iter().map(|&x| Some(alg.scalar(x))).collect();
                let target = Evaluator::new(&alg, &images, &[]).poly(square).ok()?.body();
                let root = sqrt_mod(target)?;
                values[v] = if self.rng.gen::<bool>() { root } else { sub_mod(0, root) };
            }
        }
        Some(values)
    }
}

/// Evaluates `z` with even symbols at `point` and odd generators symbolic.
pub fn evaluate_at(z: &GrassmannElement, point: &[u64]) -> Option<ModElement> {
    let ctx = z.context();
    let alg = ModAlgebra::new(ctx.odd_count());
    let even: Vec<Option<ModElement>> = point.iter().map(|&x| Some(alg.scalar(x))).collect();
    let odd: Vec<Option<ModElement>> = (1..=ctx.odd_count()).map(|j| Some(alg.generator(j))).collect();
    Evaluator::new(&alg, &even, &odd).element(z).ok()
}

/// Seeded randomized comparison of two elements of one algebra.
///
/// Points at which either side has a vanishing denominator are skipped; the
/// call fails when `trials` usable points cannot be found within the retry
/// budget.
pub fn equals_random(
    a: &GrassmannElement,
    b: &GrassmannElement,
    seed: u64,
    trials: usize,
) -> Result<bool, AlgebraError> {
    if !super::element::same_context(a.context(), b.context()) {
        return Err(AlgebraError::ContextMismatch);
    }
    let ctx = a.context();
    if ctx.odd_count() > MAX_ODD {
        return Err(AlgebraError::InvalidContext(format!(
            "modular evaluation supports at most {MAX_ODD} odd generators"
        )));
    }
    let mut sampler = PointSampler::new(seed);
    let budget = 32 * trials.max(1) + 64;
    let mut usable = 0;
    for _ in 0..budget {
        if usable == trials {
            break;
        }
        let Some(point) = sampler.point(ctx) else {
            continue;
        };
        let (Some(va), Some(vb)) = (evaluate_at(a, &point), evaluate_at(b, &point)) else {
            continue;
        };
        if va != vb {
            return Ok(false);
        }
        usable += 1;
    }
    if usable < trials {
        return Err(AlgebraError::InsufficientPoints {
            wanted: trials,
            found: usable,
        });
    }
    Ok(true)
}
