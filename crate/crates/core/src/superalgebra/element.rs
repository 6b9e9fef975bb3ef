use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::context::AlgebraContext;
use super::poly::Poly;
use super::rational::RationalCoefficient;
use super::AlgebraError;

/// A strictly increasing set of odd generator indices, stored as a bit mask
/// (bit `j-1` set means `e_j` is a factor).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OddMonomial(pub u64);

impl OddMonomial {
    pub const EMPTY: OddMonomial = OddMonomial(0);

    /// Builds from one-based indices; `None` if an index repeats.
    pub fn from_indices(indices: &[usize]) -> Option<(i8, OddMonomial)> {
        let mut acc = (1i8, OddMonomial::EMPTY);
        for &j in indices {
            let (s, m) = acc.1.mul(OddMonomial(1 << (j - 1)))?;
            acc = (acc.0 * s, m);
        }
        Some(acc)
    }

    pub fn generator(j: usize) -> OddMonomial {
        OddMonomial(1 << (j - 1))
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// One-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }

    /// Product `e^self * e^other` as `(sign, monomial)`, `None` if they share a generator.
    pub fn mul(self, other: OddMonomial) -> Option<(i8, OddMonomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // each generator of `other` moves left past the larger generators of `self`
        let mut swaps = 0;
        let mut rest = other.0;
        while rest != 0 {
            let b = rest.trailing_zeros();
            swaps += (self.0 >> (b + 1)).count_ones();
            rest &= rest - 1;
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((sign, OddMonomial(self.0 | other.0)))
    }

    pub fn toggle(self, j: usize) -> OddMonomial {
        OddMonomial(self.0 ^ (1 << (j - 1)))
    }
}

/// Parity classification of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
    Zero,
}

impl Parity {
    pub fn of_bit(bit: u32) -> Parity {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `0` for even, `1` for odd; `None` otherwise.
    pub fn bit(self) -> Option<u32> {
        match self {
            Parity::Even => Some(0),
            Parity::Odd => Some(1),
            _ => None,
        }
    }

    /// Whether an element of this parity may sit where `expected` is required.
    /// Zero fits anywhere.
    pub fn fits(self, expected: Parity) -> bool {
        self == Parity::Zero || self == expected
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            p => p,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
            Parity::Zero => "zero",
        };
        f.write_str(s)
    }
}

/// An element of the Grassmann algebra over rational functions in the even symbols.
#[derive(Clone)]
pub struct GrassmannElement {
    ctx: Arc<AlgebraContext>,
    terms: BTreeMap<OddMonomial, RationalCoefficient>,
}

pub(crate) fn same_context(a: &Arc<AlgebraContext>, b: &Arc<AlgebraContext>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GrassmannElement {
    pub fn zero(ctx: &Arc<AlgebraContext>) -> Self {
        GrassmannElement {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<AlgebraContext>) -> Self {
        Self::from_coefficient(ctx, RationalCoefficient::one())
    }

    pub fn from_int(ctx: &Arc<AlgebraContext>, n: i64) -> Self {
        Self::from_poly(ctx, Poly::from_int(n))
    }

    pub fn from_rational(ctx: &Arc<AlgebraContext>, c: BigRational) -> Self {
        Self::from_poly(ctx, Poly::constant(c))
    }

    pub fn from_poly(ctx: &Arc<AlgebraContext>, p: Poly) -> Self {
        Self::from_coefficient(ctx, RationalCoefficient::from_poly(ctx.reduce(p)))
    }

    pub fn from_coefficient(ctx: &Arc<AlgebraContext>, c: RationalCoefficient) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(OddMonomial::EMPTY, c);
        }
        GrassmannElement {
            ctx: ctx.clone(),
            terms,
        }
    }

    /// The even symbol with index `v`.
    pub fn even_symbol(ctx: &Arc<AlgebraContext>, v: usize) -> Self {
        assert!(v < ctx.even_count(), "even symbol index {v} out of range");
        Self::from_poly(ctx, Poly::var(v))
    }

    /// Looks up an even symbol by name.
    pub fn symbol(ctx: &Arc<AlgebraContext>, name: &str) -> Result<Self, AlgebraError> {
        if let Some(v) = ctx.even_index(name) {
            return Ok(Self::even_symbol(ctx, v));
        }
        if let Some(j) = ctx.odd_index(name) {
            return Ok(Self::odd_generator(ctx, j));
        }
        Err(AlgebraError::UnknownSymbol(name.to_string()))
    }

    /// The odd generator `e_j` (one-based).
    pub fn odd_generator(ctx: &Arc<AlgebraContext>, j: usize) -> Self {
        assert!((1..=ctx.odd_count()).contains(&j), "odd generator {j} out of range");
        let mut terms = BTreeMap::new();
        terms.insert(OddMonomial::generator(j), RationalCoefficient::one());
        GrassmannElement {
            ctx: ctx.clone(),
            terms,
        }
    }

    /// Sum of `coefficient * e^mono` terms; repeated monomials are combined.
    pub fn from_terms(
        ctx: &Arc<AlgebraContext>,
        terms: impl IntoIterator<Item = (OddMonomial, RationalCoefficient)>,
    ) -> Self {
        let mut out = Self::zero(ctx);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (OddMonomial, &RationalCoefficient)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, m: OddMonomial) -> Option<&RationalCoefficient> {
        self.terms.get(&m)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exactly `1` after cross-multiplication.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&OddMonomial::EMPTY)
                .is_some_and(|c| c.equals(&RationalCoefficient::one(), &self.ctx, false))
    }

    /// Whether the element has no odd part at all.
    pub fn is_pure_even_scalar(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    fn add_term(&mut self, m: OddMonomial, c: RationalCoefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let sum = old.add(&c, &self.ctx);
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        GrassmannElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    /// Supercommutative product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = ma.mul(*mb) {
                    let c = ca.mul(cb, &self.ctx);
                    let c = if sign < 0 { c.neg() } else { c };
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by a rational function.
    pub fn scale(&self, c: &RationalCoefficient) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, d) in &self.terms {
            out.add_term(*m, d.mul(c, &self.ctx));
        }
        out
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        self.scale(&RationalCoefficient::constant(c.clone()))
    }

    pub fn parity(&self) -> Parity {
        let mut it = self.terms.keys().map(|m| m.degree() % 2);
        let Some(first) = it.next() else {
            return Parity::Zero;
        };
        if it.all(|p| p == first) {
            Parity::of_bit(first)
        } else {
            Parity::Mixed
        }
    }

    /// Coefficient of the empty monomial.
    pub fn body(&self) -> RationalCoefficient {
        self.terms
            .get(&OddMonomial::EMPTY)
            .cloned()
            .unwrap_or_else(RationalCoefficient::zero)
    }

    /// Everything except the body; nilpotent.
    pub fn soul(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&OddMonomial::EMPTY);
        out
    }

    /// Even part and odd part.
    pub fn split_parity(&self) -> (Self, Self) {
        let mut even = Self::zero(&self.ctx);
        let mut odd = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let target = if m.degree() % 2 == 0 { &mut even } else { &mut odd };
            target.terms.insert(*m, c.clone());
        }
        (even, odd)
    }

    /// The odd involution: toggles the distinguished generator in every monomial.
    pub fn nu(&self) -> Result<Self, AlgebraError> {
        if self.ctx.odd_count() == 0 {
            return Err(AlgebraError::NoOddGenerators);
        }
        let d = self.ctx.distinguished_odd();
        Ok(GrassmannElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.toggle(d), c.clone())).collect(),
        })
    }

    /// Inverse via `body^-1 * sum_k (-soul * body^-1)^k`; the series stops
    /// once the power of the soul vanishes.
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        let body_inv = self.body().inv(&self.ctx).ok_or(AlgebraError::NotInvertible)?;
        let step = self.soul().scale(&body_inv.neg());
        let mut acc = Self::one(&self.ctx);
        let mut power = Self::one(&self.ctx);
        for _ in 0..self.ctx.odd_count() {
            power = power.try_mul(&step)?;
            if power.is_zero() {
                break;
            }
            acc = acc.try_add(&power)?;
        }
        Ok(acc.scale(&body_inv))
    }

    /// Exact comparison by cross-multiplying each monomial coefficient of the
    /// difference, with registered relations eliminated.
    pub fn equals_exact(&self, other: &Self) -> bool {
        if !same_context(&self.ctx, &other.ctx) {
            return false;
        }
        let zero = RationalCoefficient::zero();
        let keys: std::collections::BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.into_iter().all(|m| {
            let a = self.terms.get(&m).unwrap_or(&zero);
            let b = other.terms.get(&m).unwrap_or(&zero);
            a.equals(b, &self.ctx, true)
        })
    }

    /// Re-homes the element into an extension of its context.
    pub fn embed(&self, target: &Arc<AlgebraContext>) -> Result<Self, AlgebraError> {
        if !target.extends(&self.ctx) {
            return Err(AlgebraError::ContextMismatch);
        }
        Ok(GrassmannElement {
            ctx: target.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Human-readable rendering with the context's symbol names.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.ctx.odd_names();
        self.terms
            .iter()
            .map(|(m, c)| {
                let coeff = c.display(&self.ctx);
                if m.is_empty() {
                    return coeff;
                }
                let odd = m
                    .indices()
                    .into_iter()
                    .map(|j| names[j - 1].clone())
                    .collect::<Vec<_>>()
                    .join("*");
                if coeff == "1" {
                    odd
                } else if coeff == "-1" {
                    format!("-{odd}")
                } else {
                    format!("({coeff})*{odd}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// Semantic equality (see [`GrassmannElement::equals_exact`]).
impl PartialEq for GrassmannElement {
    fn eq(&self, other: &Self) -> bool {
        self.equals_exact(other)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&GrassmannElement> for &GrassmannElement {
            type Output = GrassmannElement;
            fn $method(self, rhs: &GrassmannElement) -> GrassmannElement {
                self.$try(rhs).expect("operands from different algebra contexts")
            }
        }
        impl $trait<GrassmannElement> for GrassmannElement {
            type Output = GrassmannElement;
            fn $method(self, rhs: GrassmannElement) -> GrassmannElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        self.neg_ref()
    }
}

impl Neg for GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        self.neg_ref()
    }
}
