//! Rational functions in the even symbols.
//!
//! The denominator is kept as a list of monic factors with multiplicities.
//! Sums use the factor-wise least common multiple and every result is
//! cancelled by trial division against those factors, which keeps chart
//! transitions small without a multivariate GCD. Equality never relies on this
//! reduction: it is decided by cross-multiplication.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::context::AlgebraContext;
use super::poly::Poly;

#[derive(Clone)]
pub struct RationalCoefficient {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

impl RationalCoefficient {
    pub fn zero() -> Self {
        RationalCoefficient {
            num: Poly::zero(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(num: Poly) -> Self {
        RationalCoefficient { num, den: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// `num / den`, or `None` when `den` is the zero polynomial.
    pub fn new(num: Poly, den: &Poly, ctx: &AlgebraContext) -> Option<Self> {
        let inv = Self::from_poly(den.clone()).inv(ctx)?;
        Some(Self::from_poly(num).mul(&inv, ctx))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    /// The denominator multiplied out.
    pub fn denominator(&self, ctx: &AlgebraContext) -> Poly {
        expand(&self.den, ctx)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RationalCoefficient {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalCoefficient {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self, ctx: &AlgebraContext) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_empty() && other.den.is_empty() {
            return Self::from_poly(ctx.reduce(self.num.add(&other.num)));
        }
        let (lcm, fa, fb) = lcm_cofactors(&self.den, &other.den);
        let num = ctx.reduce(self.num.mul(&expand(&fa, ctx)).add(&other.num.mul(&expand(&fb, ctx))));
        cancel(num, lcm)
    }

    pub fn sub(&self, other: &Self, ctx: &AlgebraContext) -> Self {
        self.add(&other.neg(), ctx)
    }

    pub fn mul(&self, other: &Self, ctx: &AlgebraContext) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let num = ctx.reduce(self.num.mul(&other.num));
        if self.den.is_empty() && other.den.is_empty() {
            return Self::from_poly(num);
        }
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            push_factor(&mut den, f.clone(), *m);
        }
        cancel(num, den)
    }

    /// Multiplicative inverse, `None` for the zero function.
    pub fn inv(&self, ctx: &AlgebraContext) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (c, factors) = split_factors(&self.num);
        let num = ctx.reduce(expand(&self.den, ctx).scale(&c.recip()));
        Some(RationalCoefficient { num, den: factors })
    }

    pub fn div(&self, other: &Self, ctx: &AlgebraContext) -> Option<Self> {
        Some(self.mul(&other.inv(ctx)?, ctx))
    }

    /// Cross-multiplied comparison; `eliminate` additionally applies registered relations.
    pub fn equals(&self, other: &Self, ctx: &AlgebraContext, eliminate: bool) -> bool {
        let (_, fa, fb) = lcm_cofactors(&self.den, &other.den);
        let diff = ctx.reduce(self.num.mul(&expand(&fa, ctx)).sub(&other.num.mul(&expand(&fb, ctx))));
        if eliminate {
            ctx.eliminate_relations(&diff).is_zero()
        } else {
            diff.is_zero()
        }
    }

    pub fn display(&self, ctx: &AlgebraContext) -> String {
        let num = ctx.poly_display(&self.num);
        if self.den.is_empty() {
            return num;
        }
        let den = self
            .den
            .iter()
            .map(|(f, m)| {
                let s = ctx.poly_display(f);
                let s = if f.len() > 1 { format!("({s})") } else { s };
                if *m > 1 {
                    format!("{s}^{m}")
                } else {
                    s
                }
            })
            .collect::<Vec<_>>()
            .join("*");
        let num = if self.num.len() > 1 { format!("({num})") } else { num };
        format!("{num}/{den}")
    }
}

impl fmt::Debug for RationalCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.num)?;
        if !self.den.is_empty() {
            write!(f, " / ")?;
            for (p, m) in &self.den {
                write!(f, "({p:?})^{m}")?;
            }
        }
        Ok(())
    }
}

fn expand(factors: &[(Poly, u32)], ctx: &AlgebraContext) -> Poly {
    let mut acc = Poly::one();
    for (f, m) in factors {
        for _ in 0..*m {
            acc = acc.mul(f);
        }
    }
    ctx.reduce(acc)
}

fn push_factor(den: &mut Vec<(Poly, u32)>, f: Poly, m: u32) {
    if m == 0 {
        return;
    }
    match den.iter_mut().find(|(g, _)| *g == f) {
        Some((_, k)) => *k += m,
        None => den.push((f, m)),
    }
}

type Factors = Vec<(Poly, u32)>;

/// Returns `(lcm, lcm/a, lcm/b)` for factored denominators.
fn lcm_cofactors(a: &[(Poly, u32)], b: &[(Poly, u32)]) -> (Factors, Factors, Factors) {
    let mut lcm: Vec<(Poly, u32)> = a.to_vec();
    for (f, m) in b {
        match lcm.iter_mut().find(|(g, _)| g == f) {
            Some((_, k)) => *k = (*k).max(*m),
            None => lcm.push((f.clone(), *m)),
        }
    }
    let cof = |x: &[(Poly, u32)]| -> Vec<(Poly, u32)> {
        lcm.iter()
            .filter_map(|(f, m)| {
                let have = x.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                (*m > have).then(|| (f.clone(), m - have))
            })
            .collect()
    };
    let fa = cof(a);
    let fb = cof(b);
    (lcm, fa, fb)
}

fn cancel(mut num: Poly, mut den: Vec<(Poly, u32)>) -> RationalCoefficient {
    if num.is_zero() {
        return RationalCoefficient::zero();
    }
    for (f, m) in den.iter_mut() {
        while *m > 0 {
            match num.exact_div(f) {
                Some(q) => {
                    num = q;
                    *m -= 1;
                }
                None => break,
            }
        }
    }
    den.retain(|(_, m)| *m > 0);
    RationalCoefficient { num, den }
}

/// Splits a nonzero polynomial into a constant and monic factors: one
/// factor per variable of the monomial content plus the monic remainder.
fn split_factors(p: &Poly) -> (BigRational, Vec<(Poly, u32)>) {
    let content = p.monomial_content();
    let rest = if content.is_one() {
        p.clone()
    } else {
        p.div_monomial(&content)
    };
    let (c, monic) = rest.make_monic();
    let mut factors = Vec::new();
    for (v, e) in content.pairs() {
        factors.push((Poly::var(v), e));
    }
    if monic.as_constant().is_none() {
        factors.push((monic, 1));
    }
    debug_assert!(!c.is_zero());
    (c, factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::context::rational;

    fn ctx() -> std::sync::Arc<AlgebraContext> {
        AlgebraContext::with_symbols(&["x1", "x2"], 0).unwrap()
    }

    #[test]
    fn cross_multiplication_identity() {
        let c = ctx();
        let x = Poly::var(0);
        let num = x.mul(&x).sub(&Poly::one());
        let den = x.sub(&Poly::one());
        let a = RationalCoefficient::new(num, &den, &c).unwrap();
        let b = RationalCoefficient::from_poly(x.add(&Poly::one()));
        assert!(a.equals(&b, &c, false));
        // cancellation made it a polynomial
        assert!(a.is_polynomial());
    }

    #[test]
    fn distinct_reciprocals_differ() {
        let c = ctx();
        let a = RationalCoefficient::from_poly(Poly::var(0)).inv(&c).unwrap();
        let b = RationalCoefficient::from_poly(Poly::var(1)).inv(&c).unwrap();
        assert!(!a.equals(&b, &c, false));
    }

    #[test]
    fn inverse_of_inverse() {
        let c = ctx();
        let p = Poly::var(0).mul(&Poly::var(1)).scale(&rational(3)).add(&Poly::var(1));
        let a = RationalCoefficient::from_poly(p.clone());
        let back = a.inv(&c).unwrap().inv(&c).unwrap();
        assert!(back.equals(&a, &c, false));
        assert!(back.is_polynomial());
        assert!(RationalCoefficient::zero().inv(&c).is_none());
    }

    #[test]
    fn sums_share_denominators() {
        let c = ctx();
        let inv_x = RationalCoefficient::from_poly(Poly::var(0)).inv(&c).unwrap();
        let s = inv_x.add(&inv_x, &c);
        assert_eq!(s.denominator_factors().len(), 1);
        let zero = s.sub(&inv_x.scale(&rational(2)), &c);
        assert!(zero.is_zero());
    }
}
