//! Coordinate substitutions and the generic evaluator behind them.
//!
//! A substitution assigns an image to every even symbol and odd generator of
//! a source algebra and extends multiplicatively. The same evaluator drives
//! exact substitution (images are [`GrassmannElement`]s) and modular
//! evaluation (images are dense elements over a prime field).

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;

use super::context::AlgebraContext;
use super::element::{GrassmannElement, Parity};
use super::poly::Poly;
use super::rational::RationalCoefficient;
use super::AlgebraError;

/// An algebra that symbolic elements can be evaluated into.
pub trait EvalTarget {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Image of a rational constant; `None` when it has no image (e.g. a
    /// denominator divisible by the field characteristic).
    fn rational(&self, c: &BigRational) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalFailure {
    UnassignedEven(usize),
    UnassignedOdd(usize),
    /// A denominator evaluated to something without an inverse.
    Singular,
}

/// Evaluates polynomials and elements with memoised symbol powers.
pub struct Evaluator<'a, T: EvalTarget> {
    target: &'a T,
    even: &'a [Option<T::Elem>],
    odd: &'a [Option<T::Elem>],
    powers: HashMap<(usize, u32), T::Elem>,
}

impl<'a, T: EvalTarget> Evaluator<'a, T> {
    pub fn new(target: &'a T, even: &'a [Option<T::Elem>], odd: &'a [Option<T::Elem>]) -> Self {
        Evaluator {
            target,
            even,
            odd,
            powers: HashMap::new(),
        }
    }

    fn power(&mut self, v: usize, e: u32) -> Result<T::Elem, EvalFailure> {
        if let Some(p) = self.powers.get(&(v, e)) {
            return Ok(p.clone());
        }
        let base = self
            .even
            .get(v)
            .and_then(|x| x.clone())
            .ok_or(EvalFailure::UnassignedEven(v))?;
        let value = if e == 1 {
            base
        } else {
            let lower = self.power(v, e - 1)?;
            self.target.mul(&lower, &base)
        };
        self.powers.insert((v, e), value.clone());
        Ok(value)
    }

    pub fn poly(&mut self, p: &Poly) -> Result<T::Elem, EvalFailure> {
        let mut acc = self.target.zero();
        for (m, c) in p.terms() {
            let mut term = self.target.rational(c).ok_or(EvalFailure::Singular)?;
            for (v, e) in m.pairs() {
                let pw = self.power(v, e)?;
                term = self.target.mul(&term, &pw);
            }
            acc = self.target.add(&acc, &term);
        }
        Ok(acc)
    }

    pub fn coefficient(&mut self, c: &RationalCoefficient) -> Result<T::Elem, EvalFailure> {
        let num = self.poly(c.numerator())?;
        if c.is_polynomial() {
            return Ok(num);
        }
        let mut den = self.target.one();
        for (f, m) in c.denominator_factors() {
            let fv = self.poly(f)?;
            for _ in 0..*m {
                den = self.target.mul(&den, &fv);
            }
        }
        let inv = self.target.invert(&den).ok_or(EvalFailure::Singular)?;
        Ok(self.target.mul(&num, &inv))
    }

    pub fn element(&mut self, z: &GrassmannElement) -> Result<T::Elem, EvalFailure> {
        let mut acc = self.target.zero();
        for (m, c) in z.terms() {
            let mut term = self.coefficient(c)?;
            for j in m.indices() {
                let g = self
                    .odd
                    .get(j - 1)
                    .and_then(|x| x.clone())
                    .ok_or(EvalFailure::UnassignedOdd(j))?;
                term = self.target.mul(&term, &g);
            }
            acc = self.target.add(&acc, &term);
        }
        Ok(acc)
    }
}

/// Exact evaluation into a Grassmann algebra.
pub struct ExactTarget(pub Arc<AlgebraContext>);

impl EvalTarget for ExactTarget {
    type Elem = GrassmannElement;

    fn zero(&self) -> GrassmannElement {
        GrassmannElement::zero(&self.0)
    }

    fn one(&self) -> GrassmannElement {
        GrassmannElement::one(&self.0)
    }

    fn rational(&self, c: &BigRational) -> Option<GrassmannElement> {
        Some(GrassmannElement::from_rational(&self.0, c.clone()))
    }

    fn add(&self, a: &GrassmannElement, b: &GrassmannElement) -> GrassmannElement {
        a + b
    }

    fn mul(&self, a: &GrassmannElement, b: &GrassmannElement) -> GrassmannElement {
        a * b
    }

    fn invert(&self, a: &GrassmannElement) -> Option<GrassmannElement> {
        a.invert().ok()
    }
}

/// A coordinate assignment defining a homomorphism from `source` to `target`.
#[derive(Clone)]
pub struct Substitution {
    source: Arc<AlgebraContext>,
    target: Arc<AlgebraContext>,
    even: Vec<Option<GrassmannElement>>,
    odd: Vec<Option<GrassmannElement>>,
}

impl Substitution {
    /// An empty assignment; every symbol must be assigned before use.
    pub fn new(source: &Arc<AlgebraContext>, target: &Arc<AlgebraContext>) -> Self {
        Substitution {
            source: source.clone(),
            target: target.clone(),
            even: vec![None; source.even_count()],
            odd: vec![None; source.odd_count()],
        }
    }

    /// Maps every symbol to itself.
    pub fn identity(ctx: &Arc<AlgebraContext>) -> Self {
        let mut s = Self::new(ctx, ctx);
        for v in 0..ctx.even_count() {
            s.even[v] = Some(GrassmannElement::even_symbol(ctx, v));
        }
        for j in 1..=ctx.odd_count() {
            s.odd[j - 1] = Some(GrassmannElement::odd_generator(ctx, j));
        }
        s
    }

    /// Maps every symbol of `source` to the same-named symbol of an extension.
    pub fn inclusion(source: &Arc<AlgebraContext>, target: &Arc<AlgebraContext>) -> Result<Self, AlgebraError> {
        if !target.extends(source) {
            return Err(AlgebraError::ContextMismatch);
        }
        let mut s = Self::new(source, target);
        for v in 0..source.even_count() {
            s.even[v] = Some(GrassmannElement::even_symbol(target, v));
        }
        for j in 1..=source.odd_count() {
            s.odd[j - 1] = Some(GrassmannElement::odd_generator(target, j));
        }
        Ok(s)
    }

    pub fn source(&self) -> &Arc<AlgebraContext> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraContext> {
        &self.target
    }

    fn check_image(&self, name: &str, image: &GrassmannElement, expected: Parity) -> Result<(), AlgebraError> {
        if !super::element::same_context(image.context(), &self.target) {
            return Err(AlgebraError::ContextMismatch);
        }
        let found = image.parity();
        if !found.fits(expected) {
            return Err(AlgebraError::ParityViolation {
                symbol: name.to_string(),
                expected,
                found,
            });
        }
        Ok(())
    }

    pub fn assign_even(&mut self, v: usize, image: GrassmannElement) -> Result<(), AlgebraError> {
        let name = self.source.even_symbols()[v].name.clone();
        self.check_image(&name, &image, Parity::Even)?;
        self.even[v] = Some(image);
        Ok(())
    }

    /// Assigns the one-based odd generator `j`.
    pub fn assign_odd(&mut self, j: usize, image: GrassmannElement) -> Result<(), AlgebraError> {
        let name = self.source.odd_names()[j - 1].clone();
        self.check_image(&name, &image, Parity::Odd)?;
        self.odd[j - 1] = Some(image);
        Ok(())
    }

    /// Assigns a symbol by name, checking that parity is preserved.
    pub fn assign(&mut self, name: &str, image: GrassmannElement) -> Result<(), AlgebraError> {
        if let Some(v) = self.source.even_index(name) {
            return self.assign_even(v, image);
        }
        if let Some(j) = self.source.odd_index(name) {
            return self.assign_odd(j, image);
        }
        Err(AlgebraError::UnknownSymbol(name.to_string()))
    }

    pub fn even_image(&self, v: usize) -> Option<&GrassmannElement> {
        self.even.get(v).and_then(Option::as_ref)
    }

    pub fn odd_image(&self, j: usize) -> Option<&GrassmannElement> {
        self.odd.get(j - 1).and_then(Option::as_ref)
    }

    /// `(symbol name, image)` for every assigned symbol, evens first.
    pub fn images(&self) -> Vec<(String, &GrassmannElement)> {
        let mut out = Vec::new();
        for (v, img) in self.even.iter().enumerate() {
            if let Some(i) = img {
                out.push((self.source.even_symbols()[v].name.clone(), i));
            }
        }
        for (j, img) in self.odd.iter().enumerate() {
            if let Some(i) = img {
                out.push((self.source.odd_names()[j].clone(), i));
            }
        }
        out
    }

    /// The ring-homomorphic extension applied to `z`.
    pub fn apply(&self, z: &GrassmannElement) -> Result<GrassmannElement, AlgebraError> {
        if !super::element::same_context(z.context(), &self.source) {
            return Err(AlgebraError::ContextMismatch);
        }
        let target = ExactTarget(self.target.clone());
        let mut ev = Evaluator::new(&target, &self.even, &self.odd);
        ev.element(z).map_err(|f| self.failure(f))
    }

    fn failure(&self, f: EvalFailure) -> AlgebraError {
        match f {
            EvalFailure::UnassignedEven(v) => {
                AlgebraError::UnassignedSymbol(self.source.even_symbols()[v].name.clone())
            }
            EvalFailure::UnassignedOdd(j) => AlgebraError::UnassignedSymbol(self.source.odd_names()[j - 1].clone()),
            EvalFailure::Singular => AlgebraError::NotInvertible,
        }
    }

    /// `self ∘ inner`: first apply `inner`, then substitute `self` into its images.
    /// Requires `inner.target == self.source`.
    pub fn after(&self, inner: &Substitution) -> Result<Substitution, AlgebraError> {
        if !super::element::same_context(&inner.target, &self.source) {
            return Err(AlgebraError::ContextMismatch);
        }
        let mut out = Substitution::new(&inner.source, &self.target);
        let target = ExactTarget(self.target.clone());
        let mut ev = Evaluator::new(&target, &self.even, &self.odd);
        for (v, img) in inner.even.iter().enumerate() {
            if let Some(i) = img {
                let mapped = ev.element(i).map_err(|f| self.failure(f))?;
                out.assign_even(v, mapped)?;
            }
        }
        for (j, img) in inner.odd.iter().enumerate() {
            if let Some(i) = img {
                let mapped = ev.element(i).map_err(|f| self.failure(f))?;
                out.assign_odd(j + 1, mapped)?;
            }
        }
        Ok(out)
    }

    /// Whether every assigned symbol maps to itself (images compared exactly).
    pub fn is_identity(&self) -> bool {
        self.first_non_identity().is_none()
    }

    /// The first symbol whose image differs from the symbol itself, with the difference.
    pub fn first_non_identity(&self) -> Option<(String, GrassmannElement)> {
        if !super::element::same_context(&self.source, &self.target) {
            return Some(("<context>".into(), GrassmannElement::zero(&self.target)));
        }
        for (v, img) in self.even.iter().enumerate() {
            let own = GrassmannElement::even_symbol(&self.target, v);
            match img {
                Some(i) if i.equals_exact(&own) => {}
                Some(i) => return Some((self.source.even_symbols()[v].name.clone(), i - &own)),
                None => return Some((self.source.even_symbols()[v].name.clone(), own)),
            }
        }
        for (j, img) in self.odd.iter().enumerate() {
            let own = GrassmannElement::odd_generator(&self.target, j + 1);
            match img {
                Some(i) if i.equals_exact(&own) => {}
                Some(i) => return Some((self.source.odd_names()[j].clone(), i - &own)),
                None => return Some((self.source.odd_names()[j].clone(), own)),
            }
        }
        None
    }
}

impl std::fmt::Debug for Substitution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (name, img) in self.images() {
            m.entry(&name, &img.display());
        }
        m.finish()
    }
}

/// `substitute(z, assignment)`.
pub fn substitute(z: &GrassmannElement, assignment: &Substitution) -> Result<GrassmannElement, AlgebraError> {
    assignment.apply(z)
}
