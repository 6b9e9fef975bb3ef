use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::{Monomial, Poly};
use super::AlgebraError;

/// An even indeterminate, optionally constrained by a rewrite `s^2 -> r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenSymbol {
    pub name: String,
    /// Replacement for the square of this symbol, a polynomial in unconstrained symbols.
    pub square: Option<Poly>,
}

/// The symbol table shared by every element of one Grassmann algebra.
///
/// Even symbols (constrained or not) share a single index space so that
/// extending a context by appending symbols leaves existing indices intact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraContext {
    even: Vec<EvenSymbol>,
    odd: Vec<String>,
    distinguished_odd: usize,
    sum_to_one: Vec<usize>,
}

impl AlgebraContext {
    pub fn builder() -> ContextBuilder {
        ContextBuilder::default()
    }

    /// A builder pre-populated with this context's symbols, for appending more.
    pub fn extend(&self) -> ContextBuilder {
        ContextBuilder {
            even: self.even.clone(),
            odd: self.odd.clone(),
            distinguished_odd: Some(self.distinguished_odd),
            sum_to_one: self.sum_to_one.iter().map(|&v| self.even[v].name.clone()).collect(),
        }
    }

    /// Convenience constructor: unconstrained even symbols and `q` odd generators
    /// named `e1..eq`.
    pub fn with_symbols<S: AsRef<str>>(even: &[S], odd_count: usize) -> Result<Arc<Self>, AlgebraError> {
        let mut b = Self::builder();
        for s in even {
            b.even(s.as_ref());
        }
        b.odd_count(odd_count);
        b.build()
    }

    pub fn even_count(&self) -> usize {
        self.even.len()
    }

    pub fn odd_count(&self) -> usize {
        self.odd.len()
    }

    pub fn even_symbols(&self) -> &[EvenSymbol] {
        &self.even
    }

    pub fn even_names(&self) -> Vec<String> {
        self.even.iter().map(|s| s.name.clone()).collect()
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd
    }

    /// One-based index of the odd generator toggled by the odd involution.
    pub fn distinguished_odd(&self) -> usize {
        self.distinguished_odd
    }

    pub fn sum_to_one_symbols(&self) -> &[usize] {
        &self.sum_to_one
    }

    pub fn even_index(&self, name: &str) -> Option<usize> {
        self.even.iter().position(|s| s.name == name)
    }

    /// One-based index of a named odd generator.
    pub fn odd_index(&self, name: &str) -> Option<usize> {
        self.odd.iter().position(|s| s == name).map(|i| i + 1)
    }

    pub fn is_constrained(&self, v: usize) -> bool {
        self.even.get(v).is_some_and(|s| s.square.is_some())
    }

    pub fn has_constraints(&self) -> bool {
        self.even.iter().any(|s| s.square.is_some())
    }

    /// Whether `self` is `base` with symbols appended (same prefix, same ν).
    pub fn extends(&self, base: &AlgebraContext) -> bool {
        self.even.len() >= base.even.len()
            && self.odd.len() >= base.odd.len()
            && self.even[..base.even.len()] == base.even[..]
            && self.odd[..base.odd.len()] == base.odd[..]
            && (base.odd.is_empty() || self.distinguished_odd == base.distinguished_odd)
    }

    /// Normal form under the rewrites `s^2 -> r`.
    pub fn reduce(&self, p: Poly) -> Poly {
        if !self.has_constraints() {
            return p;
        }
        let needs = p
            .terms()
            .any(|(m, _)| m.pairs().any(|(v, e)| e >= 2 && self.even[v].square.is_some()));
        if !needs {
            return p;
        }
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let mut term = Poly::one();
            let mut kept = Vec::new();
            for (v, e) in m.pairs() {
                match &self.even[v].square {
                    Some(r) if e >= 2 => {
                        term = term.mul(&r.pow(e / 2));
                        if e % 2 == 1 {
                            kept.push((v, 1));
                        }
                    }
                    _ => kept.push((v, e)),
                }
            }
            out = out.add(&term.mul_term(&Monomial::from_pairs(kept), c));
        }
        out
    }

    /// Applies the registered partition relation by replacing its last symbol
    /// with one minus the others. Only used when comparing for equality.
    pub fn eliminate_relations(&self, p: &Poly) -> Poly {
        let Some((&last, rest)) = self.sum_to_one.split_last() else {
            return p.clone();
        };
        let mut value = Poly::one();
        for &v in rest {
            value = value.sub(&Poly::var(v));
        }
        self.reduce(p.substitute_var(last, &value))
    }

    pub fn poly_display(&self, p: &Poly) -> String {
        p.display_with(&self.even_names())
    }
}

/// Incrementally assembles an [`AlgebraContext`].
#[derive(Clone, Debug, Default)]
pub struct ContextBuilder {
    even: Vec<EvenSymbol>,
    odd: Vec<String>,
    distinguished_odd: Option<usize>,
    sum_to_one: Vec<String>,
}

impl ContextBuilder {
    /// Appends an unconstrained even symbol and returns its index.
    pub fn even(&mut self, name: &str) -> usize {
        self.even.push(EvenSymbol {
            name: name.to_string(),
            square: None,
        });
        self.even.len() - 1
    }

    /// Appends a constrained symbol with rewrite `name^2 -> square`.
    pub fn constrained(&mut self, name: &str, square: Poly) -> usize {
        self.even.push(EvenSymbol {
            name: name.to_string(),
            square: Some(square),
        });
        self.even.len() - 1
    }

    /// Appends a square root of an existing unconstrained symbol.
    pub fn sqrt_of(&mut self, name: &str, of: &str) -> Result<usize, AlgebraError> {
        let v = self
            .even_index(of)
            .ok_or_else(|| AlgebraError::InvalidContext(format!("unknown symbol {of}")))?;
        Ok(self.constrained(name, Poly::var(v)))
    }

    /// Appends an odd generator and returns its one-based index.
    pub fn odd(&mut self, name: &str) -> usize {
        self.odd.push(name.to_string());
        self.odd.len()
    }

    /// Appends odd generators `e{len+1}..` until there are `count` of them.
    pub fn odd_count(&mut self, count: usize) -> &mut Self {
        while self.odd.len() < count {
            let name = format!("e{}", self.odd.len() + 1);
            self.odd.push(name);
        }
        self
    }

    pub fn distinguished_odd(&mut self, d: usize) -> &mut Self {
        self.distinguished_odd = Some(d);
        self
    }

    /// Registers the relation that the named symbols sum to one.
    pub fn sum_to_one<S: AsRef<str>>(&mut self, names: &[S]) -> &mut Self {
        self.sum_to_one = names.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    pub fn even_index(&self, name: &str) -> Option<usize> {
        self.even.iter().position(|s| s.name == name)
    }

    pub fn build(&self) -> Result<Arc<AlgebraContext>, AlgebraError> {
        let mut seen = HashSet::new();
        for name in self.even.iter().map(|s| &s.name).chain(self.odd.iter()) {
            if !seen.insert(name.as_str()) {
                return Err(AlgebraError::InvalidContext(format!("duplicate symbol name {name}")));
            }
        }
        for s in &self.even {
            if let Some(r) = &s.square {
                for (m, _) in r.terms() {
                    for (v, _) in m.pairs() {
                        match self.even.get(v) {
                            None => {
                                return Err(AlgebraError::InvalidContext(format!(
                                    "replacement for {} uses unknown variable {v}",
                                    s.name
                                )))
                            }
                            Some(t) if t.square.is_some() => {
                                return Err(AlgebraError::InvalidContext(format!(
                                    "replacement for {} uses constrained symbol {}",
                                    s.name, t.name
                                )))
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        let q = self.odd.len();
        let d = self.distinguished_odd.unwrap_or(1);
        if q > 0 && !(1..=q).contains(&d) {
            return Err(AlgebraError::InvalidContext(format!(
                "distinguished odd generator {d} outside 1..={q}"
            )));
        }
        if q > 63 {
            return Err(AlgebraError::InvalidContext(format!(
                "{q} odd generators exceed the supported 63"
            )));
        }
        let mut sum_to_one = Vec::new();
        for name in &self.sum_to_one {
            let v = self
                .even_index(name)
                .ok_or_else(|| AlgebraError::InvalidContext(format!("relation names unknown symbol {name}")))?;
            if self.even[v].square.is_some() {
                return Err(AlgebraError::InvalidContext(format!(
                    "relation symbol {name} must be unconstrained"
                )));
            }
            sum_to_one.push(v);
        }
        Ok(Arc::new(AlgebraContext {
            even: self.even.clone(),
            odd: self.odd.clone(),
            distinguished_odd: d,
            sum_to_one,
        }))
    }
}

pub(crate) fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
