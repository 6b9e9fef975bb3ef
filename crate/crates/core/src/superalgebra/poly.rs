//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are plain indices into the even-symbol table of an
//! [`AlgebraContext`](super::AlgebraContext). Terms are kept in a `BTreeMap`
//! ordered by lexicographic monomial order with variable `0` most significant,
//! so the leading term is always the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector stored sparsely as `(variable, exponent)` pairs with
/// strictly increasing variables and nonzero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u16, u16)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Monomial(vec![(v as u16, 1)])
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut acc: BTreeMap<u16, u16> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *acc.entry(v as u16).or_insert(0) += e as u16;
            }
        }
        Monomial(acc.into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w as usize == v)
            .map_or(0, |&(_, e)| e as u32)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(v, e)| (v as usize, e as u32))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        j += 1;
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        i += 1;
                        j += 1;
                    }
                },
                (Some(&t), None) => {
                    out.push(t);
                    i += 1;
                }
                (None, Some(&t)) => {
                    out.push(t);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            let mut d = 0;
            if let Some(&(w, f)) = other.0.get(j) {
                if w < v {
                    return None;
                }
                if w == v {
                    d = f;
                    j += 1;
                }
            }
            if d > e {
                return None;
            }
            if e > d {
                out.push((v, e - d));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            let f = other.exponent(v as usize) as u16;
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Removes variable `v`, returning its exponent and the remainder.
    pub fn split_var(&self, v: usize) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut exp = 0;
        for &(w, e) in &self.0 {
            if w as usize == v {
                exp = e as u32;
            } else {
                rest.push((w, e));
            }
        }
        (exp, Monomial(rest))
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(v, _)| v as usize)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        return vb.cmp(&va);
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, (v, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            write!(f, "v{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: usize) -> Self {
        Poly::monomial(Monomial::var(v), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The constant value, if this polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(lm)?;
            let qc = c / lc;
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Greatest common monomial divisor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    /// Divides by a monomial known to divide every term.
    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.div(m).expect("monomial divides every term"), c.clone()))
                .collect(),
        }
    }

    /// Replaces variable `v` by the polynomial `value`.
    pub fn substitute_var(&self, v: usize, value: &Poly) -> Poly {
        if !self.uses_var(v) {
            return self.clone();
        }
        let mut powers: Vec<Poly> = vec![Poly::one()];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            out = out.add(&powers[e as usize].mul_term(&rest, c));
        }
        out
    }

    /// Scales so the leading coefficient is one; returns the removed factor.
    pub fn make_monic(&self) -> (BigRational, Poly) {
        match self.leading() {
            None => (BigRational::zero(), Poly::zero()),
            Some((_, lc)) => {
                let lc = lc.clone();
                (lc.clone(), self.scale(&lc.recip()))
            }
        }
    }

    /// Renders with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let body = m
                .pairs()
                .map(|(v, e)| {
                    let name = names.get(v).cloned().unwrap_or_else(|| format!("v{v}"));
                    if e > 1 {
                        format!("{name}^{e}")
                    } else {
                        name
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            if body.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&body);
            } else {
                s.push_str(&format!("{abs}*{body}"));
            }
        }
        s
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}
