//! Exact JSON encoding of elements, supermatrices and bundle descriptions.
//!
//! A polynomial is an array of `{"coef": "p/q", "exps": {"x1": 2}}`, an element
//! an array of `{"mono": [odd indices], "num": poly, "den": poly}`, and a matrix
//! a row-major nested array whose entries are elements or `"ZERO"`, `"ONE"`,
//! `"ONU"` (the odd unit `1ν`).

use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use nugrass_core::bundle::BundleDescription;
use nugrass_core::superalgebra::{AlgebraContext, GrassmannElement, Monomial, OddMonomial, Poly, RationalCoefficient};
use nugrass_core::supermatrix::{Entry, SuperMatrix, SuperShape};

/// Input that does not match the schema, located by a JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "{at}: {}", self.message)
    }
}

impl std::error::Error for SchemaError {}

fn err(pointer: &str, message: impl Into<String>) -> SchemaError {
    SchemaError {
        pointer: pointer.to_string(),
        message: message.into(),
    }
}

fn child(pointer: &str, key: impl std::fmt::Display) -> String {
    let key = key.to_string().replace('~', "~0").replace('/', "~1");
    format!("{pointer}/{key}")
}

pub fn poly_to_json(p: &Poly, ctx: &AlgebraContext) -> Value {
    let names = ctx.even_names();
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let exps: Map<String, Value> = m.pairs().map(|(v, e)| (names[v].clone(), json!(e))).collect();
            json!({ "coef": c.to_string(), "exps": exps })
        })
        .collect();
    Value::Array(terms)
}

pub fn element_to_json(z: &GrassmannElement) -> Value {
    let ctx = z.context();
    let terms: Vec<Value> = z
        .terms()
        .map(|(mono, c)| {
            json!({
                "mono": mono.indices(),
                "num": poly_to_json(c.numerator(), ctx),
                "den": poly_to_json(&c.denominator(ctx), ctx),
            })
        })
        .collect();
    Value::Array(terms)
}

pub fn entry_to_json(e: &Entry) -> Value {
    match e {
        Entry::Zero => json!("ZERO"),
        Entry::One => json!("ONE"),
        Entry::OddUnit => json!("ONU"),
        Entry::Value(z) => element_to_json(z),
    }
}

pub fn matrix_to_json(m: &SuperMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| Value::Array((0..m.cols()).map(|c| entry_to_json(m.get(r, c))).collect()))
        .collect();
    Value::Array(rows)
}

pub fn context_to_json(ctx: &AlgebraContext) -> Value {
    json!({ "even": ctx.even_names(), "odd": ctx.odd_names() })
}

pub fn parse_poly(v: &Value, ctx: &AlgebraContext, ptr: &str) -> Result<Poly, SchemaError> {
    let terms = v.as_array().ok_or_else(|| err(ptr, "expected an array of terms"))?;
    let mut out = Poly::zero();
    for (t, term) in terms.iter().enumerate() {
        let tp = child(ptr, t);
        let obj = term.as_object().ok_or_else(|| err(&tp, "expected a term object"))?;
        let coef_ptr = child(&tp, "coef");
        let coef = obj
            .get("coef")
            .and_then(Value::as_str)
            .ok_or_else(|| err(&coef_ptr, "expected a rational string such as \"-3/4\""))?;
        if coef.contains('.') {
            return Err(err(&coef_ptr, "decimal coefficients are not allowed"));
        }
        let c = BigRational::from_str(coef.trim())
            .map_err(|_| err(&coef_ptr, format!("cannot read \"{coef}\" as a rational")))?;
        let exps_ptr = child(&tp, "exps");
        let mut pairs = Vec::new();
        match obj.get("exps") {
            None => {}
            Some(Value::Object(exps)) => {
                for (name, power) in exps {
                    let pp = child(&exps_ptr, name);
                    let v = ctx
                        .even_index(name)
                        .ok_or_else(|| err(&pp, format!("unknown even symbol {name}")))?;
                    let e = power
                        .as_u64()
                        .and_then(|e| u32::try_from(e).ok())
                        .ok_or_else(|| err(&pp, "expected a non-negative integer power"))?;
                    pairs.push((v, e));
                }
            }
            Some(_) => return Err(err(&exps_ptr, "expected an object of symbol powers")),
        }
        out = out.add(&Poly::monomial(Monomial::from_pairs(pairs), c));
    }
    Ok(ctx.reduce(out))
}

pub fn parse_element(v: &Value, ctx: &Arc<AlgebraContext>, ptr: &str) -> Result<GrassmannElement, SchemaError> {
    let terms = v.as_array().ok_or_else(|| err(ptr, "expected an array of terms"))?;
    let mut out = GrassmannElement::zero(ctx);
    for (t, term) in terms.iter().enumerate() {
        let tp = child(ptr, t);
        let obj = term.as_object().ok_or_else(|| err(&tp, "expected a term object"))?;
        let mono_ptr = child(&tp, "mono");
        let indices: Vec<usize> = match obj.get("mono") {
            None => Vec::new(),
            Some(Value::Array(a)) => a
                .iter()
                .map(|j| {
                    j.as_u64()
                        .map(|j| j as usize)
                        .filter(|&j| j >= 1 && j <= ctx.odd_count())
                        .ok_or_else(|| err(&mono_ptr, format!("odd indices must lie in 1..={}", ctx.odd_count())))
                })
                .collect::<Result<_, _>>()?,
            Some(_) => return Err(err(&mono_ptr, "expected an array of odd indices")),
        };
        let num_ptr = child(&tp, "num");
        let num = parse_poly(
            obj.get("num").ok_or_else(|| err(&num_ptr, "missing numerator"))?,
            ctx,
            &num_ptr,
        )?;
        let den_ptr = child(&tp, "den");
        let den = match obj.get("den") {
            None => Poly::one(),
            Some(d) => parse_poly(d, ctx, &den_ptr)?,
        };
        let Some((sign, mono)) = OddMonomial::from_indices(&indices) else {
            continue;
        };
        let coefficient =
            RationalCoefficient::new(num, &den, ctx).ok_or_else(|| err(&den_ptr, "denominator is zero"))?;
        let coefficient = if sign < 0 { coefficient.neg() } else { coefficient };
        out = &out + &GrassmannElement::from_terms(ctx, vec![(mono, coefficient)]);
    }
    Ok(out)
}

pub fn parse_entry(v: &Value, ctx: &Arc<AlgebraContext>, ptr: &str) -> Result<Entry, SchemaError> {
    match v {
        Value::String(s) => match s.as_str() {
            "ZERO" => Ok(Entry::Zero),
            "ONE" => Ok(Entry::One),
            "ONU" => Ok(Entry::OddUnit),
            other => Err(err(ptr, format!("unknown entry shorthand \"{other}\""))),
        },
        _ => Ok(Entry::from_element(parse_element(v, ctx, ptr)?)),
    }
}

pub fn parse_matrix(
    v: &Value,
    shape: SuperShape,
    ctx: &Arc<AlgebraContext>,
    ptr: &str,
) -> Result<SuperMatrix, SchemaError> {
    let rows = v.as_array().ok_or_else(|| err(ptr, "expected an array of rows"))?;
    if rows.len() != shape.rows() {
        return Err(err(
            ptr,
            format!("expected {} rows, found {}", shape.rows(), rows.len()),
        ));
    }
    let mut m = SuperMatrix::zeros(shape, ctx);
    for (r, row) in rows.iter().enumerate() {
        let rp = child(ptr, r);
        let cells = row.as_array().ok_or_else(|| err(&rp, "expected an array of entries"))?;
        if cells.len() != shape.cols() {
            return Err(err(
                &rp,
                format!("expected {} entries, found {}", shape.cols(), cells.len()),
            ));
        }
        for (c, cell) in cells.iter().enumerate() {
            m.set(r, c, parse_entry(cell, ctx, &child(&rp, c))?);
        }
    }
    Ok(m)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, SchemaError> {
    obj.get(key)
        .ok_or_else(|| err(&child("", key), format!("missing field \"{key}\"")))
}

fn count(obj: &Map<String, Value>, key: &str) -> Result<usize, SchemaError> {
    field(obj, key)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| err(&child("", key), "expected a non-negative integer"))
}

/// Reads `"a{α}{β}"` (single digits) or `"a{α}_{β}"`.
fn transition_key(key: &str, t: usize) -> Option<(usize, usize)> {
    let rest = key.strip_prefix('a')?;
    let (a, b) = match rest.split_once(['_', ',']) {
        Some((a, b)) => (a.parse().ok()?, b.parse().ok()?),
        None if rest.len() == 2 => (rest[..1].parse().ok()?, rest[1..].parse().ok()?),
        None => return None,
    };
    (1..=t).contains(&a).then_some(())?;
    (1..=t).contains(&b).then_some((a, b))
}

/// `{"t", "k", "l", "evenSymbols", "oddCount", "transitions": {"a12": matrix}}`.
/// Missing inverse and diagonal transitions are derived.
pub fn parse_bundle(v: &Value) -> Result<BundleDescription, SchemaError> {
    let obj = v.as_object().ok_or_else(|| err("", "expected a bundle object"))?;
    let t = count(obj, "t")?;
    let k = count(obj, "k")?;
    let l = count(obj, "l")?;
    if t == 0 || k + l == 0 {
        return Err(err("", "t and k + l must be positive"));
    }
    let names_ptr = child("", "evenSymbols");
    let names: Vec<String> = match obj.get("evenSymbols") {
        None => Vec::new(),
        Some(Value::Array(a)) => a
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| err(&child(&names_ptr, i), "expected a symbol name"))
            })
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(err(&names_ptr, "expected an array of names")),
    };
    let odd = match obj.get("oddCount") {
        None => 0,
        Some(_) => count(obj, "oddCount")?,
    };
    if odd > 63 {
        return Err(err(&child("", "oddCount"), "at most 63 odd generators are supported"));
    }
    let ctx = AlgebraContext::with_symbols(&names, odd).map_err(|e| err(&names_ptr, e.to_string()))?;
    let tr_ptr = child("", "transitions");
    let transitions = field(obj, "transitions")?
        .as_object()
        .ok_or_else(|| err(&tr_ptr, "expected an object of matrices"))?;
    let mut desc = BundleDescription::new(t, k, l, &ctx);
    for (key, m) in transitions {
        let kp = child(&tr_ptr, key);
        let (a, b) = transition_key(key, t)
            .ok_or_else(|| err(&kp, format!("expected a key a<alpha><beta> with indices in 1..={t}")))?;
        desc.insert(a, b, parse_matrix(m, SuperShape::square(k, l), &ctx, &kp)?);
    }
    Ok(desc)
}

pub fn bundle_to_json(desc: &BundleDescription) -> Value {
    let ctx = desc.context();
    let transitions: Map<String, Value> = desc
        .transitions()
        .map(|(&(a, b), m)| {
            let key = if desc.cover < 10 {
                format!("a{a}{b}")
            } else {
                format!("a{a}_{b}")
            };
            (key, matrix_to_json(m))
        })
        .collect();
    json!({
        "t": desc.cover,
        "k": desc.k,
        "l": desc.l,
        "evenSymbols": ctx.even_names(),
        "oddCount": ctx.odd_count(),
        "transitions": transitions,
    })
}
