//! Resultants as determinants of Sylvester matrices.
//!
//! The determinant is computed by fraction-free (Bareiss) elimination over
//! any [`Ring`] that supports exact division, so the same code handles
//! coefficients in GF(2^m) and in GF(2^m)[x]. Characteristic 2 makes row
//! swaps sign-free.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::gf2n::{FieldElement, FieldSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResultantError {
    #[error("resultant of the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has degree 0 in the eliminated variable")]
    ConstantInVariable,
    #[error("polynomials over different fields")]
    FieldMismatch,
}

/// Commutative ring with exact division, as needed by Bareiss elimination.
pub trait Ring {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `a / b`, where `b != 0` is known to divide `a`.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// GF(2^m) as a ring.
pub struct FieldRing(pub FieldSpec);

impl Ring for FieldRing {
    type Elem = FieldElement;
    fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }
    fn one(&self) -> FieldElement {
        FieldElement::ONE
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        *a + *b
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.0.mul(*a, *b)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }
    fn div_exact(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.0.mul(*a, self.0.inv(*b).expect("nonzero divisor"))
    }
}

/// GF(2^m)[x] with dense coefficient vectors, lowest degree first, no
/// trailing zeros.
pub struct PolyRing(pub FieldSpec);

pub type Poly = Vec<FieldElement>;

pub fn poly_trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn poly_add(a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let mut out: Poly = (0..a.len().max(b.len()))
        .map(|i| a.get(i).copied().unwrap_or(FieldElement::ZERO) + b.get(i).copied().unwrap_or(FieldElement::ZERO))
        .collect();
    poly_trim(&mut out);
    out
}

pub fn poly_mul(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += field.mul(x, y);
        }
    }
    poly_trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn poly_divrem(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> (Poly, Poly) {
    let mut b = b.to_vec();
    poly_trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    poly_trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = field.inv(*b.last().unwrap()).unwrap();
    let mut q = vec![FieldElement::ZERO; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = field.mul(*r.last().unwrap(), lead_inv);
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] += field.mul(c, bc);
        }
        poly_trim(&mut r);
    }
    poly_trim(&mut q);
    (q, r)
}

pub fn poly_eval(field: &FieldSpec, p: &[FieldElement], x: FieldElement) -> FieldElement {
    p.iter().rev().fold(FieldElement::ZERO, |acc, &c| field.mul(acc, x) + c)
}

/// Monic greatest common divisor.
pub fn poly_gcd(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let (_, r) = poly_divrem(field, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = field.inv(lead).unwrap();
        for c in &mut a {
            *c = field.mul(*c, inv);
        }
    }
    a
}

impl Ring for PolyRing {
    type Elem = Poly;
    fn zero(&self) -> Poly {
        Vec::new()
    }
    fn one(&self) -> Poly {
        vec![FieldElement::ONE]
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        poly_add(a, b)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        poly_mul(&self.0, a, b)
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.iter().all(|c| c.is_zero())
    }
    fn div_exact(&self, a: &Poly, b: &Poly) -> Poly {
        let (q, r) = poly_divrem(&self.0, a, b);
        debug_assert!(r.is_empty(), "inexact division in Bareiss elimination");
        q
    }
}

/// Determinant by Bareiss elimination.
pub fn determinant<R: Ring>(ring: &R, mut m: Vec<Vec<R::Elem>>) -> R::Elem {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if ring.is_zero(&m[k][k]) {
            match (k + 1..n).find(|&i| !ring.is_zero(&m[i][k])) {
                Some(i) => m.swap(k, i),
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = ring.add(&ring.mul(&m[i][j], &m[k][k]), &ring.mul(&m[i][k], &m[k][j]));
                m[i][j] = ring.div_exact(&t, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone()
}

/// Sylvester matrix of `u` (formal degree `du`) and `v` (formal degree
/// `dv`), coefficient lists lowest degree first. Rows hold the coefficients
/// from the leading one down, as printed in the usual definition.
pub fn sylvester_matrix<R: Ring>(ring: &R, u: &[R::Elem], du: usize, v: &[R::Elem], dv: usize) -> Vec<Vec<R::Elem>> {
    let size = du + dv;
    let coeff = |p: &[R::Elem], i: usize| p.get(i).cloned().unwrap_or_else(|| ring.zero());
    let mut rows = Vec::with_capacity(size);
    for r in 0..dv {
        let mut row = vec![ring.zero(); size];
        for k in 0..=du {
            row[r + k] = coeff(u, du - k);
        }
        rows.push(row);
    }
    for r in 0..du {
        let mut row = vec![ring.zero(); size];
        for k in 0..=dv {
            row[r + k] = coeff(v, dv - k);
        }
        rows.push(row);
    }
    rows
}

/// Determinant of the Sylvester matrix with formal degrees: coefficients
/// beyond the actual degree are taken as zero.
pub fn resultant_formal<R: Ring>(ring: &R, u: &[R::Elem], du: usize, v: &[R::Elem], dv: usize) -> R::Elem {
    determinant(ring, sylvester_matrix(ring, u, du, v, dv))
}

/// Resultant of two nonzero polynomials over GF(2^m), given lowest degree
/// first. It vanishes iff they share a root in the algebraic closure.
pub fn resultant(field: &FieldSpec, u: &[FieldElement], v: &[FieldElement]) -> Result<FieldElement, ResultantError> {
    let (mut u, mut v) = (u.to_vec(), v.to_vec());
    poly_trim(&mut u);
    poly_trim(&mut v);
    if u.is_empty() || v.is_empty() {
        return Err(ResultantError::ZeroPolynomial);
    }
    let ring = FieldRing(field.clone());
    Ok(resultant_formal(&ring, &u, u.len() - 1, &v, v.len() - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    X,
    Y,
}

/// Sparse polynomial in x and y over GF(2^m).
#[derive(Clone, PartialEq, Eq)]
pub struct BivariatePolynomial {
    field: FieldSpec,
    /// `(deg_x, deg_y) -> coefficient`, zero coefficients dropped.
    terms: BTreeMap<(u32, u32), FieldElement>,
}

impl fmt::Debug for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), c)| format!("{c}*x^{i}*y^{j}"))
            .collect();
        write!(
            f,
            "{}",
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        )
    }
}

impl BivariatePolynomial {
    /// From `(coefficient, deg_x, deg_y)` terms; repeated monomials add up.
    pub fn new(field: &FieldSpec, terms: impl IntoIterator<Item = (FieldElement, u32, u32)>) -> Self {
        let mut map: BTreeMap<(u32, u32), FieldElement> = BTreeMap::new();
        for (c, i, j) in terms {
            *map.entry((i, j)).or_insert(FieldElement::ZERO) += c;
        }
        map.retain(|_, c| !c.is_zero());
        BivariatePolynomial {
            field: field.clone(),
            terms: map,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_in(&self, var: Variable) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| if var == Variable::X { i } else { j })
            .max()
    }

    pub fn eval(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let f = &self.field;
        self.terms.iter().fold(FieldElement::ZERO, |acc, (&(i, j), &c)| {
            acc + f.mul(c, f.mul(f.pow(x, i as u64), f.pow(y, j as u64)))
        })
    }

    /// Coefficients in `var` (lowest power first), each a polynomial in the
    /// other variable.
    pub fn coefficients_in(&self, var: Variable) -> Vec<Poly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out: Vec<Poly> = vec![Vec::new(); deg + 1];
        for (&(i, j), &c) in &self.terms {
            let (k, other) = if var == Variable::Y { (j, i) } else { (i, j) };
            let p = &mut out[k as usize];
            if p.len() <= other as usize {
                p.resize(other as usize + 1, FieldElement::ZERO);
            }
            p[other as usize] += c;
        }
        for p in &mut out {
            poly_trim(p);
        }
        out
    }
}

/// `Res(F, G, var)` as a polynomial in the remaining variable, lowest degree
/// first. Uses the actual degrees of F and G in `var`.
pub fn resultant_bivariate(
    f: &BivariatePolynomial,
    g: &BivariatePolynomial,
    eliminate: Variable,
) -> Result<Poly, ResultantError> {
    if f.field.n() != g.field.n() || f.field.modulus() != g.field.modulus() {
        return Err(ResultantError::FieldMismatch);
    }
    if f.is_zero() || g.is_zero() {
        return Err(ResultantError::ZeroPolynomial);
    }
    let (df, dg) = (f.degree_in(eliminate).unwrap(), g.degree_in(eliminate).unwrap());
    if df == 0 || dg == 0 {
        return Err(ResultantError::ConstantInVariable);
    }
    Ok(resultant_bivariate_formal(f, df as usize, g, dg as usize, eliminate))
}

/// As [`resultant_bivariate`] but with formal degrees in the eliminated
/// variable, so specializations with a vanishing leading coefficient keep
/// the same Sylvester matrix shape.
pub fn resultant_bivariate_formal(
    f: &BivariatePolynomial,
    df: usize,
    g: &BivariatePolynomial,
    dg: usize,
    eliminate: Variable,
) -> Poly {
    let ring = PolyRing(f.field.clone());
    let mut r = resultant_formal(
        &ring,
        &f.coefficients_in(eliminate),
        df,
        &g.coefficients_in(eliminate),
        dg,
    );
    poly_trim(&mut r);
    r
}
