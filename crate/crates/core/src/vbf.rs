//! Vectorial Boolean functions over GF(2^n).
//!
//! [`FunctionTable`] is the canonical form every analysis consumes. The
//! symbolic forms ([`UnivariatePoly`], [`BivariateFunc`], [`LinearizedPoly`])
//! exist to build tables from formulas and to print them.

use std::fmt;
use std::io::{BufRead, Write};

use rand::Rng;
use thiserror::Error;

use crate::gf2n::{FieldElement, FieldSpec, GfError, SubfieldMap};

#[derive(Debug, Error)]
pub enum VbfError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("operand lives in GF(2^{found}), expected GF(2^{expected})")]
    FieldMismatch { expected: u32, found: u32 },
    #[error("table has {found} entries, expected {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("lut parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn same_field(a: &FieldSpec, b: &FieldSpec) -> Result<(), VbfError> {
    if a.n() != b.n() || a.modulus() != b.modulus() {
        return Err(VbfError::FieldMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(())
}

/// Lookup table of a function GF(2^n) -> GF(2^n), indexed by input bits.
#[derive(Clone, PartialEq, Eq)]
pub struct FunctionTable {
    field: FieldSpec,
    lut: Vec<u32>,
}

impl fmt::Debug for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionTable({}, {} entries)", self.field.header(), self.lut.len())
    }
}

impl FunctionTable {
    pub fn from_lut(field: &FieldSpec, lut: Vec<u32>) -> Result<Self, VbfError> {
        if lut.len() != field.size() {
            return Err(VbfError::TableLength {
                expected: field.size(),
                found: lut.len(),
            });
        }
        for &v in &lut {
            field.check(FieldElement(v))?;
        }
        Ok(FunctionTable {
            field: field.clone(),
            lut,
        })
    }

    pub fn from_fn(field: &FieldSpec, f: impl Fn(FieldElement) -> FieldElement) -> Self {
        let lut = field.elements().map(|z| f(z).0).collect();
        FunctionTable {
            field: field.clone(),
            lut,
        }
    }

    pub fn identity(field: &FieldSpec) -> Self {
        Self::from_fn(field, |z| z)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn lut(&self) -> &[u32] {
        &self.lut
    }

    #[inline]
    pub fn at(&self, z: FieldElement) -> FieldElement {
        FieldElement(self.lut[z.0 as usize])
    }

    /// `post(f(pre(z)))`.
    pub fn compose_affine(&self, pre: &AffineMap, post: &AffineMap) -> FunctionTable {
        FunctionTable::from_fn(&self.field, |z| post.apply(self.at(pre.apply(z))))
    }

    /// Writes the LUT file: field header, then one hex value per line.
    pub fn write_lut<W: Write>(&self, mut w: W) -> Result<(), VbfError> {
        writeln!(w, "{}", self.field.header())?;
        let width = (self.field.n() as usize).div_ceil(4);
        for v in &self.lut {
            writeln!(w, "{:0width$x}", v, width = width)?;
        }
        Ok(())
    }

    pub fn read_lut<R: BufRead>(r: R) -> Result<Self, VbfError> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| VbfError::Parse {
            line: 1,
            msg: "missing header".into(),
        })??;
        let field = FieldSpec::from_header(header.trim())?;
        let mut lut = Vec::with_capacity(field.size());
        for (i, line) in lines.enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let t = t.strip_prefix("0x").unwrap_or(t);
            let v = u32::from_str_radix(t, 16).map_err(|e| VbfError::Parse {
                line: i + 2,
                msg: e.to_string(),
            })?;
            lut.push(v);
        }
        Self::from_lut(&field, lut)
    }
}

// ---------------------------------------------------------------------------

/// Normalizes a positive exponent into `[1, 2^n - 1]`; as functions on the
/// field `z^e` and `z^{e mod (2^n-1)}` agree except that `z^0` is 1 at 0.
#[inline]
fn normalize_exponent(e: u64, order: u64) -> u64 {
    if e == 0 {
        0
    } else {
        (e - 1) % order + 1
    }
}

/// Sparse univariate polynomial `sum c_i z^{e_i}`, exponents strictly
/// increasing, coefficients nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    field: FieldSpec,
    terms: Vec<(FieldElement, u64)>,
}

impl UnivariatePoly {
    pub fn new(field: &FieldSpec, terms: impl IntoIterator<Item = (FieldElement, u64)>) -> Result<Self, VbfError> {
        let mut raw = Vec::new();
        for (c, e) in terms {
            field.check(c)?;
            raw.push((c, e));
        }
        Ok(Self::normalized(field, raw))
    }

    fn normalized(field: &FieldSpec, mut raw: Vec<(FieldElement, u64)>) -> Self {
        let order = field.order();
        for t in raw.iter_mut() {
            t.1 = normalize_exponent(t.1, order);
        }
        raw.sort_by_key(|t| t.1);
        let mut terms: Vec<(FieldElement, u64)> = Vec::with_capacity(raw.len());
        for (c, e) in raw {
            match terms.last_mut() {
                Some(last) if last.1 == e => last.0 += c,
                _ => terms.push((c, e)),
            }
        }
        terms.retain(|t| !t.0.is_zero());
        UnivariatePoly {
            field: field.clone(),
            terms,
        }
    }

    pub fn zero(field: &FieldSpec) -> Self {
        UnivariatePoly {
            field: field.clone(),
            terms: Vec::new(),
        }
    }

    pub fn monomial(field: &FieldSpec, c: FieldElement, e: u64) -> Self {
        Self::normalized(field, vec![(c, e)])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn terms(&self) -> &[(FieldElement, u64)] {
        &self.terms
    }

    pub fn add(&self, other: &UnivariatePoly) -> UnivariatePoly {
        let mut raw = self.terms.clone();
        raw.extend_from_slice(&other.terms);
        Self::normalized(&self.field, raw)
    }

    pub fn scale(&self, c: FieldElement) -> UnivariatePoly {
        let raw = self.terms.iter().map(|&(a, e)| (self.field.mul(a, c), e)).collect();
        Self::normalized(&self.field, raw)
    }

    /// Product as functions on the field.
    pub fn mul(&self, other: &UnivariatePoly) -> UnivariatePoly {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(a, e) in &self.terms {
            for &(b, d) in &other.terms {
                raw.push((self.field.mul(a, b), e + d));
            }
        }
        Self::normalized(&self.field, raw)
    }

    /// `p(z)^{2^k}`, computed termwise.
    pub fn frob(&self, k: u32) -> UnivariatePoly {
        let raw = self
            .terms
            .iter()
            .map(|&(c, e)| (self.field.frob(c, k), e << (k % self.field.n())))
            .collect();
        Self::normalized(&self.field, raw)
    }

    /// `tr_m^n(p(z)) = sum_j p(z)^{2^{mj}}`.
    pub fn relative_trace(&self, m: u32) -> Result<UnivariatePoly, VbfError> {
        let n = self.field.n();
        if m == 0 || !n.is_multiple_of(m) {
            return Err(GfError::NotDivisor { m, n }.into());
        }
        let mut acc = UnivariatePoly::zero(&self.field);
        for j in 0..n / m {
            acc = acc.add(&self.frob(j * m));
        }
        Ok(acc)
    }

    pub fn eval(&self, z: FieldElement) -> Result<FieldElement, VbfError> {
        self.field.check(z)?;
        Ok(self.eval_unchecked(z))
    }

    #[inline]
    pub fn eval_unchecked(&self, z: FieldElement) -> FieldElement {
        self.terms.iter().fold(FieldElement::ZERO, |acc, &(c, e)| {
            acc + self.field.mul(c, self.field.pow(z, e))
        })
    }

    pub fn to_table(&self) -> FunctionTable {
        FunctionTable::from_fn(&self.field, |z| self.eval_unchecked(z))
    }

    /// Algebraic degree: max binary weight of an exponent.
    pub fn algebraic_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.1.count_ones()).max().unwrap_or(0)
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(c, e)| {
                let zpart = match e {
                    0 => String::new(),
                    1 => "z".to_string(),
                    _ => format!("z^{e}"),
                };
                match (c == FieldElement::ONE, zpart.is_empty()) {
                    (true, true) => "1".to_string(),
                    (true, false) => zpart,
                    (false, true) => format!("{c}"),
                    (false, false) => format!("{c}*{zpart}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnivariatePoly[{}]({})", self.field.n(), self)
    }
}

// ---------------------------------------------------------------------------

/// One term `c * x^ex * y^ey` of a bivariate coordinate polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiTerm {
    pub coeff: FieldElement,
    pub ex: u64,
    pub ey: u64,
}

impl BiTerm {
    pub fn new(coeff: FieldElement, ex: u64, ey: u64) -> Self {
        BiTerm { coeff, ex, ey }
    }

    pub fn unit(ex: u64, ey: u64) -> Self {
        BiTerm::new(FieldElement::ONE, ex, ey)
    }
}

/// A pair of polynomials over GF(2^m) in `x, y`, i.e. a map GF(2^m)^2 -> GF(2^m)^2.
#[derive(Clone, PartialEq, Eq)]
pub struct BivariateFunc {
    component: FieldSpec,
    first: Vec<BiTerm>,
    second: Vec<BiTerm>,
}

fn normalize_biterms(field: &FieldSpec, terms: Vec<BiTerm>) -> Vec<BiTerm> {
    let order = field.order();
    let mut raw: Vec<BiTerm> = terms
        .into_iter()
        .map(|t| BiTerm {
            coeff: t.coeff,
            ex: normalize_exponent(t.ex, order),
            ey: normalize_exponent(t.ey, order),
        })
        .collect();
    raw.sort_by_key(|t| (t.ex, t.ey));
    let mut out: Vec<BiTerm> = Vec::with_capacity(raw.len());
    for t in raw {
        match out.last_mut() {
            Some(last) if (last.ex, last.ey) == (t.ex, t.ey) => last.coeff += t.coeff,
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

impl BivariateFunc {
    pub fn new(component: &FieldSpec, first: Vec<BiTerm>, second: Vec<BiTerm>) -> Result<Self, VbfError> {
        for t in first.iter().chain(second.iter()) {
            component.check(t.coeff)?;
        }
        Ok(BivariateFunc {
            component: component.clone(),
            first: normalize_biterms(component, first),
            second: normalize_biterms(component, second),
        })
    }

    pub fn component(&self) -> &FieldSpec {
        &self.component
    }

    pub fn first(&self) -> &[BiTerm] {
        &self.first
    }

    pub fn second(&self) -> &[BiTerm] {
        &self.second
    }

    #[inline]
    fn eval_terms(&self, terms: &[BiTerm], x: FieldElement, y: FieldElement) -> FieldElement {
        let f = &self.component;
        terms.iter().fold(FieldElement::ZERO, |acc, t| {
            acc + f.mul(t.coeff, f.mul(f.pow(x, t.ex), f.pow(y, t.ey)))
        })
    }

    pub fn eval(&self, x: FieldElement, y: FieldElement) -> Result<(FieldElement, FieldElement), VbfError> {
        self.component.check(x)?;
        self.component.check(y)?;
        Ok(self.eval_unchecked(x, y))
    }

    #[inline]
    pub fn eval_unchecked(&self, x: FieldElement, y: FieldElement) -> (FieldElement, FieldElement) {
        (self.eval_terms(&self.first, x, y), self.eval_terms(&self.second, x, y))
    }

    /// Table of `embed . f . split` over GF(2^{2m}).
    pub fn to_table(&self, map: &SubfieldMap) -> Result<FunctionTable, VbfError> {
        same_field(map.component(), &self.component)?;
        let parent = map.parent();
        let mut lut = vec![0u32; parent.size()];
        for x in self.component.elements() {
            for y in self.component.elements() {
                let (u, v) = self.eval_unchecked(x, y);
                lut[map.embed(x, y).0 as usize] = map.embed(u, v).0;
            }
        }
        Ok(FunctionTable {
            field: parent.clone(),
            lut,
        })
    }
}

fn fmt_biterms(terms: &[BiTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mono = |v: &str, e: u64| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    };
    terms
        .iter()
        .map(|t| {
            let mut s = String::new();
            if t.coeff != FieldElement::ONE {
                s.push_str(&format!("{}", t.coeff));
            }
            let xy = format!("{}{}", mono("x", t.ex), mono("y", t.ey));
            if !s.is_empty() && !xy.is_empty() {
                s.push('*');
            }
            s.push_str(&xy);
            if s.is_empty() {
                s.push('1');
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for BivariateFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_biterms(&self.first), fmt_biterms(&self.second))
    }
}

impl fmt::Debug for BivariateFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivariateFunc[{}]{}", self.component.n(), self)
    }
}

// ---------------------------------------------------------------------------

/// `L(z) = sum_i coeffs[i] z^{2^i}`, a GF(2)-linear map of GF(2^n).
#[derive(Clone, PartialEq, Eq)]
pub struct LinearizedPoly {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for LinearizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearizedPoly[{}]({})", self.field.n(), self.to_poly())
    }
}

impl LinearizedPoly {
    pub fn new(field: &FieldSpec, coeffs: Vec<FieldElement>) -> Result<Self, VbfError> {
        if coeffs.len() != field.n() as usize {
            return Err(VbfError::TableLength {
                expected: field.n() as usize,
                found: coeffs.len(),
            });
        }
        for &c in &coeffs {
            field.check(c)?;
        }
        Ok(LinearizedPoly {
            field: field.clone(),
            coeffs,
        })
    }

    /// From `(coefficient, i)` pairs meaning `c z^{2^i}`; `i` is taken mod n.
    pub fn from_terms(
        field: &FieldSpec,
        terms: impl IntoIterator<Item = (FieldElement, u32)>,
    ) -> Result<Self, VbfError> {
        let mut coeffs = vec![FieldElement::ZERO; field.n() as usize];
        for (c, i) in terms {
            field.check(c)?;
            coeffs[(i % field.n()) as usize] += c;
        }
        Ok(LinearizedPoly {
            field: field.clone(),
            coeffs,
        })
    }

    /// `z^{2^{m+s}} + mu z^{2^s} + beta z`.
    pub fn trinomial(
        field: &FieldSpec,
        m: u32,
        s: u32,
        mu: FieldElement,
        beta: FieldElement,
    ) -> Result<Self, VbfError> {
        Self::from_terms(field, [(FieldElement::ONE, m + s), (mu, s), (beta, 0)])
    }

    pub fn random<R: Rng>(field: &FieldSpec, rng: &mut R) -> Self {
        let coeffs = (0..field.n())
            .map(|_| FieldElement(rng.random_range(0..field.size() as u32)))
            .collect();
        LinearizedPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    #[inline]
    pub fn eval_unchecked(&self, z: FieldElement) -> FieldElement {
        let f = &self.field;
        let mut acc = FieldElement::ZERO;
        let mut zp = z;
        for &c in &self.coeffs {
            acc += f.mul(c, zp);
            zp = f.square(zp);
        }
        acc
    }

    pub fn eval(&self, z: FieldElement) -> Result<FieldElement, VbfError> {
        self.field.check(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub fn to_poly(&self) -> UnivariatePoly {
        let terms = self.coeffs.iter().enumerate().map(|(i, &c)| (c, 1u64 << i)).collect();
        UnivariatePoly::normalized(&self.field, terms)
    }

    pub fn to_table(&self) -> FunctionTable {
        FunctionTable::from_fn(&self.field, |z| self.eval_unchecked(z))
    }

    /// Images of the polynomial basis vectors, i.e. the columns of the
    /// n x n GF(2) matrix of the map.
    pub fn matrix_columns(&self) -> Vec<u32> {
        (0..self.field.n())
            .map(|i| self.eval_unchecked(FieldElement(1 << i)).0)
            .collect()
    }

    /// GF(2) rank of the map.
    pub fn rank(&self) -> u32 {
        small_rank(&self.matrix_columns())
    }

    /// Kernel size by evaluating every element.
    pub fn kernel_size_exhaustive(&self) -> usize {
        self.field
            .elements()
            .filter(|&z| self.eval_unchecked(z).is_zero())
            .count()
    }

    /// True iff the kernel is trivial, decided by the rank of the matrix.
    pub fn is_permutation(&self) -> bool {
        self.rank() == self.field.n()
    }

    /// Adjoint w.r.t. the trace form: `tr(y L(x)) = tr(x L*(y))`.
    pub fn adjoint(&self) -> LinearizedPoly {
        let n = self.field.n() as usize;
        let mut coeffs = vec![FieldElement::ZERO; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = (n - i) % n;
            coeffs[j] += self.field.frob(c, j as u32);
        }
        LinearizedPoly {
            field: self.field.clone(),
            coeffs,
        }
    }
}

/// GF(2) rank of a small matrix given as u32 rows (or columns).
pub fn small_rank(rows: &[u32]) -> u32 {
    let mut basis = [0u32; 32];
    let mut rank = 0;
    for &r in rows {
        let mut v = r;
        while v != 0 {
            let top = 31 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

// ---------------------------------------------------------------------------

/// Affine permutation `z -> M z + c` of GF(2)^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    /// Images of the unit vectors.
    columns: Vec<u32>,
    constant: u32,
}

impl AffineMap {
    pub fn identity(n: u32) -> Self {
        AffineMap {
            columns: (0..n).map(|i| 1 << i).collect(),
            constant: 0,
        }
    }

    pub fn new(columns: Vec<u32>, constant: u32) -> Option<Self> {
        (small_rank(&columns) as usize == columns.len()).then_some(AffineMap { columns, constant })
    }

    /// Uniformly random invertible linear part and random constant.
    pub fn random<R: Rng>(n: u32, rng: &mut R) -> Self {
        let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        loop {
            let columns: Vec<u32> = (0..n).map(|_| rng.random::<u32>() & mask).collect();
            if let Some(map) = AffineMap::new(columns, rng.random::<u32>() & mask) {
                return map;
            }
        }
    }

    #[inline]
    pub fn apply(&self, z: FieldElement) -> FieldElement {
        let mut acc = self.constant;
        let mut bits = z.0;
        while bits != 0 {
            acc ^= self.columns[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        FieldElement(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(n: u32) -> FieldSpec {
        FieldSpec::new(n, None).unwrap()
    }

    #[test]
    fn poly_normalization() {
        let f = gf(4);
        let p = UnivariatePoly::new(
            &f,
            [
                (FieldElement(3), 18),
                (FieldElement(3), 3),
                (FieldElement(1), 0),
                (FieldElement(0), 5),
            ],
        )
        .unwrap();
        assert_eq!(p.terms(), &[(FieldElement(1), 0)]);
        let q = UnivariatePoly::monomial(&f, FieldElement::ONE, 15);
        assert_eq!(q.terms(), &[(FieldElement::ONE, 15)]);
        assert_eq!(q.eval(FieldElement::ZERO).unwrap(), FieldElement::ZERO);
        assert!(UnivariatePoly::new(&f, [(FieldElement(16), 1)]).is_err());
    }

    #[test]
    fn eval_examples() {
        let f = gf(5);
        let cube = UnivariatePoly::monomial(&f, FieldElement::ONE, 3);
        assert_eq!(cube.eval(FieldElement::ZERO).unwrap(), FieldElement::ZERO);
        let p = UnivariatePoly::new(
            &f,
            [(FieldElement::ONE, 3), (FieldElement::ONE, 1), (FieldElement::ONE, 0)],
        )
        .unwrap();
        assert!(f.elements().all(|z| !p.eval(z).unwrap().is_zero()));
        assert!(p.eval(FieldElement(32)).is_err());
    }

    #[test]
    fn to_table_examples() {
        let f = gf(3);
        assert!(UnivariatePoly::zero(&f).to_table().lut().iter().all(|&v| v == 0));
        assert_eq!(
            UnivariatePoly::monomial(&f, FieldElement::ONE, 1).to_table(),
            FunctionTable::identity(&f)
        );
        let t = UnivariatePoly::monomial(&f, FieldElement::ONE, 3).to_table();
        for z in f.elements() {
            assert_eq!(t.at(z), f.pow(z, 3));
        }
    }

    #[test]
    fn product_and_trace_are_functional() {
        let f = gf(6);
        let a = UnivariatePoly::new(&f, [(FieldElement(5), 3), (FieldElement(9), 1)]).unwrap();
        let b = UnivariatePoly::new(&f, [(FieldElement(7), 2), (FieldElement(1), 60)]).unwrap();
        let prod = a.mul(&b);
        let tr = a.relative_trace(2).unwrap();
        for z in f.elements() {
            let (av, bv) = (a.eval_unchecked(z), b.eval_unchecked(z));
            assert_eq!(prod.eval_unchecked(z), f.mul(av, bv));
            assert_eq!(tr.eval_unchecked(z), f.trace(2, av).unwrap());
        }
        assert!(a.relative_trace(4).is_err());
    }

    #[test]
    fn bivariate_eval_examples() {
        let c = gf(4);
        let first = vec![
            BiTerm::unit(3, 0),
            BiTerm::unit(1, 2),
            BiTerm::unit(0, 3),
            BiTerm::unit(1, 1),
        ];
        let second = vec![
            BiTerm::unit(5, 0),
            BiTerm::unit(4, 1),
            BiTerm::unit(0, 5),
            BiTerm::unit(1, 1),
            BiTerm::unit(2, 2),
        ];
        let f = BivariateFunc::new(&c, first, second).unwrap();
        let (z, o) = (FieldElement::ZERO, FieldElement::ONE);
        assert_eq!(f.eval(z, z).unwrap(), (z, z));
        assert_eq!(f.eval(o, z).unwrap(), (o, o));
        assert_eq!(f.eval(z, o).unwrap(), (o, o));
        assert!(f.eval(FieldElement(16), z).is_err());
    }

    #[test]
    fn bivariate_identity_pair_is_identity() {
        let c = gf(3);
        let parent = gf(6);
        let map = SubfieldMap::new(&parent, &c).unwrap();
        let id = BivariateFunc::new(&c, vec![BiTerm::unit(1, 0)], vec![BiTerm::unit(0, 1)]).unwrap();
        assert_eq!(id.to_table(&map).unwrap(), FunctionTable::identity(&parent));
        let wrong = SubfieldMap::new(&gf(8), &gf(4)).unwrap();
        assert!(id.to_table(&wrong).is_err());
    }

    #[test]
    fn linearized_examples() {
        let f = gf(9);
        let sq = LinearizedPoly::from_terms(&f, [(FieldElement::ONE, 1)]).unwrap();
        assert!(sq.is_permutation());
        let art = LinearizedPoly::from_terms(&f, [(FieldElement::ONE, 1), (FieldElement::ONE, 0)]).unwrap();
        assert!(!art.is_permutation());
        assert_eq!(art.eval(FieldElement::ONE).unwrap(), FieldElement::ZERO);
        let l = LinearizedPoly::trinomial(&f, 3, 1, f.prim_pow(5), FieldElement::ONE).unwrap();
        assert_eq!(l.eval(FieldElement::ZERO).unwrap(), FieldElement::ZERO);
        assert_eq!(l.is_permutation(), l.kernel_size_exhaustive() == 1);
    }

    #[test]
    fn linearized_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [4, 6, 9] {
            let f = gf(n);
            let l = LinearizedPoly::random(&f, &mut rng);
            for a in f.elements() {
                for b in f.elements().step_by(3) {
                    assert_eq!(l.eval_unchecked(a + b), l.eval_unchecked(a) + l.eval_unchecked(b));
                }
            }
        }
    }

    #[test]
    fn adjoint_term_rule_and_pairing() {
        let f = gf(9);
        let id = LinearizedPoly::from_terms(&f, [(FieldElement::ONE, 0)]).unwrap();
        assert_eq!(id.adjoint(), id);
        let c = f.prim_pow(17);
        let single = LinearizedPoly::from_terms(&f, [(c, 3)]).unwrap();
        let expect = LinearizedPoly::from_terms(&f, [(f.frob(c, 6), 6)]).unwrap();
        assert_eq!(single.adjoint(), expect);

        // L(z) = z^16 + u^5 z^2 + z over GF(2^9), m = 3, s = 1.
        let mu = f.prim_pow(5);
        let l = LinearizedPoly::trinomial(&f, 3, 1, mu, FieldElement::ONE).unwrap();
        let printed =
            LinearizedPoly::from_terms(&f, [(FieldElement::ONE, 5), (f.frob(mu, 8), 8), (FieldElement::ONE, 0)])
                .unwrap();
        assert_eq!(l.adjoint(), printed);
        let adj = l.adjoint();
        for x in f.elements() {
            for y in f.elements().step_by(5) {
                let lhs = f.abs_trace(f.mul(y, l.eval_unchecked(x)));
                let rhs = f.abs_trace(f.mul(x, adj.eval_unchecked(y)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn lut_round_trip() {
        let f = gf(5);
        let t = UnivariatePoly::monomial(&f, FieldElement(3), 7).to_table();
        let mut buf = Vec::new();
        t.write_lut(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n=5 modulus=0x25 primitive=0x2\n"));
        assert_eq!(text.lines().count(), 33);
        let back = FunctionTable::read_lut(&buf[..]).unwrap();
        assert_eq!(back, t);
        let mut again = Vec::new();
        back.write_lut(&mut again).unwrap();
        assert_eq!(again, buf);
        let short = "n=5 modulus=0x25 primitive=0x2\n01\n";
        assert!(matches!(
            FunctionTable::read_lut(short.as_bytes()),
            Err(VbfError::TableLength { .. })
        ));
    }

    #[test]
    fn affine_maps_are_bijective() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = gf(6);
        let a = AffineMap::random(6, &mut rng);
        let mut seen: Vec<u32> = f.elements().map(|z| a.apply(z).0).collect();
        seen.sort();
        assert_eq!(seen, (0..64).collect::<Vec<_>>());
        assert!(AffineMap::new(vec![1, 1], 0).is_none());
    }
}
