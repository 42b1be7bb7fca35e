//! Arithmetic in binary extension fields GF(2^n), 1 <= n <= 24.
//!
//! Elements are plain bit patterns in the polynomial basis of a fixed
//! irreducible modulus. A [`FieldSpec`] owns the modulus, a fixed primitive
//! element and (for n <= 20) log/antilog tables; it is cheap to clone.
//!
//! Besides the four operations this module provides relative traces, cube
//! classification, primitive-element enumeration and the subfield embeddings
//! used to turn bivariate forms over GF(2^m)^2 into tables over GF(2^{2m}).

use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 24;

/// Fields up to this degree get log/antilog tables.
const TABLE_DEGREE: u32 = 20;

/// Lexicographically least irreducible polynomial of each degree, bit `i`
/// holding the coefficient of `x^i`. Degree 1 uses `x + 1` by convention.
pub const DEFAULT_MODULI: [u64; 25] = [
    0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021, 0x8003, 0x1002b,
    0x20009, 0x40009, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021, 0x100001b,
];

/// Conway polynomials over GF(2) for degrees 1..=12, the defining polynomials
/// used by common computer-algebra systems. Index 0 is unused.
pub const CONWAY_POLYNOMIALS: [u64; 13] = [
    0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x5b, 0x83, 0x11d, 0x211, 0x46f, 0x805, 0x10eb,
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("extension degree {0} outside supported range 1..=24")]
    DegreeOutOfRange(u32),
    #[error("modulus 0x{modulus:x} does not have degree {n}")]
    ModulusDegree { n: u32, modulus: u64 },
    #[error("modulus 0x{0:x} is reducible over GF(2)")]
    ReducibleModulus(u64),
    #[error("element 0x{bits:x} does not belong to GF(2^{n})")]
    ForeignElement { n: u32, bits: u32 },
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("0x{0:x} is not a primitive element")]
    NotPrimitive(u32),
    #[error("{m} does not divide {n}")]
    NotDivisor { m: u32, n: u32 },
    #[error("cube classification of zero")]
    ZeroCubeClass,
    #[error("GF(2^{sub}) is not a subfield of GF(2^{parent})")]
    NotSubfield { sub: u32, parent: u32 },
    #[error("parent field degree {parent} is not twice the component degree {component}")]
    SplitDegree { parent: u32, component: u32 },
    #[error("basis elements are dependent over the embedded subfield")]
    DependentBasis,
    #[error("malformed field header: {0}")]
    BadHeader(String),
}

/// An element of some GF(2^n), stored reduced in the polynomial basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    // Characteristic 2: addition is XOR.
    #[allow(clippy::suspicious_arithmetic_impl)]
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[allow(clippy::suspicious_op_assign_impl)]
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

/// Arithmetic request for [`FieldSpec::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arith {
    Add(FieldElement, FieldElement),
    Mul(FieldElement, FieldElement),
    Inv(FieldElement),
    Pow(FieldElement, u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CubeClass {
    Cube,
    NonCube,
}

// ---------------------------------------------------------------------------
// GF(2)[x] helpers on u64 bit patterns.

#[inline]
fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Carry-less product of two polynomials of degree < 32.
#[inline]
pub(crate) fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Remainder of `a` modulo `m` in GF(2)[x].
pub(crate) fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// Irreducibility by trial division by every polynomial of degree <= n/2.
pub fn is_irreducible(p: u64) -> bool {
    let n = degree(p);
    if n < 1 {
        return false;
    }
    for d in 1..=n / 2 {
        for q in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(p, q) == 0 {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= v {
        if v.is_multiple_of(p) {
            out.push(p);
            while v.is_multiple_of(p) {
                v /= p;
            }
        }
        p += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Euler's totient, used for primitive-element counts.
pub fn euler_phi(v: u64) -> u64 {
    prime_factors(v).into_iter().fold(v, |acc, p| acc / p * (p - 1))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------------------

struct LogTables {
    /// exp[i] = g^i for i in 0..2*(2^n - 1).
    exp: Vec<u32>,
    /// log[x] for x != 0; log[0] unused.
    log: Vec<u32>,
}

struct FieldInner {
    n: u32,
    modulus: u64,
    primitive: FieldElement,
    order: u64,
    order_factors: Vec<u64>,
    tables: Option<LogTables>,
}

/// A concrete representation of GF(2^n).
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({})", self.header())
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.n == other.inner.n
            && self.inner.modulus == other.inner.modulus
            && self.inner.primitive == other.inner.primitive
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds GF(2^n). Without an explicit modulus the shipped default is
    /// used; the primitive element is the least one of full order.
    pub fn new(n: u32, modulus: Option<u64>) -> Result<FieldSpec, GfError> {
        if n == 0 || n > MAX_DEGREE {
            return Err(GfError::DegreeOutOfRange(n));
        }
        let modulus = modulus.unwrap_or(DEFAULT_MODULI[n as usize]);
        if degree(modulus) != n as i32 {
            return Err(GfError::ModulusDegree { n, modulus });
        }
        if !is_irreducible(modulus) {
            return Err(GfError::ReducibleModulus(modulus));
        }
        let order = (1u64 << n) - 1;
        let mut inner = FieldInner {
            n,
            modulus,
            primitive: FieldElement::ONE,
            order,
            order_factors: prime_factors(order),
            tables: None,
        };
        let probe = FieldSpec {
            inner: Arc::new(FieldInner {
                n,
                modulus,
                primitive: FieldElement::ONE,
                order,
                order_factors: inner.order_factors.clone(),
                tables: None,
            }),
        };
        inner.primitive = (1..=order as u32)
            .map(FieldElement)
            .find(|&g| probe.is_primitive(g))
            .expect("multiplicative group of a finite field is cyclic");
        if n <= TABLE_DEGREE {
            inner.tables = Some(build_tables(&probe, inner.primitive));
        }
        Ok(FieldSpec { inner: Arc::new(inner) })
    }

    /// The same field with a different distinguished primitive element.
    pub fn with_primitive(&self, g: FieldElement) -> Result<FieldSpec, GfError> {
        self.check(g)?;
        if !self.is_primitive(g) {
            return Err(GfError::NotPrimitive(g.0));
        }
        let tables = if self.inner.n <= TABLE_DEGREE {
            Some(build_tables(self, g))
        } else {
            None
        };
        Ok(FieldSpec {
            inner: Arc::new(FieldInner {
                n: self.inner.n,
                modulus: self.inner.modulus,
                primitive: g,
                order: self.inner.order,
                order_factors: self.inner.order_factors.clone(),
                tables,
            }),
        })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.inner.n
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.inner.modulus
    }

    #[inline]
    pub fn primitive(&self) -> FieldElement {
        self.inner.primitive
    }

    /// Number of elements, 2^n.
    #[inline]
    pub fn size(&self) -> usize {
        1usize << self.inner.n
    }

    /// Order of the multiplicative group, 2^n - 1.
    #[inline]
    pub fn order(&self) -> u64 {
        self.inner.order
    }

    /// All elements in bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size() as u32).map(FieldElement)
    }

    pub fn check(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if (a.0 as u64) >> self.inner.n != 0 {
            Err(GfError::ForeignElement {
                n: self.inner.n,
                bits: a.0,
            })
        } else {
            Ok(a)
        }
    }

    /// Validating constructor for raw bit patterns.
    pub fn element(&self, bits: u32) -> Result<FieldElement, GfError> {
        self.check(FieldElement(bits))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.inner.tables {
            Some(t) => FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(poly_rem(clmul(a.0 as u64, b.0 as u64), self.inner.modulus) as u32)
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.pow(a, self.inner.order - 1))
    }

    /// `a^e` with `0^0 = 1`; the exponent is reduced mod 2^n - 1 for a != 0.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let e = e % self.inner.order;
        if let Some(t) = &self.inner.tables {
            let l = (t.log[a.0 as usize] as u64 * e) % self.inner.order;
            return FieldElement(t.exp[l as usize]);
        }
        let mut result = FieldElement::ONE;
        let mut base = a;
        let mut e = e;
        while e != 0 {
            if e & 1 != 0 {
                result = self.mul_slow(result, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        result
    }

    /// `a^e` for a signed exponent; `a` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, a: FieldElement, e: i64) -> FieldElement {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            debug_assert!(!a.is_zero());
            let ord = self.inner.order as i64;
            self.pow(a, e.rem_euclid(ord) as u64)
        }
    }

    /// Frobenius power `a^{2^k}`.
    #[inline]
    pub fn frob(&self, a: FieldElement, k: u32) -> FieldElement {
        let k = k % self.inner.n;
        if k == 0 {
            return a;
        }
        self.pow(a, 1u64 << k)
    }

    /// `u^k` for the distinguished primitive element `u`.
    pub fn prim_pow(&self, k: i64) -> FieldElement {
        self.pow_signed(self.inner.primitive, k)
    }

    /// Checked arithmetic; rejects foreign operands and inversion of zero.
    pub fn arith(&self, op: Arith) -> Result<FieldElement, GfError> {
        match op {
            Arith::Add(a, b) => Ok(self.check(a)? + self.check(b)?),
            Arith::Mul(a, b) => Ok(self.mul(self.check(a)?, self.check(b)?)),
            Arith::Inv(a) => self.inv(self.check(a)?),
            Arith::Pow(a, e) => Ok(self.pow(self.check(a)?, e)),
        }
    }

    /// Relative trace `z + z^{2^m} + ... + z^{2^{n-m}}` onto GF(2^m).
    pub fn trace(&self, m: u32, z: FieldElement) -> Result<FieldElement, GfError> {
        let n = self.inner.n;
        if m == 0 || !n.is_multiple_of(m) {
            return Err(GfError::NotDivisor { m, n });
        }
        Ok(self.trace_unchecked(m, z))
    }

    #[inline]
    pub(crate) fn trace_unchecked(&self, m: u32, z: FieldElement) -> FieldElement {
        let mut acc = z;
        let mut t = z;
        for _ in 1..self.inner.n / m {
            t = self.frob(t, m);
            acc += t;
        }
        acc
    }

    /// Absolute trace onto GF(2), returned as 0 or 1.
    #[inline]
    pub fn abs_trace(&self, z: FieldElement) -> u32 {
        self.trace_unchecked(1, z).0
    }

    pub fn cube_class(&self, z: FieldElement) -> Result<CubeClass, GfError> {
        self.check(z)?;
        if z.is_zero() {
            return Err(GfError::ZeroCubeClass);
        }
        if self.inner.n % 2 == 1 {
            return Ok(CubeClass::Cube);
        }
        if self.pow(z, self.inner.order / 3) == FieldElement::ONE {
            Ok(CubeClass::Cube)
        } else {
            Ok(CubeClass::NonCube)
        }
    }

    pub fn multiplicative_order(&self, a: FieldElement) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let mut ord = self.inner.order;
        for &p in &self.inner.order_factors {
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == FieldElement::ONE {
                ord /= p;
            }
        }
        Some(ord)
    }

    pub fn is_primitive(&self, a: FieldElement) -> bool {
        if a.is_zero() {
            return false;
        }
        self.inner
            .order_factors
            .iter()
            .all(|&p| self.pow(a, self.inner.order / p) != FieldElement::ONE)
    }

    /// Every element of full multiplicative order, ascending by bit pattern.
    pub fn primitive_elements(&self) -> Vec<FieldElement> {
        (1..=self.inner.order as u32)
            .map(FieldElement)
            .filter(|&g| self.is_primitive(g))
            .collect()
    }

    /// One primitive element per Frobenius orbit (the least of each orbit),
    /// ascending. Conjugate primitives give functions related by the field
    /// automorphism, so sweeps only need these.
    pub fn primitive_orbit_representatives(&self) -> Vec<FieldElement> {
        let mut seen = std::collections::HashSet::new();
        let mut reps = Vec::new();
        for g in self.primitive_elements() {
            if seen.contains(&g) {
                continue;
            }
            reps.push(g);
            let mut c = g;
            for _ in 0..self.inner.n {
                seen.insert(c);
                c = self.square(c);
            }
        }
        reps
    }

    /// Least root of the Conway polynomial of degree n, when tabulated. Its
    /// Frobenius orbit is the primitive element a computer-algebra system
    /// would call the field generator.
    pub fn conway_root(&self) -> Option<FieldElement> {
        let poly = *CONWAY_POLYNOMIALS.get(self.inner.n as usize)?;
        self.elements().find(|&z| {
            let mut acc = FieldElement::ZERO;
            let mut power = FieldElement::ONE;
            for i in 0..=self.inner.n {
                if poly >> i & 1 == 1 {
                    acc += power;
                }
                power = self.mul(power, z);
            }
            acc.is_zero()
        })
    }

    /// `n=<int> modulus=0x<hex> primitive=0x<hex>`
    pub fn header(&self) -> String {
        format!(
            "n={} modulus=0x{:x} primitive=0x{:x}",
            self.inner.n, self.inner.modulus, self.inner.primitive.0
        )
    }

    pub fn from_header(line: &str) -> Result<FieldSpec, GfError> {
        let bad = || GfError::BadHeader(line.to_string());
        let mut n = None;
        let mut modulus = None;
        let mut primitive = None;
        for tok in line.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(bad)?;
            match key {
                "n" => n = Some(val.parse::<u32>().map_err(|_| bad())?),
                "modulus" => modulus = Some(parse_hex(val).ok_or_else(bad)?),
                "primitive" => primitive = Some(parse_hex(val).ok_or_else(bad)? as u32),
                _ => return Err(bad()),
            }
        }
        let field = FieldSpec::new(n.ok_or_else(bad)?, Some(modulus.ok_or_else(bad)?))?;
        let g = FieldElement(primitive.ok_or_else(bad)?);
        if g == field.primitive() {
            Ok(field)
        } else {
            field.with_primitive(g)
        }
    }

    /// The subfield GF(2^m) as a set: elements with `z^{2^m} = z`.
    pub fn in_subfield(&self, m: u32, z: FieldElement) -> bool {
        self.frob(z, m) == z
    }
}

pub(crate) fn parse_hex(s: &str) -> Option<u64> {
    let s = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u64::from_str_radix(s, 16).ok()
}

fn build_tables(field: &FieldSpec, g: FieldElement) -> LogTables {
    let order = field.inner.order as usize;
    let mut exp = vec![0u32; 2 * order.max(1)];
    let mut log = vec![0u32; order + 1];
    let mut x = FieldElement::ONE;
    for i in 0..order {
        exp[i] = x.0;
        log[x.0 as usize] = i as u32;
        x = field.mul_slow(x, g);
    }
    for i in order..2 * order {
        exp[i] = exp[i - order];
    }
    LogTables { exp, log }
}

// ---------------------------------------------------------------------------

/// Field homomorphism GF(2^k) -> GF(2^n) for k | n, fixed by sending the
/// generator `x` of the small field to the least root of its modulus.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    sub: FieldSpec,
    parent: FieldSpec,
    image_of_x: FieldElement,
    /// Images of the polynomial-basis vectors x^i.
    basis_images: Vec<FieldElement>,
}

impl SubfieldEmbedding {
    pub fn new(sub: &FieldSpec, parent: &FieldSpec) -> Result<Self, GfError> {
        let (k, n) = (sub.n(), parent.n());
        if n % k != 0 {
            return Err(GfError::NotSubfield { sub: k, parent: n });
        }
        // Roots of the sub-modulus live in the order-(2^k - 1) subgroup.
        let step = parent.order() / sub.order();
        let gen = parent.pow(parent.primitive(), step);
        let mut candidates: Vec<FieldElement> = (0..sub.order())
            .map(|j| parent.pow(gen, j))
            .filter(|&w| eval_gf2_poly(parent, sub.modulus(), w).is_zero())
            .collect();
        if k == 1 {
            // x + 1 has root 1.
            candidates.push(FieldElement::ONE);
        }
        let image_of_x = *candidates
            .iter()
            .min()
            .expect("an irreducible polynomial of degree k splits in GF(2^n) when k | n");
        let mut basis_images = Vec::with_capacity(k as usize);
        let mut p = FieldElement::ONE;
        for _ in 0..k {
            basis_images.push(p);
            p = parent.mul(p, image_of_x);
        }
        Ok(SubfieldEmbedding {
            sub: sub.clone(),
            parent: parent.clone(),
            image_of_x,
            basis_images,
        })
    }

    pub fn sub(&self) -> &FieldSpec {
        &self.sub
    }

    pub fn parent(&self) -> &FieldSpec {
        &self.parent
    }

    pub fn image_of_generator(&self) -> FieldElement {
        self.image_of_x
    }

    #[inline]
    pub fn embed(&self, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut bits = x.0;
        while bits != 0 {
            let i = bits.trailing_zeros();
            acc += self.basis_images[i as usize];
            bits &= bits - 1;
        }
        acc
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn pull_back(&self, z: FieldElement) -> Option<FieldElement> {
        if !self.parent.in_subfield(self.sub.n(), z) {
            return None;
        }
        // Echelonize the basis images by leading bit, tracking combinations.
        let mut echelon: Vec<(u32, u32)> = Vec::with_capacity(self.basis_images.len());
        for (i, b) in self.basis_images.iter().enumerate() {
            let mut row = (b.0, 1u32 << i);
            for e in &echelon {
                if row.0 & (1 << (31 - e.0.leading_zeros())) != 0 {
                    row.0 ^= e.0;
                    row.1 ^= e.1;
                }
            }
            echelon.push(row);
            echelon.sort_by_key(|e| std::cmp::Reverse(e.0));
        }
        let mut target = (z.0, 0u32);
        for e in &echelon {
            if target.0 & (1 << (31 - e.0.leading_zeros())) != 0 {
                target.0 ^= e.0;
                target.1 ^= e.1;
            }
        }
        (target.0 == 0).then_some(FieldElement(target.1))
    }
}

/// Evaluates a GF(2)-coefficient polynomial (bit pattern) at a field element.
pub(crate) fn eval_gf2_poly(field: &FieldSpec, poly: u64, z: FieldElement) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    for i in (0..=degree(poly).max(0)).rev() {
        acc = field.mul(acc, z);
        if (poly >> i) & 1 != 0 {
            acc += FieldElement::ONE;
        }
    }
    acc
}

/// The isomorphism GF(2^m)^2 -> GF(2^{2m}), `(x, y) -> x*b0 + y*b1`.
#[derive(Clone, Debug)]
pub struct SubfieldMap {
    embedding: SubfieldEmbedding,
    basis: (FieldElement, FieldElement),
    /// Image of each GF(2)-basis vector of GF(2^m)^2 (x-bits then y-bits).
    images: Vec<u32>,
    /// Row `i` of the inverse matrix: which (x, y) bits parent bit `i` maps to.
    inverse: Vec<u64>,
}

impl SubfieldMap {
    /// Default basis: b0 = 1 and b1 the least parent element outside the
    /// embedded subfield.
    pub fn new(parent: &FieldSpec, component: &FieldSpec) -> Result<Self, GfError> {
        if parent.n() != 2 * component.n() {
            return Err(GfError::SplitDegree {
                parent: parent.n(),
                component: component.n(),
            });
        }
        let b1 = parent
            .elements()
            .find(|&z| !parent.in_subfield(component.n(), z))
            .expect("proper subfield");
        Self::with_basis(parent, component, (FieldElement::ONE, b1))
    }

    pub fn with_basis(
        parent: &FieldSpec,
        component: &FieldSpec,
        basis: (FieldElement, FieldElement),
    ) -> Result<Self, GfError> {
        if parent.n() != 2 * component.n() {
            return Err(GfError::SplitDegree {
                parent: parent.n(),
                component: component.n(),
            });
        }
        parent.check(basis.0)?;
        parent.check(basis.1)?;
        let embedding = SubfieldEmbedding::new(component, parent)?;
        let m = component.n() as usize;
        let mut images = Vec::with_capacity(2 * m);
        for b in [basis.0, basis.1] {
            for i in 0..m {
                let e = embedding.embed(FieldElement(1 << i));
                images.push(parent.mul(e, b).0);
            }
        }
        let inverse = invert_gf2(&images).ok_or(GfError::DependentBasis)?;
        Ok(SubfieldMap {
            embedding,
            basis,
            images,
            inverse,
        })
    }

    pub fn parent(&self) -> &FieldSpec {
        self.embedding.parent()
    }

    pub fn component(&self) -> &FieldSpec {
        self.embedding.sub()
    }

    pub fn basis(&self) -> (FieldElement, FieldElement) {
        self.basis
    }

    pub fn embedding(&self) -> &SubfieldEmbedding {
        &self.embedding
    }

    /// `x*b0 + y*b1`.
    #[inline]
    pub fn embed(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let v = (x.0 as u64) | ((y.0 as u64) << self.component().n());
        let mut acc = 0u32;
        let mut bits = v;
        while bits != 0 {
            acc ^= self.images[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        FieldElement(acc)
    }

    #[inline]
    pub fn split(&self, z: FieldElement) -> (FieldElement, FieldElement) {
        let mut v = 0u64;
        let mut bits = z.0;
        while bits != 0 {
            v ^= self.inverse[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        let m = self.component().n();
        (FieldElement((v & ((1 << m) - 1)) as u32), FieldElement((v >> m) as u32))
    }

    /// Checked variants rejecting values outside the expected fields.
    pub fn try_embed(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, GfError> {
        self.component().check(x)?;
        self.component().check(y)?;
        Ok(self.embed(x, y))
    }

    pub fn try_split(&self, z: FieldElement) -> Result<(FieldElement, FieldElement), GfError> {
        self.parent().check(z)?;
        Ok(self.split(z))
    }
}

/// Inverts a square GF(2) matrix given by the images of the unit vectors
/// (column `j` = `cols[j]`). Returns, for each output bit `i`, the preimage
/// of the unit vector `e_i` as a bit mask.
fn invert_gf2(cols: &[u32]) -> Option<Vec<u64>> {
    let k = cols.len();
    // Augmented rows: (image, preimage) pairs, reduce to the identity.
    let mut rows: Vec<(u64, u64)> = cols.iter().enumerate().map(|(j, &c)| (c as u64, 1u64 << j)).collect();
    let mut out = vec![0u64; k];
    for bit in 0..k {
        let mask = 1u64 << bit;
        let pos = (bit..k).find(|&r| rows[r].0 & mask != 0)?;
        rows.swap(bit, pos);
        let pivot = rows[bit];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != bit && row.0 & mask != 0 {
                row.0 ^= pivot.0;
                row.1 ^= pivot.1;
            }
        }
    }
    for (bit, row) in rows.iter().enumerate() {
        debug_assert_eq!(row.0, 1u64 << bit);
        out[bit] = row.1;
    }
    Some(out)
}
