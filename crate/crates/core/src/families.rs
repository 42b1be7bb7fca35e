//! Constructors for the cataloged APN families, the two new families and
//! the n = 8, 9 representative sets.
//!
//! A family is named by a [`FamilyId`]: a tag plus named parameters, read
//! from and written to a JSON5 descriptor such as
//! `{tag: "Gold", n: 8, i: 1}`. Coefficients are written as integers `k`
//! meaning `u^k` for the primitive element `u` of the field the coefficient
//! lives in (the table field for univariate families, the component field
//! GF(2^m) for bivariate ones), as `"u^k"`, or as raw bits `"0x.."`.
//! Optional `modulus` and `primitive` keys select that field's
//! representation.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::analysis::is_apn;
use crate::gf2n::{gcd, CubeClass, FieldElement, FieldSpec, GfError, SubfieldMap, MAX_DEGREE};
use crate::vbf::{BiTerm, BivariateFunc, FunctionTable, LinearizedPoly, UnivariatePoly, VbfError};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("malformed family descriptor: {0}")]
    Descriptor(String),
    #[error("unknown family tag {0:?}")]
    UnknownTag(String),
    #[error("{tag} requires parameter {name:?}")]
    MissingParam { tag: FamilyTag, name: &'static str },
    #[error("{tag} does not take parameter {name:?}")]
    UnexpectedParam { tag: FamilyTag, name: String },
    #[error("parameter {name:?}: {msg}")]
    BadParam { name: String, msg: String },
    #[error("{family}: side condition violated: {condition}")]
    Condition { family: String, condition: String },
    #[error("no representative table for n={0}; expected 8 or 9")]
    NoTable(u32),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Vbf(#[from] VbfError),
}

fn violated(family: impl fmt::Display, condition: impl Into<String>) -> FamilyError {
    FamilyError::Condition {
        family: family.to_string(),
        condition: condition.into(),
    }
}

macro_rules! tags {
    ($($v:ident => $s:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum FamilyTag { $($v),* }

        impl FamilyTag {
            pub const ALL: &'static [FamilyTag] = &[$(FamilyTag::$v),*];

            pub fn as_str(self) -> &'static str {
                match self { $(FamilyTag::$v => $s),* }
            }

            pub fn parse(s: &str) -> Result<FamilyTag, FamilyError> {
                match s {
                    $($s => Ok(FamilyTag::$v),)*
                    _ => Err(FamilyError::UnknownTag(s.to_string())),
                }
            }
        }
    };
}

tags! {
    Gold => "Gold", Kasami => "Kasami", Welch => "Welch", Niho1 => "Niho1", Niho2 => "Niho2",
    Inverse => "Inverse", Dobbertin => "Dobbertin",
    F1 => "F1", F2 => "F2", F3 => "F3", F4 => "F4", F5 => "F5", F6 => "F6", F7 => "F7", F8 => "F8",
    F9 => "F9", F10 => "F10", F11 => "F11", F12 => "F12", F13 => "F13", F14 => "F14", F15 => "F15",
    F16 => "F16", F17 => "F17",
    NewBivariate => "NewBivariate", NewTrinomial => "NewTrinomial", EdelPottP => "EdelPottP",
    Polynomial => "Polynomial", Bivariate => "Bivariate",
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Int,
    Coeff,
    CoeffList,
    UniTerms,
    BiTerms,
}

struct Slot {
    name: &'static str,
    kind: Kind,
    required: bool,
}

macro_rules! req {
    ($name:literal, $kind:ident) => {
        Slot {
            name: $name,
            kind: Kind::$kind,
            required: true,
        }
    };
}

macro_rules! opt {
    ($name:literal, $kind:ident) => {
        Slot {
            name: $name,
            kind: Kind::$kind,
            required: false,
        }
    };
}

impl FamilyTag {
    /// True when the family is a pair of polynomials over GF(2^m).
    pub fn is_bivariate(self) -> bool {
        use FamilyTag::*;
        matches!(self, F13 | F14 | F15 | F16 | F17 | NewBivariate | Bivariate)
    }

    fn slots(self) -> &'static [Slot] {
        use FamilyTag::*;
        match self {
            Gold | Kasami => &[req!("n", Int), req!("i", Int)],
            Welch | Niho1 | Niho2 | Inverse | Dobbertin => &[req!("n", Int)],
            F1 | F2 => &[req!("n", Int), req!("k", Int), req!("s", Int)],
            F3 => &[req!("n", Int), req!("i", Int), req!("s", Coeff), req!("c", Coeff)],
            F4 | F5 | F6 => &[req!("n", Int), req!("a", Coeff)],
            F7 | F8 | F9 => &[req!("n", Int), req!("s", Int), req!("v", Coeff), req!("w", Coeff)],
            F10 => &[
                req!("n", Int),
                opt!("a", Coeff),
                opt!("b", Coeff),
                opt!("c", Coeff),
                opt!("coefficients", CoeffList),
            ],
            F11 => &[req!("n", Int), req!("i", Int), opt!("w", Coeff)],
            F12 => &[req!("n", Int), req!("a", Coeff), req!("b", Coeff)],
            F13 => &[req!("m", Int), req!("k", Int), req!("i", Int), req!("alpha", Coeff)],
            F14 => &[req!("m", Int), req!("k", Int), req!("a", Coeff), req!("b", Coeff)],
            F15 => &[req!("m", Int), req!("i", Int), req!("b", Coeff), req!("c", Coeff)],
            F16 | F17 => &[req!("m", Int), req!("i", Int)],
            NewBivariate => &[req!("m", Int)],
            NewTrinomial => &[req!("m", Int), req!("s", Int), req!("mu", Coeff), req!("v", Coeff)],
            EdelPottP => &[req!("n", Int), opt!("u", Coeff)],
            Polynomial => &[req!("n", Int), req!("terms", UniTerms)],
            Bivariate => &[req!("m", Int), req!("first", BiTerms), req!("second", BiTerms)],
        }
    }
}

/// A field coefficient as written in a descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficient {
    /// `u^k` for the primitive element `u`.
    Power(i64),
    /// Raw polynomial-basis bits.
    Bits(u32),
}

impl Coefficient {
    pub fn resolve(self, field: &FieldSpec) -> Result<FieldElement, FamilyError> {
        match self {
            Coefficient::Power(k) => Ok(field.prim_pow(k)),
            Coefficient::Bits(b) => Ok(field.element(b)?),
        }
    }

    fn parse(name: &str, v: &Value) -> Result<Coefficient, FamilyError> {
        let bad = |msg: &str| FamilyError::BadParam {
            name: name.to_string(),
            msg: msg.to_string(),
        };
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(Coefficient::Power)
                .ok_or_else(|| bad("expected an integer exponent")),
            Value::String(s) => {
                let s = s.trim();
                if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
                    u32::from_str_radix(hex, 16)
                        .map(Coefficient::Bits)
                        .map_err(|_| bad("bad hex coefficient"))
                } else if let Some(k) = s.strip_prefix("u^") {
                    k.trim()
                        .parse()
                        .map(Coefficient::Power)
                        .map_err(|_| bad("bad exponent after u^"))
                } else {
                    Err(bad("expected an exponent, \"u^k\" or \"0x..\""))
                }
            }
            _ => Err(bad("expected an exponent, \"u^k\" or \"0x..\"")),
        }
    }

    fn to_json(self) -> Value {
        match self {
            Coefficient::Power(k) => json!(k),
            Coefficient::Bits(b) => json!(format!("0x{b:x}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Int(i64),
    Coeff(Coefficient),
    CoeffList(Vec<Coefficient>),
    /// `(coefficient, exponent)` pairs.
    UniTerms(Vec<(Coefficient, u64)>),
    /// `(coefficient, x exponent, y exponent)` triples.
    BiTerms(Vec<(Coefficient, u64, u64)>),
}

impl ParamValue {
    fn parse(name: &str, kind: Kind, v: &Value) -> Result<ParamValue, FamilyError> {
        let bad = |msg: &str| FamilyError::BadParam {
            name: name.to_string(),
            msg: msg.to_string(),
        };
        let array = |v: &'_ Value| v.as_array().cloned().ok_or_else(|| bad("expected an array"));
        let exponent = |v: &Value| v.as_u64().ok_or_else(|| bad("exponents must be nonnegative integers"));
        Ok(match kind {
            Kind::Int => ParamValue::Int(v.as_i64().ok_or_else(|| bad("expected an integer"))?),
            Kind::Coeff => ParamValue::Coeff(Coefficient::parse(name, v)?),
            Kind::CoeffList => ParamValue::CoeffList(
                array(v)?
                    .iter()
                    .map(|c| Coefficient::parse(name, c))
                    .collect::<Result<_, _>>()?,
            ),
            Kind::UniTerms => ParamValue::UniTerms(
                array(v)?
                    .iter()
                    .map(|t| match t.as_array().map(Vec::as_slice) {
                        Some([c, e]) => Ok((Coefficient::parse(name, c)?, exponent(e)?)),
                        _ => Err(bad("terms are [coefficient, exponent]")),
                    })
                    .collect::<Result<_, _>>()?,
            ),
            Kind::BiTerms => ParamValue::BiTerms(
                array(v)?
                    .iter()
                    .map(|t| match t.as_array().map(Vec::as_slice) {
                        Some([c, ex, ey]) => Ok((Coefficient::parse(name, c)?, exponent(ex)?, exponent(ey)?)),
                        _ => Err(bad("terms are [coefficient, x exponent, y exponent]")),
                    })
                    .collect::<Result<_, _>>()?,
            ),
        })
    }

    fn to_json(&self) -> Value {
        match self {
            ParamValue::Int(i) => json!(i),
            ParamValue::Coeff(c) => c.to_json(),
            ParamValue::CoeffList(cs) => Value::Array(cs.iter().map(|c| c.to_json()).collect()),
            ParamValue::UniTerms(ts) => Value::Array(ts.iter().map(|(c, e)| json!([c.to_json(), e])).collect()),
            ParamValue::BiTerms(ts) => {
                Value::Array(ts.iter().map(|(c, ex, ey)| json!([c.to_json(), ex, ey])).collect())
            }
        }
    }
}

/// A family tag with its named parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyId {
    tag: FamilyTag,
    params: BTreeMap<String, ParamValue>,
    modulus: Option<u64>,
    primitive: Option<u32>,
}

impl FamilyId {
    /// Validates that `params` holds exactly the names the tag requires.
    pub fn new(tag: FamilyTag, params: impl IntoIterator<Item = (String, ParamValue)>) -> Result<Self, FamilyError> {
        let params: BTreeMap<String, ParamValue> = params.into_iter().collect();
        let slots = tag.slots();
        for (name, value) in &params {
            let slot = slots
                .iter()
                .find(|s| s.name == name)
                .ok_or_else(|| FamilyError::UnexpectedParam {
                    tag,
                    name: name.clone(),
                })?;
            let ok = matches!(
                (slot.kind, value),
                (Kind::Int, ParamValue::Int(_))
                    | (Kind::Coeff, ParamValue::Coeff(_))
                    | (Kind::CoeffList, ParamValue::CoeffList(_))
                    | (Kind::UniTerms, ParamValue::UniTerms(_))
                    | (Kind::BiTerms, ParamValue::BiTerms(_))
            );
            if !ok {
                return Err(FamilyError::BadParam {
                    name: name.clone(),
                    msg: format!("wrong kind for {tag}"),
                });
            }
        }
        if let Some(s) = slots.iter().find(|s| s.required && !params.contains_key(s.name)) {
            return Err(FamilyError::MissingParam { tag, name: s.name });
        }
        Ok(FamilyId {
            tag,
            params,
            modulus: None,
            primitive: None,
        })
    }

    /// Shorthand for families whose parameters are all integers.
    pub fn with_ints(tag: FamilyTag, ints: &[(&str, i64)]) -> Result<Self, FamilyError> {
        Self::new(tag, ints.iter().map(|&(k, v)| (k.to_string(), ParamValue::Int(v))))
    }

    /// Parses a JSON5 descriptor.
    pub fn parse(text: &str) -> Result<Self, FamilyError> {
        let value: Value = json5::from_str(text).map_err(|e| FamilyError::Descriptor(e.to_string()))?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self, FamilyError> {
        let obj = value
            .as_object()
            .ok_or_else(|| FamilyError::Descriptor("expected an object".into()))?;
        let tag = obj
            .get("tag")
            .and_then(Value::as_str)
            .ok_or_else(|| FamilyError::Descriptor("missing string field \"tag\"".into()))?;
        let tag = FamilyTag::parse(tag)?;
        let mut params = Vec::new();
        let mut modulus = None;
        let mut primitive = None;
        for (name, v) in obj {
            match name.as_str() {
                "tag" => {}
                "modulus" => modulus = Some(parse_bits(name, v)?),
                "primitive" => {
                    primitive = Some(u32::try_from(parse_bits(name, v)?).map_err(|_| FamilyError::BadParam {
                        name: name.clone(),
                        msg: "too large".into(),
                    })?)
                }
                _ => {
                    let slot =
                        tag.slots()
                            .iter()
                            .find(|s| s.name == name)
                            .ok_or_else(|| FamilyError::UnexpectedParam {
                                tag,
                                name: name.clone(),
                            })?;
                    params.push((name.clone(), ParamValue::parse(name, slot.kind, v)?));
                }
            }
        }
        let mut id = Self::new(tag, params)?;
        id.modulus = modulus;
        id.primitive = primitive;
        Ok(id)
    }

    /// Descriptor with keys in sorted order.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("tag".into(), json!(self.tag.as_str()));
        for (k, v) in &self.params {
            obj.insert(k.clone(), v.to_json());
        }
        if let Some(p) = self.modulus {
            obj.insert("modulus".into(), json!(format!("0x{p:x}")));
        }
        if let Some(g) = self.primitive {
            obj.insert("primitive".into(), json!(format!("0x{g:x}")));
        }
        Value::Object(obj)
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn params(&self) -> &BTreeMap<String, ParamValue> {
        &self.params
    }

    /// Selects the representation of the coefficient field.
    pub fn with_field(mut self, modulus: Option<u64>, primitive: Option<u32>) -> Self {
        self.modulus = modulus;
        self.primitive = primitive;
        self
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn primitive(&self) -> Option<u32> {
        self.primitive
    }

    /// Degree of the table field GF(2^n).
    pub fn table_degree(&self) -> Result<u32, FamilyError> {
        if self.tag.is_bivariate() {
            Ok(2 * self.uint("m")?)
        } else if self.tag == FamilyTag::NewTrinomial {
            Ok(3 * self.uint("m")?)
        } else {
            self.uint("n")
        }
    }

    /// The field coefficients are resolved in: GF(2^m) for bivariate
    /// families, the table field otherwise.
    pub fn coefficient_field(&self) -> Result<FieldSpec, FamilyError> {
        let n = if self.tag.is_bivariate() {
            self.uint("m")?
        } else {
            self.table_degree()?
        };
        if n == 0 || n > MAX_DEGREE {
            return Err(GfError::DegreeOutOfRange(n).into());
        }
        let mut field = FieldSpec::new(n, self.modulus)?;
        if let Some(g) = self.primitive {
            field = field.with_primitive(field.element(g)?)?;
        }
        Ok(field)
    }

    /// Builds the instance with the descriptor's field choice.
    pub fn build(&self) -> Result<FamilyInstance, FamilyError> {
        let field = self.coefficient_field()?;
        match self.tag {
            FamilyTag::NewBivariate => make_new_bivariate_in(self.clone(), &field),
            FamilyTag::NewTrinomial => {
                let p = TrinomialParams::new_in(
                    &field,
                    self.uint("m")?,
                    self.uint("s")?,
                    self.coeff("mu", &field)?,
                    self.coeff("v", &field)?,
                )?;
                Ok(p.instance_with_id(self.clone()))
            }
            FamilyTag::EdelPottP => {
                let u = match self.params.get("u") {
                    Some(_) => self.coeff("u", &field)?,
                    None => field.primitive(),
                };
                let mut inst = make_edel_pott(&field, u)?;
                inst.id = self.clone();
                Ok(inst)
            }
            _ => make_known(self, &field),
        }
    }

    fn int(&self, name: &str) -> Result<i64, FamilyError> {
        match self.params.get(name) {
            Some(ParamValue::Int(v)) => Ok(*v),
            _ => Err(FamilyError::BadParam {
                name: name.into(),
                msg: "integer parameter absent".into(),
            }),
        }
    }

    fn uint(&self, name: &str) -> Result<u32, FamilyError> {
        let v = self.int(name)?;
        u32::try_from(v).map_err(|_| FamilyError::BadParam {
            name: name.into(),
            msg: format!("{v} is out of range"),
        })
    }

    fn coeff(&self, name: &str, field: &FieldSpec) -> Result<FieldElement, FamilyError> {
        match self.params.get(name) {
            Some(ParamValue::Coeff(c)) => c.resolve(field),
            _ => Err(FamilyError::BadParam {
                name: name.into(),
                msg: "coefficient absent".into(),
            }),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

fn parse_bits(name: &str, v: &Value) -> Result<u64, FamilyError> {
    let bad = || FamilyError::BadParam {
        name: name.to_string(),
        msg: "expected an integer or \"0x..\"".into(),
    };
    match v {
        Value::Number(n) => n.as_u64().ok_or_else(bad),
        Value::String(s) => {
            let s = s.trim();
            let hex = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).ok_or_else(bad)?;
            u64::from_str_radix(hex, 16).map_err(|_| bad())
        }
        _ => Err(bad()),
    }
}

/// Symbolic form of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyForm {
    Univariate(UnivariatePoly),
    Bivariate(BivariateFunc),
}

impl fmt::Display for FamilyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyForm::Univariate(p) => write!(f, "{p}"),
            FamilyForm::Bivariate(b) => write!(f, "{b}"),
        }
    }
}

/// A constructed family member with its materialized table.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub id: FamilyId,
    pub form: FamilyForm,
    pub table: FunctionTable,
}

impl FamilyInstance {
    fn univariate(id: FamilyId, poly: UnivariatePoly) -> Self {
        let table = poly.to_table();
        FamilyInstance {
            id,
            form: FamilyForm::Univariate(poly),
            table,
        }
    }

    fn bivariate(id: FamilyId, func: BivariateFunc) -> Result<Self, FamilyError> {
        let component = func.component().clone();
        let parent = FieldSpec::new(2 * component.n(), None)?;
        let map = SubfieldMap::new(&parent, &component)?;
        let table = func.to_table(&map)?;
        Ok(FamilyInstance {
            id,
            form: FamilyForm::Bivariate(func),
            table,
        })
    }

    /// Re-evaluates the form; used to check `table` against `form`.
    pub fn form_table(&self) -> Result<FunctionTable, FamilyError> {
        match &self.form {
            FamilyForm::Univariate(p) => Ok(p.to_table()),
            FamilyForm::Bivariate(b) => {
                let parent = self.table.field();
                let map = SubfieldMap::new(parent, b.component())?;
                Ok(b.to_table(&map)?)
            }
        }
    }
}

fn pow2(k: u32) -> u64 {
    1u64 << k
}

fn require(cond: bool, family: FamilyTag, condition: &str) -> Result<(), FamilyError> {
    if cond {
        Ok(())
    } else {
        Err(violated(family, condition))
    }
}

fn uni(field: &FieldSpec, terms: Vec<(FieldElement, u64)>) -> Result<UnivariatePoly, FamilyError> {
    Ok(UnivariatePoly::new(field, terms)?)
}

fn has_root(field: &FieldSpec, f: impl Fn(FieldElement) -> FieldElement + Sync) -> bool {
    field.elements().collect::<Vec<_>>().par_iter().any(|&z| f(z).is_zero())
}

/// Cataloged families (monomials, F1-F17) and the literal `Polynomial` /
/// `Bivariate` tags. `field` is the coefficient field: GF(2^n) for
/// univariate tags, GF(2^m) for bivariate ones.
pub fn make_known(id: &FamilyId, field: &FieldSpec) -> Result<FamilyInstance, FamilyError> {
    use FamilyTag::*;
    let tag = id.tag;
    let expected = if tag.is_bivariate() {
        id.uint("m")?
    } else {
        id.table_degree()?
    };
    if field.n() != expected {
        return Err(FamilyError::BadParam {
            name: if tag.is_bivariate() { "m" } else { "n" }.into(),
            msg: format!("field has degree {}, descriptor says {expected}", field.n()),
        });
    }
    let n = field.n();
    let one = FieldElement::ONE;
    let mono = |e: u64| -> Result<FamilyInstance, FamilyError> {
        Ok(FamilyInstance::univariate(id.clone(), uni(field, vec![(one, e)])?))
    };
    let odd_t = || -> Result<u32, FamilyError> {
        require(n % 2 == 1, tag, "n=2t+1")?;
        Ok((n - 1) / 2)
    };
    match tag {
        Gold => {
            let i = id.uint("i")?;
            require(i >= 1 && gcd(i as u64, n as u64) == 1, tag, "gcd(i,n)=1")?;
            mono(pow2(i) + 1)
        }
        Kasami => {
            let i = id.uint("i")?;
            require(i >= 1 && gcd(i as u64, n as u64) == 1, tag, "gcd(i,n)=1")?;
            mono(pow2(2 * i) - pow2(i) + 1)
        }
        Welch => {
            let t = odd_t()?;
            mono(pow2(t) + 3)
        }
        Niho1 => {
            let t = odd_t()?;
            require(t % 2 == 0, tag, "t even")?;
            mono(pow2(t) + pow2(t / 2) - 1)
        }
        Niho2 => {
            let t = odd_t()?;
            require(t % 2 == 1, tag, "t odd")?;
            mono(pow2(t) + pow2((3 * t).div_ceil(2)) - 1)
        }
        Inverse => {
            let t = odd_t()?;
            mono(pow2(2 * t) - 1)
        }
        Dobbertin => {
            require(n.is_multiple_of(5), tag, "n=5i")?;
            let i = n / 5;
            mono(pow2(4 * i) + pow2(3 * i) + pow2(2 * i) + pow2(i) - 1)
        }
        F1 | F2 => {
            let p = if tag == F1 { 3 } else { 4 };
            let (k, s) = (id.uint("k")?, id.uint("s")?);
            require(n == p * k, tag, "n=pk")?;
            require(gcd(k as u64, 3) == 1, tag, "gcd(k,3)=1")?;
            require(gcd(s as u64, 3 * k as u64) == 1, tag, "gcd(s,3k)=1")?;
            require(n >= 12, tag, "n>=12")?;
            let i = (s * k) % p;
            let m = p - i;
            let u = field.primitive();
            uni_instance(
                id,
                field,
                vec![
                    (one, pow2(s) + 1),
                    (field.pow(u, pow2(k) - 1), pow2(i * k) + pow2(m * k + s)),
                ],
            )
        }
        F3 => {
            require(n.is_multiple_of(2), tag, "n=2m")?;
            let m = n / 2;
            let i = id.uint("i")?;
            require(i >= 1 && gcd(i as u64, m as u64) == 1, tag, "gcd(i,m)=1")?;
            let s = id.coeff("s", field)?;
            let c = id.coeff("c", field)?;
            require(!field.in_subfield(m, s), tag, "s in GF(2^n) minus GF(2^m)")?;
            let q = pow2(m);
            let cq = field.frob(c, m);
            let circle_root = field.elements().any(|x| {
                field.pow(x, q + 1) == one
                    && (field.pow(x, pow2(i) + 1) + field.mul(c, field.frob(x, i)) + field.mul(cq, x) + one).is_zero()
            });
            require(
                !circle_root,
                tag,
                "z^(2^i+1)+c z^(2^i)+c^q z+1 has no solution x with x^(q+1)=1",
            )?;
            let gi = pow2(i);
            uni_instance(
                id,
                field,
                vec![
                    (s, gi * (q + 1)),
                    (one, gi + 1),
                    (one, q * (gi + 1)),
                    (c, gi * q + 1),
                    (cq, gi + q),
                    (one, q + 1),
                ],
            )
        }
        F4 | F5 | F6 => {
            let a = id.coeff("a", field)?;
            require(!a.is_zero(), tag, "a!=0")?;
            let (sub, inner) = match tag {
                F4 => (1, vec![(field.pow(a, 3), 9), (FieldElement::ZERO, 18)]),
                F5 => (3, vec![(field.pow(a, 3), 9), (field.pow(a, 6), 18)]),
                _ => (3, vec![(field.pow(a, 6), 18), (field.pow(a, 12), 36)]),
            };
            if sub == 3 {
                require(n.is_multiple_of(3), tag, "3 | n")?;
            }
            let tr = uni(field, inner)?.relative_trace(sub)?.scale(field.inv(a)?);
            let poly = UnivariatePoly::monomial(field, one, 3).add(&tr);
            Ok(FamilyInstance::univariate(id.clone(), poly))
        }
        F7 | F8 | F9 => {
            require(n.is_multiple_of(3), tag, "n=3m")?;
            let m = n / 3;
            let s = id.uint("s")?;
            let v = id.coeff("v", field)?;
            let w = id.coeff("w", field)?;
            require(gcd(m as u64, 3) == 1, tag, "gcd(m,3)=1")?;
            require(gcd(s as u64, n as u64) == 1, tag, "gcd(s,3m)=1")?;
            require(
                field.in_subfield(m, v) && field.in_subfield(m, w),
                tag,
                "v,w in GF(2^m)",
            )?;
            require(field.mul(v, w) != one, tag, "vw!=1")?;
            require((m + s).is_multiple_of(3), tag, "3 | m+s")?;
            let u = field.primitive();
            let uq = field.frob(u, m);
            uni_instance(
                id,
                field,
                vec![
                    (u, pow2(s) + 1),
                    (uq, pow2(2 * m) + pow2(m + s)),
                    (v, pow2(2 * m) + 1),
                    (field.mul(w, field.mul(uq, u)), pow2(s) + pow2(m + s)),
                ],
            )
        }
        F10 => {
            require(n.is_multiple_of(3) && (n / 3) % 2 == 1, tag, "n=3m, m odd")?;
            let m = n / 3;
            let exps = [pow2(2 * m + 1) + 1, pow2(m + 1) + 1, pow2(2 * m) + 2, pow2(m) + 2, 3];
            let coeffs: Vec<FieldElement> = match id.params.get("coefficients") {
                Some(ParamValue::CoeffList(cs)) => {
                    if ["a", "b", "c"].iter().any(|k| id.params.contains_key(*k)) {
                        return Err(FamilyError::BadParam {
                            name: "coefficients".into(),
                            msg: "give either a, b, c or coefficients".into(),
                        });
                    }
                    if cs.len() != 5 {
                        return Err(FamilyError::BadParam {
                            name: "coefficients".into(),
                            msg: "expected 5 coefficients".into(),
                        });
                    }
                    cs.iter().map(|c| c.resolve(field)).collect::<Result<_, _>>()?
                }
                _ => {
                    let a = id.coeff("a", field)?;
                    let b = id.coeff("b", field)?;
                    let c = id.coeff("c", field)?;
                    vec![field.square(a), field.square(b), a, b, field.square(c) + c]
                }
            };
            uni_instance(id, field, coeffs.into_iter().zip(exps).collect())
        }
        F11 => {
            require(n.is_multiple_of(2), tag, "n=2m")?;
            let m = n / 2;
            require(m % 2 == 1 && !m.is_multiple_of(3), tag, "m odd, 3 does not divide m")?;
            let i = id.uint("i")?;
            let s1 = (m + n - 2) % n;
            let s2 = (1..n).find(|&x| (x as u64 * s1 as u64) % n as u64 == 1);
            require(i == s1 || Some(i) == s2, tag, "i = m-2 or (m-2)^(-1) mod n")?;
            let w = match id.params.get("w") {
                Some(_) => id.coeff("w", field)?,
                None => field.pow(field.primitive(), field.order() / 3),
            };
            require(
                w != one && (field.square(w) + w + one).is_zero(),
                tag,
                "w primitive in GF(2^2)",
            )?;
            let q = pow2(m);
            uni_instance(
                id,
                field,
                vec![
                    (one, 3),
                    (w, pow2(i) + 1),
                    (field.square(w), 3 * q),
                    (one, pow2(i + m) + q),
                ],
            )
        }
        F12 => {
            require(n.is_multiple_of(2) && (n / 2) % 2 == 1, tag, "n=2m, m odd")?;
            let m = n / 2;
            let a = id.coeff("a", field)?;
            let b = id.coeff("b", field)?;
            require(!field.in_subfield(m, a), tag, "a not in GF(q)")?;
            require(
                !b.is_zero() && field.cube_class(b)? == CubeClass::NonCube,
                tag,
                "b not a cube",
            )?;
            let t1 = uni(field, vec![(b, 3)])?.relative_trace(m)?.scale(a);
            let t2 = uni(field, vec![(field.pow(b, 3), 9)])?
                .relative_trace(m)?
                .scale(field.frob(a, m));
            Ok(FamilyInstance::univariate(id.clone(), t1.add(&t2)))
        }
        F13 => {
            let m = n;
            let (k, i) = (id.uint("k")?, id.uint("i")?);
            let alpha = id.coeff("alpha", field)?;
            require(gcd(k as u64, m as u64) == 1, tag, "gcd(k,m)=1")?;
            require(m.is_multiple_of(2), tag, "m even")?;
            require(
                !alpha.is_zero() && field.cube_class(alpha)? == CubeClass::NonCube,
                tag,
                "alpha non-cubic",
            )?;
            let e = pow2(k) + 1;
            bi_instance(
                id,
                field,
                vec![BiTerm::unit(1, 1)],
                vec![BiTerm::unit(e, 0), BiTerm::new(alpha, 0, e << i)],
            )
        }
        F14 => {
            let m = n;
            let k = id.uint("k")?;
            let a = id.coeff("a", field)?;
            let b = id.coeff("b", field)?;
            require(gcd(k as u64, m as u64) == 1, tag, "gcd(k,m)=1")?;
            let p1 = |z| field.pow(z, pow2(k) + 1) + field.mul(a, z) + b;
            require(!has_root(field, p1), tag, "P1(z)=z^(2^k+1)+az+b has no root in GF(2^m)")?;
            bi_instance(
                id,
                field,
                vec![BiTerm::unit(1, 1)],
                vec![
                    BiTerm::unit(pow2(3 * k) + pow2(2 * k), 0),
                    BiTerm::new(a, pow2(2 * k), pow2(k)),
                    BiTerm::new(b, 0, pow2(k) + 1),
                ],
            )
        }
        F15 => {
            let m = n;
            let i = id.uint("i")?;
            let b = id.coeff("b", field)?;
            let c = id.coeff("c", field)?;
            require(m.is_multiple_of(2), tag, "m even")?;
            require(gcd(i as u64, m as u64) == 1, tag, "gcd(i,m)=1")?;
            let h = pow2(m / 2);
            let p2 = |z| {
                let inner = field.mul(c, field.pow(z, pow2(i) + 1)) + field.mul(b, field.frob(z, i)) + one;
                field.pow(inner, h + 1) + field.pow(z, h + 1)
            };
            require(!has_root(field, p2), tag, "P2 has no root in GF(2^m)")?;
            bi_instance(
                id,
                field,
                vec![BiTerm::unit(1, 1)],
                vec![
                    BiTerm::unit(pow2(i) + 1, 0),
                    BiTerm::unit(pow2(i + m / 2), h),
                    BiTerm::new(b, 1, pow2(i)),
                    BiTerm::new(c, 0, pow2(i) + 1),
                ],
            )
        }
        F16 | F17 => {
            let m = n;
            let i = id.uint("i")?;
            require(i >= 1 && gcd(3 * i as u64, m as u64) == 1, tag, "gcd(3i,m)=1")?;
            let gi = pow2(i);
            let first = vec![BiTerm::unit(gi + 1, 0), BiTerm::unit(1, gi), BiTerm::unit(0, gi + 1)];
            let second = if tag == F16 {
                let g2 = pow2(2 * i);
                vec![BiTerm::unit(g2 + 1, 0), BiTerm::unit(g2, 1), BiTerm::unit(0, g2 + 1)]
            } else {
                require(m % 2 == 1, tag, "m odd")?;
                let g3 = pow2(3 * i);
                vec![BiTerm::unit(g3, 1), BiTerm::unit(1, g3)]
            };
            bi_instance(id, field, first, second)
        }
        Polynomial => {
            let Some(ParamValue::UniTerms(ts)) = id.params.get("terms") else {
                unreachable!("validated by FamilyId::new")
            };
            let terms = ts
                .iter()
                .map(|&(c, e)| Ok((c.resolve(field)?, e)))
                .collect::<Result<Vec<_>, FamilyError>>()?;
            uni_instance(id, field, terms)
        }
        Bivariate => {
            let get = |name: &str| -> Result<Vec<BiTerm>, FamilyError> {
                let Some(ParamValue::BiTerms(ts)) = id.params.get(name) else {
                    unreachable!("validated by FamilyId::new")
                };
                ts.iter()
                    .map(|&(c, ex, ey)| Ok(BiTerm::new(c.resolve(field)?, ex, ey)))
                    .collect()
            };
            bi_instance(id, field, get("first")?, get("second")?)
        }
        NewBivariate | NewTrinomial | EdelPottP => id.build(),
    }
}

fn uni_instance(
    id: &FamilyId,
    field: &FieldSpec,
    terms: Vec<(FieldElement, u64)>,
) -> Result<FamilyInstance, FamilyError> {
    Ok(FamilyInstance::univariate(id.clone(), uni(field, terms)?))
}

fn bi_instance(
    id: &FamilyId,
    component: &FieldSpec,
    first: Vec<BiTerm>,
    second: Vec<BiTerm>,
) -> Result<FamilyInstance, FamilyError> {
    FamilyInstance::bivariate(id.clone(), BivariateFunc::new(component, first, second)?)
}

/// `(x^3+xy^2+y^3+xy, x^5+x^4y+y^5+xy+x^2y^2)` over GF(2^m)^2.
pub fn make_new_bivariate(m: u32) -> Result<FamilyInstance, FamilyError> {
    let id = FamilyId::with_ints(FamilyTag::NewBivariate, &[("m", m as i64)])?;
    id.build()
}

fn make_new_bivariate_in(id: FamilyId, component: &FieldSpec) -> Result<FamilyInstance, FamilyError> {
    let m = component.n();
    require(m >= 1 && gcd(3, m as u64) == 1, FamilyTag::NewBivariate, "gcd(3,m)=1")?;
    require(2 * m <= MAX_DEGREE, FamilyTag::NewBivariate, "2m <= 24")?;
    let u = BiTerm::unit;
    bi_instance(
        &id,
        component,
        vec![u(3, 0), u(1, 2), u(0, 3), u(1, 1)],
        vec![u(5, 0), u(4, 1), u(0, 5), u(1, 1), u(2, 2)],
    )
}

/// Validated parameters of `f(z) = L(z)^{2^m+1} + v z^{2^m+1}` over
/// GF(2^{3m}) with `L(z) = z^{2^{m+s}} + mu z^{2^s} + z`.
#[derive(Clone, Debug)]
pub struct TrinomialParams {
    field: FieldSpec,
    m: u32,
    s: u32,
    mu: FieldElement,
    v: FieldElement,
    l: LinearizedPoly,
}

/// `mu^{2^{2m}+2^m+1}`, the norm of `mu` onto GF(2^m).
pub fn trinomial_norm(field: &FieldSpec, m: u32, mu: FieldElement) -> FieldElement {
    field.mul(field.mul(field.frob(mu, 2 * m), field.frob(mu, m)), mu)
}

impl TrinomialParams {
    /// Checks every precondition in the default GF(2^{3m}).
    pub fn new(m: u32, s: u32, mu: FieldElement, v: FieldElement) -> Result<Self, FamilyError> {
        if m == 0 || 3 * m > MAX_DEGREE {
            return Err(violated(FamilyTag::NewTrinomial, "1 <= m <= 8"));
        }
        Self::new_in(&FieldSpec::new(3 * m, None)?, m, s, mu, v)
    }

    pub fn new_in(field: &FieldSpec, m: u32, s: u32, mu: FieldElement, v: FieldElement) -> Result<Self, FamilyError> {
        let tag = FamilyTag::NewTrinomial;
        require(m >= 1 && field.n() == 3 * m, tag, "field is GF(2^(3m))")?;
        field.check(mu)?;
        field.check(v)?;
        require(s >= 1 && gcd(s as u64, m as u64) == 1, tag, "gcd(s,m)=1")?;
        require(!v.is_zero() && field.frob(v, m) == v, tag, "v in GF(2^m)*")?;
        require(
            trinomial_norm(field, m, mu) != FieldElement::ONE,
            tag,
            "mu^(2^(2m)+2^m+1) != 1",
        )?;
        let l = LinearizedPoly::trinomial(field, m, s, mu, FieldElement::ONE)?;
        require(
            l.is_permutation(),
            tag,
            "L(z)=z^(2^(m+s))+mu z^(2^s)+z permutes GF(2^(3m))",
        )?;
        Ok(TrinomialParams {
            field: field.clone(),
            m,
            s,
            mu,
            v,
            l,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn mu(&self) -> FieldElement {
        self.mu
    }

    pub fn v(&self) -> FieldElement {
        self.v
    }

    /// `L(z) = z^{2^{m+s}} + mu z^{2^s} + z`.
    pub fn l(&self) -> &LinearizedPoly {
        &self.l
    }

    pub fn instance(&self) -> FamilyInstance {
        let id = FamilyId::new(
            FamilyTag::NewTrinomial,
            [
                ("m".to_string(), ParamValue::Int(self.m as i64)),
                ("s".to_string(), ParamValue::Int(self.s as i64)),
                ("mu".to_string(), ParamValue::Coeff(Coefficient::Bits(self.mu.0))),
                ("v".to_string(), ParamValue::Coeff(Coefficient::Bits(self.v.0))),
            ],
        )
        .expect("slots match the tag");
        self.instance_with_id(id)
    }

    fn instance_with_id(&self, id: FamilyId) -> FamilyInstance {
        let l = self.l.to_poly();
        let poly = l
            .frob(self.m)
            .mul(&l)
            .add(&UnivariatePoly::monomial(&self.field, self.v, pow2(self.m) + 1));
        FamilyInstance::univariate(id, poly)
    }
}

/// `L(z)^{2^m+1} + v z^{2^m+1}` over the default GF(2^{3m}).
pub fn make_new_trinomial(m: u32, s: u32, mu: FieldElement, v: FieldElement) -> Result<FamilyInstance, FamilyError> {
    Ok(TrinomialParams::new(m, s, mu, v)?.instance())
}

/// Range of `s` swept by [`search_trinomial_params`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SRange {
    /// `1 <= s < m`.
    BelowM,
    /// `1 <= s < 3m`.
    BelowThreeM,
}

/// All `(s, mu)` in the default GF(2^{3m}) with `gcd(s, m) = 1`, nonunit
/// norm of `mu` and `L` a permutation, ordered by `s` then by `mu`.
pub fn search_trinomial_params(m: u32, range: SRange) -> Result<Vec<(u32, FieldElement)>, FamilyError> {
    if m == 0 || 3 * m > MAX_DEGREE {
        return Err(violated(FamilyTag::NewTrinomial, "1 <= m <= 8"));
    }
    let field = FieldSpec::new(3 * m, None)?;
    let top = match range {
        SRange::BelowM => m,
        SRange::BelowThreeM => 3 * m,
    };
    let mut out = Vec::new();
    for s in (1..top).filter(|&s| gcd(s as u64, m as u64) == 1) {
        let found: Vec<FieldElement> = (0..field.size() as u32)
            .into_par_iter()
            .map(FieldElement)
            .filter(|&mu| {
                trinomial_norm(&field, m, mu) != FieldElement::ONE
                    && LinearizedPoly::trinomial(&field, m, s, mu, FieldElement::ONE)
                        .expect("in range")
                        .is_permutation()
            })
            .collect();
        out.extend(found.into_iter().map(|mu| (s, mu)));
    }
    Ok(out)
}

/// `p(z) = z^3 + u tr(u^63 z^3 + u^252 z^9) + u^154 tr(u^68 z^3 + u^235 z^9)
/// + u^35 tr(u^216 z^3 + u^116 z^9)` over GF(2^8).
pub fn make_edel_pott(field: &FieldSpec, u: FieldElement) -> Result<FamilyInstance, FamilyError> {
    let tag = FamilyTag::EdelPottP;
    require(field.n() == 8, tag, "n=8")?;
    field.check(u)?;
    require(field.is_primitive(u), tag, "u primitive")?;
    let up = |k: u64| field.pow(u, k);
    let mut poly = UnivariatePoly::monomial(field, FieldElement::ONE, 3);
    for (outer, c3, c9) in [(1, 63, 252), (154, 68, 235), (35, 216, 116)] {
        let inner = uni(field, vec![(up(c3), 3), (up(c9), 9)])?;
        poly = poly.add(&inner.relative_trace(1)?.scale(up(outer)));
    }
    let id = FamilyId::new(
        tag,
        [
            ("n".to_string(), ParamValue::Int(8)),
            ("u".to_string(), ParamValue::Coeff(Coefficient::Bits(u.0))),
        ],
    )?
    .with_field(Some(field.modulus()), None);
    Ok(FamilyInstance::univariate(id, poly))
}

/// One row of the published Γ-rank tables for n = 8, 9.
#[derive(Clone, Debug)]
pub struct Representative {
    pub row: usize,
    /// The function as printed.
    pub label: &'static str,
    /// Family the row is attributed to.
    pub reference: &'static str,
    pub published_gamma_rank: usize,
    /// Whether coefficients depend on the choice of primitive element.
    pub coefficient_bearing: bool,
    pub id: FamilyId,
}

fn coeff(k: i64) -> ParamValue {
    ParamValue::Coeff(Coefficient::Power(k))
}

fn int(v: i64) -> ParamValue {
    ParamValue::Int(v)
}

fn rep(
    row: usize,
    label: &'static str,
    reference: &'static str,
    published_gamma_rank: usize,
    tag: FamilyTag,
    params: Vec<(&str, ParamValue)>,
) -> Representative {
    let coefficient_bearing = params.iter().any(|(_, v)| match v {
        ParamValue::Coeff(Coefficient::Power(k)) => *k != 0,
        ParamValue::CoeffList(cs) => cs.iter().any(|c| *c != Coefficient::Power(0)),
        ParamValue::UniTerms(ts) => ts.iter().any(|t| t.0 != Coefficient::Power(0)),
        ParamValue::BiTerms(ts) => ts.iter().any(|t| t.0 != Coefficient::Power(0)),
        _ => false,
    });
    let id =
        FamilyId::new(tag, params.into_iter().map(|(k, v)| (k.to_string(), v))).expect("table rows are well formed");
    Representative {
        row,
        label,
        reference,
        published_gamma_rank,
        coefficient_bearing,
        id,
    }
}

/// Descriptors of the 12 table rows for n = 8 or 9, in table order. `u` is
/// the default primitive of GF(2^n) and `v` that of GF(2^4).
pub fn representative_rows(n: u32) -> Result<Vec<Representative>, FamilyError> {
    use FamilyTag::*;
    let bt = |ts: &[(i64, u64, u64)]| {
        ParamValue::BiTerms(ts.iter().map(|&(c, x, y)| (Coefficient::Power(c), x, y)).collect())
    };
    match n {
        8 => Ok(vec![
            rep(1, "z^3", "Gold", 11818, Gold, vec![("n", int(8)), ("i", int(1))]),
            rep(2, "z^9", "Gold", 12370, Gold, vec![("n", int(8)), ("i", int(3))]),
            rep(3, "z^57", "Kasami", 15358, Kasami, vec![("n", int(8)), ("i", int(3))]),
            rep(
                4,
                "z^3+z^17+u^48z^18+u^3z^33+uz^34+z^48",
                "F3",
                13200,
                F3,
                vec![("n", int(8)), ("i", int(1)), ("s", coeff(1)), ("c", coeff(3))],
            ),
            rep(
                5,
                "z^3+tr_8(z^9)",
                "F4",
                13800,
                F4,
                vec![("n", int(8)), ("a", coeff(0))],
            ),
            rep(
                6,
                "z^3+u^-1tr_8(u^3z^9)",
                "F4",
                13842,
                F4,
                vec![("n", int(8)), ("a", coeff(1))],
            ),
            rep(
                7,
                "(xy, x^3+vy^12)",
                "F13",
                13642,
                F13,
                vec![("m", int(4)), ("k", int(1)), ("i", int(2)), ("alpha", coeff(1))],
            ),
            rep(
                8,
                "(xy, x^12+x^4y^2+y^3)",
                "F14",
                13700,
                F14,
                vec![("m", int(4)), ("k", int(1)), ("a", coeff(0)), ("b", coeff(0))],
            ),
            rep(
                9,
                "(xy, x^12+x^4y^2+v^7y^3)",
                "F14",
                13798,
                F14,
                vec![("m", int(4)), ("k", int(1)), ("a", coeff(0)), ("b", coeff(7))],
            ),
            rep(
                10,
                "(x^3+xy^2+y^3, x^5+x^4y+y^5)",
                "F16",
                13642,
                F16,
                vec![("m", int(4)), ("i", int(1))],
            ),
            rep(
                11,
                "(xy, x^3+x^2y+vx^4y^8+v^5y^3)",
                "F15",
                13960,
                Bivariate,
                vec![
                    ("m", int(4)),
                    ("first", bt(&[(0, 1, 1)])),
                    ("second", bt(&[(0, 3, 0), (0, 2, 1), (1, 4, 8), (5, 0, 3)])),
                ],
            ),
            rep(
                12,
                "(x^3+xy^2+y^3+xy, x^5+x^4y+y^5+xy+x^2y^2)",
                "new bivariate family",
                14034,
                NewBivariate,
                vec![("m", int(4))],
            ),
        ]),
        9 => Ok(vec![
            rep(1, "z^3", "Gold", 38470, Gold, vec![("n", int(9)), ("i", int(1))]),
            rep(2, "z^5", "Gold", 41494, Gold, vec![("n", int(9)), ("i", int(2))]),
            rep(3, "z^17", "Gold", 38470, Gold, vec![("n", int(9)), ("i", int(4))]),
            rep(4, "z^13", "Kasami", 58676, Kasami, vec![("n", int(9)), ("i", int(2))]),
            rep(5, "z^241", "Kasami", 61726, Kasami, vec![("n", int(9)), ("i", int(4))]),
            rep(6, "z^19", "Welch", 60894, Welch, vec![("n", int(9))]),
            rep(7, "z^255", "Inverse", 130816, Inverse, vec![("n", int(9))]),
            rep(
                8,
                "z^3+tr_9(z^9)",
                "F4",
                47890,
                F4,
                vec![("n", int(9)), ("a", coeff(0))],
            ),
            rep(
                9,
                "z^3+tr_3^9(z^9+z^18)",
                "F5",
                48428,
                F5,
                vec![("n", int(9)), ("a", coeff(0))],
            ),
            rep(
                10,
                "z^3+tr_3^9(z^18+z^36)",
                "F5",
                48460,
                F6,
                vec![("n", int(9)), ("a", coeff(0))],
            ),
            rep(
                11,
                "z^3+u^246z^10+u^47z^17+u^181z^66+u^428z^129",
                "F10",
                48596,
                F10,
                vec![
                    ("n", int(9)),
                    (
                        "coefficients",
                        ParamValue::CoeffList(vec![
                            Coefficient::Power(428),
                            Coefficient::Power(47),
                            Coefficient::Power(181),
                            Coefficient::Power(246),
                            Coefficient::Power(0),
                        ]),
                    ),
                ],
            ),
            rep(
                12,
                "(z^16+u^5z^2+z)^9+u^73z^9",
                "new trinomial family",
                48558,
                NewTrinomial,
                vec![("m", int(3)), ("s", int(1)), ("mu", coeff(5)), ("v", coeff(73))],
            ),
        ]),
        _ => Err(FamilyError::NoTable(n)),
    }
}

/// Frobenius orbit representatives of the primitive elements of the row's
/// coefficient field: the default primitive's orbit first, then the orbit of
/// the Conway-polynomial root, then the rest ascending.
pub fn primitive_candidates(rep: &Representative) -> Result<Vec<FieldElement>, FamilyError> {
    let field = rep.id.coefficient_field()?;
    let mut reps = field.primitive_orbit_representatives();
    // Moved to the front in reverse priority.
    for target in [field.conway_root(), Some(field.primitive())].into_iter().flatten() {
        if let Some(pos) = reps
            .iter()
            .position(|&g| (0..field.n()).any(|k| field.frob(g, k) == target))
        {
            let g = reps.remove(pos);
            reps.insert(0, g);
        }
    }
    Ok(reps)
}

/// Builds a table row. A coefficient-bearing row that is not APN under the
/// default primitive is rebuilt with the first candidate from
/// [`primitive_candidates`] that makes it APN.
pub fn build_representative(rep: &Representative) -> Result<FamilyInstance, FamilyError> {
    let inst = rep.id.build()?;
    if !rep.coefficient_bearing || is_apn(&inst.table) {
        return Ok(inst);
    }
    for g in primitive_candidates(rep)?.into_iter().skip(1) {
        let candidate = rep.id.clone().with_field(rep.id.modulus(), Some(g.0)).build()?;
        if is_apn(&candidate.table) {
            return Ok(candidate);
        }
    }
    Err(violated(
        format!("table row {}", rep.row),
        "some primitive element makes the row APN",
    ))
}

/// The 12 table representatives for n = 8 or 9, materialized with
/// [`build_representative`].
pub fn representatives(n: u32) -> Result<Vec<FamilyInstance>, FamilyError> {
    representative_rows(n)?.iter().map(build_representative).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_round_trip() {
        let text = r#"{tag: "NewTrinomial", m: 3, s: 1, mu: "u^5", v: 73, modulus: "0x211"}"#;
        let id = FamilyId::parse(text).unwrap();
        assert_eq!(id.tag(), FamilyTag::NewTrinomial);
        let again = FamilyId::from_json(&id.to_json()).unwrap();
        assert_eq!(again.to_json(), id.to_json());
        assert_eq!(id.params()["mu"], ParamValue::Coeff(Coefficient::Power(5)));
    }

    #[test]
    fn descriptor_rejects_wrong_names() {
        assert!(matches!(
            FamilyId::parse(r#"{tag: "Gold", n: 8}"#),
            Err(FamilyError::MissingParam { name: "i", .. })
        ));
        assert!(matches!(
            FamilyId::parse(r#"{tag: "Gold", n: 8, i: 1, k: 2}"#),
            Err(FamilyError::UnexpectedParam { .. })
        ));
        assert!(matches!(
            FamilyId::parse(r#"{tag: "Nope"}"#),
            Err(FamilyError::UnknownTag(_))
        ));
        assert!(matches!(FamilyId::parse("{tag: "), Err(FamilyError::Descriptor(_))));
    }

    #[test]
    fn gold_and_side_conditions() {
        let f = make_known(
            &FamilyId::with_ints(FamilyTag::Gold, &[("n", 8), ("i", 1)]).unwrap(),
            &FieldSpec::new(8, None).unwrap(),
        )
        .unwrap();
        let field = f.table.field().clone();
        for z in field.elements() {
            assert_eq!(f.table.at(z), field.pow(z, 3));
        }
        let err = FamilyId::with_ints(FamilyTag::Gold, &[("n", 8), ("i", 2)])
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("gcd(i,n)=1"), "{err}");
        let welch = FamilyId::with_ints(FamilyTag::Welch, &[("n", 9)])
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(welch.form.to_string(), "z^19");
    }

    #[test]
    fn monomial_families_are_apn() {
        use FamilyTag::*;
        for n in 3..=10u32 {
            let mut ids = vec![];
            for i in 1..n {
                ids.push(FamilyId::with_ints(Gold, &[("n", n as i64), ("i", i as i64)]).unwrap());
                ids.push(FamilyId::with_ints(Kasami, &[("n", n as i64), ("i", i as i64)]).unwrap());
            }
            for tag in [Welch, Niho1, Niho2, Inverse, Dobbertin] {
                ids.push(FamilyId::with_ints(tag, &[("n", n as i64)]).unwrap());
            }
            for id in ids {
                match id.build() {
                    Ok(inst) => assert!(is_apn(&inst.table), "{id} not APN"),
                    Err(FamilyError::Condition { .. }) => {}
                    Err(e) => panic!("{id}: {e}"),
                }
            }
        }
    }

    #[test]
    fn new_bivariate_is_apn_and_checks_m() {
        for m in [1, 2, 4, 5] {
            let inst = make_new_bivariate(m).unwrap();
            assert!(is_apn(&inst.table), "m={m}");
        }
        let err = make_new_bivariate(3).unwrap_err();
        assert!(err.to_string().contains("gcd(3,m)=1"));
    }

    #[test]
    fn trinomial_preconditions_are_named() {
        let f9 = FieldSpec::new(9, None).unwrap();
        let u = f9.primitive();
        let err = make_new_trinomial(3, 1, f9.pow(u, 5), FieldElement::ZERO).unwrap_err();
        assert!(err.to_string().contains("v in GF(2^m)*"));
        let err = make_new_trinomial(3, 1, FieldElement::ZERO, FieldElement::ONE).unwrap_err();
        assert!(err.to_string().contains("permutes"), "{err}");
        let err = make_new_trinomial(3, 3, FieldElement(2), FieldElement::ONE).unwrap_err();
        assert!(err.to_string().contains("gcd(s,m)=1"));
        let err = make_new_trinomial(3, 1, FieldElement::ONE, FieldElement::ONE).unwrap_err();
        assert!(err.to_string().contains("mu^(2^(2m)+2^m+1) != 1"), "{err}");
        let err = make_new_trinomial(3, 1, f9.pow(u, 5), FieldElement(2)).unwrap_err();
        assert!(err.to_string().contains("v in GF(2^m)*"));
    }

    #[test]
    fn trinomial_search_results_pass_preconditions() {
        // For m = 2 only s = 3, 5 admit a permutation L.
        assert!(search_trinomial_params(2, SRange::BelowM).unwrap().is_empty());
        for m in [2, 3] {
            let found = search_trinomial_params(m, SRange::BelowThreeM).unwrap();
            assert!(!found.is_empty(), "m={m}");
            for &(s, mu) in &found {
                TrinomialParams::new(m, s, mu, FieldElement::ONE).unwrap();
            }
            let narrow = search_trinomial_params(m, SRange::BelowM).unwrap();
            assert!(narrow.iter().all(|p| found.contains(p)));
        }
    }

    #[test]
    fn tables_match_forms() {
        for n in [8, 9] {
            for inst in representatives(n).unwrap() {
                assert_eq!(inst.form_table().unwrap(), inst.table, "{}", inst.id);
            }
        }
    }

    #[test]
    fn representatives_are_apn() {
        for n in [8, 9] {
            let insts = representatives(n).unwrap();
            assert_eq!(insts.len(), 12);
            for inst in insts {
                assert!(is_apn(&inst.table), "{}", inst.id);
            }
        }
    }

    #[test]
    fn table_nine_row_eleven_needs_another_primitive() {
        let row = &representative_rows(9).unwrap()[10];
        assert!(!is_apn(&row.id.build().unwrap().table));
        let inst = build_representative(row).unwrap();
        // The rescuing orbit is that of the Conway root, tried right after the default.
        let field = inst.id.coefficient_field().unwrap();
        let conway = field.conway_root().unwrap();
        let g = FieldElement(inst.id.primitive().unwrap());
        assert!((0..9).any(|k| field.frob(g, k) == conway));
        assert_eq!(primitive_candidates(row).unwrap()[1], g);
    }

    #[test]
    fn table_nine_row_eleven_form() {
        let rows = representative_rows(9).unwrap();
        let inst = rows[10].id.build().unwrap();
        let field = inst.table.field().clone();
        let u = |k| field.prim_pow(k);
        let FamilyForm::Univariate(p) = &inst.form else {
            panic!()
        };
        assert_eq!(
            p.terms(),
            &[
                (FieldElement::ONE, 3),
                (u(246), 10),
                (u(47), 17),
                (u(181), 66),
                (u(428), 129)
            ]
        );
    }

    #[test]
    fn table_eight_row_four_form() {
        let inst = representative_rows(8).unwrap()[3].id.build().unwrap();
        let field = inst.table.field().clone();
        let u = |k| field.prim_pow(k);
        let FamilyForm::Univariate(p) = &inst.form else {
            panic!()
        };
        let one = FieldElement::ONE;
        assert_eq!(
            p.terms(),
            &[(one, 3), (one, 17), (u(48), 18), (u(3), 33), (u(1), 34), (one, 48)]
        );
    }

    #[test]
    fn edel_pott_vanishes_at_zero_and_rejects_bad_u() {
        let f8 = FieldSpec::new(8, None).unwrap();
        let p = make_edel_pott(&f8, f8.primitive()).unwrap();
        assert!(p.table.at(FieldElement::ZERO).is_zero());
        assert!(make_edel_pott(&f8, FieldElement::ONE).is_err());
        let f9 = FieldSpec::new(9, None).unwrap();
        assert!(make_edel_pott(&f9, f9.primitive()).is_err());
    }
}
