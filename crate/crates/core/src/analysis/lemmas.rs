//! Exact verifiers for the identities used in the APN proofs.
//!
//! [`verify_resultant_identity`] checks the factorization of the resultant
//! of the two-equation system behind the bivariate family, specialized at
//! concrete `(a, b)`. [`verify_key_lemma`] evaluates the coefficient values
//! and auxiliary products of the trinomial family's key lemma at one point
//! and records every claim and printed factorization.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use super::resultant::{poly_eval, poly_mul, resultant_bivariate_formal, BivariatePolynomial, Poly, Variable};
use crate::families::{FamilyError, TrinomialParams};
use crate::gf2n::{FieldElement, FieldSpec, GfError};
use crate::vbf::LinearizedPoly;

/// Failing witnesses kept per report.
pub const MAX_FAILURES: usize = 16;

#[derive(Debug, Error)]
pub enum LemmaError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Precondition(#[from] FamilyError),
    #[error("a must be nonzero")]
    ZeroPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityMode {
    /// `samples` random triples `(a, b, x)` from a seeded generator.
    Pointwise { samples: usize, seed: u64 },
    /// Every triple `(a, b, x)`.
    FullSweep,
}

/// Outcome of checking the resultant factorization over GF(2^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultantIdentityReport {
    pub m: u32,
    pub mode: IdentityMode,
    /// Pairs `(a, b)` whose resultant polynomial was compared coefficientwise.
    pub pairs_checked: u64,
    /// Triples `(a, b, x)` at which both sides were evaluated.
    pub triples_checked: u64,
    /// Triples where the two sides differ, capped at [`MAX_FAILURES`].
    pub mismatches: Vec<(FieldElement, FieldElement, FieldElement)>,
    pub mismatch_count: u64,
    /// Pairs where `a^3+a^2b+a+b^3+b^2+1` vanishes (all pairs are swept).
    pub cubic_constant_zeros: Vec<(FieldElement, FieldElement)>,
    /// Pairs other than `(0, 0)` where `a^3+ab^2+b^3` vanishes.
    pub norm_zeros: Vec<(FieldElement, FieldElement)>,
}

impl ResultantIdentityReport {
    pub fn identity_holds(&self) -> bool {
        self.mismatch_count == 0
    }

    pub fn constant_vanishes_only_at_one_one(&self) -> bool {
        self.cubic_constant_zeros == [(FieldElement::ONE, FieldElement::ONE)]
    }

    pub fn norm_nonvanishing(&self) -> bool {
        self.norm_zeros.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.identity_holds() && self.constant_vanishes_only_at_one_one() && self.norm_nonvanishing()
    }
}

struct SystemAt {
    lhs: Poly,
    rhs: Poly,
}

fn system_at(field: &FieldSpec, a: FieldElement, b: FieldElement) -> SystemAt {
    let mul = |x, y| field.mul(x, y);
    let sq = |x| field.square(x);
    let (a2, b2) = (sq(a), sq(b));
    let a4 = sq(a2);
    let f = BivariatePolynomial::new(field, [(a, 2, 0), (a2 + b2 + b, 1, 0), (a + b, 0, 2), (a + b2, 0, 1)]);
    let g = BivariatePolynomial::new(
        field,
        [
            (a + b, 4, 0),
            (b2, 2, 0),
            (a4 + b, 1, 0),
            (b, 0, 4),
            (a2, 0, 2),
            (a4 + a + sq(b2), 0, 1),
        ],
    );
    let lhs = resultant_bivariate_formal(&f, 2, &g, 4, Variable::Y);

    let a3 = mul(a2, a);
    let b3 = mul(b2, b);
    let norm = a3 + mul(a, b2) + b3;
    let lin = a2 + mul(a, b) + a + b2 + b + FieldElement::ONE;
    let cst = a3 + mul(a2, b) + a + b3 + b2 + FieldElement::ONE;
    let h = vec![cst, lin, FieldElement::ZERO, FieldElement::ONE];
    // H(x + a) expanded.
    let h_shift = vec![a3 + mul(lin, a) + cst, a2 + lin, a, FieldElement::ONE];
    let x_xa = vec![FieldElement::ZERO, a, FieldElement::ONE];
    let mut rhs = poly_mul(field, &poly_mul(field, &x_xa, &h), &h_shift);
    rhs = poly_mul(field, &rhs, &[sq(norm)]);
    SystemAt { lhs, rhs }
}

/// Checks `Res(F, G, y) = (a^3+ab^2+b^3)^2 x(x+a) H(x) H(x+a)` over GF(2^m)
/// with `F = ax^2+(a^2+b^2+b)x+(a+b)y^2+(a+b^2)y`,
/// `G = (a+b)x^4+b^2x^2+(a^4+b)x+by^4+a^2y^2+(a^4+a+b^4)y` and
/// `H(x) = x^3+(a^2+ab+a+b^2+b+1)x+a^3+a^2b+a+b^3+b^2+1`.
///
/// The resultant uses formal y-degrees 2 and 4 so that specialization
/// commutes with the determinant. The side facts about the constant term of
/// H and about `a^3+ab^2+b^3` are swept over all pairs in either mode.
pub fn verify_resultant_identity(m: u32, mode: IdentityMode) -> Result<ResultantIdentityReport, LemmaError> {
    let field = FieldSpec::new(m, None)?;
    let mut report = ResultantIdentityReport {
        m,
        mode,
        pairs_checked: 0,
        triples_checked: 0,
        mismatches: Vec::new(),
        mismatch_count: 0,
        cubic_constant_zeros: Vec::new(),
        norm_zeros: Vec::new(),
    };
    let record = |report: &mut ResultantIdentityReport, a, b, x| {
        report.mismatch_count += 1;
        if report.mismatches.len() < MAX_FAILURES {
            report.mismatches.push((a, b, x));
        }
    };

    match mode {
        IdentityMode::FullSweep => {
            for a in field.elements() {
                for b in field.elements() {
                    let sys = system_at(&field, a, b);
                    report.pairs_checked += 1;
                    let same_poly = sys.lhs == sys.rhs;
                    for x in field.elements() {
                        report.triples_checked += 1;
                        if poly_eval(&field, &sys.lhs, x) != poly_eval(&field, &sys.rhs, x) {
                            record(&mut report, a, b, x);
                        }
                    }
                    if !same_poly && report.mismatch_count == 0 {
                        // Equal values everywhere but different polynomials.
                        record(&mut report, a, b, FieldElement::ZERO);
                    }
                }
            }
        }
        IdentityMode::Pointwise { samples, seed } => {
            let mut rng = StdRng::seed_from_u64(seed);
            let size = field.size() as u32;
            for _ in 0..samples {
                let a = FieldElement(rng.random_range(0..size));
                let b = FieldElement(rng.random_range(0..size));
                let x = FieldElement(rng.random_range(0..size));
                let sys = system_at(&field, a, b);
                report.pairs_checked += 1;
                report.triples_checked += 1;
                if sys.lhs != sys.rhs || poly_eval(&field, &sys.lhs, x) != poly_eval(&field, &sys.rhs, x) {
                    record(&mut report, a, b, x);
                }
            }
        }
    }

    for a in field.elements() {
        for b in field.elements() {
            let (a2, b2) = (field.square(a), field.square(b));
            let a3 = field.mul(a2, a);
            let b3 = field.mul(b2, b);
            if (a3 + field.mul(a2, b) + a + b3 + b2 + FieldElement::ONE).is_zero() {
                report.cubic_constant_zeros.push((a, b));
            }
            if !(a.is_zero() && b.is_zero()) && (a3 + field.mul(a, b2) + b3).is_zero() {
                report.norm_zeros.push((a, b));
            }
        }
    }
    Ok(report)
}

/// Printed factorizations and auxiliary identities from the key lemma's
/// proof, each evaluated at the report's point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyLemmaIdentities {
    /// `U_i = v a^{2^m} C^{2^{2m}} (a^{2^s} U)^{2^{2m}}`, `^{2^m}`, `^1`.
    pub u_factorizations: [bool; 3],
    /// `V_i = v a^{2^{2m+s+1}+2^{m+s}} L(a) T (aV)^{2^{2m}}`, `^{2^m}`, `^1`.
    pub v_factorizations: [bool; 3],
    /// `U = V^{2^{2m}} + mu V`.
    pub u_from_v: bool,
    /// `V = a^{2^{2m}} P + a^{2^m} P^{2^m}`.
    pub v_from_p: bool,
    /// `E = C^{2^m} a^{1-2^{2m}}`.
    pub e_from_c: bool,
    /// The linearized map `z -> A z^{2^{2m+s}} + B z^{2^{m+s}} + C z^{2^m} + D z^{2^s} + E z`
    /// has kernel exactly `{0, 1}`.
    pub kernel_is_zero_one: bool,
}

impl KeyLemmaIdentities {
    pub fn all_hold(&self) -> bool {
        self.u_factorizations.iter().all(|&b| b)
            && self.v_factorizations.iter().all(|&b| b)
            && self.u_from_v
            && self.v_from_p
            && self.e_from_c
            && self.kernel_is_zero_one
    }
}

/// Values of the key lemma at one nonzero point `a` of GF(2^{3m}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyLemmaReport {
    pub field: FieldSpec,
    pub m: u32,
    pub s: u32,
    pub mu: FieldElement,
    pub v: FieldElement,
    pub a: FieldElement,
    /// `L(a)`.
    pub l_a: FieldElement,
    /// `A, B, C, D, E`.
    pub abcde: [FieldElement; 5],
    /// `U_1 .. U_4`.
    pub u_values: [FieldElement; 4],
    /// `V_1 .. V_4`.
    pub v_values: [FieldElement; 4],
    /// Diagnostics `U, V, T, P` from the proof of claim (ii).
    pub diag_u: FieldElement,
    pub diag_v: FieldElement,
    pub diag_t: FieldElement,
    pub diag_p: FieldElement,
    pub identities: KeyLemmaIdentities,
}

impl KeyLemmaReport {
    /// Claims (i)-(v), recomputed from the stored values.
    pub fn claim_results(&self) -> [bool; 5] {
        let f = &self.field;
        let [a, b, c, d, e] = self.abcde;
        let [u1, u2, u3, u4] = self.u_values;
        let [v1, v2, v3, v4] = self.v_values;
        let zero = FieldElement::ZERO;
        let i = (a + b + c + d + e).is_zero() && self.abcde.iter().all(|x| !x.is_zero()) && !(c + e).is_zero();
        let ii = (0..3).all(|k| !f.mul(self.u_values[k], self.v_values[k]).is_zero());
        let iii = u4 == zero && v4 == zero;
        let s = self.s;
        let (v1s, v2s, v3s) = (f.frob(v1, s), f.frob(v2, s), f.frob(v3, s));
        let head = f.mul(u2, v1s) + f.mul(u1, v2s);
        let iv = (head + f.mul(u3, v1s) + f.mul(u1, v3s)).is_zero();
        let v = !head.is_zero();
        [i, ii, iii, iv, v]
    }

    pub fn all_hold(&self) -> bool {
        self.claim_results().iter().all(|&b| b) && self.identities.all_hold()
    }
}

/// Evaluates the key lemma at `a` for the trinomial family parameters
/// `(m, s, mu, v)`, with `mu` and `v` in the default GF(2^{3m}).
pub fn verify_key_lemma(
    m: u32,
    s: u32,
    mu: FieldElement,
    v: FieldElement,
    a: FieldElement,
) -> Result<KeyLemmaReport, LemmaError> {
    let params = TrinomialParams::new(m, s, mu, v)?;
    params.field().check(a)?;
    if a.is_zero() {
        return Err(LemmaError::ZeroPoint);
    }
    Ok(key_lemma_at(&params, a))
}

/// Outcome of [`verify_key_lemma`] over every nonzero point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyLemmaSweep {
    pub points_checked: u64,
    /// Points where some claim or identity fails, capped at [`MAX_FAILURES`].
    pub failures: Vec<FieldElement>,
    pub failure_count: u64,
}

impl KeyLemmaSweep {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// Runs the key-lemma check at every nonzero point of GF(2^{3m}).
pub fn verify_key_lemma_all(m: u32, s: u32, mu: FieldElement, v: FieldElement) -> Result<KeyLemmaSweep, LemmaError> {
    let params = TrinomialParams::new(m, s, mu, v)?;
    let mut sweep = KeyLemmaSweep {
        points_checked: 0,
        failures: Vec::new(),
        failure_count: 0,
    };
    for a in params.field().elements().skip(1) {
        sweep.points_checked += 1;
        if !key_lemma_at(&params, a).all_hold() {
            sweep.failure_count += 1;
            if sweep.failures.len() < MAX_FAILURES {
                sweep.failures.push(a);
            }
        }
    }
    Ok(sweep)
}

fn key_lemma_at(params: &TrinomialParams, a: FieldElement) -> KeyLemmaReport {
    let f = params.field();
    let (m, s, mu, v) = (params.m(), params.s(), params.mu(), params.v());
    let mul = |x: FieldElement, y: FieldElement| f.mul(x, y);
    let fr = |x: FieldElement, k: u32| f.frob(x, k);
    let pw = |x: FieldElement, e: u64| f.pow(x, e);
    let prod = |xs: &[FieldElement]| xs.iter().fold(FieldElement::ONE, |acc, &x| f.mul(acc, x));
    let q1 = 1u64 << m;
    let q2 = 1u64 << (2 * m);

    let la = params.l().eval_unchecked(a);
    let lva = la + mul(v, a);
    let ca = mul(la, fr(a, 2 * m + s));
    let cb = mul(fr(la, m) + mul(fr(mu, m), la), fr(a, m + s));
    let cc = mul(lva, fr(a, m));
    let cd = prod(&[mu, fr(la, m), fr(a, s)]);
    let ce = mul(fr(lva, m), a);

    let e_q1 = pw(ce, q1 + 1);
    let c_q2 = pw(cc, q2 + 1);
    let u1 = mul(fr(cd, 2 * m), e_q1) + prod(&[ca, fr(cc, 2 * m), fr(ce, m)]) + mul(fr(cb, m), c_q2);
    let u2 = mul(fr(ca, 2 * m), e_q1) + prod(&[cb, fr(cc, 2 * m), fr(ce, m)]) + mul(c_q2, fr(cd, m));
    let u3 = mul(fr(cb, 2 * m), e_q1) + prod(&[fr(cc, 2 * m), cd, fr(ce, m)]) + mul(fr(ca, m), c_q2);
    let u4 = pw(cc, q2 + q1 + 1) + pw(ce, q2 + q1 + 1);

    let a_q2_2 = pw(ca, q2 + 2);
    let a_q2_1 = pw(ca, q2 + 1);
    let a2 = f.square(ca);
    let b_q1_1 = pw(cb, q1 + 1);
    let d_q2_q1 = pw(cd, q2 + q1);
    let v1 = mul(a_q2_2, fr(cc, m))
        + prod(&[ca, cb, fr(cc, m), fr(cd, 2 * m)])
        + prod(&[ca, b_q1_1, fr(ce, 2 * m)])
        + prod(&[a2, fr(cd, m), fr(ce, 2 * m)]);
    let v2 = mul(a_q2_2, fr(ce, m))
        + prod(&[ca, cb, fr(cd, 2 * m), fr(ce, m)])
        + prod(&[a_q2_1, fr(cb, m), cc])
        + prod(&[ca, cc, d_q2_q1]);
    let v3 = prod(&[a_q2_1, fr(cb, m), ce])
        + prod(&[ca, b_q1_1, fr(cc, 2 * m)])
        + prod(&[a2, fr(cc, 2 * m), fr(cd, m)])
        + prod(&[ca, d_q2_q1, ce]);
    let v4 = mul(b_q1_1 + mul(ca, fr(cd, m)), mul(ca, fr(cb, 2 * m)) + pw(cd, q2 + 1))
        + mul(a_q2_1 + mul(cb, fr(cd, 2 * m)), pw(ca, q1 + 1) + mul(fr(cb, m), cd));

    // a^{2^i + 2^j}
    let e2 = |i: u32, j: u32| mul(fr(a, i), fr(a, j));
    let mu_q1 = fr(mu, m);
    let mu_q2 = fr(mu, 2 * m);
    let du = mul(mu_q1, e2(m + s, 0))
        + e2(2 * m + s, 0)
        + e2(m + s, m)
        + mul(pw(mu, q1 + 1), e2(2 * m, m + s))
        + mul(pw(mu, q2 + 1), e2(2 * m + s, m))
        + mul(mu, e2(2 * m + s, 2 * m));
    let dv = e2(m, s) + mul(mu_q1, e2(2 * m, m + s)) + mul(mu_q2, e2(2 * m + s, m)) + e2(2 * m + s, 2 * m);
    let dt = mul(pw(mu, q2 + q1 + 1) + FieldElement::ONE, fr(a, s))
        + mul(pw(mu, q2 + q1), a)
        + mul(mu_q2, fr(a, m))
        + fr(a, 2 * m);
    let dp = fr(a, 2 * m + s) + mul(mu_q1, fr(a, m + s));

    let u_pref = prod(&[v, fr(a, m), fr(cc, 2 * m)]);
    let asu = mul(fr(a, s), du);
    let v_pref = prod(&[v, fr(a, 2 * m + s + 1), fr(a, m + s), la, dt]);
    let av = mul(a, dv);
    let kernel = LinearizedPoly::from_terms(f, [(ca, 2 * m + s), (cb, m + s), (cc, m), (cd, s), (ce, 0)])
        .expect("coefficients live in the field");
    let identities = KeyLemmaIdentities {
        u_factorizations: [
            u1 == mul(u_pref, fr(asu, 2 * m)),
            u2 == mul(u_pref, fr(asu, m)),
            u3 == mul(u_pref, asu),
        ],
        v_factorizations: [
            v1 == mul(v_pref, fr(av, 2 * m)),
            v2 == mul(v_pref, fr(av, m)),
            v3 == mul(v_pref, av),
        ],
        u_from_v: du == fr(dv, 2 * m) + mul(mu, dv),
        v_from_p: dv == mul(fr(a, 2 * m), dp) + mul(fr(a, m), fr(dp, m)),
        e_from_c: ce == prod(&[fr(cc, m), a, f.inv(fr(a, 2 * m)).expect("a is nonzero")]),
        kernel_is_zero_one: kernel.eval_unchecked(FieldElement::ONE).is_zero() && kernel.rank() + 1 == f.n(),
    };

    KeyLemmaReport {
        field: f.clone(),
        m,
        s,
        mu,
        v,
        a,
        l_a: la,
        abcde: [ca, cb, cc, cd, ce],
        u_values: [u1, u2, u3, u4],
        v_values: [v1, v2, v3, v4],
        diag_u: du,
        diag_v: dv,
        diag_t: dt,
        diag_p: dp,
        identities,
    }
}
