//! Differential analysis and the exact checks behind the APN proofs.
//!
//! [`ddt`] and [`is_apn`] count derivative solutions exhaustively;
//! [`is_apn_quadratic`] relies on the linearity of derivatives of quadratic
//! functions. The submodules hold the cubic-equation classifier, the
//! Sylvester resultant engine and the verifiers for the proof identities.

pub mod cubic;
pub mod lemmas;
pub mod resultant;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::gf2n::{FieldElement, FieldSpec};
use crate::vbf::FunctionTable;

pub use cubic::{cubic_root_count, cubic_root_count_brute, CubicClass};
pub use lemmas::{verify_key_lemma, verify_resultant_identity, IdentityMode, KeyLemmaReport, ResultantIdentityReport};
pub use resultant::{resultant, resultant_bivariate, resultant_formal, BivariatePolynomial, Variable};

/// Maximum number of witnesses kept in a [`DdtSummary`].
pub const MAX_WITNESSES: usize = 16;

/// Differential spectrum of a function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdtSummary {
    pub field: FieldSpec,
    /// Differential uniformity: the largest DDT entry over a != 0.
    pub delta: u32,
    /// Entry value -> number of pairs (a != 0, b) with that entry.
    pub histogram: BTreeMap<u32, u64>,
    /// The first pairs (a, b), in lexicographic order, whose entry equals delta.
    pub witnesses: Vec<(FieldElement, FieldElement)>,
}

impl DdtSummary {
    pub fn n(&self) -> u32 {
        self.field.n()
    }
}

/// Full differential spectrum by counting, for each a != 0, the solutions of
/// `f(z + a) + f(z) = b` for every b at once.
pub fn ddt(f: &FunctionTable) -> DdtSummary {
    let lut = f.lut();
    let size = lut.len();
    struct Row {
        max: u32,
        hist: BTreeMap<u32, u64>,
        witnesses: Vec<(u32, u32)>,
    }
    let rows: Vec<Row> = (1..size)
        .into_par_iter()
        .map_init(
            || vec![0u32; size],
            |counts, a| {
                counts.fill(0);
                for (z, &fz) in lut.iter().enumerate() {
                    counts[(lut[z ^ a] ^ fz) as usize] += 1;
                }
                let mut hist = BTreeMap::new();
                let mut max = 0;
                for &c in counts.iter() {
                    *hist.entry(c).or_insert(0) += 1;
                    max = max.max(c);
                }
                let witnesses = counts
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| c == max)
                    .take(MAX_WITNESSES)
                    .map(|(b, _)| (a as u32, b as u32))
                    .collect();
                Row { max, hist, witnesses }
            },
        )
        .collect();

    let delta = rows.iter().map(|r| r.max).max().unwrap_or(0);
    let mut histogram = BTreeMap::new();
    let mut witnesses = Vec::new();
    for row in &rows {
        for (&k, &v) in &row.hist {
            *histogram.entry(k).or_insert(0) += v;
        }
        if row.max == delta && witnesses.len() < MAX_WITNESSES {
            let room = MAX_WITNESSES - witnesses.len();
            witnesses.extend(
                row.witnesses
                    .iter()
                    .take(room)
                    .map(|&(a, b)| (FieldElement(a), FieldElement(b))),
            );
        }
    }
    DdtSummary {
        field: f.field().clone(),
        delta,
        histogram,
        witnesses,
    }
}

/// True iff every derivative equation has at most two solutions. Stops at the
/// first entry reaching 3.
pub fn is_apn(f: &FunctionTable) -> bool {
    let lut = f.lut();
    let size = lut.len();
    if size < 2 {
        return false;
    }
    (1..size).into_par_iter().all(|a| {
        let mut counts = vec![0u8; size];
        for (z, &fz) in lut.iter().enumerate() {
            let c = &mut counts[(lut[z ^ a] ^ fz) as usize];
            *c += 1;
            if *c > 2 {
                return false;
            }
        }
        true
    })
}

/// APN test for quadratic functions: checks only the value
/// `b = f(a) + f(0)`, i.e. that `f(z + a) + f(z) + f(a) + f(0) = 0` has
/// exactly the solutions `z = 0, a` for every `a != 0`. For quadratic f the
/// left side is GF(2)-linear in z, so this is equivalent to APN. Every APN
/// function passes; a non-quadratic non-APN function may pass too.
pub fn is_apn_quadratic(f: &FunctionTable) -> bool {
    let lut = f.lut();
    let size = lut.len();
    if size < 2 {
        return false;
    }
    let f0 = lut[0];
    (1..size).into_par_iter().all(|a| {
        let target = lut[a] ^ f0;
        let mut count = 0u32;
        for z in 0..size {
            if lut[z ^ a] ^ lut[z] == target {
                count += 1;
                if count > 2 {
                    return false;
                }
            }
        }
        true
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbf::{AffineMap, UnivariatePoly};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn monomial(n: u32, e: u64) -> FunctionTable {
        let field = FieldSpec::new(n, None).unwrap();
        UnivariatePoly::monomial(&field, FieldElement::ONE, e).to_table()
    }

    #[test]
    fn identity_has_full_uniformity() {
        let f = monomial(5, 1);
        let d = ddt(&f);
        assert_eq!(d.delta, 32);
        assert!(!is_apn(&f));
        assert!(!is_apn_quadratic(&monomial(5, 2)));
    }

    #[test]
    fn gold_and_inverse_are_apn() {
        let d = ddt(&monomial(5, 3));
        assert_eq!(d.delta, 2);
        assert_eq!(d.histogram.values().sum::<u64>(), 31 * 32);
        assert_eq!(d.histogram[&2], 31 * 16);
        assert!(is_apn(&monomial(9, 255)));
        assert!(is_apn_quadratic(&monomial(4, 3)));
        // Gold with gcd(i, n) = 2 is not APN.
        assert!(!is_apn(&monomial(8, 5)));
    }

    #[test]
    fn inverse_in_even_dimension_is_differentially_4_uniform() {
        let d = ddt(&monomial(6, 62));
        assert_eq!(d.delta, 4);
        assert!(!d.witnesses.is_empty() && d.witnesses.len() <= MAX_WITNESSES);
    }

    #[test]
    fn ddt_rows_sum_and_entries_are_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 2..=7 {
            let field = FieldSpec::new(n, None).unwrap();
            let lut: Vec<u32> = (0..field.size())
                .map(|_| rng.random_range(0..field.size() as u32))
                .collect();
            let f = FunctionTable::from_lut(&field, lut).unwrap();
            let d = ddt(&f);
            assert!(d.histogram.keys().all(|k| k % 2 == 0));
            let total: u64 = d.histogram.iter().map(|(k, v)| *k as u64 * v).sum();
            assert_eq!(total, (field.size() as u64 - 1) * field.size() as u64);
        }
    }

    #[test]
    fn quadratic_check_passes_non_quadratic_apn() {
        // Kasami z^57 has algebraic degree 4 but is APN.
        assert!(is_apn_quadratic(&monomial(8, 57)));
        assert!(is_apn(&monomial(8, 57)));
    }

    #[test]
    fn quadratic_shortcut_agrees_on_random_quadratics() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let field = FieldSpec::new(6, None).unwrap();
        let mut agree_apn = 0;
        for _ in 0..40 {
            // Random combination of z^{2^i + 2^j} terms: quadratic by construction.
            let mut terms = Vec::new();
            for _ in 0..rng.random_range(1..4) {
                let i = rng.random_range(0..6u32);
                let j = rng.random_range(0..6u32);
                if i != j {
                    terms.push((FieldElement(rng.random_range(1..64)), (1u64 << i) + (1u64 << j)));
                }
            }
            let f = UnivariatePoly::new(&field, terms).unwrap().to_table();
            assert_eq!(is_apn_quadratic(&f), is_apn(&f));
            agree_apn += is_apn(&f) as u32;
        }
        assert!(agree_apn > 0);
    }

    #[test]
    fn spectrum_is_affine_invariant() {
        let f = monomial(6, 3);
        let base = ddt(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let g = f.compose_affine(&AffineMap::random(6, &mut rng), &AffineMap::random(6, &mut rng));
            let d = ddt(&g);
            assert_eq!(d.delta, base.delta);
            assert_eq!(d.histogram, base.histogram);
        }
    }
}
