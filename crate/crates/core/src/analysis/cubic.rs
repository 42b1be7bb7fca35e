//! Root counts of `z^3 + a z + b` over GF(2^m) by the trace/resolvent
//! criterion, with exhaustive counting as the fallback and the oracle.

use crate::gf2n::{CubeClass, FieldElement, FieldSpec, SubfieldEmbedding, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicClass {
    /// Number of roots in GF(2^m): 0, 1 or 3.
    pub root_count: u32,
    /// Roots `t1, t2` of the resolvent `t^2 + b t + a^3`, when the criterion
    /// needed them. They lie in GF(2^m) for even m and in GF(2^{2m}) for odd m
    /// (then given in the bits of [`CubicClass::resolvent_field`]).
    pub resolvent_roots: Option<(FieldElement, FieldElement)>,
    /// Field holding the resolvent roots.
    pub resolvent_field: Option<FieldSpec>,
}

/// Brute-force root count.
pub fn cubic_root_count_brute(field: &FieldSpec, a: FieldElement, b: FieldElement) -> u32 {
    field
        .elements()
        .filter(|&z| (field.mul(field.square(z), z) + field.mul(a, z) + b).is_zero())
        .count() as u32
}

/// Classifies `z^3 + a z + b`. For `a, b != 0`:
/// one root iff `tr(a^3 / b^2) != tr(1)`; otherwise three roots iff the
/// resolvent roots are cubes (in GF(2^m) for even m, in GF(2^{2m}) for odd
/// m) and none if they are not. Degenerate inputs are counted exhaustively.
pub fn cubic_root_count(field: &FieldSpec, a: FieldElement, b: FieldElement) -> CubicClass {
    let brute = |field: &FieldSpec| CubicClass {
        root_count: cubic_root_count_brute(field, a, b),
        resolvent_roots: None,
        resolvent_field: None,
    };
    if a.is_zero() || b.is_zero() || 2 * field.n() > MAX_DEGREE {
        return brute(field);
    }
    let m = field.n();
    let a3 = field.mul(field.square(a), a);
    let b2 = field.square(b);
    let c = field.mul(a3, field.inv(b2).expect("b != 0"));
    if field.abs_trace(c) != field.abs_trace(FieldElement::ONE) {
        return CubicClass {
            root_count: 1,
            resolvent_roots: None,
            resolvent_field: None,
        };
    }
    // t = b w turns the resolvent into w^2 + w = a^3 / b^2.
    let (big, c_big, b_big) = if m.is_multiple_of(2) {
        (field.clone(), c, b)
    } else {
        let big = FieldSpec::new(2 * m, None).expect("2m within range");
        let emb = SubfieldEmbedding::new(field, &big).expect("GF(2^m) embeds in GF(2^{2m})");
        (big.clone(), emb.embed(c), emb.embed(b))
    };
    let w = solve_artin_schreier(&big, c_big).expect("trace condition guarantees a root");
    let t1 = big.mul(b_big, w);
    let t2 = t1 + b_big;
    let cube = big.cube_class(t1).expect("t1 != 0") == CubeClass::Cube;
    CubicClass {
        root_count: if cube { 3 } else { 0 },
        resolvent_roots: Some((t1, t2)),
        resolvent_field: Some(big),
    }
}

/// A solution of `w^2 + w = c`, by Gaussian elimination on the GF(2)-linear
/// map `w -> w^2 + w`.
pub(crate) fn solve_artin_schreier(field: &FieldSpec, c: FieldElement) -> Option<FieldElement> {
    let n = field.n() as usize;
    // Echelon basis of images, each tagged with the preimage combination.
    let mut basis: Vec<(u32, u32)> = Vec::new();
    for i in 0..n {
        let e = FieldElement(1 << i);
        let mut img = (field.square(e) + e).0;
        let mut pre = e.0;
        for &(bi, bp) in &basis {
            if img & (1 << (31 - bi.leading_zeros())) != 0 {
                img ^= bi;
                pre ^= bp;
            }
        }
        if img != 0 {
            basis.push((img, pre));
            basis.sort_by_key(|&(b, _)| b.leading_zeros());
        }
    }
    let mut target = c.0;
    let mut sol = 0u32;
    for &(bi, bp) in &basis {
        if target & (1 << (31 - bi.leading_zeros())) != 0 {
            target ^= bi;
            sol ^= bp;
        }
    }
    (target == 0).then_some(FieldElement(sol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_examples() {
        let gf5 = FieldSpec::new(5, None).unwrap();
        let r = cubic_root_count(&gf5, FieldElement::ONE, FieldElement::ONE);
        assert_eq!(r.root_count, 0);
        assert!(r.resolvent_roots.is_some());
        let gf3 = FieldSpec::new(3, None).unwrap();
        assert_eq!(
            cubic_root_count(&gf3, FieldElement::ONE, FieldElement::ONE).root_count,
            3
        );
        assert_eq!(cubic_root_count_brute(&gf3, FieldElement::ONE, FieldElement::ONE), 3);
    }

    #[test]
    fn artin_schreier_solutions() {
        for n in 1..=10 {
            let f = FieldSpec::new(n, None).unwrap();
            for c in f.elements() {
                match solve_artin_schreier(&f, c) {
                    Some(w) => assert_eq!(f.square(w) + w, c),
                    None => assert_eq!(f.abs_trace(c), 1),
                }
            }
        }
    }

    #[test]
    fn matches_brute_force() {
        for m in 2..=6 {
            let f = FieldSpec::new(m, None).unwrap();
            for a in f.elements().skip(1) {
                for b in f.elements().skip(1) {
                    let c = cubic_root_count(&f, a, b);
                    assert_eq!(c.root_count, cubic_root_count_brute(&f, a, b), "m={m} a={a} b={b}");
                    if let (Some((t1, t2)), Some(big)) = (c.resolvent_roots, &c.resolvent_field) {
                        assert!(!big.mul(t1, t2).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_inputs_fall_back() {
        let f = FieldSpec::new(4, None).unwrap();
        // z^3 = 1 has three roots in GF(16) since 3 | 15.
        let r = cubic_root_count(&f, FieldElement::ZERO, FieldElement::ONE);
        assert_eq!(r.root_count, 3);
        assert!(r.resolvent_roots.is_none());
        assert_eq!(
            cubic_root_count(&f, FieldElement::ONE, FieldElement::ZERO).root_count,
            2
        );
    }
}
