//! Randomized invariants across the public API.

use apnlab::analysis::{ddt, is_apn, is_apn_quadratic};
use apnlab::bitlinalg::{naive_rank, BitMatrix};
use apnlab::families::{FamilyId, FamilyTag};
use apnlab::gf2n::{gcd, is_irreducible, FieldElement, FieldSpec, SubfieldMap, DEFAULT_MODULI};
use apnlab::invariants::{gamma_rank, RankMode};
use apnlab::vbf::{AffineMap, BiTerm, BivariateFunc, FunctionTable, LinearizedPoly, UnivariatePoly};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gf(n: u32) -> FieldSpec {
    FieldSpec::new(n, None).unwrap()
}

fn el(field: &FieldSpec, bits: u32) -> FieldElement {
    FieldElement(bits & (field.size() as u32 - 1))
}

fn bools(rows: usize, cols: usize, seed: u64) -> Vec<Vec<bool>> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_bool(0.5)).collect())
        .collect()
}

#[test]
fn default_moduli_are_irreducible() {
    for (n, &p) in DEFAULT_MODULI.iter().enumerate().skip(1) {
        assert!(is_irreducible(p), "n={n}");
        assert_eq!(63 - p.leading_zeros(), n as u32);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(n in 1u32..=20, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = gf(n);
        let (a, b, c) = (el(&f, a), el(&f, b), el(&f, c));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.square(f.add(a, b)), f.add(f.square(a), f.square(b)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(f.pow(a, f.order()), FieldElement::ONE);
        }
    }

    #[test]
    fn exponent_reduction(n in 1u32..=16, a in 1u32.., e in 0u64..1_000_000) {
        let f = gf(n);
        let a = el(&f, a);
        prop_assume!(!a.is_zero());
        prop_assert_eq!(f.pow(a, e), f.pow(a, e % f.order()));
        prop_assert_eq!(f.pow(FieldElement::ZERO, e), if e == 0 { FieldElement::ONE } else { FieldElement::ZERO });
    }

    #[test]
    fn relative_trace_is_frobenius_invariant(pair in prop::sample::select(vec![(6u32, 2u32), (6, 3), (9, 3), (12, 4), (12, 6)]), z in any::<u32>()) {
        let (n, m) = pair;
        let f = gf(n);
        let z = el(&f, z);
        let t = f.trace(m, z).unwrap();
        prop_assert!(f.in_subfield(m, t));
        prop_assert_eq!(f.trace(m, f.frob(z, m)).unwrap(), t);
    }

    #[test]
    fn linearized_maps_are_additive(n in 2u32..=12, seed in any::<u64>(), a in any::<u32>(), b in any::<u32>()) {
        let f = gf(n);
        let l = LinearizedPoly::random(&f, &mut ChaCha8Rng::seed_from_u64(seed));
        let (a, b) = (el(&f, a), el(&f, b));
        prop_assert_eq!(l.eval_unchecked(f.add(a, b)), f.add(l.eval_unchecked(a), l.eval_unchecked(b)));
    }

    #[test]
    fn adjoint_satisfies_trace_pairing(n in 2u32..=12, seed in any::<u64>(), x in any::<u32>(), y in any::<u32>()) {
        let f = gf(n);
        let l = LinearizedPoly::random(&f, &mut ChaCha8Rng::seed_from_u64(seed));
        let adj = l.adjoint();
        let (x, y) = (el(&f, x), el(&f, y));
        prop_assert_eq!(
            f.abs_trace(f.mul(y, l.eval_unchecked(x))),
            f.abs_trace(f.mul(x, adj.eval_unchecked(y)))
        );
        prop_assert_eq!(l.is_permutation(), adj.is_permutation());
        prop_assert_eq!(adj.adjoint(), l);
    }

    #[test]
    fn univariate_terms_are_normalized(n in 1u32..=10, terms in prop::collection::vec((any::<u32>(), any::<u64>()), 0..12)) {
        let f = gf(n);
        let p = UnivariatePoly::new(&f, terms.into_iter().map(|(c, e)| (el(&f, c), e % 5000))).unwrap();
        let ts = p.terms();
        prop_assert!(ts.iter().all(|t| !t.0.is_zero() && t.1 <= f.order()));
        prop_assert!(ts.windows(2).all(|w| w[0].1 < w[1].1));
    }

    #[test]
    fn lut_file_round_trips(n in 1u32..=10, seed in any::<u64>()) {
        use rand::Rng;
        let f = gf(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lut: Vec<u32> = (0..f.size()).map(|_| rng.random_range(0..f.size() as u32)).collect();
        let t = FunctionTable::from_lut(&f, lut).unwrap();
        let mut buf = Vec::new();
        t.write_lut(&mut buf).unwrap();
        let back = FunctionTable::read_lut(buf.as_slice()).unwrap();
        prop_assert_eq!(back.lut(), t.lut());
        prop_assert_eq!(back.field(), t.field());
    }

    #[test]
    fn ddt_rows_sum_to_field_size_with_even_entries(n in 2u32..=8, seed in any::<u64>()) {
        use rand::Rng;
        let f = gf(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lut: Vec<u32> = (0..f.size()).map(|_| rng.random_range(0..f.size() as u32)).collect();
        let d = ddt(&FunctionTable::from_lut(&f, lut).unwrap());
        let size = f.size() as u64;
        let pairs: u64 = d.histogram.values().sum();
        let weighted: u64 = d.histogram.iter().map(|(v, c)| u64::from(*v) * c).sum();
        prop_assert_eq!(pairs, (size - 1) * size);
        prop_assert_eq!(weighted, (size - 1) * size);
        prop_assert!(d.histogram.keys().all(|v| v % 2 == 0));
        prop_assert!(d.delta >= 2 && d.delta.is_multiple_of(2));
    }

    #[test]
    fn spectrum_is_affine_invariant(n in 3u32..=8, k in 1u32..8, seed in any::<u64>()) {
        let f = gf(n);
        let e = (1u64 << (k % n)) + 1;
        let t = FunctionTable::from_fn(&f, |z| f.pow(z, e));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = t.compose_affine(&AffineMap::random(n, &mut rng), &AffineMap::random(n, &mut rng));
        prop_assert_eq!(ddt(&t).histogram, ddt(&g).histogram);
        // Still quadratic, so the shortcut must agree.
        prop_assert_eq!(is_apn(&g), is_apn_quadratic(&g));
    }

    #[test]
    fn bivariate_spectrum_is_basis_independent(m in 2u32..=4, b0 in 1u32.., b1 in 1u32..) {
        let comp = gf(m);
        let parent = gf(2 * m);
        let basis = (el(&parent, b0), el(&parent, b1));
        let alt = SubfieldMap::with_basis(&parent, &comp, basis);
        prop_assume!(alt.is_ok());
        let u = BiTerm::unit;
        let func = BivariateFunc::new(&comp, vec![u(3, 0), u(1, 2), u(0, 3), u(1, 1)], vec![u(5, 0), u(4, 1), u(0, 5), u(1, 1), u(2, 2)]).unwrap();
        let default = func.to_table(&SubfieldMap::new(&parent, &comp).unwrap()).unwrap();
        let other = func.to_table(&alt.unwrap()).unwrap();
        prop_assert_eq!(ddt(&default).histogram, ddt(&other).histogram);
    }

    #[test]
    fn gold_descriptor_round_trips_and_matches_form(n in 3u32..=10, i in 1u32..10) {
        let id = FamilyId::with_ints(FamilyTag::Gold, &[("n", n as i64), ("i", i as i64)]).unwrap();
        let built = id.build();
        if gcd(u64::from(i), u64::from(n)) != 1 {
            prop_assert!(built.is_err());
        } else {
            let inst = built.unwrap();
            let reevaluated = inst.form_table().unwrap();
            prop_assert_eq!(reevaluated.lut(), inst.table.lut());
            prop_assert!(is_apn(&inst.table));
            let back = FamilyId::parse(&inst.id.to_string()).unwrap();
            prop_assert_eq!(back, inst.id);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_matches_transpose_and_oracle(rows in 1usize..=300, cols in 1usize..=300, seed in any::<u64>()) {
        let mut b = bools(rows, cols, seed);
        let m = BitMatrix::from_bools(&b);
        let r = m.rank();
        prop_assert!(r <= rows.min(cols));
        prop_assert_eq!(r, m.transpose().rank());
        prop_assert_eq!(r, m.rank_dense());
        prop_assert_eq!(r, naive_rank(&mut b));
    }

    #[test]
    fn rank_survives_row_operations(rows in 2usize..=128, cols in 1usize..=200, seed in any::<u64>()) {
        use rand::Rng;
        let b = bools(rows, cols, seed);
        let mut m = BitMatrix::from_bools(&b);
        let r = m.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..50 {
            let i = rng.random_range(0..rows);
            let j = rng.random_range(0..rows);
            if i == j {
                continue;
            }
            if rng.random_bool(0.5) {
                m.swap_rows(i, j);
            } else {
                m.add_row(i, j);
            }
        }
        prop_assert_eq!(m.rank(), r);
        // Padding bits stay clear.
        let tail = cols % 64;
        if tail != 0 {
            for r in 0..rows {
                let last = *m.row_words(r).last().unwrap();
                prop_assert_eq!(last >> tail, 0);
            }
        }
    }

    #[test]
    fn matrix_dump_round_trips(rows in 1usize..=40, cols in 1usize..=130, seed in any::<u64>()) {
        let m = BitMatrix::from_bools(&bools(rows, cols, seed));
        let mut buf = Vec::new();
        m.write_dump(&mut buf).unwrap();
        prop_assert_eq!(BitMatrix::read_dump(buf.as_slice()).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gamma_rank_is_affine_invariant_and_bounded(n in 3u32..=5, seed in any::<u64>()) {
        let f = gf(n);
        let t = FunctionTable::from_fn(&f, |z| f.pow(z, 3));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = t.compose_affine(&AffineMap::random(n, &mut rng), &AffineMap::random(n, &mut rng));
        let a = gamma_rank(&t, "z^3", RankMode::InCore).unwrap();
        let b = gamma_rank(&g, "affine z^3", RankMode::OutOfCore).unwrap();
        prop_assert_eq!(a.gamma_rank, b.gamma_rank);
        prop_assert!(a.gamma_rank <= 1 << (2 * n));
    }
}
