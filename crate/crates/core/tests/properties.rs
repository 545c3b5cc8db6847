//! Property tests for the invariants of each module.

mod common;

use common::*;
use mixshape::cyclo::{cyclotomic, euler_phi, has_root_of_unity_root, phi_bounded_orders, torsion_exponent};
use mixshape::exact::linalg::{
    complete_to_unimodular, hermite_normal_form, integer_kernel, lattice_saturate, primitive,
};
use mixshape::groups::{conjugate_family, group_mixing_scan, GroupScanReport};
use mixshape::limits::{character_limit, progression_limit, spec2_exponent, trigpoly_limit, TrigPoly};
use mixshape::mixing::{
    commuting_pair_criterion, is_mixing_set, jointly_mixing, pair_quotient_witness, spectral_precheck,
    SpectralCheck,
};
use mixshape::oracle::{mc_correlation, random_epi_set, verify_witness, BoxSet};
use mixshape::{ComplexRational, EpiSet, IntMat, IntPoly, IntVec, MixingVerdict, RatVec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng};

fn config(cases: u32) -> ProptestConfig {
    Config { cases, ..Config::default() }
}

fn family(max_d: usize, min_s: usize, max_s: usize) -> impl Strategy<Value = EpiSet> {
    any::<u64>().prop_map(move |seed| random_family(&mut rng(seed), max_d, min_s, max_s))
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMat> {
    prop::collection::vec(-4i64..=4, rows * cols).prop_map(move |v| {
        IntMat::from_rows(v.chunks(cols).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .unwrap()
    })
}

fn mixing(f: &EpiSet) -> bool {
    is_mixing_set(f).unwrap().is_mixing()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

// ---- exact ----

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn kernel_vectors_are_primitive_solutions(m in int_matrix(2, 4)) {
        for v in integer_kernel(&m) {
            prop_assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
            prop_assert_eq!(primitive(&v), v.clone());
            prop_assert!(v.iter().find(|x| !x.is_zero()).unwrap().is_positive());
        }
    }

    #[test]
    fn rank_nullity(m in int_matrix(3, 4)) {
        let k = integer_kernel(&m).len();
        prop_assert_eq!(mixshape::exact::linalg::rank(&m) + k, 4);
    }

    #[test]
    fn cayley_hamilton(m in int_matrix(3, 3)) {
        let p = m.charpoly();
        let mut acc = IntMat::zeros(3, 3);
        for (k, c) in p.coeffs().iter().enumerate() {
            acc = &acc + &m.pow(k as u64).scale(c);
        }
        prop_assert!(acc.is_zero());
        prop_assert_eq!(m.det(), m.det_bareiss());
    }

    #[test]
    fn hnf_is_idempotent(m in int_matrix(3, 3)) {
        let h = hermite_normal_form(&m.to_rows());
        prop_assert_eq!(hermite_normal_form(&h), h.clone());
    }

    #[test]
    fn completion_is_unimodular(v in prop::collection::vec(-6i64..=6, 3)) {
        let v = primitive(&iv(&v));
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let u = complete_to_unimodular(&v).unwrap();
        prop_assert_eq!(u.column(0), v);
        prop_assert!(u.is_unimodular());
    }

    #[test]
    fn saturation_contains_input(v in prop::collection::vec(-6i64..=6, 3)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let rv: RatVec = v.iter().map(|&x| BigRational::new(x.into(), 2.into())).collect();
        let basis = lattice_saturate(&[rv]).unwrap();
        prop_assert_eq!(basis.len(), 1);
        // The saturated generator is the primitive vector on the same line.
        let p = primitive(&iv(&v));
        prop_assert!(basis[0] == p || basis[0] == p.iter().map(|x| -x).collect::<IntVec>());
    }

    #[test]
    fn gcd_divides(a in prop::collection::vec(-5i64..=5, 1..5), b in prop::collection::vec(-5i64..=5, 1..5)) {
        let p = IntPoly::from_i64(&a).to_fraction();
        let q = IntPoly::from_i64(&b).to_fraction();
        prop_assume!(!p.is_zero() || !q.is_zero());
        let g = p.gcd(&q).unwrap();
        prop_assert!(p.rem(&g).is_zero());
        prop_assert!(q.rem(&g).is_zero());
    }
}

// ---- cyclo ----

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn cyclotomic_degree_is_totient(n in 1u64..40) {
        prop_assert_eq!(cyclotomic(n).unwrap().degree(), Some(euler_phi(n).unwrap() as usize));
    }

    #[test]
    fn order_sets_are_complete(b in 1u64..10) {
        let set = phi_bounded_orders(b).unwrap();
        for n in 1..=4 * b * b + 10 {
            prop_assert_eq!(set.contains(n), euler_phi(n).unwrap() <= b);
        }
        let m = torsion_exponent(b).unwrap();
        prop_assert!(set.orders.iter().all(|&n| m.is_multiple_of(n)));
    }

    #[test]
    fn finite_order_matrices_have_root_of_unity_eigenvalues(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_unimodular(&mut r, 2, 3);
        let m = torsion_exponent(2).unwrap();
        if g.pow(m).is_identity() {
            prop_assert!(has_root_of_unity_root(&g.charpoly().to_fraction(), 2).unwrap());
        }
    }
}

// ---- mixing ----

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn certificates_replay(f in family(3, 2, 3)) {
        if let MixingVerdict::NotMixing { exponent, witness, support } = is_mixing_set(&f).unwrap() {
            let depth = 5 * (f.len() * f.dim()) as u64;
            prop_assert!(verify_witness(&f, exponent, &witness, depth).unwrap());
            prop_assert!(!support.is_empty());
        }
    }

    #[test]
    fn subset_monotonicity(f in family(3, 2, 4)) {
        if mixing(&f) {
            for k in 2..=3.min(f.len()) {
                for i in 0..f.len() {
                    let sub: Vec<usize> = (0..f.len()).cycle().skip(i).take(k).collect();
                    let mut sorted = sub.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    prop_assert!(mixing(&f.subset(&sorted)));
                }
            }
        }
    }

    #[test]
    fn power_invariance(f in family(3, 2, 3)) {
        let base = mixing(&f);
        prop_assert_eq!(mixing(&f.powers(2)), base);
        prop_assert_eq!(mixing(&f.powers(3)), base);
    }

    #[test]
    fn d_plus_one_subsets_decide(seed in any::<u64>(), d in 1usize..=2) {
        let mut r = rng(seed);
        let f = random_epi_set(&mut r, d, d + 2, 3);
        // s = d + 2, so the (d + 1)-subsets are exactly those missing one index.
        let all = (0..f.len()).all(|skip| {
            let sub: Vec<usize> = (0..f.len()).filter(|&i| i != skip).collect();
            mixing(&f.subset(&sub))
        });
        prop_assert_eq!(mixing(&f), all);
    }

    #[test]
    fn shared_charpoly_conjugates_do_not_mix(seed in any::<u64>()) {
        let mut r = rng(seed);
        let gamma = random_epi_set(&mut r, 2, 1, 3).into_maps().remove(0);
        let delta = random_unimodular(&mut r, 2, 4);
        let f = conjugate_family(&gamma, &delta, 3).unwrap();
        prop_assert!(!mixing(&f));
    }

    #[test]
    fn commuting_criterion_agrees(seed in any::<u64>(), d in 1usize..=3) {
        let f = random_commuting_family(&mut rng(seed), d, 2);
        let pair = commuting_pair_criterion(&f.maps()[0], &f.maps()[1]).unwrap();
        prop_assert_eq!(mixing(&f), pair);
    }

    #[test]
    fn precheck_never_contradicts(f in family(3, 2, 3)) {
        match spectral_precheck(&f).unwrap() {
            SpectralCheck::ProvenMixing => prop_assert!(mixing(&f)),
            SpectralCheck::ProvenNotMixing { .. } => prop_assert!(!mixing(&f)),
            SpectralCheck::Inconclusive => {}
        }
    }

    #[test]
    fn quotient_witness_iff_not_mixing(f in family(3, 2, 2)) {
        let w = pair_quotient_witness(&f.maps()[0], &f.maps()[1]).unwrap();
        prop_assert_eq!(w.is_none(), mixing(&f));
    }

    #[test]
    fn joint_mixing_adds_identity(f in family(3, 1, 3)) {
        prop_assert_eq!(jointly_mixing(&f).unwrap(), mixing(&with_identity(&f)));
    }
}

// ---- limits ----

fn random_trig(r: &mut rand_chacha::ChaCha8Rng, d: usize) -> TrigPoly {
    use rand::Rng;
    let mut p = TrigPoly::constant(d, ComplexRational::new(rat(r.gen_range(-2..=2)), rat(0)));
    for _ in 0..2 {
        let chi: IntVec = (0..d).map(|_| BigInt::from(r.gen_range(-1..=1))).collect();
        if chi.iter().all(Zero::is_zero) {
            continue;
        }
        let c = ComplexRational::new(rat(r.gen_range(-2..=2)), rat(r.gen_range(-1..=1)));
        let prev = p.coefficient(&chi);
        p.add_term(chi, c - prev).unwrap();
    }
    p
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn mixing_limits_are_products_of_means(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_family(&mut r, 2, 2, 2);
        prop_assume!(mixing(&f));
        let fs: Vec<TrigPoly> = (0..f.len()).map(|_| random_trig(&mut r, f.dim())).collect();
        let product = fs.iter().fold(ComplexRational::new(rat(1), rat(0)), |acc, p| acc * p.mean());
        for v in progression_limit(&f, &fs).unwrap().values {
            prop_assert_eq!(v, product.clone());
        }
    }

    #[test]
    fn limits_are_linear(seed in any::<u64>(), c in -3i64..=3) {
        let mut r = rng(seed);
        let f = random_family(&mut r, 2, 2, 2);
        let fs: Vec<TrigPoly> = (0..f.len()).map(|_| random_trig(&mut r, f.dim())).collect();
        let cz = ComplexRational::new(rat(c), rat(1));
        let mut scaled = fs.clone();
        scaled[0] = scaled[0].scale(&cz);
        let a = progression_limit(&f, &fs).unwrap();
        let b = progression_limit(&f, &scaled).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert_eq!(x * &cz, y.clone());
        }
    }

    #[test]
    fn progressions_refine(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_family(&mut r, 2, 2, 2);
        let l = spec2_exponent(&f).unwrap().modulus;
        let chars: Vec<IntVec> = (0..f.len())
            .map(|_| {
                use rand::Rng;
                let mut v: IntVec = (0..f.dim()).map(|_| BigInt::from(r.gen_range(-1..=1))).collect();
                if v.iter().all(Zero::is_zero) {
                    v[0] = BigInt::one();
                }
                v
            })
            .collect();
        for k in 0..l {
            let coarse = character_limit(&f, l, k, &chars).unwrap();
            prop_assert_eq!(character_limit(&f, 2 * l, k, &chars).unwrap(), coarse);
            prop_assert_eq!(character_limit(&f, 2 * l, k + l, &chars).unwrap(), coarse);
        }
    }

    #[test]
    fn residue_argument_is_reduced(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_family(&mut r, 2, 2, 2);
        let fs: Vec<TrigPoly> = (0..f.len()).map(|_| random_trig(&mut r, f.dim())).collect();
        let l = spec2_exponent(&f).unwrap().modulus;
        prop_assert_eq!(trigpoly_limit(&f, &fs, 1).unwrap(), trigpoly_limit(&f, &fs, 1 + l).unwrap());
    }
}

// ---- groups and oracle ----

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn refutations_replay(seed in any::<u64>()) {
        let mut r = rng(seed);
        let gens = EpiSet::new(vec![random_unimodular(&mut r, 2, 3), random_unimodular(&mut r, 2, 3)]).unwrap();
        if let GroupScanReport::Refuted { word, matrix, .. } = group_mixing_scan(&gens, 3, true).unwrap() {
            let inverses: Vec<Option<IntMat>> = gens.maps().iter().map(IntMat::unimodular_inverse).collect();
            prop_assert_eq!(word.evaluate(gens.maps(), &inverses).unwrap(), matrix.clone());
            prop_assert!(!mixshape::groups::is_finite_order(&matrix).unwrap());
            prop_assert!(has_root_of_unity_root(&matrix.charpoly().to_fraction(), 2).unwrap());
        }
    }

    #[test]
    fn perturbed_certificates_fail(f in family(2, 2, 3), pos in any::<prop::sample::Index>()) {
        if let MixingVerdict::NotMixing { exponent, mut witness, .. } = is_mixing_set(&f).unwrap() {
            let d = f.dim();
            let i = pos.index(witness.len() * d);
            witness[i / d][i % d] += 1;
            if witness.iter().flatten().any(|x| !x.is_zero()) {
                // A perturbation can land on another relation; it must then
                // genuinely replay.
                let ok = verify_witness(&f, exponent, &witness, 5 * (f.len() * d) as u64).unwrap();
                if ok {
                    let kernel = mixshape::mixing::stabilized_relation_kernel(&f, exponent).unwrap();
                    prop_assert!(kernel.len() > 1 || witness.len() > 1);
                }
            }
        }
    }

    #[test]
    fn mc_is_reproducible(seed in any::<u64>()) {
        let f = EpiSet::new(vec![fibonacci(), fibonacci().pow(2)]).unwrap();
        let b = BoxSet::lower_half(2);
        let a = mc_correlation(&f, 3, &[b.clone(), b.clone()], 2_000, seed).unwrap();
        let c = mc_correlation(&f, 3, &[b.clone(), b], 2_000, seed).unwrap();
        prop_assert_eq!(a, c);
    }
}

#[test]
fn mc_error_shrinks_like_inverse_root() {
    let f = EpiSet::new(vec![fibonacci(), fibonacci().pow(2)]).unwrap();
    let b = BoxSet::lower_half(2);
    let small = mc_correlation(&f, 10, &[b.clone(), b.clone()], 4_000, 5).unwrap();
    let large = mc_correlation(&f, 10, &[b.clone(), b], 64_000, 5).unwrap();
    let ratio = small.std_error / large.std_error;
    assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
}

#[test]
fn perturbation_rate_over_random_certificates() {
    // Single-entry perturbations of true certificates fail replay in the
    // overwhelming majority of cases.
    let mut r = TestRng::from_seed(RngAlgorithm::ChaCha, &[7; 32]);
    let mut seen = 0;
    let mut rejected = 0;
    let mut cr = rng(77);
    while seen < 40 {
        let f = random_family(&mut cr, 2, 2, 3);
        if let MixingVerdict::NotMixing { exponent, mut witness, .. } = is_mixing_set(&f).unwrap() {
            let d = f.dim();
            let i = (r.next_u32() as usize) % (witness.len() * d);
            witness[i / d][i % d] += 1;
            if witness.iter().flatten().all(Zero::is_zero) {
                continue;
            }
            seen += 1;
            if !verify_witness(&f, exponent, &witness, 5 * (f.len() * d) as u64).unwrap() {
                rejected += 1;
            }
        }
    }
    assert!(rejected * 10 >= seen * 8, "{rejected}/{seen} perturbations rejected");
}

#[test]
fn cesaro_average_matches_residue_limits() {
    use mixshape::oracle::cesaro_correlation;
    let cases: Vec<(EpiSet, Vec<TrigPoly>, u64)> = vec![
        (
            EpiSet::from_i64(&[&[&[1]], &[&[-1]]]).unwrap(),
            vec![TrigPoly::character(iv(&[1])), TrigPoly::character(iv(&[1]))],
            1009,
        ),
        (
            mixshape::examples::st_pair(),
            vec![TrigPoly::character(iv(&[1, 0])), TrigPoly::character(iv(&[-1, 0]))],
            31,
        ),
        (
            EpiSet::from_i64(&[&[&[2]], &[&[3]]]).unwrap(),
            {
                let mut p = TrigPoly::constant(1, ComplexRational::new(rat(1), rat(0)));
                p.add_term(iv(&[1]), ComplexRational::new(rat(1), rat(0))).unwrap();
                vec![p.clone(), p]
            },
            1009,
        ),
    ];
    for (f, fs, grid) in cases {
        let lim = progression_limit(&f, &fs).unwrap();
        let l = lim.modulus;
        let avg: f64 = lim.values.iter().map(|v| num_traits::ToPrimitive::to_f64(&v.re).unwrap()).sum::<f64>() / l as f64;
        let cesaro = cesaro_correlation(&f, &fs, 20 * l, grid).unwrap();
        assert!((cesaro.re - avg).abs() < 1e-3, "{f:?}: Cesàro {cesaro} vs {avg}");
        assert!(cesaro.im.abs() < 1e-3);
    }
}
