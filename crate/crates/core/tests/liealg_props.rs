//! Exact algebraic invariants of the Lie-algebra layer: Jacobi, conjugation,
//! root data, CR constructions, Levi basis-invariance and the cohomology
//! differential.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cr_core::exterior::AltForm;
use cr_core::liealg::{
    bracket, ce_differential, cr0_construct, cr1_construct, derived_algebra, example3, is_cr,
    is_ideal, is_levi_flat, is_subalgebra, root_decompose, sl2_basis, su2_cr0, su2_cr1,
    su_basis, su_l_vectors, su_torus, Ambient, CeOperator, LieElement, Subalgebra,
};
use cr_core::scalar::Scalar;

fn seed() -> u64 {
    std::env::var("CR_INVARIANTS_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0xC0FFEE)
}

fn random_scalar(rng: &mut StdRng) -> Scalar {
    Scalar::from_complex(rng.random_range(-4..=4), rng.random_range(-4..=4))
}

fn random_combo(rng: &mut StdRng, basis: &[LieElement]) -> LieElement {
    let mut acc = LieElement::zero(basis[0].ambient.clone());
    for e in basis {
        acc = acc.add(&e.scale(&random_scalar(rng))).unwrap();
    }
    acc
}

#[test]
fn jacobi_identity_on_fixture_triples() {
    let mut rng = StdRng::seed_from_u64(seed());
    for basis in [su_basis(2).unwrap(), su_basis(3).unwrap(), su_basis(4).unwrap(), sl2_basis()]
    {
        for _ in 0..10 {
            let a = random_combo(&mut rng, &basis);
            let b = random_combo(&mut rng, &basis);
            let c = random_combo(&mut rng, &basis);
            let j1 = bracket(&bracket(&a, &b).unwrap(), &c).unwrap();
            let j2 = bracket(&bracket(&b, &c).unwrap(), &a).unwrap();
            let j3 = bracket(&bracket(&c, &a).unwrap(), &b).unwrap();
            let total = j1.add(&j2).unwrap().add(&j3).unwrap();
            assert!(total.is_zero(), "Jacobi fails on {}", basis[0].ambient);
        }
    }
}

#[test]
fn conjugation_commutes_with_brackets() {
    let mut rng = StdRng::seed_from_u64(seed() ^ 1);
    for basis in [su_basis(2).unwrap(), su_basis(4).unwrap(), sl2_basis()] {
        for _ in 0..10 {
            let a = random_combo(&mut rng, &basis);
            let b = random_combo(&mut rng, &basis);
            // involution
            assert_eq!(a.conjugate().conjugate().raw_coords(), a.raw_coords());
            // conj([a,b]) = [conj a, conj b]
            let lhs = bracket(&a, &b).unwrap().conjugate();
            let rhs = bracket(&a.conjugate(), &b.conjugate()).unwrap();
            assert_eq!(lhs.raw_coords(), rhs.raw_coords());
        }
    }
}

#[test]
fn root_data_invariants() {
    for n in [2usize, 3, 4] {
        let basis = su_basis(n).unwrap();
        let torus = su_torus(n).unwrap();
        let datum = root_decompose(&torus, &basis).unwrap();
        assert_eq!(datum.roots.len(), n * n - n, "su({n}) has n^2 - n roots");
        for root in &datum.roots {
            // eigen relation holds exactly for every torus generator
            for (t, lambda) in torus.iter().zip(&root.eigenvalues) {
                let br = bracket(t, &root.vector).unwrap();
                let expect = root.vector.scale(lambda);
                assert_eq!(br.raw_coords(), expect.raw_coords());
            }
        }
        // functionals pairwise distinct
        for (i, a) in datum.roots.iter().enumerate() {
            for b in &datum.roots[i + 1..] {
                assert_ne!(a.eigenvalues, b.eigenvalues);
            }
        }
    }
}

#[test]
fn cr_constructions_pass_predicates_with_expected_dimensions() {
    // CR0 on su(n): dim = [d/2] + |positive selection|
    for n in [2usize, 3, 4] {
        let basis = su_basis(n).unwrap();
        let torus = su_torus(n).unwrap();
        let datum = root_decompose(&torus, &basis).unwrap();
        let positive: Vec<usize> = su_l_vectors(n)
            .unwrap()
            .iter()
            .map(|l| datum.find_root_of(l).unwrap())
            .collect();
        let d = torus.len();
        // toric part: [d/2] independent CR directions T_{2j-1} - i T_{2j}
        let mut m_basis = Vec::new();
        for j in 0..d / 2 {
            m_basis.push(
                torus[2 * j]
                    .sub(&torus[2 * j + 1].scale(&Scalar::i()))
                    .unwrap(),
            );
        }
        let m = Subalgebra::new(Ambient::su(n), "m", m_basis).unwrap();
        let h = cr0_construct(&m, &datum, &positive).unwrap();
        assert_eq!(h.dim(), d / 2 + positive.len());
        assert_eq!(h.dim(), (n * n - 1) / 2, "maximal rank [N/2]");
        assert!(is_subalgebra(&h.basis).unwrap());
        assert!(is_cr(&h));
        // the positive-root span is an ideal of h
        let ideal = Subalgebra::new(
            Ambient::su(n),
            "b_t",
            positive.iter().map(|&i| datum.roots[i].vector.clone()).collect(),
        )
        .unwrap();
        assert!(is_ideal(&ideal, &h).unwrap());
    }
}

#[test]
fn cr1_construction_on_su2_and_ideal() {
    let basis = su_basis(2).unwrap();
    let torus = su_torus(2).unwrap();
    let datum = root_decompose(&torus, &basis).unwrap();
    let l = basis[0].sub(&basis[1].scale(&Scalar::i())).unwrap();
    let alpha = datum.find_root_of(&l).unwrap();
    let m = Subalgebra::new(Ambient::su(2), "m", vec![]).unwrap();
    let h = cr1_construct(&datum, &[alpha], alpha, &m, &l, &basis[2]).unwrap();
    assert_eq!(h.dim(), 1); // [3/2]
    assert!(is_cr(&h));
    assert!(is_subalgebra(&h.basis).unwrap());
    // the CR1 ideal (whole of h when no other roots remain)
    assert!(is_ideal(&h, &h).unwrap());
}

#[test]
fn example3_construction_matches_fixture() {
    let ex = example3();
    let torus = ex.ambient.canonical_torus().unwrap();
    let basis = ex.ambient.canonical_basis().unwrap();
    let datum = root_decompose(&torus, &basis).unwrap();
    let positive: Vec<usize> = ex
        .l
        .iter()
        .map(|l| datum.find_root_of(l).unwrap())
        .collect();
    let h = cr0_construct(&ex.m, &datum, &positive).unwrap();
    assert_eq!(h.dim(), 8);
    for e in &ex.h.basis {
        assert!(h.contains(e));
    }
    assert!(is_ideal(&ex.ideal, &ex.h).unwrap());
}

#[test]
fn levi_verdict_is_basis_invariant() {
    let mut rng = StdRng::seed_from_u64(seed() ^ 2);
    let fixtures: Vec<(Subalgebra, bool)> = vec![
        (su2_cr0(), false),
        (su2_cr1(), false),
        (example3().h, true),
    ];
    for (h, expect_flat) in fixtures {
        for _ in 0..4 {
            // random invertible mixing of the basis (unit upper triangular
            // times diagonal with entries in {1, -1, 2, i})
            let dim = h.dim();
            let mut new_basis = Vec::with_capacity(dim);
            for i in 0..dim {
                let choices = [
                    Scalar::one(),
                    Scalar::from_int(-1),
                    Scalar::from_int(2),
                    Scalar::i(),
                ];
                let mut v = h.basis[i].scale(&choices[rng.random_range(0..choices.len())]);
                for j in (i + 1)..dim {
                    if rng.random_bool(0.5) {
                        v = v.add(&h.basis[j].scale(&random_scalar(&mut rng))).unwrap();
                    }
                }
                new_basis.push(v);
            }
            let mixed = Subalgebra::new(h.ambient.clone(), h.label.clone(), new_basis).unwrap();
            let rep = is_levi_flat(&mixed).unwrap();
            assert_eq!(rep.flat, expect_flat, "fixture {}", h.label);
        }
    }
}

#[test]
fn derived_algebras_witness_semisimplicity() {
    for (n, expect) in [(2usize, 3usize), (3, 8), (4, 15)] {
        let d = derived_algebra(&su_basis(n).unwrap()).unwrap();
        assert_eq!(d.dim(), expect);
    }
    // torus directions are central: derived of T^2 x su(4) is the su(4) part
    let ex = example3();
    let ambient_basis = ex.ambient.canonical_basis().unwrap();
    let d = derived_algebra(&ambient_basis).unwrap();
    assert_eq!(d.dim(), 15);
    for e in &d.basis {
        assert!(e.torus.iter().all(|c| c.is_zero()));
    }
    // the containment of the semisimplicity proof: [g, g] of the fixture
    // ambient lies inside h + conj h
    let mut rows = ex.h.raw_rows();
    for e in &ex.h.basis {
        rows.push(e.conjugate().raw_coords());
    }
    for e in &d.basis {
        assert!(
            cr_core::linalg::coords_in_span(&rows, &e.raw_coords()).is_some(),
            "derived algebra leaves h + conj h"
        );
    }
}

#[test]
fn ce_differential_squares_to_zero_on_random_forms() {
    let mut rng = StdRng::seed_from_u64(seed() ^ 3);
    let su2 = Subalgebra::new(Ambient::su(2), "su2", su_basis(2).unwrap()).unwrap();
    let ex = example3();
    let su4 = Subalgebra::new(Ambient::su(4), "su4", su_basis(4).unwrap()).unwrap();

    let check = |h: &Subalgebra, degrees: &[usize], count: usize, rng: &mut StdRng| {
        let op = CeOperator::new(h).unwrap();
        let n = h.dim() as u32;
        for _ in 0..count {
            let q = degrees[rng.random_range(0..degrees.len())];
            let mut u = AltForm::zero(q, n);
            for _ in 0..4 {
                let mut idx: Vec<u32> = Vec::with_capacity(q);
                while idx.len() < q {
                    let c = rng.random_range(1..=n);
                    if !idx.contains(&c) {
                        idx.push(c);
                    }
                }
                u.add_tuple(&idx, random_scalar(rng)).unwrap();
            }
            let ddu = op.apply(&op.apply(&u).unwrap()).unwrap();
            assert!(ddu.is_zero(), "d^2 != 0 over {}", h.label);
        }
    };

    check(&su2, &[0, 1, 2], 100, &mut rng);
    check(&ex.h, &[0, 1, 2, 3], 60, &mut rng);
    check(&su4, &[1], 40, &mut rng);
}

#[test]
fn extend_by_zero_closedness_on_example3() {
    let ex = example3();
    let zeta1 = AltForm::basis_covector(1, 2).unwrap();
    let zeta2 = AltForm::basis_covector(2, 2).unwrap();
    let z12 = cr_core::exterior::wedge(&zeta1, &zeta2).unwrap();
    for u in [zeta1, zeta2, z12] {
        let rep =
            cr_core::liealg::extend_by_zero(&u, &ex.h, &ex.m, &ex.ideal).unwrap();
        assert!(rep.input_closed);
        assert!(rep.extension_closed);
        let d = ce_differential(&rep.extension, &rep.algebra).unwrap();
        assert!(d.is_zero());
    }
}

#[test]
fn right_translation_scales_root_vectors() {
    // Lemma-style law: right translation by a torus group element rescales
    // each root vector; the scalar is recovered by an exact solve
    let ls = su_l_vectors(4).unwrap();
    let mut t = cr_core::linalg::Mat::identity(4);
    t[(0, 0)] = Scalar::i();
    t[(1, 1)] = -Scalar::i();
    // det = 1, diag(i, -i, 1, 1) lies in the torus of SU(4)
    for l in &ls {
        let moved = cr_core::liealg::right_translate(l, &t).unwrap();
        // moved = c * l for a single scalar c
        let lc = l.raw_coords();
        let mc = moved.raw_coords();
        let k = lc.iter().position(|c| !c.is_zero()).unwrap();
        let c = &mc[k] / &lc[k];
        assert_eq!(moved.raw_coords(), l.scale(&c).raw_coords());
    }
}
