//! Invariants of the torus structures and the divisor-condition scan.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cr_core::linalg::Mat;
use cr_core::scalar::Scalar;
use cr_core::toruscr::{dc_scan, t3_golden, t3_half, TorusStructure, DEFAULT_RHO_GRID};

fn seed() -> u64 {
    std::env::var("CR_INVARIANTS_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0xC0FFEE)
}

/// Exact rank-2 structure on T^5 with a rational resonance line.
fn t5_structure() -> TorusStructure {
    // L_1 = d1 + i d2 + (1/2) d5, L_2 = d3 + i d4 + (1/3) d5
    let z = Scalar::zero;
    TorusStructure::new(
        5,
        vec![
            vec![Scalar::one(), Scalar::i(), z(), z(), Scalar::from_ratio(1, 2)],
            vec![z(), z(), Scalar::one(), Scalar::i(), Scalar::from_ratio(1, 3)],
        ],
    )
    .unwrap()
}

fn random_invertible(rng: &mut StdRng, n: usize) -> Mat {
    // unit upper triangular times a nonzero diagonal: always invertible
    let mut m = Mat::identity(n);
    for i in 0..n {
        let d = loop {
            let c = Scalar::from_complex(rng.random_range(-3..=3), rng.random_range(-3..=3));
            if !c.is_zero() {
                break c;
            }
        };
        m[(i, i)] = d;
        for j in (i + 1)..n {
            m[(i, j)] =
                Scalar::from_complex(rng.random_range(-2..=2), rng.random_range(-2..=2));
        }
    }
    m
}

#[test]
fn symbol_is_additive_in_frequency() {
    let mut rng = StdRng::seed_from_u64(seed());
    for s in [t3_half(), t3_golden(), t5_structure()] {
        for _ in 0..50 {
            let xi: Vec<i64> = (0..s.big_n).map(|_| rng.random_range(-9..=9)).collect();
            let eta: Vec<i64> = (0..s.big_n).map(|_| rng.random_range(-9..=9)).collect();
            let sum: Vec<i64> = xi.iter().zip(&eta).map(|(a, b)| a + b).collect();
            for j in 0..s.n {
                let lhs = s.symbol(j, &sum).unwrap();
                let rhs = &s.symbol(j, &xi).unwrap() + &s.symbol(j, &eta).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn resonance_set_invariant_under_basis_change() {
    let mut rng = StdRng::seed_from_u64(seed() ^ 7);
    for s in [t3_half(), t5_structure()] {
        let radius = if s.big_n == 3 { 12 } else { 7 };
        let base = dc_scan(&s, radius, &[1.0]).unwrap();
        for _ in 0..3 {
            let m = random_invertible(&mut rng, s.n);
            let changed = s.basis_change(&m).unwrap();
            let scan = dc_scan(&changed, radius, &[1.0]).unwrap();
            assert_eq!(scan.resonances, base.resonances);
        }
    }
}

#[test]
fn two_sided_symbol_bound_under_basis_change() {
    // max symbol of the changed basis is within a factor n*A of the original,
    // checked exactly on squared moduli: |s'|^2 <= (nA)^2 |s|^2
    let mut rng = StdRng::seed_from_u64(seed() ^ 8);
    let s = t5_structure();
    for _ in 0..5 {
        let m = random_invertible(&mut rng, s.n);
        let changed = s.basis_change(&m).unwrap();
        // A^2 = max |m_jk|^2 as an exact real scalar
        let mut a_sq = Scalar::zero();
        for i in 0..s.n {
            for j in 0..s.n {
                let q = m[(i, j)].modulus_sq();
                if q.cmp_real(&a_sq) == std::cmp::Ordering::Greater {
                    a_sq = q;
                }
            }
        }
        let n_sq = Scalar::from_int((s.n * s.n) as i64);
        let bound_factor = &n_sq * &a_sq; // (n A)^2
        for _ in 0..30 {
            let xi: Vec<i64> = (0..s.big_n).map(|_| rng.random_range(-6..=6)).collect();
            let orig = s.max_symbol_modsq(&xi).unwrap();
            let new = changed.max_symbol_modsq(&xi).unwrap();
            let rhs = &bound_factor * &orig;
            assert_ne!(
                new.cmp_real(&rhs),
                std::cmp::Ordering::Greater,
                "upper bound violated at {xi:?}"
            );
        }
    }
}

#[test]
fn dc_scan_is_deterministic() {
    // identical inputs give bit-identical serialized reports, regardless of
    // internal parallel partitioning: compare a single-threaded pool, a
    // two-threaded pool, and the default pool
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let dual = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
    for s in [t3_half(), t3_golden()] {
        let a = dc_scan(&s, 25, &DEFAULT_RHO_GRID).unwrap();
        let b = single.install(|| dc_scan(&s, 25, &DEFAULT_RHO_GRID).unwrap());
        let c = dual.install(|| dc_scan(&s, 25, &DEFAULT_RHO_GRID).unwrap());
        let repr = serde_json::to_string(&a).unwrap();
        assert_eq!(repr, serde_json::to_string(&b).unwrap());
        assert_eq!(repr, serde_json::to_string(&c).unwrap());
    }
}

#[test]
fn shell_minima_match_brute_force_on_t5() {
    // independent oracle: direct minimum over an explicitly enumerated shell
    let s = t5_structure();
    let rep = dc_scan(&s, 3, &[1.0]).unwrap();
    for rec in &rep.shells {
        let r = rec.r;
        let mut best = f64::INFINITY;
        let range: Vec<i64> = (-r..=r).collect();
        for a in &range {
            for b in &range {
                for c in &range {
                    for d in &range {
                        for e in &range {
                            let xi = [*a, *b, *c, *d, *e];
                            if xi.iter().map(|x| x.abs()).max().unwrap() != r {
                                continue;
                            }
                            let v = s.max_symbol(&xi).unwrap();
                            if v < best {
                                best = v;
                            }
                        }
                    }
                }
            }
        }
        assert!(
            (rec.min - best).abs() <= 1e-12 * (1.0 + best),
            "shell {r}: scan {} vs oracle {best}",
            rec.min
        );
    }
}
