//! Structure predicates: subalgebra and CR checks, ideals, derived algebras
//! and the Levi form.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::linalg::{coords_in_span, independent_subset, span_rank, Mat};
use crate::scalar::Scalar;

use super::{bracket, Covector, LieElement, Subalgebra};

/// First pair of basis indices whose bracket leaves the span, if any.
pub fn subalgebra_witness(basis: &[LieElement]) -> Result<Option<(usize, usize)>> {
    let rows: Vec<Vec<Scalar>> = basis.iter().map(|e| e.raw_coords()).collect();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let br = bracket(&basis[i], &basis[j])?;
            if coords_in_span(&rows, &br.raw_coords()).is_none() {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Whether every pairwise bracket of the basis stays in its span.
pub fn is_subalgebra(basis: &[LieElement]) -> Result<bool> {
    Ok(subalgebra_witness(basis)?.is_none())
}

/// CR condition: `h` meets `conj(h)` only in 0, decided as
/// rank of `basis(h) + conj(basis(h))` equal to `2 dim h`.
pub fn is_cr(h: &Subalgebra) -> bool {
    let mut rows = h.raw_rows();
    for e in &h.basis {
        rows.push(e.conjugate().raw_coords());
    }
    span_rank(&rows) == 2 * h.dim()
}

/// First pair `(i, j)` with `[h_i, u_j]` outside `span(u)`, if any.
/// Requires `span(u) subset span(h)`.
pub fn ideal_witness(u: &Subalgebra, h: &Subalgebra) -> Result<Option<(usize, usize)>> {
    let h_rows = h.raw_rows();
    let u_rows = u.raw_rows();
    for e in &u.basis {
        if coords_in_span(&h_rows, &e.raw_coords()).is_none() {
            return Err(CoreError::Domain(
                "ideal candidate is not contained in the algebra".into(),
            ));
        }
    }
    for (i, x) in h.basis.iter().enumerate() {
        for (j, y) in u.basis.iter().enumerate() {
            let br = bracket(x, y)?;
            if coords_in_span(&u_rows, &br.raw_coords()).is_none() {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// `[h, u] subset span(u)`; requires `span(u) subset span(h)`.
pub fn is_ideal(u: &Subalgebra, h: &Subalgebra) -> Result<bool> {
    Ok(ideal_witness(u, h)?.is_none())
}

/// Span of all pairwise brackets of the basis, with an extracted basis.
pub fn derived_algebra(basis: &[LieElement]) -> Result<Subalgebra> {
    let ambient = basis
        .first()
        .map(|e| e.ambient.clone())
        .ok_or_else(|| CoreError::Domain("empty basis".into()))?;
    let mut brackets = Vec::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let br = bracket(&basis[i], &basis[j])?;
            if !br.is_zero() {
                brackets.push(br);
            }
        }
    }
    let rows: Vec<Vec<Scalar>> = brackets.iter().map(|e| e.raw_coords()).collect();
    let kept = independent_subset(&rows);
    let picked: Vec<LieElement> = kept.into_iter().map(|i| brackets[i].clone()).collect();
    Subalgebra::new(ambient, "derived", picked)
}

/// The Levi form `(1/2i) xi([L, conj M])`.
pub fn levi_form(xi: &Covector, l: &LieElement, m: &LieElement) -> Result<Scalar> {
    let br = bracket(l, &m.conjugate())?;
    let v = xi.eval(&br)?;
    // 1/(2i) = -i/2
    Ok(&v * &Scalar::from_ratio_im(-1, 2))
}

/// Witness of a non-flat structure: the basis pair, a characteristic
/// covector (coordinates over the canonical ambient basis when one exists),
/// and the nonzero Levi value at that covector.
#[derive(Clone, Debug, Serialize)]
pub struct LeviWitness {
    pub pair: (usize, usize),
    pub covector: Vec<Scalar>,
    pub value: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeviReport {
    pub flat: bool,
    pub witness: Option<LeviWitness>,
}

/// Levi-flatness of a CR algebra, decided by bracket membership: `h` is flat
/// iff `[L, conj M]` lies in `span(h + conj h)` for all basis pairs.
///
/// The characteristic covectors used for witnesses annihilate `h + conj h`;
/// the literal definition quantifies over the annihilator of `h` alone, but
/// the working form (and all of the worked examples) use the larger sum.
pub fn is_levi_flat(h: &Subalgebra) -> Result<LeviReport> {
    if !is_cr(h) {
        return Err(CoreError::Domain(
            "Levi-flatness requires a CR algebra (h meets conj h in 0 only)".into(),
        ));
    }
    // Work in coordinates over the canonical ambient basis when available so
    // witness covectors read off against named directions.
    let frame: Option<Vec<LieElement>> = h.ambient.canonical_basis();
    let to_coords = |e: &LieElement| -> Result<Vec<Scalar>> {
        match &frame {
            Some(basis) => {
                let rows: Vec<Vec<Scalar>> = basis.iter().map(|b| b.raw_coords()).collect();
                coords_in_span(&rows, &e.raw_coords()).ok_or_else(|| {
                    CoreError::Domain(
                        "element lies outside the canonical ambient algebra".into(),
                    )
                })
            }
            None => Ok(e.raw_coords()),
        }
    };

    let mut big_rows: Vec<Vec<Scalar>> = Vec::with_capacity(2 * h.dim());
    for e in &h.basis {
        big_rows.push(to_coords(e)?);
    }
    for e in &h.basis {
        big_rows.push(to_coords(&e.conjugate())?);
    }

    for i in 0..h.dim() {
        for j in 0..h.dim() {
            let br = bracket(&h.basis[i], &h.basis[j].conjugate())?;
            let br_coords = to_coords(&br)?;
            if coords_in_span(&big_rows, &br_coords).is_some() {
                continue;
            }
            // Not flat. Build a characteristic covector that detects it:
            // an annihilator of h + conj h pairing nontrivially with br.
            let ann = Mat::from_rows(big_rows.clone()).nullspace();
            let mut chosen: Option<Vec<Scalar>> = None;
            for cand in &ann {
                let pair: Scalar = cand
                    .iter()
                    .zip(&br_coords)
                    .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b));
                if !pair.is_zero() {
                    chosen = Some(cand.clone());
                    break;
                }
            }
            let mut covector =
                chosen.expect("bracket outside the span pairs with some annihilator");
            // normalize: first nonzero coefficient becomes 1
            if let Some(first) = covector.iter().find(|c| !c.is_zero()) {
                let inv = first.inv().expect("nonzero");
                covector = covector.iter().map(|c| c * &inv).collect();
            }
            let value_raw: Scalar = covector
                .iter()
                .zip(&br_coords)
                .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b));
            let value = &value_raw * &Scalar::from_ratio_im(-1, 2);
            debug_assert!(!value.is_zero());
            return Ok(LeviReport {
                flat: false,
                witness: Some(LeviWitness { pair: (i, j), covector, value }),
            });
        }
    }
    Ok(LeviReport { flat: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{
        example3, sl2_ambient, sl2_cr1_element, su2_cr0, su_basis, Ambient, Subalgebra,
    };

    #[test]
    fn su2_pair_is_not_subalgebra() {
        let b = su_basis(2).unwrap();
        // {X, Y}: [X,Y] = 2T leaves the span
        let w = subalgebra_witness(&[b[0].clone(), b[1].clone()]).unwrap();
        assert_eq!(w, Some((0, 1)));
        // singleton is always a subalgebra
        assert!(is_subalgebra(&[b[0].clone()]).unwrap());
    }

    #[test]
    fn su2_cr0_is_cr_but_span_t_is_not() {
        let h = su2_cr0();
        assert!(is_cr(&h));
        let b = su_basis(2).unwrap();
        let t_only = Subalgebra::new(Ambient::su(2), "t", vec![b[2].clone()]).unwrap();
        assert!(!is_cr(&t_only));
    }

    #[test]
    fn derived_algebra_of_su2_is_everything() {
        let b = su_basis(2).unwrap();
        let d = derived_algebra(&b).unwrap();
        assert_eq!(d.dim(), 3);
    }

    #[test]
    fn levi_form_su2_value_two() {
        let b = su_basis(2).unwrap();
        let l = b[0].sub(&b[1].scale(&Scalar::i())).unwrap();
        let xi = Covector::dual(&b, 2); // dual to T
        let v = levi_form(&xi, &l, &l).unwrap();
        assert_eq!(v, Scalar::from_int(2));
    }

    #[test]
    fn levi_form_vanishes_on_example3_at_theta2() {
        // the characteristic covector theta_2 (dual of the second torus
        // coordinate) kills every Levi pairing of the flat fixture
        let ex = example3();
        let frame = ex.ambient.canonical_basis().unwrap();
        let theta2 = Covector::dual(&frame, 1);
        for a in &ex.h.basis {
            for b in &ex.h.basis {
                assert!(levi_form(&theta2, a, b).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn derived_algebra_of_abelian_is_zero() {
        let torus = crate::liealg::su_torus(4).unwrap();
        let d = derived_algebra(&torus).unwrap();
        assert_eq!(d.dim(), 0);
    }

    #[test]
    fn su2_cr0_not_flat_with_witness_two() {
        let rep = is_levi_flat(&su2_cr0()).unwrap();
        assert!(!rep.flat);
        let w = rep.witness.unwrap();
        assert_eq!(w.value, Scalar::from_int(2));
        // witness covector is the T-dual direction in the canonical frame
        assert_eq!(w.covector, vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
    }

    #[test]
    fn sl2_cr1_is_flat() {
        let h = Subalgebra::new(sl2_ambient(), "CR1", vec![sl2_cr1_element()]).unwrap();
        let rep = is_levi_flat(&h).unwrap();
        assert!(rep.flat);
    }

    #[test]
    fn example3_is_flat_and_ideals_hold() {
        let ex = example3();
        let rep = is_levi_flat(&ex.h).unwrap();
        assert!(rep.flat, "witness: {:?}", rep.witness);
        assert!(is_ideal(&ex.ideal, &ex.h).unwrap());
        // zero subalgebra is an ideal of anything
        let zero = Subalgebra::new(ex.ambient.clone(), "0", vec![]).unwrap();
        assert!(is_ideal(&zero, &ex.h).unwrap());
        // span{Z1} is an ideal of the toric part (the Z's are central there)
        // but not of the full h: [Z1, L1] = 2i L1 escapes span{Z1}
        let z1 = Subalgebra::new(ex.ambient.clone(), "z1", vec![ex.z[0].clone()]).unwrap();
        assert!(is_ideal(&z1, &ex.m).unwrap());
        assert!(!is_ideal(&z1, &ex.h).unwrap());
    }

    #[test]
    fn is_ideal_containment_precondition() {
        let b = su_basis(2).unwrap();
        let h = su2_cr0();
        let not_inside = Subalgebra::new(Ambient::su(2), "t", vec![b[2].clone()]).unwrap();
        assert!(is_ideal(&not_inside, &h).is_err());
    }

    #[test]
    fn levi_flat_requires_cr_input() {
        let b = su_basis(2).unwrap();
        let t_only = Subalgebra::new(Ambient::su(2), "t", vec![b[2].clone()]).unwrap();
        assert!(is_levi_flat(&t_only).is_err());
    }
}
