//! The two shapes of maximal-rank left-invariant CR algebras: the toric part
//! plus all selected positive roots (CR0), or the toric part plus all but one
//! simple root plus a mixed line `span{t + x}` (CR1).

use crate::error::{CoreError, Result};
use crate::linalg::{coords_in_span, span_rank};
use crate::scalar::Scalar;

use super::{bracket, subalgebra_witness, LieElement, RootDatum, Subalgebra};

fn check_toric(m: &Subalgebra, datum: &RootDatum) -> Result<()> {
    let torus_rows: Vec<Vec<Scalar>> = datum.torus.iter().map(|t| t.raw_coords()).collect();
    for e in &m.basis {
        if coords_in_span(&torus_rows, &e.raw_coords()).is_none() {
            return Err(CoreError::Domain(
                "toric part is not contained in the complexified torus span".into(),
            ));
        }
    }
    Ok(())
}

/// Bracket-closure of a selection of root indices: every pairwise bracket of
/// selected root vectors must stay in the span of the selected vectors.
fn check_selection_closed(datum: &RootDatum, selection: &[usize]) -> Result<()> {
    let rows: Vec<Vec<Scalar>> = selection
        .iter()
        .map(|&i| datum.roots[i].vector.raw_coords())
        .collect();
    for (a, &i) in selection.iter().enumerate() {
        for &j in &selection[a..] {
            let br = bracket(&datum.roots[i].vector, &datum.roots[j].vector)?;
            if br.is_zero() {
                continue;
            }
            if coords_in_span(&rows, &br.raw_coords()).is_none() {
                return Err(CoreError::Domain(format!(
                    "selected roots are not bracket-closed: offending pair ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// `Phi(m) = m + (sum of selected positive root spaces)`, verified to be a
/// CR-compatible subalgebra and labeled "CR0".
pub fn cr0_construct(
    m: &Subalgebra,
    datum: &RootDatum,
    selection: &[usize],
) -> Result<Subalgebra> {
    check_toric(m, datum)?;
    check_selection_closed(datum, selection)?;
    let mut basis = m.basis.clone();
    for &i in selection {
        basis.push(datum.roots[i].vector.clone());
    }
    let h = Subalgebra::new(m.ambient.clone(), "CR0", basis)?;
    if let Some((i, j)) = subalgebra_witness(&h.basis)? {
        return Err(CoreError::NotSubalgebra(i, j));
    }
    Ok(h)
}

/// `Theta(alpha, m, x, t) = m + (selected roots minus alpha) + span{t + x}`,
/// labeled "CR1".
///
/// `t` may be any element of the complexified torus; the construction checks
/// directly that `span{t + x}` stays clear of the real form, which is the
/// condition the real-torus requirement exists to guarantee (the split sl(2)
/// fixture needs `t = iT`).
pub fn cr1_construct(
    datum: &RootDatum,
    selection: &[usize],
    alpha: usize,
    m: &Subalgebra,
    x: &LieElement,
    t: &LieElement,
) -> Result<Subalgebra> {
    if !selection.contains(&alpha) {
        return Err(CoreError::Domain(
            "alpha must be one of the selected positive roots".into(),
        ));
    }
    check_toric(m, datum)?;
    check_selection_closed(datum, selection)?;

    // alpha simple: not a sum of two selected root functionals
    let eig_sum = |i: usize, j: usize| -> Vec<Scalar> {
        datum.roots[i]
            .eigenvalues
            .iter()
            .zip(&datum.roots[j].eigenvalues)
            .map(|(a, b)| a + b)
            .collect()
    };
    for &i in selection {
        for &j in selection {
            if eig_sum(i, j) == datum.roots[alpha].eigenvalues {
                return Err(CoreError::Domain(format!(
                    "alpha is not simple: it is the sum of selected roots {i} and {j}"
                )));
            }
        }
    }

    // m inside ker(alpha)
    for e in &m.basis {
        if !datum.functional(alpha, e)?.is_zero() {
            return Err(CoreError::Domain(
                "toric part must lie in the kernel of alpha".into(),
            ));
        }
    }
    // m meets the real form only in 0
    {
        let mut rows = m.raw_rows();
        for e in &m.basis {
            rows.push(e.conjugate().raw_coords());
        }
        if span_rank(&rows) != 2 * m.dim() {
            return Err(CoreError::Domain(
                "toric part must have null intersection with the real form".into(),
            ));
        }
    }

    if x.is_zero() {
        return Err(CoreError::Domain("x must be a nonzero element of g_alpha".into()));
    }
    match datum.find_root_of(x) {
        Some(idx) if idx == alpha => {}
        _ => {
            return Err(CoreError::Domain(
                "x must be a nonzero element of the root space of alpha".into(),
            ))
        }
    }

    let torus_rows: Vec<Vec<Scalar>> = datum.torus.iter().map(|e| e.raw_coords()).collect();
    if !t.is_zero() && coords_in_span(&torus_rows, &t.raw_coords()).is_none() {
        return Err(CoreError::Domain("t must lie in the torus span".into()));
    }

    let mixed = t.add(x)?;
    if span_rank(&[mixed.raw_coords(), mixed.conjugate().raw_coords()]) != 2 {
        return Err(CoreError::Domain(
            "span{t + x} intersects the real form".into(),
        ));
    }

    let mut basis = m.basis.clone();
    for &i in selection {
        if i != alpha {
            basis.push(datum.roots[i].vector.clone());
        }
    }
    basis.push(mixed);
    let h = Subalgebra::new(m.ambient.clone(), "CR1", basis)?;
    if let Some((i, j)) = subalgebra_witness(&h.basis)? {
        return Err(CoreError::NotSubalgebra(i, j));
    }
    Ok(h)
}
