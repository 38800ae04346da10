//! Best-effort recognition of the CR0 / CR1 shapes relative to the canonical
//! maximal torus of an embedded ambient.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{coords_in_span, independent_subset, span_intersection, span_rank};
use crate::scalar::Scalar;

use super::{is_cr, root_decompose, subalgebra_witness, Subalgebra};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ShapeKind {
    /// Toric part plus a bracket-closed selection of root spaces.
    Cr0 { positive: Vec<usize> },
    /// Toric part plus all selected roots but one, plus a line `t + x`
    /// with `x` in the missing root space.
    Cr1 { alpha: usize, positive: Vec<usize> },
    Unrecognized,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeReport {
    pub subalgebra_witness: Option<(usize, usize)>,
    pub is_cr: bool,
    pub dim: usize,
    /// `[N/2]` for the ambient dimension `N`.
    pub max_rank: usize,
    pub toric_dim: usize,
    /// The extracted basis of `h` meet the complexified torus, described
    /// over the canonical ambient basis.
    pub toric_basis: Vec<String>,
    pub shape: ShapeKind,
    pub notes: Vec<String>,
}

/// Classify a subalgebra against the CR0/CR1 normal forms.
pub fn classify_shape(h: &Subalgebra) -> Result<ShapeReport> {
    let mut notes = Vec::new();
    let witness = subalgebra_witness(&h.basis)?;
    let cr = is_cr(h);
    let max_rank = h.ambient.dim() / 2;

    let (torus, basis) = match (h.ambient.canonical_torus(), h.ambient.canonical_basis()) {
        (Some(t), Some(b)) => (t, b),
        _ => {
            notes.push(format!(
                "no canonical torus embedded for ambient {}; shape not analyzed",
                h.ambient
            ));
            return Ok(ShapeReport {
                subalgebra_witness: witness,
                is_cr: cr,
                dim: h.dim(),
                max_rank,
                toric_dim: 0,
                toric_basis: Vec::new(),
                shape: ShapeKind::Unrecognized,
                notes,
            });
        }
    };
    let datum = root_decompose(&torus, &basis)?;

    let h_rows = h.raw_rows();
    let torus_rows: Vec<Vec<Scalar>> = torus.iter().map(|t| t.raw_coords()).collect();
    let toric = span_intersection(&h_rows, &torus_rows);
    let toric_dim = toric.len();
    let toric_basis: Vec<String> = toric
        .iter()
        .map(|coords| {
            super::LieElement::from_raw_coords(h.ambient.clone(), coords).describe()
        })
        .collect();

    // root spaces fully inside h
    let selected: Vec<usize> = datum
        .roots
        .iter()
        .enumerate()
        .filter(|(_, r)| coords_in_span(&h_rows, &r.vector.raw_coords()).is_some())
        .map(|(i, _)| i)
        .collect();

    let mut span_cr0: Vec<Vec<Scalar>> = toric.clone();
    for &i in &selected {
        span_cr0.push(datum.roots[i].vector.raw_coords());
    }
    let cr0_rank = span_rank(&span_cr0);

    let shape = if cr0_rank == h.dim() && toric_dim + selected.len() == h.dim() {
        ShapeKind::Cr0 { positive: selected.clone() }
    } else {
        // look for exactly one residual direction of the form t + x
        let mut all_rows = span_cr0.clone();
        let base = all_rows.len();
        all_rows.extend(h_rows.iter().cloned());
        let kept = independent_subset(&all_rows);
        let residual: Vec<usize> = kept.into_iter().filter(|&i| i >= base).collect();
        if residual.len() == 1 && toric_dim + selected.len() + 1 == h.dim() {
            let w = &all_rows[residual[0]];
            // expand w over torus + all root vectors
            let mut frame = torus_rows.clone();
            for r in &datum.roots {
                frame.push(r.vector.raw_coords());
            }
            match coords_in_span(&frame, w) {
                Some(coords) => {
                    let root_part = &coords[torus.len()..];
                    let hot: Vec<usize> = root_part
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, _)| i)
                        .collect();
                    if hot.len() == 1 && !selected.contains(&hot[0]) {
                        let alpha = hot[0];
                        let mut positive = selected.clone();
                        positive.push(alpha);
                        positive.sort();
                        ShapeKind::Cr1 { alpha, positive }
                    } else {
                        notes.push(
                            "residual direction mixes several root spaces".into(),
                        );
                        ShapeKind::Unrecognized
                    }
                }
                None => {
                    notes.push("residual direction leaves the root frame".into());
                    ShapeKind::Unrecognized
                }
            }
        } else {
            ShapeKind::Unrecognized
        }
    };

    Ok(ShapeReport {
        subalgebra_witness: witness,
        is_cr: cr,
        dim: h.dim(),
        max_rank,
        toric_dim,
        toric_basis,
        shape,
        notes,
    })
}
