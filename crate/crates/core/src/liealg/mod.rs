//! Exact matrix Lie algebra engine: brackets, conjugation, root spaces,
//! CR0/CR1 constructions, Levi-form tests and the Chevalley-Eilenberg
//! differential, over ambients of the form `T^k x (matrix group)`.

mod ce;
mod construct;
mod fixtures;
mod predicates;
mod roots;
mod shape;
mod tables;

pub use ce::{ce_differential, extend_by_zero, CeOperator, ExtensionReport};
pub use construct::{cr0_construct, cr1_construct};
pub use fixtures::{
    example3, sl2_ambient, sl2_basis, sl2_cr1_element, su2_cr0, su2_cr1, su_ambient, su_basis,
    su_basis_names, su_l_vectors, su_torus, Example3,
};
pub use predicates::{
    derived_algebra, ideal_witness, is_cr, is_ideal, is_levi_flat, is_subalgebra, levi_form,
    subalgebra_witness, LeviReport, LeviWitness,
};
pub use roots::{root_decompose, RootDatum, RootVector};
pub use shape::{classify_shape, ShapeKind, ShapeReport};
pub use tables::{verify_tables, CellClass, CellReport, LambdaReport, TableReport};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::linalg::{coords_in_span, Mat};
use crate::scalar::Scalar;

/// Which real form the ambient conjugation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealForm {
    /// Compact form: conjugation of the matrix part is `A -> -A^H`.
    #[serde(rename = "compact")]
    Compact,
    /// Split form over the reals: conjugation is entrywise.
    #[serde(rename = "split")]
    Split,
}

/// Ambient algebra descriptor: `k` central torus directions plus an `n x n`
/// matrix factor carrying the declared real form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ambient {
    pub torus_dim: usize,
    pub matrix_dim: usize,
    pub form: RealForm,
    pub name: String,
}

impl Ambient {
    pub fn su(n: usize) -> Self {
        Ambient {
            torus_dim: 0,
            matrix_dim: n,
            form: RealForm::Compact,
            name: format!("su({n})"),
        }
    }

    pub fn sl2() -> Self {
        Ambient {
            torus_dim: 0,
            matrix_dim: 2,
            form: RealForm::Split,
            name: "sl(2)".into(),
        }
    }

    pub fn product(torus_dim: usize, n: usize) -> Self {
        Ambient {
            torus_dim,
            matrix_dim: n,
            form: RealForm::Compact,
            name: format!("T^{torus_dim} x su({n})"),
        }
    }

    pub fn compatible(&self, other: &Ambient) -> bool {
        self.torus_dim == other.torus_dim
            && self.matrix_dim == other.matrix_dim
            && self.form == other.form
    }

    /// Real dimension of the ambient Lie algebra (`k + (n^2 - 1)` for the
    /// su / sl matrix factors handled here).
    pub fn dim(&self) -> usize {
        let md = if self.matrix_dim > 0 { self.matrix_dim * self.matrix_dim - 1 } else { 0 };
        self.torus_dim + md
    }

    /// Length of the raw coordinate vectors of elements in this ambient.
    pub fn raw_len(&self) -> usize {
        self.torus_dim + self.matrix_dim * self.matrix_dim
    }

    /// The standard maximal torus of the canonical basis, when embedded.
    pub fn canonical_torus(&self) -> Option<Vec<LieElement>> {
        match (self.torus_dim, self.matrix_dim, self.form) {
            (0, n @ 2..=4, RealForm::Compact) => fixtures::su_torus(n).ok(),
            (0, 2, RealForm::Split) => Some(vec![fixtures::sl2_basis()[0].clone()]),
            (k, n @ 2..=4, RealForm::Compact) if k > 0 => {
                let amb = Ambient::product(k, n);
                let mut torus: Vec<LieElement> = (0..k)
                    .map(|j| LieElement::torus_direction(amb.clone(), j))
                    .collect();
                for t in fixtures::su_torus(n).ok()? {
                    torus.push(t.lift(&amb));
                }
                Some(torus)
            }
            _ => None,
        }
    }

    /// A canonical basis when this ambient is one of the embedded fixtures.
    pub fn canonical_basis(&self) -> Option<Vec<LieElement>> {
        match (self.torus_dim, self.matrix_dim, self.form) {
            (0, n @ 2..=4, RealForm::Compact) => Some(fixtures::su_basis(n).expect("fixture")),
            (0, 2, RealForm::Split) => Some(fixtures::sl2_basis()),
            (k, n @ 2..=4, RealForm::Compact) if k > 0 => {
                let amb = Ambient::product(k, n);
                let mut basis: Vec<LieElement> = (0..k)
                    .map(|j| LieElement::torus_direction(amb.clone(), j))
                    .collect();
                for e in fixtures::su_basis(n).expect("fixture") {
                    basis.push(e.lift(&amb));
                }
                Some(basis)
            }
            _ => None,
        }
    }

    /// Names for the canonical basis (for report text), matching
    /// [`Ambient::canonical_basis`] element-for-element.
    pub fn canonical_names(&self) -> Option<Vec<String>> {
        match (self.torus_dim, self.matrix_dim, self.form) {
            (0, n @ 2..=4, RealForm::Compact) => Some(fixtures::su_basis_names(n)),
            (0, 2, RealForm::Split) => Some(vec!["T".into(), "X".into(), "Y".into()]),
            (k, n @ 2..=4, RealForm::Compact) if k > 0 => {
                let mut names: Vec<String> = (1..=k).map(|j| format!("dt{j}")).collect();
                names.extend(fixtures::su_basis_names(n));
                Some(names)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// An element of the complexified ambient algebra: an `n x n` matrix part and
/// central torus coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieElement {
    pub ambient: Ambient,
    /// Coefficients of the central directions `d/dt_1 .. d/dt_k`.
    pub torus: Vec<Scalar>,
    /// Row-major `n x n` matrix entries.
    pub matrix: Vec<Vec<Scalar>>,
}

impl LieElement {
    pub fn zero(ambient: Ambient) -> Self {
        let n = ambient.matrix_dim;
        let k = ambient.torus_dim;
        LieElement {
            ambient,
            torus: vec![Scalar::zero(); k],
            matrix: vec![vec![Scalar::zero(); n]; n],
        }
    }

    pub fn from_matrix(ambient: Ambient, matrix: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = ambient.matrix_dim;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(CoreError::Domain(format!(
                "matrix part must be {n} x {n} for ambient {ambient}"
            )));
        }
        Ok(LieElement { torus: vec![Scalar::zero(); ambient.torus_dim], ambient, matrix })
    }

    /// The central direction `d/dt_j` of a product ambient.
    pub fn torus_direction(ambient: Ambient, j: usize) -> Self {
        assert!(j < ambient.torus_dim);
        let mut e = LieElement::zero(ambient);
        e.torus[j] = Scalar::one();
        e
    }

    /// Reinterpret a pure-matrix element inside a larger product ambient.
    pub fn lift(&self, ambient: &Ambient) -> LieElement {
        assert_eq!(self.ambient.matrix_dim, ambient.matrix_dim);
        assert!(self.torus.iter().all(|c| c.is_zero()));
        LieElement {
            ambient: ambient.clone(),
            torus: vec![Scalar::zero(); ambient.torus_dim],
            matrix: self.matrix.clone(),
        }
    }

    pub fn raw_coords(&self) -> Vec<Scalar> {
        let mut v = self.torus.clone();
        for row in &self.matrix {
            v.extend(row.iter().cloned());
        }
        v
    }

    pub fn from_raw_coords(ambient: Ambient, coords: &[Scalar]) -> Self {
        let n = ambient.matrix_dim;
        let k = ambient.torus_dim;
        assert_eq!(coords.len(), k + n * n);
        let torus = coords[..k].to_vec();
        let matrix = (0..n)
            .map(|i| coords[k + i * n..k + (i + 1) * n].to_vec())
            .collect();
        LieElement { ambient, torus, matrix }
    }

    pub fn is_zero(&self) -> bool {
        self.torus.iter().all(Scalar::is_zero)
            && self.matrix.iter().flatten().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        self.check_ambient(other)?;
        let torus = self
            .torus
            .iter()
            .zip(&other.torus)
            .map(|(a, b)| a + b)
            .collect();
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| a + b).collect())
            .collect();
        Ok(LieElement { ambient: self.ambient.clone(), torus, matrix })
    }

    pub fn sub(&self, other: &LieElement) -> Result<LieElement> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> LieElement {
        LieElement {
            ambient: self.ambient.clone(),
            torus: self.torus.iter().map(|t| t * c).collect(),
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|a| a * c).collect())
                .collect(),
        }
    }

    fn check_ambient(&self, other: &LieElement) -> Result<()> {
        if !self.ambient.compatible(&other.ambient) {
            return Err(CoreError::AmbientMismatch(format!(
                "{} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Trace of the matrix part.
    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.ambient.matrix_dim {
            t = &t + &self.matrix[i][i];
        }
        t
    }

    /// Membership in the declared real form: skew-Hermitian traceless matrix
    /// part (compact) or real traceless matrix part (split), with real torus
    /// coordinates in both cases.
    pub fn in_real_form(&self) -> bool {
        if self.torus.iter().any(|c| c != &c.conj()) {
            return false;
        }
        if !self.trace().is_zero() {
            return false;
        }
        let n = self.ambient.matrix_dim;
        match self.ambient.form {
            RealForm::Compact => {
                for i in 0..n {
                    for j in 0..n {
                        let want = -self.matrix[j][i].conj();
                        if self.matrix[i][j] != want {
                            return false;
                        }
                    }
                }
                true
            }
            RealForm::Split => self
                .matrix
                .iter()
                .flatten()
                .all(|a| a == &a.conj()),
        }
    }

    /// Conjugation with respect to the declared real form: writes the element
    /// as `P + iQ` with `P, Q` in the real form and returns `P - iQ`.
    pub fn conjugate(&self) -> LieElement {
        let n = self.ambient.matrix_dim;
        let matrix = match self.ambient.form {
            // -(conjugate transpose)
            RealForm::Compact => (0..n)
                .map(|i| (0..n).map(|j| -self.matrix[j][i].conj()).collect())
                .collect(),
            RealForm::Split => self
                .matrix
                .iter()
                .map(|row| row.iter().map(Scalar::conj).collect())
                .collect(),
        };
        LieElement {
            ambient: self.ambient.clone(),
            torus: self.torus.iter().map(Scalar::conj).collect(),
            matrix,
        }
    }

    /// Describe the element as a combination of the canonical ambient basis
    /// when one exists, falling back to the raw matrix.
    pub fn describe(&self) -> String {
        if let (Some(basis), Some(names)) =
            (self.ambient.canonical_basis(), self.ambient.canonical_names())
        {
            let rows: Vec<Vec<Scalar>> = basis.iter().map(|b| b.raw_coords()).collect();
            if let Some(coords) = coords_in_span(&rows, &self.raw_coords()) {
                let mut parts = Vec::new();
                for (c, name) in coords.iter().zip(&names) {
                    if c.is_zero() {
                        continue;
                    }
                    parts.push(format!("({c})*{name}"));
                }
                if parts.is_empty() {
                    return "0".into();
                }
                return parts.join(" + ");
            }
        }
        format!("{:?}", self.matrix)
    }
}

/// Lie bracket. Matrix parts commute as `AB - BA`; the torus directions are
/// central, so they contribute nothing and the result has zero torus part.
pub fn bracket(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    a.check_ambient(b)?;
    let n = a.ambient.matrix_dim;
    let mut out = LieElement::zero(a.ambient.clone());
    for i in 0..n {
        for j in 0..n {
            let mut acc = Scalar::zero();
            for k in 0..n {
                acc = &acc + &(&a.matrix[i][k] * &b.matrix[k][j]);
                acc = &acc - &(&b.matrix[i][k] * &a.matrix[k][j]);
            }
            out.matrix[i][j] = acc;
        }
    }
    Ok(out)
}

/// Push-forward of a left-invariant field under right translation by the
/// group element `t`: the matrix product `X t`.
pub fn right_translate(x: &LieElement, t: &Mat) -> Result<LieElement> {
    let n = x.ambient.matrix_dim;
    if t.rows != n || t.cols != n {
        return Err(CoreError::Domain(format!(
            "group element must be {n} x {n}, got {} x {}",
            t.rows, t.cols
        )));
    }
    if t.det().is_zero() {
        return Err(CoreError::Domain("group element must be invertible".into()));
    }
    let mut out = x.clone();
    for i in 0..n {
        for j in 0..n {
            let mut acc = Scalar::zero();
            for k in 0..n {
                acc = &acc + &(&x.matrix[i][k] * &t[(k, j)]);
            }
            out.matrix[i][j] = acc;
        }
    }
    Ok(out)
}

/// A finite-dimensional subalgebra (or plain subspace) given by an ordered,
/// linearly independent basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Subalgebra {
    pub ambient: Ambient,
    pub label: String,
    pub basis: Vec<LieElement>,
}

impl Subalgebra {
    pub fn new(ambient: Ambient, label: impl Into<String>, basis: Vec<LieElement>) -> Result<Self> {
        for e in &basis {
            if !e.ambient.compatible(&ambient) {
                return Err(CoreError::AmbientMismatch(format!(
                    "basis element ambient {} differs from {}",
                    e.ambient, ambient
                )));
            }
        }
        let rows: Vec<Vec<Scalar>> = basis.iter().map(|e| e.raw_coords()).collect();
        if crate::linalg::span_rank(&rows) != basis.len() {
            return Err(CoreError::Domain(
                "basis is linearly dependent over the complex scalars".into(),
            ));
        }
        Ok(Subalgebra { ambient, label: label.into(), basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn raw_rows(&self) -> Vec<Vec<Scalar>> {
        self.basis.iter().map(|e| e.raw_coords()).collect()
    }

    pub fn contains(&self, e: &LieElement) -> bool {
        coords_in_span(&self.raw_rows(), &e.raw_coords()).is_some()
    }
}

/// A linear functional represented by its values on a declared basis.
#[derive(Clone, Debug)]
pub struct Covector {
    pub basis: Vec<LieElement>,
    pub values: Vec<Scalar>,
}

impl Covector {
    pub fn new(basis: Vec<LieElement>, values: Vec<Scalar>) -> Result<Self> {
        if basis.len() != values.len() {
            return Err(CoreError::Domain(
                "covector needs one value per basis element".into(),
            ));
        }
        Ok(Covector { basis, values })
    }

    /// Dual covector of the `j`-th element of `basis`.
    pub fn dual(basis: &[LieElement], j: usize) -> Self {
        let mut values = vec![Scalar::zero(); basis.len()];
        values[j] = Scalar::one();
        Covector { basis: basis.to_vec(), values }
    }

    pub fn eval(&self, e: &LieElement) -> Result<Scalar> {
        let rows: Vec<Vec<Scalar>> = self.basis.iter().map(|b| b.raw_coords()).collect();
        let coords = coords_in_span(&rows, &e.raw_coords()).ok_or_else(|| {
            CoreError::Domain("element lies outside the covector's declared basis span".into())
        })?;
        let mut acc = Scalar::zero();
        for (c, v) in coords.iter().zip(&self.values) {
            acc = &acc + &(c * v);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_bracket_relations() {
        let b = sl2_basis();
        let (t, x, y) = (&b[0], &b[1], &b[2]);
        assert_eq!(bracket(t, x).unwrap().raw_coords(), x.scale(&Scalar::from_int(2)).raw_coords());
        assert_eq!(
            bracket(t, y).unwrap().raw_coords(),
            y.scale(&Scalar::from_int(-2)).raw_coords()
        );
        assert_eq!(bracket(x, y).unwrap().raw_coords(), t.raw_coords());
        // antisymmetry
        assert!(bracket(x, x).unwrap().is_zero());
    }

    #[test]
    fn su2_bracket_relations() {
        let b = su_basis(2).unwrap();
        let (x, y, t) = (&b[0], &b[1], &b[2]);
        assert_eq!(bracket(t, x).unwrap().raw_coords(), y.scale(&Scalar::from_int(2)).raw_coords());
        assert_eq!(
            bracket(t, y).unwrap().raw_coords(),
            x.scale(&Scalar::from_int(-2)).raw_coords()
        );
        assert_eq!(bracket(x, y).unwrap().raw_coords(), t.scale(&Scalar::from_int(2)).raw_coords());
    }

    #[test]
    fn su_basis_lies_in_real_form() {
        for (n, dim) in [(2usize, 3usize), (3, 8), (4, 15)] {
            let basis = su_basis(n).unwrap();
            assert_eq!(basis.len(), dim, "dim su({n}) = n^2 - 1");
            for e in basis {
                assert!(e.in_real_form(), "basis element of su({n}) not in real form");
                assert!(e.trace().is_zero());
            }
        }
        assert!(su_basis(5).is_err(), "only the embedded fixtures are supported");
    }

    #[test]
    fn conjugation_is_involutive_and_fixes_real_form() {
        let b = su_basis(2).unwrap();
        for e in &b {
            assert_eq!(e.conjugate().raw_coords(), e.raw_coords());
        }
        let l = b[0].sub(&b[1].scale(&Scalar::i())).unwrap(); // X - iY
        let lc = l.conjugate();
        assert_eq!(lc.conjugate().raw_coords(), l.raw_coords());
        // conjugate(X - iY) = X + iY
        let expect = b[0].add(&b[1].scale(&Scalar::i())).unwrap();
        assert_eq!(lc.raw_coords(), expect.raw_coords());
    }

    #[test]
    fn sl2_conjugation_of_cr1_element() {
        let b = sl2_basis();
        let l = sl2_cr1_element(); // X + iT
        let expect = b[1].sub(&b[0].scale(&Scalar::i())).unwrap(); // X - iT
        assert_eq!(l.conjugate().raw_coords(), expect.raw_coords());
    }

    #[test]
    fn ambient_mismatch_is_domain_error() {
        let a = su_basis(2).unwrap();
        let b = su_basis(3).unwrap();
        assert!(bracket(&a[0], &b[0]).is_err());
    }

    #[test]
    fn right_translate_su2_rotation() {
        // t = diag(i, -i) is e^{i theta} with theta = pi/2; (R_t)_* L = -i L
        let b = su_basis(2).unwrap();
        let l = b[0].sub(&b[1].scale(&Scalar::i())).unwrap();
        let mut t = Mat::zero(2, 2);
        t[(0, 0)] = Scalar::i();
        t[(1, 1)] = -Scalar::i();
        let moved = right_translate(&l, &t).unwrap();
        let expect = l.scale(&-Scalar::i());
        assert_eq!(moved.raw_coords(), expect.raw_coords());
    }

    #[test]
    fn right_translate_identity_and_errors() {
        let b = su_basis(2).unwrap();
        assert_eq!(
            right_translate(&b[0], &Mat::identity(2)).unwrap().raw_coords(),
            b[0].raw_coords()
        );
        assert!(right_translate(&b[0], &Mat::zero(2, 2)).is_err());
        assert!(right_translate(&b[0], &Mat::identity(3)).is_err());
    }
}
