//! Embedded fixture bases: su(2), su(3), su(4), the split sl(2) presentation
//! and the product ambient `T^2 x su(4)` with its rank-8 CR0 structure.

use crate::error::{CoreError, Result};
use crate::scalar::Scalar;

use super::{Ambient, LieElement, Subalgebra};

fn elem(ambient: &Ambient, matrix: Vec<Vec<Scalar>>) -> LieElement {
    LieElement::from_matrix(ambient.clone(), matrix).expect("fixture matrix dimensions")
}

fn zero_matrix(n: usize) -> Vec<Vec<Scalar>> {
    vec![vec![Scalar::zero(); n]; n]
}

/// Diagonal torus element with purely imaginary entries `i * diag`.
fn t_mat(ambient: &Ambient, diag: &[i64]) -> LieElement {
    let n = ambient.matrix_dim;
    let mut m = zero_matrix(n);
    for (k, &d) in diag.iter().enumerate() {
        m[k][k] = Scalar::from_complex(0, d);
    }
    elem(ambient, m)
}

/// `X` generator coupling rows `a` and `b` (1-based): `i (E_ab + E_ba)`.
fn x_mat(ambient: &Ambient, a: usize, b: usize) -> LieElement {
    let mut m = zero_matrix(ambient.matrix_dim);
    m[a - 1][b - 1] = Scalar::i();
    m[b - 1][a - 1] = Scalar::i();
    elem(ambient, m)
}

/// `Y` generator coupling rows `a` and `b` (1-based): `E_ba - E_ab`.
fn y_mat(ambient: &Ambient, a: usize, b: usize) -> LieElement {
    let mut m = zero_matrix(ambient.matrix_dim);
    m[a - 1][b - 1] = Scalar::from_int(-1);
    m[b - 1][a - 1] = Scalar::one();
    elem(ambient, m)
}

/// Row pairs coupled by `X_k` / `Y_k` for the su(n) bases.
fn su_pairs(n: usize) -> Vec<(usize, usize)> {
    match n {
        2 => vec![(1, 2)],
        3 => vec![(1, 2), (1, 3), (2, 3)],
        4 => vec![(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)],
        _ => unreachable!(),
    }
}

pub fn su_ambient(n: usize) -> Ambient {
    Ambient::su(n)
}

/// The embedded basis of su(n) for `n` in 2..=4.
///
/// - n = 2: `{X, Y, T}` with `X = [[0,i],[i,0]]`, `Y = [[0,-1],[1,0]]`,
///   `T = diag(i,-i)`;
/// - n = 3: `{T1, T2, X1..X3, Y1..Y3}` in the same pattern as the su(4) list;
/// - n = 4: the fifteen matrices `T1..T3, X1..X6, Y1..Y6`.
pub fn su_basis(n: usize) -> Result<Vec<LieElement>> {
    let amb = Ambient::su(n);
    match n {
        2 => Ok(vec![x_mat(&amb, 1, 2), y_mat(&amb, 1, 2), t_mat(&amb, &[1, -1])]),
        3 => {
            let mut basis = vec![t_mat(&amb, &[1, -1, 0]), t_mat(&amb, &[1, 1, -2])];
            for &(a, b) in &su_pairs(3) {
                basis.push(x_mat(&amb, a, b));
            }
            for &(a, b) in &su_pairs(3) {
                basis.push(y_mat(&amb, a, b));
            }
            Ok(basis)
        }
        4 => {
            let mut basis = vec![
                t_mat(&amb, &[1, -1, 0, 0]),
                t_mat(&amb, &[1, 1, -2, 0]),
                t_mat(&amb, &[1, 1, 1, -3]),
            ];
            let pairs = su_pairs(4);
            // printed order: X1..X3, Y1..Y3, X4..X6, Y4..Y6
            for &(a, b) in &pairs[..3] {
                basis.push(x_mat(&amb, a, b));
            }
            for &(a, b) in &pairs[..3] {
                basis.push(y_mat(&amb, a, b));
            }
            for &(a, b) in &pairs[3..] {
                basis.push(x_mat(&amb, a, b));
            }
            for &(a, b) in &pairs[3..] {
                basis.push(y_mat(&amb, a, b));
            }
            Ok(basis)
        }
        _ => Err(CoreError::Domain(format!(
            "su({n}) basis not embedded; supported n: 2, 3, 4"
        ))),
    }
}

pub fn su_basis_names(n: usize) -> Vec<String> {
    match n {
        2 => vec!["X".into(), "Y".into(), "T".into()],
        3 => {
            let mut v: Vec<String> = vec!["T1".into(), "T2".into()];
            v.extend((1..=3).map(|k| format!("X{k}")));
            v.extend((1..=3).map(|k| format!("Y{k}")));
            v
        }
        4 => {
            let mut v: Vec<String> = (1..=3).map(|k| format!("T{k}")).collect();
            v.extend((1..=3).map(|k| format!("X{k}")));
            v.extend((1..=3).map(|k| format!("Y{k}")));
            v.extend((4..=6).map(|k| format!("X{k}")));
            v.extend((4..=6).map(|k| format!("Y{k}")));
            v
        }
        _ => Vec::new(),
    }
}

/// The torus generators `T_j` of the su(n) fixture basis.
pub fn su_torus(n: usize) -> Result<Vec<LieElement>> {
    let basis = su_basis(n)?;
    Ok(match n {
        2 => vec![basis[2].clone()],
        3 => basis[..2].to_vec(),
        4 => basis[..3].to_vec(),
        _ => unreachable!(),
    })
}

/// `L_k = X_k - i Y_k` for the su(n) fixture, `k` 1-based.
///
/// With the `T_j` above these satisfy `[T_j, L_k] = +i lambda_{jk} L_k` for
/// the lambda table checked by [`verify_tables`](super::verify_tables); the
/// conjugates carry the opposite eigenvalues.
pub fn su_l_vectors(n: usize) -> Result<Vec<LieElement>> {
    let amb = Ambient::su(n);
    Ok(su_pairs(n)
        .iter()
        .map(|&(a, b)| {
            x_mat(&amb, a, b)
                .sub(&y_mat(&amb, a, b).scale(&Scalar::i()))
                .expect("same ambient")
        })
        .collect())
}

pub fn sl2_ambient() -> Ambient {
    Ambient::sl2()
}

/// The split presentation `{T, X, Y}` with `T = diag(1,-1)`, `X = E_12`,
/// `Y = E_21`, so `[T,X] = 2X`, `[T,Y] = -2Y`, `[X,Y] = T`.
pub fn sl2_basis() -> Vec<LieElement> {
    let amb = Ambient::sl2();
    let t = elem(
        &amb,
        vec![
            vec![Scalar::one(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::from_int(-1)],
        ],
    );
    let x = elem(
        &amb,
        vec![
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::zero(), Scalar::zero()],
        ],
    );
    let y = elem(
        &amb,
        vec![
            vec![Scalar::zero(), Scalar::zero()],
            vec![Scalar::one(), Scalar::zero()],
        ],
    );
    vec![t, x, y]
}

/// `L = X + iT`, the Levi-flat CR1 generator on the split form.
pub fn sl2_cr1_element() -> LieElement {
    let b = sl2_basis();
    b[1].add(&b[0].scale(&Scalar::i())).expect("same ambient")
}

/// The CR0 structure `span{X - iY}` on su(2).
pub fn su2_cr0() -> Subalgebra {
    let b = su_basis(2).expect("fixture");
    let l = b[0].sub(&b[1].scale(&Scalar::i())).expect("same ambient");
    Subalgebra::new(Ambient::su(2), "CR0", vec![l]).expect("independent")
}

/// The CR1 structure `span{T + (X - iY)}` on su(2).
pub fn su2_cr1() -> Subalgebra {
    let b = su_basis(2).expect("fixture");
    let l = b[0].sub(&b[1].scale(&Scalar::i())).expect("same ambient");
    let gen = b[2].add(&l).expect("same ambient");
    Subalgebra::new(Ambient::su(2), "CR1", vec![gen]).expect("independent")
}

/// The `T^2 x SU(4)` fixture.
///
/// The printed generating set `span{Z1 Z2, L1, ..., L3}` is dimensionally
/// inconsistent with maximal rank `[17/2] = 8` (it reads as 5 generators);
/// this fixture uses `{Z1, Z2, L1, ..., L6}`, which has dimension 8. Both
/// readings are kept so reports can show their dimensions side by side.
pub struct Example3 {
    pub ambient: Ambient,
    /// `Z1 = T1 - i T2`, `Z2 = d/dt_1 + i T3`.
    pub z: [LieElement; 2],
    /// `L_1 .. L_6` lifted into the product ambient.
    pub l: Vec<LieElement>,
    /// The rank-8 CR0 algebra `span{Z1, Z2, L1..L6}`.
    pub h: Subalgebra,
    /// Toric part `span{Z1, Z2}`.
    pub m: Subalgebra,
    /// Positive-root ideal `span{L1..L6}`.
    pub ideal: Subalgebra,
    /// Dimension of the literal printed generating set.
    pub printed_dim: usize,
}

pub fn example3() -> Example3 {
    let amb = Ambient::product(2, 4);
    let su4 = su_basis(4).expect("fixture");
    let t1 = su4[0].lift(&amb);
    let t2 = su4[1].lift(&amb);
    let t3 = su4[2].lift(&amb);
    let dt1 = LieElement::torus_direction(amb.clone(), 0);
    let z1 = t1.sub(&t2.scale(&Scalar::i())).expect("same ambient");
    let z2 = dt1.add(&t3.scale(&Scalar::i())).expect("same ambient");
    let l: Vec<LieElement> = su_l_vectors(4)
        .expect("fixture")
        .iter()
        .map(|e| e.lift(&amb))
        .collect();

    let mut h_basis = vec![z1.clone(), z2.clone()];
    h_basis.extend(l.iter().cloned());
    let h = Subalgebra::new(amb.clone(), "CR0", h_basis).expect("independent");
    let m = Subalgebra::new(amb.clone(), "toric part", vec![z1.clone(), z2.clone()])
        .expect("independent");
    let ideal =
        Subalgebra::new(amb.clone(), "positive roots", l.clone()).expect("independent");

    let printed: Vec<LieElement> =
        vec![z1.clone(), z2.clone(), l[0].clone(), l[1].clone(), l[2].clone()];
    let printed_rows: Vec<Vec<Scalar>> = printed.iter().map(|e| e.raw_coords()).collect();
    let printed_dim = crate::linalg::span_rank(&printed_rows);

    Example3 { ambient: amb, z: [z1, z2], l, h, m, ideal, printed_dim }
}
