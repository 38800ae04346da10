//! Root-space decomposition by iterated exact eigenspace splitting of the
//! adjoint action of a commuting torus.
//!
//! Eigenvalues are found inside the Gaussian rationals; anything that fails
//! to split there aborts with a field-extension diagnostic instead of
//! silently switching to floats.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::linalg::{coords_in_span, independent_subset, span_rank, Mat};
use crate::scalar::{GaussRational, Scalar};

use super::{bracket, LieElement};

/// One simultaneous eigenvector of the torus action, with its eigenvalue per
/// torus generator.
#[derive(Clone, Debug)]
pub struct RootVector {
    pub vector: LieElement,
    pub eigenvalues: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub torus: Vec<LieElement>,
    pub roots: Vec<RootVector>,
}

impl RootDatum {
    /// Index of the root space containing `e` (as a nonzero parallel vector).
    pub fn find_root_of(&self, e: &LieElement) -> Option<usize> {
        if e.is_zero() {
            return None;
        }
        self.roots.iter().position(|r| {
            span_rank(&[r.vector.raw_coords(), e.raw_coords()]) == 1
        })
    }

    /// Value of the root functional `alpha_idx` on a toric element, obtained
    /// by expanding the element in the torus basis.
    pub fn functional(&self, alpha_idx: usize, toric: &LieElement) -> Result<Scalar> {
        let rows: Vec<Vec<Scalar>> = self.torus.iter().map(|t| t.raw_coords()).collect();
        let coords = coords_in_span(&rows, &toric.raw_coords()).ok_or_else(|| {
            CoreError::Domain("element lies outside the torus span".into())
        })?;
        let eig = &self.roots[alpha_idx].eigenvalues;
        let mut acc = Scalar::zero();
        for (c, l) in coords.iter().zip(eig) {
            acc = &acc + &(c * l);
        }
        Ok(acc)
    }

    /// Indices of roots whose eigenvalue tuples sum to the given tuple.
    pub fn root_with_eigenvalues(&self, eig: &[Scalar]) -> Option<usize> {
        self.roots.iter().position(|r| r.eigenvalues == eig)
    }
}

/// Simultaneous exact eigen-decomposition of `ad(T_j)` on a complement of the
/// torus span inside the span of `ambient_basis`.
pub fn root_decompose(
    torus: &[LieElement],
    ambient_basis: &[LieElement],
) -> Result<RootDatum> {
    for (i, a) in torus.iter().enumerate() {
        for b in &torus[i + 1..] {
            if !bracket(a, b)?.is_zero() {
                return Err(CoreError::Domain(
                    "torus elements must pairwise commute".into(),
                ));
            }
        }
    }
    let torus_rows: Vec<Vec<Scalar>> = torus.iter().map(|t| t.raw_coords()).collect();
    if span_rank(&torus_rows) != torus.len() {
        return Err(CoreError::Domain("torus elements must be independent".into()));
    }

    // The sum of the nonzero-eigenvalue spaces is spanned by all brackets
    // [T_j, E]; by Jacobi and commutativity it is ad(torus)-invariant.
    let mut generators = Vec::new();
    for t in torus {
        for e in ambient_basis {
            let br = bracket(t, e)?;
            if !br.is_zero() {
                generators.push(br);
            }
        }
    }
    let gen_rows: Vec<Vec<Scalar>> = generators.iter().map(|g| g.raw_coords()).collect();
    let kept = independent_subset(&gen_rows);
    let complement: Vec<LieElement> = kept.into_iter().map(|i| generators[i].clone()).collect();

    {
        let mut all = torus_rows.clone();
        all.extend(complement.iter().map(|e| e.raw_coords()));
        if span_rank(&all) != torus.len() + complement.len() {
            return Err(CoreError::Domain(
                "bracket span intersects the torus span; torus is not toral".into(),
            ));
        }
    }

    let mut spaces: Vec<Vec<LieElement>> = if complement.is_empty() {
        Vec::new()
    } else {
        vec![complement]
    };
    for t in torus {
        let mut next = Vec::new();
        for space in &spaces {
            next.extend(split_space(space, t)?);
        }
        spaces = next;
    }

    let mut roots = Vec::new();
    for space in spaces {
        if space.len() != 1 {
            return Err(CoreError::NeedsFieldExtension(format!(
                "joint eigenspace of dimension {} > 1 after splitting",
                space.len()
            )));
        }
        let vector = normalize_vector(space.into_iter().next().unwrap());
        let mut eigenvalues = Vec::with_capacity(torus.len());
        for t in torus {
            eigenvalues.push(eigenvalue_of(t, &vector)?);
        }
        roots.push(RootVector { vector, eigenvalues });
    }
    roots.sort_by(|a, b| cmp_eigen_lists(&a.eigenvalues, &b.eigenvalues));

    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            if a.eigenvalues == b.eigenvalues {
                return Err(CoreError::NeedsFieldExtension(
                    "two root vectors share one functional; root spaces are not one-dimensional"
                        .into(),
                ));
            }
        }
    }

    Ok(RootDatum { torus: torus.to_vec(), roots })
}

/// Scale so the first nonzero raw coordinate is 1 (deterministic output).
fn normalize_vector(e: LieElement) -> LieElement {
    let coords = e.raw_coords();
    if let Some(first) = coords.iter().find(|c| !c.is_zero()) {
        let inv = first.inv().expect("nonzero");
        e.scale(&inv)
    } else {
        e
    }
}

/// Exact eigenvalue of `ad(t)` on the eigenvector `e`, verified entrywise.
fn eigenvalue_of(t: &LieElement, e: &LieElement) -> Result<Scalar> {
    let br = bracket(t, e)?;
    let ec = e.raw_coords();
    let bc = br.raw_coords();
    let k = ec
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| CoreError::Domain("zero eigenvector".into()))?;
    let lambda = &bc[k] / &ec[k];
    for (b, a) in bc.iter().zip(&ec) {
        if *b != &lambda * a {
            return Err(CoreError::NeedsFieldExtension(
                "vector is not an exact eigenvector of ad(t)".into(),
            ));
        }
    }
    Ok(lambda)
}

fn cmp_eigen_lists(a: &[Scalar], b: &[Scalar]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let re = x.re_part().cmp_real(&y.re_part());
        if re != std::cmp::Ordering::Equal {
            return re;
        }
        let im = x.im_part().cmp_real(&y.im_part());
        if im != std::cmp::Ordering::Equal {
            return im;
        }
    }
    std::cmp::Ordering::Equal
}

/// Split one `ad(t)`-invariant space into exact eigenspaces.
fn split_space(space: &[LieElement], t: &LieElement) -> Result<Vec<Vec<LieElement>>> {
    let dim = space.len();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let space_rows: Vec<Vec<Scalar>> = space.iter().map(|e| e.raw_coords()).collect();

    // Restriction matrix: [t, s_k] = sum_l R_{lk} s_l.
    let mut r = Mat::zero(dim, dim);
    for (k, s) in space.iter().enumerate() {
        let br = bracket(t, s)?;
        let coords = coords_in_span(&space_rows, &br.raw_coords()).ok_or_else(|| {
            CoreError::Domain("ad(t) does not preserve the candidate root space".into())
        })?;
        for (l, c) in coords.into_iter().enumerate() {
            r[(l, k)] = c;
        }
    }

    let mut candidates = diagonal_candidates(t).unwrap_or_default();
    let mut spaces: Vec<Vec<LieElement>> = Vec::new();
    let mut found_dim = 0usize;

    let try_candidates = |cands: &[Scalar],
                              spaces: &mut Vec<Vec<LieElement>>,
                              found_dim: &mut usize|
     -> Result<()> {
        for lambda in cands {
            if *found_dim == dim {
                break;
            }
            if spaces.iter().any(|sp| eigenvalue_matches(sp, t, lambda)) {
                continue;
            }
            let mut shifted = r.clone();
            for i in 0..dim {
                shifted[(i, i)] = &shifted[(i, i)] - lambda;
            }
            let kernel = shifted.nullspace();
            if kernel.is_empty() {
                continue;
            }
            let mut eig_basis = Vec::new();
            for coeffs in kernel {
                let mut v = LieElement::zero(space[0].ambient.clone());
                for (c, s) in coeffs.iter().zip(space) {
                    v = v.add(&s.scale(c))?;
                }
                eig_basis.push(v);
            }
            *found_dim += eig_basis.len();
            spaces.push(eig_basis);
        }
        Ok(())
    };

    try_candidates(&candidates, &mut spaces, &mut found_dim)?;
    if found_dim < dim {
        // Fall back to the characteristic polynomial of the restriction.
        let poly = charpoly(&r);
        let more = rational_imaginary_roots(&poly)?;
        candidates = more;
        try_candidates(&candidates, &mut spaces, &mut found_dim)?;
    }
    if found_dim < dim {
        return Err(CoreError::NeedsFieldExtension(format!(
            "ad(t) only splits {found_dim} of {dim} dimensions over the Gaussian rationals"
        )));
    }
    Ok(spaces)
}

fn eigenvalue_matches(found: &[LieElement], t: &LieElement, lambda: &Scalar) -> bool {
    found
        .first()
        .and_then(|v| eigenvalue_of(t, v).ok())
        .map(|l| &l == lambda)
        .unwrap_or(false)
}

/// Eigenvalue candidates for `ad(t)` when the matrix part of `t` is diagonal:
/// all pairwise differences of diagonal entries.
fn diagonal_candidates(t: &LieElement) -> Option<Vec<Scalar>> {
    let n = t.ambient.matrix_dim;
    for i in 0..n {
        for j in 0..n {
            if i != j && !t.matrix[i][j].is_zero() {
                return None;
            }
        }
    }
    let mut cands: Vec<Scalar> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let d = &t.matrix[i][i] - &t.matrix[j][j];
            if !cands.contains(&d) {
                cands.push(d);
            }
        }
    }
    Some(cands)
}

/// Monic characteristic polynomial by the Faddeev-LeVerrier recursion;
/// returned as coefficients `c[0] + c[1] x + ... + c[n] x^n`.
fn charpoly(a: &Mat) -> Vec<Scalar> {
    let n = a.rows;
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = Mat::identity(n);
    for k in 1..=n {
        let am = a.mul(&m);
        let mut tr = Scalar::zero();
        for i in 0..n {
            tr = &tr + &am[(i, i)];
        }
        let c = -(&tr / &Scalar::from_int(k as i64));
        coeffs[n - k] = c.clone();
        m = am;
        for i in 0..n {
            m[(i, i)] = &m[(i, i)] + &c;
        }
    }
    coeffs
}

/// Purely imaginary Gaussian-rational roots of a monic polynomial: substitute
/// `x = i mu` and search rational `mu` by the rational root theorem.
fn rational_imaginary_roots(p: &[Scalar]) -> Result<Vec<Scalar>> {
    let n = p.len() - 1;
    // q(mu) = sum p_k i^k mu^k, split into rational real/imag coefficient polys
    let i_pow = |k: usize| -> Scalar {
        match k % 4 {
            0 => Scalar::one(),
            1 => Scalar::i(),
            2 => Scalar::from_int(-1),
            _ => -Scalar::i(),
        }
    };
    let q: Vec<Scalar> = (0..=n).map(|k| &p[k] * &i_pow(k)).collect();
    let comp = |sel_im: bool| -> Vec<num_rational::BigRational> {
        q.iter()
            .map(|c| match c {
                Scalar::Exact(GaussRational { re, im }) => {
                    if sel_im {
                        im.clone()
                    } else {
                        re.clone()
                    }
                }
                _ => num_rational::BigRational::zero(),
            })
            .collect()
    };
    for c in &q {
        if !matches!(c, Scalar::Exact(_)) {
            return Err(CoreError::NeedsFieldExtension(
                "characteristic polynomial has non-rational coefficients".into(),
            ));
        }
    }
    let re_poly = comp(false);
    let im_poly = comp(true);
    let use_poly = if re_poly.iter().any(|c| !c.is_zero()) { &re_poly } else { &im_poly };

    // strip mu^s
    let s = use_poly
        .iter()
        .position(|c| !c.is_zero())
        .unwrap_or(use_poly.len());
    let stripped = &use_poly[s..];
    let mut roots: Vec<num_rational::BigRational> = Vec::new();
    if s > 0 {
        roots.push(num_rational::BigRational::zero());
    }
    if !stripped.is_empty() && stripped.len() > 1 {
        // integerize
        let mut lcm = BigInt::one();
        for c in stripped {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = stripped
            .iter()
            .map(|c| (c * num_rational::BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let c0 = ints.first().unwrap().abs();
        let cm = ints.last().unwrap().abs();
        let num_divs = divisors(&c0)?;
        let den_divs = divisors(&cm)?;
        for nd in &num_divs {
            for dd in &den_divs {
                for sign in [1i64, -1] {
                    let cand = num_rational::BigRational::new(
                        nd * BigInt::from(sign),
                        dd.clone(),
                    );
                    if roots.contains(&cand) {
                        continue;
                    }
                    if eval_rat_poly(stripped, &cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
    }

    // keep only actual roots of the full complex polynomial
    let mut out = Vec::new();
    for mu in roots {
        let lambda = Scalar::from_rationals(num_rational::BigRational::zero(), mu);
        if eval_scalar_poly(p, &lambda).is_zero() {
            out.push(lambda);
        }
    }
    Ok(out)
}

fn eval_rat_poly(
    coeffs: &[num_rational::BigRational],
    x: &num_rational::BigRational,
) -> num_rational::BigRational {
    let mut acc = num_rational::BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_scalar_poly(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Positive divisors of `n` (trial division; bails out on huge factors).
fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    if n.is_zero() {
        return Ok(vec![BigInt::one()]);
    }
    let mut rest = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    let cap = BigInt::from(1_000_000u64);
    while &p * &p <= rest && p <= cap {
        let mut mult = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            mult += 1;
        }
        if mult > 0 {
            factors.push((p.clone(), mult));
        }
        p += 1;
    }
    if rest > BigInt::one() {
        if rest > BigInt::from(u64::MAX) {
            return Err(CoreError::NeedsFieldExtension(
                "coefficient too large to factor for rational root search".into(),
            ));
        }
        factors.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (f, m) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut acc = d.clone();
            for _ in 0..=m {
                next.push(acc.clone());
                acc *= &f;
            }
        }
        divs = next;
        if divs.len() > 20_000 {
            return Err(CoreError::NeedsFieldExtension(
                "too many divisor candidates in rational root search".into(),
            ));
        }
    }
    divs.sort();
    divs.dedup();
    Ok(divs)
}
