//! Multi-index combinatorics and alternating forms.
//!
//! Forms of degree `q` over a dual basis `tau_1 .. tau_n` are stored as a map
//! from strictly increasing multi-indices to scalar coefficients; zero
//! coefficients are pruned eagerly so the zero form is structurally empty.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};
use crate::scalar::{scalar_from_value, scalar_to_value, Scalar};

/// A strictly increasing tuple of indices in `1..=universe`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    entries: Vec<u32>,
    universe: u32,
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>, universe: u32) -> Result<Self> {
        for w in entries.windows(2) {
            if w[0] >= w[1] {
                return Err(CoreError::MultiIndex(format!(
                    "entries must be strictly increasing, got {entries:?}"
                )));
            }
        }
        if let (Some(&first), Some(&last)) = (entries.first(), entries.last()) {
            if first < 1 || last > universe {
                return Err(CoreError::MultiIndex(format!(
                    "entries {entries:?} out of range 1..={universe}"
                )));
            }
        }
        Ok(MultiIndex { entries, universe })
    }

    pub fn empty(universe: u32) -> Self {
        MultiIndex { entries: Vec::new(), universe }
    }

    pub fn single(i: u32, universe: u32) -> Result<Self> {
        Self::new(vec![i], universe)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.entries.binary_search(&i).is_ok()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Signature of the permutation `(sigma, J \ sigma)` relative to `J`:
/// `(-1)^p` with `p` the number of entries of `J` below `sigma`.
pub fn permutation_sign(sigma: u32, j: &MultiIndex) -> Result<i32> {
    if !j.contains(sigma) {
        return Err(CoreError::Domain(format!(
            "index {sigma} does not occur in {j}"
        )));
    }
    let below = j.entries.iter().filter(|&&e| e < sigma).count();
    Ok(if below.is_multiple_of(2) { 1 } else { -1 })
}

/// `J \ sigma`: delete `sigma` from `J`, preserving order.
pub fn remove_index(j: &MultiIndex, sigma: u32) -> Result<MultiIndex> {
    if !j.contains(sigma) {
        return Err(CoreError::Domain(format!(
            "index {sigma} does not occur in {j}"
        )));
    }
    let entries = j.entries.iter().copied().filter(|&e| e != sigma).collect();
    Ok(MultiIndex { entries, universe: j.universe })
}

/// Insert `i` into the sorted multi-index, returning the merge sign,
/// or `None` if `i` already occurs.
fn insert_index(j: &MultiIndex, i: u32) -> Option<(MultiIndex, i32)> {
    match j.entries.binary_search(&i) {
        Ok(_) => None,
        Err(pos) => {
            let mut entries = j.entries.clone();
            entries.insert(pos, i);
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            Some((MultiIndex { entries, universe: j.universe }, sign))
        }
    }
}

/// Merge two disjoint sorted multi-indices, counting block inversions.
fn merge_indices(a: &MultiIndex, b: &MultiIndex) -> Option<(MultiIndex, i32)> {
    let mut entries = Vec::with_capacity(a.entries.len() + b.entries.len());
    let mut inversions = 0usize;
    let (mut x, mut y) = (0usize, 0usize);
    while x < a.entries.len() && y < b.entries.len() {
        if a.entries[x] == b.entries[y] {
            return None;
        }
        if a.entries[x] < b.entries[y] {
            entries.push(a.entries[x]);
            x += 1;
        } else {
            // b-element jumps over the remaining a-elements
            inversions += a.entries.len() - x;
            entries.push(b.entries[y]);
            y += 1;
        }
    }
    entries.extend_from_slice(&a.entries[x..]);
    entries.extend_from_slice(&b.entries[y..]);
    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
    Some((MultiIndex { entries, universe: a.universe }, sign))
}

/// An alternating multilinear form of fixed degree over `tau_1 .. tau_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AltForm {
    degree: usize,
    universe: u32,
    coeffs: BTreeMap<MultiIndex, Scalar>,
}

impl AltForm {
    pub fn zero(degree: usize, universe: u32) -> Self {
        AltForm { degree, universe, coeffs: BTreeMap::new() }
    }

    /// The constant 0-form with the given value.
    pub fn constant(value: Scalar, universe: u32) -> Self {
        let mut f = AltForm::zero(0, universe);
        f.add_term(MultiIndex::empty(universe), value);
        f
    }

    /// The basis covector `tau_i`.
    pub fn basis_covector(i: u32, universe: u32) -> Result<Self> {
        let mut f = AltForm::zero(1, universe);
        f.add_term(MultiIndex::single(i, universe)?, Scalar::one());
        Ok(f)
    }

    pub fn from_terms(
        degree: usize,
        universe: u32,
        terms: impl IntoIterator<Item = (MultiIndex, Scalar)>,
    ) -> Result<Self> {
        let mut f = AltForm::zero(degree, universe);
        for (idx, c) in terms {
            if idx.degree() != degree || idx.universe() != universe {
                return Err(CoreError::UniverseMismatch(format!(
                    "term {idx} does not have degree {degree} over universe {universe}"
                )));
            }
            f.add_term(idx, c);
        }
        Ok(f)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> Scalar {
        self.coeffs.get(idx).cloned().unwrap_or_else(Scalar::zero)
    }

    fn add_term(&mut self, idx: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Accumulate `c * tau_{i_1} ^ ... ^ tau_{i_q}` for a general index tuple,
    /// normalizing the order and folding the sort sign into the coefficient.
    pub fn add_tuple(&mut self, indices: &[u32], c: Scalar) -> Result<()> {
        if indices.len() != self.degree {
            return Err(CoreError::MultiIndex(format!(
                "tuple {indices:?} does not match form degree {}",
                self.degree
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        let mut sorted: Vec<u32> = indices.to_vec();
        // insertion sort with transposition count; duplicates annihilate
        let mut sign = 1i32;
        for k in 1..sorted.len() {
            let mut p = k;
            while p > 0 && sorted[p - 1] > sorted[p] {
                sorted.swap(p - 1, p);
                sign = -sign;
                p -= 1;
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(());
        }
        let idx = MultiIndex::new(sorted, self.universe)?;
        let signed = if sign == 1 { c } else { -c };
        self.add_term(idx, signed);
        Ok(())
    }

    /// Value of the form on the ordered tuple of basis directions: the stored
    /// coefficient of the sorted tuple times the sort sign (zero on repeats).
    pub fn eval_tuple(&self, indices: &[u32]) -> Result<Scalar> {
        if indices.len() != self.degree {
            return Err(CoreError::MultiIndex(format!(
                "tuple {indices:?} does not match form degree {}",
                self.degree
            )));
        }
        let mut sorted: Vec<u32> = indices.to_vec();
        let mut sign = 1i32;
        for k in 1..sorted.len() {
            let mut p = k;
            while p > 0 && sorted[p - 1] > sorted[p] {
                sorted.swap(p - 1, p);
                sign = -sign;
                p -= 1;
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(Scalar::zero());
        }
        let idx = MultiIndex::new(sorted, self.universe)?;
        let c = self.coefficient(&idx);
        Ok(if sign == 1 { c } else { -c })
    }

    pub fn scale(&self, s: &Scalar) -> AltForm {
        let mut out = AltForm::zero(self.degree, self.universe);
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &AltForm) -> Result<AltForm> {
        if self.universe != other.universe || self.degree != other.degree {
            return Err(CoreError::UniverseMismatch(format!(
                "cannot add degree-{} form over {} and degree-{} form over {}",
                self.degree, self.universe, other.degree, other.universe
            )));
        }
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AltForm) -> Result<AltForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AltForm {
        let mut out = AltForm::zero(self.degree, self.universe);
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), -c);
        }
        out
    }

    pub fn conj(&self) -> AltForm {
        let mut out = AltForm::zero(self.degree, self.universe);
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), c.conj());
        }
        out
    }

    /// Wedge a single covector `tau_i` from the left. Cheaper form of
    /// [`wedge`] used by the frequency-space differential.
    pub fn wedge_basis_left(&self, i: u32, coeff: &Scalar) -> Result<AltForm> {
        if i < 1 || i > self.universe {
            return Err(CoreError::MultiIndex(format!(
                "index {i} out of range 1..={}",
                self.universe
            )));
        }
        let mut out = AltForm::zero(self.degree + 1, self.universe);
        if coeff.is_zero() {
            return Ok(out);
        }
        for (idx, c) in &self.coeffs {
            if let Some((merged, sign)) = insert_index(idx, i) {
                let mut v = coeff * c;
                if sign < 0 {
                    v = -v;
                }
                out.add_term(merged, v);
            }
        }
        Ok(out)
    }

    /// Largest coefficient modulus, `max_{|J|=q} |u_J|`; 0 for the zero form.
    pub fn sup_coeff_norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.abs_f64())
            .fold(0.0f64, f64::max)
    }

    /// Exact counterpart of [`AltForm::sup_coeff_norm`]: the largest `|u_J|^2` as a
    /// real scalar, compared in the forms' own realization.
    pub fn sup_coeff_modsq(&self) -> Scalar {
        let mut best = Scalar::zero();
        for c in self.coeffs.values() {
            let m = c.modulus_sq();
            if m.cmp_real(&best) == std::cmp::Ordering::Greater {
                best = m;
            }
        }
        best
    }

    /// Coefficient-wise distance `max_J |u_J - v_J|`, tolerant to differing
    /// supports.
    pub fn sup_distance(&self, other: &AltForm) -> f64 {
        match self.sub(other) {
            Ok(d) => d.sup_coeff_norm(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn to_float(&self) -> AltForm {
        let mut out = AltForm::zero(self.degree, self.universe);
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), Scalar::Float(c.to_complex64()));
        }
        out
    }
}

/// Wedge product, extended bilinearly from `tau_J ^ tau_K = sign tau_{J u K}`.
pub fn wedge(a: &AltForm, b: &AltForm) -> Result<AltForm> {
    if a.universe != b.universe {
        return Err(CoreError::UniverseMismatch(format!(
            "wedge over universes {} and {}",
            a.universe, b.universe
        )));
    }
    let mut out = AltForm::zero(a.degree + b.degree, a.universe);
    for (ja, ca) in &a.coeffs {
        for (jb, cb) in &b.coeffs {
            if let Some((merged, sign)) = merge_indices(ja, jb) {
                let mut v = ca * cb;
                if sign < 0 {
                    v = -v;
                }
                out.add_term(merged, v);
            }
        }
    }
    Ok(out)
}

impl fmt::Display for AltForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if idx.degree() == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*tau{idx}")?;
            }
        }
        Ok(())
    }
}

/// Encode the coefficients as a list of `{"J": [...], <scalar fields>}`
/// entries, the shape shared by form serializations.
pub fn coeff_entries(form: &AltForm) -> Vec<serde_json::Value> {
    form.coeffs
        .iter()
        .map(|(idx, c)| {
            let mut obj = match scalar_to_value(c) {
                serde_json::Value::Object(m) => m,
                other => {
                    let mut m = serde_json::Map::new();
                    m.insert("re".into(), other);
                    m
                }
            };
            obj.insert(
                "J".into(),
                serde_json::Value::Array(
                    idx.entries().iter().map(|&e| serde_json::json!(e)).collect(),
                ),
            );
            serde_json::Value::Object(obj)
        })
        .collect()
}

/// Rebuild a form from `{"J": [...], <scalar fields>}` entries.
pub fn form_from_coeff_entries(
    degree: usize,
    universe: u32,
    entries: &[serde_json::Value],
) -> Result<AltForm> {
    let mut form = AltForm::zero(degree, universe);
    for entry in entries {
        let obj = entry.as_object().ok_or_else(|| {
            CoreError::InvalidInput("coefficient entry must be an object".into())
        })?;
        let j: Vec<u32> = obj
            .get("J")
            .and_then(|v| v.as_array())
            .ok_or_else(|| CoreError::InvalidInput("coefficient entry missing \"J\"".into()))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|u| u as u32)
                    .ok_or_else(|| CoreError::InvalidInput("bad index in \"J\"".into()))
            })
            .collect::<Result<_>>()?;
        let mut rest = obj.clone();
        rest.remove("J");
        let c = scalar_from_value(&serde_json::Value::Object(rest))?;
        form.add_tuple(&j, c)?;
    }
    Ok(form)
}

#[derive(Serialize, Deserialize)]
struct AltFormRepr {
    q: usize,
    universe: u32,
    coeffs: Vec<serde_json::Value>,
}

impl Serialize for AltForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        AltFormRepr {
            q: self.degree,
            universe: self.universe,
            coeffs: coeff_entries(self),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AltForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = AltFormRepr::deserialize(deserializer)?;
        form_from_coeff_entries(repr.q, repr.universe, &repr.coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(entries: &[u32], n: u32) -> MultiIndex {
        MultiIndex::new(entries.to_vec(), n).unwrap()
    }

    #[test]
    fn permutation_sign_examples() {
        assert_eq!(permutation_sign(1, &mi(&[1, 2, 3], 5)).unwrap(), 1);
        assert_eq!(permutation_sign(2, &mi(&[1, 2], 5)).unwrap(), -1);
        // sigma=3 in (1,2,3,5): two entries below -> +1
        assert_eq!(permutation_sign(3, &mi(&[1, 2, 3, 5], 6)).unwrap(), 1);
        assert!(permutation_sign(4, &mi(&[1, 2], 5)).is_err());
    }

    #[test]
    fn remove_index_examples() {
        assert_eq!(remove_index(&mi(&[1, 3, 4], 5), 3).unwrap(), mi(&[1, 4], 5));
        assert_eq!(remove_index(&mi(&[2], 5), 2).unwrap(), MultiIndex::empty(5));
        assert_eq!(
            remove_index(&mi(&[1, 2, 5, 6], 6), 6).unwrap(),
            mi(&[1, 2, 5], 6)
        );
        assert!(remove_index(&mi(&[1, 2], 5), 4).is_err());
    }

    #[test]
    fn wedge_examples() {
        let n = 3;
        let t1 = AltForm::basis_covector(1, n).unwrap();
        let t2 = AltForm::basis_covector(2, n).unwrap();
        let t3 = AltForm::basis_covector(3, n).unwrap();

        assert!(wedge(&t1, &t1).unwrap().is_zero());

        let w = wedge(&t2, &t1).unwrap();
        assert_eq!(w.coefficient(&mi(&[1, 2], n)), Scalar::from_int(-1));

        // bilinear expansion: (2 t1 + t3) ^ t2 = 2 t1^t2 + t3^t2
        // = 2 t_{12} - t_{23}, consistent with t2 ^ t1 = -t_{12} above
        let a = t1.scale(&Scalar::from_int(2)).add(&t3).unwrap();
        let w2 = wedge(&a, &t2).unwrap();
        assert_eq!(w2.coefficient(&mi(&[1, 2], n)), Scalar::from_int(2));
        assert_eq!(w2.coefficient(&mi(&[2, 3], n)), Scalar::from_int(-1));
    }

    #[test]
    fn wedge_universe_mismatch_is_error() {
        let a = AltForm::basis_covector(1, 2).unwrap();
        let b = AltForm::basis_covector(1, 3).unwrap();
        assert!(wedge(&a, &b).is_err());
    }

    #[test]
    fn sup_norm_examples() {
        let n = 3;
        assert_eq!(AltForm::zero(1, n).sup_coeff_norm(), 0.0);
        let mut f = AltForm::zero(1, n);
        f.add_tuple(&[1], Scalar::from_int(3)).unwrap();
        f.add_tuple(&[2], Scalar::from_complex(0, -4)).unwrap();
        assert!((f.sup_coeff_norm() - 4.0).abs() < 1e-15);
        let mut g = AltForm::zero(2, n);
        g.add_tuple(&[1, 2], Scalar::from_complex(1, 1)).unwrap();
        assert!((g.sup_coeff_norm() - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tuple_normalization_accumulates_sign() {
        let n = 4;
        let mut f = AltForm::zero(2, n);
        f.add_tuple(&[3, 1], Scalar::one()).unwrap();
        assert_eq!(f.coefficient(&mi(&[1, 3], n)), Scalar::from_int(-1));
        f.add_tuple(&[2, 2], Scalar::one()).unwrap(); // annihilates
        assert_eq!(f.terms().count(), 1);
        assert_eq!(f.eval_tuple(&[3, 1]).unwrap(), Scalar::one());
        assert_eq!(f.eval_tuple(&[1, 3]).unwrap(), Scalar::from_int(-1));
    }

    #[test]
    fn serde_roundtrip_is_identity() {
        let n = 3;
        let mut f = AltForm::zero(2, n);
        f.add_tuple(&[1, 2], Scalar::from_ratio(1, 2)).unwrap();
        f.add_tuple(&[2, 3], Scalar::from_complex(0, -1)).unwrap();
        let txt = serde_json::to_string(&f).unwrap();
        let f2: AltForm = serde_json::from_str(&txt).unwrap();
        assert_eq!(f, f2);
    }
}
