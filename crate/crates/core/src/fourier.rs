//! Frequency-space realization of the tangential CR complex on `T^N` for
//! trigonometric-polynomial forms.
//!
//! The differential acts frequency-wise as wedging with the symbol covector
//! `omega(xi) = sum_k symbol_k(xi) tau_k`; the per-frequency solver divides
//! through the largest symbol and reassembles a primitive, so every closed
//! form splits into its bi-invariant part plus an exact one away from
//! resonances.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};
use crate::exterior::{
    coeff_entries, form_from_coeff_entries, permutation_sign, remove_index, wedge, AltForm,
};
use crate::scalar::{Realization, Scalar, FLOAT_EQ_TOL};
use crate::toruscr::TorusStructure;

/// A finitely supported map from frequencies to coefficient forms.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierForm {
    structure: TorusStructure,
    degree: usize,
    terms: BTreeMap<Vec<i64>, AltForm>,
}

impl FourierForm {
    pub fn new(structure: TorusStructure, degree: usize) -> Self {
        FourierForm { structure, degree, terms: BTreeMap::new() }
    }

    pub fn structure(&self) -> &TorusStructure {
        &self.structure
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &AltForm)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, xi: &[i64]) -> AltForm {
        self.terms
            .get(xi)
            .cloned()
            .unwrap_or_else(|| AltForm::zero(self.degree, self.structure.n as u32))
    }

    /// Accumulate a coefficient form at a frequency; zero results are pruned.
    pub fn add_term(&mut self, xi: Vec<i64>, form: AltForm) -> Result<()> {
        if xi.len() != self.structure.big_n {
            return Err(CoreError::InvalidInput(format!(
                "frequency must have {} entries",
                self.structure.big_n
            )));
        }
        if form.degree() != self.degree || form.universe() != self.structure.n as u32 {
            return Err(CoreError::UniverseMismatch(format!(
                "coefficient form must have degree {} over universe {}",
                self.degree, self.structure.n
            )));
        }
        if form.is_zero() {
            return Ok(());
        }
        match self.terms.entry(xi) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(form);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&form)?;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn sub(&self, other: &FourierForm) -> Result<FourierForm> {
        let mut out = self.clone();
        for (xi, f) in &other.terms {
            out.add_term(xi.clone(), f.neg())?;
        }
        Ok(out)
    }

    /// Largest coefficient sup-norm over the support.
    pub fn sup_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|f| f.sup_coeff_norm())
            .fold(0.0, f64::max)
    }

    /// The symbol covector `omega(xi) = sum_k symbol_k(xi) tau_k`.
    pub fn symbol_covector(structure: &TorusStructure, xi: &[i64]) -> Result<AltForm> {
        let n = structure.n as u32;
        let mut omega = AltForm::zero(1, n);
        for k in 0..structure.n {
            let s = structure.symbol(k, xi)?;
            if !s.is_zero() {
                omega.add_tuple(&[k as u32 + 1], s)?;
            }
        }
        Ok(omega)
    }
}

/// The frequency-wise differential: degree rises by one; at top degree the
/// result is the zero form.
pub fn dbar_b(u: &FourierForm) -> Result<FourierForm> {
    let mut out = FourierForm::new(u.structure.clone(), u.degree + 1);
    for (xi, coeff) in &u.terms {
        let omega = FourierForm::symbol_covector(&u.structure, xi)?;
        let w = wedge(&omega, coeff)?;
        if !w.is_zero() {
            out.add_term(xi.clone(), w)?;
        }
    }
    Ok(out)
}

/// Closedness with a witness frequency where the wedge is nonzero.
pub fn is_closed(u: &FourierForm) -> Result<(bool, Option<Vec<i64>>)> {
    let d = dbar_b(u)?;
    match d.terms.keys().next() {
        None => Ok((true, None)),
        Some(xi) => Ok((false, Some(xi.clone()))),
    }
}

/// Closedness up to a sup-norm tolerance on each differential coefficient
/// (for float data carrying rounding noise); exact forms should use
/// [`is_closed`].
pub fn is_closed_tol(u: &FourierForm, tol: f64) -> Result<(bool, Option<Vec<i64>>)> {
    let d = dbar_b(u)?;
    let scale = 1.0 + u.sup_norm();
    for (xi, f) in &d.terms {
        if f.sup_coeff_norm() > tol * scale {
            return Ok((false, Some(xi.clone())));
        }
    }
    Ok((true, None))
}

/// Solve `omega ^ v = u_hat` at a single frequency with symbol vector
/// `symbols`, dividing through the largest symbol (smallest index wins ties).
pub fn solve_frequency(u_hat: &AltForm, symbols: &[Scalar]) -> Result<AltForm> {
    let n = symbols.len() as u32;
    if u_hat.universe() != n {
        return Err(CoreError::UniverseMismatch(format!(
            "coefficient form universe {} does not match {} symbols",
            u_hat.universe(),
            n
        )));
    }
    let q = u_hat.degree();
    if q == 0 {
        return Err(CoreError::Domain(
            "cannot divide a 0-form; only degrees >= 1 are solvable".into(),
        ));
    }

    // sigma: smallest index attaining the maximal modulus
    let mut sigma: Option<usize> = None;
    let mut best = Scalar::zero();
    for (k, s) in symbols.iter().enumerate() {
        let m = s.modulus_sq();
        if m.cmp_real(&best) == std::cmp::Ordering::Greater {
            best = m;
            sigma = Some(k);
        }
    }
    let sigma = sigma.ok_or_else(|| CoreError::Resonance(Vec::new()))?;
    let sigma_1b = sigma as u32 + 1;
    let inv = symbols[sigma].inv()?;

    let mut v = AltForm::zero(q - 1, n);
    for (j, c) in u_hat.terms() {
        if !j.contains(sigma_1b) {
            continue;
        }
        let sign = permutation_sign(sigma_1b, j)?;
        let stripped = remove_index(j, sigma_1b)?;
        let mut coeff = c * &inv;
        if sign < 0 {
            coeff = -coeff;
        }
        v = v.add(&AltForm::from_terms(q - 1, n, [(stripped, coeff)])?)?;
    }

    // reconstruction check: omega ^ v must reproduce u_hat; failure means the
    // input was not closed at this frequency
    let mut omega = AltForm::zero(1, n);
    for (k, s) in symbols.iter().enumerate() {
        if !s.is_zero() {
            omega.add_tuple(&[k as u32 + 1], s.clone())?;
        }
    }
    let rebuilt = wedge(&omega, &v)?;
    let residual = rebuilt.sub(u_hat)?;
    let float_input = symbols.iter().any(|s| s.realization() == Realization::Float)
        || !matches!(u_hat.sup_coeff_modsq().realization(), Realization::Exact | Realization::Surd);
    let ok = if float_input {
        residual.sup_coeff_norm() <= FLOAT_EQ_TOL * (1.0 + u_hat.sup_coeff_norm())
    } else {
        residual.is_zero()
    };
    if !ok {
        return Err(CoreError::ContractViolation(format!(
            "frequency coefficient is not closed: reconstruction residual {:.3e}",
            residual.sup_coeff_norm()
        )));
    }
    Ok(v)
}

/// Per-frequency record of the solver estimate.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateEntry {
    pub xi: Vec<i64>,
    pub v_norm: f64,
    pub u_norm: f64,
    pub max_symbol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    /// The frequency-zero coefficient.
    pub invariant_part: AltForm,
    /// Primitive with `dbar_b(primitive) = u - invariant_part`.
    pub primitive: FourierForm,
    pub estimates: Vec<EstimateEntry>,
    /// Sup distance of the reconstruction roundtrip (0 in exact arithmetic).
    pub residual: f64,
}

impl SolveResult {
    /// Largest `|v_hat| / |u_hat|` amplification across the support.
    pub fn max_growth_ratio(&self) -> f64 {
        self.estimates
            .iter()
            .filter(|e| e.u_norm > 0.0)
            .map(|e| e.v_norm / e.u_norm)
            .fold(0.0, f64::max)
    }
}

/// Split a closed form into its bi-invariant part and an exact part.
///
/// Errors on a resonant support frequency (all symbols vanish under a nonzero
/// coefficient) and on non-closed input.
pub fn solve(u: &FourierForm) -> Result<SolveResult> {
    let n = u.structure.n as u32;
    let invariant_part = u.coefficient(&vec![0i64; u.structure.big_n]);
    let mut primitive = FourierForm::new(u.structure.clone(), u.degree.saturating_sub(1));
    let mut estimates = Vec::new();
    for (xi, coeff) in &u.terms {
        if xi.iter().all(|&x| x == 0) {
            continue;
        }
        let symbols: Vec<Scalar> = (0..u.structure.n)
            .map(|k| u.structure.symbol(k, xi))
            .collect::<Result<_>>()?;
        let max_modsq = symbols
            .iter()
            .map(Scalar::modulus_sq)
            .fold(Scalar::zero(), |acc, m| {
                if m.cmp_real(&acc) == std::cmp::Ordering::Greater {
                    m
                } else {
                    acc
                }
            });
        if max_modsq.is_zero() {
            return Err(CoreError::Resonance(xi.clone()));
        }
        if u.degree == 0 {
            // a closed 0-form has no coefficients away from resonances
            return Err(CoreError::ContractViolation(format!(
                "0-form with nonzero coefficient at nonresonant frequency {xi:?} \
                 is not closed"
            )));
        }
        let v_hat = solve_frequency(coeff, &symbols)?;
        estimates.push(EstimateEntry {
            xi: xi.clone(),
            v_norm: v_hat.sup_coeff_norm(),
            u_norm: coeff.sup_coeff_norm(),
            max_symbol: max_modsq.real_f64().max(0.0).sqrt(),
        });
        if !v_hat.is_zero() {
            primitive.add_term(xi.clone(), v_hat)?;
        }
    }

    // roundtrip residual: dbar_b(primitive) vs u - invariant part
    let mut u_star = u.clone();
    if !invariant_part.is_zero() {
        u_star.add_term(vec![0i64; u.structure.big_n], invariant_part.neg())?;
    }
    let residual = if u.degree == 0 {
        0.0
    } else {
        dbar_b(&primitive)?.sub(&u_star)?.sup_norm()
    };
    let _ = n;
    Ok(SolveResult { invariant_part, primitive, estimates, residual })
}

/// Pointwise evaluation `sum_xi e^{i <xi, x>} u_hat(xi)` in binary64.
pub fn evaluate(u: &FourierForm, x: &[f64]) -> Result<AltForm> {
    if x.len() != u.structure.big_n {
        return Err(CoreError::InvalidInput(format!(
            "evaluation point must have {} coordinates",
            u.structure.big_n
        )));
    }
    let n = u.structure.n as u32;
    let mut out = AltForm::zero(u.degree, n);
    for (xi, coeff) in &u.terms {
        let phase: f64 = xi.iter().zip(x).map(|(&k, &xx)| k as f64 * xx).sum();
        let e = Complex64::new(phase.cos(), phase.sin());
        out = out.add(&coeff.to_float().scale(&Scalar::Float(e)))?;
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    xi: Vec<i64>,
    coeffs: Vec<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
struct FourierFormRepr {
    structure: TorusStructure,
    q: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for FourierForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(xi, f)| TermRepr { xi: xi.clone(), coeffs: coeff_entries(f) })
            .collect();
        FourierFormRepr {
            structure: self.structure.clone(),
            q: self.degree,
            terms,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FourierForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = FourierFormRepr::deserialize(deserializer)?;
        repr.structure.validate().map_err(D::Error::custom)?;
        let mut form = FourierForm::new(repr.structure, repr.q);
        let n = form.structure.n as u32;
        for t in &repr.terms {
            let f = form_from_coeff_entries(repr.q, n, &t.coeffs).map_err(D::Error::custom)?;
            form.add_term(t.xi.clone(), f).map_err(D::Error::custom)?;
        }
        Ok(form)
    }
}
