//! Complex scalars in three realizations: exact Gaussian rationals, exact
//! quadratic-surd extensions `Q(sqrt(d), i)`, and binary64.
//!
//! Every coefficient in the toolkit is a [`Scalar`]. Arithmetic between
//! mismatched realizations promotes upward (exact -> surd -> float); a surd
//! whose irrational parts cancel demotes back to exact, so equality and
//! zero-tests stay structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CoreError;

/// Tolerance used when the float realization has to decide "is this zero".
pub const FLOAT_EQ_TOL: f64 = 1e-9;

fn rat_zero() -> BigRational {
    BigRational::zero()
}

fn rat_from_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `rat + coef * sqrt(d)` for the ambient square-free `d` of a [`GaussSurd`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdPart {
    pub rat: BigRational,
    pub coef: BigRational,
}

impl SurdPart {
    pub fn new(rat: BigRational, coef: BigRational) -> Self {
        SurdPart { rat, coef }
    }

    pub fn from_rat(rat: BigRational) -> Self {
        SurdPart { rat, coef: rat_zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.coef.is_zero()
    }

    fn add(&self, o: &SurdPart) -> SurdPart {
        SurdPart::new(&self.rat + &o.rat, &self.coef + &o.coef)
    }

    fn sub(&self, o: &SurdPart) -> SurdPart {
        SurdPart::new(&self.rat - &o.rat, &self.coef - &o.coef)
    }

    fn neg(&self) -> SurdPart {
        SurdPart::new(-self.rat.clone(), -self.coef.clone())
    }

    /// (a + b s)(a' + b' s) = (aa' + bb' d) + (ab' + a'b) s, with s^2 = d.
    fn mul(&self, o: &SurdPart, d: i64) -> SurdPart {
        let d = rat_from_i64(d);
        SurdPart::new(
            &self.rat * &o.rat + &self.coef * &o.coef * &d,
            &self.rat * &o.coef + &o.rat * &self.coef,
        )
    }

    /// Sign of `rat + coef*sqrt(d)` decided exactly.
    fn sign(&self, d: i64) -> i8 {
        let sr = rational_sign(&self.rat);
        let sc = rational_sign(&self.coef);
        if sc == 0 {
            return sr;
        }
        if sr == 0 {
            return sc;
        }
        if sr == sc {
            return sr;
        }
        // Opposite signs: compare rat^2 with coef^2 * d.
        let lhs = &self.rat * &self.rat;
        let rhs = &self.coef * &self.coef * rat_from_i64(d);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sr,
            Ordering::Less => sc,
            Ordering::Equal => 0,
        }
    }

    fn to_f64(&self, d: i64) -> f64 {
        rat_to_f64(&self.rat) + rat_to_f64(&self.coef) * (d as f64).sqrt()
    }
}

fn rational_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back through a quotient of floats for extreme magnitudes.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// `re + i im`, both Gaussian-rational components exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

/// `(a + b sqrt(d)) + i (c + e sqrt(d))` with square-free `d >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussSurd {
    pub re: SurdPart,
    pub im: SurdPart,
    pub d: i64,
}

/// A complex scalar in one of the three realizations.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(GaussRational),
    Surd(GaussSurd),
    Float(Complex64),
}

/// Which realization a scalar (or a structure of scalars) lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Realization {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "surd")]
    Surd,
    #[serde(rename = "float")]
    Float,
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Realization::Exact => write!(f, "exact"),
            Realization::Surd => write!(f, "surd"),
            Realization::Float => write!(f, "float"),
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(GaussRational { re: rat_zero(), im: rat_zero() })
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::Exact(GaussRational { re: rat_zero(), im: rat_from_i64(1) })
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(GaussRational { re: rat_from_i64(v), im: rat_zero() })
    }

    pub fn from_rationals(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact(GaussRational { re, im })
    }

    /// `p/q` as a real exact scalar. Panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Exact(GaussRational {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: rat_zero(),
        })
    }

    /// `(p/q) i` as an exact scalar.
    pub fn from_ratio_im(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Exact(GaussRational {
            re: rat_zero(),
            im: BigRational::new(BigInt::from(p), BigInt::from(q)),
        })
    }

    pub fn from_complex(re: i64, im: i64) -> Self {
        Scalar::Exact(GaussRational { re: rat_from_i64(re), im: rat_from_i64(im) })
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    /// Real surd `a + b sqrt(d)`; `d` must be square-free and >= 2.
    pub fn surd(a: BigRational, b: BigRational, d: i64) -> Result<Self, CoreError> {
        if d < 2 || !is_square_free(d) {
            return Err(CoreError::Scalar(format!(
                "surd radicand must be square-free and >= 2, got {d}"
            )));
        }
        Ok(Scalar::Surd(GaussSurd {
            re: SurdPart::new(a, b),
            im: SurdPart::from_rat(rat_zero()),
            d,
        })
        .normalized())
    }

    /// (1 + sqrt(5)) / 2.
    pub fn golden_ratio() -> Self {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        Scalar::surd(half.clone(), half, 5).expect("5 is square-free")
    }

    pub fn realization(&self) -> Realization {
        match self {
            Scalar::Exact(_) => Realization::Exact,
            Scalar::Surd(_) => Realization::Surd,
            Scalar::Float(_) => Realization::Float,
        }
    }

    /// Collapse surds with vanishing irrational parts back to exact form.
    fn normalized(self) -> Self {
        match self {
            Scalar::Surd(s) if s.re.coef.is_zero() && s.im.coef.is_zero() => {
                Scalar::Exact(GaussRational { re: s.re.rat, im: s.im.rat })
            }
            other => other,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.re.is_zero() && g.im.is_zero(),
            Scalar::Surd(s) => s.re.is_zero() && s.im.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Float(z) => z.re.is_finite() && z.im.is_finite(),
            _ => true,
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Scalar::Exact(g) => Complex64::new(rat_to_f64(&g.re), rat_to_f64(&g.im)),
            Scalar::Surd(s) => Complex64::new(s.re.to_f64(s.d), s.im.to_f64(s.d)),
            Scalar::Float(z) => *z,
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(g) => {
                Scalar::Exact(GaussRational { re: g.re.clone(), im: -g.im.clone() })
            }
            Scalar::Surd(s) => Scalar::Surd(GaussSurd {
                re: s.re.clone(),
                im: s.im.neg(),
                d: s.d,
            }),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    /// `|z|^2` as a real scalar in the same (promoted) realization.
    pub fn modulus_sq(&self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(GaussRational {
                re: &g.re * &g.re + &g.im * &g.im,
                im: rat_zero(),
            }),
            Scalar::Surd(s) => Scalar::Surd(GaussSurd {
                re: s.re.mul(&s.re, s.d).add(&s.im.mul(&s.im, s.d)),
                im: SurdPart::from_rat(rat_zero()),
                d: s.d,
            })
            .normalized(),
            Scalar::Float(z) => Scalar::Float(Complex64::new(z.norm_sqr(), 0.0)),
        }
    }

    pub fn abs_f64(&self) -> f64 {
        match self {
            Scalar::Float(z) => z.norm(),
            _ => self.modulus_sq().real_f64().sqrt(),
        }
    }

    pub fn real_f64(&self) -> f64 {
        match self {
            Scalar::Exact(g) => rat_to_f64(&g.re),
            Scalar::Surd(s) => s.re.to_f64(s.d),
            Scalar::Float(z) => z.re,
        }
    }

    /// Real part as a real scalar.
    pub fn re_part(&self) -> Scalar {
        match self {
            Scalar::Exact(g) => {
                Scalar::Exact(GaussRational { re: g.re.clone(), im: rat_zero() })
            }
            Scalar::Surd(s) => Scalar::Surd(GaussSurd {
                re: s.re.clone(),
                im: SurdPart::from_rat(rat_zero()),
                d: s.d,
            })
            .normalized(),
            Scalar::Float(z) => Scalar::Float(Complex64::new(z.re, 0.0)),
        }
    }

    /// Imaginary part as a real scalar.
    pub fn im_part(&self) -> Scalar {
        match self {
            Scalar::Exact(g) => {
                Scalar::Exact(GaussRational { re: g.im.clone(), im: rat_zero() })
            }
            Scalar::Surd(s) => Scalar::Surd(GaussSurd {
                re: s.im.clone(),
                im: SurdPart::from_rat(rat_zero()),
                d: s.d,
            })
            .normalized(),
            Scalar::Float(z) => Scalar::Float(Complex64::new(z.im, 0.0)),
        }
    }

    /// Exact comparison of two *real* scalars (imaginary parts ignored).
    /// Float operands compare through `partial_cmp` (NaN treated as equal).
    pub fn cmp_real(&self, other: &Scalar) -> Ordering {
        match promote_pair(self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.re.cmp(&b.re),
            (Scalar::Surd(a), Scalar::Surd(b)) => {
                let diff = a.re.sub(&b.re);
                match diff.sign(a.d) {
                    s if s > 0 => Ordering::Greater,
                    s if s < 0 => Ordering::Less,
                    _ => Ordering::Equal,
                }
            }
            (a, b) => a
                .real_f64()
                .partial_cmp(&b.real_f64())
                .unwrap_or(Ordering::Equal),
        }
    }

    pub fn inv(&self) -> Result<Scalar, CoreError> {
        if self.is_zero() {
            return Err(CoreError::Scalar("division by zero".into()));
        }
        match self {
            Scalar::Exact(g) => {
                let n = &g.re * &g.re + &g.im * &g.im;
                Ok(Scalar::Exact(GaussRational {
                    re: &g.re / &n,
                    im: -(&g.im / &n),
                }))
            }
            Scalar::Surd(s) => {
                // 1/z = conj(z) / |z|^2 with |z|^2 = a + b sqrt(d) real;
                // then 1/(a + b sqrt(d)) = (a - b sqrt(d)) / (a^2 - b^2 d).
                let m = match self.modulus_sq() {
                    Scalar::Surd(m) => m.re,
                    Scalar::Exact(m) => SurdPart::from_rat(m.re),
                    _ => unreachable!(),
                };
                let denom =
                    &m.rat * &m.rat - &m.coef * &m.coef * rat_from_i64(s.d);
                if denom.is_zero() {
                    return Err(CoreError::Scalar("division by zero".into()));
                }
                let inv_m = SurdPart::new(&m.rat / &denom, -(&m.coef / &denom));
                let c = self.conj();
                let factor = Scalar::Surd(GaussSurd {
                    re: inv_m,
                    im: SurdPart::from_rat(rat_zero()),
                    d: s.d,
                });
                Ok((&c * &factor).normalized())
            }
            Scalar::Float(z) => Ok(Scalar::Float(z.inv())),
        }
    }

    /// Structural or tolerance-based equality, matching the realization.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        match promote_pair(self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Surd(a), Scalar::Surd(b)) => a == b,
            (a, b) => (a.to_complex64() - b.to_complex64()).norm() <= tol,
        }
    }
}

fn is_square_free(mut d: i64) -> bool {
    let mut p = 2i64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        while d % p == 0 {
            d /= p;
        }
        p += 1;
    }
    true
}

fn lift_to_surd(g: &GaussRational, d: i64) -> GaussSurd {
    GaussSurd {
        re: SurdPart::from_rat(g.re.clone()),
        im: SurdPart::from_rat(g.im.clone()),
        d,
    }
}

/// Bring two scalars into a common realization (exact -> surd -> float).
/// Surds over distinct radicands fall through to floats.
fn promote_pair(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
    match (a, b) {
        (Scalar::Exact(_), Scalar::Exact(_)) => (a.clone(), b.clone()),
        (Scalar::Exact(g), Scalar::Surd(s)) => {
            (Scalar::Surd(lift_to_surd(g, s.d)), b.clone())
        }
        (Scalar::Surd(s), Scalar::Exact(g)) => {
            (a.clone(), Scalar::Surd(lift_to_surd(g, s.d)))
        }
        (Scalar::Surd(x), Scalar::Surd(y)) if x.d == y.d => (a.clone(), b.clone()),
        _ => (
            Scalar::Float(a.to_complex64()),
            Scalar::Float(b.to_complex64()),
        ),
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match promote_pair(self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Surd(a), Scalar::Surd(b)) => a == b,
            (a, b) => a.to_complex64() == b.to_complex64(),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match promote_pair(self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(GaussRational {
                re: &a.re + &b.re,
                im: &a.im + &b.im,
            }),
            (Scalar::Surd(a), Scalar::Surd(b)) => Scalar::Surd(GaussSurd {
                re: a.re.add(&b.re),
                im: a.im.add(&b.im),
                d: a.d,
            })
            .normalized(),
            (a, b) => Scalar::Float(a.to_complex64() + b.to_complex64()),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match promote_pair(self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(GaussRational {
                re: &a.re - &b.re,
                im: &a.im - &b.im,
            }),
            (Scalar::Surd(a), Scalar::Surd(b)) => Scalar::Surd(GaussSurd {
                re: a.re.sub(&b.re),
                im: a.im.sub(&b.im),
                d: a.d,
            })
            .normalized(),
            (a, b) => Scalar::Float(a.to_complex64() - b.to_complex64()),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match promote_pair(self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(GaussRational {
                re: &a.re * &b.re - &a.im * &b.im,
                im: &a.re * &b.im + &a.im * &b.re,
            }),
            (Scalar::Surd(a), Scalar::Surd(b)) => Scalar::Surd(GaussSurd {
                re: a.re.mul(&b.re, a.d).sub(&a.im.mul(&b.im, a.d)),
                im: a.re.mul(&b.im, a.d).add(&a.im.mul(&b.re, a.d)),
                d: a.d,
            })
            .normalized(),
            (a, b) => Scalar::Float(a.to_complex64() * b.to_complex64()),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("scalar division by zero");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(GaussRational {
                re: -g.re.clone(),
                im: -g.im.clone(),
            }),
            Scalar::Surd(s) => Scalar::Surd(GaussSurd {
                re: s.re.neg(),
                im: s.im.neg(),
                d: s.d,
            }),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

macro_rules! forward_owned_binop {
    ($Op:ident, $op:ident) => {
        impl $Op for Scalar {
            type Output = Scalar;
            fn $op(self, rhs: Scalar) -> Scalar {
                (&self).$op(&rhs)
            }
        }
        impl $Op<&Scalar> for Scalar {
            type Output = Scalar;
            fn $op(self, rhs: &Scalar) -> Scalar {
                (&self).$op(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Coefficient of `i`, parenthesized when fractional so `2/3` reads as
/// `(2/3)i` rather than `2/(3i)`.
fn fmt_im_coeff(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

fn fmt_surd_part(p: &SurdPart, d: i64) -> String {
    if p.coef.is_zero() {
        fmt_rational(&p.rat)
    } else if p.rat.is_zero() {
        format!("{}*sqrt({})", fmt_rational(&p.coef), d)
    } else {
        format!("({} + {}*sqrt({}))", fmt_rational(&p.rat), fmt_rational(&p.coef), d)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => {
                if g.im.is_zero() {
                    write!(f, "{}", fmt_rational(&g.re))
                } else if g.re.is_zero() {
                    write!(f, "{}i", fmt_im_coeff(&g.im))
                } else if g.im.is_positive() {
                    write!(f, "{} + {}i", fmt_rational(&g.re), fmt_im_coeff(&g.im))
                } else {
                    write!(f, "{} - {}i", fmt_rational(&g.re), fmt_im_coeff(&(-g.im.clone())))
                }
            }
            Scalar::Surd(s) => {
                if s.im.is_zero() {
                    write!(f, "{}", fmt_surd_part(&s.re, s.d))
                } else if s.re.is_zero() {
                    write!(f, "{}i", fmt_surd_part(&s.im, s.d))
                } else {
                    write!(f, "{} + {}i", fmt_surd_part(&s.re, s.d), fmt_surd_part(&s.im, s.d))
                }
            }
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.re == 0.0 {
                    write!(f, "{}i", z.im)
                } else if z.im > 0.0 {
                    write!(f, "{} + {}i", z.re, z.im)
                } else {
                    write!(f, "{} - {}i", z.re, -z.im)
                }
            }
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, CoreError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| CoreError::Scalar(format!("bad rational numerator `{num}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| CoreError::Scalar(format!("bad rational denominator `{den}`")))?;
    if d.is_zero() {
        return Err(CoreError::Scalar(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

fn rat_component(v: &serde_json::Value, field: &str) -> Result<(BigRational, bool), CoreError> {
    // Returns the parsed value plus whether it was given as a float.
    match v {
        serde_json::Value::String(s) => Ok((parse_rational(s)?, false)),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok((rat_from_i64(i), false))
            } else {
                let f = n
                    .as_f64()
                    .ok_or_else(|| CoreError::Scalar(format!("bad number in `{field}`")))?;
                let r = BigRational::from_float(f)
                    .ok_or_else(|| CoreError::Scalar(format!("non-finite `{field}`")))?;
                Ok((r, true))
            }
        }
        other => Err(CoreError::Scalar(format!(
            "field `{field}` must be a number or \"p/q\" string, got {other}"
        ))),
    }
}

fn surd_part_from_value(v: &serde_json::Value, d: i64) -> Result<SurdPart, CoreError> {
    match v {
        serde_json::Value::Object(m) => {
            let a = m
                .get("a")
                .map(|x| rat_component(x, "a"))
                .transpose()?
                .map(|p| p.0)
                .unwrap_or_else(rat_zero);
            let b = m
                .get("b")
                .map(|x| rat_component(x, "b"))
                .transpose()?
                .map(|p| p.0)
                .unwrap_or_else(rat_zero);
            let _ = d;
            Ok(SurdPart::new(a, b))
        }
        other => Ok(SurdPart::from_rat(rat_component(other, "surd part")?.0)),
    }
}

/// Parse a scalar from its JSON form.
///
/// Accepted shapes:
/// - `{"re": "p/q" | number, "im": "p/q" | number}` (exact or float),
/// - `{"a": "p/q", "b": "p/q", "d": n}` for the real surd `a + b sqrt(n)`,
/// - `{"re": {"a":..,"b":..}, "im": {"a":..,"b":..}, "d": n}` for complex surds,
/// - a bare number (real part only).
pub fn scalar_from_value(v: &serde_json::Value) -> Result<Scalar, CoreError> {
    match v {
        serde_json::Value::Number(_) => {
            let (r, was_float) = rat_component(v, "re")?;
            if was_float {
                Ok(Scalar::Float(Complex64::new(rat_to_f64(&r), 0.0)))
            } else {
                Ok(Scalar::from_rationals(r, rat_zero()))
            }
        }
        serde_json::Value::Object(m) => {
            if let Some(dv) = m.get("d") {
                let d = dv
                    .as_i64()
                    .ok_or_else(|| CoreError::Scalar("`d` must be an integer".into()))?;
                if d < 2 || !is_square_free(d) {
                    return Err(CoreError::Scalar(format!(
                        "surd radicand must be square-free and >= 2, got {d}"
                    )));
                }
                if m.contains_key("a") || m.contains_key("b") {
                    let re = surd_part_from_value(v, d)?;
                    return Ok(Scalar::Surd(GaussSurd {
                        re,
                        im: SurdPart::from_rat(rat_zero()),
                        d,
                    })
                    .normalized());
                }
                let re = m
                    .get("re")
                    .map(|x| surd_part_from_value(x, d))
                    .transpose()?
                    .unwrap_or_else(|| SurdPart::from_rat(rat_zero()));
                let im = m
                    .get("im")
                    .map(|x| surd_part_from_value(x, d))
                    .transpose()?
                    .unwrap_or_else(|| SurdPart::from_rat(rat_zero()));
                return Ok(Scalar::Surd(GaussSurd { re, im, d }).normalized());
            }
            let (re, re_f) = m
                .get("re")
                .map(|x| rat_component(x, "re"))
                .transpose()?
                .unwrap_or((rat_zero(), false));
            let (im, im_f) = m
                .get("im")
                .map(|x| rat_component(x, "im"))
                .transpose()?
                .unwrap_or((rat_zero(), false));
            if re_f || im_f {
                Ok(Scalar::Float(Complex64::new(rat_to_f64(&re), rat_to_f64(&im))))
            } else {
                Ok(Scalar::from_rationals(re, im))
            }
        }
        other => Err(CoreError::Scalar(format!("cannot parse scalar from {other}"))),
    }
}

pub fn scalar_to_value(s: &Scalar) -> serde_json::Value {
    match s {
        Scalar::Exact(g) => serde_json::json!({
            "re": fmt_rational(&g.re),
            "im": fmt_rational(&g.im),
        }),
        Scalar::Surd(su) => {
            if su.im.is_zero() {
                serde_json::json!({
                    "a": fmt_rational(&su.re.rat),
                    "b": fmt_rational(&su.re.coef),
                    "d": su.d,
                })
            } else {
                serde_json::json!({
                    "re": {"a": fmt_rational(&su.re.rat), "b": fmt_rational(&su.re.coef)},
                    "im": {"a": fmt_rational(&su.im.rat), "b": fmt_rational(&su.im.coef)},
                    "d": su.d,
                })
            }
        }
        Scalar::Float(z) => serde_json::json!({ "re": z.re, "im": z.im }),
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        scalar_to_value(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        scalar_from_value(&v).map_err(D::Error::custom)
    }
}
