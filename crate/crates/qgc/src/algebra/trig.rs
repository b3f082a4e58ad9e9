//! Canonical trigonometric forms lambda^a (sin wl / w)^m Q(cos wl).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::intpoly::IntPoly;
use crate::error::{QgcError, Result};

/// Canonical triple (a, m, Q) for lambda^a s^m Q(c) with s = sin(w l)/w and
/// c = cos(w l), w = sqrt(lambda). Q is primitive with positive leading
/// coefficient and the pair (a, m) is reduced: never both a > 0 and m >= 2.
///
/// The form is defined up to a nonzero rational scalar; `coeff` retains the
/// raw normalization of the construction (needed when two forms are combined
/// into a Jost function, where only their relative scale matters). Equality
/// and serialization ignore it.
#[derive(Clone, Debug)]
pub struct TrigForm {
    a: u32,
    m: u32,
    q: IntPoly,
    coeff: BigRational,
}

impl TrigForm {
    /// Canonicalizes the raw triple (a, m, Q), m possibly negative.
    ///
    /// Rules, applied to a fixpoint:
    /// (i)  while m < 0: Q <- -Q/(z^2-1), m += 2, a += 1
    ///      (uses lambda s^2 = 1 - c^2; divisibility failure is structural)
    /// (ii) while a > 0 and m >= 2: Q <- (1-z^2) Q, a -= 1, m -= 2
    /// then the signed content of Q moves into the scalar.
    pub fn canonicalize(a: i64, m: i64, q: IntPoly) -> Result<TrigForm> {
        Self::canonicalize_scaled(a, m, q, BigRational::one())
    }

    pub fn canonicalize_scaled(
        mut a: i64,
        mut m: i64,
        mut q: IntPoly,
        mut coeff: BigRational,
    ) -> Result<TrigForm> {
        if q.is_zero() || coeff.is_zero() {
            return Err(QgcError::InvalidInput("zero trig form".into()));
        }
        if a < 0 {
            return Err(QgcError::InvalidInput(
                "negative lambda exponent in trig form".into(),
            ));
        }
        let z2m1 = IntPoly::from_i64(&[-1, 0, 1]);
        while m < 0 {
            q = q.exact_div(&z2m1).map_err(|_| {
                QgcError::Structural("trig canonicalization: Q not divisible by z^2 - 1".into())
            })?;
            coeff = -coeff;
            m += 2;
            a += 1;
        }
        while a > 0 && m >= 2 {
            q = q.mul(&z2m1).neg();
            a -= 1;
            m -= 2;
        }
        let (c, prim) = q.signed_content_primitive()?;
        coeff *= BigRational::from_integer(c);
        Ok(TrigForm {
            a: a as u32,
            m: m as u32,
            q: prim,
            coeff,
        })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> &IntPoly {
        &self.q
    }

    /// Raw scalar from the construction; not part of the canonical identity.
    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    /// Scalar-free comparison of canonical triples.
    pub fn trig_equal(&self, other: &TrigForm) -> bool {
        self.a == other.a && self.m == other.m && self.q == other.q
    }

    /// Sort key so reports can order forms deterministically.
    pub fn sort_key(&self) -> (u32, u32, Vec<BigInt>) {
        (self.a, self.m, self.q.coeffs().to_vec())
    }

    /// Numeric value including the raw scalar, at w = sqrt(lambda) (w may be
    /// complex; for real lambda > 0 pass the positive root).
    pub fn eval_omega(&self, omega: Complex64, ell: f64) -> Complex64 {
        let lambda = omega * omega;
        let s = if omega.norm() < 1e-14 {
            Complex64::new(ell, 0.0)
        } else {
            (omega * ell).sin() / omega
        };
        let c = (omega * ell).cos();
        let coeff = self.coeff.to_f64().unwrap_or(f64::NAN);
        lambda.powu(self.a) * s.powu(self.m) * self.q.eval_c64(c) * coeff
    }
}

impl PartialEq for TrigForm {
    fn eq(&self, other: &Self) -> bool {
        self.trig_equal(other)
    }
}

impl Eq for TrigForm {}

impl Serialize for TrigForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TrigForm", 3)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("m", &self.m)?;
        let coeffs: Vec<String> = self.q.coeffs().iter().map(|c| c.to_string()).collect();
        st.serialize_field("Q", &coeffs)?;
        st.end()
    }
}
