//! Dense univariate polynomials over arbitrary-precision integers.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::fmt;

use crate::error::{QgcError, Result};

/// Polynomial in one variable `z` with `BigInt` coefficients, stored in
/// ascending powers with trailing zeros trimmed. The zero polynomial has an
/// empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Coefficient array in ascending powers, big integers as decimal strings.
impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// The monomial c·z^k.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly { coeffs: v }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(self.coeff(k) + other.coeff(k));
        }
        Self::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Sign of the polynomial at a rational point: -1, 0, or 1.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval_rat(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Content (gcd of coefficients, positive) of a nonzero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// Splits p = sign · content · primitive where primitive has content 1
    /// and a positive leading coefficient. Errors on the zero polynomial.
    pub fn content_primitive(&self) -> Result<(BigInt, IntPoly)> {
        if self.is_zero() {
            return Err(QgcError::InvalidInput(
                "content of the zero polynomial".into(),
            ));
        }
        let c = self.content();
        let mut prim: Vec<BigInt> = self.coeffs.iter().map(|a| a / &c).collect();
        if prim.last().unwrap().is_negative() {
            for a in &mut prim {
                *a = -&*a;
            }
        }
        Ok((c, IntPoly { coeffs: prim }))
    }

    /// Signed content: p = signed_content · primitive.
    pub fn signed_content_primitive(&self) -> Result<(BigInt, IntPoly)> {
        let (c, prim) = self.content_primitive()?;
        if self.leading().is_negative() {
            Ok((-c, prim))
        } else {
            Ok((c, prim))
        }
    }

    /// Exact division in Q[z]: requires the divisor to divide self exactly
    /// and the quotient to have integer coefficients. A violation signals a
    /// broken structural assumption upstream.
    pub fn exact_div(&self, d: &IntPoly) -> Result<IntPoly> {
        if d.is_zero() {
            return Err(QgcError::InvalidInput("division by zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(IntPoly::zero());
        }
        let dd = d.degree().unwrap();
        let nd = self.degree().unwrap();
        if nd < dd {
            return Err(QgcError::Structural(
                "exact_div: divisor degree exceeds dividend degree".into(),
            ));
        }
        let lc = d.leading();
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = &rem[k + dd] / BigRational::from_integer(lc.clone());
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &q * BigRational::from_integer(dc.clone());
                    rem[k + j] -= t;
                }
            }
            quot[k] = q;
        }
        if rem.iter().any(|r| !r.is_zero()) {
            return Err(QgcError::Structural("exact_div: nonzero remainder".into()));
        }
        let mut out = Vec::with_capacity(quot.len());
        for q in quot {
            if !q.denom().is_one() {
                return Err(QgcError::Structural(
                    "exact_div: quotient has non-integer coefficients".into(),
                ));
            }
            out.push(q.numer().clone());
        }
        Ok(IntPoly::new(out))
    }

    /// Pseudo-remainder: returns r with lc(d)^(deg p - deg d + 1) · p = q·d + r.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lc = d.leading();
        let mut r = self.clone();
        let np = match r.degree() {
            Some(n) if n >= dd => n,
            _ => {
                // still apply the full multiplier for sign consistency
                let e = self.degree().map_or(0, |n| n.saturating_sub(dd)) as u32 + 1;
                return r.scale(&lc.pow(e));
            }
        };
        let steps = np - dd + 1;
        for _ in 0..steps {
            let rd = match r.degree() {
                Some(n) => n,
                None => break,
            };
            if rd < dd {
                r = r.scale(&lc);
                continue;
            }
            let rl = r.leading();
            // r <- lc·r − rl·z^(rd−dd)·d
            let shifted = IntPoly::monomial(rl, rd - dd).mul(d);
            r = r.scale(&lc).sub(&shifted);
        }
        r
    }

    /// Primitive gcd with positive leading coefficient, via the subresultant
    /// polynomial remainder sequence.
    pub fn gcd(&self, other: &IntPoly) -> Result<IntPoly> {
        if self.is_zero() && other.is_zero() {
            return Err(QgcError::InvalidInput("gcd(0, 0)".into()));
        }
        if self.is_zero() {
            return Ok(other.content_primitive()?.1);
        }
        if other.is_zero() {
            return Ok(self.content_primitive()?.1);
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.content_primitive()?.1, other.content_primitive()?.1)
        } else {
            (other.content_primitive()?.1, self.content_primitive()?.1)
        };
        // subresultant PRS bookkeeping
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return Ok(b.content_primitive()?.1);
            }
            if r.degree().is_none() || r.degree() == Some(0) {
                return Ok(IntPoly::one());
            }
            a = b;
            // divide r by g·h^delta
            let mut div = g.clone();
            for _ in 0..delta {
                div *= &h;
            }
            b = IntPoly::new(r.coeffs.iter().map(|c| c / &div).collect());
            g = a.leading();
            // h <- h^(1-delta) g^delta
            if delta == 0 {
                // h unchanged
            } else {
                let mut gn = BigInt::one();
                for _ in 0..delta {
                    gn *= &g;
                }
                let mut hd = BigInt::one();
                for _ in 0..delta.saturating_sub(1) {
                    hd *= &h;
                }
                h = gn / hd;
            }
        }
    }

    /// Yun square-free decomposition of a nonzero polynomial: returns
    /// [(f1, 1), (f2, 2), …] with self = content · ∏ fi^i, each fi primitive
    /// and square-free, trivial factors (fi = 1) omitted.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(IntPoly, usize)>> {
        let (_, f) = self.content_primitive()?;
        if f.degree() == Some(0) || f.degree().is_none() {
            return Ok(vec![]);
        }
        let df = f.derivative();
        let a0 = f.gcd(&df)?;
        let mut b = f.exact_div(&a0)?;
        let mut c = df.exact_div(&a0)?;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1usize;
        loop {
            if b.degree() == Some(0) {
                break;
            }
            let a = b.gcd(&d)?;
            if a.degree().map_or(0, |x| x) > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a)?;
            c = d.exact_div(&a)?;
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{}", a)?,
                1 => {
                    if a.is_one() {
                        write!(f, "z")?
                    } else {
                        write!(f, "{}z", a)?
                    }
                }
                _ => {
                    if a.is_one() {
                        write!(f, "z^{}", k)?
                    } else {
                        write!(f, "{}z^{}", a, k)?
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}
