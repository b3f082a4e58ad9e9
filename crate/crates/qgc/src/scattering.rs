//! Jost function, S-function, resonances, embedded eigenvalues, and bound
//! states for a compact graph with one attached lead.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{aberth_roots, real_roots_in, root_bound, IntPoly, TrigForm};
use crate::error::{QgcError, Result};

/// The Jost function as a Laurent polynomial in u = e^(i w l):
/// E(w) = i^unit_power_of_i * w^(-e) * F(u), F with real coefficients.
#[derive(Clone, Debug)]
pub struct JostLaurent {
    /// lowest u-exponent of F
    pub lo: i64,
    /// coefficients of F ascending from u^lo
    pub coeffs: Vec<BigRational>,
    /// w-exponent: w^e * E(w) = i^unit * F(u)
    pub e: i64,
    pub unit_power_of_i: u8,
    pub ell: f64,
}

impl JostLaurent {
    pub fn eval(&self, omega: Complex64) -> Complex64 {
        let u = (Complex64::i() * omega * self.ell).exp();
        let mut f = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            f = f * u + c.to_f64().unwrap_or(f64::NAN);
        }
        f *= u.powi(self.lo as i32);
        let unit = Complex64::i().powu(self.unit_power_of_i as u32);
        unit * f * omega.powi(-self.e as i32)
    }
}

/// Laurent polynomial arithmetic helper over exact rationals.
#[derive(Clone, Debug, PartialEq)]
struct Laurent {
    lo: i64,
    c: Vec<BigRational>,
}

impl Laurent {
    fn zero() -> Self {
        Laurent { lo: 0, c: vec![] }
    }

    fn term(v: BigRational, k: i64) -> Self {
        Laurent { lo: k, c: vec![v] }
    }

    fn trim(mut self) -> Self {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        while self.c.first().is_some_and(|x| x.is_zero()) {
            self.c.remove(0);
            self.lo += 1;
        }
        if self.c.is_empty() {
            self.lo = 0;
        }
        self
    }

    fn add(&self, other: &Self) -> Self {
        if self.c.is_empty() {
            return other.clone();
        }
        if other.c.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = (self.lo + self.c.len() as i64).max(other.lo + other.c.len() as i64);
        let mut c = vec![BigRational::zero(); (hi - lo) as usize];
        for (i, v) in self.c.iter().enumerate() {
            c[(self.lo - lo) as usize + i] += v;
        }
        for (i, v) in other.c.iter().enumerate() {
            c[(other.lo - lo) as usize + i] += v;
        }
        Laurent { lo, c }.trim()
    }

    fn mul(&self, other: &Self) -> Self {
        if self.c.is_empty() || other.c.is_empty() {
            return Laurent::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Laurent {
            lo: self.lo + other.lo,
            c,
        }
        .trim()
    }

    fn scale(&self, v: &BigRational) -> Self {
        Laurent {
            lo: self.lo,
            c: self.c.iter().map(|x| x * v).collect(),
        }
        .trim()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Laurent::term(BigRational::one(), 0);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// gamma = (u + 1/u)/2, the image of cos(w l).
fn gamma() -> Laurent {
    let half = BigRational::new(1.into(), 2.into());
    Laurent::term(half.clone(), 1).add(&Laurent::term(half, -1))
}

/// u - 1/u = 2 i sin(w l)
fn u_minus_uinv() -> Laurent {
    Laurent::term(BigRational::one(), 1).add(&Laurent::term(-BigRational::one(), -1))
}

fn eval_q(q: &IntPoly, x: &Laurent) -> Laurent {
    let mut acc = Laurent::zero();
    for c in q.coeffs().iter().rev() {
        acc = acc
            .mul(x)
            .add(&Laurent::term(BigRational::from_integer(c.clone()), 0));
    }
    acc
}

/// Assembles E(w) = phi_N(w) + i w phi_D(w) as a JostLaurent, using the raw
/// scalars carried by the two canonical forms. Requires the single-lead
/// exponent matching |m_N - m_D| = 1 and 2 a_N - m_N = 1 + 2 a_D - m_D.
pub fn jost_form(phi_n: &TrigForm, phi_d: &TrigForm, ell: f64) -> Result<JostLaurent> {
    let (an, mn) = (phi_n.a() as i64, phi_n.m() as i64);
    let (ad, md) = (phi_d.a() as i64, phi_d.m() as i64);
    if (mn - md).abs() != 1 || 2 * an - mn != 1 + 2 * ad - md {
        return Err(QgcError::Structural(format!(
            "jost_form exponent mismatch: (a_N, m_N) = ({an}, {mn}), (a_D, m_D) = ({ad}, {md})"
        )));
    }
    let cn = phi_n.coeff().clone();
    let cd = phi_d.coeff().clone();
    let half = BigRational::new(1.into(), 2.into());
    let g = gamma();
    let d = u_minus_uinv();
    let qn = eval_q(phi_n.q(), &g);
    let qd = eval_q(phi_d.q(), &g);
    // sin(wl) = (u - 1/u)/(2i); pull the powers of 2i out so F stays real
    let (f, base_m, unit) = if md == mn + 1 {
        // F = (u-1/u)^m_N [c_N Q_N + (c_D/2)(u-1/u) Q_D], unit i^(-m_N)
        let inner = qn.scale(&cn).add(&d.mul(&qd).scale(&(cd * &half)));
        (d.pow(mn as u32).mul(&inner), mn, (-mn).rem_euclid(4))
    } else {
        // F = (u-1/u)^m_D [c_D Q_D - (c_N/2)(u-1/u) Q_N], unit i^(1-m_D)
        let inner = qd.scale(&cd).add(&d.mul(&qn).scale(&(-cn * &half)));
        (d.pow(md as u32).mul(&inner), md, (1 - md).rem_euclid(4))
    };
    // fold 2^(-base_m) from the sine normalization into the coefficients
    let two_pow = BigRational::new(1.into(), BigInt::from(2u32).pow(base_m as u32));
    let f = f.scale(&two_pow);
    if f.c.is_empty() {
        return Err(QgcError::Structural("zero Jost function".into()));
    }
    Ok(JostLaurent {
        lo: f.lo,
        coeffs: f.c,
        e: mn - 2 * an,
        unit_power_of_i: unit as u8,
        ell,
    })
}

/// One resonance in the principal strip Re(w l) in (-pi, pi].
#[derive(Clone, Debug)]
pub struct Resonance {
    pub omega: Complex64,
    pub multiplicity: usize,
    pub u_root: Complex64,
}

#[derive(Clone, Debug, Default)]
pub struct ResonanceSet {
    pub members: Vec<Resonance>,
    /// the set repeats with period 2 pi / l along the real axis
    pub period: f64,
}

/// Resonances: zeros of w -> E(-w) in the principal strip. With
/// F(u) = sum a_k u^k and real a_k, E(-w) picks up u -> 1/u, so each root
/// u0 of the cleared polynomial yields a resonance at w = -i log(1/u0) / l.
/// Roots with |1/u0| >= 1, i.e. Im w <= 0, are the lower-half-plane
/// confinement being verified downstream.
pub fn resonances(j: &JostLaurent, tol: f64) -> Result<ResonanceSet> {
    // clear denominators and the u-power: integer polynomial in u
    let mut den = BigInt::one();
    for c in &j.coeffs {
        den = num_integer::Integer::lcm(&den, c.denom());
    }
    let ints: Vec<BigInt> = j
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let cleared = IntPoly::new(ints);
    let period = 2.0 * std::f64::consts::PI / j.ell;
    if cleared.degree().is_none_or(|d| d == 0) {
        return Ok(ResonanceSet {
            members: vec![],
            period,
        });
    }
    let mut members = Vec::new();
    for (factor, mult) in cleared.squarefree_decomposition()? {
        let deg = match factor.degree() {
            Some(d) if d > 0 => d,
            _ => continue,
        };
        // drop u = 0 roots (they carry no resonance)
        let shift = factor
            .coeffs()
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0);
        if shift == deg {
            continue;
        }
        let fcoeffs: Vec<f64> = factor.coeffs()[shift..]
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        let maxabs = fcoeffs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let scaled: Vec<f64> = fcoeffs.iter().map(|x| x / maxabs).collect();
        if scaled.len() <= 1 {
            continue;
        }
        for u0 in aberth_roots(&scaled, tol, 200)? {
            let u_res = u0.inv();
            // w = -i log(u) / l, principal branch: arg in (-pi, pi]. For
            // roots on the negative real axis a signed zero in Im u would
            // flip arg between -pi and pi; pin the boundary to +pi.
            let mut arg = u_res.arg();
            if (arg + std::f64::consts::PI).abs() < 1e-12 {
                arg = std::f64::consts::PI;
            }
            let omega = Complex64::new(arg, -u_res.norm().ln()) / j.ell;
            members.push(Resonance {
                omega,
                multiplicity: mult,
                u_root: u_res,
            });
        }
    }
    members.sort_by(|x, y| {
        (x.omega.re, x.omega.im)
            .partial_cmp(&(y.omega.re, y.omega.im))
            .unwrap()
    });
    Ok(ResonanceSet { members, period })
}

/// S(lambda) = E(sqrt(lambda)) / E(-sqrt(lambda)), evaluated directly from
/// the trig forms (independent of the Laurent assembly).
pub fn s_eval(phi_n: &TrigForm, phi_d: &TrigForm, ell: f64, lambda: f64) -> Result<Complex64> {
    if lambda <= 0.0 {
        return Err(QgcError::InvalidInput("s_eval needs lambda > 0".into()));
    }
    let omega = Complex64::new(lambda.sqrt(), 0.0);
    let e = |w: Complex64| -> Complex64 {
        phi_n.eval_omega(w, ell) + Complex64::i() * w * phi_d.eval_omega(w, ell)
    };
    let denom = e(-omega);
    if denom.norm() < 1e-300 {
        return Err(QgcError::Numeric(format!(
            "S-function pole near lambda = {lambda}"
        )));
    }
    Ok(e(omega) / denom)
}

/// Embedded (positive) eigenvalues: simultaneous zeros of phi_N and phi_D.
#[derive(Clone, Debug)]
pub struct EmbeddedEigenvalues {
    /// the whole family (k pi / l)^2, k >= 1
    pub sin_family: bool,
    /// shared cos-roots in (-1, 1) with multiplicity (min of the two forms)
    pub cos_roots: Vec<(f64, usize)>,
    /// concrete values below the requested bound, ascending
    pub values: Vec<f64>,
}

pub fn embedded_eigenvalues(
    phi_n: &TrigForm,
    phi_d: &TrigForm,
    ell: f64,
    lambda_max: f64,
) -> Result<EmbeddedEigenvalues> {
    let sin_family = phi_n.m() > 0 && phi_d.m() > 0;
    let g = phi_n.q().gcd(phi_d.q())?;
    let mut cos_roots = Vec::new();
    if g.degree().is_some_and(|d| d > 0) {
        let tol = BigRational::new(1.into(), BigInt::from(10u64).pow(12));
        let lo = -BigRational::one();
        let hi = BigRational::one();
        for r in real_roots_in(&g, &lo, &hi, &tol)? {
            let x = r.mid_f64();
            if x > -1.0 + 1e-12 && x < 1.0 - 1e-12 {
                cos_roots.push((x, r.multiplicity));
            }
        }
    }
    let pi = std::f64::consts::PI;
    let mut values = Vec::new();
    if sin_family {
        let mut k = 1.0;
        while (k * pi / ell).powi(2) <= lambda_max {
            values.push((k * pi / ell).powi(2));
            k += 1.0;
        }
    }
    let tmax = lambda_max.sqrt() * ell;
    for &(rho, _) in &cos_roots {
        let theta = rho.acos();
        for sgn in [1.0f64, -1.0] {
            let mut k = 0.0;
            loop {
                let t = sgn * theta + 2.0 * pi * k;
                if t > tmax {
                    break;
                }
                if t > 1e-12 {
                    values.push((t / ell).powi(2));
                }
                k += 1.0;
            }
        }
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * (1.0 + b.abs()));
    Ok(EmbeddedEigenvalues {
        sin_family,
        cos_roots,
        values,
    })
}

/// Normal eigenvalues below the essential spectrum: gcd roots rho > 1 map to
/// lambda = -(arccosh rho / l)^2. Empty for the zero potential.
pub fn bound_states(phi_n: &TrigForm, phi_d: &TrigForm, ell: f64) -> Result<Vec<f64>> {
    let g = phi_n.q().gcd(phi_d.q())?;
    if g.degree().is_none_or(|d| d == 0) {
        return Ok(vec![]);
    }
    let tol = BigRational::new(1.into(), BigInt::from(10u64).pow(12));
    let lo = BigRational::one();
    let hi = root_bound(&g);
    let mut out = Vec::new();
    for r in real_roots_in(&g, &lo, &hi, &tol)? {
        let rho = r.mid_f64();
        if rho > 1.0 + 1e-12 {
            out.push(-(rho.acosh() / ell).powi(2));
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}
