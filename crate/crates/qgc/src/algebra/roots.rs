//! Real-root isolation by Sturm sequences (exact) and simultaneous complex
//! root finding by Aberth-Ehrlich iteration (floating point).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::intpoly::IntPoly;
use crate::error::{QgcError, Result};

/// One isolated real root.
#[derive(Clone, Debug)]
pub struct RealRoot {
    /// Isolating interval (lo, hi], width at most the requested tolerance.
    pub lo: BigRational,
    pub hi: BigRational,
    /// Interval midpoint as a convenient point value.
    pub mid: BigRational,
    pub multiplicity: usize,
}

impl RealRoot {
    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64().unwrap_or(f64::NAN)
    }
}

/// Sturm chain of a square-free polynomial, with sign-safe pseudo-remainders.
fn sturm_chain(f: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.is_zero() {
            chain.pop();
            break;
        }
        if a.degree() < b.degree() {
            break;
        }
        let delta = a.degree().unwrap() - b.degree().unwrap();
        let lc = b.leading();
        let mult = lc.pow(delta as u32 + 1);
        let r = a.pseudo_rem(b);
        if r.is_zero() {
            break;
        }
        // next = -(a mod b) up to a positive factor; the pseudo-remainder
        // multiplier lc^(delta+1) flips the sign when negative
        let raw = if mult.is_positive() { r.neg() } else { r };
        let c = raw.content();
        let next = IntPoly::new(raw.coeffs().iter().map(|x| x / &c).collect());
        chain.push(next);
        if chain.last().unwrap().degree().is_none_or(|d| d == 0) {
            break;
        }
    }
    chain
}

/// Number of sign variations of the chain at x.
fn variations(chain: &[IntPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut prev = 0i32;
    for p in chain {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

/// Cauchy-style bound: all real roots lie in [-B, B].
pub fn root_bound(p: &IntPoly) -> BigRational {
    let lc = p.leading().abs();
    let mut m = BigInt::zero();
    for c in p.coeffs() {
        let a = c.abs();
        if a > m {
            m = a;
        }
    }
    BigRational::from_integer(1.into()) + BigRational::new(m, lc)
}

/// Roots of a square-free polynomial in (lo, hi], isolated by Sturm counts
/// and refined by bisection to width <= tol.
fn squarefree_roots_in(
    f: &IntPoly,
    lo: &BigRational,
    hi: &BigRational,
    tol: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let chain = sturm_chain(f);
    let count = |a: &BigRational, b: &BigRational| -> usize {
        variations(&chain, a).saturating_sub(variations(&chain, b))
    };
    let total = count(lo, hi);
    let mut stack = vec![(lo.clone(), hi.clone(), total)];
    let mut isolated = Vec::new();
    while let Some((a, b, k)) = stack.pop() {
        if k == 0 {
            continue;
        }
        if k == 1 {
            isolated.push((a, b));
            continue;
        }
        let mid = (&a + &b) / BigRational::from_integer(2.into());
        let kl = count(&a, &mid);
        stack.push((a, mid.clone(), kl));
        stack.push((mid, b, k - kl));
    }
    let two = BigRational::from_integer(2.into());
    let mut out = Vec::new();
    for (mut a, mut b) in isolated {
        while &b - &a > *tol {
            let mid = (&a + &b) / &two;
            let sm = f.sign_at(&mid);
            if sm == 0 {
                // exact hit: shrink to a tiny interval around mid
                let eps = tol / &two;
                a = &mid - &eps;
                b = &mid + &eps;
                break;
            }
            if count(&a, &mid) == 1 {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push((a, b));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// All real roots of p in [lo, hi], with multiplicities from the square-free
/// decomposition, refined to isolating intervals of width <= tol.
pub fn real_roots_in(
    p: &IntPoly,
    lo: &BigRational,
    hi: &BigRational,
    tol: &BigRational,
) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(QgcError::InvalidInput(
            "root isolation of the zero polynomial".into(),
        ));
    }
    let mut roots: Vec<RealRoot> = Vec::new();
    let two = BigRational::from_integer(2.into());
    // Sturm counts roots in (lo, hi]; pick up an exact root at lo separately.
    for (f, mult) in p.squarefree_decomposition()? {
        if f.sign_at(lo) == 0 {
            let eps = tol / &two;
            roots.push(RealRoot {
                lo: lo - &eps,
                hi: lo + &eps,
                mid: lo.clone(),
                multiplicity: mult,
            });
        }
        for (a, b) in squarefree_roots_in(&f, lo, hi, tol) {
            let mid = (&a + &b) / &two;
            roots.push(RealRoot {
                lo: a,
                hi: b,
                mid,
                multiplicity: mult,
            });
        }
    }
    roots.sort_by(|x, y| x.mid.cmp(&y.mid));
    Ok(roots)
}

/// All complex roots of a polynomial with f64 coefficients (ascending), via
/// Aberth-Ehrlich with a deterministic perturbed-circle start. Returns an
/// error if the residuals fail to reach `tol` within `max_sweeps`.
pub fn aberth_roots(coeffs: &[f64], tol: f64, max_sweeps: usize) -> Result<Vec<Complex64>> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().is_some_and(|x| *x == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(vec![]);
    }
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            dp = dp * z + p;
            p = p * z + monic[k];
        }
        (p, dp)
    };
    let radius = monic[..n]
        .iter()
        .map(|x| x.abs())
        .fold(1.0f64, f64::max)
        .max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b97f4a7c15);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64
                + rng.gen_range(-0.05..0.05);
            let r = radius * (1.0 + rng.gen_range(-0.05..0.05));
            Complex64::from_polar(r, theta)
        })
        .collect();
    let scale = monic.iter().map(|x| x.abs()).fold(0.0f64, f64::max);
    for _ in 0..max_sweeps {
        let mut max_res = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            max_res = max_res.max(p.norm());
            if p.norm() == 0.0 {
                continue;
            }
            let newton = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * s;
            z[i] -= newton / denom;
        }
        if max_res <= tol * scale.max(1.0) {
            return Ok(z);
        }
    }
    // final residual check
    let worst = z.iter().map(|&zi| eval(zi).0.norm()).fold(0.0, f64::max);
    if worst <= tol * scale.max(1.0) * 10.0 {
        Ok(z)
    } else {
        Err(QgcError::Numeric(format!(
            "root iteration stalled, worst residual {worst:.3e}"
        )))
    }
}
