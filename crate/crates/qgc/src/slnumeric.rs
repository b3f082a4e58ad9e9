//! Numeric fundamental solutions for nonzero edge potentials and the
//! asymptotic comparison against the free (zero-potential) data.

use num_complex::Complex64;
use serde::Serialize;

use crate::charfun::{disc_char_poly, phi_dirichlet, phi_neumann};
use crate::error::{QgcError, Result};
use crate::graph::{CombGraph, VertexSet};

/// Uniformly sampled potential on [0, ell].
#[derive(Clone, Debug)]
pub struct PotentialSample {
    pub ell: f64,
    pub values: Vec<f64>,
    pub symmetric: bool,
    pub edge_independent: bool,
}

impl PotentialSample {
    pub fn new(ell: f64, values: Vec<f64>) -> Result<PotentialSample> {
        if ell <= 0.0 || values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
            return Err(QgcError::InvalidInput(
                "potential needs positive length and at least two finite samples".into(),
            ));
        }
        let n = values.len();
        let symmetric = (0..n).all(|i| (values[i] - values[n - 1 - i]).abs() <= 1e-9);
        Ok(PotentialSample {
            ell,
            values,
            symmetric,
            edge_independent: true,
        })
    }

    pub fn zero(ell: f64) -> PotentialSample {
        PotentialSample::new(ell, vec![0.0, 0.0]).unwrap()
    }

    pub fn constant(ell: f64, v0: f64) -> PotentialSample {
        PotentialSample::new(ell, vec![v0, v0]).unwrap()
    }

    /// Linear interpolation between samples.
    pub fn at(&self, x: f64) -> f64 {
        let n = self.values.len();
        let t = (x / self.ell).clamp(0.0, 1.0) * (n - 1) as f64;
        let i = (t.floor() as usize).min(n - 2);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// Fundamental solutions of -y'' + q y = lambda y at x = ell:
/// s(0) = 0, s'(0) = 1 and c(0) = 1, c'(0) = 0.
#[derive(Clone, Copy, Debug)]
pub struct ScValues {
    pub s: Complex64,
    pub sp: Complex64,
    pub c: Complex64,
    pub cp: Complex64,
}

/// Fixed-step RK4 on the first-order system for both initial conditions.
pub fn integrate_sc(q: &PotentialSample, lambda: Complex64, steps: usize) -> Result<ScValues> {
    if steps < 64 {
        return Err(QgcError::InvalidInput("need at least 64 RK4 steps".into()));
    }
    let h = q.ell / steps as f64;
    let deriv = |x: f64, y: [Complex64; 4]| -> [Complex64; 4] {
        let qq = q.at(x);
        [y[1], (qq - lambda) * y[0], y[3], (qq - lambda) * y[2]]
    };
    let mut y = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    let mut x = 0.0;
    let axpy = |a: [Complex64; 4], k: [Complex64; 4], t: f64| -> [Complex64; 4] {
        [
            a[0] + k[0] * t,
            a[1] + k[1] * t,
            a[2] + k[2] * t,
            a[3] + k[3] * t,
        ]
    };
    for _ in 0..steps {
        let k1 = deriv(x, y);
        let k2 = deriv(x + h / 2.0, axpy(y, k1, h / 2.0));
        let k3 = deriv(x + h / 2.0, axpy(y, k2, h / 2.0));
        let k4 = deriv(x + h, axpy(y, k3, h));
        for i in 0..4 {
            y[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
            if !y[i].is_finite() {
                return Err(QgcError::Numeric("RK4 state overflowed".into()));
            }
        }
        x += h;
    }
    Ok(ScValues {
        s: y[0],
        sp: y[1],
        c: y[2],
        cp: y[3],
    })
}

fn steps_for(lambda: f64, ell: f64) -> usize {
    // keep the global error well below the asymptotic decay being measured
    let w = lambda.abs().sqrt().max(1.0);
    4096usize.max((32.0 * (w * ell).powf(1.25)).ceil() as usize)
}

/// Evaluates the characteristic-function product with numeric s and c for a
/// symmetric, edge-independent potential.
pub fn phi_eval_numeric(
    g: &CombGraph,
    vstar: &VertexSet,
    q: &PotentialSample,
    lambda: f64,
) -> Result<f64> {
    if !q.symmetric || !q.edge_independent {
        return Err(QgcError::InvalidInput(
            "numeric characteristic function needs a symmetric, edge-independent potential".into(),
        ));
    }
    let p = disc_char_poly(g, vstar)?;
    let m = g.edge_count() as i64 - g.n() as i64 + vstar.len() as i64;
    let sc = integrate_sc(q, Complex64::new(lambda, 0.0), steps_for(lambda, q.ell))?;
    let (s, c) = (sc.s.re, sc.c.re);
    let base = p.eval_f64(c);
    if m >= 0 {
        Ok(s.powi(m as i32) * base)
    } else {
        if s.abs() < 1e-14 {
            return Err(QgcError::Numeric(format!(
                "s(lambda, ell) vanishes at lambda = {lambda}; negative sine power undefined"
            )));
        }
        Ok(base / s.powi((-m) as i32))
    }
}

/// One row of the asymptotic decay table.
#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub lambda: f64,
    pub err_s: f64,
    pub err_c: f64,
    pub err_s_function: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    /// least-squares slopes of log error against log lambda
    pub slope_s: f64,
    pub slope_c: f64,
    pub slope_s_function: f64,
}

fn lsq_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Compares the perturbed fundamental solutions and S-function against the
/// free ones along an increasing lambda grid. The S-functions are formed for
/// the given graph with a lead at `lead`, the perturbed one from
/// phi_eval_numeric and the free one from the exact forms.
pub fn asymptotic_check(
    q: &PotentialSample,
    lambdas: &[f64],
    g: &CombGraph,
    lead: usize,
) -> Result<DecayReport> {
    if lambdas.len() < 2 || lambdas.windows(2).any(|w| w[0] >= w[1]) || lambdas[0] < 10.0 {
        return Err(QgcError::InvalidInput(
            "need an increasing lambda grid starting at 10 or above".into(),
        ));
    }
    let vstar = VertexSet::from([lead]);
    let phi_n = phi_neumann(g)?;
    let phi_d = phi_dirichlet(g, &vstar)?;
    let mut rows = Vec::new();
    for &lam in lambdas {
        let w = lam.sqrt();
        let steps = steps_for(lam, q.ell);
        let sc = integrate_sc(q, Complex64::new(lam, 0.0), steps)?;
        let s_hat = (w * q.ell).sin() / w;
        let c_hat = (w * q.ell).cos();
        let err_s = (sc.s.re - s_hat).abs();
        let err_c = (sc.c.re - c_hat).abs();
        // S = E(w)/E(-w) with E = phi_N + i w phi_D
        let pn_q = phi_eval_numeric(g, &VertexSet::new(), q, lam)?;
        let pd_q = phi_eval_numeric(g, &vstar, q, lam)?;
        let e_q = Complex64::new(pn_q, w * pd_q);
        let s_q = e_q / e_q.conj();
        let omega = Complex64::new(w, 0.0);
        let e_free = phi_n.eval_omega(omega, q.ell)
            + Complex64::i() * omega * phi_d.eval_omega(omega, q.ell);
        let s_free = e_free / e_free.conj();
        rows.push(DecayRow {
            lambda: lam,
            err_s,
            err_c,
            err_s_function: (s_q - s_free).norm(),
        });
    }
    let lx: Vec<f64> = rows.iter().map(|r| r.lambda.ln()).collect();
    let ls: Vec<f64> = rows.iter().map(|r| r.err_s.max(1e-300).ln()).collect();
    let lc: Vec<f64> = rows.iter().map(|r| r.err_c.max(1e-300).ln()).collect();
    let lf: Vec<f64> = rows
        .iter()
        .map(|r| r.err_s_function.max(1e-300).ln())
        .collect();
    Ok(DecayReport {
        slope_s: lsq_slope(&lx, &ls),
        slope_c: lsq_slope(&lx, &lc),
        slope_s_function: lsq_slope(&lx, &lf),
        rows,
    })
}
