//! Characteristic polynomials and canonical characteristic functions for the
//! Neumann and Dirichlet problems, an independent edge-system determinant
//! oracle, and eigenvalue family extraction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{real_roots_in, root_bound, IntPoly, MultiPoly, TrigForm};
use crate::error::{QgcError, Result};
use crate::graph::{CombGraph, VertexSet};

/// Fraction-free Bareiss determinant over Z[z].
fn det_intpoly(mut m: Vec<Vec<IntPoly>>) -> Result<IntPoly> {
    let n = m.len();
    if n == 0 {
        return Err(QgcError::InvalidInput("determinant of empty matrix".into()));
    }
    let mut sign = 1i32;
    let mut prev = IntPoly::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(IntPoly::zero()),
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = pivot.mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev)?;
            }
            m[i][k] = IntPoly::zero();
        }
        prev = pivot;
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign < 0 { d.neg() } else { d })
}

/// det(z D - A) for the interior subgraph, with D the degrees measured in
/// the original graph. Exact; degree V - #vstar, leading coefficient the
/// product of the surviving degrees.
pub fn disc_char_poly(g: &CombGraph, vstar: &VertexSet) -> Result<IntPoly> {
    if !g.is_connected() {
        return Err(QgcError::InvalidInput(
            "characteristic pencil requires a connected graph".into(),
        ));
    }
    let (sub, degs) = g.interior_subgraph(vstar)?;
    let k = sub.n();
    let mut m = vec![vec![IntPoly::zero(); k]; k];
    for i in 0..k {
        m[i][i] = IntPoly::monomial(BigInt::from(degs[i]), 1);
    }
    for (a, b) in sub.edges() {
        m[a][b] = IntPoly::from_i64(&[-1]);
        m[b][a] = IntPoly::from_i64(&[-1]);
    }
    det_intpoly(m)
}

/// Canonical Neumann characteristic function s^(E-V) P(c) of the standard
/// problem on the whole graph.
pub fn phi_neumann(g: &CombGraph) -> Result<TrigForm> {
    let p = disc_char_poly(g, &VertexSet::new())?;
    let m = g.edge_count() as i64 - g.n() as i64;
    TrigForm::canonicalize(0, m, p)
}

/// Canonical Dirichlet characteristic function s^(E-V+r) P(c) with Dirichlet
/// conditions on the nonempty proper vertex set vstar.
pub fn phi_dirichlet(g: &CombGraph, vstar: &VertexSet) -> Result<TrigForm> {
    if vstar.is_empty() {
        return Err(QgcError::InvalidInput(
            "Dirichlet problem needs a nonempty vertex set".into(),
        ));
    }
    let p = disc_char_poly(g, vstar)?;
    let m = g.edge_count() as i64 - g.n() as i64 + vstar.len() as i64;
    TrigForm::canonicalize(0, m, p)
}

/// Independent derivation of the characteristic function from the 2E x 2E
/// edge system: unknowns A_e, B_e with y_e(0) = B_e, y_e(l) = A_e s + B_e c,
/// y'_e(0) = A_e, y'_e(l) = A_e c - B_e lambda s. Rows: per standard vertex,
/// deg-1 continuity conditions (lowest incident edge against the others)
/// plus one Kirchhoff row; per Dirichlet vertex, deg vanishing conditions.
pub fn char_matrix_oracle(g: &CombGraph, vstar: &VertexSet) -> Result<TrigForm> {
    let ne = g.edge_count();
    if ne == 0 || ne > 12 {
        return Err(QgcError::InvalidInput(
            "edge-system oracle supports 1..=12 edges".into(),
        ));
    }
    for &v in vstar {
        if v >= g.n() {
            return Err(QgcError::VertexOutOfRange {
                vertex: v,
                n: g.n(),
            });
        }
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let dim = 2 * ne;
    let mut m: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::zero(); dim]; dim];
    let mut row = 0usize;
    // value of edge e at its endpoint v, as (A-coefficient, B-coefficient)
    let value_at = |e: usize, v: usize| -> (MultiPoly, MultiPoly) {
        let (lo, _hi) = edges[e];
        if v == lo {
            (MultiPoly::zero(), MultiPoly::constant(1))
        } else {
            (MultiPoly::term(1, 0, 1, 0), MultiPoly::term(1, 1, 0, 0))
        }
    };
    for v in 0..g.n() {
        let incident: Vec<usize> = (0..ne)
            .filter(|&e| edges[e].0 == v || edges[e].1 == v)
            .collect();
        if incident.is_empty() {
            return Err(QgcError::InvalidInput(format!(
                "isolated vertex {v} in edge system"
            )));
        }
        if vstar.contains(&v) {
            for &e in &incident {
                let (ca, cb) = value_at(e, v);
                m[row][2 * e] = ca;
                m[row][2 * e + 1] = cb;
                row += 1;
            }
        } else {
            let e0 = incident[0];
            for &e in &incident[1..] {
                let (ca0, cb0) = value_at(e0, v);
                let (ca, cb) = value_at(e, v);
                m[row][2 * e0] = ca0;
                m[row][2 * e0 + 1] = cb0;
                m[row][2 * e] = m[row][2 * e].sub(&ca);
                m[row][2 * e + 1] = m[row][2 * e + 1].sub(&cb);
                row += 1;
            }
            // Kirchhoff: sum of terminal y'(l) minus sum of initial y'(0)
            for &e in &incident {
                let (lo, _) = edges[e];
                if v == lo {
                    m[row][2 * e] = m[row][2 * e].sub(&MultiPoly::constant(1));
                } else {
                    m[row][2 * e] = m[row][2 * e].add(&MultiPoly::term(1, 1, 0, 0));
                    m[row][2 * e + 1] = m[row][2 * e + 1].sub(&MultiPoly::term(1, 0, 1, 1));
                }
            }
            row += 1;
        }
    }
    debug_assert_eq!(row, dim);
    let det = MultiPoly::det(m)?;
    let (a, mm, q) = det.to_trig_parts()?;
    TrigForm::canonicalize(a, mm, q)
}

/// Zero-set of a canonical trig form, split into structural families.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumFamilies {
    /// lambda = 0 belongs to the zero set
    pub has_zero: bool,
    /// the family lambda = (k pi / l)^2, k >= 1
    pub sin_family: bool,
    /// roots rho of Q in [-1, 1] with multiplicity; each yields the family
    /// lambda = ((+-arccos rho + 2 pi k) / l)^2
    pub cos_roots: Vec<(f64, usize)>,
    /// real roots of Q outside [-1, 1] (absent for zero potential)
    pub anomalies: Vec<f64>,
}

pub fn spectrum_families(f: &TrigForm) -> Result<SpectrumFamilies> {
    let one = BigRational::from_integer(1.into());
    let has_zero = f.a() > 0 || f.q().eval_rat(&one).is_zero();
    let sin_family = f.m() > 0;
    let bound = root_bound(f.q());
    let tol = BigRational::new(1.into(), BigInt::from(10u64).pow(12));
    let roots = real_roots_in(f.q(), &(-bound.clone()), &bound, &tol)?;
    let mut cos_roots = Vec::new();
    let mut anomalies = Vec::new();
    for r in roots {
        let x = r.mid_f64();
        if x.abs() <= 1.0 + 1e-12 {
            cos_roots.push((x.clamp(-1.0, 1.0), r.multiplicity));
        } else {
            anomalies.push(x);
        }
    }
    Ok(SpectrumFamilies {
        has_zero,
        sin_family,
        cos_roots,
        anomalies,
    })
}

impl SpectrumFamilies {
    /// Distinct eigenvalues below lambda_max for edge length ell, ascending.
    pub fn eigenvalues_below(&self, ell: f64, lambda_max: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        if self.has_zero {
            out.push(0.0);
        }
        let pi = std::f64::consts::PI;
        if self.sin_family {
            let mut k = 1.0f64;
            loop {
                let lam = (k * pi / ell).powi(2);
                if lam > lambda_max {
                    break;
                }
                out.push(lam);
                k += 1.0;
            }
        }
        let tmax = lambda_max.sqrt() * ell;
        for &(rho, _) in &self.cos_roots {
            let theta = rho.acos(); // in [0, pi]
            for sgn in [1.0f64, -1.0] {
                let mut k = 0.0f64;
                loop {
                    let t = sgn * theta + 2.0 * pi * k;
                    if t > tmax {
                        break;
                    }
                    if t > 0.0 {
                        out.push((t / ell).powi(2));
                    }
                    k += 1.0;
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * (1.0 + b.abs()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixture, fuzzy_ball, CombGraph};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn fig2_poly() -> IntPoly {
        p(&[-1, 1]).mul(&p(&[1, 4]).pow(3)).mul(&p(&[-1, 1, 4]))
    }

    #[test]
    fn k2_pencil() {
        let k2 = CombGraph::new(2, &[(0, 1)]).unwrap();
        let q = disc_char_poly(&k2, &VertexSet::new()).unwrap();
        assert_eq!(q, p(&[-1, 0, 1]));
    }

    #[test]
    fn fig2_pencils_share_primitive() {
        let target = fig2_poly();
        let left = disc_char_poly(&fixture("fig2-left").unwrap(), &VertexSet::new()).unwrap();
        let right = disc_char_poly(&fixture("fig2-right").unwrap(), &VertexSet::new()).unwrap();
        let (cl, pl) = left.signed_content_primitive().unwrap();
        let (cr, pr) = right.signed_content_primitive().unwrap();
        assert_eq!(pl, target);
        assert_eq!(pr, target);
        // degree products 1024 vs 768: raw determinants are 4x and 3x
        assert_eq!(cl, BigInt::from(4));
        assert_eq!(cr, BigInt::from(3));
    }

    #[test]
    fn fig5_pencils() {
        let target = p(&[0, 0, 0, 4])
            .mul(&p(&[-1, 0, 1]))
            .mul(&p(&[-3, 0, 4]))
            .mul(&p(&[-1, 0, 3]));
        for name in ["fig5-left", "fig5-right"] {
            let q = disc_char_poly(&fixture(name).unwrap(), &VertexSet::new()).unwrap();
            let (_, prim) = q.signed_content_primitive().unwrap();
            assert_eq!(prim, target.signed_content_primitive().unwrap().1, "{name}");
        }
    }

    #[test]
    fn pencil_degree_and_leading() {
        let g = fuzzy_ball(1, 3).unwrap();
        let q = disc_char_poly(&g, &vs(&[4])).unwrap();
        assert_eq!(q.degree(), Some(5));
        assert_eq!(q.leading(), BigInt::from(3 * 4 * 4 * 4 * 4));
    }

    #[test]
    fn singular_at_one() {
        for name in ["fig2-left", "fig2-right", "fig5-left", "fig5-right"] {
            let q = disc_char_poly(&fixture(name).unwrap(), &VertexSet::new()).unwrap();
            assert!(q.eval_rat(&BigRational::from_integer(1.into())).is_zero());
        }
    }

    #[test]
    fn phi_neumann_fig2() {
        let f = phi_neumann(&fixture("fig2-left").unwrap()).unwrap();
        assert_eq!((f.a(), f.m()), (0, 4));
        assert_eq!(f.q(), &fig2_poly());
        let g = phi_neumann(&fixture("fig2-right").unwrap()).unwrap();
        assert!(f.trig_equal(&g));
    }

    #[test]
    fn phi_neumann_fig5() {
        let f = phi_neumann(&fixture("fig5-left").unwrap()).unwrap();
        assert_eq!((f.a(), f.m()), (1, 1));
        let want = p(&[0, 0, 0, 1]).mul(&p(&[-3, 0, 4])).mul(&p(&[-1, 0, 3]));
        assert_eq!(f.q(), &want);
    }

    #[test]
    fn phi_neumann_k2() {
        let k2 = CombGraph::new(2, &[(0, 1)]).unwrap();
        let f = phi_neumann(&k2).unwrap();
        assert_eq!((f.a(), f.m()), (1, 1));
        assert_eq!(f.q(), &IntPoly::one());
    }

    #[test]
    fn phi_dirichlet_fig3_golden() {
        let g = fixture("fig2-left").unwrap();
        // lead at a degree-2 vertex (4), then at a bulk vertex (0)
        let f = phi_dirichlet(&g, &vs(&[4])).unwrap();
        assert_eq!((f.a(), f.m()), (0, 5));
        assert_eq!(f.q(), &p(&[1, 1, -48, -160, 0, 256]));
        let f = phi_dirichlet(&g, &vs(&[0])).unwrap();
        assert_eq!((f.a(), f.m()), (0, 5));
        assert_eq!(f.q(), &p(&[1, 5, -12, -72, 0, 128]));
    }

    #[test]
    fn phi_dirichlet_fig4_golden() {
        let g = fixture("fig2-right").unwrap();
        let cases: [(usize, &[i64]); 4] = [
            (4, &[0, -7, -64, -160, 0, 256]),
            (5, &[2, 9, -32, -160, 0, 256]),
            (1, &[2, 11, -14, -116, 0, 192]),
            (0, &[0, -1, -10, -28, 0, 64]),
        ];
        for (v, coeffs) in cases {
            let f = phi_dirichlet(&g, &vs(&[v])).unwrap();
            assert_eq!((f.a(), f.m()), (0, 5), "v={v}");
            assert_eq!(f.q(), &p(coeffs), "v={v}");
        }
    }

    #[test]
    fn phi_dirichlet_fig6_fig7_golden() {
        let left = fixture("fig5-left").unwrap();
        let left_cases: [(usize, &[i64]); 7] = [
            (0, &[0, 0, -3, 0, 32, 0, -76, 0, 48]),
            (1, &[0, 0, 0, 0, 9, 0, -32, 0, 24]),
            (2, &[0, 0, -3, 0, 20, 0, -40, 0, 24]),
            (3, &[0, 0, 0, 0, 9, 0, -24, 0, 16]),
            (4, &[0, 0, 0, 0, 4, 0, -15, 0, 12]),
            (5, &[0, 0, -8, 0, 49, 0, -88, 0, 48]),
            (8, &[0, 0, -3, 0, 40, 0, -84, 0, 48]),
        ];
        for (v, coeffs) in left_cases {
            let f = phi_dirichlet(&left, &vs(&[v])).unwrap();
            assert_eq!((f.a(), f.m()), (0, 0), "left v={v}");
            assert_eq!(f.q(), &p(coeffs), "left v={v}");
        }
        let right = fixture("fig5-right").unwrap();
        let right_cases: [(usize, &[i64]); 7] = [
            (0, &[0, 0, 0, 0, 29, 0, -76, 0, 48]),
            (1, &[0, 0, 0, 0, 12, 0, -35, 0, 24]),
            (2, &[0, 0, 0, 0, 5, 0, -16, 0, 12]),
            (3, &[0, 0, -4, 0, 24, 0, -43, 0, 24]),
            (4, &[0, 0, 0, 0, 5, 0, -20, 0, 16]),
            (5, &[0, 0, -7, 0, 48, 0, -88, 0, 48]),
            (6, &[0, 0, -7, 0, 44, 0, -84, 0, 48]),
        ];
        for (v, coeffs) in right_cases {
            let f = phi_dirichlet(&right, &vs(&[v])).unwrap();
            assert_eq!((f.a(), f.m()), (0, 0), "right v={v}");
            assert_eq!(f.q(), &p(coeffs), "right v={v}");
        }
    }

    #[test]
    fn oracle_k2_neumann() {
        let k2 = CombGraph::new(2, &[(0, 1)]).unwrap();
        let o = char_matrix_oracle(&k2, &VertexSet::new()).unwrap();
        assert!(o.trig_equal(&phi_neumann(&k2).unwrap()));
    }

    #[test]
    fn oracle_triangle_neumann() {
        let tri = CombGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let o = char_matrix_oracle(&tri, &VertexSet::new()).unwrap();
        let f = phi_neumann(&tri).unwrap();
        assert!(o.trig_equal(&f));
        // 2(z-1)(2z+1)^2 up to content
        let want = p(&[-1, 1]).mul(&p(&[1, 2]).pow(2));
        assert_eq!(f.q(), &want);
        assert_eq!((f.a(), f.m()), (0, 0));
    }

    #[test]
    fn oracle_path_dirichlet_middle() {
        let p3 = CombGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let o = char_matrix_oracle(&p3, &vs(&[1])).unwrap();
        assert!(o.trig_equal(&phi_dirichlet(&p3, &vs(&[1])).unwrap()));
        // two decoupled Dirichlet-Neumann intervals: zeros of cos^2
        assert_eq!(o.q(), &p(&[0, 0, 1]));
        assert_eq!((o.a(), o.m()), (0, 0));
    }

    #[test]
    fn spectrum_k2() {
        let k2 = CombGraph::new(2, &[(0, 1)]).unwrap();
        let sf = spectrum_families(&phi_neumann(&k2).unwrap()).unwrap();
        assert!(sf.has_zero && sf.sin_family);
        assert!(sf.cos_roots.is_empty() && sf.anomalies.is_empty());
        let pi = std::f64::consts::PI;
        let evs = sf.eigenvalues_below(1.0, 100.0);
        let want = [0.0, pi * pi, 4.0 * pi * pi, 9.0 * pi * pi];
        assert_eq!(evs.len(), want.len());
        for (a, b) in evs.iter().zip(want) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn spectrum_p3() {
        // interval of length 2 with Neumann ends: (k pi / 2)^2
        let p3 = CombGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let sf = spectrum_families(&phi_neumann(&p3).unwrap()).unwrap();
        let evs = sf.eigenvalues_below(1.0, 60.0);
        let pi = std::f64::consts::PI;
        let want: Vec<f64> = (0..5).map(|k| (k as f64 * pi / 2.0).powi(2)).collect();
        assert_eq!(evs.len(), want.len());
        for (a, b) in evs.iter().zip(want) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn spectrum_triangle() {
        // cycle of length 3: eigenvalues (2 pi k / 3)^2, doubled interior
        let tri = CombGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let sf = spectrum_families(&phi_neumann(&tri).unwrap()).unwrap();
        assert!(sf.has_zero);
        assert!(!sf.sin_family);
        let roots: Vec<f64> = sf.cos_roots.iter().map(|r| r.0).collect();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 0.5).abs() < 1e-10 && (roots[1] - 1.0).abs() < 1e-10);
        let evs = sf.eigenvalues_below(1.0, 50.0);
        let pi = std::f64::consts::PI;
        let want: Vec<f64> = (0..4)
            .map(|k| (2.0 * pi * k as f64 / 3.0).powi(2))
            .collect();
        assert_eq!(evs.len(), want.len());
        for (a, b) in evs.iter().zip(want) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }
}
