//! Sparse polynomials in the commuting symbols c, s, lambda over the
//! integers, with a fraction-free determinant and the rewriting rule
//! lambda*s^2 = 1 - c^2.

use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

use super::intpoly::IntPoly;
use crate::error::{QgcError, Result};

/// Exponent triple (i, j, k) for the monomial c^i s^j lambda^k.
pub type Expt = (u32, u32, u32);

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Expt, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::term(c, 0, 0, 0)
    }

    /// coeff * c^i s^j lambda^k
    pub fn term(coeff: i64, i: u32, j: u32, k: u32) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert((i, j, k), BigInt::from(coeff));
        }
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Expt, BigInt> {
        &self.terms
    }

    fn insert(&mut self, e: Expt, v: BigInt) {
        if v.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(v);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += v;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.insert(*e, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.insert(*e, -v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, -v)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = MultiPoly::zero();
        for (a, va) in &self.terms {
            for (b, vb) in &other.terms {
                out.insert((a.0 + b.0, a.1 + b.1, a.2 + b.2), va * vb);
            }
        }
        out
    }

    /// Leading term in the lexicographic order on (i, j, k).
    fn leading(&self) -> Option<(Expt, &BigInt)> {
        self.terms.iter().next_back().map(|(e, v)| (*e, v))
    }

    /// Exact division; errors if the divisor does not divide self in
    /// Z[c, s, lambda]. Used by the fraction-free elimination, where
    /// divisibility is guaranteed.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (dl, dc) = d
            .leading()
            .ok_or_else(|| QgcError::InvalidInput("division by zero polynomial".into()))?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((rl, rc)) = rem.leading() {
            if rl.0 < dl.0 || rl.1 < dl.1 || rl.2 < dl.2 {
                return Err(QgcError::Structural(
                    "multi exact_div: leading monomial not divisible".into(),
                ));
            }
            let (q, r) = num_integer::Integer::div_rem(rc, dc);
            if !r.is_zero() {
                return Err(QgcError::Structural(
                    "multi exact_div: leading coefficient not divisible".into(),
                ));
            }
            let me = (rl.0 - dl.0, rl.1 - dl.1, rl.2 - dl.2);
            let mono = MultiPoly {
                terms: BTreeMap::from([(me, q)]),
            };
            quot = quot.add(&mono);
            rem = rem.sub(&mono.mul(d));
        }
        Ok(quot)
    }

    /// Rewrites s^j lambda^k -> s^(j-2) lambda^(k-1) (1 - c^2) until every
    /// monomial has j < 2 or k = 0. Confluent: the rule only trades a fixed
    /// invertible combination, so the normal form is order-independent.
    pub fn reduce_relation(&self) -> Self {
        let mut out = MultiPoly::zero();
        for (&(i, j, k), v) in &self.terms {
            // s^(2t) lambda^t -> (1-c^2)^t with t = min(j div 2, k)
            let t = (j / 2).min(k);
            if t == 0 {
                out.insert((i, j, k), v.clone());
                continue;
            }
            // expand (1 - c^2)^t binomially
            let mut binom = BigInt::from(1);
            for p in 0..=t {
                // coefficient of c^(2p): C(t,p) * (-1)^p
                if p > 0 {
                    binom = &binom * BigInt::from(t - p + 1) / BigInt::from(p);
                }
                let sign = if p % 2 == 0 { 1 } else { -1 };
                out.insert(
                    (i + 2 * p, j - 2 * t, k - t),
                    v * &binom * BigInt::from(sign),
                );
            }
        }
        out
    }

    /// Fraction-free Bareiss determinant of a square matrix.
    pub fn det(mut m: Vec<Vec<MultiPoly>>) -> Result<MultiPoly> {
        let n = m.len();
        if n == 0 {
            return Err(QgcError::InvalidInput("determinant of empty matrix".into()));
        }
        for row in &m {
            if row.len() != n {
                return Err(QgcError::InvalidInput("matrix not square".into()));
            }
        }
        let mut sign = 1i64;
        let mut prev = MultiPoly::constant(1);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                // pivot search
                let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
                match swap {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(MultiPoly::zero()),
                }
            }
            let pivot = m[k][k].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = pivot.mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = num.exact_div(&prev)?;
                }
                m[i][k] = MultiPoly::zero();
            }
            prev = pivot;
        }
        let d = m[n - 1][n - 1].clone();
        Ok(if sign < 0 { d.neg() } else { d })
    }

    /// Interprets the reduced polynomial as lambda^a s^m Q(c) (up to the
    /// relation lambda s^2 = 1 - c^2) and returns the raw triple
    /// (a, m, Q) with a possibly negative lambda exponent folded away.
    /// Errors if the input is not of this shape.
    pub fn to_trig_parts(&self) -> Result<(i64, i64, IntPoly)> {
        let red = self.reduce_relation();
        if red.is_zero() {
            return Err(QgcError::Structural("determinant reduced to zero".into()));
        }
        let jmin = red.terms.keys().map(|e| e.1).min().unwrap();
        // all s-exponents must share the parity of jmin
        if red.terms.keys().any(|e| (e.1 - jmin) % 2 != 0) {
            return Err(QgcError::Structural(
                "mixed sine parity; not a lambda^a s^m Q(c) form".into(),
            ));
        }
        // substitute s^2 -> (1-c^2)/lambda, collecting per lambda exponent
        let mut by_lambda: BTreeMap<i64, BTreeMap<u32, BigInt>> = BTreeMap::new();
        for (&(i, j, k), v) in &red.terms {
            let t = (j - jmin) / 2;
            let w = k as i64 - t as i64;
            let slot = by_lambda.entry(w).or_default();
            // v * c^i * (1-c^2)^t
            let mut binom = BigInt::from(1);
            for p in 0..=t {
                if p > 0 {
                    binom = &binom * BigInt::from(t - p + 1) / BigInt::from(p);
                }
                let sign = if p % 2 == 0 { 1 } else { -1 };
                let e = i + 2 * p;
                let entry = slot.entry(e).or_insert_with(BigInt::zero);
                *entry += v * &binom * BigInt::from(sign);
            }
        }
        by_lambda.retain(|_, poly| poly.values().any(|v| !v.is_zero()));
        if by_lambda.len() != 1 {
            return Err(QgcError::Structural(format!(
                "{} distinct lambda powers after substitution; not a lambda^a s^m Q(c) form",
                by_lambda.len()
            )));
        }
        let (w, cmap) = by_lambda.into_iter().next().unwrap();
        let deg = *cmap.keys().max().unwrap() as usize;
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (e, v) in cmap {
            coeffs[e as usize] = v;
        }
        let q = IntPoly::new(coeffs);
        let mut a = w;
        let mut m = jmin as i64;
        let mut q = q;
        // fold a negative lambda power into the sine exponent via
        // 1/lambda = s^2 / (1 - c^2)
        while a < 0 {
            q = q.exact_div(&IntPoly::from_i64(&[-1, 0, 1]))?.neg();
            a += 1;
            m += 2;
        }
        Ok((a, m, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_examples() {
        // lambda s^2 c -> c - c^3
        let p = MultiPoly::term(1, 1, 2, 1);
        let want = MultiPoly::term(1, 1, 0, 0).add(&MultiPoly::term(-1, 3, 0, 0));
        assert_eq!(p.reduce_relation(), want);
        // lambda^2 s^3 -> lambda s - lambda s c^2
        let p = MultiPoly::term(1, 0, 3, 2);
        let want = MultiPoly::term(1, 0, 1, 1).add(&MultiPoly::term(-1, 2, 1, 1));
        assert_eq!(p.reduce_relation(), want);
        // c^2 + lambda s^2 -> 1
        let p = MultiPoly::term(1, 2, 0, 0).add(&MultiPoly::term(1, 0, 2, 1));
        assert_eq!(p.reduce_relation(), MultiPoly::constant(1));
    }

    #[test]
    fn det_small() {
        let c = MultiPoly::term(1, 1, 0, 0);
        assert_eq!(MultiPoly::det(vec![vec![c.clone()]]).unwrap(), c);
        // [[c, s], [-lambda s, c]] -> c^2 + lambda s^2
        let s = MultiPoly::term(1, 0, 1, 0);
        let m = vec![
            vec![c.clone(), s.clone()],
            vec![MultiPoly::term(-1, 0, 1, 1), c.clone()],
        ];
        let want = MultiPoly::term(1, 2, 0, 0).add(&MultiPoly::term(1, 0, 2, 1));
        assert_eq!(MultiPoly::det(m).unwrap(), want);
    }

    #[test]
    fn det_with_zero_pivot() {
        let z = MultiPoly::zero();
        let one = MultiPoly::constant(1);
        let m = vec![vec![z.clone(), one.clone()], vec![one.clone(), z.clone()]];
        assert_eq!(MultiPoly::det(m).unwrap(), MultiPoly::constant(-1));
    }

    #[test]
    fn trig_parts_plain() {
        let p = MultiPoly::term(1, 2, 3, 0).add(&MultiPoly::term(-1, 0, 3, 0));
        let (a, m, q) = p.to_trig_parts().unwrap();
        assert_eq!((a, m), (0, 3));
        assert_eq!(q, IntPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn trig_parts_cancellation() {
        // lambda s^3 - s = s(lambda s^2 - 1) = -s c^2
        let p = MultiPoly::term(1, 0, 3, 1).add(&MultiPoly::term(-1, 0, 1, 0));
        let (a, m, q) = p.to_trig_parts().unwrap();
        assert_eq!((a, m), (0, 1));
        assert_eq!(q, IntPoly::from_i64(&[0, 0, -1]));
    }
}
