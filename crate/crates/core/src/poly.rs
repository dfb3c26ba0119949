//! Small multivariate polynomials over F_p, used to run the
//! constraint-solving scenarios symbolically: elements of the algebra
//! with polynomial coordinates are bracketed exactly, and the resulting
//! coordinate polynomials are inspected monomial by monomial.

use crate::field::{Field, Fp};
use crate::liealg::LieAlgebra;
use std::collections::BTreeMap;

/// Exponent vector, one slot per variable.
pub type Expo = Vec<u16>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Expo, u64>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, f: Fp, c: i64) -> MPoly {
        let mut p = Self::zero(nvars);
        let v = f.from_i64(c);
        if v != 0 {
            p.terms.insert(vec![0; nvars], v);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> MPoly {
        let mut p = Self::zero(nvars);
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        p.terms.insert(e, 1);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, f: Fp, other: &MPoly) {
        for (e, c) in &other.terms {
            let slot = self.terms.entry(e.clone()).or_insert(0);
            *slot = f.add(slot, c);
            if *slot == 0 {
                self.terms.remove(e);
            }
        }
    }

    pub fn scale(&self, f: Fp, c: u64) -> MPoly {
        if c == 0 {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), f.mul(v, &c));
        }
        out
    }

    pub fn mul(&self, f: Fp, other: &MPoly) -> MPoly {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Expo = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = f.mul(c1, c2);
                let slot = out.terms.entry(e).or_insert(0);
                *slot = f.add(slot, &c);
            }
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    /// Substitute variable i by a constant.
    pub fn subst(&self, f: Fp, i: usize, val: u64) -> MPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let pow = e2[i];
            e2[i] = 0;
            let c2 = f.mul(c, &f.pow(&val, pow as u64));
            if c2 != 0 {
                let slot = out.terms.entry(e2).or_insert(0);
                *slot = f.add(slot, &c2);
            }
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }
}

/// An algebra element with polynomial coordinates.
pub type PolyElement = Vec<MPoly>;

pub fn poly_zero_elem(alg: &LieAlgebra<Fp>, nvars: usize) -> PolyElement {
    vec![MPoly::zero(nvars); alg.dim()]
}

/// Constant embedding of an ordinary element.
pub fn poly_const_elem(_alg: &LieAlgebra<Fp>, nvars: usize, x: &[u64]) -> PolyElement {
    x.iter()
        .map(|c| {
            let mut p = MPoly::zero(nvars);
            if *c != 0 {
                p.terms.insert(vec![0; nvars], *c);
            }
            p
        })
        .collect()
}

/// x + var_i * y.
pub fn poly_add_scaled_var(
    alg: &LieAlgebra<Fp>,
    mut x: PolyElement,
    i: usize,
    y: &[u64],
) -> PolyElement {
    let f = alg.field;
    let nvars = x[0].nvars;
    for (k, c) in y.iter().enumerate() {
        if *c == 0 {
            continue;
        }
        let mut mono = MPoly::var(nvars, i).scale(f, *c);
        mono.add_assign(f, &x[k]);
        x[k] = mono;
    }
    x
}

/// Bracket of polynomial elements through the structure constants.
pub fn poly_bracket(alg: &LieAlgebra<Fp>, x: &PolyElement, y: &PolyElement) -> PolyElement {
    let f = alg.field;
    let nvars = x[0].nvars;
    let mut out = poly_zero_elem(alg, nvars);
    for i in 0..alg.dim() {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..alg.dim() {
            if y[j].is_zero() {
                continue;
            }
            for &(k, c) in alg.table.pairs(i, j) {
                let prod = x[i].mul(f, &y[j]).scale(f, f.from_i64(c));
                out[k as usize].add_assign(f, &prod);
            }
        }
    }
    out
}

pub fn poly_sub(alg: &LieAlgebra<Fp>, x: &PolyElement, y: &PolyElement) -> PolyElement {
    let f = alg.field;
    let mut out = x.clone();
    for (o, yk) in out.iter_mut().zip(y) {
        o.add_assign(f, &yk.scale(f, f.from_i64(-1)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::ChevalleyZ;
    use crate::rootsys::{RootSystem, TypeLabel};

    #[test]
    fn poly_arithmetic() {
        let f = Fp::new(5);
        let a = MPoly::var(2, 0);
        let b = MPoly::var(2, 1);
        let mut s = a.clone();
        s.add_assign(f, &b);
        let sq = s.mul(f, &s);
        // (a+b)^2 = a^2 + 2ab + b^2
        assert_eq!(sq.terms.len(), 3);
        assert_eq!(sq.terms[&vec![1, 1]], 2);
        let at_b0 = sq.subst(f, 1, 0);
        assert_eq!(at_b0.terms.len(), 1);
        assert_eq!(at_b0.terms[&vec![2, 0]], 1);
    }

    #[test]
    fn poly_bracket_matches_scalar_bracket() {
        let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::A, 2).unwrap());
        let a = chev.over_fp(5);
        // v(t) = e1 + t e2; [v, f1] evaluated at t = 3 must agree.
        let e1 = a.basis_element(1);
        let e2 = a.basis_element(0);
        let f1 = a.basis_element(a.npos() + 1);
        let v = poly_add_scaled_var(&a, poly_const_elem(&a, 1, &e1), 0, &e2);
        let fc = poly_const_elem(&a, 1, &f1);
        let br = poly_bracket(&a, &v, &fc);
        let evaluated: Vec<u64> = br
            .iter()
            .map(|p| {
                let q = p.subst(a.field, 0, 3);
                q.terms.get(&vec![0]).copied().unwrap_or(0)
            })
            .collect();
        let direct = a.bracket(&a.add(&e1, &a.scale(&3, &e2)), &f1);
        assert_eq!(evaluated, direct);
    }
}
