//! Exponentiation of nilpotent derivations into automorphisms: the
//! truncated exponential for small nildegree, and the divided-power
//! family X^(i) = (ad x)^i / i! computed exactly on the integral form
//! and reduced mod p.

use crate::error::ModlieError;
use crate::field::{bigint_mod_p, Field, Fp};
use crate::liealg::{Element, LieAlgebra};
use crate::linalg::Matrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exhaustive automorphism check: L[b_i, b_j] = [L b_i, L b_j] for all
/// basis pairs; L must be invertible.
pub fn is_automorphism(alg: &LieAlgebra<Fp>, l: &Matrix<Fp>) -> Result<bool, ModlieError> {
    let n = alg.dim();
    assert_eq!((l.rows, l.cols), (n, n));
    if l.rank() != n {
        return Err(ModlieError::Unsupported("singular operator".into()));
    }
    let cols: Vec<Element<Fp>> = (0..n)
        .map(|j| {
            let mut v = alg.zero();
            for i in 0..n {
                v[i] = *l.at(i, j);
            }
            v
        })
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let br = alg.bracket(&alg.basis_element(i), &alg.basis_element(j));
            let lhs = l.apply(&br);
            let rhs = alg.bracket(&cols[i], &cols[j]);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Truncated exponential sum_{i<p} (ad x)^i / i!, accepted only when
/// the measured nildegree m satisfies m <= (p+1)/2, which guarantees an
/// automorphism.
pub fn exp_truncated(alg: &LieAlgebra<Fp>, x: &[u64]) -> Result<Matrix<Fp>, ModlieError> {
    let p = alg.p();
    let f = alg.field;
    let n = alg.dim();
    let m = alg.ad_matrix(x);
    let nd = alg.nildegree(x).ok_or(ModlieError::NotNilpotent)?;
    if nd as u64 > (p + 1) / 2 {
        return Err(ModlieError::NilpotencyBound(nd));
    }
    let mut out = Matrix::identity(f, n);
    let mut pow = Matrix::identity(f, n);
    let mut fact = f.one();
    for i in 1..p {
        pow = pow.mat_mul(&m);
        if pow.is_zero() {
            break;
        }
        fact = f.mul(&fact, &f.from_i64(i as i64));
        let inv = f.inv(&fact).unwrap();
        out = out.add_mat(&pow.scale(&inv));
    }
    Ok(out)
}

/// Integer matrix with exact arithmetic for the lattice computation.
#[derive(Clone, PartialEq)]
pub struct BigMatrix {
    pub n: usize,
    pub data: Vec<BigInt>,
}

impl BigMatrix {
    pub fn zeros(n: usize) -> BigMatrix {
        BigMatrix {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> BigMatrix {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Sparse-aware product self * other.
    pub fn mat_mul(&self, other: &BigMatrix) -> BigMatrix {
        let n = self.n;
        let mut out = BigMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j) + a * b;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Entrywise exact division; `None` if any entry fails.
    pub fn div_exact(&self, d: &BigInt) -> Option<BigMatrix> {
        let mut out = BigMatrix::zeros(self.n);
        for (k, v) in self.data.iter().enumerate() {
            if (v % d).is_zero() {
                out.data[k] = v / d;
            } else {
                return None;
            }
        }
        Some(out)
    }

    pub fn reduce_mod(&self, f: Fp) -> Matrix<Fp> {
        let mut out = Matrix::zeros(f, self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, bigint_mod_p(self.at(i, j), f.p()));
            }
        }
        out
    }
}

/// ad of an integer element on the shared structure-constant table.
pub fn big_ad_matrix<F: Field>(alg: &LieAlgebra<F>, x: &[i64]) -> BigMatrix {
    let n = alg.dim();
    let mut m = BigMatrix::zeros(n);
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        for j in 0..n {
            for &(k, c) in alg.table.pairs(i, j) {
                let v = m.at(k as usize, j) + BigInt::from(*xi) * BigInt::from(c);
                m.set(k as usize, j, v);
            }
        }
    }
    m
}

/// The divided-power family of an integral lattice element.
pub struct LatticeExponential {
    pub p: u64,
    /// X^(i) reduced mod p, for 0 <= i <= p^2 - 1.
    pub powers: Vec<Matrix<Fp>>,
    /// Largest i with X^(i) != 0.
    pub top_nonzero: usize,
}

impl LatticeExponential {
    /// Evaluate the one-parameter family at t.
    pub fn at(&self, f: Fp, t: u64) -> Matrix<Fp> {
        let n = self.powers[0].rows;
        let mut out = Matrix::zeros(f, n, n);
        let mut tp = f.one();
        for m in &self.powers {
            if !m.is_zero() {
                out = out.add_mat(&m.scale(&tp));
            }
            tp = f.mul(&tp, &t);
        }
        out
    }
}

/// Divided powers X^(i) = (ad x~)^i / i! of an integral element,
/// verified integral on the lattice and reduced mod p.
///
/// Preconditions: (ad x~)^{p^2-1} = 0 over the integers, and the
/// reduction of x~ mod p has vanishing p-th power.
pub fn exp_lattice(
    alg_z: &LieAlgebra<Fp>,
    x_tilde: &[i64],
    p: u64,
) -> Result<LatticeExponential, ModlieError> {
    assert_eq!(alg_z.p(), p);
    let n = alg_z.dim();
    let top = (p * p - 1) as usize;
    let ad = big_ad_matrix(alg_z, x_tilde);
    // Nilpotency gate over Z.
    {
        let mut pow = ad.clone();
        let mut deg = 1usize;
        while deg < top && !pow.is_zero() {
            pow = pow.mat_mul(&ad);
            deg += 1;
        }
        if !pow.is_zero() {
            return Err(ModlieError::NilpotencyBound(deg));
        }
    }
    // Mod-p gate: reduction has zero p-th power.
    let f = alg_z.field;
    let x_p: Element<Fp> = x_tilde.iter().map(|&c| f.from_i64(c)).collect();
    let pw = alg_z.p_power(&x_p)?;
    if !alg_z.is_zero_elem(&pw) {
        return Err(ModlieError::Unsupported(
            "reduction mod p has nonzero p-th power".into(),
        ));
    }
    let mut powers: Vec<Matrix<Fp>> = Vec::with_capacity(top + 1);
    powers.push(Matrix::identity(f, n));
    let mut num = BigMatrix::identity(n);
    let mut fact = BigInt::one();
    let mut top_nonzero = 0;
    for i in 1..=top {
        num = num.mat_mul(&ad);
        fact *= BigInt::from(i as i64);
        if num.is_zero() {
            powers.push(Matrix::zeros(f, n, n));
            continue;
        }
        let divided = num
            .div_exact(&fact)
            .ok_or_else(|| ModlieError::Integrality {
                index: i,
                denom: fact.abs().to_string(),
            })?;
        let red = divided.reduce_mod(f);
        if !red.is_zero() {
            top_nonzero = i;
        }
        powers.push(red);
    }
    Ok(LatticeExponential {
        p,
        powers,
        top_nonzero,
    })
}
