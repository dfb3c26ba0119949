//! Shared per-prime context for the E7 and E8 scenarios.
//!
//! Everything convention-sensitive is derived in characteristic zero
//! from the Levi-regular representative: the optimal cocharacter comes
//! from the weighted Dynkin diagram oracle, and the regular nilpotent
//! of the reductive centraliser is computed as an integral eigenvector
//! and only then reduced mod p.

use crate::chevalley::ChevalleyZ;
use crate::error::ModlieError;
use crate::field::{Field, Fp, Rationals};
use crate::liealg::{Element, LieAlgebra};
use crate::linalg::{Matrix, Subspace};
use crate::reps;
use crate::rootsys::{Cocharacter, RootSystem, TypeLabel};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub struct E7Context {
    pub chev: ChevalleyZ,
    pub p: u64,
    pub alg: LieAlgebra<Fp>,
    pub e1: Element<Fp>,
    pub h1: Element<Fp>,
    pub f1: Element<Fp>,
    /// Optimal cocharacter from the characteristic-zero oracle.
    pub tau: Cocharacter,
    /// Regular nilpotent of the centraliser, integral.
    pub f_reg_z: Vec<i64>,
    /// p = 7 only: the negative simple root vectors of the centraliser
    /// and the highest-root vector, all integral.
    pub f_parts_z: Option<(Vec<i64>, Vec<i64>)>,
    pub e_tilde_z: Option<Vec<i64>>,
}

impl E7Context {
    pub fn f_reg_mod_p(&self) -> Element<Fp> {
        reduce_mod(&self.alg, &self.f_reg_z)
    }

    pub fn e_tilde_mod_p(&self) -> Option<Element<Fp>> {
        self.e_tilde_z.as_ref().map(|v| reduce_mod(&self.alg, v))
    }
}

pub struct E8Context {
    pub chev: ChevalleyZ,
    pub alg: LieAlgebra<Fp>,
    pub e1: Element<Fp>,
    pub h1: Element<Fp>,
    pub f1: Element<Fp>,
    pub tau: Cocharacter,
    /// Regular nilpotent of the G2 factor of the centraliser (mod 7).
    pub f_reg: Element<Fp>,
    pub f_reg_z: Vec<i64>,
    /// Highest-root vector of the G2 factor (mod 7).
    pub e_tilde: Element<Fp>,
    /// Index of the highest root of the even-coefficient subsystem.
    pub omega_idx: usize,
}

fn reduce_mod(alg: &LieAlgebra<Fp>, v: &[i64]) -> Element<Fp> {
    v.iter().map(|&c| alg.field.from_i64(c)).collect()
}

/// Primitive integer vector from a rational one.
fn primitive_int(row: &[BigRational]) -> Vec<i64> {
    use num_traits::ToPrimitive;
    let mut lcm = BigInt::one();
    for r in row {
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let mut gcd = BigInt::zero();
    for v in &ints {
        gcd = gcd.gcd(v);
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    ints.iter()
        .map(|v| (v / &gcd).to_i64().expect("primitive coordinates fit i64"))
        .collect()
}

/// Eigenvector rows of a rational matrix for an integer eigenvalue.
fn rational_eigenspace(m: &Matrix<Rationals>, lam: i64) -> Subspace<Rationals> {
    let q = Rationals;
    let mut shifted = m.clone();
    for i in 0..m.rows {
        let v = q.sub(shifted.at(i, i), &q.from_i64(lam));
        shifted.set(i, i, v);
    }
    Subspace::from_matrix(&shifted.kernel())
}

/// ad of a rational matrix restricted to a subspace, in its basis.
fn restricted_ad(
    alg: &LieAlgebra<Rationals>,
    x: &Element<Rationals>,
    s: &Subspace<Rationals>,
) -> Matrix<Rationals> {
    let d = s.dim();
    let mut out = Matrix::zeros(Rationals, d, d);
    for (j, row) in s.basis_rows().iter().enumerate() {
        let br = alg.bracket(x, row);
        let coords = s.coordinates(&br).expect("subspace is ad-stable");
        for i in 0..d {
            out.set(i, j, coords[i].clone());
        }
    }
    out
}

/// Coweight-dual Cartan element t_i over the rationals.
fn t_element_q(alg: &LieAlgebra<Rationals>, i: usize) -> Element<Rationals> {
    let rs = alg.rs();
    let q = Rationals;
    let rank = rs.rank;
    let mut a = Matrix::zeros(q.clone(), rank, rank);
    for l in 0..rank {
        for j in 0..rank {
            a.set(j, l, q.from_i64(rs.cartan[l][j]));
        }
    }
    let mut rhs = vec![q.zero(); rank];
    rhs[i] = q.one();
    let m = a.solve(&rhs).expect("Cartan matrix invertible over Q");
    let npos = alg.npos();
    let mut t = alg.zero();
    for (l, c) in m.into_iter().enumerate() {
        t[2 * npos + l] = c;
    }
    t
}

/// Root decomposition of a rank-2 reductive centraliser over Q: joint
/// integer eigenpairs of the two Cartan duals. Returns the negative
/// simple-root vectors (f1, f2) ordered so that the highest pair is
/// 3*b1 + 2*b2, together with the highest-root vector.
fn g2_centraliser_data_q(
    alg: &LieAlgebra<Rationals>,
    c: &Subspace<Rationals>,
    t_a: &Element<Rationals>,
    t_b: &Element<Rationals>,
) -> Result<(Vec<i64>, Vec<i64>, Vec<i64>), ModlieError> {
    let ad_a = restricted_ad(alg, t_a, c);
    let ad_b = restricted_ad(alg, t_b, c);
    let mut roots: Vec<((i64, i64), Vec<BigRational>)> = Vec::new();
    for wa in -6..=6i64 {
        let ea = rational_eigenspace(&ad_a, wa);
        if ea.dim() == 0 {
            continue;
        }
        for wb in -6..=6i64 {
            if wa == 0 && wb == 0 {
                continue;
            }
            let eb = rational_eigenspace(&ad_b, wb);
            let joint = ea.intersect(&eb);
            if joint.dim() == 1 {
                roots.push(((wa, wb), joint.basis_rows().pop().unwrap()));
            } else if joint.dim() > 1 {
                return Err(ModlieError::Internal(
                    "degenerate centraliser root space".into(),
                ));
            }
        }
    }
    if roots.len() != 12 {
        return Err(ModlieError::Internal(format!(
            "expected 12 centraliser roots, found {}",
            roots.len()
        )));
    }
    // Positivity from the support of the eigenvector in c-coordinates
    // does not make sense; use the ambient support: all constituent
    // root vectors of a root space lie on one side.
    let npos = alg.npos();
    let q = Rationals;
    let is_positive = |v: &[BigRational]| -> bool {
        let pos = v[..npos].iter().any(|x| !q.is_zero(x));
        let neg = v[npos..2 * npos].iter().any(|x| !q.is_zero(x));
        assert!(pos != neg, "mixed-support centraliser root vector");
        pos
    };
    // Back to ambient coordinates.
    let ambient = |coords: &[BigRational]| -> Vec<BigRational> {
        let rows = c.basis_rows();
        let mut v = vec![q.zero(); alg.dim()];
        for (r, row) in rows.iter().enumerate() {
            for (a, b) in v.iter_mut().zip(row) {
                *a = q.mul_add(a, &coords[r], b);
            }
        }
        v
    };
    let amb_roots: Vec<((i64, i64), Vec<BigRational>, bool)> = roots
        .iter()
        .map(|(w, coords)| {
            let v = ambient(coords);
            let pos = is_positive(&v);
            (*w, v, pos)
        })
        .collect();
    let positive: Vec<(i64, i64)> = amb_roots
        .iter()
        .filter(|(_, _, p)| *p)
        .map(|(w, _, _)| *w)
        .collect();
    if positive.len() != 6 {
        return Err(ModlieError::Internal(
            "expected 6 positive centraliser roots".into(),
        ));
    }
    // Simple pairs: not a sum of two positive pairs.
    let simples: Vec<(i64, i64)> = positive
        .iter()
        .copied()
        .filter(|w| {
            !positive.iter().any(|u| {
                positive
                    .iter()
                    .any(|v| u.0 + v.0 == w.0 && u.1 + v.1 == w.1)
            })
        })
        .collect();
    if simples.len() != 2 {
        return Err(ModlieError::Internal(
            "expected 2 simple centraliser roots".into(),
        ));
    }
    // Identify the short root b1 by the highest pair = 3 b1 + 2 b2.
    let (s1, s2) = (simples[0], simples[1]);
    let cand1 = (3 * s1.0 + 2 * s2.0, 3 * s1.1 + 2 * s2.1);
    let cand2 = (3 * s2.0 + 2 * s1.0, 3 * s2.1 + 2 * s1.1);
    let (b1, b2, top) = if positive.contains(&cand1) {
        (s1, s2, cand1)
    } else if positive.contains(&cand2) {
        (s2, s1, cand2)
    } else {
        return Err(ModlieError::Internal(
            "no highest centraliser root of G2 shape".into(),
        ));
    };
    let find = |w: (i64, i64)| -> Option<Vec<BigRational>> {
        amb_roots
            .iter()
            .find(|(u, _, _)| *u == w)
            .map(|(_, v, _)| v.clone())
    };
    let f1 =
        primitive_int(&find((-b1.0, -b1.1)).ok_or_else(|| {
            ModlieError::Internal("missing negative simple centraliser root".into())
        })?);
    let f2 =
        primitive_int(&find((-b2.0, -b2.1)).ok_or_else(|| {
            ModlieError::Internal("missing negative simple centraliser root".into())
        })?);
    let e_tilde = primitive_int(&find(top).unwrap());
    Ok((f1, f2, e_tilde))
}

fn build_e7_context(p: u64) -> Result<E7Context, ModlieError> {
    let rs = RootSystem::new(TypeLabel::E, 7)?;
    let chev = ChevalleyZ::new(&rs);
    let alg = chev.over_fp(p);
    let (e1, h1, f1) = reps::build_triple(&alg, &chev, &reps::triple_e7(p))?;

    let aq = chev.over_rationals();
    let q = Rationals;
    let omit: &[usize] = if p == 5 { &[4] } else { &[4, 6] };
    let e_q: Element<Rationals> = {
        let mut v = aq.zero();
        for (r, c) in reps::levi_regular_terms(7, omit) {
            let idx = chev.root_vector_index(&r).unwrap();
            v[idx] = q.from_i64(c);
        }
        v
    };
    let tau = aq.adapted_cocharacter(&e_q)?;
    // Centraliser of e over Q intersected with the weight-0 component.
    let cent_q = Subspace::from_matrix(&aq.ad_matrix(&e_q).kernel());
    let w0 = aq.graded_component(&tau, 0);
    let c_q = cent_q.intersect(&w0);

    let (f_reg_z, f_parts_z, e_tilde_z) = if p == 5 {
        if c_q.dim() != 3 {
            return Err(ModlieError::Internal(format!(
                "reductive centraliser dimension {} (want 3)",
                c_q.dim()
            )));
        }
        // Eigenvectors of ad t4 on c; take the negative-support one.
        let t4 = t_element_q(&aq, 3);
        let adc = restricted_ad(&aq, &t4, &c_q);
        let mut found = None;
        for lam in -12..=12i64 {
            if lam == 0 {
                continue;
            }
            let eig = rational_eigenspace(&adc, lam);
            if eig.dim() != 1 {
                continue;
            }
            // Ambient vector; keep only negative-root support.
            let coords = eig.basis_rows().pop().unwrap();
            let rows = c_q.basis_rows();
            let mut v = vec![q.zero(); aq.dim()];
            for (r, row) in rows.iter().enumerate() {
                for (a, b) in v.iter_mut().zip(row) {
                    *a = q.mul_add(a, &coords[r], b);
                }
            }
            let npos = aq.npos();
            let positive = v[..npos].iter().any(|x| !q.is_zero(x));
            if !positive {
                found = Some(primitive_int(&v));
                break;
            }
        }
        let x = found.ok_or_else(|| {
            ModlieError::Internal("no negative nilpotent eigenvector in the centraliser".into())
        })?;
        (x, None, None)
    } else {
        if c_q.dim() != 14 {
            return Err(ModlieError::Internal(format!(
                "reductive centraliser dimension {} (want 14)",
                c_q.dim()
            )));
        }
        let t4 = t_element_q(&aq, 3);
        let t6 = t_element_q(&aq, 5);
        let (f1z, f2z, etz) = g2_centraliser_data_q(&aq, &c_q, &t4, &t6)?;
        let sum: Vec<i64> = f1z.iter().zip(&f2z).map(|(a, b)| a + b).collect();
        (sum, Some((f1z, f2z)), Some(etz))
    };

    Ok(E7Context {
        chev,
        p,
        alg,
        e1,
        h1,
        f1,
        tau,
        f_reg_z,
        f_parts_z,
        e_tilde_z,
    })
}

pub fn e7_context(p: u64) -> Result<Arc<E7Context>, ModlieError> {
    if p != 5 && p != 7 {
        return Err(ModlieError::Unsupported(format!(
            "E7 scenario context exists for p in {{5,7}}, not {p}"
        )));
    }
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<E7Context>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some(ctx) = guard.get(&p) {
            return Ok(ctx.clone());
        }
    }
    let ctx = Arc::new(build_e7_context(p)?);
    cache.lock().unwrap().insert(p, ctx.clone());
    Ok(ctx)
}

fn build_e8_context() -> Result<E8Context, ModlieError> {
    let p = 7u64;
    let rs = RootSystem::new(TypeLabel::E, 8)?;
    let chev = ChevalleyZ::new(&rs);
    let alg = chev.over_fp(p);
    let f = alg.field;
    let q = Rationals;
    let aq = chev.over_rationals();

    let mut e_q = aq.zero();
    let mut e1 = alg.zero();
    for (r, _) in reps::levi_regular_terms(8, &[4, 6, 8]) {
        let idx = chev.root_vector_index(&r).unwrap();
        e_q[idx] = q.one();
        e1[idx] = 1;
    }
    let tau = aq.adapted_cocharacter(&e_q)?;
    let h1 = alg.h_tau(&tau)?;
    // f1: the unique f in the span of the negative simple vectors with
    // [e,f] = h and [h,f] = -2f.
    let mut neg_rows: Vec<Element<Fp>> = Vec::new();
    for (r, _) in reps::levi_regular_terms(8, &[4, 6, 8]) {
        let nr: Vec<i64> = r.iter().map(|x| -x).collect();
        neg_rows.push(alg.basis_element(rs.root_index(&nr).unwrap()));
    }
    let mut sys = Matrix::zeros(f, 2 * alg.dim(), neg_rows.len());
    for (c, row) in neg_rows.iter().enumerate() {
        let b1 = alg.bracket(&e1, row);
        let b2 = alg.add(&alg.bracket(&h1, row), &alg.scale(&f.from_i64(2), row));
        for r in 0..alg.dim() {
            sys.set(r, c, b1[r]);
            sys.set(alg.dim() + r, c, b2[r]);
        }
    }
    let mut rhs = h1.clone();
    rhs.extend(vec![0u64; alg.dim()]);
    let coeffs = sys
        .solve(&rhs)
        .ok_or_else(|| ModlieError::Internal("no f-part over the negative simples".into()))?;
    let mut f1 = alg.zero();
    for (c, row) in coeffs.iter().zip(&neg_rows) {
        for (a, b) in f1.iter_mut().zip(row) {
            *a = f.mul_add(a, c, b);
        }
    }

    // The even-coefficient regular subsystem: roots with zero alpha_8
    // coefficient; its highest root.
    let omega = rs
        .positive_roots
        .iter()
        .filter(|r| r[7] == 0)
        .max_by_key(|r| (r.iter().sum::<i64>(), (*r).clone()))
        .unwrap()
        .clone();
    let omega_idx = rs.root_index(&omega).unwrap();

    // G2 factor of the centraliser over Q: centraliser meets weight 0
    // meets the kernel of the small ideal action. The small ideal is
    // the sl2 on the highest root of E8.
    let cent_q = Subspace::from_matrix(&aq.ad_matrix(&e_q).kernel());
    let w0 = aq.graded_component(&tau, 0);
    let c_q = cent_q.intersect(&w0);
    // Remove the A1 factor: centralise the highest-root sl2.
    let top_idx = rs.root_index(&rs.highest_root).unwrap();
    let npos = chev.npos();
    let sl2_rows = vec![aq.basis_element(top_idx), aq.basis_element(npos + top_idx)];
    let sl2_span = Subspace::span(q.clone(), aq.dim(), &sl2_rows);
    let cg2_q = c_q.intersect(&aq.centralizer(&sl2_span));
    if cg2_q.dim() != 14 {
        return Err(ModlieError::Internal(format!(
            "G2 factor dimension {} (want 14)",
            cg2_q.dim()
        )));
    }
    let t4 = t_element_q(&aq, 3);
    let t6 = t_element_q(&aq, 5);
    let (f1z, f2z, etz) = g2_centraliser_data_q(&aq, &cg2_q, &t4, &t6)?;
    let f_reg_z: Vec<i64> = f1z.iter().zip(&f2z).map(|(a, b)| a + b).collect();
    let f_reg = reduce_mod(&alg, &f_reg_z);
    let e_tilde = reduce_mod(&alg, &etz);

    Ok(E8Context {
        chev,
        alg,
        e1,
        h1,
        f1,
        tau,
        f_reg,
        f_reg_z,
        e_tilde,
        omega_idx,
    })
}

pub fn e8_context() -> Result<Arc<E8Context>, ModlieError> {
    static CACHE: OnceLock<Mutex<Option<Arc<E8Context>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(None));
    {
        let guard = cache.lock().unwrap();
        if let Some(ctx) = guard.as_ref() {
            return Ok(ctx.clone());
        }
    }
    let ctx = Arc::new(build_e8_context()?);
    *cache.lock().unwrap() = Some(ctx.clone());
    Ok(ctx)
}
