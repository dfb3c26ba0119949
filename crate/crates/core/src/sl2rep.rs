//! Restricted sl2-modules over F_p: Weyl modules, duals, sums and
//! tensor products, fixed-space dimensions, and the maximal submodule
//! of V(p + r) cut out by the radical of the contravariant form.

use crate::error::ModlieError;
use crate::field::{Field, Fp};
use crate::linalg::{Matrix, Subspace};

/// Action matrices for the standard basis (E, H, F) of sl2.
#[derive(Clone)]
pub struct Sl2Module {
    pub p: u64,
    pub e: Matrix<Fp>,
    pub h: Matrix<Fp>,
    pub f: Matrix<Fp>,
}

impl Sl2Module {
    pub fn dim(&self) -> usize {
        self.e.rows
    }

    pub fn field(&self) -> Fp {
        self.e.field
    }

    /// Verify [E,F] = H, [H,E] = 2E, [H,F] = -2F as matrices.
    pub fn verify_relations(&self) -> bool {
        let comm = |a: &Matrix<Fp>, b: &Matrix<Fp>| a.mat_mul(b).sub_mat(&b.mat_mul(a));
        let two = self.field().from_i64(2);
        comm(&self.e, &self.f) == self.h
            && comm(&self.h, &self.e) == self.e.scale(&two)
            && comm(&self.h, &self.f) == self.f.scale(&self.field().from_i64(-2))
    }

    /// H acts torally: H^p = H as a matrix.
    pub fn h_is_toral(&self) -> bool {
        self.h.pow_square(self.p) == self.h
    }

    /// Matrix of a E + b H + c F.
    pub fn action(&self, a: u64, b: u64, c: u64) -> Matrix<Fp> {
        self.e
            .scale(&a)
            .add_mat(&self.h.scale(&b))
            .add_mat(&self.f.scale(&c))
    }

    /// dim ker(x) for x = aE + bH + cF.
    pub fn fixed_space_dim(&self, a: u64, b: u64, c: u64) -> usize {
        let m = self.action(a, b, c);
        m.rows - m.rank()
    }

    /// The module restricted to an invariant subspace (rows).
    pub fn restrict(&self, sub: &Subspace<Fp>) -> Result<Sl2Module, ModlieError> {
        let f = self.field();
        let d = sub.dim();
        let restrict_one = |m: &Matrix<Fp>| -> Result<Matrix<Fp>, ModlieError> {
            let mut out = Matrix::zeros(f, d, d);
            for (j, row) in sub.basis_rows().iter().enumerate() {
                let img = m.apply(row);
                let coords = sub
                    .coordinates(&img)
                    .ok_or_else(|| ModlieError::Mismatch("subspace not invariant".into()))?;
                for i in 0..d {
                    out.set(i, j, coords[i]);
                }
            }
            Ok(out)
        };
        Ok(Sl2Module {
            p: self.p,
            e: restrict_one(&self.e)?,
            h: restrict_one(&self.h)?,
            f: restrict_one(&self.f)?,
        })
    }
}

/// Weyl module V(m): dimension m+1 with
/// E v_i = (m-i+1) v_{i-1}, F v_i = (i+1) v_{i+1}, H v_i = (m-2i) v_i.
pub fn weyl_module(m: u64, p: u64) -> Sl2Module {
    let fld = Fp::new(p);
    let n = (m + 1) as usize;
    let mut e = Matrix::zeros(fld, n, n);
    let mut h = Matrix::zeros(fld, n, n);
    let mut f = Matrix::zeros(fld, n, n);
    for i in 0..n {
        let iu = i as i64;
        let mu = m as i64;
        if i > 0 {
            e.set(i - 1, i, fld.from_i64(mu - iu + 1));
        }
        if i + 1 < n {
            f.set(i + 1, i, fld.from_i64(iu + 1));
        }
        h.set(i, i, fld.from_i64(mu - 2 * iu));
    }
    let module = Sl2Module { p, e, h, f };
    debug_assert!(module.verify_relations());
    module
}

pub enum CombineMode {
    DirectSum,
    Dual,
    Tensor,
}

pub fn combine(modules: &[&Sl2Module], mode: CombineMode) -> Sl2Module {
    match mode {
        CombineMode::Dual => {
            assert_eq!(modules.len(), 1);
            let m = modules[0];
            let neg = m.field().from_i64(-1);
            Sl2Module {
                p: m.p,
                e: m.e.transpose().scale(&neg),
                h: m.h.transpose().scale(&neg),
                f: m.f.transpose().scale(&neg),
            }
        }
        CombineMode::DirectSum => {
            assert!(!modules.is_empty());
            let p = modules[0].p;
            let f = modules[0].field();
            let n: usize = modules.iter().map(|m| m.dim()).sum();
            let mut out = Sl2Module {
                p,
                e: Matrix::zeros(f, n, n),
                h: Matrix::zeros(f, n, n),
                f: Matrix::zeros(f, n, n),
            };
            let mut off = 0;
            for m in modules {
                assert_eq!(m.p, p);
                for i in 0..m.dim() {
                    for j in 0..m.dim() {
                        out.e.set(off + i, off + j, *m.e.at(i, j));
                        out.h.set(off + i, off + j, *m.h.at(i, j));
                        out.f.set(off + i, off + j, *m.f.at(i, j));
                    }
                }
                off += m.dim();
            }
            out
        }
        CombineMode::Tensor => {
            assert_eq!(modules.len(), 2);
            let (a, b) = (modules[0], modules[1]);
            assert_eq!(a.p, b.p);
            let f = a.field();
            let (na, nb) = (a.dim(), b.dim());
            let n = na * nb;
            let idx = |i: usize, j: usize| i * nb + j;
            let mut out = Sl2Module {
                p: a.p,
                e: Matrix::zeros(f, n, n),
                h: Matrix::zeros(f, n, n),
                f: Matrix::zeros(f, n, n),
            };
            // x.(u ox v) = (x.u) ox v + u ox (x.v)
            for (xa, xb, xo) in [
                (&a.e, &b.e, &mut out.e),
                (&a.h, &b.h, &mut out.h),
                (&a.f, &b.f, &mut out.f),
            ] {
                for i in 0..na {
                    for j in 0..nb {
                        let col = idx(i, j);
                        for k in 0..na {
                            let v = *xa.at(k, i);
                            if v != 0 {
                                let cur = *xo.at(idx(k, j), col);
                                xo.set(idx(k, j), col, f.add(&cur, &v));
                            }
                        }
                        for k in 0..nb {
                            let v = *xb.at(k, j);
                            if v != 0 {
                                let cur = *xo.at(idx(i, k), col);
                                xo.set(idx(i, k), col, f.add(&cur, &v));
                            }
                        }
                    }
                }
            }
            out
        }
    }
}

/// The radical of the contravariant form on V(m): the unique symmetric
/// bilinear form G with G(v0, v0) = 1 and G(E u, v) = G(u, F v). For
/// m = p + r its kernel is the maximal submodule.
pub fn contravariant_radical(m: u64, p: u64) -> Result<Subspace<Fp>, ModlieError> {
    let module = weyl_module(m, p);
    let fld = module.field();
    let n = module.dim();
    // Unknown G (n x n): E^T G = G F, G symmetric, G[0][0] = 1.
    let mut sys = Matrix::zeros(fld, 0, n * n);
    let et = module.e.transpose();
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![0u64; n * n];
            // (E^T G)[i][j] = sum_k E^T[i][k] G[k][j]
            for k in 0..n {
                row[k * n + j] = fld.add(&row[k * n + j], et.at(i, k));
                // -(G F)[i][j] = -sum_k G[i][k] F[k][j]
                row[i * n + k] = fld.sub(&row[i * n + k], module.f.at(k, j));
            }
            sys.push_row(&row);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut row = vec![0u64; n * n];
            row[i * n + j] = 1;
            row[j * n + i] = fld.from_i64(-1);
            sys.push_row(&row);
        }
    }
    let ker = sys.kernel();
    // Pick the solution with G[0][0] = 1.
    let g_flat = (0..ker.rows)
        .map(|r| ker.row_vec(r))
        .find(|v| v[0] != 0)
        .map(|v| {
            let inv = fld.inv(&v[0]).unwrap();
            v.iter().map(|x| fld.mul(x, &inv)).collect::<Vec<_>>()
        })
        .ok_or_else(|| ModlieError::Internal("no contravariant form normalised at v0".into()))?;
    let mut g = Matrix::zeros(fld, n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, g_flat[i * n + j]);
        }
    }
    Ok(Subspace::from_matrix(&g.kernel()))
}

/// Maximal submodule of V(p + r) (0 <= r <= p-2) as an Sl2Module of
/// dimension p.
pub fn maximal_submodule(r: u64, p: u64) -> Result<Sl2Module, ModlieError> {
    assert!(r <= p - 2);
    let m = p + r;
    let rad = contravariant_radical(m, p)?;
    if rad.dim() != p as usize {
        return Err(ModlieError::Internal(format!(
            "radical of V({m}) has dimension {} (want {p})",
            rad.dim()
        )));
    }
    weyl_module(m, p).restrict(&rad)
}

/// Highest-weight peeling: decompose as a direct sum of F-strings
/// generated by H-eigenvectors in ker E. Returns the string lengths
/// when the strings exhaust the module and are E-stable; `None` when
/// the module is not semisimple in this tested sense.
pub fn peel_highest_weights(module: &Sl2Module) -> Option<Vec<usize>> {
    let fld = module.field();
    let n = module.dim();
    let kere = Subspace::from_matrix(&module.e.kernel());
    // H-eigenvectors inside ker E, residue by residue.
    let mut strings: Vec<Vec<Vec<u64>>> = Vec::new();
    for lam in 0..module.p {
        let mut shifted = module.h.clone();
        for i in 0..n {
            let v = fld.sub(shifted.at(i, i), &lam);
            shifted.set(i, i, v);
        }
        let eig = Subspace::from_matrix(&shifted.kernel()).intersect(&kere);
        for hv in eig.basis_rows() {
            // F-string from hv.
            let mut string = vec![hv.clone()];
            let mut cur = hv;
            loop {
                cur = module.f.apply(&cur);
                if cur.iter().all(|&x| x == 0) {
                    break;
                }
                string.push(cur.clone());
                if string.len() > n {
                    return None;
                }
            }
            strings.push(string);
        }
    }
    // Direct sum covering the module, each string E-stable.
    let mut total = Subspace::zero(fld, n);
    let mut lens = Vec::new();
    for string in &strings {
        let sub = Subspace::span(fld, n, string);
        if sub.dim() != string.len() {
            return None;
        }
        for v in string {
            let img = module.e.apply(v);
            if !sub.contains(&img) {
                return None;
            }
        }
        let before = total.dim();
        for v in string {
            total.insert(v);
        }
        if total.dim() != before + string.len() {
            return None; // not a direct sum
        }
        lens.push(string.len());
    }
    if total.dim() == n {
        lens.sort();
        Some(lens)
    } else {
        None
    }
}

/// The deterministic test universe for the fixed-space battery: Weyl
/// modules V(m) for m <= 2p-2 with p not dividing m+1, their duals,
/// pairwise direct sums up to dimension 40, and the maximal submodules
/// of V(p + r).
pub fn battery_universe(p: u64) -> Vec<(String, Sl2Module)> {
    let mut out: Vec<(String, Sl2Module)> = Vec::new();
    let mut weyls = Vec::new();
    for m in 0..=(2 * p - 2) {
        if (m + 1) % p == 0 {
            continue;
        }
        let w = weyl_module(m, p);
        out.push((format!("V({m})"), w.clone()));
        out.push((format!("V({m})*"), combine(&[&w], CombineMode::Dual)));
        weyls.push((m, w));
    }
    for (m1, w1) in &weyls {
        for (m2, w2) in &weyls {
            if m1 > m2 || w1.dim() + w2.dim() > 40 {
                continue;
            }
            out.push((
                format!("V({m1})+V({m2})"),
                combine(&[w1, w2], CombineMode::DirectSum),
            ));
        }
    }
    for r in 0..=(p - 2) {
        if let Ok(ms) = maximal_submodule(r, p) {
            out.push((format!("maxsub V({})", p + r), ms));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_module() {
        let v0 = weyl_module(0, 5);
        assert_eq!(v0.dim(), 1);
        assert!(v0.e.is_zero() && v0.h.is_zero() && v0.f.is_zero());
    }

    #[test]
    fn natural_module_spectrum() {
        let v1 = weyl_module(1, 5);
        assert_eq!(v1.dim(), 2);
        assert!(v1.verify_relations());
        assert_eq!(*v1.h.at(0, 0), 1);
        assert_eq!(*v1.h.at(1, 1), 4); // -1 mod 5
    }

    #[test]
    fn steinberg_nilpotency() {
        for p in [5u64, 7] {
            let st = weyl_module(p - 1, p);
            let ep = st.e.pow_square(p - 1);
            assert!(!ep.is_zero());
            assert!(st.e.pow_square(p).is_zero());
        }
    }

    #[test]
    fn dual_preserves_h_spectrum() {
        let v1 = weyl_module(1, 5);
        let d = combine(&[&v1], CombineMode::Dual);
        assert!(d.verify_relations());
        let mut spec: Vec<u64> = (0..2).map(|i| *d.h.at(i, i)).collect();
        spec.sort();
        assert_eq!(spec, vec![1, 4]);
    }

    #[test]
    fn tensor_square_of_natural() {
        let v1 = weyl_module(1, 5);
        let t = combine(&[&v1, &v1], CombineMode::Tensor);
        assert_eq!(t.dim(), 4);
        assert!(t.verify_relations());
        let mut spec: Vec<u64> = (0..4).map(|i| *t.h.at(i, i)).collect();
        spec.sort();
        // {2, 0, 0, -2} over F_5
        assert_eq!(spec, vec![0, 0, 2, 3]);
    }

    #[test]
    fn direct_sum_dimension() {
        let v2 = weyl_module(2, 5);
        let v0 = weyl_module(0, 5);
        let s = combine(&[&v2, &v0], CombineMode::DirectSum);
        assert_eq!(s.dim(), 4);
        assert!(s.verify_relations());
    }

    #[test]
    fn fixed_space_examples() {
        let v2 = weyl_module(2, 5);
        assert_eq!(v2.fixed_space_dim(0, 1, 0), 1);
        let v1 = weyl_module(1, 5);
        assert_eq!(v1.fixed_space_dim(0, 1, 0), 0);
        let st = weyl_module(4, 5);
        assert_eq!(st.fixed_space_dim(1, 0, 0), 1);
    }

    #[test]
    fn maximal_submodule_structure() {
        for p in [5u64, 7] {
            for r in 0..=(p - 2) {
                let ms = maximal_submodule(r, p).unwrap();
                assert_eq!(ms.dim(), p as usize);
                assert!(ms.verify_relations());
                // Fixed space of H on the submodule is 1-dimensional
                // (the l = 1 case).
                assert_eq!(ms.fixed_space_dim(0, 1, 0), 1);
            }
        }
    }

    #[test]
    fn semisimple_battery_universe_fixed_spaces() {
        // dim V_H <= dim V_y for every y, over the generated universe.
        for p in [5u64] {
            let mut rng = ChaCha8Rng::seed_from_u64(2024);
            for (name, module) in battery_universe(p) {
                assert!(module.verify_relations(), "{name}");
                let dh = module.fixed_space_dim(0, 1, 0);
                for _ in 0..50 {
                    let (a, b, c) = (
                        rng.gen_range(0..p),
                        rng.gen_range(0..p),
                        rng.gen_range(0..p),
                    );
                    if a == 0 && b == 0 && c == 0 {
                        continue;
                    }
                    let dy = module.fixed_space_dim(a, b, c);
                    assert!(dh <= dy, "{name}: dim V_H = {dh} > dim V_y = {dy}");
                }
            }
        }
    }

    #[test]
    fn peeling_on_small_semisimple_modules() {
        let p = 5;
        let v2 = weyl_module(2, p);
        let v0 = weyl_module(0, p);
        let s = combine(&[&v2, &v0], CombineMode::DirectSum);
        assert_eq!(peel_highest_weights(&s), Some(vec![1, 3]));
        // The E/F nilpotency hypothesis holds here.
        assert!(s.e.pow_square(p - 1).is_zero());
        assert!(s.f.pow_square(p - 1).is_zero());
    }

    #[test]
    fn peeling_excluded_for_steinberg_like() {
        // V(p-1) has E^{p-1} != 0; the nilpotency hypothesis fails, and
        // peeling still succeeds (it is irreducible) - the remark's
        // converse direction only constrains reducible indecomposables.
        let p = 5;
        let ms = maximal_submodule(0, p).unwrap();
        // The maximal submodule of V(p) is reducible indecomposable;
        // peeling must fail on it.
        assert_eq!(peel_highest_weights(&ms), None);
        assert!(!ms.e.pow_square(p - 1).is_zero() || !ms.f.pow_square(p - 1).is_zero());
    }
}
