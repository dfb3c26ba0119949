//! The exact linear-algebraic core: brackets, centralisers, normalisers,
//! subalgebra generation, restricted p-th power maps, sl2-triples and
//! orbit fingerprints, over F_p and (for the characteristic-zero
//! oracles) over the rationals.

use crate::error::ModlieError;
use crate::field::{Field, Fp, Rationals};
use crate::linalg::{Matrix, Subspace};
use crate::rootsys::{Cocharacter, RootSystem};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

/// Sparse integral structure constants, shared between all field
/// specialisations of one algebra.
pub struct BracketTable {
    pub dim: usize,
    entries: Vec<Vec<(u32, i64)>>,
    flat: Vec<(u32, u32, u32, i64)>,
}

impl BracketTable {
    pub fn new(dim: usize, entries: Vec<Vec<(u32, i64)>>) -> BracketTable {
        assert_eq!(entries.len(), dim * dim);
        let mut flat = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for &(k, c) in &entries[i * dim + j] {
                    flat.push((i as u32, j as u32, k, c));
                }
            }
        }
        BracketTable { dim, entries, flat }
    }

    #[inline]
    pub fn pairs(&self, i: usize, j: usize) -> &[(u32, i64)] {
        &self.entries[i * self.dim + j]
    }

    pub fn nnz(&self) -> usize {
        self.flat.len()
    }
}

/// A Lie algebra given by structure constants over a fixed field.
#[derive(Clone)]
pub struct LieAlgebra<F: Field> {
    pub field: F,
    pub table: Arc<BracketTable>,
    pub labels: Arc<Vec<String>>,
    /// Present when the basis is a Chevalley basis; enables gradings.
    pub root_system: Option<Arc<RootSystem>>,
}

pub type Element<F> = Vec<<F as Field>::Elem>;

/// Invariants of a nilpotent element that identify its orbit: the
/// centraliser dimension, the kernel profile of the powers of ad e, the
/// nildegree, and the dimension of the derived centraliser.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitFingerprint {
    pub dim_centralizer: usize,
    pub kernel_profile: Vec<usize>,
    pub nildegree: usize,
    pub dim_image_square: usize,
}

impl<F: Field> LieAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.table.dim
    }

    pub fn zero(&self) -> Element<F> {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis_element(&self, i: usize) -> Element<F> {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn from_coords(&self, coords: &[(usize, i64)]) -> Element<F> {
        let mut v = self.zero();
        for &(i, c) in coords {
            v[i] = self.field.add(&v[i], &self.field.from_i64(c));
        }
        v
    }

    pub fn is_zero_elem(&self, x: &[F::Elem]) -> bool {
        x.iter().all(|c| self.field.is_zero(c))
    }

    pub fn scale(&self, c: &F::Elem, x: &[F::Elem]) -> Element<F> {
        x.iter().map(|v| self.field.mul(v, c)).collect()
    }

    pub fn add(&self, x: &[F::Elem], y: &[F::Elem]) -> Element<F> {
        x.iter().zip(y).map(|(a, b)| self.field.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[F::Elem], y: &[F::Elem]) -> Element<F> {
        x.iter().zip(y).map(|(a, b)| self.field.sub(a, b)).collect()
    }

    /// The Lie bracket, extended bilinearly from the table.
    pub fn bracket(&self, x: &[F::Elem], y: &[F::Elem]) -> Element<F> {
        assert_eq!(x.len(), self.dim(), "element belongs to another algebra");
        assert_eq!(y.len(), self.dim(), "element belongs to another algebra");
        let f = &self.field;
        let mut out = self.zero();
        for &(i, j, k, c) in &self.table.flat {
            let xi = &x[i as usize];
            if f.is_zero(xi) {
                continue;
            }
            let yj = &y[j as usize];
            if f.is_zero(yj) {
                continue;
            }
            let prod = f.mul(&f.mul(xi, yj), &f.from_i64(c));
            out[k as usize] = f.add(&out[k as usize], &prod);
        }
        out
    }

    /// Bracket of a basis vector with a general element, using only the
    /// sparse rows of the table.
    pub fn bracket_basis_elem(&self, i: usize, y: &[F::Elem]) -> Element<F> {
        let f = &self.field;
        let mut out = self.zero();
        for (j, yj) in y.iter().enumerate() {
            if f.is_zero(yj) {
                continue;
            }
            for &(k, c) in self.table.pairs(i, j) {
                out[k as usize] = f.mul_add(&out[k as usize], yj, &f.from_i64(c));
            }
        }
        out
    }

    /// Matrix of ad(x): column j is [x, b_j].
    pub fn ad_matrix(&self, x: &[F::Elem]) -> Matrix<F> {
        let f = &self.field;
        let n = self.dim();
        let mut m = Matrix::zeros(self.field.clone(), n, n);
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for j in 0..n {
                for &(k, c) in self.table.pairs(i, j) {
                    let v = f.mul_add(m.at(k as usize, j), xi, &f.from_i64(c));
                    m.set(k as usize, j, v);
                }
            }
        }
        m
    }

    pub fn is_ad_nilpotent(&self, x: &[F::Elem]) -> bool {
        let m = self.ad_matrix(x);
        m.pow_square(self.dim() as u64).is_zero()
    }

    /// Least k >= 1 with (ad x)^k = 0; `None` when x is not nilpotent.
    pub fn nildegree(&self, x: &[F::Elem]) -> Option<usize> {
        let m = self.ad_matrix(x);
        let mut pow = m.clone();
        for k in 1..=self.dim() + 1 {
            if pow.is_zero() {
                return Some(k);
            }
            pow = pow.mat_mul(&m);
        }
        None
    }

    /// (ad x)^m = 0, checked column by column with early abort; much
    /// cheaper than `nildegree` when used as a rejection filter.
    pub fn ad_power_annihilates(&self, x: &[F::Elem], m: usize) -> bool {
        let f = &self.field;
        for j in 0..self.dim() {
            let mut v = self.basis_element(j);
            for _ in 0..m {
                v = self.bracket(x, &v);
                if v.iter().all(|c| f.is_zero(c)) {
                    break;
                }
            }
            if !v.iter().all(|c| f.is_zero(c)) {
                return false;
            }
        }
        true
    }

    /// Centraliser of a single element; always a subalgebra, with the
    /// flag set after an explicit closure check.
    pub fn centralizer_elem(&self, x: &[F::Elem]) -> Subspace<F> {
        let m = self.ad_matrix(x);
        let mut s = Subspace::from_matrix(&m.kernel());
        s.flag_subalgebra = Some(self.is_bracket_closed(&s));
        s
    }

    /// Centraliser of a subspace: the joint kernel of ad over its rows.
    pub fn centralizer(&self, s: &Subspace<F>) -> Subspace<F> {
        let n = self.dim();
        if s.dim() == 0 {
            let mut full = Subspace::full(self.field.clone(), n);
            full.flag_subalgebra = Some(true);
            return full;
        }
        let mut stacked = Matrix::zeros(self.field.clone(), 0, n);
        for row in s.basis_rows() {
            let m = self.ad_matrix(&row);
            stacked = stacked.vstack(&m);
        }
        let mut out = Subspace::from_matrix(&stacked.kernel());
        if s.flag_subalgebra == Some(true) {
            out.flag_subalgebra = Some(self.is_bracket_closed(&out));
        }
        out
    }

    /// Normaliser {x : [x, s] in s}.
    pub fn normalizer(&self, s: &Subspace<F>) -> Subspace<F> {
        let f = self.field.clone();
        let n = self.dim();
        let pivot_set: std::collections::HashSet<usize> = s.pivots().iter().copied().collect();
        let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
        let mut constraints = Matrix::zeros(f.clone(), 0, n);
        for row in s.basis_rows() {
            // Residuals of [b_j, row] after reduction by s, one
            // constraint row per free coordinate.
            let mut residuals: Vec<Vec<F::Elem>> = Vec::with_capacity(n);
            for j in 0..n {
                let br = self.bracket_basis_elem(j, &row);
                residuals.push(s.reduce(&br));
            }
            for &c in &free_cols {
                let mut crow = vec![f.zero(); n];
                let mut nonzero = false;
                for (j, r) in residuals.iter().enumerate() {
                    if !f.is_zero(&r[c]) {
                        nonzero = true;
                    }
                    crow[j] = r[c].clone();
                }
                if nonzero {
                    constraints.push_row(&crow);
                }
            }
        }
        let mut out = Subspace::from_matrix(&constraints.kernel());
        out.flag_subalgebra = Some(self.is_bracket_closed(&out));
        out
    }

    /// Smallest bracket-closed subspace containing the generators.
    pub fn generate_subalgebra(&self, gens: &[Element<F>]) -> Subspace<F> {
        assert!(!gens.is_empty(), "empty generator list");
        let mut span = Subspace::zero(self.field.clone(), self.dim());
        let mut frontier: Vec<Element<F>> = Vec::new();
        for g in gens {
            if span.insert(g) {
                frontier.push(g.clone());
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            let current = span.basis_rows();
            for g in &frontier {
                for row in &current {
                    let br = self.bracket(g, row);
                    if span.insert(&br) {
                        next.push(br);
                    }
                }
            }
            // Brackets among newly added rows are covered in the next
            // sweep because `current` is refreshed.
            frontier = next;
        }
        // One confirming sweep: closure.
        debug_assert!(self.is_bracket_closed(&span));
        let mut out = span;
        out.flag_subalgebra = Some(true);
        out
    }

    pub fn is_bracket_closed(&self, s: &Subspace<F>) -> bool {
        let rows = s.basis_rows();
        for (i, u) in rows.iter().enumerate() {
            for v in rows.iter().skip(i + 1) {
                if !s.contains(&self.bracket(u, v)) {
                    return false;
                }
            }
        }
        true
    }

    /// Span of all brackets of basis rows of s (the derived subspace
    /// when s is a subalgebra).
    pub fn derived_subspace(&self, s: &Subspace<F>) -> Subspace<F> {
        let rows = s.basis_rows();
        let mut out = Subspace::zero(self.field.clone(), self.dim());
        'outer: for (i, u) in rows.iter().enumerate() {
            for v in rows.iter().skip(i + 1) {
                out.insert(&self.bracket(u, v));
                if out.dim() == self.dim() {
                    break 'outer;
                }
            }
        }
        out
    }

    /// Verifies [I, V] subset V and then decides whether every element
    /// of I acts nilpotently on V, via the descending chain
    /// V, [I,V], [I,[I,V]], ...
    pub fn engel_nil_check(
        &self,
        ideal: &Subspace<F>,
        v: &Subspace<F>,
    ) -> Result<bool, ModlieError> {
        for i_row in ideal.basis_rows() {
            for v_row in v.basis_rows() {
                if !v.contains(&self.bracket(&i_row, &v_row)) {
                    return Err(ModlieError::Mismatch("[I, V] is not contained in V".into()));
                }
            }
        }
        let mut w = v.clone();
        loop {
            let mut next = Subspace::zero(self.field.clone(), self.dim());
            for i_row in ideal.basis_rows() {
                for w_row in w.basis_rows() {
                    next.insert(&self.bracket(&i_row, &w_row));
                }
            }
            if next.dim() == 0 {
                return Ok(true);
            }
            if next.dim() >= w.dim() {
                return Ok(false);
            }
            w = next;
        }
    }

    /// True iff [e, [e, s]] lies in the line k*e and e is nonzero.
    pub fn is_minimal_nilpotent(
        &self,
        e: &[F::Elem],
        s: &Subspace<F>,
    ) -> Result<bool, ModlieError> {
        if !s.contains(e) {
            return Err(ModlieError::NotContained);
        }
        if self.is_zero_elem(e) {
            return Ok(false);
        }
        let line = Subspace::from_rows(self.field.clone(), &[e.to_vec()]);
        for row in s.basis_rows() {
            let w = self.bracket(e, &self.bracket(e, &row));
            if !line.contains(&w) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Reachability: e lies in the derived subspace of its centraliser.
    pub fn is_reachable(&self, e: &[F::Elem]) -> Result<bool, ModlieError> {
        if !self.is_ad_nilpotent(e) {
            return Err(ModlieError::NotNilpotent);
        }
        let cent = self.centralizer_elem(e);
        let der = self.derived_subspace(&cent);
        Ok(der.contains(e))
    }

    pub fn orbit_fingerprint(&self, e: &[F::Elem]) -> Result<OrbitFingerprint, ModlieError> {
        let n = self.dim();
        let m = self.ad_matrix(e);
        let mut kernel_profile = Vec::new();
        let mut pow = m.clone();
        let mut nildegree = None;
        for k in 1..=n + 1 {
            if pow.is_zero() {
                // Kernel of the vanishing power is everything; the
                // profile runs over k = 1..nildegree.
                kernel_profile.push(n);
                nildegree = Some(k);
                break;
            }
            kernel_profile.push(n - pow.rank());
            pow = pow.mat_mul(&m);
        }
        let Some(nildegree) = nildegree else {
            return Err(ModlieError::NotNilpotent);
        };
        let cent = self.centralizer_elem(e);
        let der = self.derived_subspace(&cent);
        Ok(OrbitFingerprint {
            dim_centralizer: cent.dim(),
            kernel_profile,
            nildegree,
            dim_image_square: der.dim(),
        })
    }
}

/// Operations requiring a Chevalley basis (root-graded structure).
impl<F: Field> LieAlgebra<F> {
    pub fn rs(&self) -> &RootSystem {
        self.root_system
            .as_ref()
            .expect("operation requires a Chevalley basis")
    }

    pub fn npos(&self) -> usize {
        self.rs().positive_roots.len()
    }

    /// Weight of each basis vector under a cocharacter.
    pub fn cocharacter_weights(&self, tau: &Cocharacter) -> Result<Vec<i64>, ModlieError> {
        let rs = self.rs();
        if tau.coweight_coords.len() != rs.rank {
            return Err(ModlieError::Mismatch("cocharacter rank mismatch".into()));
        }
        let mut w: Vec<i64> = rs.all_roots().iter().map(|r| tau.pairing(r)).collect();
        w.extend(std::iter::repeat(0).take(rs.rank));
        Ok(w)
    }

    pub fn graded_component(&self, tau: &Cocharacter, weight: i64) -> Subspace<F> {
        let w = self.cocharacter_weights(tau).expect("rank match");
        let rows: Vec<Element<F>> = (0..self.dim())
            .filter(|&i| w[i] == weight)
            .map(|i| self.basis_element(i))
            .collect();
        Subspace::span(self.field.clone(), self.dim(), &rows)
    }

    /// Fixed points of the involution tau(-1): the Cartan together with
    /// the root vectors of even cocharacter weight.
    pub fn fixed_point_subalgebra(&self, tau: &Cocharacter) -> Result<Subspace<F>, ModlieError> {
        if self.field.characteristic() == 2 {
            return Err(ModlieError::Unsupported("characteristic 2".into()));
        }
        let w = self.cocharacter_weights(tau)?;
        let rows: Vec<Element<F>> = (0..self.dim())
            .filter(|&i| w[i] % 2 == 0)
            .map(|i| self.basis_element(i))
            .collect();
        let keep: Vec<bool> = (0..self.dim()).map(|i| w[i] % 2 == 0).collect();
        let mut s = Subspace::span(self.field.clone(), self.dim(), &rows);
        // Closure check on the sparse table: both inputs fixed forces
        // the output to be fixed.
        let mut closed = true;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if keep[i]
                    && keep[j]
                    && self
                        .table
                        .pairs(i, j)
                        .iter()
                        .any(|&(k, _)| !keep[k as usize])
                {
                    closed = false;
                }
            }
        }
        s.flag_subalgebra = Some(closed);
        Ok(s)
    }
}

impl LieAlgebra<Fp> {
    pub fn p(&self) -> u64 {
        self.field.p()
    }

    /// The algebra has zero centre; cached after the first computation.
    pub fn is_centerless(&self) -> bool {
        static CACHE: OnceLock<std::sync::Mutex<HashMap<(usize, u64), bool>>> = OnceLock::new();
        let key = (Arc::as_ptr(&self.table) as usize, self.p());
        let cache = CACHE.get_or_init(|| std::sync::Mutex::new(HashMap::new()));
        if let Some(&v) = cache.lock().unwrap().get(&key) {
            return v;
        }
        let n = self.dim();
        let mut stacked = Matrix::zeros(self.field, 0, n);
        // y is central iff [y, b_j] = 0 for all j; rows indexed by (j,k).
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for j in 0..n {
            let mut slab: HashMap<u32, Vec<u64>> = HashMap::new();
            for i in 0..n {
                for &(k, c) in self.table.pairs(i, j) {
                    slab.entry(k).or_insert_with(|| vec![0; n])[i] = self.field.from_i64(c);
                }
            }
            for (_, row) in slab {
                rows.push(row);
            }
        }
        for r in rows {
            stacked.push_row(&r);
        }
        let v = stacked.kernel().rows == 0;
        cache.lock().unwrap().insert(key, v);
        v
    }

    /// The unique y with ad(y) = (ad x)^p. Requires a centreless
    /// algebra; the result is verified against the full matrix equation.
    pub fn p_power(&self, x: &[u64]) -> Result<Element<Fp>, ModlieError> {
        let p = self.p();
        let n = self.dim();
        if !self.is_centerless() {
            return Err(ModlieError::NonzeroCenter);
        }
        let m = self.ad_matrix(x);
        let target = m.pow_square_fp(p);
        // Assemble rows of the system sum_i y_i c(i,j,k) = target[k][j]
        // until full column rank, j by j.
        let f = self.field;
        let mut sys = Matrix::zeros(f, 0, n);
        let mut rhs: Vec<u64> = Vec::new();
        let mut probe = Subspace::zero(f, n);
        'outer: for j in 0..n {
            let mut slab: HashMap<u32, Vec<u64>> = HashMap::new();
            for i in 0..n {
                for &(k, c) in self.table.pairs(i, j) {
                    slab.entry(k).or_insert_with(|| vec![0; n])[i] = f.from_i64(c);
                }
            }
            let mut keys: Vec<u32> = slab.keys().copied().collect();
            keys.sort();
            for k in keys {
                let row = &slab[&k];
                if probe.insert(row) {
                    sys.push_row(row);
                    rhs.push(*target.at(k as usize, j));
                    if sys.rows == n {
                        break 'outer;
                    }
                }
            }
        }
        let y = sys
            .solve(&rhs)
            .ok_or_else(|| ModlieError::Internal("inconsistent p-power system".into()))?;
        // Exact verification of ad(y) = (ad x)^p, column by column.
        for j in 0..n {
            let col = self.bracket_basis_elem(j, &y); // [b_j, y] = -[y, b_j]
            for k in 0..n {
                let want = f.neg(target.at(k, j));
                if col[k] != want {
                    return Err(ModlieError::Internal(
                        "no solution to ad(y) = (ad x)^p".into(),
                    ));
                }
            }
        }
        Ok(y)
    }

    /// Jacobson terms s_1..s_{p-1}: i*s_i is the coefficient of t^{i-1}
    /// in ad(tx+y)^{p-1}(x), computed in g tensor F_p[t].
    pub fn jacobson_terms(&self, x: &[u64], y: &[u64]) -> Vec<Element<Fp>> {
        let p = self.p() as usize;
        let f = self.field;
        let n = self.dim();
        // poly[d] = vector coefficient of t^d
        let mut poly: Vec<Element<Fp>> = vec![x.to_vec()];
        for _ in 0..p - 1 {
            let mut next: Vec<Element<Fp>> = vec![vec![0; n]; poly.len() + 1];
            for (d, coeff) in poly.iter().enumerate() {
                let bx = self.bracket(x, coeff);
                let by = self.bracket(y, coeff);
                for k in 0..n {
                    next[d + 1][k] = f.add(&next[d + 1][k], &bx[k]);
                    next[d][k] = f.add(&next[d][k], &by[k]);
                }
            }
            poly = next;
        }
        let mut out = Vec::with_capacity(p - 1);
        for i in 1..p {
            let coeff = poly.get(i - 1).cloned().unwrap_or_else(|| vec![0; n]);
            let inv_i = f.inv(&f.from_i64(i as i64)).unwrap();
            out.push(self.scale(&inv_i, &coeff));
        }
        out
    }

    /// A subalgebra is restricted as soon as the p-th power of every
    /// basis row lies back in the row space.
    pub fn is_restricted_subalgebra(&self, s: &Subspace<Fp>) -> Result<bool, ModlieError> {
        if s.flag_subalgebra != Some(true) && !self.is_bracket_closed(s) {
            return Err(ModlieError::NotSubalgebra);
        }
        for row in s.basis_rows() {
            let pw = self.p_power(&row)?;
            if !s.contains(&pw) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mark the restricted flag on a subspace after verification.
    pub fn with_restricted_flag(&self, mut s: Subspace<Fp>) -> Result<Subspace<Fp>, ModlieError> {
        let r = self.is_restricted_subalgebra(&s)?;
        s.flag_subalgebra = Some(true);
        s.flag_restricted = Some(r);
        Ok(s)
    }

    /// Span of x, x^[p], x^[p^2], ... until stabilisation.
    pub fn toral_closure(&self, x: &[u64]) -> Subspace<Fp> {
        let mut span = Subspace::zero(self.field, self.dim());
        let mut y = x.to_vec();
        let mut seen: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
        for _ in 0..4 * self.dim() + 4 {
            if !seen.insert(y.clone()) {
                break;
            }
            span.insert(&y);
            y = self.p_power(&y).expect("p-power in toral closure");
            if self.is_zero_elem(&y) {
                break;
            }
        }
        span
    }

    /// Semisimple means x lies in the span of its iterated p-th powers
    /// starting from x^[p].
    pub fn is_semisimple_elem(&self, x: &[u64]) -> bool {
        let mut span = Subspace::zero(self.field, self.dim());
        let mut y = self.p_power(x).expect("p-power");
        let mut seen: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
        for _ in 0..4 * self.dim() + 4 {
            if self.is_zero_elem(&y) || !seen.insert(y.clone()) {
                break;
            }
            span.insert(&y);
            y = self.p_power(&y).expect("p-power");
        }
        span.contains(x)
    }

    /// For semisimple x: is the derived subalgebra of the centraliser
    /// closed under the p-map?
    pub fn restricted_derived_centralizer_check(&self, x: &[u64]) -> Result<bool, ModlieError> {
        if !self.is_zero_elem(x) && !self.is_semisimple_elem(x) {
            return Err(ModlieError::NotSemisimple);
        }
        let cent = self.centralizer_elem(x);
        let der = self.derived_subspace(&cent);
        for row in der.basis_rows() {
            let pw = self.p_power(&row)?;
            if !der.contains(&pw) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Complete a nilpotent e to an sl2-triple (e, h, f) with h in the
    /// image of ad e, solved by two staged linear systems.
    pub fn sl2_complete(
        &self,
        e: &[u64],
    ) -> Result<(Element<Fp>, Element<Fp>, Element<Fp>), ModlieError> {
        if !self.is_ad_nilpotent(e) {
            return Err(ModlieError::NotNilpotent);
        }
        let f = self.field;
        let m = self.ad_matrix(e);
        // Stage 1: (ad e)^2 w = -2e, then h = [e, w].
        let m2 = m.mat_mul(&m);
        let rhs: Vec<u64> = e.iter().map(|c| f.mul(&f.from_i64(-2), c)).collect();
        let w = m2.solve(&rhs).ok_or(ModlieError::NotSl2Embeddable)?;
        let h = self.bracket(e, &w);
        // Stage 2: [e, x] = h and [h, x] = -2x simultaneously.
        let adh = self.ad_matrix(&h);
        let two = Matrix::identity(f, self.dim()).scale(&f.from_i64(2));
        let stacked = m.vstack(&adh.add_mat(&two));
        let mut rhs2 = h.clone();
        rhs2.extend(vec![0u64; self.dim()]);
        let fv = stacked.solve(&rhs2).ok_or(ModlieError::NotSl2Embeddable)?;
        debug_assert_eq!(self.bracket(&h, &e.to_vec()), self.scale(&f.from_i64(2), e));
        Ok((e.to_vec(), h, fv))
    }

    /// Eigenspace comparison: for every residue class the eigenspace of
    /// ad h_tau must equal the span of the tau-graded components with
    /// matching weight mod p. On failure returns a witness description.
    pub fn h_tau_grading_check(&self, tau: &Cocharacter) -> Result<(), String> {
        let p = self.p();
        let h_tau = self.h_tau(tau).map_err(|e| e.to_string())?;
        let weights = self.cocharacter_weights(tau).map_err(|e| e.to_string())?;
        let adh = self.ad_matrix(&h_tau);
        let f = self.field;
        for residue in 0..p {
            let shifted = {
                let mut m = adh.clone();
                for i in 0..self.dim() {
                    let v = f.sub(m.at(i, i), &residue);
                    m.set(i, i, v);
                }
                m
            };
            let eig = Subspace::from_matrix(&shifted.kernel());
            let rows: Vec<Element<Fp>> = (0..self.dim())
                .filter(|&i| f.from_i64(weights[i]) == residue)
                .map(|i| self.basis_element(i))
                .collect();
            let graded = Subspace::span(f, self.dim(), &rows);
            if eig != graded {
                return Err(format!(
                    "residue {residue}: eigenspace dim {} vs graded dim {}",
                    eig.dim(),
                    graded.dim()
                ));
            }
        }
        Ok(())
    }

    /// The toral element h_tau = sum tau_i t_i where the t_i are the
    /// coweight duals in the Cartan (requires p coprime to det Cartan).
    pub fn h_tau(&self, tau: &Cocharacter) -> Result<Element<Fp>, ModlieError> {
        let rs = self.rs();
        if tau.coweight_coords.len() != rs.rank {
            return Err(ModlieError::Mismatch("cocharacter rank mismatch".into()));
        }
        let f = self.field;
        // Solve m^T * cartan = coords: h = sum_l m_l h_l must pair with
        // alpha_j to tau_j: sum_l m_l cartan[l][j] = tau_j.
        let mut a = Matrix::zeros(f, rs.rank, rs.rank);
        for l in 0..rs.rank {
            for j in 0..rs.rank {
                a.set(j, l, f.from_i64(rs.cartan[l][j]));
            }
        }
        let rhs: Vec<u64> = tau.coweight_coords.iter().map(|&c| f.from_i64(c)).collect();
        let m = a
            .solve(&rhs)
            .ok_or_else(|| ModlieError::Unsupported("p divides det of the Cartan matrix".into()))?;
        let npos = self.npos();
        let mut h = self.zero();
        for (l, c) in m.iter().enumerate() {
            h[2 * npos + l] = *c;
        }
        Ok(h)
    }
}

impl LieAlgebra<Rationals> {
    /// The Cartan part of an sl2-triple through a nilpotent e over Q:
    /// the unique h in the Cartan meet Im(ad e) with [h, e] = 2e,
    /// returned in simple-coroot coordinates (integral).
    pub fn sl2_cartan_h(&self, e: &Element<Rationals>) -> Result<Vec<i64>, ModlieError> {
        use num_traits::ToPrimitive;
        if !self.is_ad_nilpotent(e) {
            return Err(ModlieError::NotNilpotent);
        }
        let rs = self.rs().clone();
        let f = Rationals;
        let n = self.dim();
        let npos = self.npos();
        // Column space of ad e intersected with the Cartan.
        let m = self.ad_matrix(e);
        let colspace = Subspace::from_matrix(&m.transpose());
        let cartan_rows: Vec<Element<Rationals>> = (0..rs.rank)
            .map(|i| self.basis_element(2 * npos + i))
            .collect();
        let cartan = Subspace::from_rows(f.clone(), &cartan_rows);
        let w = colspace.intersect(&cartan);
        if w.dim() == 0 {
            return Err(ModlieError::NotSl2Embeddable);
        }
        // Find h in W with [h, e] = 2e.
        let wrows = w.basis_rows();
        let mut sys = Matrix::zeros(f.clone(), n, w.dim());
        for (c, row) in wrows.iter().enumerate() {
            let br = self.bracket(row, e);
            for r in 0..n {
                sys.set(r, c, br[r].clone());
            }
        }
        let rhs: Vec<_> = e.iter().map(|x| f.mul(&f.from_i64(2), x)).collect();
        let coeffs = sys.solve(&rhs).ok_or(ModlieError::NotSl2Embeddable)?;
        let mut h = self.zero();
        for (c, row) in wrows.iter().enumerate() {
            for r in 0..n {
                h[r] = f.mul_add(&h[r], &coeffs[c], &row[r]);
            }
        }
        // h in simple-coroot coordinates; must be integral.
        let mut coords: Vec<i64> = Vec::with_capacity(rs.rank);
        for i in 0..rs.rank {
            let v = &h[2 * npos + i];
            let int = crate::field::rational_to_bigint(v)
                .and_then(|b| b.to_i64())
                .ok_or_else(|| ModlieError::Internal("non-integral sl2 coweight".into()))?;
            coords.push(int);
        }
        Ok(coords)
    }

    /// Pairings <alpha_i, h> of the sl2 Cartan element; this is the
    /// coweight vector of the cocharacter adapted to e itself.
    pub fn adapted_cocharacter(&self, e: &Element<Rationals>) -> Result<Cocharacter, ModlieError> {
        let rs = self.rs();
        let coords = self.sl2_cartan_h(e)?;
        let pair: Vec<i64> = (0..rs.rank)
            .map(|i| (0..rs.rank).map(|j| coords[j] * rs.cartan[j][i]).sum())
            .collect();
        Ok(Cocharacter::new(pair))
    }

    /// Weighted Dynkin diagram of a nilpotent element over Q: complete
    /// to an sl2-triple with h in the Cartan, then conjugate h into the
    /// dominant chamber by steepest ascent through simple reflections.
    pub fn dynkin_characteristic(&self, e: &Element<Rationals>) -> Result<Vec<i64>, ModlieError> {
        let rs = self.rs().clone();
        let mut coords = self.sl2_cartan_h(e)?;
        // Dominantise: while some <alpha_i, h> < 0, reflect at the most
        // negative value (ties broken by index).
        let pair = |coords: &[i64], i: usize| -> i64 {
            (0..rs.rank).map(|j| coords[j] * rs.cartan[j][i]).sum()
        };
        for _ in 0..100_000 {
            let vals: Vec<i64> = (0..rs.rank).map(|i| pair(&coords, i)).collect();
            let Some((i, _)) = vals
                .iter()
                .enumerate()
                .filter(|(_, &v)| v < 0)
                .min_by_key(|(i, &v)| (v, *i))
            else {
                let out = vals;
                if out.iter().any(|&v| !(0..=2).contains(&v)) {
                    return Err(ModlieError::Internal(format!(
                        "characteristic outside {{0,1,2}}: {out:?}"
                    )));
                }
                return Ok(out);
            };
            coords = rs.reflect_coroot_coords(&coords, i);
        }
        Err(ModlieError::Internal(
            "dominantisation did not terminate".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::ChevalleyZ;
    use crate::rootsys::TypeLabel;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alg(label: TypeLabel, rank: usize, p: u64) -> LieAlgebra<Fp> {
        ChevalleyZ::new(&RootSystem::new(label, rank).unwrap()).over_fp(p)
    }

    fn random_elem(a: &LieAlgebra<Fp>, rng: &mut ChaCha8Rng) -> Element<Fp> {
        (0..a.dim()).map(|_| rng.gen_range(0..a.p())).collect()
    }

    #[test]
    fn bracket_basics() {
        let a2 = alg(TypeLabel::A, 2, 7);
        let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::A, 2).unwrap());
        let i_a1 = chev.root_vector_index(&vec![1, 0]).unwrap();
        let i_a2 = chev.root_vector_index(&vec![0, 1]).unwrap();
        let i_neg_a1 = chev.root_vector_index(&vec![-1, 0]).unwrap();
        let h1 = chev.coroot_index(0);
        // [e_a1, e_-a1] = h_a1
        let br = a2.bracket(&a2.basis_element(i_a1), &a2.basis_element(i_neg_a1));
        assert_eq!(br, a2.basis_element(h1));
        // [h_a1, e_a2] = -e_a2
        let br2 = a2.bracket(&a2.basis_element(h1), &a2.basis_element(i_a2));
        assert_eq!(
            br2,
            a2.scale(&a2.field.from_i64(-1), &a2.basis_element(i_a2))
        );
    }

    #[test]
    fn bracket_antisymmetric_on_random_elements() {
        let e7 = alg(TypeLabel::E, 7, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let x = random_elem(&e7, &mut rng);
            let y = random_elem(&e7, &mut rng);
            assert!(e7.is_zero_elem(&e7.bracket(&x, &x)));
            let xy = e7.bracket(&x, &y);
            let yx = e7.bracket(&y, &x);
            assert_eq!(xy, e7.scale(&e7.field.from_i64(-1), &yx));
        }
    }

    #[test]
    fn ad_diagonal_in_a1() {
        let a1 = alg(TypeLabel::A, 1, 5);
        let m = a1.ad_matrix(&a1.basis_element(2)); // h
        assert_eq!(*m.at(0, 0), 2);
        assert_eq!(*m.at(1, 1), 3); // -2 mod 5
        assert_eq!(*m.at(2, 2), 0);
    }

    #[test]
    fn ad_root_vector_cubed_vanishes_simply_laced() {
        let e6 = alg(TypeLabel::E, 6, 5);
        let m = a_pow(&e6, 0, 3);
        assert!(m.is_zero());
    }

    fn a_pow(a: &LieAlgebra<Fp>, idx: usize, k: u64) -> Matrix<Fp> {
        a.ad_matrix(&a.basis_element(idx)).pow_square(k)
    }

    #[test]
    fn trace_ad_basis_zero() {
        let g2 = alg(TypeLabel::G, 2, 7);
        for i in 0..g2.dim() {
            let m = g2.ad_matrix(&g2.basis_element(i));
            let mut tr = 0u64;
            for d in 0..g2.dim() {
                tr = g2.field.add(&tr, m.at(d, d));
            }
            assert_eq!(tr, 0);
        }
    }

    #[test]
    fn centralizer_of_zero_is_everything() {
        let a2 = alg(TypeLabel::A, 2, 5);
        let c = a2.centralizer_elem(&a2.zero());
        assert_eq!(c.dim(), 8);
    }

    #[test]
    fn generate_sl2_from_root_vectors() {
        let a1 = alg(TypeLabel::A, 1, 7);
        let s = a1.generate_subalgebra(&[a1.basis_element(0), a1.basis_element(1)]);
        assert_eq!(s.dim(), 3);
        // Idempotence: regenerating from the generated basis is stable.
        let rows: Vec<_> = s.basis_rows();
        let s2 = a1.generate_subalgebra(&rows);
        assert_eq!(s, s2);
    }

    #[test]
    fn normalizer_of_borel_in_sl2() {
        let a1 = alg(TypeLabel::A, 1, 5);
        let borel = Subspace::from_rows(a1.field, &[a1.basis_element(0), a1.basis_element(2)]);
        let n = a1.normalizer(&borel);
        assert_eq!(n.dim(), 2);
        assert!(n.contains_subspace(&borel));
    }

    #[test]
    fn p_power_of_root_vector_vanishes() {
        let e7 = alg(TypeLabel::E, 7, 5);
        let pw = e7.p_power(&e7.basis_element(0)).unwrap();
        assert!(e7.is_zero_elem(&pw));
    }

    #[test]
    fn p_power_of_coroot_is_itself_simply_laced() {
        let e6 = alg(TypeLabel::E, 6, 5);
        let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::E, 6).unwrap());
        let h = e6.basis_element(chev.coroot_index(2));
        let pw = e6.p_power(&h).unwrap();
        assert_eq!(pw, h);
    }

    #[test]
    fn p_power_homogeneity() {
        let g2 = alg(TypeLabel::G, 2, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x = random_elem(&g2, &mut rng);
            let lam = rng.gen_range(1..7);
            let lhs = g2.p_power(&g2.scale(&lam, &x)).unwrap();
            let lam_p = g2.field.pow(&lam, 7);
            let rhs = g2.scale(&lam_p, &g2.p_power(&x).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn jacobson_identity_random() {
        let g2 = alg(TypeLabel::G, 2, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let x = random_elem(&g2, &mut rng);
            let y = random_elem(&g2, &mut rng);
            let terms = g2.jacobson_terms(&x, &y);
            let mut sum = g2.add(&g2.p_power(&x).unwrap(), &g2.p_power(&y).unwrap());
            for t in &terms {
                sum = g2.add(&sum, t);
            }
            let lhs = g2.p_power(&g2.add(&x, &y)).unwrap();
            assert_eq!(lhs, sum);
        }
    }

    #[test]
    fn jacobson_commuting_pair_vanishes() {
        let a2 = alg(TypeLabel::A, 2, 5);
        let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::A, 2).unwrap());
        let h1 = a2.basis_element(chev.coroot_index(0));
        let h2 = a2.basis_element(chev.coroot_index(1));
        for s in a2.jacobson_terms(&h1, &h2) {
            assert!(a2.is_zero_elem(&s));
        }
    }

    #[test]
    fn jacobson_equal_arguments_sum_to_zero() {
        let g2 = alg(TypeLabel::G, 2, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_elem(&g2, &mut rng);
        let mut sum = g2.zero();
        for s in g2.jacobson_terms(&x, &x) {
            sum = g2.add(&sum, &s);
        }
        // (2x)^[p] = 2 x^[p] over F_p, so the correction terms cancel.
        assert!(g2.is_zero_elem(&sum));
    }

    #[test]
    fn sl2_span_is_restricted() {
        let e7 = alg(TypeLabel::E, 7, 5);
        let s = e7.generate_subalgebra(&[e7.basis_element(0), e7.basis_element(e7.npos())]);
        assert_eq!(s.dim(), 3);
        assert!(e7.is_restricted_subalgebra(&s).unwrap());
    }

    #[test]
    fn sl2_complete_in_a1() {
        let a1 = alg(TypeLabel::A, 1, 7);
        let (e, h, f) = a1.sl2_complete(&a1.basis_element(0)).unwrap();
        assert_eq!(a1.bracket(&h, &e), a1.scale(&2, &e));
        assert_eq!(a1.bracket(&e, &f), h);
        assert_eq!(a1.bracket(&h, &f), a1.scale(&a1.field.from_i64(-2), &f));
    }

    #[test]
    fn toral_closure_examples() {
        let a2 = alg(TypeLabel::A, 2, 5);
        let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::A, 2).unwrap());
        let h1 = a2.basis_element(chev.coroot_index(0));
        assert_eq!(a2.toral_closure(&h1).dim(), 1);
        let e = a2.basis_element(0);
        assert_eq!(a2.toral_closure(&e).dim(), 1);
        let mix = a2.add(&h1, &a2.scale(&2, &a2.basis_element(chev.coroot_index(1))));
        assert!(a2.toral_closure(&mix).dim() <= 2);
    }

    #[test]
    fn engel_chain_examples() {
        let a1 = alg(TypeLabel::A, 1, 5);
        let g = Subspace::full(a1.field, 3);
        let line_e = Subspace::from_rows(a1.field, &[a1.basis_element(0)]);
        let line_h = Subspace::from_rows(a1.field, &[a1.basis_element(2)]);
        assert!(a1.engel_nil_check(&line_e, &g).unwrap());
        assert!(!a1.engel_nil_check(&line_h, &g).unwrap());
    }

    #[test]
    fn minimal_nilpotent_examples() {
        let a2 = alg(TypeLabel::A, 2, 7);
        let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::A, 2).unwrap());
        let g = Subspace::full(a2.field, a2.dim());
        let e_high = a2.basis_element(chev.root_vector_index(&vec![1, 1]).unwrap());
        assert!(a2.is_minimal_nilpotent(&e_high, &g).unwrap());
        // Regular nilpotent fails.
        let reg = a2.add(&a2.basis_element(0), &a2.basis_element(1));
        assert!(!a2.is_minimal_nilpotent(&reg, &g).unwrap());
        assert!(!a2.is_minimal_nilpotent(&a2.zero(), &g).unwrap());
    }

    #[test]
    fn reachability_examples() {
        let a1 = alg(TypeLabel::A, 1, 5);
        assert!(!a1.is_reachable(&a1.basis_element(0)).unwrap());
        assert!(a1.is_reachable(&a1.zero()).unwrap());
    }

    #[test]
    fn fingerprint_of_zero() {
        let g2 = alg(TypeLabel::G, 2, 7);
        let fp = g2.orbit_fingerprint(&g2.zero()).unwrap();
        assert_eq!(fp.dim_centralizer, 14);
        assert_eq!(fp.nildegree, 1);
        assert_eq!(fp.dim_image_square, 14);
    }

    #[test]
    fn fingerprint_rejects_semisimple() {
        let a1 = alg(TypeLabel::A, 1, 5);
        assert!(a1.orbit_fingerprint(&a1.basis_element(2)).is_err());
    }

    #[test]
    fn dynkin_characteristic_small_types() {
        let a1 = ChevalleyZ::new(&RootSystem::new(TypeLabel::A, 1).unwrap()).over_rationals();
        let e = a1.basis_element(0);
        assert_eq!(a1.dynkin_characteristic(&e).unwrap(), vec![2]);

        let a2 = ChevalleyZ::new(&RootSystem::new(TypeLabel::A, 2).unwrap()).over_rationals();
        let reg = a2.add(&a2.basis_element(0), &a2.basis_element(1));
        assert_eq!(a2.dynkin_characteristic(&reg).unwrap(), vec![2, 2]);

        // Negative-side regular nilpotent in G2 dominantises to (2,2).
        let g2chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::G, 2).unwrap());
        let g2 = g2chev.over_rationals();
        let npos = g2chev.npos();
        let reg_neg = g2.add(&g2.basis_element(npos), &g2.basis_element(npos + 1));
        assert_eq!(g2.dynkin_characteristic(&reg_neg).unwrap(), vec![2, 2]);
    }

    #[test]
    fn h_tau_grading_small() {
        let a2 = alg(TypeLabel::A, 2, 5);
        assert!(a2.h_tau_grading_check(&Cocharacter::zero(2)).is_ok());
        assert!(a2
            .h_tau_grading_check(&Cocharacter::new(vec![1, 1]))
            .is_ok());
    }

    #[test]
    fn fixed_points_examples() {
        let a2 = alg(TypeLabel::A, 2, 5);
        let all = a2.fixed_point_subalgebra(&Cocharacter::zero(2)).unwrap();
        assert_eq!(all.dim(), a2.dim());
        let a1 = alg(TypeLabel::A, 1, 5);
        let cartan_only = a1
            .fixed_point_subalgebra(&Cocharacter::new(vec![1]))
            .unwrap();
        assert_eq!(cartan_only.dim(), 1);
    }

    #[test]
    fn centralizer_is_bracket_closed_for_random_elements() {
        let g2 = alg(TypeLabel::G, 2, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let x = random_elem(&g2, &mut rng);
            let c = g2.centralizer_elem(&x);
            assert_eq!(c.flag_subalgebra, Some(true));
            let n = g2.normalizer(&c);
            assert!(n.contains_subspace(&c));
        }
    }
}
