//! Integral Chevalley structure constants.
//!
//! Signs are fixed by the extraspecial-pairs method with the
//! deterministic total order on positive roots (height, then
//! lexicographic coordinates): the extraspecial pair of every
//! non-simple positive root gets a positive constant, and all other
//! constants follow from the Jacobi identity and the invariance
//! relation N(x,y)/(z,z) = N(y,z)/(x,x) for x+y+z = 0.
//!
//! Basis order: e_gamma for positive gamma in sort order, then the
//! matching negatives, then the simple coroots h_1..h_rank.

use crate::field::{Fp, Rationals};
use crate::liealg::{BracketTable, LieAlgebra};
use crate::rootsys::{Cocharacter, Root, RootSystem};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone)]
pub struct ChevalleyZ {
    pub rs: Arc<RootSystem>,
    pub table: Arc<BracketTable>,
    pub labels: Arc<Vec<String>>,
}

fn neg_root(r: &Root) -> Root {
    r.iter().map(|x| -x).collect()
}

fn add_root(a: &Root, b: &Root) -> Root {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_root(a: &Root, b: &Root) -> Root {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Structure constants N(a,b) for all pairs of positive roots whose sum
/// is a root, indexed by positions in the positive-root order.
fn positive_pair_constants(rs: &RootSystem) -> HashMap<(usize, usize), i64> {
    let npos = rs.positive_roots.len();
    let pos_index: HashMap<&Root, usize> = rs
        .positive_roots
        .iter()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();
    let mut n: HashMap<(usize, usize), i64> = HashMap::new();

    // Exact division helper for length-ratio scalings.
    let exact = |num: i64, den: i64| -> i64 {
        assert_eq!(num % den, 0, "non-integral structure constant ratio");
        num / den
    };

    // Positive-pair constant not yet entered for this gamma; both roots
    // strictly lower, so it is already in the map.
    let get = |n: &HashMap<(usize, usize), i64>, a: usize, b: usize| -> i64 {
        *n.get(&(a, b))
            .unwrap_or_else(|| panic!("constant ({a},{b}) not yet computed"))
    };

    for (g_idx, gamma) in rs.positive_roots.iter().enumerate() {
        // Special pairs (a, b): a + b = gamma, a < b in the total order.
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (a_idx, a) in rs.positive_roots.iter().enumerate().take(g_idx) {
            let b = sub_root(gamma, a);
            if let Some(&b_idx) = pos_index.get(&b) {
                if a_idx < b_idx {
                    pairs.push((a_idx, b_idx));
                }
            }
        }
        if pairs.is_empty() {
            continue;
        }
        pairs.sort();
        let (a1_idx, b1_idx) = pairs[0];
        let a1 = &rs.positive_roots[a1_idx];
        let b1 = &rs.positive_roots[b1_idx];
        let n_extra = rs.down_string(a1, b1) + 1;
        n.insert((a1_idx, b1_idx), n_extra);
        n.insert((b1_idx, a1_idx), -n_extra);

        let len = |r: &Root| rs.inner(r, r);

        for &(a_idx, b_idx) in pairs.iter().skip(1) {
            let a = &rs.positive_roots[a_idx];
            let b = &rs.positive_roots[b_idx];
            // mu = a - a1, sigma = b1 - a; either may fail to be a root.
            let mu = sub_root(a, a1);
            let sigma = sub_root(b1, a);

            // Jacobi identity on (e_{-a}, e_{a1}, e_{b1}), coefficient of
            // e_b:
            //   N(-a,a1) N(-mu,b1) + N(a1,b1) N(gamma,-a)
            //     + N(b1,-a) N(sigma,a1) = 0
            let term1 = if pos_index.contains_key(&mu) {
                let mu_idx = pos_index[&mu];
                // N(-a,a1) = (mu,mu)/(a,a) * N(a1,mu), a1 + mu = a
                let n_neg_a_a1 = exact(len(&mu) * get(&n, a1_idx, mu_idx), len(a));
                // N(-mu,b1) = -(b,b)/(b1,b1) * N(b,mu), b + mu = b1
                let n_neg_mu_b1 = -exact(len(b) * get(&n, b_idx, mu_idx), len(b1));
                n_neg_a_a1 * n_neg_mu_b1
            } else {
                0
            };
            let term3 = if pos_index.contains_key(&sigma) {
                let s_idx = pos_index[&sigma];
                // N(b1,-a) = -(sigma,sigma)/(b1,b1) * N(a,sigma), a + sigma = b1
                let n_b1_neg_a = -exact(len(&sigma) * get(&n, a_idx, s_idx), len(b1));
                // N(sigma,a1): sigma + a1 = b
                n_b1_neg_a * get(&n, s_idx, a1_idx)
            } else {
                0
            };
            let n_gamma_neg_a_num = -(term1 + term3);
            assert_eq!(
                n_gamma_neg_a_num % n_extra,
                0,
                "extraspecial division not exact"
            );
            let n_gamma_neg_a = n_gamma_neg_a_num / n_extra;
            // N(a,b) = -(gamma,gamma)/(b,b) * N(gamma,-a)
            let n_ab = -exact(len(gamma) * n_gamma_neg_a, len(b));
            assert_ne!(n_ab, 0, "vanishing constant for a genuine root sum");
            n.insert((a_idx, b_idx), n_ab);
            n.insert((b_idx, a_idx), -n_ab);
        }
    }

    debug_assert!(n.keys().all(|&(a, b)| a < npos && b < npos));
    n
}

impl ChevalleyZ {
    pub fn new(rs: &RootSystem) -> ChevalleyZ {
        let rs = Arc::new(rs.clone());
        let npos = rs.positive_roots.len();
        let rank = rs.rank;
        let dim = 2 * npos + rank;
        let npp = positive_pair_constants(&rs);
        let len = |r: &Root| rs.inner(r, r);
        let pos_index: HashMap<&Root, usize> = rs
            .positive_roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();

        // N for arbitrary pairs of roots with root sum. Root indices are
        // in the all_roots order: positives then negatives.
        let all = rs.all_roots();
        let root_of = |i: usize| -> &Root { &all[i] };
        let constant = |x_idx: usize, y_idx: usize| -> i64 {
            let (xp, yp) = (x_idx < npos, y_idx < npos);
            match (xp, yp) {
                (true, true) => npp[&(x_idx, y_idx)],
                (false, false) => -constant_pp(&npp, x_idx - npos, y_idx - npos),
                (true, false) => {
                    let x = root_of(x_idx);
                    let b = &rs.positive_roots[y_idx - npos];
                    let z = sub_root(x, b);
                    if let Some(&z_idx) = pos_index.get(&z) {
                        // N(x,-b) = (z,z)/(x,x) * N(z,b), z + b = x
                        exact_div(len(&z) * npp[&(z_idx, y_idx - npos)], len(x))
                    } else {
                        let c = neg_root(&z);
                        let c_idx = pos_index[&c];
                        // N(x,-b) = -(c,c)/(b,b) * N(x,c), x + c = b
                        -exact_div(len(&c) * npp[&(x_idx, c_idx)], len(b))
                    }
                }
                (false, true) => {
                    // N(x,y) = -N(y,x) with y positive, x negative.
                    let b = &rs.positive_roots[x_idx - npos];
                    let y = root_of(y_idx);
                    let z = sub_root(y, b);
                    let v = if let Some(&z_idx) = pos_index.get(&z) {
                        exact_div(len(&z) * npp[&(z_idx, x_idx - npos)], len(y))
                    } else {
                        let c = neg_root(&z);
                        let c_idx = pos_index[&c];
                        -exact_div(len(&c) * npp[&(y_idx, c_idx)], len(b))
                    };
                    -v
                }
            }
        };

        fn constant_pp(npp: &HashMap<(usize, usize), i64>, a: usize, b: usize) -> i64 {
            npp[&(a, b)]
        }
        fn exact_div(num: i64, den: i64) -> i64 {
            assert_eq!(num % den, 0);
            num / den
        }

        let mut entries: Vec<Vec<(u32, i64)>> = vec![Vec::new(); dim * dim];
        let idx_all = |r: &Root| rs.root_index(r).expect("root index");

        for (i, x) in all.iter().enumerate() {
            for (j, y) in all.iter().enumerate() {
                if i == j {
                    continue;
                }
                let s = add_root(x, y);
                if s.iter().all(|&c| c == 0) {
                    // [e_x, e_-x] = h_x expanded over simple coroots.
                    let cr = rs.coroot_coords(x);
                    let mut row = Vec::new();
                    for (t, &c) in cr.iter().enumerate() {
                        if c != 0 {
                            row.push(((2 * npos + t) as u32, c));
                        }
                    }
                    entries[i * dim + j] = row;
                } else if rs.is_root(&s) {
                    let c = constant(i, j);
                    entries[i * dim + j] = vec![(idx_all(&s) as u32, c)];
                }
            }
        }
        // [h_t, e_y] and the opposite order.
        for t in 0..rank {
            let h = 2 * npos + t;
            for (j, y) in all.iter().enumerate() {
                let w: i64 = (0..rank).map(|l| y[l] * rs.cartan[t][l]).sum();
                if w != 0 {
                    entries[h * dim + j] = vec![(j as u32, w)];
                    entries[j * dim + h] = vec![(j as u32, -w)];
                }
            }
        }

        let mut labels = Vec::with_capacity(dim);
        let fmt_root = |r: &Root| -> String {
            r.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        for r in &rs.positive_roots {
            labels.push(format!("e[{}]", fmt_root(r)));
        }
        for r in &rs.positive_roots {
            labels.push(format!("e[-({})]", fmt_root(r)));
        }
        for t in 0..rank {
            labels.push(format!("h{}", t + 1));
        }

        let table = BracketTable::new(dim, entries);
        ChevalleyZ {
            rs,
            table: Arc::new(table),
            labels: Arc::new(labels),
        }
    }

    pub fn dim(&self) -> usize {
        self.table.dim
    }

    pub fn npos(&self) -> usize {
        self.rs.positive_roots.len()
    }

    /// Basis index of e_gamma.
    pub fn root_vector_index(&self, gamma: &Root) -> Option<usize> {
        self.rs.root_index(gamma)
    }

    /// Basis index of the simple coroot h_i (zero-based i).
    pub fn coroot_index(&self, i: usize) -> usize {
        2 * self.npos() + i
    }

    /// The structure constants reduced mod p (or over Z if p = 0 is
    /// required, use `over_rationals` for exact characteristic zero).
    pub fn over_fp(&self, p: u64) -> LieAlgebra<Fp> {
        LieAlgebra {
            field: Fp::new(p),
            table: self.table.clone(),
            labels: self.labels.clone(),
            root_system: Some(self.rs.clone()),
        }
    }

    pub fn over_rationals(&self) -> LieAlgebra<Rationals> {
        LieAlgebra {
            field: Rationals,
            table: self.table.clone(),
            labels: self.labels.clone(),
            root_system: Some(self.rs.clone()),
        }
    }

    /// Weight of every basis vector under a cocharacter: the pairing for
    /// root vectors, zero on the Cartan.
    pub fn cocharacter_weights(
        &self,
        tau: &Cocharacter,
    ) -> Result<Vec<i64>, crate::error::ModlieError> {
        if tau.coweight_coords.len() != self.rs.rank {
            return Err(crate::error::ModlieError::Mismatch(
                "cocharacter rank does not match the root system".into(),
            ));
        }
        let mut w = Vec::with_capacity(self.dim());
        for r in self.rs.all_roots() {
            w.push(tau.pairing(&r));
        }
        w.extend(std::iter::repeat(0).take(self.rs.rank));
        Ok(w)
    }

    /// Indices of the graded component of a given cocharacter weight.
    pub fn graded_component(&self, tau: &Cocharacter, weight: i64) -> Vec<usize> {
        let w = self.cocharacter_weights(tau).expect("matching rank");
        (0..self.dim()).filter(|&i| w[i] == weight).collect()
    }

    /// Exhaustive Jacobi check over the integers; also verifies
    /// antisymmetry of the table. Cheap enough for E8.
    pub fn verify_jacobi(&self) -> bool {
        let t = &self.table;
        let dim = t.dim;
        for i in 0..dim {
            for j in 0..dim {
                let ij = t.pairs(i, j);
                let ji = t.pairs(j, i);
                if ij.len() != ji.len()
                    || !ij
                        .iter()
                        .zip(ji)
                        .all(|(&(k1, c1), &(k2, c2))| k1 == k2 && c1 == -c2)
                {
                    return false;
                }
            }
        }
        let mut acc: HashMap<u32, i64> = HashMap::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    acc.clear();
                    // [b_i, [b_j, b_k]] + [b_j, [b_k, b_i]] + [b_k, [b_i, b_j]]
                    for &(outer, inner_a, inner_b) in &[(i, j, k), (j, k, i), (k, i, j)] {
                        for &(m, c) in t.pairs(inner_a, inner_b) {
                            for &(l, d) in t.pairs(outer, m as usize) {
                                *acc.entry(l).or_insert(0) += c * d;
                            }
                        }
                    }
                    if acc.values().any(|&v| v != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Exhaustive Jacobi check with coefficients reduced mod p.
    pub fn verify_jacobi_mod(&self, p: u64) -> bool {
        let t = &self.table;
        let dim = t.dim;
        let pi = p as i64;
        let mut acc: HashMap<u32, i64> = HashMap::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    acc.clear();
                    for &(outer, inner_a, inner_b) in &[(i, j, k), (j, k, i), (k, i, j)] {
                        for &(m, c) in t.pairs(inner_a, inner_b) {
                            for &(l, d) in t.pairs(outer, m as usize) {
                                let e = acc.entry(l).or_insert(0);
                                *e = (*e + c.rem_euclid(pi) * d.rem_euclid(pi)) % pi;
                            }
                        }
                    }
                    if acc.values().any(|&v| v % pi != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Largest |N(alpha,beta)| over pairs of roots with a root sum.
    pub fn max_abs_root_constant(&self) -> i64 {
        let npos = self.npos();
        let mut m = 0;
        for i in 0..2 * npos {
            for j in 0..2 * npos {
                for &(k, c) in self.table.pairs(i, j) {
                    if (k as usize) < 2 * npos {
                        m = m.max(c.abs());
                    }
                }
            }
        }
        m
    }
}

/// Structure-constant text export shared by the CLI and the esdp model:
/// a header line, then one `B i j k c` line per nonzero constant in
/// lexicographic (i, j, k) order. Byte-deterministic.
pub fn export_table(header: &str, table: &BracketTable) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for i in 0..table.dim {
        for j in 0..table.dim {
            for &(k, c) in table.pairs(i, j) {
                out.push_str(&format!("B {i} {j} {k} {c}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::TypeLabel;

    fn chev(label: TypeLabel, rank: usize) -> ChevalleyZ {
        ChevalleyZ::new(&RootSystem::new(label, rank).unwrap())
    }

    #[test]
    fn a1_relations() {
        let a1 = chev(TypeLabel::A, 1);
        // basis: e, f, h
        assert_eq!(a1.dim(), 3);
        assert_eq!(a1.table.pairs(0, 1), &[(2, 1)]); // [e,f] = h
        assert_eq!(a1.table.pairs(2, 0), &[(0, 2)]); // [h,e] = 2e
        assert_eq!(a1.table.pairs(2, 1), &[(1, -2)]); // [h,f] = -2f
    }

    #[test]
    fn g2_jacobi_exhaustive_over_z() {
        let g2 = chev(TypeLabel::G, 2);
        assert_eq!(g2.dim(), 14);
        assert!(g2.verify_jacobi());
        assert_eq!(g2.max_abs_root_constant(), 3);
    }

    #[test]
    fn f4_jacobi_exhaustive_over_z() {
        let f4 = chev(TypeLabel::F, 4);
        assert_eq!(f4.dim(), 52);
        assert!(f4.verify_jacobi());
        assert_eq!(f4.max_abs_root_constant(), 2);
    }

    #[test]
    fn e6_jacobi_and_unit_constants() {
        let e6 = chev(TypeLabel::E, 6);
        assert_eq!(e6.dim(), 78);
        assert!(e6.verify_jacobi());
        // Simply laced: all root-root constants are +-1.
        assert_eq!(e6.max_abs_root_constant(), 1);
    }

    #[test]
    fn grading_zero_cocharacter_is_whole_algebra() {
        let a2 = chev(TypeLabel::A, 2);
        let comp = a2.graded_component(&Cocharacter::zero(2), 0);
        assert_eq!(comp.len(), a2.dim());
    }

    #[test]
    fn grading_a2_fundamental_coweight() {
        let a2 = chev(TypeLabel::A, 2);
        let tau = Cocharacter::new(vec![1, 0]);
        let comp = a2.graded_component(&tau, 1);
        // Spanned by e_{a1} and e_{a1+a2}.
        let i1 = a2.root_vector_index(&vec![1, 0]).unwrap();
        let i12 = a2.root_vector_index(&vec![1, 1]).unwrap();
        let mut want = vec![i1, i12];
        want.sort();
        assert_eq!(comp, want);
    }

    #[test]
    fn grading_mismatched_rank_rejected() {
        let a2 = chev(TypeLabel::A, 2);
        assert!(a2.cocharacter_weights(&Cocharacter::new(vec![1])).is_err());
    }

    #[test]
    fn bracket_adds_cocharacter_weights() {
        let g2 = chev(TypeLabel::G, 2);
        let tau = Cocharacter::new(vec![1, 1]);
        let w = g2.cocharacter_weights(&tau).unwrap();
        for i in 0..g2.dim() {
            for j in 0..g2.dim() {
                for &(k, _) in g2.table.pairs(i, j) {
                    assert_eq!(w[k as usize], w[i] + w[j]);
                }
            }
        }
    }

    #[test]
    fn export_is_deterministic() {
        let g2 = chev(TypeLabel::G, 2);
        let a = export_table("LIEALG G2 p=0 dim=14", &g2.table);
        let b = export_table("LIEALG G2 p=0 dim=14", &g2.table);
        assert_eq!(a, b);
        assert!(a.starts_with("LIEALG G2 p=0 dim=14\n"));
    }
}
