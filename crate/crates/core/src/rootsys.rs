//! Irreducible root systems in simple-root integer coordinates, with
//! the Bourbaki numbering of simple roots.
//!
//! Roots are stored exactly as integer vectors; the symmetrised Cartan
//! matrix drives all pairings, so short/long arithmetic in B, C, F4 and
//! G2 stays exact.

use crate::error::ModlieError;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLabel {
    pub fn parse(s: &str) -> Option<TypeLabel> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Some(TypeLabel::A),
            "B" => Some(TypeLabel::B),
            "C" => Some(TypeLabel::C),
            "D" => Some(TypeLabel::D),
            "E" => Some(TypeLabel::E),
            "F" => Some(TypeLabel::F),
            "G" => Some(TypeLabel::G),
            _ => None,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            TypeLabel::A => 'A',
            TypeLabel::B => 'B',
            TypeLabel::C => 'C',
            TypeLabel::D => 'D',
            TypeLabel::E => 'E',
            TypeLabel::F => 'F',
            TypeLabel::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A root as an integer vector of coefficients over the simple roots.
pub type Root = Vec<i64>;

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub type_label: TypeLabel,
    pub rank: usize,
    /// cartan[i][j] = <alpha_j, alpha_i^vee>
    pub cartan: Vec<Vec<i64>>,
    /// Half squared lengths d_i, normalised so short roots have d = 1.
    pub sym: Vec<i64>,
    /// Positive roots sorted by (height, lexicographic coordinates).
    pub positive_roots: Vec<Root>,
    pub highest_root: Root,
    index: HashMap<Root, usize>,
}

/// A cocharacter given by integer coefficients in the fundamental
/// coweight basis, so that its pairing with alpha_j is the j-th entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cocharacter {
    pub coweight_coords: Vec<i64>,
}

impl Cocharacter {
    pub fn new(coords: Vec<i64>) -> Self {
        Cocharacter {
            coweight_coords: coords,
        }
    }

    pub fn zero(rank: usize) -> Self {
        Cocharacter {
            coweight_coords: vec![0; rank],
        }
    }

    pub fn pairing(&self, root: &Root) -> i64 {
        assert_eq!(root.len(), self.coweight_coords.len());
        root.iter()
            .zip(&self.coweight_coords)
            .map(|(m, c)| m * c)
            .sum()
    }
}

fn height(r: &Root) -> i64 {
    r.iter().sum()
}

/// Dynkin diagram data per type: edges and symmetrisers.
fn cartan_matrix(label: TypeLabel, rank: usize) -> Result<(Vec<Vec<i64>>, Vec<i64>), ModlieError> {
    let bad = || {
        ModlieError::InvalidRootSystem(format!(
            "{label}{rank} is not a valid irreducible type of rank <= 8"
        ))
    };
    if rank == 0 || rank > 8 {
        return Err(bad());
    }
    let n = rank;
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
    }
    let chain = |i: usize, j: usize, a: &mut Vec<Vec<i64>>| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    let sym;
    match label {
        TypeLabel::A => {
            for i in 0..n - 1 {
                chain(i, i + 1, &mut a);
            }
            sym = vec![1; n];
        }
        TypeLabel::B => {
            if n < 2 {
                return Err(bad());
            }
            for i in 0..n - 1 {
                chain(i, i + 1, &mut a);
            }
            // alpha_n short: <alpha_n, alpha_{n-1}^vee> = -1, <alpha_{n-1}, alpha_n^vee> = -2.
            a[n - 2][n - 1] = -1;
            a[n - 1][n - 2] = -2;
            let mut s = vec![2; n];
            s[n - 1] = 1;
            sym = s;
        }
        TypeLabel::C => {
            if n < 2 {
                return Err(bad());
            }
            for i in 0..n - 1 {
                chain(i, i + 1, &mut a);
            }
            a[n - 2][n - 1] = -2;
            a[n - 1][n - 2] = -1;
            let mut s = vec![1; n];
            s[n - 1] = 2;
            sym = s;
        }
        TypeLabel::D => {
            if n < 3 {
                return Err(bad());
            }
            for i in 0..n - 2 {
                chain(i, i + 1, &mut a);
            }
            chain(n - 3, n - 1, &mut a);
            sym = vec![1; n];
        }
        TypeLabel::E => {
            if !(6..=8).contains(&n) {
                return Err(bad());
            }
            // Bourbaki: chain 1-3-4-5-6(-7-8), node 2 attached to 4.
            let edges: &[(usize, usize)] = match n {
                6 => &[(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
                7 => &[(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
                _ => &[(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)],
            };
            for &(i, j) in edges {
                chain(i - 1, j - 1, &mut a);
            }
            sym = vec![1; n];
        }
        TypeLabel::F => {
            if n != 4 {
                return Err(bad());
            }
            chain(0, 1, &mut a);
            chain(2, 3, &mut a);
            // alpha_2 long, alpha_3 short.
            a[1][2] = -1;
            a[2][1] = -2;
            sym = vec![2, 2, 1, 1];
        }
        TypeLabel::G => {
            if n != 2 {
                return Err(bad());
            }
            // alpha_1 short, alpha_2 long.
            a[0][1] = -3;
            a[1][0] = -1;
            sym = vec![1, 3];
        }
    }
    Ok((a, sym))
}

impl RootSystem {
    pub fn new(label: TypeLabel, rank: usize) -> Result<RootSystem, ModlieError> {
        let (cartan, sym) = cartan_matrix(label, rank)?;
        // Enumerate roots: closure of the simple roots under all simple
        // reflections.
        let mut seen: HashMap<Root, ()> = HashMap::new();
        let mut queue: Vec<Root> = Vec::new();
        for i in 0..rank {
            let mut r = vec![0i64; rank];
            r[i] = 1;
            seen.insert(r.clone(), ());
            queue.push(r);
        }
        while let Some(r) = queue.pop() {
            for i in 0..rank {
                // s_i(r) = r - <r, alpha_i^vee> alpha_i
                let pair: i64 = (0..rank).map(|j| r[j] * cartan[i][j]).sum();
                let mut s = r.clone();
                s[i] -= pair;
                if !seen.contains_key(&s) {
                    seen.insert(s.clone(), ());
                    queue.push(s);
                }
            }
        }
        let mut positive: Vec<Root> = seen.keys().filter(|r| height(r) > 0).cloned().collect();
        positive.sort_by(|a, b| (height(a), a).cmp(&(height(b), b)));
        debug_assert_eq!(positive.len() * 2, seen.len());
        let highest = positive.last().expect("nonempty root system").clone();

        let mut index = HashMap::new();
        for (i, r) in positive.iter().enumerate() {
            index.insert(r.clone(), i);
            index.insert(r.iter().map(|x| -x).collect::<Vec<_>>(), positive.len() + i);
        }

        Ok(RootSystem {
            type_label: label,
            rank,
            cartan,
            sym,
            positive_roots: positive,
            highest_root: highest,
            index,
        })
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive_roots.len()
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.type_label, self.rank)
    }

    /// All roots: positives in their sort order, then their negatives in
    /// matching order.
    pub fn all_roots(&self) -> Vec<Root> {
        let mut v = self.positive_roots.clone();
        v.extend(
            self.positive_roots
                .iter()
                .map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()),
        );
        v
    }

    /// Index of a root in the all_roots order, if it is a root.
    pub fn root_index(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    /// (alpha, beta) with respect to the invariant form, normalised so
    /// short roots have squared length 2.
    pub fn inner(&self, a: &Root, b: &Root) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a[i] * b[j] * self.sym[i] * self.cartan[i][j];
            }
        }
        s
    }

    /// Half squared length of a root; 1 for short, 2 or 3 for long.
    pub fn half_norm(&self, r: &Root) -> i64 {
        let n = self.inner(r, r);
        debug_assert_eq!(n % 2, 0);
        n / 2
    }

    /// <beta, gamma^vee> = 2(beta,gamma)/(gamma,gamma); always an integer.
    pub fn pairing(&self, beta: &Root, gamma: &Root) -> i64 {
        let num = self.inner(beta, gamma);
        let d = self.half_norm(gamma);
        debug_assert_eq!(num % d, 0);
        num / d
    }

    /// Coefficients of gamma^vee over the simple coroots; integral.
    pub fn coroot_coords(&self, gamma: &Root) -> Vec<i64> {
        let dg = self.half_norm(gamma);
        (0..self.rank)
            .map(|i| {
                let num = gamma[i] * self.sym[i];
                debug_assert_eq!(num % dg, 0);
                num / dg
            })
            .collect()
    }

    /// Simple reflection s_i applied to a root.
    pub fn reflect(&self, r: &Root, i: usize) -> Root {
        let pair: i64 = (0..self.rank).map(|j| r[j] * self.cartan[i][j]).sum();
        let mut s = r.clone();
        s[i] -= pair;
        s
    }

    /// Simple reflection acting on a Cartan element written in simple
    /// coroot coordinates: s_i(h) = h - <alpha_i, h> alpha_i^vee.
    pub fn reflect_coroot_coords(&self, h: &[i64], i: usize) -> Vec<i64> {
        let pair: i64 = (0..self.rank).map(|j| h[j] * self.cartan[j][i]).sum();
        let mut s = h.to_vec();
        s[i] -= pair;
        s
    }

    /// Longest chain number p with beta - p*alpha still a root.
    pub fn down_string(&self, alpha: &Root, beta: &Root) -> i64 {
        let mut p = 0;
        let mut r: Root = beta.iter().zip(alpha).map(|(b, a)| b - a).collect();
        while self.is_root(&r) {
            p += 1;
            r = r.iter().zip(alpha).map(|(b, a)| b - a).collect();
        }
        p
    }

    pub fn coxeter_number(&self) -> usize {
        self.num_roots() / self.rank
    }

    /// Good primes: p > 5 for E8, p > 3 for the other exceptional types,
    /// p > 2 for B/C/D, any p for type A.
    pub fn is_good_prime(&self, p: u64) -> bool {
        match self.type_label {
            TypeLabel::A => true,
            TypeLabel::B | TypeLabel::C | TypeLabel::D => p > 2,
            TypeLabel::E if self.rank == 8 => p > 5,
            TypeLabel::E | TypeLabel::F | TypeLabel::G => p > 3,
        }
    }

    /// Very good: good, and p does not divide rank+1 in type A.
    pub fn is_very_good_prime(&self, p: u64) -> bool {
        self.is_good_prime(p)
            && !(self.type_label == TypeLabel::A && (self.rank as u64 + 1) % p == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(label: TypeLabel, rank: usize) -> RootSystem {
        RootSystem::new(label, rank).unwrap()
    }

    #[test]
    fn classical_root_counts() {
        assert_eq!(rs(TypeLabel::A, 1).num_roots(), 2);
        assert_eq!(rs(TypeLabel::A, 2).num_roots(), 6);
        assert_eq!(rs(TypeLabel::B, 3).num_roots(), 18);
        assert_eq!(rs(TypeLabel::C, 4).num_roots(), 32);
        assert_eq!(rs(TypeLabel::D, 4).num_roots(), 24);
        assert_eq!(rs(TypeLabel::G, 2).num_roots(), 12);
        assert_eq!(rs(TypeLabel::F, 4).num_roots(), 48);
        assert_eq!(rs(TypeLabel::E, 6).num_roots(), 72);
        assert_eq!(rs(TypeLabel::E, 7).num_roots(), 126);
        assert_eq!(rs(TypeLabel::E, 8).num_roots(), 240);
    }

    #[test]
    fn g2_highest_root() {
        let g2 = rs(TypeLabel::G, 2);
        assert_eq!(g2.highest_root, vec![3, 2]);
    }

    #[test]
    fn e8_highest_root_alpha8_coefficient() {
        // Independent route: coefficientwise maximum over the enumerated
        // positive roots, not the stored highest root.
        let e8 = rs(TypeLabel::E, 8);
        let max8 = e8.positive_roots.iter().map(|r| r[7]).max().unwrap();
        assert_eq!(max8, 2);
        assert_eq!(e8.highest_root[7], 2);
    }

    #[test]
    fn highest_root_dominates() {
        for (label, rank) in [(TypeLabel::E, 7), (TypeLabel::F, 4), (TypeLabel::G, 2)] {
            let r = rs(label, rank);
            for pos in &r.positive_roots {
                for i in 0..rank {
                    assert!(r.highest_root[i] >= pos[i]);
                }
            }
        }
    }

    #[test]
    fn cartan_entries_in_range() {
        for (label, rank) in [
            (TypeLabel::A, 5),
            (TypeLabel::B, 4),
            (TypeLabel::C, 3),
            (TypeLabel::D, 5),
            (TypeLabel::E, 8),
            (TypeLabel::F, 4),
            (TypeLabel::G, 2),
        ] {
            let r = rs(label, rank);
            for i in 0..rank {
                assert_eq!(r.cartan[i][i], 2);
                for j in 0..rank {
                    if i != j {
                        assert!((-3..=0).contains(&r.cartan[i][j]));
                    }
                    // Symmetry of the invariant form.
                    assert_eq!(r.sym[i] * r.cartan[i][j], r.sym[j] * r.cartan[j][i]);
                }
            }
        }
    }

    #[test]
    fn roots_closed_under_negation_and_reflection() {
        let f4 = rs(TypeLabel::F, 4);
        for r in f4.all_roots() {
            assert!(f4.is_root(&r.iter().map(|x| -x).collect()));
            for i in 0..4 {
                assert!(f4.is_root(&f4.reflect(&r, i)));
            }
        }
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(RootSystem::new(TypeLabel::G, 3).is_err());
        assert!(RootSystem::new(TypeLabel::F, 5).is_err());
        assert!(RootSystem::new(TypeLabel::E, 5).is_err());
        assert!(RootSystem::new(TypeLabel::B, 1).is_err());
        assert!(RootSystem::new(TypeLabel::A, 9).is_err());
    }

    #[test]
    fn coroot_coords_are_integral_and_correct() {
        let g2 = rs(TypeLabel::G, 2);
        for r in g2.all_roots() {
            let cr = g2.coroot_coords(&r);
            // <r, r^vee> = 2 reconstructed from coordinates.
            let pair: i64 = (0..2)
                .map(|i| cr[i] * (0..2).map(|j| r[j] * g2.cartan[i][j]).sum::<i64>())
                .sum();
            assert_eq!(pair, 2);
        }
    }

    #[test]
    fn coxeter_numbers() {
        assert_eq!(rs(TypeLabel::G, 2).coxeter_number(), 6);
        assert_eq!(rs(TypeLabel::F, 4).coxeter_number(), 12);
        assert_eq!(rs(TypeLabel::E, 7).coxeter_number(), 18);
        assert_eq!(rs(TypeLabel::E, 8).coxeter_number(), 30);
    }

    #[test]
    fn good_primes() {
        assert!(rs(TypeLabel::E, 7).is_good_prime(5));
        assert!(!rs(TypeLabel::E, 8).is_good_prime(5));
        assert!(rs(TypeLabel::E, 8).is_good_prime(7));
        assert!(!rs(TypeLabel::A, 4).is_very_good_prime(5));
        assert!(rs(TypeLabel::A, 4).is_good_prime(5));
    }

    #[test]
    fn cocharacter_pairing() {
        let a2 = rs(TypeLabel::A, 2);
        let w1 = Cocharacter::new(vec![1, 0]);
        // Sort order is (height, lex): alpha2, alpha1, alpha1+alpha2.
        assert_eq!(a2.positive_roots, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let weights: Vec<i64> = a2.positive_roots.iter().map(|r| w1.pairing(r)).collect();
        assert_eq!(weights, vec![0, 1, 1]);
    }
}
