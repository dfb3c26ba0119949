//! Distinguished representative data for the E7/E8 verification
//! scenarios: explicit sl2-triples spanning the constant part of the
//! socle, the acting elements D (nilpotent or toral), coordinate
//! charts for the constraint computations, and the expected relations.
//!
//! Root supports are written in Bourbaki simple-root coordinates.
//! Coefficients of non-simple root vectors depend on the sign
//! convention of the Chevalley basis they were produced in; the
//! calibration helpers search the finitely many diagonal sign changes
//! on the support and record the match (see `scenarios`).

use crate::chevalley::ChevalleyZ;
use crate::error::ModlieError;
use crate::field::{Field, Fp};
use crate::liealg::{Element, LieAlgebra};
use crate::rootsys::Root;

/// A formal sum of root vectors: (root in simple-root coordinates,
/// integer coefficient).
pub type RootSum = Vec<(Root, i64)>;

/// One of the four socle-uniqueness cases.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SocleCase {
    I,
    II,
    III,
    IV,
}

impl SocleCase {
    pub fn parse(s: &str) -> Option<SocleCase> {
        match s {
            "i" | "I" | "1" => Some(SocleCase::I),
            "ii" | "II" | "2" => Some(SocleCase::II),
            "iii" | "III" | "3" => Some(SocleCase::III),
            "iv" | "IV" | "4" => Some(SocleCase::IV),
            _ => None,
        }
    }

    pub fn p(&self) -> u64 {
        match self {
            SocleCase::I | SocleCase::II => 5,
            SocleCase::III | SocleCase::IV => 7,
        }
    }

    pub fn is_toral_case(&self) -> bool {
        matches!(self, SocleCase::II | SocleCase::IV)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SocleCase::I => "i",
            SocleCase::II => "ii",
            SocleCase::III => "iii",
            SocleCase::IV => "iv",
        }
    }
}

/// E7 root from the printed layout: the top row carries the
/// coefficients of (a1, a3, a4, a5, a6, a7) and the bottom entry a2.
fn e7_root(top: [i64; 6], bottom: i64) -> Root {
    vec![top[0], bottom, top[1], top[2], top[3], top[4], top[5]]
}

fn neg(r: &Root) -> Root {
    r.iter().map(|x| -x).collect()
}

fn simple(rank: usize, i: usize) -> Root {
    let mut r = vec![0i64; rank];
    r[i] = 1;
    r
}

/// Sum of simple root vectors over all nodes not in `omit` (1-based).
pub fn levi_regular_terms(rank: usize, omit: &[usize]) -> RootSum {
    (1..=rank)
        .filter(|i| !omit.contains(i))
        .map(|i| (simple(rank, i - 1), 1))
        .collect()
}

/// The distinguished sl2-triple spanning the constant part of the
/// socle, with integer h-coefficients over the simple coroots.
pub struct TripleData {
    pub p: u64,
    pub e_terms: RootSum,
    /// (coroot index 0-based, coefficient)
    pub h_coeffs: Vec<(usize, i64)>,
    pub f_terms: RootSum,
}

pub fn triple_e7(p: u64) -> TripleData {
    match p {
        5 => TripleData {
            p,
            e_terms: levi_regular_terms(7, &[4]),
            h_coeffs: vec![(0, 2), (1, 1), (2, 2), (4, 3), (5, 4), (6, 3)],
            f_terms: vec![
                (neg(&simple(7, 0)), 2),
                (neg(&simple(7, 1)), 1),
                (neg(&simple(7, 2)), 2),
                (neg(&simple(7, 4)), 3),
                (neg(&simple(7, 5)), 4),
                (neg(&simple(7, 6)), 3),
            ],
        },
        7 => TripleData {
            p,
            e_terms: levi_regular_terms(7, &[4, 6]),
            h_coeffs: vec![(0, 2), (1, 1), (2, 2), (4, 1), (6, 1)],
            f_terms: vec![
                (neg(&simple(7, 0)), 2),
                (neg(&simple(7, 1)), 1),
                (neg(&simple(7, 2)), 2),
                (neg(&simple(7, 4)), 1),
                (neg(&simple(7, 6)), 1),
            ],
        },
        _ => panic!("triple data exists for p in {{5, 7}}"),
    }
}

/// The acting element D per case: toral cases are Cartan combinations
/// (sign-free); nilpotent cases are root-vector sums whose signs are
/// calibrated against the defining brackets.
pub enum ActingElement {
    Toral(Vec<(usize, i64)>),
    Nilpotent(RootSum),
}

pub fn acting_element(case: SocleCase) -> ActingElement {
    match case {
        SocleCase::I => ActingElement::Nilpotent(vec![
            (e7_root([1, 1, 1, 0, 0, 0], 1), 3),
            (e7_root([1, 1, 1, 1, 0, 0], 0), 1),
            (e7_root([0, 1, 1, 1, 0, 0], 1), 2),
            (e7_root([0, 0, 1, 1, 1, 0], 1), 1),
            (e7_root([0, 1, 1, 1, 1, 0], 0), 1),
            (e7_root([0, 0, 1, 1, 1, 1], 0), 1),
        ]),
        SocleCase::II => {
            ActingElement::Toral(vec![(0, 4), (1, 1), (2, 3), (3, 2), (4, 4), (5, 1), (6, 3)])
        }
        SocleCase::III => ActingElement::Nilpotent(vec![
            (e7_root([0, 0, 0, 1, 1, 0], 0), 1),
            (e7_root([0, 0, 0, 0, 1, 1], 0), 1),
            (e7_root([1, 1, 1, 0, 0, 0], 0), 1),
            (e7_root([0, 1, 1, 0, 0, 0], 1), -1),
            (e7_root([0, 0, 1, 1, 0, 0], 1), -2),
            (e7_root([0, 1, 1, 1, 0, 0], 0), 1),
        ]),
        SocleCase::IV => ActingElement::Toral(vec![(0, 5), (1, 4), (2, 3), (3, 1), (5, 6), (6, 3)]),
    }
}

/// Coordinate chart and expected relations for one case. Coordinates
/// are named by the root vector whose coefficient is read off.
pub struct CaseChart {
    /// Expected affine dimension of the linear stage.
    pub linear_dim: usize,
    /// Roots whose coefficients serve as the free coordinates, in the
    /// order (x_main, x_aux.., x_top).
    pub coord_roots: Vec<Root>,
    /// Human-readable coordinate names matching the printed tables.
    pub coord_names: Vec<&'static str>,
}

pub fn case_chart(case: SocleCase) -> CaseChart {
    match case {
        // v = x7 (e ox 1) + x49 w + x63 e_hr; coordinates read at
        // alpha_1, a support root of w, and the highest root.
        SocleCase::I => CaseChart {
            linear_dim: 3,
            coord_roots: vec![
                simple(7, 0),
                e7_root([1, 1, 2, 2, 1, 1], 1),
                e7_root([2, 3, 4, 3, 2, 1], 2),
            ],
            coord_names: vec!["x7", "x49", "x63"],
        },
        SocleCase::II => CaseChart {
            linear_dim: 3,
            coord_roots: vec![
                e7_root([1, 1, 1, 1, 1, 0], 0),
                e7_root([0, 0, 1, 1, 1, 1], 1),
                neg(&e7_root([1, 2, 4, 3, 2, 1], 2)),
            ],
            coord_names: vec!["x31", "x30", "x124"],
        },
        SocleCase::III => CaseChart {
            linear_dim: 4,
            coord_roots: vec![
                simple(7, 0),
                e7_root([1, 1, 1, 1, 1, 0], 1),
                e7_root([1, 2, 3, 2, 1, 1], 2),
                e7_root([2, 3, 4, 3, 2, 1], 2),
            ],
            coord_names: vec!["x7", "x37", "x56", "x63"],
        },
        SocleCase::IV => CaseChart {
            linear_dim: 4,
            coord_roots: vec![
                e7_root([1, 2, 2, 2, 2, 1], 1),
                e7_root([1, 2, 3, 2, 1, 1], 2),
                neg(&e7_root([0, 1, 2, 2, 1, 0], 1)),
                neg(&e7_root([0, 1, 2, 1, 1, 1], 1)),
            ],
            coord_names: vec!["x55", "x56", "x103", "x104"],
        },
    }
}

/// Materialise a root sum with per-term sign flips.
pub fn root_sum_element(
    alg: &LieAlgebra<Fp>,
    chev: &ChevalleyZ,
    terms: &RootSum,
    signs: &[i64],
) -> Element<Fp> {
    assert_eq!(terms.len(), signs.len());
    let mut v = alg.zero();
    for ((root, coeff), sign) in terms.iter().zip(signs) {
        let idx = chev
            .root_vector_index(root)
            .unwrap_or_else(|| panic!("{root:?} is not a root"));
        let f = &alg.field;
        v[idx] = f.add(&v[idx], &f.from_i64(coeff * sign));
    }
    v
}

pub fn cartan_element(
    alg: &LieAlgebra<Fp>,
    chev: &ChevalleyZ,
    coeffs: &[(usize, i64)],
) -> Element<Fp> {
    let mut v = alg.zero();
    for &(i, c) in coeffs {
        let f = &alg.field;
        let idx = chev.coroot_index(i);
        v[idx] = f.add(&v[idx], &f.from_i64(c));
    }
    v
}

/// Build the triple over F_p and verify the three bracket relations;
/// these only involve simple root vectors and coroots, so they hold in
/// any Chevalley basis or the transcription is wrong.
pub fn build_triple(
    alg: &LieAlgebra<Fp>,
    chev: &ChevalleyZ,
    data: &TripleData,
) -> Result<(Element<Fp>, Element<Fp>, Element<Fp>), ModlieError> {
    let ones = vec![1i64; data.e_terms.len()];
    let e = root_sum_element(alg, chev, &data.e_terms, &ones);
    let h = cartan_element(alg, chev, &data.h_coeffs);
    let onesf = vec![1i64; data.f_terms.len()];
    let f = root_sum_element(alg, chev, &data.f_terms, &onesf);
    let two = alg.field.from_i64(2);
    if alg.bracket(&h, &e) != alg.scale(&two, &e)
        || alg.bracket(&e, &f) != h
        || alg.bracket(&h, &f) != alg.scale(&alg.field.from_i64(-2), &f)
    {
        return Err(ModlieError::Internal(
            "transcribed triple fails sl2 relations".into(),
        ));
    }
    Ok((e, h, f))
}

/// Sign calibration for a nilpotent acting element: the first sign
/// pattern (lexicographic, +1 before -1) making D commute with e and h
/// and satisfy D^[p] = 0. Returns (element, signs).
pub fn calibrate_nilpotent_d(
    alg: &LieAlgebra<Fp>,
    chev: &ChevalleyZ,
    terms: &RootSum,
    e: &Element<Fp>,
    h: &Element<Fp>,
) -> Option<(Element<Fp>, Vec<i64>)> {
    let k = terms.len();
    for code in 0..(1u32 << k) {
        let signs: Vec<i64> = (0..k)
            .map(|b| if code & (1 << b) == 0 { 1 } else { -1 })
            .collect();
        let d = root_sum_element(alg, chev, terms, &signs);
        if !alg.is_zero_elem(&alg.bracket(&d, e)) {
            continue;
        }
        if !alg.is_zero_elem(&alg.bracket(h, &d)) {
            continue;
        }
        let pw = alg.p_power(&d).ok()?;
        if !alg.is_zero_elem(&pw) {
            continue;
        }
        return Some((d, signs));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{RootSystem, TypeLabel};

    #[test]
    fn e7_root_layout() {
        // The highest root of E7 prints as top (2,3,4,3,2,1), bottom 2.
        let rs = RootSystem::new(TypeLabel::E, 7).unwrap();
        let hr = e7_root([2, 3, 4, 3, 2, 1], 2);
        assert_eq!(hr, rs.highest_root);
    }

    #[test]
    fn transcribed_roots_are_roots() {
        let rs = RootSystem::new(TypeLabel::E, 7).unwrap();
        for case in [SocleCase::I, SocleCase::III] {
            if let ActingElement::Nilpotent(terms) = acting_element(case) {
                for (r, _) in &terms {
                    assert!(rs.is_root(r), "{case:?}: {r:?}");
                }
            }
        }
        for case in [SocleCase::I, SocleCase::II, SocleCase::III, SocleCase::IV] {
            for r in case_chart(case).coord_roots {
                assert!(rs.is_root(&r), "{case:?}: {r:?}");
            }
        }
    }

    #[test]
    fn triples_satisfy_sl2_relations() {
        let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::E, 7).unwrap());
        for p in [5u64, 7] {
            let alg = chev.over_fp(p);
            let (e, h, f) = build_triple(&alg, &chev, &triple_e7(p)).unwrap();
            assert_eq!(alg.bracket(&e, &f), h);
            let pw_e = alg.p_power(&e).unwrap();
            let pw_f = alg.p_power(&f).unwrap();
            assert!(alg.is_zero_elem(&pw_e), "e^[p] = 0");
            assert!(alg.is_zero_elem(&pw_f), "f^[p] = 0");
            let pw_h = alg.p_power(&h).unwrap();
            assert_eq!(pw_h, h, "h toral");
        }
    }

    #[test]
    fn nilpotent_d_calibrates() {
        let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::E, 7).unwrap());
        for case in [SocleCase::I, SocleCase::III] {
            let p = case.p();
            let alg = chev.over_fp(p);
            let (e, h, _) = build_triple(&alg, &chev, &triple_e7(p)).unwrap();
            let ActingElement::Nilpotent(terms) = acting_element(case) else {
                unreachable!()
            };
            let (d, signs) = calibrate_nilpotent_d(&alg, &chev, &terms, &e, &h)
                .expect("calibration must succeed");
            assert!(alg.is_zero_elem(&alg.bracket(&d, &e)));
            assert_eq!(signs.len(), terms.len());
        }
    }

    #[test]
    fn toral_d_commutes_with_triple() {
        let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::E, 7).unwrap());
        for case in [SocleCase::II, SocleCase::IV] {
            let p = case.p();
            let alg = chev.over_fp(p);
            let (e, h, _) = build_triple(&alg, &chev, &triple_e7(p)).unwrap();
            let ActingElement::Toral(coeffs) = acting_element(case) else {
                unreachable!()
            };
            let d = cartan_element(&alg, &chev, &coeffs);
            assert!(
                alg.is_zero_elem(&alg.bracket(&d, &e)),
                "{case:?}: [D, e] != 0"
            );
            assert!(alg.is_zero_elem(&alg.bracket(&d, &h)));
            let pw = alg.p_power(&d).unwrap();
            assert_eq!(pw, d, "{case:?}: D not toral");
        }
    }
}
