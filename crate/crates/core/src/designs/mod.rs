//! Incidence structures, linear-space axioms, parameters, and the group
//! checks run against them.

mod hermitian;
mod ree;

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrep::MatrepError;
use crate::permgroup::{Perm, PermError, PermGroup};

pub use hermitian::{build_hermitian_unital, HermitianUnital};
pub use ree::{build_ree_unital_3, ReeUnital};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("line {line}: point {point} out of range for v = {v}")]
    PointOutOfRange { line: usize, point: u32, v: usize },
    #[error("line {line} is not strictly ascending")]
    NotAscending { line: usize },
    #[error("line {line} has fewer than 2 points")]
    ShortLine { line: usize },
    #[error("lines {first} and {second} are equal")]
    DuplicateLine { first: usize, second: usize },
    #[error("line sizes differ: line {line_a} has {size_a}, line {line_b} has {size_b}")]
    NonConstantLineSize { line_a: usize, size_a: usize, line_b: usize, size_b: usize },
    #[error("point degrees differ: point {point_a} has {deg_a}, point {point_b} has {deg_b}")]
    NonConstantDegree { point_a: u32, deg_a: usize, point_b: u32, deg_b: usize },
    #[error("parameter identity fails: {0}")]
    ParamIdentity(String),
    #[error("group degree {group} does not match v = {v}")]
    DegreeMismatch { group: usize, v: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Matrep(#[from] MatrepError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// JSON form `{"v": n, "lines": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignDoc {
    pub v: usize,
    pub lines: Vec<Vec<u32>>,
}

/// Points `0..v` and lines given as strictly ascending point lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    v: usize,
    lines: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flag {
    pub point: u32,
    pub line: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub b: u64,
    pub v: u64,
    pub k: u64,
    pub r: u64,
}

/// Outcome of the linear-space axiom check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LinearSpaceReport {
    Pass,
    /// First pair (in lexicographic order) not on exactly one line.
    PairFailure { pair: [u32; 2], covering_lines: Vec<usize> },
    /// A point on fewer than two lines.
    DegenerateDegree { point: u32, degree: usize },
}

impl LinearSpaceReport {
    pub fn passed(&self) -> bool {
        matches!(self, LinearSpaceReport::Pass)
    }
}

impl IncidenceStructure {
    /// Checks the structural invariants: indices in range, lines strictly
    /// ascending, at least two points each, pairwise distinct. Point degrees
    /// are left to [`Self::is_linear_space`].
    pub fn new(v: usize, lines: Vec<Vec<u32>>) -> Result<Self, DesignError> {
        for (i, line) in lines.iter().enumerate() {
            if let Some(&p) = line.iter().find(|&&p| p as usize >= v) {
                return Err(DesignError::PointOutOfRange { line: i, point: p, v });
            }
            if line.windows(2).any(|w| w[0] >= w[1]) {
                return Err(DesignError::NotAscending { line: i });
            }
            if line.len() < 2 {
                return Err(DesignError::ShortLine { line: i });
            }
        }
        let mut order: Vec<usize> = (0..lines.len()).collect();
        order.sort_by(|&a, &b| lines[a].cmp(&lines[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            if lines[w[0]] == lines[w[1]] {
                return Err(DesignError::DuplicateLine { first: w[0], second: w[1] });
            }
        }
        Ok(IncidenceStructure { v, lines })
    }

    /// Sorts each line and the line list, then validates.
    pub fn from_unsorted(v: usize, lines: Vec<Vec<u32>>) -> Result<Self, DesignError> {
        let mut lines: Vec<Vec<u32>> = lines
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l
            })
            .collect();
        lines.sort();
        Self::new(v, lines)
    }

    pub fn from_doc(doc: &DesignDoc) -> Result<Self, DesignError> {
        Self::new(doc.v, doc.lines.clone())
    }

    pub fn to_doc(&self) -> DesignDoc {
        DesignDoc {
            v: self.v,
            lines: self.lines.clone(),
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    /// Number of lines through each point.
    pub fn point_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.v];
        for line in &self.lines {
            for &p in line {
                deg[p as usize] += 1;
            }
        }
        deg
    }

    /// All incident pairs, ordered by line then point.
    pub fn flags(&self) -> Vec<Flag> {
        self.lines
            .iter()
            .enumerate()
            .flat_map(|(line, pts)| pts.iter().map(move |&point| Flag { point, line }))
            .collect()
    }

    /// Pair coverage first, then the two-lines-per-point condition.
    pub fn is_linear_space(&self) -> LinearSpaceReport {
        let v = self.v;
        let mut count = vec![0u32; v * v];
        for line in &self.lines {
            for (i, &a) in line.iter().enumerate() {
                for &b in &line[i + 1..] {
                    count[a as usize * v + b as usize] += 1;
                }
            }
        }
        for a in 0..v {
            for b in a + 1..v {
                if count[a * v + b] != 1 {
                    let (a, b) = (a as u32, b as u32);
                    let covering_lines = self
                        .lines
                        .iter()
                        .enumerate()
                        .filter(|(_, l)| l.binary_search(&a).is_ok() && l.binary_search(&b).is_ok())
                        .map(|(i, _)| i)
                        .collect();
                    return LinearSpaceReport::PairFailure { pair: [a, b], covering_lines };
                }
            }
        }
        if let Some((p, &d)) = self.point_degrees().iter().enumerate().find(|(_, &d)| d < 2) {
            return LinearSpaceReport::DegenerateDegree { point: p as u32, degree: d };
        }
        LinearSpaceReport::Pass
    }

    /// `(b, v, k, r)`, with `bk = vr`, `r(k−1) = v−1` and `b ≥ v` checked.
    pub fn space_params(&self) -> Result<SpaceParams, DesignError> {
        let first = self
            .lines
            .first()
            .ok_or_else(|| DesignError::ParamIdentity("no lines".into()))?;
        if let Some((i, l)) = self.lines.iter().enumerate().find(|(_, l)| l.len() != first.len()) {
            return Err(DesignError::NonConstantLineSize {
                line_a: 0,
                size_a: first.len(),
                line_b: i,
                size_b: l.len(),
            });
        }
        let deg = self.point_degrees();
        if let Some((p, &d)) = deg.iter().enumerate().find(|(_, &d)| d != deg[0]) {
            return Err(DesignError::NonConstantDegree {
                point_a: 0,
                deg_a: deg[0],
                point_b: p as u32,
                deg_b: d,
            });
        }
        let (b, v, k, r) = (self.b() as u64, self.v as u64, first.len() as u64, deg[0] as u64);
        if b * k != v * r {
            return Err(DesignError::ParamIdentity(format!("bk = {} but vr = {}", b * k, v * r)));
        }
        if r * (k - 1) != v - 1 {
            return Err(DesignError::ParamIdentity(format!(
                "r(k-1) = {} but v-1 = {}",
                r * (k - 1),
                v - 1
            )));
        }
        if b < v {
            return Err(DesignError::ParamIdentity(format!("b = {b} < v = {v}")));
        }
        Ok(SpaceParams { b, v, k, r })
    }

    /// Primes dividing `gcd(b, v−1)`, ascending.
    pub fn significant_primes(&self) -> Result<Vec<u64>, DesignError> {
        let p = self.space_params()?;
        Ok(prime_divisors(p.b.gcd(&(p.v - 1))))
    }

    fn check_degree(&self, g: &PermGroup) -> Result<(), DesignError> {
        if g.degree() != self.v {
            return Err(DesignError::DegreeMismatch { group: g.degree(), v: self.v });
        }
        Ok(())
    }

    /// Action of `g` on the line list.
    pub fn line_action(&self, g: &PermGroup) -> Result<PermGroup, DesignError> {
        self.check_degree(g)?;
        Ok(g.induced_action(&self.lines)?)
    }

    /// Action of `g` on [`Self::flags`].
    pub fn flag_action(&self, g: &PermGroup) -> Result<PermGroup, DesignError> {
        let on_lines = self.line_action(g)?;
        let flags = self.flags();
        let index: std::collections::HashMap<Flag, u32> =
            flags.iter().enumerate().map(|(i, f)| (*f, i as u32)).collect();
        let gens = g
            .generators()
            .iter()
            .zip(on_lines.generators())
            .map(|(gp, gl)| {
                let images = flags
                    .iter()
                    .map(|f| {
                        index[&Flag {
                            point: gp.apply(f.point),
                            line: gl.apply(f.line as u32) as usize,
                        }]
                    })
                    .collect();
                Perm::from_images(images)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PermGroup::new(flags.len(), gens)?.with_cap(g.cap()))
    }

    pub fn line_orbit_sizes(&self, g: &PermGroup) -> Result<Vec<usize>, DesignError> {
        Ok(self.line_action(g)?.orbits().iter().map(Vec::len).collect())
    }

    pub fn flag_orbit_sizes(&self, g: &PermGroup) -> Result<Vec<usize>, DesignError> {
        Ok(self.flag_action(g)?.orbits().iter().map(Vec::len).collect())
    }
}

pub fn check_line_transitive(s: &IncidenceStructure, g: &PermGroup) -> Result<bool, DesignError> {
    Ok(s.line_orbit_sizes(g)?.len() == 1)
}

pub fn check_flag_transitive(s: &IncidenceStructure, g: &PermGroup) -> Result<bool, DesignError> {
    Ok(s.flag_orbit_sizes(g)?.len() == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnpOutcome {
    pub holds: bool,
    /// Smallest point fixed by `N_G(P)`.
    pub witness: Option<u32>,
    pub sylow_order: u128,
    pub normalizer_order: u128,
}

/// Whether the normalizer of a Sylow `p`-subgroup of `g` fixes a point.
/// `g` must be line-transitive and `p` significant for `s`.
pub fn cnp_check(s: &IncidenceStructure, g: &PermGroup, p: u64) -> Result<CnpOutcome, DesignError> {
    let sig = s.significant_primes()?;
    if !sig.contains(&p) {
        return Err(DesignError::Precondition(format!(
            "{p} is not a significant prime (significant: {sig:?})"
        )));
    }
    if !check_line_transitive(s, g)? {
        return Err(DesignError::Precondition("group is not line-transitive".into()));
    }
    let sylow = g.sylow_subgroup(p)?;
    let norm = g.normalizer(&sylow)?;
    let witness = (0..s.v() as u32).find(|&x| norm.generators().iter().all(|h| h.apply(x) == x));
    Ok(CnpOutcome {
        holds: witness.is_some(),
        witness,
        sylow_order: sylow.order(),
        normalizer_order: norm.order(),
    })
}

/// Ascending prime divisors; empty for 0 and 1.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = BTreeSet::new();
    if n == 0 {
        return Vec::new();
    }
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            out.insert(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.insert(n);
    }
    out.into_iter().collect()
}

/// PG(2,2): lines `{i, i+1, i+3} mod 7`.
pub fn fano_plane() -> IncidenceStructure {
    let lines = (0..7u32).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect();
    IncidenceStructure::from_unsorted(7, lines).expect("difference set lines are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn affine_plane_3() -> IncidenceStructure {
        // points (x, y) ↦ 3x + y over Z/3
        let mut lines = Vec::new();
        for slope in 0..3u32 {
            for c in 0..3u32 {
                lines.push((0..3).map(|x| 3 * x + (slope * x + c) % 3).collect());
            }
        }
        for x in 0..3u32 {
            lines.push((0..3).map(|y| 3 * x + y).collect());
        }
        IncidenceStructure::from_unsorted(9, lines).unwrap()
    }

    #[test]
    fn structural_validation() {
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![0, 3]]),
            Err(DesignError::PointOutOfRange { .. })
        ));
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![1, 0]]),
            Err(DesignError::NotAscending { line: 0 })
        ));
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![1]]),
            Err(DesignError::ShortLine { line: 0 })
        ));
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 1]]),
            Err(DesignError::DuplicateLine { first: 0, second: 2 })
        ));
    }

    #[test]
    fn broken_three_point_structure() {
        let s = IncidenceStructure::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(
            s.is_linear_space(),
            LinearSpaceReport::PairFailure { pair: [0, 2], covering_lines: vec![] }
        );
    }

    #[test]
    fn doubly_covered_pair_lists_both_lines() {
        let s = IncidenceStructure::new(4, vec![vec![0, 1, 2], vec![0, 1, 3], vec![2, 3]]).unwrap();
        assert_eq!(
            s.is_linear_space(),
            LinearSpaceReport::PairFailure { pair: [0, 1], covering_lines: vec![0, 1] }
        );
    }

    #[test]
    fn single_line_is_degenerate() {
        let s = IncidenceStructure::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(
            s.is_linear_space(),
            LinearSpaceReport::DegenerateDegree { point: 0, degree: 1 }
        );
    }

    #[test]
    fn fano_has_no_significant_prime() {
        let f = fano_plane();
        assert!(f.is_linear_space().passed());
        assert_eq!(f.space_params().unwrap(), SpaceParams { b: 7, v: 7, k: 3, r: 3 });
        assert!(f.significant_primes().unwrap().is_empty());
    }

    #[test]
    fn affine_plane_params() {
        let s = affine_plane_3();
        assert!(s.is_linear_space().passed());
        assert_eq!(s.space_params().unwrap(), SpaceParams { b: 12, v: 9, k: 3, r: 4 });
        assert_eq!(s.significant_primes().unwrap(), vec![2]);
    }

    #[test]
    fn nonconstant_line_size_reports_witnesses() {
        // near-pencil on 4 points
        let s = IncidenceStructure::new(4, vec![vec![0, 1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]).unwrap();
        assert!(s.is_linear_space().passed());
        assert_eq!(
            s.space_params().unwrap_err(),
            DesignError::NonConstantLineSize { line_a: 0, size_a: 3, line_b: 1, size_b: 2 }
        );
    }

    #[test]
    fn cyclic_group_on_fano() {
        let f = fano_plane();
        let c = Perm::from_images((0..7).map(|i| (i + 1) % 7).collect()).unwrap();
        let g = PermGroup::new(7, vec![c]).unwrap();
        assert!(check_line_transitive(&f, &g).unwrap());
        // 21 flags, cyclic group of order 7
        assert_eq!(f.flag_orbit_sizes(&g).unwrap(), vec![7, 7, 7]);
        let bad = Perm::from_cycles(7, &[&[0, 1]]).unwrap();
        assert!(matches!(
            f.line_action(&PermGroup::new(7, vec![bad]).unwrap()),
            Err(DesignError::Perm(PermError::NotInvariant { .. }))
        ));
    }

    #[test]
    fn cnp_rejects_insignificant_prime() {
        let s = affine_plane_3();
        let g = PermGroup::trivial(9);
        assert!(matches!(cnp_check(&s, &g, 3), Err(DesignError::Precondition(_))));
    }

    #[test]
    fn doc_round_trip() {
        let doc: DesignDoc = serde_json::from_str(r#"{"v":3,"lines":[[0,1],[1,2]]}"#).unwrap();
        let s = IncidenceStructure::from_doc(&doc).unwrap();
        assert_eq!(serde_json::to_string(&s.to_doc()).unwrap(), r#"{"v":3,"lines":[[0,1],[1,2]]}"#);
        assert!(serde_json::from_str::<DesignDoc>(r#"{"v":3,"lines":[],"extra":1}"#).is_err());
    }

    #[test]
    fn prime_divisors_small() {
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert_eq!(prime_divisors(16), vec![2]);
        assert_eq!(prime_divisors(63), vec![3, 7]);
        assert_eq!(prime_divisors(97), vec![97]);
    }

    proptest! {
        // relabelling points preserves the axioms and the parameters
        #[test]
        fn relabelling_invariance(seed in proptest::collection::vec(0u32..1000, 9)) {
            let mut order: Vec<u32> = (0..9).collect();
            order.sort_by_key(|&i| (seed[i as usize], i));
            let s = affine_plane_3();
            let lines = s.lines().iter().map(|l| l.iter().map(|&p| order[p as usize]).collect()).collect();
            let t = IncidenceStructure::from_unsorted(9, lines).unwrap();
            prop_assert!(t.is_linear_space().passed());
            prop_assert_eq!(t.space_params().unwrap(), s.space_params().unwrap());
        }
    }
}
