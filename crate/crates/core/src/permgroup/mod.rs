//! Permutation groups: closure enumeration, Schreier–Sims order, orbits,
//! stabilizers, Sylow subgroups, normalizers and induced actions.
//!
//! Everything that needs the full element list (Sylow, normalizer,
//! involutions) goes through [`PermGroup::elements`], which is bounded by the
//! group's enumeration cap.

mod bsgs;
mod perm;

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bsgs::Bsgs;
pub use perm::Perm;

/// Default bound on brute-force element enumeration.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image list is not a permutation")]
    NotBijective,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group has more than {cap} elements")]
    CapExceeded { cap: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: u32, degree: usize },
    #[error("group is not transitive")]
    NotTransitive,
    #[error("not a subgroup of the ambient group")]
    NotSubgroup,
    #[error("generator {generator} maps block {block} outside the block list")]
    NotInvariant { generator: usize, block: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// JSON form of a group: `{"degree": n, "generators": [[images]]}`, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

/// A permutation group given by generators, with lazily filled caches.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    cap: usize,
    elements: OnceLock<Vec<Perm>>,
    bsgs: OnceLock<Bsgs>,
}

impl PermGroup {
    /// An empty generator list yields the trivial group.
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, PermError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        let generators = if generators.is_empty() {
            vec![Perm::identity(degree)]
        } else {
            generators
        };
        Ok(PermGroup {
            degree,
            generators,
            cap: DEFAULT_CAP,
            elements: OnceLock::new(),
            bsgs: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).unwrap()
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap.max(1);
        self.elements = OnceLock::new();
        self
    }

    pub fn from_doc(doc: &GroupDoc) -> Result<Self, PermError> {
        let gens = doc
            .generators
            .iter()
            .map(|g| Perm::from_images(g.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(doc.degree, gens)
    }

    pub fn to_doc(&self) -> GroupDoc {
        GroupDoc {
            degree: self.degree,
            generators: self.generators.iter().map(|g| g.images().to_vec()).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Breadth-first closure of the generators, sorted by image sequence.
    pub fn closure_enumerate(&self, cap: usize) -> Result<Vec<Perm>, PermError> {
        let mut elems = closure_set(self.degree, &self.generators, cap)?
            .into_iter()
            .collect::<Vec<_>>();
        elems.sort_unstable();
        Ok(elems)
    }

    /// Cached sorted element list, bounded by [`Self::cap`].
    pub fn elements(&self) -> Result<&[Perm], PermError> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let elems = self.closure_enumerate(self.cap)?;
        Ok(self.elements.get_or_init(|| elems))
    }

    pub fn bsgs(&self) -> &Bsgs {
        self.bsgs
            .get_or_init(|| Bsgs::new(self.degree, &self.generators))
    }

    pub fn order_big(&self) -> BigUint {
        self.bsgs().order()
    }

    /// Exact order via Schreier–Sims. Panics if it does not fit in a `u128`.
    pub fn order(&self) -> u128 {
        self.order_big()
            .to_u128()
            .expect("group order exceeds u128")
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.bsgs().contains(g)
    }

    fn check_point(&self, point: u32) -> Result<(), PermError> {
        if (point as usize) < self.degree {
            Ok(())
        } else {
            Err(PermError::PointOutOfRange {
                point,
                degree: self.degree,
            })
        }
    }

    /// Sorted orbit of `seed`.
    pub fn orbit(&self, seed: u32) -> Result<Vec<u32>, PermError> {
        self.check_point(seed)?;
        let mut seen = vec![false; self.degree];
        seen[seed as usize] = true;
        let mut orbit = vec![seed];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        Ok(orbit)
    }

    /// Orbit partition of `0..degree`, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut assigned = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree as u32 {
            if assigned[x as usize] {
                continue;
            }
            let orb = self.orbit(x).unwrap();
            for &y in &orb {
                assigned[y as usize] = true;
            }
            out.push(orb);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbits().len() == 1
    }

    /// Point stabilizer, from a BSGS whose base starts at `point`.
    pub fn stabilizer(&self, point: u32) -> Result<PermGroup, PermError> {
        self.check_point(point)?;
        let full = Bsgs::with_base(self.degree, &self.generators, &[point]);
        let tail = full.tail(1);
        let group = PermGroup::new(self.degree, tail.strong_generators().to_vec())?
            .with_cap(self.cap);
        let _ = group.bsgs.set(tail);
        Ok(group)
    }

    /// Orbit sizes of the stabilizer of `point`, ascending, including the
    /// singleton `{point}`.
    pub fn subdegrees(&self, point: u32) -> Result<Vec<usize>, PermError> {
        self.check_point(point)?;
        if !self.is_transitive() {
            return Err(PermError::NotTransitive);
        }
        let stab = self.stabilizer(point)?;
        let mut sizes: Vec<usize> = stab.orbits().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        Ok(sizes)
    }

    fn element_set(&self) -> Result<HashSet<&Perm>, PermError> {
        Ok(self.elements()?.iter().collect())
    }

    /// All elements of order exactly 2, in element order.
    pub fn involutions(&self) -> Result<Vec<Perm>, PermError> {
        Ok(self
            .elements()?
            .iter()
            .filter(|g| !g.is_identity() && g.compose(g).is_identity())
            .cloned()
            .collect())
    }

    /// `N_G(H)` by filtering the element list of `G`.
    pub fn normalizer(&self, h: &PermGroup) -> Result<PermGroup, PermError> {
        if h.degree != self.degree {
            return Err(PermError::DegreeMismatch {
                expected: self.degree,
                found: h.degree,
            });
        }
        if !h.generators.iter().all(|g| self.contains(g)) {
            return Err(PermError::NotSubgroup);
        }
        let h_set = h.element_set()?;
        let normalizing: Vec<Perm> = self
            .elements()?
            .iter()
            .filter(|g| h.generators.iter().all(|x| h_set.contains(&x.conjugate_by(g))))
            .cloned()
            .collect();
        subgroup_from_elements(self.degree, normalizing, self.cap)
    }

    /// A Sylow `p`-subgroup, grown from a p-element of maximal order by
    /// repeatedly adjoining p-elements of the current normalizer.
    pub fn sylow_subgroup(&self, p: u64) -> Result<PermGroup, PermError> {
        if !crate::gf::is_prime(p) {
            return Err(PermError::NotPrime(p));
        }
        let elems = self.elements()?;
        let target = p_part(elems.len() as u64, p);
        if target == 1 {
            return Ok(PermGroup::trivial(self.degree).with_cap(self.cap));
        }
        let is_p_elt = |g: &Perm| p_part(g.order(), p) == g.order();
        let start = elems
            .iter()
            .filter(|g| is_p_elt(g))
            .max_by(|a, b| a.order().cmp(&b.order()).then_with(|| b.cmp(a)))
            .expect("Cauchy: a p-element exists when p divides |G|");
        let mut gens = vec![start.clone()];
        let mut current = closure_set(self.degree, &gens, self.cap)?;
        while (current.len() as u64) < target {
            let next = elems
                .iter()
                .find(|g| {
                    is_p_elt(g)
                        && !current.contains(*g)
                        && gens.iter().all(|x| current.contains(&x.conjugate_by(g)))
                })
                .expect("a p-subgroup below Sylow order has p-elements in its normalizer");
            gens.push(next.clone());
            current = closure_set(self.degree, &gens, self.cap)?;
        }
        let mut sorted: Vec<Perm> = current.into_iter().collect();
        sorted.sort_unstable();
        let group = PermGroup::new(self.degree, gens)?.with_cap(self.cap);
        let _ = group.elements.set(sorted);
        Ok(group)
    }

    /// Action on a list of blocks (point sets); each generator must permute
    /// the list setwise.
    pub fn induced_action(&self, blocks: &[Vec<u32>]) -> Result<PermGroup, PermError> {
        let keyed: Vec<Vec<u32>> = blocks
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        let index: HashMap<&[u32], u32> = keyed
            .iter()
            .enumerate()
            .map(|(i, b)| (b.as_slice(), i as u32))
            .collect();
        let mut gens = Vec::with_capacity(self.generators.len());
        for (gi, g) in self.generators.iter().enumerate() {
            let mut images = Vec::with_capacity(keyed.len());
            for (bi, block) in keyed.iter().enumerate() {
                if let Some(&x) = block.iter().find(|&&x| x as usize >= self.degree) {
                    return Err(PermError::PointOutOfRange {
                        point: x,
                        degree: self.degree,
                    });
                }
                let mut img: Vec<u32> = block.iter().map(|&x| g.apply(x)).collect();
                img.sort_unstable();
                let j = index
                    .get(img.as_slice())
                    .ok_or(PermError::NotInvariant {
                        generator: gi,
                        block: bi,
                    })?;
                images.push(*j);
            }
            gens.push(Perm::from_images(images).map_err(|_| PermError::NotInvariant {
                generator: gi,
                block: 0,
            })?);
        }
        Ok(PermGroup::new(keyed.len(), gens)?.with_cap(self.cap))
    }
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut out = 1;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

fn closure_set(degree: usize, gens: &[Perm], cap: usize) -> Result<HashSet<Perm>, PermError> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(PermError::CapExceeded { cap });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Subgroup with a known element list; generators picked greedily in order.
pub fn subgroup_from_elements(
    degree: usize,
    mut elements: Vec<Perm>,
    cap: usize,
) -> Result<PermGroup, PermError> {
    elements.sort_unstable();
    let mut gens: Vec<Perm> = Vec::new();
    let mut current = closure_set(degree, &gens, cap)?;
    for e in &elements {
        if !current.contains(e) {
            gens.push(e.clone());
            current = closure_set(degree, &gens, cap)?;
        }
    }
    if current.len() != elements.len() {
        return Err(PermError::NotSubgroup);
    }
    let group = PermGroup::new(degree, gens)?.with_cap(cap);
    let _ = group.elements.set(elements);
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn sym(n: usize) -> PermGroup {
        let t = Perm::from_cycles(n, &[&[0, 1]]).unwrap();
        let c = Perm::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).unwrap();
        PermGroup::new(n, vec![t, c]).unwrap()
    }

    #[test]
    fn closure_counts() {
        let g = PermGroup::new(2, vec![Perm::from_cycles(2, &[&[0, 1]]).unwrap()]).unwrap();
        assert_eq!(g.closure_enumerate(10).unwrap().len(), 2);
        let s5 = sym(5);
        let elems = s5.closure_enumerate(1000).unwrap();
        assert_eq!(elems.len(), 120);
        assert!(elems.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s5.order(), 120);
        assert_eq!(
            s5.closure_enumerate(100).unwrap_err(),
            PermError::CapExceeded { cap: 100 }
        );
    }

    #[test]
    fn trivial_group_basics() {
        let g = PermGroup::trivial(5);
        assert_eq!(g.order(), 1);
        assert_eq!(g.orbit(3).unwrap(), vec![3]);
        assert_eq!(g.stabilizer(2).unwrap().order(), 1);
        assert!(g.involutions().unwrap().is_empty());
        assert_eq!(g.sylow_subgroup(3).unwrap().order(), 1);
        assert!(matches!(g.orbit(5), Err(PermError::PointOutOfRange { .. })));
    }

    #[test]
    fn s3_involutions_and_normalizer_of_self() {
        let s3 = sym(3);
        assert_eq!(s3.involutions().unwrap().len(), 3);
        assert_eq!(s3.normalizer(&s3).unwrap().order(), 6);
        let a3 = PermGroup::new(3, vec![Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()]).unwrap();
        assert_eq!(s3.normalizer(&a3).unwrap().order(), 6);
        let t = PermGroup::new(3, vec![Perm::from_cycles(3, &[&[0, 1]]).unwrap()]).unwrap();
        assert_eq!(s3.normalizer(&t).unwrap().order(), 2);
    }

    #[test]
    fn normalizer_rejects_non_subgroup() {
        let g = PermGroup::new(4, vec![Perm::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        let h = PermGroup::new(4, vec![Perm::from_cycles(4, &[&[2, 3]]).unwrap()]).unwrap();
        assert_eq!(g.normalizer(&h).unwrap_err(), PermError::NotSubgroup);
    }

    #[test]
    fn sylow_orders_in_s5() {
        let s5 = sym(5);
        assert_eq!(s5.sylow_subgroup(2).unwrap().order(), 8);
        assert_eq!(s5.sylow_subgroup(3).unwrap().order(), 3);
        assert_eq!(s5.sylow_subgroup(5).unwrap().order(), 5);
        assert_eq!(s5.sylow_subgroup(7).unwrap().order(), 1);
        assert_eq!(s5.sylow_subgroup(4).unwrap_err(), PermError::NotPrime(4));
    }

    #[test]
    fn sylow_subgroups_are_conjugate_spot_check() {
        let s6 = sym(6);
        let p = s6.sylow_subgroup(2).unwrap();
        let p_elems: HashSet<Perm> = p.elements().unwrap().iter().cloned().collect();
        let elems = s6.elements().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..5 {
            let g = &elems[rng.random_range(0..elems.len())];
            let conj: Vec<Perm> = p.generators().iter().map(|x| x.conjugate_by(g)).collect();
            let q = PermGroup::new(6, conj).unwrap();
            assert_eq!(q.order(), 16);
            // Q is Sylow, so some conjugate of it equals P.
            let q_elems: Vec<Perm> = q.elements().unwrap().to_vec();
            let found = elems.iter().any(|h| q_elems.iter().all(|x| p_elems.contains(&x.conjugate_by(h))));
            assert!(found);
        }
    }

    #[test]
    fn orbit_stabilizer_and_subdegrees() {
        let s5 = sym(5);
        for x in 0..5 {
            let stab = s5.stabilizer(x).unwrap();
            assert_eq!(stab.order() * s5.orbit(x).unwrap().len() as u128, 120);
            assert!(stab.generators().iter().all(|g| g.apply(x) == x));
        }
        assert_eq!(s5.subdegrees(0).unwrap(), vec![1, 4]);
        let c = Perm::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap();
        let cyc = PermGroup::new(6, vec![c]).unwrap();
        assert_eq!(cyc.subdegrees(2).unwrap(), vec![1; 6]);
        let intrans = PermGroup::new(4, vec![Perm::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        assert_eq!(intrans.subdegrees(0).unwrap_err(), PermError::NotTransitive);
        assert_eq!(intrans.orbits(), vec![vec![0, 1], vec![2], vec![3]]);
    }

    #[test]
    fn induced_action_on_singletons_and_pairs() {
        let s4 = sym(4);
        let singletons: Vec<Vec<u32>> = (0..4).map(|i| vec![i]).collect();
        let induced = s4.induced_action(&singletons).unwrap();
        assert_eq!(induced.generators(), s4.generators());
        let mut pairs = Vec::new();
        for a in 0..4u32 {
            for b in a + 1..4 {
                pairs.push(vec![a, b]);
            }
        }
        let on_pairs = s4.induced_action(&pairs).unwrap();
        assert_eq!(on_pairs.degree(), 6);
        assert_eq!(on_pairs.order(), 24);
        assert!(on_pairs.is_transitive());
        let bad = vec![vec![0, 1], vec![2, 3]];
        assert!(matches!(
            s4.induced_action(&bad),
            Err(PermError::NotInvariant { .. })
        ));
    }

    #[test]
    fn induced_action_is_a_homomorphism_on_random_words() {
        let s5 = sym(5);
        let mut pairs = Vec::new();
        for a in 0..5u32 {
            for b in a + 1..5 {
                pairs.push(vec![a, b]);
            }
        }
        let induced = s5.induced_action(&pairs).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let word: Vec<usize> = (0..8).map(|_| rng.random_range(0..2)).collect();
            let g = word
                .iter()
                .fold(Perm::identity(5), |acc, &i| acc.compose(&s5.generators()[i]));
            let h = word
                .iter()
                .fold(Perm::identity(10), |acc, &i| acc.compose(&induced.generators()[i]));
            for (bi, block) in pairs.iter().enumerate() {
                let mut img: Vec<u32> = block.iter().map(|&x| g.apply(x)).collect();
                img.sort_unstable();
                assert_eq!(pairs[h.apply(bi as u32) as usize], img);
            }
        }
    }

    #[test]
    fn group_doc_round_trip() {
        let s4 = sym(4);
        let doc = s4.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(json, r#"{"degree":4,"generators":[[1,0,2,3],[1,2,3,0]]}"#);
        let back = PermGroup::from_doc(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.order(), 24);
        let bad = GroupDoc {
            degree: 3,
            generators: vec![vec![0, 1]],
        };
        assert!(matches!(
            PermGroup::from_doc(&bad),
            Err(PermError::DegreeMismatch { .. })
        ));
    }
}
