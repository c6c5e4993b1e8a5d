//! Deterministic Schreier–Sims.
//!
//! Level `i` holds the strong generators fixing the first `i` base points, the
//! basic orbit of base point `i` under them, and a transversal `u_b` with
//! `u_b(base[i]) = b` (plus its inverse, to keep sifting cheap).

use num_bigint::BigUint;

use super::Perm;

#[derive(Clone, Debug)]
struct Level {
    base_point: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    transversal: Vec<Option<Perm>>,
    transversal_inv: Vec<Option<Perm>>,
}

impl Level {
    fn new(degree: usize, base_point: u32, gens: Vec<Perm>) -> Self {
        let mut level = Level {
            base_point,
            gens,
            orbit: Vec::new(),
            transversal: vec![None; degree],
            transversal_inv: vec![None; degree],
        };
        level.rebuild_orbit();
        level
    }

    fn rebuild_orbit(&mut self) {
        let degree = self.transversal.len();
        self.transversal = vec![None; degree];
        self.transversal_inv = vec![None; degree];
        let id = Perm::identity(degree);
        self.transversal[self.base_point as usize] = Some(id.clone());
        self.transversal_inv[self.base_point as usize] = Some(id);
        self.orbit = vec![self.base_point];
        let mut head = 0;
        while head < self.orbit.len() {
            let b = self.orbit[head];
            head += 1;
            for s in &self.gens {
                let c = s.apply(b);
                if self.transversal[c as usize].is_none() {
                    let u = s.compose(self.transversal[b as usize].as_ref().unwrap());
                    self.transversal_inv[c as usize] = Some(u.inverse());
                    self.transversal[c as usize] = Some(u);
                    self.orbit.push(c);
                }
            }
        }
    }
}

/// Base and strong generating set of a permutation group.
#[derive(Clone, Debug)]
pub struct Bsgs {
    degree: usize,
    levels: Vec<Level>,
}

impl Bsgs {
    pub fn new(degree: usize, gens: &[Perm]) -> Self {
        Self::with_base(degree, gens, &[])
    }

    /// Builds a BSGS whose base starts with `prefix` (duplicates dropped).
    pub fn with_base(degree: usize, gens: &[Perm], prefix: &[u32]) -> Self {
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<u32> = Vec::new();
        for &b in prefix {
            if !base.contains(&b) {
                base.push(b);
            }
        }
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().unwrap());
            }
        }
        let mut levels: Vec<Level> = Vec::with_capacity(base.len());
        for (i, &b) in base.iter().enumerate() {
            let fixing: Vec<Perm> = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&c| g.apply(c) == c))
                .cloned()
                .collect();
            levels.push(Level::new(degree, b, fixing));
        }
        let mut bsgs = Bsgs { degree, levels };
        bsgs.complete();
        bsgs
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            match self.find_failing_schreier_generator(i as usize) {
                Some((h, j)) => {
                    if j == self.levels.len() {
                        let b = h.first_moved().expect("sift residue is not the identity");
                        self.levels.push(Level::new(self.degree, b, Vec::new()));
                    }
                    for l in (i as usize + 1)..=j {
                        self.levels[l].gens.push(h.clone());
                        self.levels[l].rebuild_orbit();
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    fn find_failing_schreier_generator(&self, i: usize) -> Option<(Perm, usize)> {
        let level = &self.levels[i];
        for &b in &level.orbit {
            let ub = level.transversal[b as usize].as_ref().unwrap();
            for s in &level.gens {
                let sb = s.apply(b);
                let y = level.transversal_inv[sb as usize]
                    .as_ref()
                    .unwrap()
                    .compose(&s.compose(ub));
                let (h, j) = self.strip(y, i + 1);
                if j < self.levels.len() || !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Sifts `g` through levels `start..`; returns the residue and the level
    /// at which sifting stopped (`levels.len()` if it went all the way).
    fn strip(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let b = g.apply(level.base_point);
            match &level.transversal_inv[b as usize] {
                Some(u_inv) => g = u_inv.compose(&g),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// All strong generators (those of level 0).
    pub fn strong_generators(&self) -> &[Perm] {
        self.levels.first().map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    /// BSGS of the stabilizer of the first `depth` base points.
    pub fn tail(&self, depth: usize) -> Bsgs {
        Bsgs {
            degree: self.degree,
            levels: self.levels.iter().skip(depth).cloned().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_alternating_orders() {
        let t = Perm::from_cycles(7, &[&[0, 1]]).unwrap();
        let c = Perm::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap();
        assert_eq!(Bsgs::new(7, &[t, c.clone()]).order(), BigUint::from(5040u32));
        let c3 = Perm::from_cycles(7, &[&[0, 1, 2]]).unwrap();
        assert_eq!(Bsgs::new(7, &[c3, c]).order(), BigUint::from(2520u32));
    }

    #[test]
    fn trivial_group() {
        let b = Bsgs::new(5, &[Perm::identity(5)]);
        assert_eq!(b.order(), BigUint::from(1u32));
        assert!(b.contains(&Perm::identity(5)));
        assert!(b.base().is_empty());
    }

    #[test]
    fn membership() {
        let a = Perm::from_cycles(6, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(6, &[&[3, 4]]).unwrap();
        let bsgs = Bsgs::new(6, &[a.clone(), b.clone()]);
        assert_eq!(bsgs.order(), BigUint::from(6u32));
        assert!(bsgs.contains(&a.compose(&b)));
        assert!(!bsgs.contains(&Perm::from_cycles(6, &[&[0, 1]]).unwrap()));
        assert!(!bsgs.contains(&Perm::from_cycles(6, &[&[4, 5]]).unwrap()));
    }

    #[test]
    fn prescribed_base_prefix() {
        let t = Perm::from_cycles(5, &[&[0, 1]]).unwrap();
        let c = Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        let bsgs = Bsgs::with_base(5, &[t, c], &[3]);
        assert_eq!(bsgs.base()[0], 3);
        assert_eq!(bsgs.basic_orbit_lengths()[0], 5);
        assert_eq!(bsgs.tail(1).order(), BigUint::from(24u32));
    }
}
