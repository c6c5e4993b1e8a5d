use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{enumerate_reflection_group, WeylData, WeylError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A,
    D,
    E,
}

impl FromStr for RootType {
    type Err = WeylError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(RootType::A),
            "D" | "d" => Ok(RootType::D),
            "E" | "e" => Ok(RootType::E),
            other => Err(WeylError::UnsupportedType(other.to_string())),
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A simply-laced root system in the basis of simple roots, Bourbaki numbering.
///
/// Roots are sorted by height, then by coordinates, so the negative roots come
/// first and the simple roots sit right after the zero-height gap.
#[derive(Debug)]
pub struct RootSystem {
    label: RootType,
    rank: usize,
    cartan: Vec<Vec<i32>>,
    roots: Vec<Vec<i32>>,
    simple: Vec<usize>,
    reflections: Vec<Vec<u8>>,
    positive: Vec<bool>,
    weyl: OnceLock<WeylData>,
}

fn dynkin_edges(label: RootType, rank: usize) -> Result<Vec<(usize, usize)>, WeylError> {
    let bad = || WeylError::UnsupportedRank { label, rank };
    match label {
        RootType::A => {
            if !(1..=7).contains(&rank) {
                return Err(bad());
            }
            Ok((1..rank).map(|i| (i, i + 1)).collect())
        }
        RootType::D => {
            if !(3..=7).contains(&rank) {
                return Err(bad());
            }
            let mut edges: Vec<_> = (1..rank - 1).map(|i| (i, i + 1)).collect();
            edges.push((rank - 2, rank));
            Ok(edges)
        }
        RootType::E => {
            if rank != 6 {
                return Err(bad());
            }
            Ok(vec![(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)])
        }
    }
}

/// Root system of the given type; A_n (n ≤ 7), D_n (3 ≤ n ≤ 7) or E_6.
pub fn root_system(label: RootType, rank: usize) -> Result<RootSystem, WeylError> {
    let edges = dynkin_edges(label, rank)?;
    let mut cartan = vec![vec![0i32; rank]; rank];
    for (i, row) in cartan.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        cartan[a - 1][b - 1] = -1;
        cartan[b - 1][a - 1] = -1;
    }
    let reflect = |beta: &[i32], i: usize| -> Vec<i32> {
        let pairing: i32 = (0..rank).map(|j| beta[j] * cartan[i][j]).sum();
        let mut out = beta.to_vec();
        out[i] -= pairing;
        out
    };

    let mut roots: Vec<Vec<i32>> = (0..rank)
        .map(|i| (0..rank).map(|j| i32::from(i == j)).collect())
        .collect();
    let mut index: HashMap<Vec<i32>, usize> =
        roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    let mut head = 0;
    while head < roots.len() {
        let beta = roots[head].clone();
        head += 1;
        for i in 0..rank {
            let img = reflect(&beta, i);
            if !index.contains_key(&img) {
                index.insert(img.clone(), roots.len());
                roots.push(img);
            }
        }
    }
    roots.sort_by_key(|r| (r.iter().sum::<i32>(), r.clone()));
    if roots.len() > u8::MAX as usize + 1 {
        return Err(WeylError::UnsupportedRank { label, rank });
    }
    let index: HashMap<&[i32], usize> =
        roots.iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();
    let simple: Vec<usize> = (0..rank)
        .map(|i| {
            let e: Vec<i32> = (0..rank).map(|j| i32::from(i == j)).collect();
            index[e.as_slice()]
        })
        .collect();
    let reflections: Vec<Vec<u8>> = (0..rank)
        .map(|i| roots.iter().map(|r| index[reflect(r, i).as_slice()] as u8).collect())
        .collect();
    let positive = roots.iter().map(|r| r.iter().all(|&c| c >= 0)).collect();
    Ok(RootSystem {
        label,
        rank,
        cartan,
        roots,
        simple,
        reflections,
        positive,
        weyl: OnceLock::new(),
    })
}

impl RootSystem {
    pub fn label(&self) -> RootType {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn roots(&self) -> &[Vec<i32>] {
        &self.roots
    }

    pub fn n_positive(&self) -> usize {
        self.positive.iter().filter(|&&p| p).count()
    }

    pub fn is_positive(&self, root: usize) -> bool {
        self.positive[root]
    }

    /// Root index of the simple root with 1-based Bourbaki label `label`.
    pub fn simple_root(&self, label: usize) -> usize {
        self.simple[label - 1]
    }

    /// Action of the simple reflection with 1-based label on root indices.
    pub fn reflection_table(&self, label: usize) -> &[u8] {
        &self.reflections[label - 1]
    }

    pub fn check_labels(&self, labels: &[usize]) -> Result<(), WeylError> {
        match labels.iter().find(|&&l| l == 0 || l > self.rank) {
            Some(&l) => Err(WeylError::BadSimpleRoot { label: l, rank: self.rank }),
            None => Ok(()),
        }
    }

    /// Labels `1..=rank` minus `omit`.
    pub fn complement(&self, omit: &[usize]) -> Result<Vec<usize>, WeylError> {
        self.check_labels(omit)?;
        Ok((1..=self.rank).filter(|l| !omit.contains(l)).collect())
    }

    /// Full Weyl group data, enumerated once and cached.
    pub fn weyl_data(&self, cap: usize) -> Result<&WeylData, WeylError> {
        if let Some(w) = self.weyl.get() {
            return Ok(w);
        }
        let all: Vec<usize> = (1..=self.rank).collect();
        let data = enumerate_reflection_group(self, &all, cap)?;
        Ok(self.weyl.get_or_init(|| data))
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.label, self.rank)
    }
}
