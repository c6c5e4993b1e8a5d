//! Root systems of type A, D, E; Weyl groups as permutations of the roots;
//! Poincaré polynomials, parabolic indices and group orders as exact
//! polynomials in `q`; and the divisibility scans in [`lemma`].

mod lemma;
mod poly;
mod roots;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lemma::{verify_lemma, Counterexample, IdentityCheck, LemmaCase, LemmaReport, QVerdict};
pub use poly::IntPoly;
pub use roots::{root_system, RootSystem, RootType};

/// Default bound on Weyl group enumeration.
pub const DEFAULT_WEYL_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("unsupported root system type {0:?}")]
    UnsupportedType(String),
    #[error("unsupported rank {rank} for type {label:?}")]
    UnsupportedRank { label: RootType, rank: usize },
    #[error("simple root label {label} out of range 1..={rank}")]
    BadSimpleRoot { label: usize, rank: usize },
    #[error("Weyl group enumeration exceeds {0} elements")]
    CapExceeded(usize),
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("unknown lemma case {0:?}")]
    UnknownCase(String),
    #[error("qmax must be at least 2")]
    QmaxTooSmall,
}

/// Length generating data of a (reflection sub)group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylData {
    /// Coefficient `i` counts elements of length `i`.
    pub length_distribution: Vec<u64>,
    pub order: u64,
    /// Number of positive roots sent negative by the longest element.
    pub n_positive: usize,
}

impl WeylData {
    pub fn poincare(&self) -> IntPoly {
        IntPoly::from_i64(
            &self
                .length_distribution
                .iter()
                .map(|&c| c as i64)
                .collect::<Vec<_>>(),
        )
    }
}

/// Breadth-first enumeration of the subgroup generated by the simple
/// reflections with the given labels, each element a permutation of the full
/// root list. Length = number of positive roots sent negative.
pub(crate) fn enumerate_reflection_group(
    rs: &RootSystem,
    labels: &[usize],
    cap: usize,
) -> Result<WeylData, WeylError> {
    rs.check_labels(labels)?;
    let tables: Vec<&[u8]> = labels.iter().map(|&l| rs.reflection_table(l)).collect();
    let n_roots = rs.roots().len();
    let positives: Vec<usize> = (0..n_roots).filter(|&r| rs.is_positive(r)).collect();
    let length = |w: &[u8]| positives.iter().filter(|&&r| !rs.is_positive(w[r] as usize)).count();

    let id: Box<[u8]> = (0..n_roots).map(|r| r as u8).collect();
    let mut dist = vec![0u64; positives.len() + 1];
    dist[0] = 1;
    let mut seen: HashSet<Box<[u8]>> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for t in &tables {
                let y: Box<[u8]> = w.iter().map(|&r| t[r as usize]).collect();
                if seen.contains(&y) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(WeylError::CapExceeded(cap));
                }
                dist[length(&y)] += 1;
                seen.insert(y.clone());
                next.push(y);
            }
        }
        frontier = next;
    }
    while dist.len() > 1 && *dist.last().unwrap() == 0 {
        dist.pop();
    }
    Ok(WeylData {
        order: seen.len() as u64,
        n_positive: dist.len() - 1,
        length_distribution: dist,
    })
}

pub fn weyl_enumerate(rs: &RootSystem, cap: usize) -> Result<WeylData, WeylError> {
    rs.weyl_data(cap).cloned()
}

/// `W(q) = Σ_w q^l(w)` over the full Weyl group.
pub fn poincare_poly(rs: &RootSystem, cap: usize) -> Result<IntPoly, WeylError> {
    Ok(rs.weyl_data(cap)?.poincare())
}

/// Poincaré polynomial of the parabolic subgroup `W_J`, `J` given by 1-based labels.
pub fn poincare_parabolic(rs: &RootSystem, j: &[usize], cap: usize) -> Result<IntPoly, WeylError> {
    Ok(enumerate_reflection_group(rs, j, cap)?.poincare())
}

/// `W(q) / W_J(q)`, the number of points of the parabolic coset space over GF(q).
pub fn parabolic_index_poly(rs: &RootSystem, j: &[usize], cap: usize) -> Result<IntPoly, WeylError> {
    poincare_poly(rs, cap)?.divide_exact(&poincare_parabolic(rs, j, cap)?)
}

/// Order of the universal Chevalley group, `q^N · W(q) · (q − 1)^rank`.
pub fn order_poly(rs: &RootSystem, cap: usize) -> Result<IntPoly, WeylError> {
    let data = rs.weyl_data(cap)?;
    let q_minus_one = IntPoly::from_i64(&[-1, 1]);
    Ok(&(&IntPoly::monomial(data.n_positive, 1) * &data.poincare()) * &q_minus_one.pow(rs.rank() as u32))
}

/// Classical groups whose orders are tabulated rather than derived from a root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalGroup {
    /// `q(q² − 1)`
    Sl2,
    /// `q³(q³ + 1)(q² − 1)`
    Su3,
    /// `q⁴(q² − 1)(q⁴ − 1)`
    Sp4,
}

pub fn classical_order_poly(group: ClassicalGroup) -> IntPoly {
    let m = |d, c| IntPoly::monomial(d, c);
    let minus_one = IntPoly::constant(-1);
    match group {
        ClassicalGroup::Sl2 => &m(1, 1) * &(&m(2, 1) + &minus_one),
        ClassicalGroup::Su3 => &(&m(3, 1) * &IntPoly::q_pow_plus_one(3)) * &(&m(2, 1) + &minus_one),
        ClassicalGroup::Sp4 => &(&m(4, 1) * &(&m(2, 1) + &minus_one)) * &(&m(4, 1) + &minus_one),
    }
}

/// `Some((p, k))` with `n = p^k`, `None` otherwise (including `n < 2`).
pub fn is_prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > n {
        return Some((n, 1));
    }
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}
