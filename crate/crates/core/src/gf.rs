//! Exact arithmetic in the finite fields GF(p^k).
//!
//! Elements are stored as their coefficient vector in the power basis of a root
//! of the field modulus, packed into a single base-`p` integer ("code") with
//! the constant coefficient in the least significant digit. Fields of size at
//! most 2^16 get log/antilog tables; larger ones fall back to polynomial
//! multiplication modulo the modulus.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 32;

const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{k} exceeds 2^32")]
    TooLarge { p: u64, k: u32 },
    #[error("modulus must be monic of degree k with coefficients in [0, p)")]
    MalformedModulus,
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u64),
    #[error("elements belong to different fields")]
    ContextMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("coefficient vector must have length {k} with entries in [0, {p})")]
    BadCoefficients { p: u32, k: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct FieldTag {
    p: u32,
    k: u32,
    modulus: u32,
}

/// An element of some GF(p^k). Only meaningful together with its [`FieldCtx`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    code: u32,
    tag: FieldTag,
}

impl FieldElem {
    /// Base-`p` packing of the coefficient vector, constant term least significant.
    pub fn code(self) -> u32 {
        self.code
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }
}

/// JSON form of a field: `{"p": .., "k": .., "modulus": [..]}`, modulus low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u32>,
}

#[derive(Debug)]
struct LogTables {
    /// exp[i] = g^i for i in [0, 2(size-1)); doubled so products never need a reduction.
    exp: Vec<u32>,
    /// log[c] for c != 0; log[0] unused.
    log: Vec<u32>,
}

/// A finite field GF(p^k). Immutable once built.
#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    size: u64,
    modulus: Vec<u32>,
    tag: FieldTag,
    tables: Option<LogTables>,
    primitive: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_size(p: u64, k: u32) -> Result<u64, GfError> {
    let mut size: u64 = 1;
    for _ in 0..k {
        size = size
            .checked_mul(p)
            .filter(|&s| s <= MAX_FIELD_SIZE)
            .ok_or(GfError::TooLarge { p, k })?;
    }
    Ok(size)
}

/// Remainder of `num` modulo the monic `den` over Z_p. Both low degree first.
fn poly_rem_mod_p(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    let mut r = num.to_vec();
    let d = den.len() - 1;
    while r.len() > d {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - d;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                let t = &mut r[shift + i];
                *t = (*t + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Irreducibility by exhaustive search over monic divisors of degree 1..=k/2.
fn is_irreducible(modulus: &[u32], p: u64) -> bool {
    let k = modulus.len() - 1;
    if k <= 1 {
        return true;
    }
    let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
    for d in 1..=k / 2 {
        let count = p.pow(d as u32);
        for n in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut m = n;
            for _ in 0..d {
                g.push(m % p);
                m /= p;
            }
            g.push(1);
            if poly_rem_mod_p(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// GF(p^k) with the lexicographically smallest monic irreducible modulus,
    /// coefficients compared constant term first.
    pub fn new(p: u64, k: u32) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if k == 0 {
            return Err(GfError::ZeroDegree);
        }
        let size = checked_size(p, k)?;
        if k == 1 {
            return Self::with_modulus(p, &[0, 1]);
        }
        // Candidate n encodes (c0, .., c_{k-1}) with c0 as the most significant digit.
        for n in 0..size {
            let mut coeffs = vec![0u32; k as usize + 1];
            let mut m = n;
            for i in (0..k as usize).rev() {
                coeffs[i] = (m % p) as u32;
                m /= p;
            }
            coeffs[k as usize] = 1;
            if coeffs[0] != 0 && is_irreducible(&coeffs, p) {
                return Self::with_modulus(p, &coeffs);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over Z_p")
    }

    /// Field defined by an explicit monic irreducible modulus (low degree first).
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(GfError::ZeroDegree);
        }
        let k = (modulus.len() - 1) as u32;
        let size = checked_size(p, k)?;
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c as u64 >= p) {
            return Err(GfError::MalformedModulus);
        }
        if !is_irreducible(modulus, p) {
            return Err(GfError::ReducibleModulus(p));
        }
        let p32 = p as u32;
        let mut mcode: u64 = 0;
        for &c in modulus[..k as usize].iter().rev() {
            mcode = mcode * p + c as u64;
        }
        let tag = FieldTag {
            p: p32,
            k,
            modulus: mcode as u32,
        };
        let mut ctx = FieldCtx {
            p: p32,
            k,
            size,
            modulus: modulus.to_vec(),
            tag,
            tables: None,
            primitive: 1,
        };
        ctx.primitive = ctx.find_primitive();
        if size <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    pub fn from_doc(doc: &FieldDoc) -> Result<Self, GfError> {
        if doc.modulus.len() != doc.k as usize + 1 {
            return Err(GfError::MalformedModulus);
        }
        Self::with_modulus(doc.p, &doc.modulus)
    }

    pub fn to_doc(&self) -> FieldDoc {
        FieldDoc {
            p: self.p as u64,
            k: self.k,
            modulus: self.modulus.clone(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Modulus coefficients, low degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn same_field(&self, a: FieldElem) -> bool {
        a.tag == self.tag
    }

    fn check(&self, a: FieldElem) -> Result<(), GfError> {
        if self.same_field(a) {
            Ok(())
        } else {
            Err(GfError::ContextMismatch)
        }
    }

    #[inline]
    fn assert_field(&self, a: FieldElem) {
        assert!(self.same_field(a), "field element used with a different field");
    }

    #[inline]
    fn wrap(&self, code: u32) -> FieldElem {
        FieldElem {
            code,
            tag: self.tag,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        self.wrap(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element by code; `None` when out of range.
    pub fn elem(&self, code: u64) -> Option<FieldElem> {
        (code < self.size).then(|| self.wrap(code as u32))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem, GfError> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(GfError::BadCoefficients {
                p: self.p,
                k: self.k,
            });
        }
        Ok(self.wrap(self.encode(coeffs.iter().map(|&c| c as u64))))
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        self.assert_field(a);
        self.decode(a.code).into_iter().map(|c| c as u32).collect()
    }

    fn decode(&self, mut code: u32) -> Vec<u64> {
        let p = self.p;
        (0..self.k)
            .map(|_| {
                let c = code % p;
                code /= p;
                c as u64
            })
            .collect()
    }

    fn encode(&self, coeffs: impl DoubleEndedIterator<Item = u64>) -> u32 {
        let mut code: u64 = 0;
        for c in coeffs.rev() {
            code = code * self.p as u64 + c;
        }
        code as u32
    }

    /// All elements, zero first, in increasing code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.size).map(move |c| self.wrap(c as u32))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.assert_field(a);
        self.assert_field(b);
        self.wrap(self.add_codes(a.code, b.code))
    }

    fn add_codes(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out: u64 = 0;
        let mut place: u64 = 1;
        for _ in 0..self.k {
            out += ((a % p + b % p) % p) as u64 * place;
            a /= p;
            b /= p;
            place *= p as u64;
        }
        out as u32
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.assert_field(a);
        if self.p == 2 {
            return a;
        }
        let p = self.p as u64;
        let digits = self.decode(a.code).into_iter().map(|c| (p - c) % p);
        self.wrap(self.encode(digits.collect::<Vec<_>>().into_iter()))
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.assert_field(a);
        self.assert_field(b);
        self.wrap(self.mul_codes(a.code, b.code))
    }

    fn mul_codes(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.k == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let x = self.decode(a);
        let y = self.decode(b);
        let mut prod = vec![0u64; x.len() + y.len() - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % p;
            }
        }
        let m: Vec<u64> = self.modulus.iter().map(|&c| c as u64).collect();
        let mut r = poly_rem_mod_p(&prod, &m, p);
        r.resize(self.k as usize, 0);
        self.encode(r.into_iter())
    }

    fn pow_codes(&self, base: u32, mut e: u64, mul: impl Fn(u32, u32) -> u32) -> u32 {
        let mut acc = 1u32;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Square-and-multiply; `pow(a, 0) == 1` for every `a`, including zero.
    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        self.assert_field(a);
        self.wrap(self.pow_codes(a.code, e, |x, y| self.mul_codes(x, y)))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, GfError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => {
                let n = (self.size - 1) as u32;
                let l = t.log[a.code as usize];
                self.wrap(t.exp[((n - l) % n) as usize])
            }
            None => self.pow(a, self.size - 2),
        })
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn checked_add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// `a^(p^m)`. Frobenius has order k, so `m` is reduced mod k first.
    pub fn frobenius(&self, a: FieldElem, m: u32) -> FieldElem {
        let e = (self.p as u64).pow(m % self.k);
        self.pow(a, e)
    }

    /// First element, in enumeration order, generating the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        self.wrap(self.primitive)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FieldElem) -> Result<u64, GfError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        let mut order = self.size - 1;
        for r in prime_factors(self.size - 1) {
            while order.is_multiple_of(r) && self.pow(a, order / r).code == 1 {
                order /= r;
            }
        }
        Ok(order)
    }

    fn find_primitive(&self) -> u32 {
        let n = self.size - 1;
        if n == 1 {
            return 1;
        }
        let factors = prime_factors(n);
        let mul = |x, y| self.mul_slow(x, y);
        (1..self.size)
            .map(|c| c as u32)
            .find(|&c| factors.iter().all(|&r| self.pow_codes(c, n / r, mul) != 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.size - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.size as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, self.primitive);
        }
        if n == 1 {
            exp[1] = 1;
        }
        LogTables { exp, log }
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag
    }
}

impl Eq for FieldCtx {}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: monic quadratics over Z_p without a root, in
    /// constant-term-first lexicographic order.
    fn smallest_irreducible_quadratic(p: u32) -> [u32; 3] {
        for c0 in 0..p {
            for c1 in 0..p {
                let has_root = (0..p).any(|x| (x * x + c1 * x + c0) % p == 0);
                if !has_root {
                    return [c0, c1, 1];
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn create_errors() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(FieldCtx::new(2, 0).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(
            FieldCtx::new(2, 33).unwrap_err(),
            GfError::TooLarge { .. }
        ));
    }

    #[test]
    fn prime_field_and_gf4_moduli() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        assert_eq!(f2.size(), 2);
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf9_modulus_matches_enumeration() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &smallest_irreducible_quadratic(3));
        for p in [5u32, 7, 11] {
            let f = FieldCtx::new(p as u64, 2).unwrap();
            assert_eq!(f.modulus(), &smallest_irreducible_quadratic(p));
        }
    }

    #[test]
    fn gf4_generator_squares_to_g_plus_one() {
        let f = FieldCtx::new(2, 2).unwrap();
        let g = f.from_coeffs(&[0, 1]).unwrap();
        let g_plus_1 = f.add(g, f.one());
        assert_eq!(f.mul(g, g), g_plus_1);
        assert_eq!(f.frobenius(g, 1), g_plus_1);
    }

    #[test]
    fn gf9_inverses() {
        let f = FieldCtx::new(3, 2).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(f.inv(a).unwrap(), a), f.one());
        }
        assert_eq!(f.inv(f.zero()).unwrap_err(), GfError::ZeroInverse);
    }

    #[test]
    fn add_zero_and_pow_zero() {
        for (p, k) in [(2, 3), (3, 2), (5, 1), (7, 2)] {
            let f = FieldCtx::new(p, k).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.zero()), a);
                assert_eq!(f.pow(a, 0), f.one());
                assert_eq!(f.add(a, f.neg(a)), f.zero());
            }
        }
    }

    #[test]
    fn frobenius_order_k_is_identity() {
        let f = FieldCtx::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.frobenius(a, 2), a);
        }
    }

    #[test]
    fn frobenius_is_additive_in_gf64() {
        use rand::{Rng, SeedableRng};
        let f = FieldCtx::new(2, 6).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = f.elem(rng.random_range(0..64)).unwrap();
            let b = f.elem(rng.random_range(0..64)).unwrap();
            let lhs = f.pow(f.add(a, b), 2);
            let rhs = f.add(f.pow(a, 2), f.pow(b, 2));
            assert_eq!(lhs, rhs);
            assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
        }
    }

    #[test]
    fn enumeration_is_distinct_and_zero_first() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let els: Vec<_> = f2.elements().map(|e| f2.coeffs(e)).collect();
        assert_eq!(els, vec![vec![0], vec![1]]);
        assert_eq!(FieldCtx::new(2, 2).unwrap().elements().count(), 4);
        let f9 = FieldCtx::new(3, 2).unwrap();
        let set: std::collections::HashSet<_> = f9.elements().collect();
        assert_eq!(set.len(), 9);
        assert!(f9.elements().next().unwrap().is_zero());
    }

    #[test]
    fn mixed_contexts_are_rejected() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let f8 = FieldCtx::new(2, 3).unwrap();
        assert_eq!(
            f4.checked_add(f4.one(), f8.one()).unwrap_err(),
            GfError::ContextMismatch
        );
        assert_eq!(
            f4.checked_mul(f8.one(), f4.one()).unwrap_err(),
            GfError::ContextMismatch
        );
        assert_eq!(f4.inv(f8.one()).unwrap_err(), GfError::ContextMismatch);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, k) in [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)] {
            let f = FieldCtx::new(p, k).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn table_and_slow_paths_agree() {
        let f = FieldCtx::new(3, 4).unwrap();
        for a in f.elements() {
            for b in f.elements().step_by(7) {
                assert_eq!(f.mul(a, b).code(), f.mul_slow(a.code(), b.code()));
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for (p, k) in [(2, 2), (3, 2), (2, 3), (2, 4), (3, 4), (5, 2), (7, 2)] {
            let f = FieldCtx::new(p, k).unwrap();
            let n = f.size() - 1;
            let orders: Vec<u64> = f.elements().skip(1).map(|a| f.mult_order(a).unwrap()).collect();
            assert!(orders.contains(&n));
            assert_eq!(f.mult_order(f.primitive_element()).unwrap(), n);
        }
    }

    #[test]
    fn frobenius_fixes_exactly_prime_field() {
        for (p, k) in [(2, 2), (3, 2), (2, 4), (5, 2)] {
            let f = FieldCtx::new(p, k).unwrap();
            let fixed = f.elements().filter(|&a| f.frobenius(a, 1) == a).count();
            assert_eq!(fixed as u64, p);
        }
    }

    #[test]
    fn doc_round_trip_and_validation() {
        let f = FieldCtx::new(3, 2).unwrap();
        let doc = f.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(json, r#"{"p":3,"k":2,"modulus":[1,0,1]}"#);
        let back = FieldCtx::from_doc(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, f);
        let reducible = FieldDoc {
            p: 3,
            k: 2,
            modulus: vec![2, 0, 1],
        };
        assert_eq!(FieldCtx::from_doc(&reducible).unwrap_err(), GfError::ReducibleModulus(3));
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldCtx::new(2, 20).unwrap();
        assert!(f.tables.is_none());
        let g = f.primitive_element();
        let x = f.pow(g, 12345);
        assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        assert_eq!(f.frobenius(x, 20), x);
    }
}
