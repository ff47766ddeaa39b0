//! Arithmetic in GF(p^m).
//!
//! An element is the integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` where
//! `(c_0, ..., c_{m-1})` are the coordinates of its residue modulo a fixed
//! monic irreducible polynomial. The modulus is the lexicographically
//! smallest irreducible (coefficients compared low degree first), so a given
//! `(p, m)` always produces the same encoding.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 32;

/// Fields up to this order get exp/log tables.
pub const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds 2^32")]
    TooLarge { p: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("multiplicative order of zero is undefined")]
    ZeroElement,
    #[error("element {value} does not belong to GF({order})")]
    ContextMismatch { value: u64, order: u64 },
    #[error("{d} does not divide the extension degree {m}")]
    NotASubfield { d: u32, m: u32 },
    #[error("modulus {0:?} is not a monic irreducible polynomial of the stated degree")]
    Reducible(Vec<u32>),
}

/// A field element, meaningful only together with the [`Field`] it came from.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Serialized form of a field: enough to rebuild it bit-exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    /// Monic modulus, low degree first, length `m + 1`.
    pub modulus: Vec<u32>,
}

#[derive(Clone)]
pub struct Field {
    p: u32,
    m: u32,
    order: u64,
    modulus: Vec<u32>,
    primitive: Fe,
    // exp has length 2(order-1) so products of logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

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

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Writes `q = p^e` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut e = 0;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        e += 1;
    }
    Some((p, e))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Dense polynomials over GF(p), low degree first, no trailing zeros.
mod fp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        // p is prime, so a^(p-2) is the inverse.
        let mut result = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv(f[df], p);
        while r.len() > df {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            if c != 0 {
                let shift = top - df;
                for (i, &fi) in f.iter().enumerate() {
                    r[shift + i] = (r[shift + i] + p - c * fi % p) % p;
                }
            }
            trim(&mut r);
        }
        r
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                result = rem(&mul(&result, &b, p), f, p);
            }
            b = rem(&mul(&b, &b, p), f, p);
            e >>= 1;
        }
        result
    }

    /// Ben-Or style test: a monic f of degree m has no factor of degree
    /// i <= m/2 iff gcd(x^(p^i) - x, f) = 1 for each such i.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0u64, 1];
        let mut h = x.clone();
        for _ in 1..=m / 2 {
            h = pow_mod(&h, p, f, p);
            let g = gcd(&sub(&h, &x, p), f, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Builds GF(p^m) with the lexicographically smallest irreducible modulus.
    pub fn new(p: u64, m: u32) -> Result<Field, FieldError> {
        Self::build(p, m, None, true)
    }

    /// Same field without exp/log tables (polynomial arithmetic throughout).
    pub fn new_untabulated(p: u64, m: u32) -> Result<Field, FieldError> {
        Self::build(p, m, None, false)
    }

    /// Rebuilds a field from a serialized descriptor, checking the modulus.
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Field, FieldError> {
        Self::build(desc.p as u64, desc.m, Some(&desc.modulus), true)
    }

    fn build(
        p: u64,
        m: u32,
        modulus: Option<&[u32]>,
        tabulate: bool,
    ) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u128).pow(m);
        if order > MAX_ORDER as u128 {
            return Err(FieldError::TooLarge { p, m });
        }
        let order = order as u64;
        let modulus: Vec<u32> = match modulus {
            Some(given) => {
                let f: Vec<u64> = given.iter().map(|&c| c as u64).collect();
                let ok = f.len() == m as usize + 1
                    && f[m as usize] == 1
                    && f.iter().all(|&c| c < p)
                    && fp::is_irreducible(&f, p);
                if !ok {
                    return Err(FieldError::Reducible(given.to_vec()));
                }
                given.to_vec()
            }
            None => smallest_irreducible(p, m),
        };
        let mut field = Field {
            p: p as u32,
            m,
            order,
            modulus,
            primitive: Fe::ONE,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.primitive = field.find_primitive();
        if tabulate && order <= TABLE_LIMIT {
            field.tabulate();
        }
        Ok(field)
    }

    fn find_primitive(&self) -> Fe {
        let n = self.order - 1;
        let factors = prime_factors(n);
        for v in 1..self.order {
            let g = Fe(v as u32);
            if factors.iter().all(|&l| self.pow_poly(g, n / l) != Fe::ONE) {
                return g;
            }
        }
        unreachable!("every finite field has a primitive element")
    }

    fn tabulate(&mut self) {
        let n = (self.order - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.order as usize];
        let mut cur = Fe::ONE;
        for i in 0..n {
            exp[i] = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_poly(cur, self.primitive);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        self.exp = exp;
        self.log = log;
    }

    #[inline]
    fn tabulated(&self) -> bool {
        !self.exp.is_empty()
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> Fe {
        self.primitive
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            m: self.m,
            modulus: self.modulus.clone(),
        }
    }

    /// Checked conversion from the integer encoding.
    pub fn element(&self, value: u64) -> Result<Fe, FieldError> {
        if value < self.order {
            Ok(Fe(value as u32))
        } else {
            Err(FieldError::ContextMismatch {
                value,
                order: self.order,
            })
        }
    }

    pub fn contains(&self, a: Fe) -> bool {
        (a.0 as u64) < self.order
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.order).map(|v| Fe(v as u32))
    }

    fn digits(&self, a: Fe) -> Vec<u64> {
        let p = self.p as u64;
        let mut v = a.0 as u64;
        (0..self.m)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    fn from_digits(&self, d: &[u64]) -> Fe {
        let p = self.p as u64;
        let v = d.iter().rev().fold(0u64, |acc, &c| acc * p + c);
        Fe(v as u32)
    }

    /// Element of the prime subfield.
    pub fn from_prime_field(&self, c: u64) -> Fe {
        Fe((c % self.p as u64) as u32)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let p = self.p as u64;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fe(out as u32)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u64;
        let mut x = a.0 as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        Fe(out as u32)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    fn mul_poly(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p as u64;
        let f: Vec<u64> = self.modulus.iter().map(|&c| c as u64).collect();
        let prod = fp::mul(&self.digits(a), &self.digits(b), p);
        let mut r = fp::rem(&prod, &f, p);
        r.resize(self.m as usize, 0);
        self.from_digits(&r)
    }

    fn pow_poly(&self, a: Fe, mut e: u64) -> Fe {
        let mut result = Fe::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_poly(result, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        result
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        if self.tabulated() {
            let i = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
            Fe(self.exp[i])
        } else {
            self.mul_poly(a, b)
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.order - 1;
        if self.tabulated() {
            let l = self.log[a.0 as usize] as u64;
            Ok(Fe(self.exp[((n - l) % n) as usize]))
        } else {
            Ok(self.pow_poly(a, n - 1))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if a.is_zero() {
            return if e == 0 { Fe::ONE } else { Fe::ZERO };
        }
        let n = self.order - 1;
        let e = e % n;
        if self.tabulated() {
            let l = self.log[a.0 as usize] as u128;
            Fe(self.exp[((l * e as u128) % n as u128) as usize])
        } else {
            self.pow_poly(a, e)
        }
    }

    /// Range-checked binary operation.
    pub fn arith(&self, a: Fe, b: Fe, op: ArithOp) -> Result<Fe, FieldError> {
        for x in [a, b] {
            if !self.contains(x) {
                return Err(FieldError::ContextMismatch {
                    value: x.0 as u64,
                    order: self.order,
                });
            }
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
        })
    }

    fn check_subfield(&self, d: u32) -> Result<(), FieldError> {
        if d == 0 || !self.m.is_multiple_of(d) {
            Err(FieldError::NotASubfield { d, m: self.m })
        } else {
            Ok(())
        }
    }

    /// Trace from GF(p^m) down to GF(p^d).
    pub fn trace_to_subfield(&self, a: Fe, d: u32) -> Result<Fe, FieldError> {
        self.check_subfield(d)?;
        let q = (self.p as u64).pow(d);
        let mut sum = Fe::ZERO;
        let mut conj = a;
        for _ in 0..self.m / d {
            sum = self.add(sum, conj);
            conj = self.pow(conj, q);
        }
        Ok(sum)
    }

    /// Norm from GF(p^m) down to GF(p^d).
    pub fn norm_to_subfield(&self, a: Fe, d: u32) -> Result<Fe, FieldError> {
        self.check_subfield(d)?;
        let q = (self.p as u64).pow(d);
        Ok(self.pow(a, (self.order - 1) / (q - 1)))
    }

    /// Whether `a` lies in the subfield of order p^d.
    pub fn in_subfield(&self, a: Fe, d: u32) -> bool {
        self.pow(a, (self.p as u64).pow(d)) == a
    }

    pub fn multiplicative_order(&self, a: Fe) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let n = self.order - 1;
        if self.tabulated() {
            let l = self.log[a.0 as usize] as u64;
            return Ok(n / gcd(l, n));
        }
        let mut ord = n;
        for l in prime_factors(n) {
            while ord.is_multiple_of(l) && self.pow(a, ord / l) == Fe::ONE {
                ord /= l;
            }
        }
        Ok(ord)
    }

    /// `{x : x^u = 1}`, a cyclic group of order gcd(u, p^m - 1), sorted.
    pub fn elements_of_order_dividing(&self, u: u64) -> Vec<Fe> {
        let n = self.order - 1;
        let size = gcd(u, n);
        let g = self.pow(self.primitive, n / size);
        let mut out = Vec::with_capacity(size as usize);
        let mut cur = Fe::ONE;
        for _ in 0..size {
            out.push(cur);
            cur = self.mul(cur, g);
        }
        out.sort_unstable();
        out
    }

    /// A generator of the cyclic subgroup of order exactly `u`, if `u | p^m - 1`.
    pub fn element_of_order(&self, u: u64) -> Option<Fe> {
        let n = self.order - 1;
        if u == 0 || !n.is_multiple_of(u) {
            return None;
        }
        Some(self.pow(self.primitive, n / u))
    }

    /// Kernel of the trace onto GF(p^d), sorted.
    pub fn trace_zero_set(&self, d: u32) -> Result<Vec<Fe>, FieldError> {
        self.check_subfield(d)?;
        let mut out = Vec::new();
        for a in self.elements() {
            if self.trace_to_subfield(a, d)?.is_zero() {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// `{a : a^q + a = 0}`, sorted. For `q^2 = p^m` this is the trace kernel
    /// onto GF(q); in larger fields it is still the same q-element set inside
    /// GF(q^2).
    pub fn antitrace_roots(&self, q: u64) -> Vec<Fe> {
        self.elements()
            .filter(|&a| self.add(self.pow(a, q), a).is_zero())
            .collect()
    }
}

fn smallest_irreducible(p: u64, m: u32) -> Vec<u32> {
    let total = p.pow(m);
    for idx in 0..total {
        // c_0 is the most significant digit of idx: low-degree-first lex order.
        let mut f = vec![0u64; m as usize + 1];
        let mut rest = idx;
        for i in (0..m as usize).rev() {
            f[i] = rest % p;
            rest /= p;
        }
        f[m as usize] = 1;
        if fp::is_irreducible(&f, p) {
            return f.iter().map(|&c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_fields() -> Vec<Field> {
        [(2, 1), (2, 2), (2, 3), (2, 4), (2, 6), (3, 1), (3, 2), (3, 3), (3, 4), (5, 2), (7, 2)]
            .iter()
            .map(|&(p, m)| Field::new(p, m).unwrap())
            .collect()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 2).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(Field::new(2, 33), Err(FieldError::TooLarge { .. })));
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        // brute force: the only monic quadratic over GF(2) without roots
        let roots_free: Vec<[u32; 3]> = (0..4u32)
            .map(|i| [i & 1, (i >> 1) & 1, 1])
            .filter(|f| (0..2u32).all(|x| (f[0] + f[1] * x + x * x) % 2 != 0))
            .collect();
        assert_eq!(roots_free, vec![[1, 1, 1]]);
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf9_has_frobenius_of_order_two() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.order(), 9);
        let moved = f.elements().any(|a| f.pow(a, 3) != a);
        assert!(moved);
        assert!(f.elements().all(|a| f.pow(f.pow(a, 3), 3) == a));
        assert_eq!(Field::new(2, 6).unwrap().order(), 64);
    }

    #[test]
    fn gf4_products() {
        let f = Field::new(2, 2).unwrap();
        // omega = x (encoding 2), omega^2 = x + 1 (encoding 3)
        let w = Fe(2);
        let w2 = f.mul(w, w);
        assert_eq!(w2, Fe(3));
        assert_eq!(f.mul(w, w2), Fe::ONE);
        assert_eq!(f.inv(Fe::ONE).unwrap(), Fe::ONE);
        assert_eq!(f.trace_to_subfield(w, 1).unwrap(), Fe::ONE);
        assert_eq!(f.norm_to_subfield(w, 1).unwrap(), Fe::ONE);
    }

    #[test]
    fn axioms_hold_exhaustively_on_small_fields() {
        for f in small_fields().into_iter().filter(|f| f.order() <= 81) {
            let els: Vec<Fe> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                    assert_eq!(f.pow(a, f.order() - 1), Fe::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                        assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn axioms_hold_on_random_triples_in_larger_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, m) in [(3, 6), (2, 10), (5, 4), (3, 12)] {
            let f = Field::new(p, m).unwrap();
            for _ in 0..10_000 {
                let a = Fe(rng.gen_range(0..f.order()) as u32);
                let b = Fe(rng.gen_range(0..f.order()) as u32);
                let c = Fe(rng.gen_range(0..f.order()) as u32);
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                assert_eq!(f.sub(f.add(a, b), b), a);
            }
        }
    }

    #[test]
    fn untabulated_arithmetic_agrees_with_tables() {
        let t = Field::new(3, 4).unwrap();
        let u = Field::new_untabulated(3, 4).unwrap();
        assert_eq!(t.primitive(), u.primitive());
        for a in t.elements() {
            assert_eq!(t.pow(a, 17), u.pow(a, 17));
            for b in t.elements().step_by(7) {
                assert_eq!(t.mul(a, b), u.mul(a, b));
            }
            if !a.is_zero() {
                assert_eq!(t.inv(a), u.inv(a));
                assert_eq!(t.multiplicative_order(a), u.multiplicative_order(a));
            }
        }
    }

    #[test]
    fn large_field_falls_back_to_polynomials() {
        let f = Field::new(2, 21).unwrap();
        assert!(!f.tabulated());
        let a = Fe(123_456);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
        assert_eq!(f.multiplicative_order(f.primitive()).unwrap(), f.order() - 1);
    }

    #[test]
    fn errors() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.inv(Fe::ZERO), Err(FieldError::DivisionByZero));
        assert_eq!(f.div(Fe::ONE, Fe::ZERO), Err(FieldError::DivisionByZero));
        assert!(matches!(
            f.arith(Fe(9), Fe(1), ArithOp::Add),
            Err(FieldError::ContextMismatch { value: 9, order: 9 })
        ));
        assert_eq!(f.multiplicative_order(Fe::ZERO), Err(FieldError::ZeroElement));
        assert!(matches!(f.trace_to_subfield(Fe::ONE, 3), Err(FieldError::NotASubfield { .. })));
        assert!(f.trace_zero_set(0).is_err());
    }

    #[test]
    fn trace_is_additive_and_lands_in_subfield() {
        for f in small_fields().into_iter().filter(|f| f.order() <= 81) {
            for d in (1..=f.degree()).filter(|d| f.degree() % d == 0) {
                assert_eq!(f.trace_to_subfield(Fe::ZERO, d).unwrap(), Fe::ZERO);
                for a in f.elements() {
                    let ta = f.trace_to_subfield(a, d).unwrap();
                    assert!(f.in_subfield(ta, d));
                    assert!(f.in_subfield(f.norm_to_subfield(a, d).unwrap(), d));
                    for b in f.elements() {
                        let tb = f.trace_to_subfield(b, d).unwrap();
                        assert_eq!(f.trace_to_subfield(f.add(a, b), d).unwrap(), f.add(ta, tb));
                    }
                }
                let kernel = f.trace_zero_set(d).unwrap();
                assert_eq!(kernel.len() as u64 * (f.characteristic() as u64).pow(d), f.order());
                assert!(kernel.contains(&Fe::ZERO));
            }
        }
    }

    #[test]
    fn trace_kernel_sizes() {
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.trace_zero_set(1).unwrap().len(), 3);
        // the c^q + c = 0 form agrees with the trace kernel when m/d = 2
        assert_eq!(f9.antitrace_roots(3), f9.trace_zero_set(1).unwrap());
        let f64 = Field::new(2, 6).unwrap();
        let brute: Vec<Fe> = f64
            .elements()
            .filter(|&a| f64.add(f64.mul(a, a), a).is_zero())
            .collect();
        assert_eq!(brute.len(), 2);
        assert_eq!(f64.antitrace_roots(2), brute);
    }

    #[test]
    fn norm_is_multiplicative_and_onto() {
        for f in small_fields().into_iter().filter(|f| f.order() <= 81) {
            for d in (1..f.degree()).filter(|d| f.degree() % d == 0) {
                assert_eq!(f.norm_to_subfield(Fe::ONE, d).unwrap(), Fe::ONE);
                let mut image: Vec<Fe> = f
                    .elements()
                    .skip(1)
                    .map(|a| f.norm_to_subfield(a, d).unwrap())
                    .collect();
                image.sort();
                image.dedup();
                assert_eq!(image.len() as u64, (f.characteristic() as u64).pow(d) - 1);
                for a in f.elements() {
                    for b in f.elements().step_by(3) {
                        let lhs = f.norm_to_subfield(f.mul(a, b), d).unwrap();
                        let rhs = f.mul(
                            f.norm_to_subfield(a, d).unwrap(),
                            f.norm_to_subfield(b, d).unwrap(),
                        );
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn orders_and_cyclic_subgroups() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.multiplicative_order(f.primitive()).unwrap(), 8);
        let h = f.elements_of_order_dividing(4);
        assert_eq!(h.len(), 4);
        for &a in &h {
            assert_eq!(f.pow(a, 4), Fe::ONE);
            assert!(h.contains(&f.inv(a).unwrap()));
            for &b in &h {
                assert!(h.contains(&f.mul(a, b)));
            }
        }
        assert_eq!(f.elements_of_order_dividing(1), vec![Fe::ONE]);
        // u not dividing 8: gcd(6, 8) = 2 elements
        assert_eq!(f.elements_of_order_dividing(6).len(), 2);
        let z = f.element_of_order(4).unwrap();
        assert_eq!(f.multiplicative_order(z).unwrap(), 4);
        assert!(f.element_of_order(3).is_none());
    }

    #[test]
    fn construction_is_deterministic() {
        let a = Field::new(3, 6).unwrap();
        let b = Field::new(3, 6).unwrap();
        assert_eq!(a.descriptor(), b.descriptor());
        assert_eq!(a.primitive(), b.primitive());
        let c = Field::from_descriptor(&a.descriptor()).unwrap();
        assert_eq!(a, c);
        let bad = FieldDescriptor { p: 2, m: 2, modulus: vec![1, 0, 1] };
        assert!(matches!(Field::from_descriptor(&bad), Err(FieldError::Reducible(_))));
    }

    #[test]
    fn prime_power_helper() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
