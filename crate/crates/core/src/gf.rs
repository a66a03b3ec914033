//! Finite-field arithmetic over GF(p^e).
//!
//! Elements are identified by their integer encoding `n = Σ c_i p^i`, where
//! `c_i` are the coefficients of the polynomial representative (low-order
//! first). The enumeration order of a field is ascending encoding, so
//! `α_0 = 0` and `α_1 = 1`.
//!
//! Multiplication goes through log/antilog tables built once from the
//! reference polynomial arithmetic in [`poly_mul_mod`]; addition is digit-wise
//! modulo `p`.

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 8;
/// Largest supported field order.
pub const MAX_ORDER: u32 = 4096;

/// A finite field GF(p^e) with a fixed monic irreducible modulus.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// A field element, stored as its integer encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn encoding(self) -> u32 {
        self.0
    }

    /// Polynomial coefficients, low-order first, exactly `e` of them.
    pub fn coeffs(self, field: &FieldSpec) -> Vec<u32> {
        digits(self.0, field.p, field.e as usize)
    }

    pub fn from_coeffs(field: &FieldSpec, coeffs: &[u32]) -> FieldElement {
        FieldElement(undigits(coeffs, field.p))
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The operations exposed through [`FieldSpec::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Decomposes `q = p^e` with `p` prime, or returns `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Parses a field order given either as `p^e` or as a plain prime power.
pub fn parse_order(text: &str) -> Result<u64> {
    let text = text.trim();
    let q = match text.split_once('^') {
        Some((p, e)) => {
            let p: u64 = p.trim().parse().map_err(|_| Error::parse_value(text))?;
            let e: u32 = e.trim().parse().map_err(|_| Error::parse_value(text))?;
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            p.checked_pow(e).ok_or_else(|| Error::parse_value(text))?
        }
        None => text.parse().map_err(|_| Error::parse_value(text))?,
    };
    prime_power(q).ok_or(Error::NotPrimePower(q))?;
    Ok(q)
}

fn digits(mut n: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic polynomial `m` over Z_p (low-order first).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let deg_m = m.len() - 1;
    let mut r: Vec<u32> = a.to_vec();
    while r.len() > deg_m {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - deg_m;
            for (i, &mc) in m[..deg_m].iter().enumerate() {
                let sub = (lead as u64 * mc as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
    }
    r
}

/// Product of two coefficient vectors reduced modulo `modulus` over Z_p.
///
/// This is the reference multiplication; the table-driven [`FieldSpec::mul`]
/// is checked against it.
pub fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(e, 0);
    r
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut divisor = digits(n as u32, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `e` over Z_p, by ascending
/// encoding of its non-leading coefficients. Returned low-order first with the
/// leading 1 included.
pub fn find_irreducible(p: u32, e: u32) -> Result<Vec<u32>> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if e == 0 || e > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(e));
    }
    if e == 1 {
        return Ok(vec![0, 1]);
    }
    let count = (p as u64)
        .checked_pow(e)
        .filter(|&c| c <= MAX_ORDER as u64)
        .ok_or(Error::FieldTooLarge(p as u64, e))?;
    for n in 0..count {
        let mut poly = digits(n as u32, p, e as usize);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return Ok(poly);
        }
    }
    unreachable!("irreducible polynomials exist for every degree")
}

fn factorize(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// Builds GF(p^e) with the canonical modulus from [`find_irreducible`].
pub fn make_field(p: u32, e: u32) -> Result<FieldSpec> {
    let modulus = find_irreducible(p, e)?;
    FieldSpec::with_modulus(p, modulus)
}

/// Builds GF(q) for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<FieldSpec> {
    let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if q > MAX_ORDER as u64 {
        return Err(Error::FieldTooLarge(p, e));
    }
    make_field(p as u32, e)
}

impl FieldSpec {
    /// Builds the field for an explicitly supplied modulus, which is checked
    /// for monicity and irreducibility.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<FieldSpec> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let e = modulus.len().saturating_sub(1) as u32;
        if e == 0 || e > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(e));
        }
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Precondition(format!("modulus {modulus:?} is not monic over Z_{p}")));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::Precondition(format!("modulus {modulus:?} is reducible over Z_{p}")));
        }
        let q = (p as u64).pow(e);
        if q > MAX_ORDER as u64 {
            return Err(Error::FieldTooLarge(p as u64, e));
        }
        let q = q as u32;

        // Find a generator of the multiplicative group.
        let order = (q - 1) as u64;
        let prime_factors = factorize(order);
        let pow = |base: &[u32], mut k: u64| {
            let mut acc = digits(1, p, e as usize);
            let mut b = base.to_vec();
            while k > 0 {
                if k & 1 == 1 {
                    acc = poly_mul_mod(&acc, &b, &modulus, p);
                }
                b = poly_mul_mod(&b, &b, &modulus, p);
                k >>= 1;
            }
            undigits(&acc, p)
        };
        let generator = (1..q)
            .find(|&g| {
                let gd = digits(g, p, e as usize);
                prime_factors.iter().all(|&r| pow(&gd, order / r) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; q as usize];
        let mut log = vec![0u32; q as usize];
        let gd = digits(generator, p, e as usize);
        let mut cur = digits(1, p, e as usize);
        for i in 0..(q - 1) {
            let n = undigits(&cur, p);
            exp[i as usize] = n;
            log[n as usize] = i;
            cur = poly_mul_mod(&cur, &gd, &modulus, p);
        }
        Ok(FieldSpec { p, e, q, modulus, exp, log })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low-order first, leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `α_i` in the canonical enumeration.
    pub fn element(&self, index: u32) -> FieldElement {
        assert!(index < self.q, "element index {index} outside GF({})", self.q);
        FieldElement(index)
    }

    /// All `q` elements in ascending encoding.
    pub fn enumerate_elements(&self) -> Vec<FieldElement> {
        (0..self.q).map(FieldElement).collect()
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.e == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.e == 1 {
            return FieldElement((self.p - a.0) % self.p);
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let s = (self.log[a.0 as usize] + self.log[b.0 as usize]) % (self.q - 1);
        FieldElement(self.exp[s as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero { q: self.q });
        }
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let l = self.log[a.0 as usize] as u64 * (k % (self.q as u64 - 1)) % (self.q as u64 - 1);
        FieldElement(self.exp[l as usize])
    }

    /// Applies one of the field operations; `b` is ignored by unary ops.
    pub fn apply(&self, op: FieldOp, a: FieldElement, b: Option<FieldElement>) -> Result<FieldElement> {
        for x in std::iter::once(a).chain(b) {
            if x.0 >= self.q {
                return Err(Error::Precondition(format!("encoding {} outside GF({})", x.0, self.q)));
            }
        }
        let need_b = || b.ok_or_else(|| Error::Precondition(format!("{op:?} needs two operands")));
        Ok(match op {
            FieldOp::Add => self.add(a, need_b()?),
            FieldOp::Sub => self.sub(a, need_b()?),
            FieldOp::Mul => self.mul(a, need_b()?),
            FieldOp::Inv => self.inv(a)?,
            FieldOp::Neg => self.neg(a),
        })
    }
}
