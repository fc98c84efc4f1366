//! Table-driven finite fields of order at most 64.

use crate::error::{Error, Result};

const POLYNOMIALS: &str = include_str!("../data/irreducible.txt");

pub const MAX_FIELD_ORDER: usize = 64;

/// GF(q) over element codes `0..q`. The code of `sum c_i x^i` is `sum c_i p^i`.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: usize,
    e: usize,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
    neg: Vec<u8>,
    primitive: u8,
    modulus: Vec<usize>,
}

/// `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Pinned polynomial for order `q`, low-to-high.
pub fn modulus_for(q: usize) -> Option<Vec<usize>> {
    POLYNOMIALS.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).find_map(|line| {
        let (order, coeffs) = line.split_once(':')?;
        if order.trim().parse::<usize>().ok()? != q {
            return None;
        }
        coeffs.split_whitespace().map(|c| c.parse().ok()).collect()
    })
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::UnsupportedField(q))?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::UnsupportedField(q));
        }
        let modulus = modulus_for(q).ok_or(Error::UnsupportedField(q))?;
        if modulus.len() != e + 1 || modulus[e] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument(format!("malformed polynomial for GF({q})")));
        }
        let digits = |mut code: usize| -> Vec<usize> {
            (0..e)
                .map(|_| {
                    let d = code % p;
                    code /= p;
                    d
                })
                .collect()
        };
        let code = |digits: &[usize]| digits.iter().rev().fold(0, |acc, &d| acc * p + d);

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = code(&sum) as u8;

                let mut product = vec![0usize; 2 * e - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        product[i + j] = (product[i + j] + x * y) % p;
                    }
                }
                // reduce by the monic modulus from the top degree down
                for deg in (e..product.len()).rev() {
                    let lead = product[deg];
                    if lead != 0 {
                        for (i, &m) in modulus.iter().enumerate() {
                            let slot = deg - e + i;
                            product[slot] = (product[slot] + p * p - lead * m % p) % p;
                        }
                    }
                }
                mul[a * q + b] = code(&product[..e]) as u8;
            }
        }

        let mut inv = vec![0u8; q];
        for a in 1..q {
            inv[a] = (1..q)
                .find(|&b| mul[a * q + b] == 1)
                .ok_or_else(|| Error::InvalidArgument(format!("polynomial for GF({q}) is reducible")))?
                as u8;
        }
        let neg: Vec<u8> = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8).collect();

        let mut field = Self { p, e, q, add, mul, inv, neg, primitive: 0, modulus };
        field.primitive = (1..q)
            .find(|&a| field.multiplicative_order(a as u8) == q - 1)
            .ok_or_else(|| Error::InvalidArgument(format!("GF({q}) has no primitive element")))?
            as u8;
        field.check_axioms()?;
        Ok(field)
    }

    fn check_axioms(&self) -> Result<()> {
        let q = self.q as u8;
        let bad = |what: &str| Err(Error::InvalidArgument(format!("GF({}) tables violate {what}", self.q)));
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return bad("identities");
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return bad("commutativity");
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                    {
                        return bad("associativity");
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return bad("distributivity");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn modulus(&self) -> &[usize] {
        &self.modulus
    }

    pub fn primitive_element(&self) -> u8 {
        self.primitive
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn pow(&self, a: u8, m: usize) -> u8 {
        (0..m).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn frobenius(&self, a: u8) -> u8 {
        self.pow(a, self.p)
    }

    pub fn multiplicative_order(&self, a: u8) -> usize {
        if a == 0 {
            return 0;
        }
        let mut x = a;
        let mut m = 1;
        while x != 1 {
            x = self.mul(x, a);
            m += 1;
        }
        m
    }

    pub fn is_square(&self, a: u8) -> bool {
        a == 0 || (0..self.q as u8).any(|b| self.mul(b, b) == a)
    }
}
