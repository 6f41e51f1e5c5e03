//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! Elements are stored in the power basis `1, z, ..., z^{φ(N)-1}` with integer
//! numerators over one positive common denominator. Roots of unity (and their
//! negatives) carry a cached exponent so that products of units never touch
//! big-integer arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("root order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid root order {0}")]
    InvalidOrder(u32),
    #[error("scalar parse error: {0}")]
    Parse(String),
}

/// Precomputed tables for one root order.
pub struct Field {
    n: u32,
    deg: usize,
    /// `powers[k]` is z^k reduced, for `k < 2 * max(N, deg)`.
    powers: Vec<Vec<i64>>,
    /// order of the unit group {±z^k}
    m: u32,
    units: Vec<Arc<Vec<BigInt>>>,
    unit_index: HashMap<Vec<i64>, u32>,
    galois: Vec<u32>,
}

fn cyclotomic_poly(n: u32, cache: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_poly(d, cache);
            num = poly_div_exact(&num, &div);
        }
    }
    cache.insert(n, num.clone());
    num
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    assert!(lead == 1 || lead == -1);
    let dq = rem.len() - 1 - db;
    let mut q = vec![0i64; dq + 1];
    for i in (0..=dq).rev() {
        let c = rem[i + db] * lead;
        q[i] = c;
        for j in 0..=db {
            rem[i + j] = rem[i + j].checked_sub(c * b[j]).expect("cyclotomic overflow");
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

impl Field {
    fn build(n: u32) -> Field {
        let mut cache = HashMap::new();
        let phi = cyclotomic_poly(n, &mut cache);
        let deg = phi.len() - 1;
        let count = 2 * (n as usize).max(deg) + 2;
        let mut powers: Vec<Vec<i64>> = Vec::with_capacity(count);
        let mut cur = vec![0i64; deg];
        cur[0] = 1;
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by z and reduce by the monic Φ_N
            let top = cur[deg - 1];
            let mut next = vec![0i64; deg];
            for i in (1..deg).rev() {
                next[i] = cur[i - 1];
            }
            for (i, slot) in next.iter_mut().enumerate() {
                *slot = slot.checked_sub(top * phi[i]).expect("cyclotomic overflow");
            }
            cur = next;
        }
        let m = if n.is_multiple_of(2) { n } else { 2 * n };
        // ω generates the unit group {±z^k}
        let omega_raw: Vec<i64> = if n.is_multiple_of(2) {
            powers[1].clone()
        } else {
            powers[n.div_ceil(2) as usize].iter().map(|c| -c).collect()
        };
        let mut units = Vec::with_capacity(m as usize);
        let mut unit_index = HashMap::new();
        let mut u = vec![0i64; deg];
        u[0] = 1;
        for j in 0..m {
            unit_index.entry(u.clone()).or_insert(j);
            units.push(Arc::new(u.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>()));
            u = mul_small(&u, &omega_raw, &powers, deg);
        }
        let galois = (1..=n).filter(|k| n == 1 || k.gcd(&n) == 1).map(|k| k % n.max(1)).collect();
        Field { n, deg, powers, m, units, unit_index, galois }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.deg
    }
}

fn mul_small(a: &[i64], b: &[i64], powers: &[Vec<i64>], deg: usize) -> Vec<i64> {
    let mut raw = vec![0i64; 2 * deg];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            raw[i + j] += x * y;
        }
    }
    let mut out = raw[..deg].to_vec();
    for k in deg..raw.len() {
        if raw[k] != 0 {
            for (i, o) in out.iter_mut().enumerate() {
                *o += raw[k] * powers[k][i];
            }
        }
    }
    out
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();

/// Shared tables for root order `n`.
pub fn field(n: u32) -> Result<Arc<Field>, ScalarError> {
    if n == 0 || n > 10_000 {
        return Err(ScalarError::InvalidOrder(n));
    }
    let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().expect("field cache poisoned");
    Ok(guard.entry(n).or_insert_with(|| Arc::new(Field::build(n))).clone())
}

/// An element of Q(ζ_N).
#[derive(Clone)]
pub struct CycNumber {
    field: Arc<Field>,
    num: Arc<Vec<BigInt>>,
    den: BigInt,
    unit: Option<u32>,
}

impl CycNumber {
    fn from_parts(field: Arc<Field>, mut num: Vec<BigInt>, mut den: BigInt) -> CycNumber {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        if num.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        } else if !den.is_one() {
            let mut g = den.clone();
            for c in num.iter() {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                for c in num.iter_mut() {
                    *c = &*c / &g;
                }
                den = &den / &g;
            }
        }
        let mut unit = None;
        if den.is_one() {
            let key: Option<Vec<i64>> = num.iter().map(|c| c.to_i64()).collect();
            if let Some(k) = key {
                unit = field.unit_index.get(&k).copied();
            }
        }
        if let Some(j) = unit {
            let num = field.units[j as usize].clone();
            return CycNumber { field, num, den, unit };
        }
        CycNumber { field, num: Arc::new(num), den, unit }
    }

    fn unit_of(field: &Arc<Field>, j: u32) -> CycNumber {
        let j = j % field.m;
        CycNumber { field: field.clone(), num: field.units[j as usize].clone(), den: BigInt::one(), unit: Some(j) }
    }

    pub fn zero(n: u32) -> CycNumber {
        let f = field(n).expect("invalid root order");
        let deg = f.deg;
        CycNumber::from_parts(f, vec![BigInt::zero(); deg], BigInt::one())
    }

    pub fn one(n: u32) -> CycNumber {
        let f = field(n).expect("invalid root order");
        CycNumber::unit_of(&f, 0)
    }

    pub fn from_int(n: u32, v: i64) -> CycNumber {
        CycNumber::from_rational(n, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(n: u32, v: BigRational) -> CycNumber {
        let f = field(n).expect("invalid root order");
        let mut num = vec![BigInt::zero(); f.deg];
        num[0] = v.numer().clone();
        CycNumber::from_parts(f, num, v.denom().clone())
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_pow(n: u32, k: i64) -> CycNumber {
        let f = field(n).expect("invalid root order");
        let e = k.rem_euclid(n as i64) as usize;
        let num: Vec<BigInt> = f.powers[e].iter().map(|&c| BigInt::from(c)).collect();
        CycNumber::from_parts(f, num, BigInt::one())
    }

    /// Canonical representative of a rational polynomial in ζ_N.
    pub fn cyc_reduce(raw: &[BigRational], n: u32) -> Result<CycNumber, ScalarError> {
        let f = field(n)?;
        let mut den = BigInt::one();
        for c in raw {
            den = den.lcm(c.denom());
        }
        let mut num = vec![BigInt::zero(); f.deg];
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer() * (&den / c.denom());
            let e = k % n as usize;
            for (i, p) in f.powers[e].iter().enumerate() {
                if *p != 0 {
                    num[i] += &scaled * BigInt::from(*p);
                }
            }
        }
        Ok(CycNumber::from_parts(f, num, den))
    }

    pub fn order(&self) -> u32 {
        self.field.n
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_none() && self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.unit == Some(0)
    }

    /// Power-basis coordinates.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check(&self, other: &CycNumber) -> Result<(), ScalarError> {
        if self.field.n != other.field.n {
            return Err(ScalarError::OrderMismatch(self.field.n, other.field.n));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycNumber) -> Result<CycNumber, ScalarError> {
        self.check(other)?;
        let f = self.field.clone();
        let num: Vec<BigInt> = if self.den == other.den {
            self.num.iter().zip(other.num.iter()).map(|(a, b)| a + b).collect()
        } else {
            self.num.iter().zip(other.num.iter()).map(|(a, b)| a * &other.den + b * &self.den).collect()
        };
        let den = if self.den == other.den { self.den.clone() } else { &self.den * &other.den };
        Ok(CycNumber::from_parts(f, num, den))
    }

    pub fn checked_mul(&self, other: &CycNumber) -> Result<CycNumber, ScalarError> {
        self.check(other)?;
        if let (Some(a), Some(b)) = (self.unit, other.unit) {
            return Ok(CycNumber::unit_of(&self.field, a + b));
        }
        let f = self.field.clone();
        let deg = f.deg;
        let mut raw = vec![BigInt::zero(); 2 * deg];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = raw[..deg].to_vec();
        for k in deg..raw.len() {
            if raw[k].is_zero() {
                continue;
            }
            for (i, p) in f.powers[k].iter().enumerate() {
                if *p != 0 {
                    num[i] += &raw[k] * BigInt::from(*p);
                }
            }
        }
        let den = &self.den * &other.den;
        Ok(CycNumber::from_parts(f, num, den))
    }

    /// Image under the Galois automorphism ζ ↦ ζ^k (k coprime to N).
    pub fn galois(&self, k: u32) -> CycNumber {
        let n = self.field.n as usize;
        let f = self.field.clone();
        let mut num = vec![BigInt::zero(); f.deg];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (i * k as usize) % n;
            for (t, p) in f.powers[e].iter().enumerate() {
                if *p != 0 {
                    num[t] += c * BigInt::from(*p);
                }
            }
        }
        CycNumber::from_parts(f, num, self.den.clone())
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> CycNumber {
        let n = self.field.n;
        if let Some(j) = self.unit {
            return CycNumber::unit_of(&self.field, self.field.m - j);
        }
        self.galois(if n == 1 { 1 } else { n - 1 })
    }

    pub fn checked_inv(&self) -> Result<CycNumber, ScalarError> {
        if let Some(j) = self.unit {
            return Ok(CycNumber::unit_of(&self.field, self.field.m - j));
        }
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // a^{-1} = (product of the other conjugates) / norm(a)
        let mut prod = CycNumber::one(self.field.n);
        for &k in self.field.galois.iter() {
            if k == 1 || (self.field.n == 1) {
                continue;
            }
            prod = prod.checked_mul(&self.galois(k))?;
        }
        let norm = self.checked_mul(&prod)?;
        let q = norm.as_rational().expect("norm must be rational");
        let inv_norm = CycNumber::from_rational(self.field.n, q.recip());
        prod.checked_mul(&inv_norm)
    }

    pub fn inv(&self) -> CycNumber {
        self.checked_inv().expect("inverse of zero scalar")
    }

    pub fn pow(&self, e: i64) -> CycNumber {
        if e < 0 {
            return self.inv().pow(-e);
        }
        if let Some(j) = self.unit {
            let m = self.field.m as u64;
            return CycNumber::unit_of(&self.field, ((j as u64 * (e as u64 % m)) % m) as u32);
        }
        let mut base = self.clone();
        let mut acc = CycNumber::one(self.field.n);
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Parses the text syntax `a0 + a1*z^1 + ... (den d)`.
    pub fn parse(text: &str, n: u32) -> Result<CycNumber, ScalarError> {
        let f = field(n)?;
        let err = |m: &str| ScalarError::Parse(format!("{m} in `{}`", text.trim()));
        let mut body = text.trim();
        let mut den = BigInt::one();
        if let Some(open) = body.rfind("(den") {
            let tail = body[open..].trim();
            if !tail.ends_with(')') {
                return Err(err("unterminated denominator"));
            }
            let d: BigInt = tail[4..tail.len() - 1].trim().parse().map_err(|_| err("bad denominator"))?;
            if d.is_zero() || d.is_negative() {
                return Err(err("denominator must be positive"));
            }
            den = d;
            body = body[..open].trim();
        }
        if body.is_empty() {
            return Err(err("empty scalar"));
        }
        let mut raw = vec![BigInt::zero(); n as usize];
        let chars: Vec<char> = body.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, &c) in chars.iter().enumerate() {
            if (c == '+' || c == '-') && !(i > 0 && chars[i - 1] == '^') {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                } else if i > 0 {
                    return Err(err("dangling sign"));
                }
                neg = c == '-';
            } else {
                cur.push(c);
            }
        }
        if cur.is_empty() {
            return Err(err("dangling sign"));
        }
        terms.push((neg, cur));
        for (neg, t) in terms {
            let (coef, exp) = if let Some(pos) = t.find('z') {
                let cpart = &t[..pos];
                let coef: BigInt = if cpart.is_empty() {
                    BigInt::one()
                } else {
                    let c = cpart.strip_suffix('*').ok_or_else(|| err("expected `*` before z"))?;
                    c.parse().map_err(|_| err("bad coefficient"))?
                };
                let rest = &t[pos + 1..];
                let exp: u64 = if rest.is_empty() {
                    1
                } else {
                    let e = rest.strip_prefix('^').ok_or_else(|| err("expected `^` after z"))?;
                    e.parse().map_err(|_| err("bad exponent"))?
                };
                (coef, exp)
            } else {
                (t.parse::<BigInt>().map_err(|_| err("bad integer"))?, 0)
            };
            if exp >= n as u64 {
                return Err(err(&format!("exponent {exp} not below root order {n}")));
            }
            let coef = if neg { -coef } else { coef };
            raw[exp as usize] += coef;
        }
        let mut num = vec![BigInt::zero(); f.deg];
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in f.powers[k].iter().enumerate() {
                if *p != 0 {
                    num[i] += c * BigInt::from(*p);
                }
            }
        }
        Ok(CycNumber::from_parts(f, num, den))
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.field.n != other.field.n {
            return false;
        }
        match (self.unit, other.unit) {
            (Some(a), Some(b)) => a == b,
            (Some(_), None) | (None, Some(_)) => false,
            _ => self.den == other.den && self.num == other.num,
        }
    }
}

impl Eq for CycNumber {}

impl Hash for CycNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if k == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&format!("z^{k}"));
            } else {
                out.push_str(&format!("{mag}*z^{k}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        if !self.den.is_one() {
            out.push_str(&format!(" (den {})", self.den));
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber[N={}]({})", self.field.n, self)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &'a CycNumber) -> CycNumber {
                let g: fn(&CycNumber, &CycNumber) -> CycNumber = $body;
                g(self, rhs)
            }
        }
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &'a CycNumber) -> CycNumber {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                self.$m(&rhs)
            }
        }
    };
}

// Operators panic on mismatched root orders; use the checked_* forms to recover.
binop!(Add, add, |a, b| a.checked_add(b).expect("scalar add"));
binop!(Mul, mul, |a, b| a.checked_mul(b).expect("scalar mul"));
binop!(Sub, sub, |a, b| a.checked_add(&-b).expect("scalar sub"));
binop!(Div, div, |a, b| a.checked_mul(&b.inv()).expect("scalar div"));

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        if let Some(j) = self.unit {
            return CycNumber::unit_of(&self.field, j + self.field.m / 2);
        }
        let num = self.num.iter().map(|c| -c).collect();
        CycNumber::from_parts(self.field.clone(), num, self.den.clone())
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl std::iter::Product for CycNumber {
    fn product<I: Iterator<Item = CycNumber>>(mut iter: I) -> CycNumber {
        let first = iter.next().expect("product of empty iterator needs a root order");
        iter.fold(first, |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: u32) -> CycNumber {
        CycNumber::parse(s, n).unwrap()
    }

    fn raw(c: &[i64]) -> Vec<BigRational> {
        c.iter().map(|&v| BigRational::from_integer(v.into())).collect()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(CycNumber::cyc_reduce(&raw(&[0, 0, 1]), 4).unwrap(), CycNumber::from_int(4, -1));
        assert_eq!(CycNumber::cyc_reduce(&raw(&[0, 0, 0, 1]), 3).unwrap(), CycNumber::one(3));
        assert!(CycNumber::cyc_reduce(&raw(&[1, 1, 1]), 3).unwrap().is_zero());
    }

    #[test]
    fn products() {
        let i = CycNumber::zeta_pow(4, 1);
        assert_eq!(&i * &i, CycNumber::from_int(4, -1));
        // ζ_3 = z^4 and ζ_3² = z^8 inside Q(ζ_12)
        let a = p("1 + 2*z^4", 12);
        let b = p("1 + 2*z^8", 12);
        assert_eq!(&a * &b, CycNumber::from_int(12, 3));
        assert_eq!(&a * &a, CycNumber::from_int(12, -3));
        assert_eq!(&a * &CycNumber::one(12), a);
    }

    #[test]
    fn inverses() {
        assert_eq!(CycNumber::one(5).inv(), CycNumber::one(5));
        for n in [1u32, 2, 3, 5, 8, 12] {
            assert_eq!(CycNumber::zeta_pow(n, 1).inv(), CycNumber::zeta_pow(n, n as i64 - 1));
        }
        let a = p("1 + 2*z^4", 12);
        assert_eq!(a.inv(), p("1 + 2*z^8 (den 3)", 12));
        let b = p("3 - z^1 + 5*z^7 (den 4)", 12);
        assert!((&b * &b.inv()).is_one());
        assert_eq!(CycNumber::zero(3).checked_inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn conjugation() {
        assert_eq!(CycNumber::zeta_pow(8, 1).conj(), CycNumber::zeta_pow(8, 7));
        assert_eq!(CycNumber::one(8).conj(), CycNumber::one(8));
        assert_eq!(p("1 + z^1", 3).conj(), p("1 + z^2", 3));
        let b = p("3 - z^1 + 5*z^7 (den 4)", 12);
        assert_eq!(b.conj().conj(), b);
    }

    #[test]
    fn order_mismatch() {
        let a = CycNumber::one(3);
        let b = CycNumber::one(4);
        assert_eq!(a.checked_mul(&b), Err(ScalarError::OrderMismatch(3, 4)));
        assert_eq!(a.checked_add(&b), Err(ScalarError::OrderMismatch(3, 4)));
    }

    #[test]
    fn units_are_canonical() {
        // a unit reached by addition must compare equal to the table entry
        let s = &p("1 + z^4", 12) - &CycNumber::one(12);
        assert_eq!(s, CycNumber::zeta_pow(12, 4));
        assert!(s.unit.is_some());
        assert_eq!(-CycNumber::one(7), CycNumber::from_int(7, -1));
        assert_eq!(CycNumber::zeta_pow(7, 3).pow(7), CycNumber::one(7));
        assert_eq!(CycNumber::zeta_pow(12, 5).pow(-2), CycNumber::zeta_pow(12, 2));
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "1", "-1", "z^1", "-3 + 2*z^2 (den 5)", "1 - z^3"] {
            assert_eq!(p(s, 12).to_string(), s);
        }
        assert_eq!(p("z^4", 12).to_string(), "-1 + z^2");
        assert_eq!(p("2 (den 4)", 3).to_string(), "1 (den 2)");
        assert!(CycNumber::parse("z^12", 12).is_err());
        assert!(CycNumber::parse("1 +", 12).is_err());
        assert!(CycNumber::parse("2*w^1", 12).is_err());
        assert!(CycNumber::parse("1 (den 0)", 12).is_err());
    }

    #[test]
    fn sqrt3() {
        let d = p("z^1 + z^11", 12);
        assert_eq!(&d * &d, CycNumber::from_int(12, 3));
    }
}
