//! Exact arithmetic in cyclotomic fields Q(zeta_n).
//!
//! Elements are stored on the power basis `1, zeta_n, ..., zeta_n^(phi(n)-1)`
//! reduced modulo the n-th cyclotomic polynomial, which makes equality
//! decidable: two elements agree iff their coefficient vectors agree once both
//! are lifted to a common conductor. Conductors are never minimized after
//! arithmetic; only equality lifts.
//!
//! No floating point is used anywhere in this module.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q` (the CLI wire format).
pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Euler totient by trial-division factorization.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut phi = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            phi -= phi / p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// Distinct prime factors of `n` in ascending order.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            ps.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        ps.push(m);
    }
    ps
}

fn cyclo_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The n-th cyclotomic polynomial, monic of degree phi(n), coefficients in
/// ascending order. Computed by dividing x^n - 1 by the cyclotomic
/// polynomials of the proper divisors of n.
pub fn cyclo_poly(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclo_poly: n must be positive");
    if let Some(p) = cyclo_cache().lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    // Work bottom-up through the divisors so the recursion never re-enters
    // the cache lock.
    for d in divisors(n) {
        let have = cyclo_cache().lock().unwrap().contains_key(&d);
        if have {
            continue;
        }
        let poly = if d == 1 {
            vec![BigInt::from(-1), BigInt::from(1)]
        } else {
            let mut num = vec![BigInt::zero(); d as usize + 1];
            num[0] = BigInt::from(-1);
            num[d as usize] = BigInt::one();
            for dd in divisors(d) {
                if dd == d {
                    continue;
                }
                let q = cyclo_cache().lock().unwrap().get(&dd).map(Arc::clone).unwrap();
                num = int_poly_div_exact(&num, &q);
            }
            num
        };
        cyclo_cache().lock().unwrap().insert(d, Arc::new(poly));
    }
    cyclo_cache().lock().unwrap().get(&n).map(Arc::clone).unwrap()
}

/// Exact division of integer polynomials; the divisor must be monic and the
/// division must leave no remainder.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    assert!(dn >= dd);
    let mut rem = num.to_vec();
    let mut quo = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            quo[k] = c.clone();
            for j in 0..=dd {
                let t = &den[j] * &c;
                rem[k + j] -= t;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division is not exact");
    quo
}

/// Reduces a coefficient vector (exponents already below `n`) modulo Phi_n
/// and truncates to the canonical basis length phi(n).
fn reduce_mod_phi(mut v: Vec<Rational>, n: u64) -> Vec<Rational> {
    let phi = cyclo_poly(n);
    let d = phi.len() - 1;
    for exp in (d..v.len()).rev() {
        if v[exp].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut v[exp], Rational::zero());
        for j in 0..d {
            let t = Rational::from_integer(phi[j].clone()) * &c;
            v[exp - d + j] -= t;
        }
    }
    v.truncate(d);
    v.resize(d, Rational::zero());
    v
}

/// An exact element of Q(zeta_n) on the canonical power basis mod Phi_n.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::one()] }
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(rat_int(k))
    }

    /// Builds an element from (coefficient, exponent) terms at conductor `n`;
    /// exponents are reduced mod n and the result is canonicalized.
    pub fn from_terms(n: u64, terms: &[(Rational, u64)]) -> Self {
        assert!(n >= 1);
        let mut v = vec![Rational::zero(); n as usize];
        for (c, e) in terms {
            v[(e % n) as usize] += c;
        }
        Cyclotomic { conductor: n, coeffs: reduce_mod_phi(v, n) }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Canonical representation at conductor `target`, which must be a
    /// multiple of the current conductor.
    pub fn lift(&self, target: u64) -> Self {
        assert!(target % self.conductor == 0, "lift target must be a multiple of the conductor");
        if target == self.conductor {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut v = vec![Rational::zero(); target as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[i * step] += c;
            }
        }
        Cyclotomic { conductor: target, coeffs: reduce_mod_phi(v, target) }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let n = a.conductor.lcm(&b.conductor);
        (a.lift(n), b.lift(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::common(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::common(self, other);
        let n = a.conductor;
        let mut v = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                v[i + j] += x * y;
            }
        }
        Cyclotomic { conductor: n, coeffs: reduce_mod_phi(v, n) }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Image under the field automorphism zeta_n -> zeta_n^k; requires
    /// gcd(k, n) = 1.
    pub fn galois_apply(&self, k: i64) -> Result<Self> {
        let n = self.conductor;
        let kk = k.rem_euclid(n as i64) as u64;
        if n.gcd(&kk) != 1 {
            return Err(Error::NonCoprime { k, modulus: n });
        }
        let mut v = vec![Rational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = ((i as u64) * kk % n) as usize;
                v[e] += c;
            }
        }
        Ok(Cyclotomic { conductor: n, coeffs: reduce_mod_phi(v, n) })
    }

    /// Complex conjugation (the Galois action of -1).
    pub fn conj(&self) -> Self {
        self.galois_apply(-1).expect("-1 is a unit mod every conductor")
    }

    /// Some(r) iff this element lies in Q.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Some(k) iff this element is a rational integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        let r = self.to_rational()?;
        if r.is_integer() {
            Some(r.to_integer())
        } else {
            None
        }
    }
}

/// The canonical representation of zeta_n^k.
pub fn root_of_unity(n: u64, k: i64) -> Cyclotomic {
    assert!(n >= 1);
    let e = k.rem_euclid(n as i64) as u64;
    Cyclotomic::from_terms(n, &[(Rational::one(), e)])
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{}", rational_string(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", rational_string(&mag))?;
                }
                write!(f, "z{}", self.conductor)?;
                if i > 1 {
                    write!(f, "^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

// --- JSON wire format -------------------------------------------------------
//
// {"conductor": n, "terms": [[num, den, exp], ...]} meaning
// sum of (num/den) * zeta_n^exp; the parser reduces to canonical form.
// Numerators and denominators outside i64 range are carried as strings.

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn of(v: &BigInt) -> IntRepr {
        match i64::try_from(v) {
            Ok(x) => IntRepr::Small(x),
            Err(_) => IntRepr::Big(v.to_string()),
        }
    }

    fn to_bigint(&self) -> std::result::Result<BigInt, String> {
        match self {
            IntRepr::Small(x) => Ok(BigInt::from(*x)),
            IntRepr::Big(s) => s.parse::<BigInt>().map_err(|e| e.to_string()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycloDoc {
    conductor: u64,
    terms: Vec<(IntRepr, IntRepr, u64)>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (IntRepr::of(c.numer()), IntRepr::of(c.denom()), i as u64))
            .collect();
        CycloDoc { conductor: self.conductor, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = CycloDoc::deserialize(d)?;
        if doc.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (num, den, exp) in &doc.terms {
            let n = num.to_bigint().map_err(D::Error::custom)?;
            let dnm = den.to_bigint().map_err(D::Error::custom)?;
            if dnm.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            terms.push((Rational::new(n, dnm), *exp));
        }
        Ok(Cyclotomic::from_terms(doc.conductor, &terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclo_poly_small() {
        assert_eq!(*cyclo_poly(1), big(&[-1, 1]));
        assert_eq!(*cyclo_poly(6), big(&[1, -1, 1]));
        assert_eq!(*cyclo_poly(8), big(&[1, 0, 0, 0, 1]));
        assert_eq!(*cyclo_poly(12), big(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(root_of_unity(4, 0), Cyclotomic::one());
        let sum = root_of_unity(4, 1).add(&root_of_unity(4, 3));
        assert!(sum.is_zero());
        // zeta_3^2 = -1 - zeta_3 on the power basis mod Phi_3
        let z32 = root_of_unity(3, 2);
        assert_eq!(z32.coeffs(), &[rat_int(-1), rat_int(-1)]);
    }

    #[test]
    fn ring_ops() {
        let one = root_of_unity(5, 1).mul(&root_of_unity(5, 4));
        assert_eq!(one, Cyclotomic::one());
        let s = root_of_unity(6, 1).add(&root_of_unity(6, 5));
        assert_eq!(s, Cyclotomic::one());
        let x = root_of_unity(7, 3);
        assert_eq!(Cyclotomic::zero().add(&x), x);
    }

    #[test]
    fn galois_action() {
        let z5 = root_of_unity(5, 1);
        assert_eq!(z5.galois_apply(2).unwrap(), root_of_unity(5, 2));
        let r = Cyclotomic::from_rational(rat(3, 7));
        assert_eq!(r.galois_apply(1).unwrap(), r);
        // sqrt(2) = zeta_8 + zeta_8^-1 maps to its negative under k = 3
        let sqrt2 = root_of_unity(8, 1).add(&root_of_unity(8, -1));
        assert_eq!(sqrt2.galois_apply(3).unwrap(), sqrt2.neg());
        assert!(z5.galois_apply(5).is_err());
    }

    #[test]
    fn rational_detection() {
        assert_eq!(Cyclotomic::one().to_rational(), Some(rat_int(1)));
        assert_eq!(root_of_unity(3, 1).to_rational(), None);
        let s = root_of_unity(3, 1).add(&root_of_unity(3, 2));
        assert_eq!(s.to_rational(), Some(rat_int(-1)));
    }

    #[test]
    fn equality_lifts_conductor() {
        assert_eq!(root_of_unity(3, 1), root_of_unity(6, 2));
        assert_eq!(Cyclotomic::from_int(1), root_of_unity(5, 5));
        assert_ne!(root_of_unity(3, 1), root_of_unity(6, 1));
    }

    #[test]
    fn json_round_trip() {
        let x = root_of_unity(8, 1).add(&root_of_unity(8, -1)).scale(&rat(1, 2));
        let s = serde_json::to_string(&x).unwrap();
        let y: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        // unreduced input canonicalizes: zeta_3^2 given as exponent 5 mod 3
        let z: Cyclotomic =
            serde_json::from_str(r#"{"conductor":3,"terms":[[1,1,5]]}"#).unwrap();
        assert_eq!(z, root_of_unity(3, 2));
    }
}
