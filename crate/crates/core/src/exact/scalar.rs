use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The ground field of a linear computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    /// Integers modulo a prime `p < 2^31`.
    Prime(u32),
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::Input(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::Prime(p) => Scalar::Mod { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod { v: n.rem_euclid(p as i64) as u32, p },
        }
    }

    /// Parses an exact literal `"n"` or `"n/d"`. Floats are rejected.
    pub fn parse(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Input(format!("'{text}' is not an exact rational literal"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Input(format!("'{text}' has a zero denominator")));
        }
        match self {
            Field::Rational => Ok(Scalar::Rat(BigRational::new(num, den))),
            Field::Prime(p) => {
                let reduce = |x: &BigInt| -> u32 {
                    let m = BigInt::from(p);
                    let r = ((x % &m) + &m) % &m;
                    u32::try_from(r).expect("residue below p")
                };
                let n = Scalar::Mod { v: reduce(&num), p };
                let d = Scalar::Mod { v: reduce(&den), p };
                let dinv = d
                    .inv()
                    .ok_or_else(|| Error::Input(format!("'{text}' has a denominator divisible by {p}")))?;
                Ok(n.mul(&dinv))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" || s.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let digits = s.strip_prefix('F').or_else(|| s.strip_prefix("GF")).unwrap_or(s);
        let p: u32 = digits.parse().map_err(|_| Error::Input(format!("unknown field '{s}'")))?;
        Field::prime(p)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept reduced with positive
/// denominator (guaranteed by `BigRational`); residues satisfy `v < p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { v: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, .. }) => {
                Scalar::Mod { v: ((*a as u64 + *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { v, p } => Scalar::Mod { v: (*p - *v) % *p, p: *p },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, .. }) => {
                Scalar::Mod { v: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("scalar field mismatch"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Rat(a) => Some(Scalar::Rat(a.recip())),
            Scalar::Mod { v, p } => {
                // Fermat: v^(p-2)
                let (mut base, mut exp, mut acc) = (*v as u64, (*p - 2) as u64, 1u64);
                let m = *p as u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Some(Scalar::Mod { v: acc as u32, p: *p })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self.mul(&i))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else if r.is_negative() {
                    write!(f, "-{}/{}", -r.numer(), r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_reduced() {
        let q = Field::Rational;
        assert_eq!(q.parse("2/4").unwrap(), q.parse("1/2").unwrap());
        assert_eq!(q.parse("1/-2").unwrap().to_string(), "-1/2");
        assert!(q.parse("0.5").is_err());
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn residues_stay_reduced() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.parse("-1").unwrap(), f.from_i64(4));
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(3));
        assert!(f.parse("1/5").is_err());
        let big = Field::prime(2_147_483_647).unwrap();
        let x = big.from_i64(2_147_483_646);
        assert_eq!(x.mul(&x), big.one());
        assert_eq!(x.inv().unwrap(), x);
    }

    #[test]
    fn non_primes_rejected() {
        assert!(Field::prime(4).is_err());
        assert!("F7".parse::<Field>().is_ok());
        assert!("F9".parse::<Field>().is_err());
    }
}
