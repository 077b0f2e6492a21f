use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficient field of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp(0, *p),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Fp(v.rem_euclid(*p as i64) as u64, *p),
        }
    }

    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        if den.is_zero() {
            return None;
        }
        match self {
            Field::Rational => Some(Scalar::Q(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let n = to_residue(num, &pb);
                let d = to_residue(den, &pb);
                if d == 0 {
                    return None;
                }
                Some(Scalar::Fp(n, *p).mul(&Scalar::Fp(d, *p).inv()))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Field::Rational => "Q".into(),
            Field::Prime(p) => format!("F{p}"),
        }
    }
}

fn to_residue(v: &BigInt, p: &BigInt) -> u64 {
    let r = ((v % p) + p) % p;
    u64::try_from(r).expect("residue fits in u64")
}

/// An exact field element. Rationals are kept in lowest terms by `BigRational`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp(u64, u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp(v, p) => *v == 1 % p,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => Scalar::Fp((a + b) % p, *p),
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => {
                Scalar::Fp(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp(a, p) => Scalar::Fp((p - a) % p, *p),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp(a, p) => {
                let mut result = 1u128;
                let mut base = *a as u128;
                let m = *p as u128;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        result = result * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                Scalar::Fp(result as u64, *p)
            }
        }
    }

    pub fn div(&self, o: &Scalar) -> Scalar {
        self.mul(&o.inv())
    }

    /// True when the printed form needs a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(a) => a.is_negative(),
            Scalar::Fp(..) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(a) => {
                if a.denom().is_one() {
                    write!(f, "{}", a.numer())
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())
                }
            }
            Scalar::Fp(a, _) => write!(f, "{a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::Prime(7);
        for v in 1..7 {
            let s = f.from_i64(v);
            assert!(s.mul(&s.inv()).is_one());
        }
    }

    #[test]
    fn rationals_stay_reduced() {
        let f = Field::Rational;
        let s = f.from_ratio(&BigInt::from(4), &BigInt::from(-6)).unwrap();
        assert_eq!(s.to_string(), "-2/3");
    }
}
