use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

fn int_val(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation; `None` for zero.
pub fn val_p(q: &Coeff, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(int_val(q.numer(), p) - int_val(q.denom(), p))
}

pub fn is_p_local(q: &Coeff, p: u64) -> bool {
    q.denom() % BigInt::from(p) != BigInt::zero()
}

/// Image of a p-local rational in `F_p`, as an integer in `0..p`.
pub fn mod_p(q: &Coeff, p: u64) -> Result<u64> {
    if !is_p_local(q, p) {
        return Err(Error::NotPLocal(q.to_string()));
    }
    let pb = BigInt::from(p);
    let n = q.numer().mod_floor(&pb).to_u64().expect("small");
    let d = q.denom().mod_floor(&pb).to_u64().expect("small");
    // d is invertible mod p; p is small enough for naive inversion.
    let inv = (1..p).find(|x| (x * d) % p == 1).expect("unit mod p");
    Ok(n * inv % p)
}

pub(crate) fn from_i64(n: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(n))
}

/// `n / d` without a gcd when `d = 1`.
pub(crate) fn ratio(n: BigInt, d: &BigInt) -> Coeff {
    if d.is_one() {
        Coeff::new_raw(n, BigInt::one())
    } else {
        Coeff::new(n, d.clone())
    }
}

/// `a += b` (or `a -= b`), skipping normalization for integers.
pub(crate) fn add_assign(a: &mut Coeff, b: &Coeff, plus: bool) {
    if a.denom().is_one() && b.denom().is_one() {
        let n = if plus { a.numer() + b.numer() } else { a.numer() - b.numer() };
        *a = Coeff::new_raw(n, BigInt::one());
    } else if plus {
        *a += b;
    } else {
        *a -= b;
    }
}

pub(crate) fn format_coeff(q: &Coeff) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Coeff {
        Coeff::new(n.into(), d.into())
    }

    #[test]
    fn valuations() {
        assert_eq!(val_p(&q(12, 1), 2), Some(2));
        assert_eq!(val_p(&q(3, 8), 2), Some(-3));
        assert_eq!(val_p(&q(0, 1), 2), None);
        assert!(is_p_local(&q(1, 3), 2));
        assert!(!is_p_local(&q(1, 6), 2));
        assert_eq!(mod_p(&q(1, 3), 2).unwrap(), 1);
        assert_eq!(mod_p(&q(-1, 2), 3).unwrap(), 1);
        assert!(mod_p(&q(1, 2), 2).is_err());
    }
}
