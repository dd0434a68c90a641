//! Exact rational arithmetic: scalars, dense matrices, homogeneous polynomials,
//! and the kernel / determinant / divisibility routines the rest of the crate
//! is built on. Nothing in here uses floating point.

mod matrix;
mod modular;
mod poly;

pub use matrix::{kernel_basis, rank, RatMatrix};
pub use modular::{IntSystem, KernelStats};
pub use poly::{
    default_var_names, divide_by_linear_power, monomials_of_degree, poly_det, DetError, HomogPoly,
    Monomial, NotDivisible,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Scales a rational vector to a primitive integer vector (gcd 1) with the
/// same direction. The zero vector maps to itself.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    ints
}

/// Primitive integer vector whose first nonzero entry is positive.
pub fn normalize_direction(v: &[Rational]) -> Vec<BigInt> {
    let mut ints = primitive_integer_vector(v);
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut ints {
                *x = -&*x;
            }
        }
    }
    ints
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("-4"), Some(rat(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&ratio(-2, 4)), "-1/2");
        assert_eq!(format_rational(&rat(7)), "7");
    }

    #[test]
    fn direction_normalization() {
        let v = vec![ratio(-1, 2), ratio(1, 3), rat(0)];
        let n = normalize_direction(&v);
        assert_eq!(n, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
        let again: Vec<Rational> = n.iter().cloned().map(Rational::from_integer).collect();
        assert_eq!(normalize_direction(&again), n);
    }
}
