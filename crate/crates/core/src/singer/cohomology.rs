use num_bigint::BigUint;
use serde::Serialize;

use super::SingerError;
use crate::gf::{Field, FieldElem};
use crate::projgeom::{rref, Vector};

/// Largest number of unknowns `h2_bruteforce` will solve for.
pub const MAX_H2_VARIABLES: u64 = 1 << 12;

fn big_pow(p: u32, e: u64) -> BigUint {
    BigUint::from(p).pow(e as u32)
}

/// `p^{n(n−1)} · p^{n²(n−1)/2}`, the order of H²(C_pⁿ, C_pⁿ) as given by the
/// closed form `C_p^{n(n−1)} ⊕ C_p^{n²(n−1)/2}`.
pub fn h2_order_paper(p: u32, n: u32) -> BigUint {
    let n = n as u64;
    big_pow(p, n * (n - 1) * (n + 2) / 2)
}

/// Order `p^{n(n−1)/2}` of the Schur multiplier of C_pⁿ.
pub fn schur_multiplier_order(p: u32, n: u32) -> BigUint {
    let n = n as u64;
    big_pow(p, n * (n - 1) / 2)
}

/// An unreduced fraction of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fraction {
    #[serde(serialize_with = "as_decimal")]
    pub num: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub den: BigUint,
}

fn as_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl Fraction {
    pub fn value(&self) -> f64 {
        let to_f = |x: &BigUint| x.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
        to_f(&self.num) / to_f(&self.den)
    }
}

/// `(p^{n²} − q^{p mod 2}) / (p^{n(n−1)(n+2)/2} − 1)` with `q = pⁿ`, the ratio
/// of lifted Singer groups to extension classes per fiber.
pub fn fiber_bound(p: u32, n: u32) -> Result<Fraction, SingerError> {
    let den = h2_order_paper(p, n) - BigUint::from(1u32);
    if den == BigUint::from(0u32) {
        return Err(SingerError::DivisionByZero);
    }
    let n64 = n as u64;
    let q_term = big_pow(p, n64 * (p as u64 % 2));
    Ok(Fraction {
        num: big_pow(p, n64 * n64) - q_term,
        den,
    })
}

/// |H²(C_pⁿ, A)| for the trivial module A = GF(p)ⁿ, from the ranks of the
/// coboundary maps on inhomogeneous cochains.
pub fn h2_bruteforce(p: u32, n: u32) -> Result<BigUint, SingerError> {
    let order = (p as u64).checked_pow(n).ok_or(SingerError::SystemTooLarge(u64::MAX))?;
    let vars = order.saturating_mul(order).saturating_mul(n as u64);
    if vars > MAX_H2_VARIABLES || n == 0 {
        return Err(SingerError::SystemTooLarge(vars));
    }
    let f = Field::new(p, 1)?;
    let g = order as usize;
    let n = n as usize;
    let add = |a: usize, b: usize| -> usize {
        let (mut a, mut b, mut out, mut place) = (a, b, 0usize, 1usize);
        for _ in 0..n {
            out += ((a % p as usize + b % p as usize) % p as usize) * place;
            a /= p as usize;
            b /= p as usize;
            place *= p as usize;
        }
        out
    };
    let one = FieldElem::ONE;
    let minus = f.neg(one);
    let bump = |row: &mut Vector, col: usize, by: FieldElem| row[col] = f.add(row[col], by);

    // δ¹: C¹ → C², (δφ)(x, y) = φ(y) − φ(x + y) + φ(x).
    let c1 = g * n;
    let mut d1: Vec<Vector> = Vec::with_capacity(g * g * n);
    for x in 0..g {
        for y in 0..g {
            for c in 0..n {
                let mut row = vec![FieldElem::ZERO; c1];
                bump(&mut row, y * n + c, one);
                bump(&mut row, add(x, y) * n + c, minus);
                bump(&mut row, x * n + c, one);
                d1.push(row);
            }
        }
    }
    let rank1 = rref(&f, &mut d1);

    // δ²: C² → C³, (δF)(x, y, z) = F(y, z) − F(x + y, z) + F(x, y + z) − F(x, y).
    let c2 = g * g * n;
    let var = |a: usize, b: usize, c: usize| (a * g + b) * n + c;
    let mut d2: Vec<Vector> = Vec::with_capacity(g * g * g * n);
    for x in 0..g {
        for y in 0..g {
            for z in 0..g {
                for c in 0..n {
                    let mut row = vec![FieldElem::ZERO; c2];
                    bump(&mut row, var(y, z, c), one);
                    bump(&mut row, var(add(x, y), z, c), minus);
                    bump(&mut row, var(x, add(y, z), c), one);
                    bump(&mut row, var(x, y, c), minus);
                    d2.push(row);
                }
            }
        }
    }
    let rank2 = rref(&f, &mut d2);
    let dim = c2 - rank2 - rank1;
    Ok(big_pow(p, dim as u64))
}
