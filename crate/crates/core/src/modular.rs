//! Exact span membership over ℚ(√2, i) through images in prime fields.
//!
//! Vectors are scaled to have coordinates in ℤ[√2, i] ⊂ ℤ[ζ₈] and mapped to
//! F_p for primes p ≡ 1 (mod 8), where ζ₈ has an image. Ranks can only drop
//! under these maps, so independence modulo one prime proves independence.
//! A rank drop at every prime means a nonzero minor M has p | N(M) for all of
//! them; once the product of the primes exceeds a Hadamard bound on |N(M)|
//! that is impossible, and dependence is certified.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::Zero;

use crate::scalar::ExactComplex;

/// Coordinates a + b√2 + (c + d√2)i with integer parts.
type IntegerEntry = [BigInt; 4];

pub(crate) struct ModularSpan {
    rows: Vec<Vec<IntegerEntry>>,
    /// Σ over stored rows of log₂ of the row's coefficient-sum bound.
    log2_rows: f64,
    fields: Vec<PrimeImage>,
    /// Search cursor for the next prime, counting down from 2⁶².
    next_candidate: u64,
}

impl ModularSpan {
    pub(crate) fn new() -> Self {
        ModularSpan {
            rows: Vec::new(),
            log2_rows: 0.0,
            fields: Vec::new(),
            next_candidate: (1u64 << 62) - 7,
        }
    }

    /// Whether `v` is independent of the stored rows; if so it is stored.
    pub(crate) fn insert(&mut self, v: &[ExactComplex]) -> bool {
        let Some(row) = integer_row(v) else {
            return false;
        };
        let log2_row = log2_bound(&row);
        let mut independent = self
            .fields
            .iter()
            .any(|f| f.full && f.residual(&row).is_some());
        if !independent {
            // Certifying dependence needs Σ log₂ p > log₂ Π over the four
            // embeddings of the Hadamard bound.
            let needed = 4.0 * (self.log2_rows + log2_row);
            while !independent && self.log2_product() <= needed {
                let field = self.add_prime();
                independent = field.full && field.residual(&row).is_some();
            }
        }
        if independent {
            for f in &mut self.fields {
                f.push(&row);
            }
            self.log2_rows += log2_row;
            self.rows.push(row);
        }
        independent
    }

    fn log2_product(&self) -> f64 {
        self.fields.iter().map(|f| (f.p as f64).log2()).sum()
    }

    fn add_prime(&mut self) -> &PrimeImage {
        let (p, zeta) = loop {
            let q = self.next_candidate;
            self.next_candidate -= 8;
            if is_prime(q) {
                if let Some(z) = primitive_eighth_root(q) {
                    break (q, z);
                }
            }
        };
        let mut field = PrimeImage::new(p, zeta);
        for row in &self.rows {
            field.push(row);
        }
        self.fields.push(field);
        self.fields.last().expect("just pushed")
    }
}

/// Echelon form of the stored rows' images in F_p.
struct PrimeImage {
    p: u64,
    sqrt2: u64,
    i: u64,
    reduced: Vec<(Vec<u64>, usize)>,
    /// Whether every stored row stayed independent modulo p.
    full: bool,
}

impl PrimeImage {
    fn new(p: u64, zeta: u64) -> Self {
        let zeta7 = pow_mod(zeta, 7, p);
        PrimeImage {
            p,
            sqrt2: add_mod(zeta, zeta7, p),
            i: mul_mod(zeta, zeta, p),
            reduced: Vec::new(),
            full: true,
        }
    }

    fn image(&self, row: &[IntegerEntry]) -> Vec<u64> {
        let p = self.p;
        row.iter()
            .map(|[a, b, c, d]| {
                let (a, b, c, d) = (reduce(a, p), reduce(b, p), reduce(c, p), reduce(d, p));
                let re = add_mod(a, mul_mod(b, self.sqrt2, p), p);
                let im = add_mod(c, mul_mod(d, self.sqrt2, p), p);
                add_mod(re, mul_mod(im, self.i, p), p)
            })
            .collect()
    }

    fn residual(&self, row: &[IntegerEntry]) -> Option<Vec<u64>> {
        let p = self.p;
        let mut w = self.image(row);
        for (r, pivot) in &self.reduced {
            let c = w[*pivot];
            if c == 0 {
                continue;
            }
            for (x, &y) in w.iter_mut().zip(r) {
                if y != 0 {
                    *x = sub_mod(*x, mul_mod(c, y, p), p);
                }
            }
        }
        w.iter().any(|&x| x != 0).then_some(w)
    }

    fn push(&mut self, row: &[IntegerEntry]) {
        if !self.full {
            return;
        }
        let Some(mut w) = self.residual(row) else {
            self.full = false;
            return;
        };
        let pivot = w.iter().position(|&x| x != 0).expect("residual is nonzero");
        let scale = pow_mod(w[pivot], self.p - 2, self.p);
        for x in w.iter_mut() {
            *x = mul_mod(*x, scale, self.p);
        }
        self.reduced.push((w, pivot));
    }
}

/// Scales `v` to integer coordinates with no common factor; `None` for the
/// zero vector.
fn integer_row(v: &[ExactComplex]) -> Option<Vec<IntegerEntry>> {
    let parts = |x: &ExactComplex| {
        [
            x.re.rational().clone(),
            x.re.radical().clone(),
            x.im.rational().clone(),
            x.im.radical().clone(),
        ]
    };
    let entries: Vec<_> = v.iter().map(parts).collect();
    let mut denominator = BigInt::from(1);
    for q in entries.iter().flatten() {
        denominator = denominator.lcm(q.denom());
    }
    let mut row: Vec<IntegerEntry> = entries
        .iter()
        .map(|e| e.clone().map(|q| q.numer() * (&denominator / q.denom())))
        .collect();
    let content = row.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
    if content.is_zero() {
        return None;
    }
    for x in row.iter_mut().flatten() {
        *x /= &content;
    }
    Some(row)
}

/// Upper bound on log₂ Σ_j (|a_j| + |c_j| + √2(|b_j| + |d_j|)), which bounds
/// the Euclidean norm of the row under every complex embedding.
fn log2_bound(row: &[IntegerEntry]) -> f64 {
    let bits = row.iter().flatten().map(|x| x.bits()).max().unwrap_or(0);
    bits as f64 + (4.0 * row.len() as f64 * 2f64.sqrt()).log2()
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.magnitude() % p;
    let r = r.iter_u64_digits().next().unwrap_or(0);
    if x.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of order exactly 8 in F_p, for prime p ≡ 1 (mod 8).
fn primitive_eighth_root(p: u64) -> Option<u64> {
    if p % 8 != 1 {
        return None;
    }
    (2..200)
        .map(|g| pow_mod(g, (p - 1) / 8, p))
        .find(|&z| pow_mod(z, 4, p) == p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_small_cases() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn images_respect_field_relations() {
        let mut span = ModularSpan::new();
        let f = span.add_prime();
        let p = f.p;
        assert_eq!(p % 8, 1);
        assert_eq!(mul_mod(f.sqrt2, f.sqrt2, p), 2);
        assert_eq!(mul_mod(f.i, f.i, p), p - 1);
    }

    #[test]
    fn integer_rows_drop_denominators_and_content() {
        let half = ExactComplex::from_ratios((1, 2), (0, 1));
        let third = ExactComplex::from_ratios((0, 1), (-1, 3));
        let row = integer_row(&[half, third]).unwrap();
        let ints = |xs: [i64; 4]| xs.map(BigInt::from);
        assert_eq!(row, vec![ints([3, 0, 0, 0]), ints([0, -2, 0, 0])]);
        assert!(integer_row(&[ExactComplex::from_integer(0)]).is_none());
    }

    #[test]
    fn scaled_copies_are_dependent() {
        let mut span = ModularSpan::new();
        let v = [ExactComplex::from_ratios((1, 3), (1, 5)), ExactComplex::i()];
        assert!(span.insert(&v));
        let s = ExactComplex::from_ratios((2, 7), (-3, 11));
        let w: Vec<_> = v.iter().map(|x| x.clone() * &s).collect();
        assert!(!span.insert(&w));
        assert!(span.insert(&[ExactComplex::from_integer(1), ExactComplex::from_integer(0)]));
    }
}
