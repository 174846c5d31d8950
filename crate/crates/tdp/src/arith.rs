//! Shared integer utilities: modular inverses, factorization, square
//! divisors, and integer partitions.
//!
//! Public entry points work on [`BigInt`]; the `u64` variants back the
//! hot paths (T-recognition over millions of germs, corpus pruning).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Inverse of `a` modulo `m` for `m >= 1`, or `None` when gcd(a, m) != 1.
///
/// For `m == 1` every residue is 0 and the inverse is 0.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// `u64` variant of [`mod_inverse`].
pub fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd_i128(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g`.
pub fn egcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        return (a.abs(), s, 0);
    }
    let (g, x, y) = egcd_i128(b, a % b);
    (g, y, x - (a / b) * y)
}

/// Prime factorization of `n >= 1` by trial division, as `(prime, exponent)`
/// pairs in increasing prime order.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut p = 5u64;
    while p * p <= n {
        for q in [p, p + 2] {
            if n % q == 0 {
                let mut e = 0;
                while n % q == 0 {
                    n /= q;
                    e += 1;
                }
                out.push((q, e));
            }
        }
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All `n >= 1` with `n^2 | r`, in increasing order.
pub fn square_divisor_roots(r: u64) -> Vec<u64> {
    let factors = factor_u64(r);
    let mut roots = vec![1u64];
    for &(p, e) in &factors {
        let half = e / 2;
        if half == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(roots.len() * (half as usize + 1));
        for &d in &roots {
            let mut pk = 1u64;
            for _ in 0..=half {
                next.push(d * pk);
                pk = pk.saturating_mul(p);
            }
        }
        roots = next;
    }
    roots.sort_unstable();
    roots
}

/// T-witness search on a canonical-form germ `(r, a)` in machine words.
///
/// Scans `n` with `n^2 | r` in increasing order; for each, solves
/// `d n a' = a + 1 (mod r)` for `a'` in `1..=n` directly (the left side
/// runs over the multiples of `d n`), testing both representatives `a`
/// and `a^{-1} mod r`. Returns the first witness `(d, n, a')`.
pub fn t_data_u64(r: u64, a: u64) -> Option<(u64, u64, u64)> {
    debug_assert!(r >= 1);
    let a = a % r;
    let a_inv = mod_inverse_u64(a, r)?;
    for n in square_divisor_roots(r) {
        let d = r / (n * n);
        if let Some(ap) = solve_aprime_u64(r, d, n, a, a_inv) {
            return Some((d, n, ap));
        }
    }
    None
}

/// Least `a'` in `1..=n`, coprime to `n`, with `d n a' - 1` congruent to
/// `a` or `a_inv` mod `r = d n^2`; matches an ascending scan over `a'`.
fn solve_aprime_u64(_r: u64, d: u64, n: u64, a: u64, a_inv: u64) -> Option<u64> {
    let dn = d * n;
    let mut best: Option<u64> = None;
    for target in [a, a_inv] {
        let c = target + 1; // in 1..=r
        if c % dn == 0 {
            let ap = c / dn; // in 1..=n
            if gcd_u64(ap, n) == 1 {
                best = Some(best.map_or(ap, |b| b.min(ap)));
            }
        }
    }
    best
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Prime factorization of a positive big integer by trial division.
/// Fast for smooth numbers; large prime cofactors cost up to the square
/// root of the remaining part, as any trial division must.
pub fn factor_big(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let divide_out = |n: &mut BigInt, p: &BigInt, out: &mut Vec<(BigInt, u32)>| {
        if (&*n % p).is_zero() {
            let mut e = 0u32;
            while (&*n % p).is_zero() {
                *n /= p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
    };
    for p in [2u32, 3] {
        divide_out(&mut n, &BigInt::from(p), &mut out);
    }
    let mut p = BigInt::from(5);
    while &(&p * &p) <= &n {
        divide_out(&mut n, &p, &mut out);
        let q = &p + 2u32;
        divide_out(&mut n, &q, &mut out);
        p += 6u32;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// All `n` with `n^2 | r` for a big `r`, ascending.
pub fn square_divisor_roots_big(r: &BigInt) -> Vec<BigInt> {
    let factors = factor_big(r);
    let mut roots = vec![BigInt::one()];
    for (p, e) in &factors {
        let half = e / 2;
        if half == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(roots.len() * (half as usize + 1));
        for d in &roots {
            let mut pk = BigInt::one();
            for _ in 0..=half {
                next.push(d * &pk);
                pk *= p;
            }
        }
        roots = next;
    }
    roots.sort();
    roots
}

/// All partitions of `d` into positive parts, each partition with parts in
/// descending order, the list in descending lexicographic order.
///
/// `partitions(5)` starts `[5]`, `[4,1]`, `[3,2]`, ... and ends `[1,1,1,1,1]`.
pub fn partitions(d: u64) -> Vec<Vec<u64>> {
    fn rec(rem: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        let hi = rem.min(max);
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// Exact integer square root test: `Some(s)` iff `n == s*s`.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

/// Render a big integer as a JSON value: a number when it fits `i64`,
/// a decimal string otherwise.
pub fn int_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(n.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_inverse_basics() {
        let inv = |a: i64, m: i64| {
            mod_inverse(&BigInt::from(a), &BigInt::from(m)).map(|x| x.to_i64().unwrap())
        };
        assert_eq!(inv(3, 7), Some(5));
        assert_eq!(inv(5, 7), Some(3));
        assert_eq!(inv(2, 4), None);
        assert_eq!(inv(0, 1), Some(0));
        assert_eq!(mod_inverse_u64(9, 841), Some(187));
    }

    #[test]
    fn factorization_roundtrip() {
        for n in 1..5000u64 {
            let f = factor_u64(n);
            let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            for w in f.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
        }
    }

    #[test]
    fn square_roots_are_exactly_square_divisors() {
        for r in 1..2000u64 {
            let fast = square_divisor_roots(r);
            let slow: Vec<u64> = (1..).take_while(|n| n * n <= r).filter(|n| r % (n * n) == 0).collect();
            assert_eq!(fast, slow, "r = {r}");
        }
    }

    #[test]
    fn t_witness_solver_matches_reference_scan() {
        // reference: literal ascending scan over a', both representatives
        fn reference(r: u64, a: u64) -> Option<(u64, u64, u64)> {
            let a = a % r;
            let a_inv = mod_inverse_u64(a, r)?;
            for n in square_divisor_roots(r) {
                let d = r / (n * n);
                for ap in 1..=n {
                    if gcd_u64(ap, n) != 1 {
                        continue;
                    }
                    let w = ((d as u128 * n as u128 % r as u128) * ap as u128 % r as u128
                        + r as u128
                        - 1)
                        % r as u128;
                    if w as u64 == a || w as u64 == a_inv {
                        return Some((d, n, ap));
                    }
                }
            }
            None
        }
        for r in 1..=2000u64 {
            for a in 0..r.max(1) {
                if gcd_u64(a, r) != 1 {
                    continue;
                }
                assert_eq!(t_data_u64(r, a), reference(r, a), "germ ({r}, {a})");
            }
        }
    }

    #[test]
    fn big_factorization_agrees_with_u64() {
        for n in 1..3000u64 {
            let big = factor_big(&BigInt::from(n));
            let small: Vec<(BigInt, u32)> = factor_u64(n)
                .into_iter()
                .map(|(p, e)| (BigInt::from(p), e))
                .collect();
            assert_eq!(big, small);
        }
        let n = BigInt::from(2).pow(42) * BigInt::from(5).pow(40);
        let f = factor_big(&n);
        assert_eq!(f, vec![(BigInt::from(2), 42), (BigInt::from(5), 40)]);
        assert_eq!(square_divisor_roots_big(&n).len(), 22 * 21);
    }

    #[test]
    fn partition_order_and_count() {
        let p5 = partitions(5);
        assert_eq!(p5.len(), 7);
        assert_eq!(p5[0], vec![5]);
        assert_eq!(p5[1], vec![4, 1]);
        assert_eq!(p5[6], vec![1, 1, 1, 1, 1]);
        assert_eq!(partitions(10).len(), 42);
    }
}
