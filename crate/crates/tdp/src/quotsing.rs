//! Two-dimensional cyclic quotient and Du Val singularities.
//!
//! A germ `1/r(1, a)` is the quotient of the plane by the cyclic group of
//! order `r` acting with weights `(1, a)`, `gcd(a, r) = 1`. The module
//! provides:
//!
//! - [`CyclicQuotSing`] — germs in canonical form (`a` replaced by
//!   `min(a, a^{-1} mod r)`, so isomorphic germs compare equal);
//! - Hirzebruch-Jung continued fractions ([`CyclicQuotSing::hj_expansion`],
//!   [`from_hj`]) encoding the minimal resolution chain;
//! - T-singularity recognition two independent ways: the divisor search
//!   [`CyclicQuotSing::t_data`] for the form `1/(d n^2)(1, d n a' - 1)`,
//!   and the chain calculus [`wahl_chain_is_t`];
//! - Milnor numbers, Gorenstein indices, and the Weil divisor class
//!   groups of Du Val points ([`SingularityClass`]).

use crate::arith;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// A cyclic quotient singularity `1/r(1, a)` in canonical form.
///
/// Canonical form means `a <= a^{-1} mod r`; the germ `(1, 0)` is the
/// smooth point. Construction goes through [`CyclicQuotSing::new`], which
/// normalizes and validates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicQuotSing {
    r: BigInt,
    a: BigInt,
}

impl fmt::Display for CyclicQuotSing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_smooth() {
            write!(f, "smooth")
        } else if self.is_du_val() {
            write!(f, "A{}", &self.r - 1u32)
        } else {
            write!(f, "1/{}(1,{})", self.r, self.a)
        }
    }
}

impl CyclicQuotSing {
    /// Normalizes `(r, a)` to canonical form.
    ///
    /// `r = 1` yields the smooth germ `(1, 0)`; otherwise `a` is reduced
    /// mod `r`, must be coprime to `r`, and is replaced by the smaller of
    /// `a` and `a^{-1} mod r`.
    pub fn new(r: impl Into<BigInt>, a: impl Into<BigInt>) -> Result<Self> {
        let r = r.into();
        let a = a.into();
        if !r.is_positive() {
            return Err(Error::NonPositiveOrder(r));
        }
        if r.is_one() {
            return Ok(Self {
                r,
                a: BigInt::zero(),
            });
        }
        let a = a.mod_floor(&r);
        let inv = arith::mod_inverse(&a, &r).ok_or(Error::NotCoprime {
            r: r.clone(),
            a: a.clone(),
        })?;
        let a = a.min(inv);
        Ok(Self { r, a })
    }

    pub fn smooth() -> Self {
        Self {
            r: BigInt::one(),
            a: BigInt::zero(),
        }
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn is_smooth(&self) -> bool {
        self.r.is_one()
    }

    /// A cyclic germ is Du Val exactly when it is of type `A_{r-1}`,
    /// i.e. `a = r - 1`, or smooth. The residue `r - 1` is self-inverse,
    /// so the test is stable under canonicalization.
    pub fn is_du_val(&self) -> bool {
        self.is_smooth() || self.a == &self.r - 1u32
    }

    /// Hirzebruch-Jung expansion of `r/a`: the chain `[b_1, ..., b_k]`
    /// with `r/a = b_1 - 1/(b_2 - 1/(... - 1/b_k))`, all `b_i >= 2`.
    ///
    /// The entries are the negated self-intersections of the minimal
    /// resolution chain. The smooth germ has the empty expansion.
    pub fn hj_expansion(&self) -> Vec<BigInt> {
        let mut chain = Vec::new();
        let mut r = self.r.clone();
        let mut a = self.a.clone();
        while a.is_positive() {
            // b = ceil(r / a)
            let b = (&r + &a - 1u32).div_floor(&a);
            let next = &b * &a - &r;
            chain.push(b);
            r = std::mem::replace(&mut a, next);
        }
        chain
    }

    /// T-witness `(d, n, a')` with `r = d n^2`, `gcd(a', n) = 1`,
    /// `1 <= a' <= n`, and `a == d n a' - 1 (mod r)` up to the canonical
    /// identification `a <-> a^{-1}`. `None` means the germ is not a
    /// cyclic singularity of class T.
    ///
    /// The search runs over `n` with `n^2 | r` in increasing order and
    /// returns the first witness; Du Val `A`-germs report `n = 1`.
    pub fn t_data(&self) -> Option<TClassData> {
        if let (Some(r), Some(a)) = (self.r.to_u64(), self.a.to_u64()) {
            return arith::t_data_u64(r, a)
                .map(|(d, n, ap)| TClassData::new_unchecked(d.into(), n.into(), ap.into()));
        }
        self.t_witnesses_big(true).into_iter().next()
    }

    /// Every T-witness, in increasing `n` order. The first entry equals
    /// [`CyclicQuotSing::t_data`].
    pub fn t_witnesses(&self) -> Vec<TClassData> {
        if let (Some(r), Some(a)) = (self.r.to_u64(), self.a.to_u64()) {
            let a_inv = match arith::mod_inverse_u64(a % r, r) {
                Some(i) => i,
                None => return Vec::new(),
            };
            let mut out = Vec::new();
            for n in arith::square_divisor_roots(r) {
                let d = r / (n * n);
                let dn = d * n;
                let mut aps: Vec<u64> = [a, a_inv]
                    .into_iter()
                    .filter_map(|target| {
                        let c = target + 1;
                        (c % dn == 0).then(|| c / dn)
                    })
                    .filter(|&ap| arith::gcd_u64(ap, n) == 1)
                    .collect();
                aps.sort_unstable();
                aps.dedup();
                for ap in aps {
                    out.push(TClassData::new_unchecked(d.into(), n.into(), ap.into()));
                }
            }
            return out;
        }
        self.t_witnesses_big(false)
    }

    // Factorization-based search for germs beyond machine-word orders.
    fn t_witnesses_big(&self, first_only: bool) -> Vec<TClassData> {
        let r = &self.r;
        let a = &self.a;
        let a_inv = match arith::mod_inverse(a, r) {
            Some(i) => i,
            None => return Vec::new(),
        };
        let mut out = Vec::new();
        for n in arith::square_divisor_roots_big(r) {
            let d = r / (&n * &n);
            let dn = &d * &n;
            let mut aps: Vec<BigInt> = [a, &a_inv]
                .into_iter()
                .filter_map(|target| {
                    let c = target + 1u32;
                    (&c % &dn).is_zero().then(|| c / &dn)
                })
                .filter(|ap| ap.gcd(&n).is_one())
                .collect();
            aps.sort();
            aps.dedup();
            for ap in aps {
                out.push(TClassData::new_unchecked(d.clone(), n.clone(), ap));
                if first_only {
                    return out;
                }
            }
        }
        out
    }

    /// Milnor number of the (necessarily T) germ: `r - 1` for `A_{r-1}`,
    /// `d - 1` for `1/(d n^2)(1, d n a' - 1)`. Errors on non-T germs.
    pub fn milnor_number(&self) -> Result<BigInt> {
        if self.is_smooth() {
            return Ok(BigInt::zero());
        }
        match self.t_data() {
            Some(t) => Ok(t.milnor()),
            None => Err(Error::NotTSingularity(self.to_string())),
        }
    }

    /// Gorenstein index `r / gcd(r, a + 1)`: the least `l` with `lK`
    /// Cartier. Index 1 is exactly the Du Val / smooth case.
    pub fn gorenstein_index(&self) -> BigInt {
        let g = self.r.gcd(&(&self.a + 1u32));
        &self.r / g
    }
}

/// Evaluates a Hirzebruch-Jung chain back to its germ.
///
/// Inverse to [`CyclicQuotSing::hj_expansion`] on germs: the germ of the
/// expansion of `s` is `s` again. On chains the round trip recovers the
/// chain up to reversal (a reversed chain presents the isomorphic germ
/// `1/r(1, a^{-1})`, and the canonical form keeps one representative).
pub fn from_hj(chain: &[BigInt]) -> Result<CyclicQuotSing> {
    for b in chain {
        if b < &BigInt::from(2) {
            return Err(Error::InvalidChainEntry(b.clone()));
        }
    }
    let mut num = BigInt::one();
    let mut den = BigInt::zero();
    for b in chain.iter().rev() {
        let next = b * &num - &den;
        den = std::mem::replace(&mut num, next);
    }
    CyclicQuotSing::new(num, den)
}

/// Convenience constructor for tests and examples: chain from `u64`s.
pub fn from_hj_u64(chain: &[u64]) -> Result<CyclicQuotSing> {
    let big: Vec<BigInt> = chain.iter().map(|&b| BigInt::from(b)).collect();
    from_hj(&big)
}

/// Chain-level T-recognition, independent of the divisor search in
/// [`CyclicQuotSing::t_data`].
///
/// A chain is of class T when it is an `A`-chain `[2, ..., 2]`, or when
/// peeling the growth moves
/// `[b_1, ..., b_k] -> [2, b_1, ..., b_k + 1]` and
/// `[b_1, ..., b_k] -> [b_1 + 1, ..., b_k, 2]`
/// in reverse reduces it to one of the irreducible cores `[4]` or
/// `[3, 2, ..., 2, 3]`. A grown chain never has both ends equal to 2, so
/// the peeling is deterministic.
pub fn wahl_chain_is_t(chain: &[BigInt]) -> Result<bool> {
    let two = BigInt::from(2);
    let mut c: Vec<BigInt> = Vec::with_capacity(chain.len());
    for b in chain {
        if b < &two {
            return Err(Error::InvalidChainEntry(b.clone()));
        }
        c.push(b.clone());
    }
    if c.is_empty() || c.iter().all(|b| b == &two) {
        return Ok(true);
    }
    let mut lo = 0usize;
    let mut hi = c.len() - 1;
    while hi > lo {
        let first_is_two = c[lo] == two;
        let last_is_two = c[hi] == two;
        if first_is_two && !last_is_two {
            lo += 1;
            c[hi] -= 1u32;
        } else if last_is_two && !first_is_two {
            hi -= 1;
            c[lo] -= 1u32;
        } else {
            break;
        }
    }
    let core = &c[lo..=hi];
    let is_t = if core.len() == 1 {
        core[0] == BigInt::from(4)
    } else {
        let three = BigInt::from(3);
        core[0] == three
            && core[core.len() - 1] == three
            && core[1..core.len() - 1].iter().all(|b| b == &two)
    };
    Ok(is_t)
}

/// `u64` convenience wrapper around [`wahl_chain_is_t`].
pub fn wahl_chain_is_t_u64(chain: &[u64]) -> Result<bool> {
    let big: Vec<BigInt> = chain.iter().map(|&b| BigInt::from(b)).collect();
    wahl_chain_is_t(&big)
}

/// T-witness `(d, n, a')` for the form `1/(d n^2)(1, d n a' - 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TClassData {
    d: BigInt,
    n: BigInt,
    aprime: BigInt,
}

impl TClassData {
    fn new_unchecked(d: BigInt, n: BigInt, aprime: BigInt) -> Self {
        Self { d, n, aprime }
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn aprime(&self) -> &BigInt {
        &self.aprime
    }

    pub fn milnor(&self) -> BigInt {
        &self.d - 1u32
    }
}

/// Isomorphism class of a surface quotient singularity germ, with its
/// Milnor number cached when the germ is of class T.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingularityClass {
    kind: SingKind,
    milnor: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SingKind {
    Smooth,
    /// Cyclic quotient `1/r(1, a)`, canonical form.
    Cyclic(CyclicQuotSing),
    /// Du Val point of type `D_n`, `n >= 4`.
    DuValD(u64),
    /// Du Val point of type `E_n`, `n` in `{6, 7, 8}`.
    DuValE(u8),
}

impl PartialOrd for SingularityClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SingularityClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.kind.cmp(&other.kind)
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SingKind::Smooth => write!(f, "smooth"),
            SingKind::Cyclic(s) => write!(f, "{s}"),
            SingKind::DuValD(n) => write!(f, "D{n}"),
            SingKind::DuValE(n) => write!(f, "E{n}"),
        }
    }
}

impl SingularityClass {
    pub fn smooth() -> Self {
        Self {
            kind: SingKind::Smooth,
            milnor: Some(BigInt::zero()),
        }
    }

    /// Wraps a cyclic germ, caching its Milnor number when it has one;
    /// the smooth germ collapses to [`SingularityClass::smooth`].
    pub fn cyclic(germ: CyclicQuotSing) -> Self {
        if germ.is_smooth() {
            return Self::smooth();
        }
        let milnor = germ.t_data().map(|t| t.milnor());
        Self {
            kind: SingKind::Cyclic(germ),
            milnor,
        }
    }

    /// Du Val point `A_n` (`n >= 1`), as the cyclic germ `1/(n+1)(1, n)`.
    pub fn du_val_a(n: u64) -> Self {
        let r = BigInt::from(n + 1);
        Self::cyclic(CyclicQuotSing::new(r.clone(), &r - 1u32).expect("A-germ is valid"))
    }

    pub fn du_val_d(n: u64) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidInput(format!("D{n}: need n >= 4")));
        }
        Ok(Self {
            kind: SingKind::DuValD(n),
            milnor: Some(BigInt::from(n)),
        })
    }

    pub fn du_val_e(n: u8) -> Result<Self> {
        if !(6..=8).contains(&n) {
            return Err(Error::InvalidInput(format!("E{n}: need n in 6..=8")));
        }
        Ok(Self {
            kind: SingKind::DuValE(n),
            milnor: Some(BigInt::from(n)),
        })
    }

    pub fn kind(&self) -> &SingKind {
        &self.kind
    }

    /// The underlying cyclic germ, when the class is smooth or cyclic.
    pub fn germ(&self) -> Option<&CyclicQuotSing> {
        match &self.kind {
            SingKind::Cyclic(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self.kind, SingKind::Smooth)
    }

    pub fn is_du_val(&self) -> bool {
        match &self.kind {
            SingKind::Smooth => false,
            SingKind::Cyclic(s) => s.is_du_val(),
            SingKind::DuValD(_) | SingKind::DuValE(_) => true,
        }
    }

    /// Du Val points are T; a cyclic germ is T when it has a witness.
    pub fn is_t(&self) -> bool {
        self.milnor.is_some()
    }

    /// Cached Milnor number: `r` for Du Val `A_r`/`D_r`/`E_r`, `d - 1`
    /// for the T-form; errors on a cyclic germ that is not of class T.
    pub fn milnor_number(&self) -> Result<BigInt> {
        self.milnor
            .clone()
            .ok_or_else(|| Error::NotTSingularity(self.to_string()))
    }

    /// Gorenstein index of the point; Du Val D/E points have index 1.
    pub fn gorenstein_index(&self) -> BigInt {
        match &self.kind {
            SingKind::Smooth | SingKind::DuValD(_) | SingKind::DuValE(_) => BigInt::one(),
            SingKind::Cyclic(s) => s.gorenstein_index(),
        }
    }

    /// Weil divisor class group of a Du Val point, as the list of cyclic
    /// factor orders: `A_{r-1} -> [r]`, `D_odd -> [4]`, `D_even -> [2, 2]`,
    /// `E6 -> [3]`, `E7 -> [2]`, `E8 -> []`.
    pub fn du_val_class_group(&self) -> Result<Vec<BigInt>> {
        match &self.kind {
            SingKind::Cyclic(s) if s.is_du_val() && !s.is_smooth() => Ok(vec![s.r().clone()]),
            SingKind::DuValD(n) => {
                if n % 2 == 1 {
                    Ok(vec![BigInt::from(4)])
                } else {
                    Ok(vec![BigInt::from(2), BigInt::from(2)])
                }
            }
            SingKind::DuValE(6) => Ok(vec![BigInt::from(3)]),
            SingKind::DuValE(7) => Ok(vec![BigInt::from(2)]),
            SingKind::DuValE(8) => Ok(vec![]),
            other => Err(Error::NotDuVal(format!("{other:?}"))),
        }
    }

    /// Germ JSON `{"r": .., "a": ..}` for smooth/cyclic classes, a tagged
    /// object for D/E points.
    pub fn to_json(&self) -> serde_json::Value {
        match &self.kind {
            SingKind::Smooth => serde_json::json!({"r": 1, "a": 0}),
            SingKind::Cyclic(s) => serde_json::json!({
                "r": arith::int_json(s.r()),
                "a": arith::int_json(s.a()),
            }),
            SingKind::DuValD(n) => serde_json::json!({"du_val": "D", "n": n}),
            SingKind::DuValE(n) => serde_json::json!({"du_val": "E", "n": n}),
        }
    }
}
