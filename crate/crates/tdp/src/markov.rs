//! Markov-type Diophantine equations `x^2 + y^2 + k z^2 = m x y z` and
//! their solution triples under Vieta mutation.
//!
//! Supported coefficient families are `k = m` (the weighted-plane family,
//! where the `z`-mutation is `z' = x y - z`) and the classical
//! `(k, m) = (1, 3)`; these are exactly the shapes with integral Vieta
//! jumps in every coordinate. Solutions are enumerated breadth-first over
//! the mutation graph from the fundamental triples, and translate to
//! weighted projective planes by `(a, b, c) -> (a^2, b^2, k c^2)`.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

/// The equation `x^2 + y^2 + k z^2 = m x y z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovEquation {
    k: BigInt,
    m: BigInt,
}

/// A positive solution triple `(a, b, c)`; `a, b` play the symmetric
/// roles of `x, y`, and `c` the distinguished role of `z`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkovTriple {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl MarkovTriple {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let (a, b, c) = (a.into(), b.into(), c.into());
        for v in [&a, &b, &c] {
            if !v.is_positive() {
                return Err(Error::InvalidInput(format!(
                    "triple entries must be positive, got ({a}, {b}, {c})"
                )));
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn max_coordinate(&self) -> &BigInt {
        (&self.a).max(&self.b).max(&self.c)
    }
}

/// Mutated coordinate of a Vieta jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    X,
    Y,
    Z,
}

impl MarkovEquation {
    /// `k = m`, or `(k, m) = (1, 3)`.
    pub fn new(k: impl Into<BigInt>, m: impl Into<BigInt>) -> Result<Self> {
        let (k, m) = (k.into(), m.into());
        if !k.is_positive() || !m.is_positive() {
            return Err(Error::UnsupportedEquation { k, m });
        }
        if k != m && !(k.is_one() && m == BigInt::from(3)) {
            return Err(Error::UnsupportedEquation { k, m });
        }
        Ok(Self { k, m })
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    /// `true` when `z` enters the equation symmetrically with `x, y`,
    /// i.e. `k = 1` and the coefficient pattern is fully symmetric.
    fn fully_symmetric(&self) -> bool {
        self.k.is_one() && self.m == BigInt::from(3)
    }

    /// Exact test of `a^2 + b^2 + k c^2 = m a b c`.
    pub fn is_solution(&self, t: &MarkovTriple) -> bool {
        let lhs = &t.a * &t.a + &t.b * &t.b + &self.k * &t.c * &t.c;
        let rhs = &self.m * &t.a * &t.b * &t.c;
        lhs == rhs
    }

    /// Canonical representative: sorts `(a, b)`; for the fully symmetric
    /// classical equation all three coordinates are sorted.
    pub fn canonicalize(&self, t: &MarkovTriple) -> MarkovTriple {
        let mut v = [t.a.clone(), t.b.clone(), t.c.clone()];
        if self.fully_symmetric() {
            v.sort();
        } else if v[0] > v[1] {
            v.swap(0, 1);
        }
        let [a, b, c] = v;
        MarkovTriple { a, b, c }
    }

    /// Vieta jump in one coordinate: `x' = m y z - x`, `y' = m x z - y`,
    /// `z' = m x y / k - z`. The result is returned raw (not reordered),
    /// so mutating the same coordinate twice restores the input.
    pub fn mutate(&self, t: &MarkovTriple, coord: Coord) -> Result<MarkovTriple> {
        if !self.is_solution(t) {
            return Err(Error::NotASolution {
                a: t.a.clone(),
                b: t.b.clone(),
                c: t.c.clone(),
                k: self.k.clone(),
                m: self.m.clone(),
            });
        }
        let (a, b, c) = (&t.a, &t.b, &t.c);
        let jumped = match coord {
            Coord::X => MarkovTriple {
                a: &self.m * b * c - a,
                b: b.clone(),
                c: c.clone(),
            },
            Coord::Y => MarkovTriple {
                a: a.clone(),
                b: &self.m * a * c - b,
                c: c.clone(),
            },
            Coord::Z => {
                let prod = &self.m * a * b;
                let (q, rem) = prod.div_rem(&self.k);
                if !rem.is_zero() {
                    return Err(Error::MutationUndefined(format!(
                        "z-jump of {t} is not integral: {} does not divide {}",
                        self.k, prod
                    )));
                }
                MarkovTriple {
                    a: a.clone(),
                    b: b.clone(),
                    c: q - c,
                }
            }
        };
        if !jumped.a.is_positive() || !jumped.b.is_positive() || !jumped.c.is_positive() {
            return Err(Error::MutationUndefined(format!(
                "jump of {t} left the positive octant: {jumped}"
            )));
        }
        debug_assert!(self.is_solution(&jumped));
        Ok(jumped)
    }

    /// All canonical solutions with every coordinate at most `bound`:
    /// breadth-first closure of the fundamental solutions under the three
    /// mutations, in lexicographic order.
    pub fn enumerate(&self, bound: &BigInt) -> Vec<MarkovTriple> {
        let seed_bound = bound.min(&BigInt::from(DEFAULT_FUNDAMENTAL_BOUND)).clone();
        let seeds = self.fundamental_solutions(&seed_bound);
        let mut visited: BTreeSet<MarkovTriple> = BTreeSet::new();
        let mut queue: VecDeque<MarkovTriple> = VecDeque::new();
        for s in seeds {
            if s.max_coordinate() <= bound && visited.insert(s.clone()) {
                queue.push_back(s);
            }
        }
        while let Some(t) = queue.pop_front() {
            for coord in [Coord::X, Coord::Y, Coord::Z] {
                let Ok(next) = self.mutate(&t, coord) else {
                    continue;
                };
                if next.max_coordinate() > bound {
                    continue;
                }
                let canon = self.canonicalize(&next);
                if visited.insert(canon.clone()) {
                    queue.push_back(canon);
                }
            }
        }
        visited.into_iter().collect()
    }

    /// Roots of the mutation forest below `search_bound`: canonical
    /// solutions none of whose mutations decreases the maximal
    /// coordinate. Exhaustive scan over `(a, c)` with the `b`-quadratic
    /// solved exactly.
    pub fn fundamental_solutions(&self, search_bound: &BigInt) -> Vec<MarkovTriple> {
        let mut out = BTreeSet::new();
        let mut a = BigInt::one();
        while &a <= search_bound {
            let mut c = BigInt::one();
            while &c <= search_bound {
                // b^2 - (m a c) b + (a^2 + k c^2) = 0
                let s = &self.m * &a * &c;
                let p = &a * &a + &self.k * &c * &c;
                let disc = &s * &s - BigInt::from(4) * &p;
                if disc.is_negative() {
                    c += 1u32;
                    continue;
                }
                if let Some(root) = crate::arith::exact_sqrt(&disc) {
                    for b2 in [&s - &root, &s + &root] {
                        if (&b2 % 2u32).is_zero() {
                            let b = b2 / 2u32;
                            if b.is_positive() && &b <= search_bound {
                                let t = MarkovTriple {
                                    a: a.clone(),
                                    b,
                                    c: c.clone(),
                                };
                                debug_assert!(self.is_solution(&t));
                                if self.is_fundamental(&t) {
                                    out.insert(self.canonicalize(&t));
                                }
                            }
                        }
                    }
                }
                c += 1u32;
            }
            a += 1u32;
        }
        out.into_iter().collect()
    }

    // A root of the mutation forest: no mutation decreases the triple in
    // the (max coordinate, coordinate sum) order. The sum tiebreak makes
    // the descent strict; e.g. for k = m = 5 the z-jump (1,3,2) -> (1,3,1)
    // keeps the max at 3 but shrinks the triple.
    fn is_fundamental(&self, t: &MarkovTriple) -> bool {
        let size = |t: &MarkovTriple| (t.max_coordinate().clone(), &t.a + &t.b + &t.c);
        let base = size(t);
        [Coord::X, Coord::Y, Coord::Z].into_iter().all(|coord| {
            self.mutate(t, coord)
                .map(|next| size(&next) >= base)
                .unwrap_or(true)
        })
    }

    /// Weighted projective plane weights `(a^2, b^2, k c^2)` of a
    /// solution triple, verified well-formed.
    pub fn triple_to_weights(&self, t: &MarkovTriple) -> Result<[BigInt; 3]> {
        if !self.is_solution(t) {
            return Err(Error::NotASolution {
                a: t.a.clone(),
                b: t.b.clone(),
                c: t.c.clone(),
                k: self.k.clone(),
                m: self.m.clone(),
            });
        }
        let w = [
            &t.a * &t.a,
            &t.b * &t.b,
            &self.k * &t.c * &t.c,
        ];
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let g = w[i].gcd(&w[j]);
            if !g.is_one() {
                return Err(Error::IllFormedWeights {
                    wi: w[i].clone(),
                    wj: w[j].clone(),
                    g,
                });
            }
        }
        Ok(w)
    }
}

/// Exhaustive-scan ceiling used to seed [`MarkovEquation::enumerate`];
/// for both supported families the unique fundamental solution has
/// coordinates at most 2, so any value here beyond that is slack.
pub const DEFAULT_FUNDAMENTAL_BOUND: u32 = 64;
