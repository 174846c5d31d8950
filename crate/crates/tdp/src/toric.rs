//! Complete toric surfaces from two-dimensional lattice fans.
//!
//! A [`Fan`] is a cyclically ordered list of at least three primitive
//! integer rays whose successive cones are strictly convex and cover the
//! plane. On top of it:
//!
//! - [`cone_singularity`] — the cyclic quotient germ of a single cone,
//!   normalized by a unimodular change of basis;
//! - [`Fan::singularity_content`] — the multiset of singular points;
//! - [`Fan::intersection_numbers`], [`Fan::k_squared`] — exact rational
//!   intersection theory of the boundary divisors;
//! - [`Fan::is_del_pezzo`] and the nef/big variants — strict convexity of
//!   the anticanonical support function;
//! - [`Fan::anticanonical_point_count`] — lattice points of the polygon
//!   `{m : <m, v_i> >= -n}`, i.e. `dim H^0(-nK)`;
//! - [`wps_fan`] — weighted projective planes `P(w0, w1, w2)`;
//! - [`Fan::canonical_rays`] — a complete invariant of the fan modulo
//!   orientation-preserving unimodular transforms and rotation.

use crate::arith;
use crate::quotsing::{CyclicQuotSing, SingularityClass};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// A point of the ray lattice. Ray generators are primitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector {
    pub x: BigInt,
    pub y: BigInt,
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for LatticeVector {
    fn from((x, y): (i64, i64)) -> Self {
        Self::new(x, y)
    }
}

impl LatticeVector {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
        }
    }

    /// `det(self, other) = x * other.y - y * other.x`.
    pub fn det(&self, other: &Self) -> BigInt {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn is_primitive(&self) -> bool {
        self.x.gcd(&self.y).is_one()
    }

    /// Angular half: upper half-plane including the positive x-axis
    /// sorts before the lower half including the negative x-axis.
    fn half(&self) -> u8 {
        if self.y.is_positive() || (self.y.is_zero() && self.x.is_positive()) {
            0
        } else {
            1
        }
    }

    /// Counterclockwise angular order starting at the positive x-axis.
    fn angle_cmp(&self, other: &Self) -> Ordering {
        match self.half().cmp(&other.half()) {
            Ordering::Equal => {
                let d = self.det(other);
                if d.is_positive() {
                    Ordering::Less
                } else if d.is_negative() {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            }
            o => o,
        }
    }
}

/// A complete two-dimensional fan: primitive rays in counterclockwise
/// order, successive determinants positive, full turn covered.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fan {
    rays: Vec<LatticeVector>,
}

impl Fan {
    /// Validates and sorts the given rays counterclockwise.
    pub fn from_rays(rays: Vec<LatticeVector>) -> Result<Self> {
        if rays.len() < 3 {
            return Err(Error::TooFewRays(rays.len()));
        }
        for v in &rays {
            if !v.is_primitive() {
                return Err(Error::NonPrimitiveRay(v.x.clone(), v.y.clone()));
            }
        }
        let mut rays = rays;
        rays.sort_by(|a, b| a.angle_cmp(b));
        for w in rays.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateRay(w[0].x.clone(), w[0].y.clone()));
            }
        }
        let n = rays.len();
        for i in 0..n {
            let v = &rays[i];
            let w = &rays[(i + 1) % n];
            let d = v.det(w);
            if d.is_zero() {
                return Err(Error::NonConvexCone(
                    v.x.clone(),
                    v.y.clone(),
                    w.x.clone(),
                    w.y.clone(),
                ));
            }
            if d.is_negative() {
                return Err(Error::NotComplete(v.x.clone(), v.y.clone()));
            }
        }
        Ok(Self { rays })
    }

    pub fn from_ray_pairs(rays: &[(i64, i64)]) -> Result<Self> {
        Self::from_rays(rays.iter().map(|&p| p.into()).collect())
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    fn ray_cyclic(&self, i: usize) -> &LatticeVector {
        &self.rays[i % self.rays.len()]
    }

    /// One singularity class per adjacent cone of determinant above 1,
    /// sorted canonically (multiset semantics).
    pub fn singularity_content(&self) -> Vec<SingularityClass> {
        let n = self.rays.len();
        let mut content = Vec::new();
        for i in 0..n {
            let germ = cone_singularity(self.ray_cyclic(i), self.ray_cyclic(i + 1))
                .expect("fan cones have positive determinant");
            if !germ.is_smooth() {
                content.push(SingularityClass::cyclic(germ));
            }
        }
        content.sort();
        content
    }

    /// Picard rank of the surface: `#rays - 2`. For complete simplicial
    /// toric surfaces the numerical Picard rank over the rationals equals
    /// the class-group rank, which is what every bound here uses.
    pub fn picard_rank(&self) -> u64 {
        self.rays.len() as u64 - 2
    }

    /// Exact intersection matrix of the boundary divisors:
    /// `D_i . D_{i+1} = 1/det(v_i, v_{i+1})`,
    /// `D_i^2 = -det(v_{i-1}, v_{i+1}) / (det(v_{i-1}, v_i) det(v_i, v_{i+1}))`,
    /// non-adjacent products vanish.
    pub fn intersection_numbers(&self) -> Vec<Vec<BigRational>> {
        let n = self.rays.len();
        let det = |i: usize, j: usize| self.ray_cyclic(i).det(self.ray_cyclic(j));
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let j = (i + 1) % n;
            let q = BigRational::new(BigInt::one(), det(i, i + 1));
            m[i][j] = q.clone();
            m[j][i] = q;
        }
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let skip = det(prev, i + 1);
            let denom = det(prev, i) * det(i, i + 1);
            m[i][i] = BigRational::new(-skip, denom);
        }
        m
    }

    /// `K^2 = (sum_i D_i)^2`, as an exact rational.
    pub fn k_squared(&self) -> BigRational {
        self.intersection_numbers()
            .into_iter()
            .flatten()
            .sum()
    }

    /// Anticanonical vertex of the cone `(v_i, v_{i+1})` at level `n`:
    /// the rational solution of `<m, v_i> = <m, v_{i+1}> = -n`.
    fn cone_vertex(&self, i: usize, level: &BigInt) -> (BigRational, BigRational) {
        let v = self.ray_cyclic(i);
        let w = self.ray_cyclic(i + 1);
        let d = v.det(w);
        let mx = BigRational::new(level * (&v.y - &w.y), d.clone());
        let my = BigRational::new(level * (&w.x - &v.x), d);
        (mx, my)
    }

    /// `-K` ample: per cone, the linear form at level 1 evaluates strictly
    /// above `-1` on every ray outside the cone.
    pub fn is_del_pezzo(&self) -> bool {
        self.anticanonical_positivity(true)
    }

    /// `-K` nef: same test with equality allowed.
    pub fn anticanonical_nef(&self) -> bool {
        self.anticanonical_positivity(false)
    }

    /// `-K` nef and big (big amounts to `K^2 > 0` once nef).
    pub fn anticanonical_nef_big(&self) -> bool {
        self.anticanonical_nef() && self.k_squared().is_positive()
    }

    fn anticanonical_positivity(&self, strict: bool) -> bool {
        let n = self.rays.len();
        let one = BigInt::one();
        let minus_one = BigRational::from_integer(BigInt::from(-1));
        for i in 0..n {
            let (mx, my) = self.cone_vertex(i, &one);
            for (j, v) in self.rays.iter().enumerate() {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                let val = &mx * BigRational::from_integer(v.x.clone())
                    + &my * BigRational::from_integer(v.y.clone());
                if val < minus_one || (strict && val == minus_one) {
                    return false;
                }
            }
        }
        true
    }

    /// Number of lattice points of `{m : <m, v_i> >= -n for all i}`,
    /// equal to `dim H^0(-nK)` on the surface.
    pub fn anticanonical_point_count(&self, n: u32) -> BigInt {
        let level = BigInt::from(n);
        let nrays = self.rays.len();
        // polygon vertices sit among the feasible pairwise intersections
        let mut xs: Vec<BigRational> = Vec::new();
        let mut ys: Vec<BigRational> = Vec::new();
        let neg_level = BigRational::from_integer(-level.clone());
        for i in 0..nrays {
            for j in (i + 1)..nrays {
                let v = &self.rays[i];
                let w = &self.rays[j];
                let d = v.det(w);
                if d.is_zero() {
                    continue;
                }
                let mx = BigRational::new(&level * (&w.y - &v.y), -&d);
                let my = BigRational::new(&level * (&v.x - &w.x), -&d);
                let feasible = self.rays.iter().all(|u| {
                    &mx * BigRational::from_integer(u.x.clone())
                        + &my * BigRational::from_integer(u.y.clone())
                        >= neg_level
                });
                if feasible {
                    xs.push(mx);
                    ys.push(my);
                }
            }
        }
        if xs.is_empty() {
            // the polygon degenerates to the origin
            return BigInt::one();
        }
        let x_lo = xs.iter().min().unwrap().ceil().to_integer();
        let x_hi = xs.iter().max().unwrap().floor().to_integer();
        let y_lo = ys.iter().min().unwrap().ceil().to_integer();
        let y_hi = ys.iter().max().unwrap().floor().to_integer();

        // machine-word fast path when rays and box are small
        if let Some(count) = self.count_points_i64(&level, &x_lo, &x_hi, &y_lo, &y_hi) {
            return BigInt::from(count);
        }

        let mut count = BigInt::zero();
        let mut x = x_lo;
        while x <= x_hi {
            let mut y = y_lo.clone();
            while y <= y_hi {
                let inside = self
                    .rays
                    .iter()
                    .all(|v| &x * &v.x + &y * &v.y >= -&level);
                if inside {
                    count += 1u32;
                }
                y += 1u32;
            }
            x += 1u32;
        }
        count
    }

    fn count_points_i64(
        &self,
        level: &BigInt,
        x_lo: &BigInt,
        x_hi: &BigInt,
        y_lo: &BigInt,
        y_hi: &BigInt,
    ) -> Option<u64> {
        const LIM: i64 = 1 << 30;
        let rays: Option<Vec<(i64, i64)>> = self
            .rays
            .iter()
            .map(|v| Some((v.x.to_i64()?, v.y.to_i64()?)))
            .collect();
        let rays = rays?;
        if rays.iter().any(|&(x, y)| x.abs() > LIM || y.abs() > LIM) {
            return None;
        }
        let n = level.to_i64()?;
        let (x_lo, x_hi, y_lo, y_hi) = (x_lo.to_i64()?, x_hi.to_i64()?, y_lo.to_i64()?, y_hi.to_i64()?);
        if x_lo.abs().max(x_hi.abs()).max(y_lo.abs()).max(y_hi.abs()) > LIM {
            return None;
        }
        let mut count = 0u64;
        for x in x_lo..=x_hi {
            for y in y_lo..=y_hi {
                if rays
                    .iter()
                    .all(|&(vx, vy)| (x as i128) * (vx as i128) + (y as i128) * (vy as i128) >= -(n as i128))
                {
                    count += 1;
                }
            }
        }
        Some(count)
    }

    /// `varsigma` of the toric pair with its full invariant boundary:
    /// `rho + 2 - #rays`. Zero for every complete fan.
    pub fn varsigma(&self) -> i64 {
        self.picard_rank() as i64 + 2 - self.rays.len() as i64
    }

    /// Number of non-Du Val (equivalently non-Gorenstein) points.
    pub fn s_count(&self) -> u64 {
        self.singularity_content()
            .iter()
            .filter(|c| !c.gorenstein_index().is_one())
            .count() as u64
    }

    /// Canonical ray list of the fan modulo orientation-preserving
    /// unimodular transforms and cyclic rotation.
    ///
    /// For each adjacent frame `(v_i, v_{i+1})` there is a unique
    /// transform of determinant 1 sending `v_i` to `(0, 1)` and
    /// `v_{i+1}` to `(-d, e)` with `0 <= e < d` (`d` the cone
    /// determinant); the canonical form is the lexicographically least
    /// transformed, rotated ray list over all frames.
    pub fn canonical_rays(&self) -> Vec<(BigInt, BigInt)> {
        let n = self.rays.len();
        let mut best: Option<Vec<(BigInt, BigInt)>> = None;
        for i in 0..n {
            let v = &self.rays[i];
            let w = self.ray_cyclic(i + 1);
            // a*x + b*y = 1 with (x, y) = v
            let e = v.x.extended_gcd(&v.y);
            let (u, t) = (e.x, e.y);
            // A0 = [[y, -x], [u, t]] sends v to (0, 1), det = 1
            let d = v.det(w);
            let e1 = &v.y * &w.x - &v.x * &w.y; // first image coordinate = -d
            debug_assert_eq!(e1, -&d);
            let e2 = &u * &w.x + &t * &w.y;
            let em = e2.mod_floor(&d);
            let k = (&e2 - &em) / &d; // shear count: e2 - k*d = em
            let row2_x = &u + &k * &v.y;
            let row2_y = &t - &k * &v.x;
            let image: Vec<(BigInt, BigInt)> = (0..n)
                .map(|j| {
                    let r = self.ray_cyclic(i + j);
                    (
                        &v.y * &r.x - &v.x * &r.y,
                        &row2_x * &r.x + &row2_y * &r.y,
                    )
                })
                .collect();
            debug_assert_eq!(image[0], (BigInt::zero(), BigInt::one()));
            if best.as_ref().map_or(true, |b| image < *b) {
                best = Some(image);
            }
        }
        best.expect("fan has at least three rays")
    }

    /// Applies an integer matrix `[[a, b], [c, d]]` of determinant ±1 to
    /// every ray and revalidates.
    pub fn transformed(&self, a: i64, b: i64, c: i64, d: i64) -> Result<Fan> {
        if (a * d - b * c).abs() != 1 {
            return Err(Error::InvalidInput(format!(
                "matrix [[{a}, {b}], [{c}, {d}]] is not unimodular"
            )));
        }
        let rays = self
            .rays
            .iter()
            .map(|v| LatticeVector::new(a * &v.x + b * &v.y, c * &v.x + d * &v.y))
            .collect();
        Fan::from_rays(rays)
    }

    /// Fan JSON: `{"rays": [[x, y], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rays": self
                .rays
                .iter()
                .map(|v| serde_json::json!([arith::int_json(&v.x), arith::int_json(&v.y)]))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Fan> {
        let rays = value
            .get("rays")
            .and_then(|r| r.as_array())
            .ok_or_else(|| Error::InvalidInput("fan JSON needs a \"rays\" array".into()))?;
        let mut out = Vec::with_capacity(rays.len());
        for ray in rays {
            let pair = ray
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::InvalidInput("each ray must be a pair [x, y]".into()))?;
            let coord = |v: &serde_json::Value| -> Result<BigInt> {
                v.as_i64()
                    .map(BigInt::from)
                    .or_else(|| v.as_str().and_then(|s| s.parse().ok()))
                    .ok_or_else(|| Error::InvalidInput(format!("bad ray coordinate {v}")))
            };
            out.push(LatticeVector {
                x: coord(&pair[0])?,
                y: coord(&pair[1])?,
            });
        }
        Fan::from_rays(out)
    }
}

/// Cyclic quotient germ of the cone spanned by `(v1, v2)`,
/// `det(v1, v2) > 0`, both primitive.
///
/// A unimodular change of basis writes `v2 = a v1 + d w` with
/// `det(v1, w) = 1` and `d = det(v1, v2)`; the germ is
/// `1/d(1, -a mod d)` in canonical form, independent of the choices.
pub fn cone_singularity(v1: &LatticeVector, v2: &LatticeVector) -> Result<CyclicQuotSing> {
    if !v1.is_primitive() {
        return Err(Error::NonPrimitiveRay(v1.x.clone(), v1.y.clone()));
    }
    if !v2.is_primitive() {
        return Err(Error::NonPrimitiveRay(v2.x.clone(), v2.y.clone()));
    }
    let d = v1.det(v2);
    if !d.is_positive() {
        return Err(Error::NonPositiveDeterminant(d));
    }
    if d.is_one() {
        return Ok(CyclicQuotSing::smooth());
    }
    // s*x + t*y = 1; w = (-t, s) has det(v1, w) = 1
    let e = v1.x.extended_gcd(&v1.y);
    let (s, t) = (e.x, e.y);
    let a = &v2.x * &s + &v2.y * &t; // = det(v2, w)
    CyclicQuotSing::new(d, -a)
}

/// Fan of the weighted projective plane `P(w0, w1, w2)`.
///
/// Weights are reduced by their common factor and must then be pairwise
/// coprime (well-formed). The rays `v0, v1, v2` are primitive, satisfy
/// `w0 v0 + w1 v1 + w2 v2 = 0`, and span the lattice, so the cone
/// opposite `v_i` carries the germ `1/w_i(w_j, w_k)`.
pub fn wps_fan(w0: &BigInt, w1: &BigInt, w2: &BigInt) -> Result<Fan> {
    for w in [w0, w1, w2] {
        if !w.is_positive() {
            return Err(Error::NonPositiveWeight(w.clone()));
        }
    }
    let g = w0.gcd(w1).gcd(w2);
    let (w0, w1, w2) = (w0 / &g, w1 / &g, w2 / &g);
    for (a, b) in [(&w0, &w1), (&w0, &w2), (&w1, &w2)] {
        let g = a.gcd(b);
        if !g.is_one() {
            return Err(Error::IllFormedWeights {
                wi: (*a).clone(),
                wj: (*b).clone(),
                g,
            });
        }
    }
    let s = match arith::mod_inverse(&w2, &w0) {
        Some(inv) => (-(&w1) * inv).mod_floor(&w0),
        None => unreachable!("weights are pairwise coprime"),
    };
    let v1 = LatticeVector::new(BigInt::one(), BigInt::zero());
    let v2 = LatticeVector::new(s.clone(), w0.clone());
    let v0x = -(&w1 + &w2 * &s) / &w0;
    debug_assert!(((&w1 + &w2 * &s) % &w0).is_zero());
    let v0 = LatticeVector::new(v0x, -&w2);
    Fan::from_rays(vec![v0, v1, v2])
}

/// A fan with its derived invariants computed once.
#[derive(Debug, Clone)]
pub struct ToricSurface {
    fan: Fan,
    content: Vec<SingularityClass>,
    rho: u64,
    k2: BigRational,
    del_pezzo: bool,
}

impl ToricSurface {
    pub fn new(fan: Fan) -> Self {
        let content = fan.singularity_content();
        let rho = fan.picard_rank();
        let k2 = fan.k_squared();
        let del_pezzo = fan.is_del_pezzo();
        Self {
            fan,
            content,
            rho,
            k2,
            del_pezzo,
        }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn singularities(&self) -> &[SingularityClass] {
        &self.content
    }

    pub fn picard_rank(&self) -> u64 {
        self.rho
    }

    pub fn k_squared(&self) -> &BigRational {
        &self.k2
    }

    pub fn is_del_pezzo(&self) -> bool {
        self.del_pezzo
    }

    pub fn s_count(&self) -> u64 {
        self.content
            .iter()
            .filter(|c| !c.gorenstein_index().is_one())
            .count() as u64
    }

    pub fn all_t(&self) -> bool {
        self.content.iter().all(|c| c.is_t())
    }

    /// `10 - K^2 - rho - sum mu`; `None` when some point is not of
    /// class T (no Milnor number).
    pub fn noether_defect(&self) -> Option<BigRational> {
        let mut total = BigRational::from_integer(BigInt::from(10))
            - &self.k2
            - BigRational::from_integer(BigInt::from(self.rho));
        for c in &self.content {
            total -= BigRational::from_integer(c.milnor_number().ok()?);
        }
        Some(total)
    }

    /// Surface report JSON; the schema is shared by the `fan` and `wps`
    /// command surfaces.
    pub fn report_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rays": self.fan.to_json()["rays"],
            "singularities": self.content.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "rho": self.rho,
            "k2": rational_json(&self.k2),
            "del_pezzo": self.del_pezzo,
            "s": self.s_count(),
            "noether_defect": match self.noether_defect() {
                Some(d) => rational_json(&d),
                None => serde_json::Value::Null,
            },
        })
    }
}

/// `{"num": .., "den": ..}` for an exact rational.
pub fn rational_json(q: &BigRational) -> serde_json::Value {
    serde_json::json!({
        "num": arith::int_json(q.numer()),
        "den": arith::int_json(q.denom()),
    })
}
