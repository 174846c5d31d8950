//! Independent oracles shared by the integration suites.
//!
//! Nothing here goes through the continued-fraction or divisor-search
//! code paths it is used to check.

use std::collections::HashSet;

/// Minimal-resolution chain of the cone spanned by `v1, v2`
/// (`det > 0`, both primitive), read off the lattice geometry directly.
///
/// The boundary of the convex hull of the nonzero lattice points of the
/// cone consists, between the two primitive generators, of the
/// irreducible points of the cone semigroup. Those points, in angular
/// order `u_0 = v1, u_1, ..., u_k, u_{k+1} = v2`, satisfy
/// `u_{i-1} + u_{i+1} = b_i u_i` with `b_i >= 2`; the `[b_1, ..., b_k]`
/// are the negated self-intersections of the resolution chain.
pub fn boundary_resolution_chain(v1: (i64, i64), v2: (i64, i64)) -> Vec<u64> {
    let cross = |a: (i64, i64), b: (i64, i64)| a.0 * b.1 - a.1 * b.0;
    let det = cross(v1, v2);
    assert!(det > 0, "cone must be positively oriented");

    // lattice points of the triangle conv{0, v1, v2} minus the origin;
    // every irreducible point of the cone semigroup lies there
    let xs = [0, v1.0, v2.0];
    let ys = [0, v1.1, v2.1];
    let (x_lo, x_hi) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let (y_lo, y_hi) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    let edge = (v2.0 - v1.0, v2.1 - v1.1);
    let mut points: Vec<(i64, i64)> = Vec::new();
    for x in x_lo..=x_hi {
        for y in y_lo..=y_hi {
            let p = (x, y);
            if p == (0, 0) {
                continue;
            }
            let in_cone = cross(v1, p) >= 0 && cross(p, v2) >= 0;
            // origin side of the segment v1-v2 (the origin evaluates
            // to det > 0)
            let near_side = cross(edge, (p.0 - v1.0, p.1 - v1.1)) >= 0;
            if in_cone && near_side {
                points.push(p);
            }
        }
    }

    // irreducible = not a sum of two points of the region
    let set: HashSet<(i64, i64)> = points.iter().copied().collect();
    let mut reducible: HashSet<(i64, i64)> = HashSet::new();
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i..] {
            let s = (p.0 + q.0, p.1 + q.1);
            if set.contains(&s) {
                reducible.insert(s);
            }
        }
    }
    let mut hull: Vec<(i64, i64)> = points
        .into_iter()
        .filter(|p| !reducible.contains(p))
        .collect();
    hull.sort_by(|&a, &b| cross(b, a).cmp(&0));
    assert_eq!(*hull.first().unwrap(), v1);
    assert_eq!(*hull.last().unwrap(), v2);

    let mut chain = Vec::with_capacity(hull.len().saturating_sub(2));
    for i in 1..hull.len() - 1 {
        let (prev, cur, next) = (hull[i - 1], hull[i], hull[i + 1]);
        let sum = (prev.0 + next.0, prev.1 + next.1);
        let b = if cur.0 != 0 {
            assert_eq!(sum.0 % cur.0, 0);
            sum.0 / cur.0
        } else {
            sum.1 / cur.1
        };
        assert_eq!((b * cur.0, b * cur.1), sum, "not a chain relation at {cur:?}");
        assert!(b >= 2);
        chain.push(b as u64);
    }
    chain
}

/// Primitive vectors with coordinates bounded by `bound`.
#[allow(dead_code)] // each test binary uses its own slice of this module
pub fn primitive_vectors(bound: i64) -> Vec<(i64, i64)> {
    let gcd = |mut a: i64, mut b: i64| {
        a = a.abs();
        b = b.abs();
        while b != 0 {
            let t = b;
            b = a % b;
            a = t;
        }
        a
    };
    let mut out = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            if (x, y) != (0, 0) && gcd(x, y) == 1 {
                out.push((x, y));
            }
        }
    }
    out
}
