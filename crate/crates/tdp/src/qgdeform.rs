//! Q-Gorenstein deformation combinatorics on abstract surface records.
//!
//! A [`SurfaceRecord`] tracks exactly the data a partial smoothing
//! determines: Picard rank, `K^2`, and the singularity multiset. A
//! T-point `1/(d n^2)(1, d n a - 1)` deforms along a partition
//! `d = d_1 + ... + d_l` to
//!
//! - case A: `A_{d_1 - 1}, ..., A_{d_l - 1}`, or
//! - case B: `1/(d_1 n^2)(1, d_1 n a - 1), A_{d_2 - 1}, ..., A_{d_l - 1}`,
//!
//! the Picard rank of the deformed surface growing by `l - 1` and `K^2`
//! unchanged. Pieces `A_0` are smooth and are dropped. The Noether
//! quantity `K^2 + rho + sum mu` is conserved exactly by every step.

use crate::arith;
use crate::markov::{MarkovEquation, MarkovTriple};
use crate::quotsing::{CyclicQuotSing, SingularityClass};
use crate::toric::{rational_json, wps_fan, Fan, ToricSurface};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Abstract surface datum closed under the deformation rule. After a
/// deformation the surface is generally no longer toric, so only
/// `(rho, K^2, singularities)` is tracked, plus a provenance string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceRecord {
    rho: u64,
    k2: BigRational,
    sings: Vec<SingularityClass>,
    origin: String,
}

impl SurfaceRecord {
    pub fn new(
        rho: u64,
        k2: BigRational,
        mut sings: Vec<SingularityClass>,
        origin: impl Into<String>,
    ) -> Self {
        sings.retain(|c| !c.is_smooth());
        sings.sort();
        Self {
            rho,
            k2,
            sings,
            origin: origin.into(),
        }
    }

    pub fn rho(&self) -> u64 {
        self.rho
    }

    pub fn k_squared(&self) -> &BigRational {
        &self.k2
    }

    pub fn singularities(&self) -> &[SingularityClass] {
        &self.sings
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    /// Number of non-Du Val points.
    pub fn s_count(&self) -> u64 {
        self.sings
            .iter()
            .filter(|c| !c.gorenstein_index().is_one())
            .count() as u64
    }

    pub fn all_t(&self) -> bool {
        self.sings.iter().all(|c| c.is_t())
    }

    /// `10 - K^2 - rho - sum mu`; `None` when some point is not T.
    pub fn noether_defect(&self) -> Option<BigRational> {
        let mut total = BigRational::from_integer(BigInt::from(10))
            - &self.k2
            - BigRational::from_integer(BigInt::from(self.rho));
        for c in &self.sings {
            total -= BigRational::from_integer(c.milnor_number().ok()?);
        }
        Some(total)
    }

    pub fn bound_report(&self) -> BoundReport {
        let margin = self.rho as i64 + 2 - self.s_count() as i64;
        BoundReport {
            s: self.s_count(),
            rho: self.rho,
            margin,
            class: BoundClass::from_margin(margin),
        }
    }

    /// Record JSON:
    /// `{"rho", "k2": {"num","den"}, "sings": [..], "s", "margin", "origin"}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rho": self.rho,
            "k2": rational_json(&self.k2),
            "sings": self.sings.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "s": self.s_count(),
            "margin": self.bound_report().margin,
            "origin": self.origin,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidInput(format!("record JSON: {msg}"));
        let rho = value
            .get("rho")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| bad("missing \"rho\""))?;
        let k2 = value.get("k2").ok_or_else(|| bad("missing \"k2\""))?;
        let int_field = |v: &serde_json::Value| -> Result<BigInt> {
            v.as_i64()
                .map(BigInt::from)
                .or_else(|| v.as_str().and_then(|s| s.parse().ok()))
                .ok_or_else(|| bad("bad integer"))
        };
        let num = int_field(k2.get("num").ok_or_else(|| bad("k2 needs \"num\""))?)?;
        let den = int_field(k2.get("den").ok_or_else(|| bad("k2 needs \"den\""))?)?;
        if den.is_zero() {
            return Err(bad("k2 denominator is zero"));
        }
        let sings = value
            .get("sings")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing \"sings\""))?;
        let mut classes = Vec::with_capacity(sings.len());
        for s in sings {
            let r = int_field(s.get("r").ok_or_else(|| bad("germ needs \"r\""))?)?;
            let a = int_field(s.get("a").ok_or_else(|| bad("germ needs \"a\""))?)?;
            classes.push(SingularityClass::cyclic(CyclicQuotSing::new(r, a)?));
        }
        let origin = value
            .get("origin")
            .and_then(|v| v.as_str())
            .unwrap_or("file")
            .to_string();
        Ok(Self::new(rho, BigRational::new(num, den), classes, origin))
    }
}

/// Theorem classes of the `s <= rho + 2` bound: extremal records are
/// toric, subextremal ones carry an effective torus action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundClass {
    Extremal,
    Subextremal,
    Interior,
    Violation,
}

impl BoundClass {
    fn from_margin(margin: i64) -> Self {
        match margin {
            0 => Self::Extremal,
            1 => Self::Subextremal,
            m if m > 1 => Self::Interior,
            _ => Self::Violation,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Extremal => "extremal",
            Self::Subextremal => "subextremal",
            Self::Interior => "interior",
            Self::Violation => "violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub s: u64,
    pub rho: u64,
    pub margin: i64,
    pub class: BoundClass,
}

/// One partial smoothing of one singular point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationStep {
    /// Index into the record's singularity list.
    pub point: usize,
    /// Partition `d_1, ..., d_l` of the target's `d`; `d_1` is the
    /// distinguished part in case B.
    pub partition: Vec<u64>,
    pub case: DeformCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformCase {
    A,
    B,
}

impl DeformCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::A => "A",
            Self::B => "B",
        }
    }
}

/// Record of a toric surface, tagged with the fan provenance.
pub fn record_from_fan(fan: &Fan, origin: impl Into<String>) -> SurfaceRecord {
    let surface = ToricSurface::new(fan.clone());
    record_from_surface(&surface, origin)
}

pub fn record_from_surface(surface: &ToricSurface, origin: impl Into<String>) -> SurfaceRecord {
    SurfaceRecord::new(
        surface.picard_rank(),
        surface.k_squared().clone(),
        surface.singularities().to_vec(),
        origin,
    )
}

/// Applies one deformation step. The target must be a cyclic T-point;
/// its first witness `(d, n, a)` drives the partition rule.
pub fn deform(record: &SurfaceRecord, step: &DeformationStep) -> Result<SurfaceRecord> {
    let target = record
        .sings
        .get(step.point)
        .ok_or_else(|| Error::InvalidDeformation(format!("no singular point {}", step.point)))?;
    let germ = target.germ().ok_or_else(|| {
        Error::InvalidDeformation(format!(
            "point {} is {target}, not a cyclic T-singularity",
            step.point
        ))
    })?;
    let witness = germ.t_data().ok_or_else(|| {
        Error::InvalidDeformation(format!("point {} is {target}, not of class T", step.point))
    })?;
    apply_partition(
        record,
        step.point,
        (witness.d(), witness.n(), witness.aprime()),
        &step.partition,
        step.case,
    )
}

/// Partition rule with an explicit witness `(d, n, a)`; shared by
/// [`deform`] and [`example7`], which supplies the witness of the
/// weighted-plane construction directly.
fn apply_partition(
    record: &SurfaceRecord,
    point: usize,
    (d, n, a): (&BigInt, &BigInt, &BigInt),
    partition: &[u64],
    case: DeformCase,
) -> Result<SurfaceRecord> {
    if partition.is_empty() || partition.iter().any(|&p| p == 0) {
        return Err(Error::InvalidDeformation(
            "partition parts must be positive".into(),
        ));
    }
    let sum: BigInt = partition.iter().map(|&p| BigInt::from(p)).sum();
    if &sum != d {
        return Err(Error::InvalidDeformation(format!(
            "partition sums to {sum}, target has d = {d}"
        )));
    }
    let l = partition.len() as u64;
    let mut sings: Vec<SingularityClass> = Vec::with_capacity(record.sings.len() + partition.len());
    for (i, c) in record.sings.iter().enumerate() {
        if i != point {
            sings.push(c.clone());
        }
    }
    let a_piece = |di: u64| -> SingularityClass {
        // A_{d_i - 1}; d_i = 1 is the smooth germ and is dropped later
        SingularityClass::cyclic(
            CyclicQuotSing::new(BigInt::from(di), BigInt::from(di) - 1u32)
                .expect("A-germ is valid"),
        )
    };
    match case {
        DeformCase::A => {
            for &di in partition {
                sings.push(a_piece(di));
            }
        }
        DeformCase::B => {
            let d1 = BigInt::from(partition[0]);
            let r = &d1 * n * n;
            let germ = CyclicQuotSing::new(r, &d1 * n * a - 1u32)?;
            sings.push(SingularityClass::cyclic(germ));
            for &di in &partition[1..] {
                sings.push(a_piece(di));
            }
        }
    }
    let origin = format!(
        "deform({}; point {point}; case {}[{}])",
        record.origin,
        case.as_str(),
        partition
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    let out = SurfaceRecord::new(record.rho + (l - 1), record.k2.clone(), sings, origin);
    debug_assert_eq!(out.noether_defect(), record.noether_defect());
    Ok(out)
}

/// Every deformation of every cyclic T-point: case A over all partitions
/// of `d`, case B over all `(d_1, partition of d - d_1)`. Steps whose
/// resulting records coincide as multisets (case B collapses onto case A
/// whenever `n = 1`) are merged; the order is deterministic.
pub fn enumerate_deformations(record: &SurfaceRecord) -> Result<Vec<SurfaceRecord>> {
    if !record.all_t() {
        return Err(Error::InvalidDeformation(
            "record has a point that is not of class T".into(),
        ));
    }
    let mut seen: Vec<SurfaceRecord> = Vec::new();
    let mut out: Vec<SurfaceRecord> = Vec::new();
    for (i, c) in record.sings.iter().enumerate() {
        let Some(germ) = c.germ() else {
            // Du Val D/E points are T but not of the cyclic partition
            // shape; fans never produce them
            continue;
        };
        let witness = germ.t_data().expect("all_t checked above");
        let d = witness.d().to_u64().ok_or_else(|| {
            Error::InvalidDeformation(format!("d = {} exceeds partition range", witness.d()))
        })?;
        let mut push = |rec: SurfaceRecord| {
            if !seen.iter().any(|r| {
                r.rho == rec.rho && r.k2 == rec.k2 && r.sings == rec.sings
            }) {
                seen.push(rec.clone());
                out.push(rec);
            }
        };
        for partition in arith::partitions(d) {
            let step = DeformationStep {
                point: i,
                partition,
                case: DeformCase::A,
            };
            push(deform(record, &step)?);
        }
        for d1 in (1..=d).rev() {
            for rest in arith::partitions(d - d1) {
                let mut partition = vec![d1];
                partition.extend(rest);
                let step = DeformationStep {
                    point: i,
                    partition,
                    case: DeformCase::B,
                };
                push(deform(record, &step)?);
            }
        }
    }
    Ok(out)
}

/// Outcome of the weighted-plane deformation pipeline of [`example7`].
#[derive(Debug, Clone)]
pub struct Example7Outcome {
    pub plane: SurfaceRecord,
    pub records: Vec<SurfaceRecord>,
    pub warnings: Vec<String>,
}

/// The four partial smoothings of the order-`5c^2` point of
/// `P(a^2, b^2, 5c^2)` for a solution of `a^2 + b^2 + 5c^2 = 5abc`.
///
/// The third point is `1/(5c^2)(1, 5c alpha - 1)` with `alpha = a b delta`
/// and `a^2 delta = 1 (mod 5c^2)`; it deforms in case B along the
/// partitions `(1,4), (2,3), (3,2), (4,1)` of `d = 5`, each raising the
/// Picard rank by one and keeping `K^2 = 5`.
pub fn example7(triple: &MarkovTriple) -> Result<Example7Outcome> {
    let eq = MarkovEquation::new(5, 5).expect("k = m is supported");
    let weights = eq.triple_to_weights(triple)?;
    let fan = wps_fan(&weights[0], &weights[1], &weights[2])?;
    let plane = record_from_fan(
        &fan,
        format!("wps({},{},{})", weights[0], weights[1], weights[2]),
    );

    let mut warnings = Vec::new();
    if triple.a.is_one() || triple.b.is_one() {
        warnings.push(format!(
            "triple {triple} has a coordinate 1: the matching vertex of the plane is smooth and fewer than three singular points remain"
        ));
    }
    if triple.c.is_one() {
        warnings.push(format!(
            "triple {triple} has c = 1: the third point is the Du Val point A_4, not a non-Du Val T-point"
        ));
    }

    // third point: 1/(5c^2)(1, 5 c alpha - 1)
    let r3 = BigInt::from(5) * &triple.c * &triple.c;
    let delta = arith::mod_inverse(&(&triple.a * &triple.a), &r3)
        .expect("a^2 is a unit mod 5c^2 for well-formed weights");
    let alpha = &triple.a * &triple.b * delta;
    let third = CyclicQuotSing::new(r3.clone(), BigInt::from(5) * &triple.c * &alpha - 1u32)?;
    let point = plane
        .sings
        .iter()
        .position(|c| c.germ().map(|g| g.r()) == Some(&r3))
        .ok_or_else(|| {
            Error::InvalidDeformation(format!("plane has no point of order {r3}"))
        })?;
    if plane.sings[point].germ() != Some(&third) {
        return Err(Error::InvalidDeformation(format!(
            "computed third point {} disagrees with the fan content {}",
            third, plane.sings[point]
        )));
    }

    // the witness of the construction: d = 5, n = c, weight alpha
    let witness_d = BigInt::from(5);
    let records = [[1u64, 4], [2, 3], [3, 2], [4, 1]]
        .iter()
        .map(|partition| {
            apply_partition(
                &plane,
                point,
                (&witness_d, &triple.c, &alpha),
                partition,
                DeformCase::B,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Example7Outcome {
        plane,
        records,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec_wps(w0: i64, w1: i64, w2: i64) -> SurfaceRecord {
        let fan = wps_fan(&w0.into(), &w1.into(), &w2.into()).unwrap();
        record_from_fan(&fan, format!("wps({w0},{w1},{w2})"))
    }

    fn germ(r: i64, a: i64) -> SingularityClass {
        SingularityClass::cyclic(CyclicQuotSing::new(r, a).unwrap())
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn record_from_fan_examples() {
        let p2 = record_from_fan(
            &Fan::from_ray_pairs(&[(1, 0), (0, 1), (-1, -1)]).unwrap(),
            "fan",
        );
        assert_eq!(p2.rho(), 1);
        assert_eq!(p2.k_squared(), &rat(9));
        assert!(p2.singularities().is_empty());
        assert_eq!(p2.s_count(), 0);

        let r = rec_wps(1, 4, 5);
        assert_eq!(r.rho(), 1);
        assert_eq!(r.k_squared(), &rat(5));
        assert_eq!(r.singularities(), &[germ(4, 1), germ(5, 4)]);
        assert_eq!(r.s_count(), 1);

        let r = rec_wps(1, 9, 20);
        assert_eq!(r.singularities(), &[germ(9, 2), germ(20, 9)]);
        assert_eq!(r.s_count(), 2);
    }

    #[test]
    fn deform_examples() {
        let base = rec_wps(1, 9, 20);
        let at = |r: i64| {
            base.singularities()
                .iter()
                .position(|c| c.germ().map(|g| g.r().to_i64()) == Some(Some(r)))
                .unwrap()
        };

        // (20,9) = (d=5, n=2, a=1), partition (4,1), case B
        let out = deform(
            &base,
            &DeformationStep {
                point: at(20),
                partition: vec![4, 1],
                case: DeformCase::B,
            },
        )
        .unwrap();
        assert_eq!(out.singularities(), &[germ(9, 2), germ(16, 7)]);
        assert_eq!(out.rho(), 2);
        assert_eq!(out.k_squared(), &rat(5));
        assert_eq!(out.noether_defect(), Some(BigRational::zero()));

        // partition (5), case A: the point collapses to A_4
        let out = deform(
            &base,
            &DeformationStep {
                point: at(20),
                partition: vec![5],
                case: DeformCase::A,
            },
        )
        .unwrap();
        assert_eq!(out.singularities(), &[germ(5, 4), germ(9, 2)]);
        assert_eq!(out.rho(), 1);

        // partition (1,4), case B: 1/4(1,1) + A_3
        let out = deform(
            &base,
            &DeformationStep {
                point: at(20),
                partition: vec![1, 4],
                case: DeformCase::B,
            },
        )
        .unwrap();
        assert_eq!(out.singularities(), &[germ(4, 1), germ(4, 3), germ(9, 2)]);
        assert_eq!(out.rho(), 2);
    }

    #[test]
    fn deform_error_paths() {
        let base = rec_wps(1, 9, 20);
        assert!(deform(
            &base,
            &DeformationStep {
                point: 9,
                partition: vec![5],
                case: DeformCase::A
            }
        )
        .is_err());
        // partition sum mismatch
        assert!(deform(
            &base,
            &DeformationStep {
                point: 1,
                partition: vec![4, 2],
                case: DeformCase::B
            }
        )
        .is_err());
        // non-T target
        let bad = SurfaceRecord::new(1, rat(5), vec![germ(5, 1)], "synthetic");
        assert!(deform(
            &bad,
            &DeformationStep {
                point: 0,
                partition: vec![5],
                case: DeformCase::A
            }
        )
        .is_err());
    }

    #[test]
    fn case_b_full_partition_is_identity() {
        let base = rec_wps(1, 9, 20);
        for (i, c) in base.singularities().iter().enumerate() {
            let d = c.germ().unwrap().t_data().unwrap().d().to_u64().unwrap();
            let out = deform(
                &base,
                &DeformationStep {
                    point: i,
                    partition: vec![d],
                    case: DeformCase::B,
                },
            )
            .unwrap();
            assert_eq!(out.singularities(), base.singularities());
            assert_eq!(out.rho(), base.rho());
        }
    }

    #[test]
    fn enumerate_deformations_examples() {
        // a single A_1: d = 2, n = 1; case B duplicates case A
        let a1 = SurfaceRecord::new(2, rat(7), vec![germ(2, 1)], "synthetic");
        let outs = enumerate_deformations(&a1).unwrap();
        assert_eq!(outs.len(), 2);

        // P(1,4,5), point (4,1): d = 1 forces the trivial partition;
        // case A smooths the point, case B is the identity
        let base = rec_wps(1, 4, 5);
        let only_41 = SurfaceRecord::new(
            base.rho(),
            base.k_squared().clone(),
            vec![germ(4, 1)],
            "synthetic",
        );
        let outs = enumerate_deformations(&only_41).unwrap();
        assert_eq!(outs.len(), 2);
        assert!(outs.iter().any(|r| r.singularities().is_empty()));
        assert!(outs.iter().any(|r| r.singularities() == only_41.singularities()));

        // P(1,9,20): the (9,2) point has d = 1 (2 outcomes, one the
        // identity); the (20,9) point has d = 5: 7 case-A partitions and
        // 12 case-B steps (d_1, partition of 5 - d_1), all distinct
        let base = rec_wps(1, 9, 20);
        let outs = enumerate_deformations(&base).unwrap();
        let expected = 2 + 7 + 12 - 1; // identity from (9,2) equals identity from (20,9)
        assert_eq!(outs.len(), expected);
        for r in &outs {
            assert_eq!(r.noether_defect(), Some(BigRational::zero()));
            assert_eq!(r.k_squared(), &rat(5));
        }
    }

    #[test]
    fn example7_pipeline() {
        let t = MarkovTriple::new(29, 3, 2).unwrap();
        let out = example7(&t).unwrap();
        assert!(out.warnings.is_empty());
        assert_eq!(out.plane.s_count(), 3);
        assert_eq!(out.records.len(), 4);
        for r in &out.records {
            assert_eq!(r.k_squared(), &rat(5));
            assert_eq!(r.rho(), 2);
            assert_eq!(r.s_count(), 3);
            let report = r.bound_report();
            assert_eq!(report.margin, 1);
            assert_eq!(report.class, BoundClass::Subextremal);
        }

        let t = MarkovTriple::new(1, 3, 2).unwrap();
        let out = example7(&t).unwrap();
        assert_eq!(out.warnings.len(), 1);
        for r in &out.records {
            assert_eq!(r.rho(), 2);
            assert_eq!(r.s_count(), 2);
        }

        let t = MarkovTriple::new(1, 2, 1).unwrap();
        let out = example7(&t).unwrap();
        assert_eq!(out.warnings.len(), 2);
        for r in &out.records {
            assert_eq!(r.s_count(), 1);
        }
        assert!(example7(&MarkovTriple::new(1, 1, 1).unwrap()).is_err());
    }

    #[test]
    fn bound_report_examples() {
        let r = rec_wps(1, 4, 5);
        let rep = r.bound_report();
        assert_eq!((rep.s, rep.rho, rep.margin), (1, 1, 2));
        assert_eq!(rep.class, BoundClass::Interior);

        let p2 = record_from_fan(
            &Fan::from_ray_pairs(&[(1, 0), (0, 1), (-1, -1)]).unwrap(),
            "fan",
        );
        let rep = p2.bound_report();
        assert_eq!((rep.s, rep.rho, rep.margin), (0, 1, 3));
        assert_eq!(rep.class, BoundClass::Interior);
    }

    #[test]
    fn record_json_round_trip() {
        let r = rec_wps(1, 9, 20);
        let j = r.to_json();
        assert_eq!(j["s"], 2);
        let back = SurfaceRecord::from_json(&j).unwrap();
        assert_eq!(back, r);
    }
}
