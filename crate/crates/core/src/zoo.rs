//! A few non-polyhedral cones and a closedness probe for sums of polars.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::rational::{self, serde_rational, Rational};
use crate::{PolyhedralCone, Vector};

/// `SecondOrder(n)` is `{(x, z) in R^(n-1) x R : |x| <= z}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZooCone {
    Polyhedral { cone: PolyhedralCone },
    SecondOrder { dim: usize },
    Ray { direction: Vector },
    Subspace { basis: Vec<Vector>, dim: usize },
}

impl ZooCone {
    pub fn second_order(dim: usize) -> Result<Self> {
        if dim < 3 {
            return Err(Error::Input(format!("second-order cone needs dimension >= 3, got {dim}")));
        }
        Ok(ZooCone::SecondOrder { dim })
    }

    pub fn dim(&self) -> usize {
        match self {
            ZooCone::Polyhedral { cone } => cone.dim(),
            ZooCone::SecondOrder { dim } | ZooCone::Subspace { dim, .. } => *dim,
            ZooCone::Ray { direction } => direction.dim(),
        }
    }

    pub fn contains(&self, p: &Vector) -> bool {
        match self {
            ZooCone::SecondOrder { dim } => {
                let z = &p[dim - 1];
                !z.is_negative() && z * z >= p.truncate(dim - 1).norm_squared()
            }
            _ => self.as_polyhedral().expect("polyhedral kind").contains(p),
        }
    }

    /// The cone as a polyhedral cone, unless it is second-order.
    pub fn as_polyhedral(&self) -> Option<PolyhedralCone> {
        match self {
            ZooCone::Polyhedral { cone } => Some(cone.clone()),
            ZooCone::SecondOrder { .. } => None,
            ZooCone::Ray { direction } => Some(PolyhedralCone::ray(direction)),
            ZooCone::Subspace { basis, dim } => Some(PolyhedralCone::from_generators(*dim, &[], basis).ok()?),
        }
    }
}

/// One approximation step `u + v` of the limit point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceStep {
    pub k: usize,
    pub u: Vector,
    pub v: Vector,
    #[serde(with = "serde_rational")]
    pub residual: Rational,
    #[serde(with = "serde_rational")]
    pub v_norm_squared: Rational,
}

/// Exact proof that `w ∉ K + cone(t)` for `K = −SOC`, `−t ∈ ∂SOC`:
/// `q(s) = alpha + beta s` is the membership margin of `w − s t`, and it is
/// negative for every `s >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonMembershipCertificate {
    pub t: Vector,
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClosednessReport {
    Closed {
        reason: String,
    },
    NotClosedEvidence {
        w: Vector,
        sequence: Vec<SequenceStep>,
        certificate: NonMembershipCertificate,
    },
}

/// Examines whether `z1° + z2°` is closed, and when it is not, produces a
/// sequence `u_k + v_k -> w` with `u_k ∈ z1°, v_k ∈ z2°` and a certificate
/// that `w` itself has no decomposition.
pub fn sum_closedness_probe(z1: &ZooCone, z2: &ZooCone, w: &Vector, k_max: usize) -> Result<ClosednessReport> {
    check_dim(z1.dim(), z2.dim())?;
    check_dim(z1.dim(), w.dim())?;
    match (z1.as_polyhedral(), z2.as_polyhedral()) {
        (Some(_), Some(_)) => Ok(ClosednessReport::Closed { reason: "sum of polyhedral cones".into() }),
        (None, None) => Ok(ClosednessReport::Closed { reason: "both polars equal the negative second-order cone".into() }),
        (None, Some(p)) => soc_plus_polyhedral(z1.dim(), &p, w, k_max),
        (Some(p), None) => soc_plus_polyhedral(z2.dim(), &p, w, k_max),
    }
}

fn soc_plus_polyhedral(n: usize, p: &PolyhedralCone, w: &Vector, k_max: usize) -> Result<ClosednessReport> {
    let pp = p.polar();
    if pp.is_zero() {
        return Ok(ClosednessReport::Closed { reason: "second polar is {0}".into() });
    }
    if pp.lineality().len() + 1 >= n {
        // The quotient by a hyperplane is one-dimensional, where every cone is closed.
        return Ok(ClosednessReport::Closed { reason: "second polar contains a hyperplane".into() });
    }
    if !pp.lineality().is_empty() || pp.rays().len() != 1 {
        return Err(Error::UnsupportedPair(format!(
            "second-order cone with a polyhedral cone whose polar is not a single ray ({} rays, {} lines)",
            pp.rays().len(),
            pp.lineality().len()
        )));
    }
    let t = pp.rays()[0].clone();
    let soc = ZooCone::SecondOrder { dim: n };
    // K = −SOC. K + cone(t) is closed unless −t lies on the boundary of K, i.e. t on ∂SOC.
    let tz = t[n - 1].clone();
    let tbar = t.truncate(n - 1);
    let on_boundary = tz.is_positive() && &tz * &tz == tbar.norm_squared();
    if !soc.contains(&t) {
        return Ok(ClosednessReport::Closed { reason: "the ray meets the negated polar cone only at 0".into() });
    }
    if !on_boundary {
        return Ok(ClosednessReport::Closed { reason: "the negated ray lies in the interior of the polar cone; the sum is the whole space".into() });
    }

    let wz = w[n - 1].clone();
    let wbar = w.truncate(n - 1);
    let alpha = &wz * &wz - wbar.norm_squared();
    let beta = Rational::from_integer(2.into()) * (wbar.dot(&tbar) - &wz * &tz);
    // w − s t ∈ K needs q(s) >= 0; alpha < 0, beta <= 0 rules that out for all s >= 0.
    if !(alpha.is_negative() && !beta.is_positive()) {
        return Err(Error::InvalidWitness(format!(
            "w = {w} admits no affine non-membership certificate (alpha = {}, beta = {})",
            rational::format(&alpha),
            rational::format(&beta)
        )));
    }
    let certificate = NonMembershipCertificate { t: t.clone(), alpha, beta };

    let residual_at = |s: &Rational, bits: u32| -> (Vector, Vector, Rational) {
        let v = t.scale(s);
        let ubar = &wbar - &tbar.scale(s);
        let h = rational::sqrt_upper(&ubar.norm_squared(), bits);
        let u = ubar.concat(&[-h]);
        let residual = (&(&u + &v) - w).norm_inf();
        (u, v, residual)
    };

    let mut sequence = Vec::with_capacity(k_max);
    let mut s = Rational::one();
    let mut target: Option<Rational> = None;
    for k in 1..=k_max {
        let mut bits = 32 + 2 * k as u32;
        loop {
            let (u, v, residual) = residual_at(&s, bits);
            if target.as_ref().is_none_or(|tg| residual <= *tg) {
                debug_assert!(ZooCone::SecondOrder { dim: n }.contains(&-&u));
                target = Some(&residual / Rational::from_integer(2.into()));
                sequence.push(SequenceStep { k, v_norm_squared: v.norm_squared(), u, v, residual });
                break;
            }
            s = &s * Rational::from_integer(2.into());
            bits += 2;
            if bits > 4096 {
                return Err(Error::InvalidWitness(format!("w = {w} is not approached by K + cone(t)")));
            }
        }
    }
    Ok(ClosednessReport::NotClosedEvidence { w: w.clone(), sequence, certificate })
}
