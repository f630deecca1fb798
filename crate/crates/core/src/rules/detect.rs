//! Recovering orbit form from an expanded point set.

use crate::domain::{symmetry_group, DomainKind, OrbitInstance, Point};
use crate::error::{Error, Result};

use super::{QuadratureRule, RuleTerm};

const MATCH_TOLERANCE: f64 = 1e-9;

fn close(p: &Point, q: &Point) -> bool {
    (0..3).all(|d| (p[d] - q[d]).abs() <= MATCH_TOLERANCE)
}

/// Groups `points` into symmetry orbits and fits the orbital parameters of
/// each group. Terms appear in order of their first point.
pub fn detect_orbits(
    kind: DomainKind,
    phi: u32,
    points: &[Point],
    weights: &[f64],
) -> Result<QuadratureRule> {
    let group = symmetry_group(kind);
    let orbits = &kind.domain().orbits;
    let mut used = vec![false; points.len()];
    let mut terms = Vec::new();

    for i in 0..points.len() {
        if used[i] {
            continue;
        }
        let mut images: Vec<Point> = Vec::new();
        for g in &group {
            let q = g.apply(&points[i]);
            if !images.iter().any(|p| close(p, &q)) {
                images.push(q);
            }
        }
        let mut members = Vec::with_capacity(images.len());
        for img in &images {
            let j = (0..points.len())
                .find(|&j| !used[j] && !members.contains(&j) && close(&points[j], img))
                .ok_or(Error::Unsymmetric { point: i })?;
            let scale = weights[i].abs().max(1.0);
            if (weights[j] - weights[i]).abs() > MATCH_TOLERANCE * scale {
                return Err(Error::Unsymmetric { point: j });
            }
            members.push(j);
        }
        let (id, params) = orbits
            .iter()
            .find_map(|o| o.fit_params(&images, MATCH_TOLERANCE).map(|p| (o.id, p)))
            .ok_or(Error::Unsymmetric { point: i })?;
        let weight = members.iter().map(|&j| weights[j]).sum::<f64>() / members.len() as f64;
        for &j in &members {
            used[j] = true;
        }
        terms.push(RuleTerm::new(OrbitInstance::new(id, params), weight));
    }
    QuadratureRule::new(kind, phi, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::is_pi;

    #[test]
    fn recovers_orbit_form() {
        let terms = vec![
            RuleTerm::new(OrbitInstance::new(0, vec![]), 0.5),
            RuleTerm::new(OrbitInstance::new(2, vec![0.2, 0.3]), 0.25),
        ];
        let rule = QuadratureRule::new(DomainKind::Triangle, 2, terms).unwrap();
        let (pts, wts) = rule.expanded();
        let back = detect_orbits(DomainKind::Triangle, 2, &pts, &wts).unwrap();
        assert_eq!(back.decomposition(), rule.decomposition());
        let (p2, _) = back.expanded();
        for p in &pts {
            assert!(p2.iter().any(|q| close(p, q)));
        }
        assert_eq!(is_pi(&back), is_pi(&rule));
    }

    #[test]
    fn rejects_asymmetric_sets() {
        let pts = [[0.1, 0.2, 0.0]];
        assert!(detect_orbits(DomainKind::Quadrilateral, 1, &pts, &[4.0]).is_err());
    }
}
