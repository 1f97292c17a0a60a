//! Conewise-linear functions on complete fans, and exact minimization of
//! ratios of two of them.

use std::sync::Arc;

use num::Signed;

use crate::error::{Error, Result};
use crate::geometry::fan::Fan;
use crate::geometry::vector::RatVector;
use crate::rational::Rat;

/// A 1-homogeneous function that is linear on every maximal cone of a
/// complete fan, stored as one linear functional per cone.
#[derive(Debug, Clone)]
pub struct ConewiseLinear {
    fan: Arc<Fan>,
    data: Vec<RatVector>,
}

impl ConewiseLinear {
    /// Validates shape and continuity: whenever a ray of the fan lies in a
    /// maximal cone (as a generator or on a face), the cone's linear datum
    /// must give the same value as every other cone containing that ray.
    pub fn new(fan: Arc<Fan>, data: Vec<RatVector>) -> Result<Self> {
        if data.len() != fan.maximal_cones().len() {
            return Err(Error::Invalid(format!(
                "{} linear data for {} maximal cones",
                data.len(),
                fan.maximal_cones().len()
            )));
        }
        for d in &data {
            if d.dim() != fan.dim() {
                return Err(Error::Dimension { expected: fan.dim(), got: d.dim() });
            }
        }
        for (i, ray) in fan.rays().iter().enumerate() {
            let mut value: Option<Rat> = None;
            for (c, datum) in data.iter().enumerate() {
                if !fan.cone_contains(c, ray) {
                    continue;
                }
                let v = datum.dot(ray);
                match &value {
                    None => value = Some(v),
                    Some(prev) if *prev != v => {
                        return Err(Error::DiscontinuousData(format!(
                            "ray {ray} (index {i}) takes values {prev} and {v} on adjacent cones"
                        )));
                    }
                    _ => {}
                }
            }
        }
        Ok(ConewiseLinear { fan, data })
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn data(&self) -> &[RatVector] {
        &self.data
    }

    /// Value at `w`: locate a containing cone and apply its linear datum.
    /// Continuity makes the choice of cone immaterial on walls.
    pub fn eval(&self, w: &RatVector) -> Result<Rat> {
        let cone = self.fan.locate(w)?;
        Ok(self.data[cone].dot(w))
    }
}

/// Exact minimum of `num/den` over nonzero vectors, with a primitive witness
/// ray attaining it.
///
/// Both functions must be linear on every maximal cone of `refinement`, and
/// `den` must be positive away from the origin. On each cone a ratio of two
/// linear functions with positive denominator is quasilinear (its sublevel
/// sets cut the cone in convex pieces: num - t*den is linear), so its
/// minimum over the cone is attained on an extreme ray; completeness of the
/// refinement makes the ray minimum global.
pub fn minimize_ratio(
    num: &ConewiseLinear,
    den: &ConewiseLinear,
    refinement: &Fan,
) -> Result<(Rat, RatVector)> {
    let mut best: Option<(Rat, RatVector)> = None;
    for ray in refinement.rays() {
        let d = den.eval(ray)?;
        if !d.is_positive() {
            return Err(Error::NonpositiveDenominator(format!(
                "denominator is {d} at ray {ray}"
            )));
        }
        let value = num.eval(ray)? / d;
        match &best {
            Some((b, _)) if *b <= value => {}
            _ => best = Some((value, ray.clone())),
        }
    }
    best.ok_or_else(|| Error::InvalidFan("refinement has no rays".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fan::{common_refinement, normal_fan};
    use crate::geometry::polytope::VPolytope;
    use crate::rational::{rat, rat_i};

    fn projective_plane_fan() -> Arc<Fan> {
        Arc::new(
            Fan::new(
                2,
                vec![
                    RatVector::from_ints(&[1, 0]),
                    RatVector::from_ints(&[0, 1]),
                    RatVector::from_ints(&[-1, -1]),
                ],
                vec![vec![0, 1], vec![1, 2], vec![2, 0]],
            )
            .unwrap(),
        )
    }

    /// The function with value 1 at every ray of the fan of the projective
    /// plane (the log discrepancy in disguise).
    fn ray_sum_clf(fan: &Arc<Fan>) -> ConewiseLinear {
        ConewiseLinear::new(
            fan.clone(),
            vec![
                RatVector::from_ints(&[1, 1]),
                RatVector::from_ints(&[-2, 1]),
                RatVector::from_ints(&[1, -2]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn continuity_is_enforced() {
        let fan = projective_plane_fan();
        assert!(ConewiseLinear::new(
            fan.clone(),
            vec![
                RatVector::from_ints(&[1, 1]),
                RatVector::from_ints(&[-2, 1]),
                RatVector::from_ints(&[0, 0]),
            ],
        )
        .is_err());
        assert!(ConewiseLinear::new(fan, vec![RatVector::from_ints(&[1, 1])]).is_err());
    }

    #[test]
    fn evaluation_crosses_walls_consistently() {
        let fan = projective_plane_fan();
        let f = ray_sum_clf(&fan);
        assert_eq!(f.eval(&RatVector::from_ints(&[2, 3])).unwrap(), rat_i(5));
        assert_eq!(f.eval(&RatVector::from_ints(&[-1, 0])).unwrap(), rat_i(2));
        assert_eq!(f.eval(&RatVector::from_ints(&[0, -1])).unwrap(), rat_i(2));
        assert_eq!(f.eval(&RatVector::from_ints(&[-2, -2])).unwrap(), rat_i(2));
        assert_eq!(f.eval(&RatVector::zero(2)).unwrap(), rat_i(0));
    }

    #[test]
    fn ratio_of_equal_functions_minimizes_to_one() {
        let fan = projective_plane_fan();
        let f = ray_sum_clf(&fan);
        let (value, witness) = minimize_ratio(&f, &f, &fan).unwrap();
        assert_eq!(value, rat_i(1));
        assert_eq!(witness, RatVector::from_ints(&[1, 0]));
    }

    #[test]
    fn anticanonical_ratio_on_the_projective_plane() {
        let fan = projective_plane_fan();
        let num = ray_sum_clf(&fan);
        // Support-type function of the anticanonical triangle on its normal
        // fan: datum on the cone of vertex v is -v.
        let triangle = VPolytope::new(
            2,
            vec![
                RatVector::from_ints(&[-1, -1]),
                RatVector::from_ints(&[-1, 2]),
                RatVector::from_ints(&[2, -1]),
            ],
        )
        .unwrap();
        let nfan = Arc::new(normal_fan(&triangle).unwrap());
        let data: Vec<RatVector> = triangle.vertices.iter().map(RatVector::neg).collect();
        let den = ConewiseLinear::new(nfan.clone(), data).unwrap();
        let refinement = common_refinement(&fan, &nfan).unwrap();
        let (value, witness) = minimize_ratio(&num, &den, &refinement).unwrap();
        assert_eq!(value, rat_i(1));
        assert_eq!(num.eval(&witness).unwrap(), den.eval(&witness).unwrap());
        // Spot check the quasilinearity lemma at a few off-ray points.
        for w in [
            RatVector::from_ints(&[3, 1]),
            RatVector::from_ints(&[-5, 2]),
            RatVector::from_ints(&[1, -7]),
            RatVector::new(vec![rat(1, 3), rat(-9, 2)]),
        ] {
            let ratio = num.eval(&w).unwrap() / den.eval(&w).unwrap();
            assert!(ratio >= value);
        }
    }

    #[test]
    fn nonpositive_denominator_is_rejected() {
        let fan = projective_plane_fan();
        let num = ray_sum_clf(&fan);
        let den = ConewiseLinear::new(
            fan.clone(),
            vec![
                RatVector::from_ints(&[-1, -1]),
                RatVector::from_ints(&[2, -1]),
                RatVector::from_ints(&[-1, 2]),
            ],
        )
        .unwrap();
        assert!(matches!(
            minimize_ratio(&num, &den, &fan),
            Err(Error::NonpositiveDenominator(_))
        ));
    }
}
