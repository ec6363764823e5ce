use crate::error::{reject, Error, Result};
use crate::geometry::ProxSetup;
use crate::subproblem::FeasibleSet;
use crate::tolerances;

/// An upper bound `R_Q^2` on `V(x, y)` over `Q x Q`. For the entropy prox
/// the second argument is clipped to the interior floor.
pub fn bregman_radius_sq(prox: &ProxSetup, set: &FeasibleSet) -> Result<f64> {
    if !set.is_bounded() {
        return reject("Bregman radius of an unbounded set");
    }
    match (prox, set) {
        (ProxSetup::Euclidean, _) => Ok(0.5 * set.diameter().powi(2)),
        (ProxSetup::WeightedEuclidean { weights }, FeasibleSet::Box { lower, upper }) => {
            Ok(0.5 * weights.iter().zip((upper - lower).iter()).map(|(w, d)| w * d * d).sum::<f64>())
        }
        (ProxSetup::WeightedEuclidean { weights }, FeasibleSet::Ball { radius, .. }) => {
            Ok(0.5 * weights.max() * (2.0 * radius).powi(2))
        }
        (ProxSetup::WeightedEuclidean { weights }, FeasibleSet::Simplex { dim, scale }) => {
            if *dim < 2 {
                return Ok(0.0);
            }
            let mut w: Vec<f64> = weights.iter().copied().collect();
            w.sort_by(|a, b| b.total_cmp(a));
            Ok(0.5 * scale * scale * (w[0] + w[1]))
        }
        (ProxSetup::Entropy, FeasibleSet::Simplex { dim, scale }) => {
            if *dim < 2 || *scale == 0.0 {
                return Ok(0.0);
            }
            Ok(scale * (scale / tolerances::ENTROPY_FLOOR).ln() + *dim as f64 * tolerances::ENTROPY_FLOOR)
        }
        _ => Err(Error::Unsupported("no Bregman radius for this prox and set".into())),
    }
}

/// `2 R_Q^2`.
pub fn frank_wolfe_deltatilde(r_q_sq: f64) -> Result<f64> {
    if !(r_q_sq.is_finite() && r_q_sq >= 0.0) {
        return reject(format!("R_Q^2 = {r_q_sq} must be finite and nonnegative"));
    }
    Ok(2.0 * r_q_sq)
}
