//! Concrete (delta, L)-models.

mod composite;
mod frank_wolfe;
mod holder;
mod inexact;
mod minmin;
mod moreau;
mod prox_point;
mod saddle;
mod smooth;
mod superposition;

pub use composite::CompositeModel;
pub use frank_wolfe::{bregman_radius_sq, frank_wolfe_deltatilde};
pub use holder::{holder_effective_l, universal_iteration_bound, universal_iteration_bound_inf, HolderModel};
pub use inexact::InexactGradientModel;
pub use minmin::{JointObjective, MinMinModel};
pub use moreau::MoreauModel;
pub use prox_point::ProxPointModel;
pub use saddle::{SaddleModel, SaddleRegularizer};
pub use smooth::SmoothModel;
pub use superposition::SuperpositionModel;
