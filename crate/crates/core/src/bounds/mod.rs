//! A-priori bounds on the off-diagonal decay of matrix functions.
//!
//! Every family produces a [`DecayBound`]: a function of a distance
//! (band `|i - j|` or graph distance) together with the constants that
//! define it.

mod achieser;
mod asymptotics;
mod decay;
mod demko;
mod ellipse;
mod fd;
mod hasson;
mod heat;
mod resolvent;

pub use achieser::{achieser_bound, achieser_decay, achieser_series, achieser_terms};
pub use asymptotics::{gap_asymptotics, temperature_asymptotics, GapAsymptotics, TemperatureAsymptotics};
pub use decay::{
    envelope, prescribe_bandwidth, BoundCheck, BoundReport, BoundFamily, DecayBound, Metric, Shape,
};
pub use demko::{demko_constants, DemkoConstants};
pub use ellipse::{chi_bar_fd, ellipse_max, ellipse_max_fd, EllipseParam, FermiDirac};
pub use fd::{
    auto_chi, bernstein_error, chi_grid, bernstein_fd_bound, beta_from_gap, fd_envelope, projector_bound,
    ChiChoice, ProjectorBound, DEFAULT_TARGET_DISTANCE,
};
pub use hasson::{chui_hasson_auto, chui_hasson_bound, chui_hasson_xi_bar, hasson_bound};
pub use heat::heat_bound;
pub use resolvent::{default_circle, resolvent_contour_bound, Circle};
