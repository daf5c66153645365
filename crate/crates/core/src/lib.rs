//! Secure degrees of freedom of the two-transmitter MIMO multiple-access
//! wiretap channel with passive eavesdroppers.
//!
//! * [`regions`]: exact sum SDoF, converse bounds, and jamming plans.
//! * [`precoders`]: aligned, nullspace and random jamming plus zero-forcing.
//! * [`rates`]: Gaussian rates, leakage saturation, and slope estimates.
//! * [`binning`]: a small random-binning wiretap code with exact equivocation.
//! * [`matlin`]: the complex linear algebra underneath.

pub mod binning;
pub mod matlin;
pub mod model;
pub mod precoders;
pub mod rates;
pub mod regions;
pub mod rng;

pub use binning::{BinningError, EraseChannel, TrendEntry, TrendParams, WiretapCode};
pub use matlin::{CMatrix, MatError, Subspace};
pub use model::{AntennaConfig, ChannelRealization, EveChannel, EveDistribution, ModelError, PowerPolicy, Validity};
pub use precoders::{GeometryReport, PrecoderError, PrecoderSet};
pub use rates::{CurvePoint, JammingMode, RateCurve, RateError, SweepSettings};
pub use regions::{CaseId, JamMethod, JamPart, JammingPlan, Rational, Region, RegionError};
