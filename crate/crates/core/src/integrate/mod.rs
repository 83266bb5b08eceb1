//! Verification engines: adaptive quadrature in up to four dimensions and
//! seeded, chunked importance-sampling Monte Carlo.

mod bordered;
mod mc;
mod proposal;
mod quad;
mod report;

pub use bordered::BorderedCauchy;
pub use mc::{chunk_rng, mc_integrate, MCEstimate, McRng, SignedLn, CHUNK};
pub use proposal::{
    table_offset, BallRejection, BoxUniform, CauchyProduct, DiagonalLaw, GammaCone,
    InterlacingSequential, OffDiagonalLaw, ProductProposal, Proposal, ProposalKind,
};
pub use quad::{quad_1d, quad_adaptive, BoxRegion, IteratedRegion, QuadOptions, QuadResult, Region};
pub use report::{Engine, LhsEstimate, VerdictRule, VerificationReport, Verdict};
