//! Explicit matrices with prescribed behaviour, each returned with the exact
//! evidence that it has that behaviour on the truncation.

mod decorated;
mod positivity;
mod prop5;
mod remark2;
mod theorem3;

pub use decorated::{decorated_path_build, DecoratedPath, PendantWeights};
pub use positivity::{
    positivity_check, positivity_construct_m, Certificate, CertificateCheck, CertificateMode, ConstructedCertificate, PositivityVerdict,
    VertexRatios,
};
pub use prop5::{prop5_build, prop5_build_with, PendantBlock, Prop5Build};
pub use remark2::{degenerate_path, remark2_build, Remark2Build};
pub use theorem3::{theorem3_build, LedgerRow, NormSchedule, Theorem3Build};
