//! Extended quotients `T//W` of a complex torus by a finite Weyl group, and
//! the Kazhdan-Lusztig parameter bookkeeping attached to their points.
//!
//! The crate is layered bottom-up:
//!
//! * [`abgroup`]: exact integer linear algebra (Smith normal form, kernels,
//!   cokernels, finitely generated abelian groups).
//! * [`torus`]: tori, symbolic torus points and fixed subtori `T^w`.
//! * [`weyl`]: finite matrix groups, conjugacy classes, centralizers and
//!   isotropy groups.
//! * [`extquot`]: the stratification of `T//W` by conjugacy classes, component
//!   counts, second-kind labels and the base change endomorphism.
//! * [`langlands`]: multisegments, Reeder parameters, KL triples, the maps
//!   `i_s` and `pi_s`, fiber counting and base change for `GL(n)`, plus the
//!   tabulated `G2` scenario.
//! * [`scenario`]: root-datum presets.

pub mod abgroup;
pub mod extquot;
pub mod langlands;
pub mod scenario;
pub mod torus;
pub mod weyl;

pub use abgroup::{cokernel, kernel_basis, smith_normal_form, FgAbelianGroup, IntegerMatrix, SnfDecomposition};
pub use extquot::{ExtQuotStratum, ExtendedQuotient, SecondKindLabel};
pub use langlands::{KLTriple, ReederParameter, RhoLabel, Segment, SpringerLabelA};
pub use scenario::{Scenario, ScenarioConfig};
pub use torus::{Coordinate, SubtorusDescriptor, Torus, TorusPoint, ValueGroup};
pub use weyl::{ConjugacyClassTable, IsotropyDecomposition, Subgroup, WeylElement, WeylGroup};
