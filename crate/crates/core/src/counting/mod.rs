//! Rational points on images of analytic disks and zero-counting bounds.

pub mod auxiliary;
pub mod experiment;
pub mod jensen;
pub mod map;
pub mod nevanlinna;
pub mod points;

pub use auxiliary::{auxiliary_vanishing_section, AuxiliarySection, ComplianceRecord};
pub use experiment::{counting_bound, counting_experiment, counting_summary_csv, CountReport, CountingOptions};
pub use jensen::{jensen_zero_bound, JensenCertificate};
pub use map::{AnalyticFunction, AnalyticMap, MapKind, TailBound};
pub use nevanlinna::nevanlinna_characteristic;
pub use points::{enumerate_disk_rational_points, Membership, Policy, RationalPointRecord};
