//! Transcendence-type experiments: deficiency scans, point tests, the
//! specialisation floor, the Borel–Cantelli series and fullness surveys.

pub mod floor;
pub mod scan;
pub mod series;
pub mod survey;

pub use floor::{induction_floor_check, FloorCheck};
pub use scan::{sa_deficiency_scan, sa_point_test, PointTest, SaScanResult, ScanCell, ScanOptions};
pub use series::{borel_cantelli_tail, SeriesReport, Verdict};
pub use survey::{fullness_survey, SurveyReport};
