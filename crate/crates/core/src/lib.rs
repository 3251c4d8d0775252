pub mod eigen;
pub mod fock;
pub mod metric;
pub mod model;
pub mod oscillator;
pub mod poschl_teller;
pub mod report;
pub mod tolerances;

pub use tolerances::Tolerances;
