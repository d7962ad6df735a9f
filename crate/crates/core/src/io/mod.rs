//! Text formats, instance generators and the differential fuzz harness.

pub mod fuzz;
pub mod gen;
pub mod instance;
pub mod witness;

pub use instance::{parse_instance, parse_instance_with, serialize_instance, ParseError};
pub use witness::{parse_witness, serialize_witness, WitnessParseError};
