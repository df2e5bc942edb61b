//! The bundled example programs.

use crate::parse::{parse, ParseError, SourceUnit};

/// A bundled example: a name and its source text.
#[derive(Clone, Copy, Debug)]
pub struct Example {
    pub name: &'static str,
    pub source: &'static str,
    /// Whether the main choreography is expected to terminate.
    pub terminates: bool,
}

macro_rules! example {
    ($name:literal, $terminates:expr) => {
        Example {
            name: $name,
            source: include_str!(concat!("../corpus/", $name, ".chor")),
            terminates: $terminates,
        }
    };
}

/// All bundled examples, terminating ones first.
pub const EXAMPLES: &[Example] = &[
    example!("bookseller", true),
    example!("bookseller_service", true),
    example!("bookseller_service_applied", true),
    example!("two_buyer", true),
    example!("delegation", true),
    example!("delegation_applied", true),
    example!("poly_send", true),
    example!("poly_send_applied", true),
    example!("case_merge", true),
    example!("diverge", false),
];

pub fn example(name: &str) -> Option<&'static Example> {
    EXAMPLES.iter().find(|e| e.name == name)
}

/// The terminating examples, parsed.
pub fn examples_corpus() -> Result<Vec<(&'static str, SourceUnit)>, ParseError> {
    EXAMPLES
        .iter()
        .filter(|e| e.terminates)
        .map(|e| Ok((e.name, parse(e.source)?)))
        .collect()
}
