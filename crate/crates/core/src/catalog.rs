//! Bundled quivers.

use crate::matrix::ExchangeMatrix;

macro_rules! entry {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../catalog/", $name, ".json")))
    };
}

const ENTRIES: &[(&str, &str)] = &[
    entry!("a2"),
    entry!("markov"),
    entry!("j"),
    entry!("x6"),
    entry!("x6_q0"),
    entry!("x6_q1"),
    entry!("x6_q2"),
    entry!("x6_q3"),
    entry!("x6_q4"),
    entry!("x7"),
    entry!("g2"),
    entry!("e6_affine"),
    entry!("e6_double_arrow"),
];

/// Names of all bundled quivers.
pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|(n, _)| *n).collect()
}

/// Raw JSON text of a bundled quiver.
pub fn source(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn get(name: &str) -> Option<ExchangeMatrix> {
    source(name).map(|s| ExchangeMatrix::from_json_str(s).expect("bundled quiver is valid"))
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_entries_parse() {
        for name in super::names() {
            assert!(super::get(name).is_some(), "{name}");
        }
        assert!(super::get("nope").is_none());
    }
}
