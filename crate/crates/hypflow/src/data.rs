//! Bundled presentations, automata, representations, and cone data.

use crate::automaton::Automaton;
use crate::error::Result;
use crate::words::Presentation;

pub const OCTAGON_GRP: &str = include_str!("../data/octagon.grp");
pub const Z4Z6_GRP: &str = include_str!("../data/z4z6.grp");
pub const OCTAGON_AUT: &str = include_str!("../data/octagon.aut");
pub const Z4Z6_AUT: &str = include_str!("../data/z4z6.aut");
pub const OCTAGON_MULTICONE: &str = include_str!("../data/octagon_multicone.json");

pub fn octagon_presentation() -> Presentation {
    Presentation::parse_file(OCTAGON_GRP).expect("bundled octagon presentation")
}

pub fn z4z6_presentation() -> Presentation {
    Presentation::parse_file(Z4Z6_GRP).expect("bundled z4z6 presentation")
}

pub fn octagon_automaton() -> Automaton {
    Automaton::parse_file(OCTAGON_AUT).expect("bundled octagon automaton")
}

pub fn z4z6_automaton() -> Automaton {
    Automaton::parse_file(Z4Z6_AUT).expect("bundled z4z6 automaton")
}

/// Bundled text matched by file name, used when a CLI argument is not an
/// existing path.
pub fn bundled_text(name: &str) -> Option<&'static str> {
    match name {
        "octagon.grp" => Some(OCTAGON_GRP),
        "z4z6.grp" => Some(Z4Z6_GRP),
        "octagon.aut" => Some(OCTAGON_AUT),
        "z4z6.aut" => Some(Z4Z6_AUT),
        "octagon_multicone.json" => Some(OCTAGON_MULTICONE),
        _ => None,
    }
}

/// Resolves a CLI asset argument: an existing path wins, then bundled data
/// by file name; a bare name gets the extension `kind` appended.
pub fn read_asset(arg: &str, kind: &str) -> Result<String> {
    if std::path::Path::new(arg).exists() {
        return Ok(std::fs::read_to_string(arg)?);
    }
    let key = if arg.contains('.') {
        arg.to_string()
    } else {
        format!("{arg}.{kind}")
    };
    bundled_text(&key)
        .map(str::to_string)
        .ok_or_else(|| crate::Error::InvalidData(format!("no such file or bundled asset: {arg}")))
}
