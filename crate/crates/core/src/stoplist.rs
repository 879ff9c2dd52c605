//! The bundled English stop list and loaders for custom lists.

use std::collections::HashSet;
use std::path::Path;

use crate::error::Result;
use crate::io;

/// One word per line, lowercase.
pub const ENGLISH: &str = include_str!("../data/stoplist_en.txt");

pub type Stoplist = HashSet<String>;

pub fn english() -> Stoplist {
    parse(ENGLISH)
}

/// Parses a stop list: whitespace-separated words, `#` starts a comment line.
/// Words are lowercased.
pub fn parse(text: &str) -> Stoplist {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(str::to_lowercase)
        .collect()
}

pub fn load(path: &Path) -> Result<Stoplist> {
    Ok(parse(&io::read_to_string(path)?))
}
