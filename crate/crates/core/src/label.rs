use std::fmt;

use serde::{Deserialize, Serialize};

/// An edge label drawn from a general ordered alphabet.
///
/// Labels are Unicode scalar values compared by code point. Code point 0 is
/// reserved for the suffix-tree sentinel and is never accepted as user input.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label(char);

impl Label {
    pub const SENTINEL: Label = Label('\0');

    pub const fn new(c: char) -> Self {
        Label(c)
    }

    /// Label for the `i`-th letter of a synthetic alphabet: `a`, `b`, ... and
    /// then further code points, skipping the surrogate range.
    pub fn nth(i: u32) -> Self {
        let mut code = 'a' as u32 + i;
        if code >= 0xD800 {
            code += 0x800;
        }
        Label(char::from_u32(code).expect("synthetic label out of range"))
    }

    pub fn as_char(self) -> char {
        self.0
    }

    pub fn is_sentinel(self) -> bool {
        self.0 == '\0'
    }
}

impl From<char> for Label {
    fn from(c: char) -> Self {
        Label(c)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sentinel() {
            f.write_str("'$'")
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sentinel() {
            f.write_str("$")
        } else {
            write!(f, "{}", self.0)
        }
    }
}
