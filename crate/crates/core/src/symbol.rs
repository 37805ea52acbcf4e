//! Interned symbolic tokens.
//!
//! Every letter, phoneme, composite stream token and class label is a
//! [`Symbol`]. Interning makes equality a pointer comparison, while ordering
//! always follows the token text so that tie-breaks stay lexicographic.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Token used to pad windows beyond the edges of a word.
pub const PADDING: &str = "_";

/// Phonemic null: a letter that contributes no phoneme of its own.
pub const PHONEMIC_NULL: &str = "-";

fn interner() -> &'static Mutex<HashSet<&'static str>> {
    static INTERNER: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    INTERNER.get_or_init(|| Mutex::new(HashSet::new()))
}

/// An interned token. Two symbols are equal iff their tokens are equal.
#[derive(Clone, Copy)]
pub struct Symbol(&'static str);

impl Symbol {
    pub fn new(token: &str) -> Symbol {
        let mut set = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(&existing) = set.get(token) {
            return Symbol(existing);
        }
        let leaked: &'static str = Box::leak(token.to_owned().into_boxed_str());
        set.insert(leaked);
        Symbol(leaked)
    }

    pub fn padding() -> Symbol {
        Symbol::new(PADDING)
    }

    pub fn null() -> Symbol {
        Symbol::new(PHONEMIC_NULL)
    }

    pub fn as_str(&self) -> &'static str {
        self.0
    }

    pub fn is_padding(&self) -> bool {
        self.0 == PADDING
    }

    pub fn is_null(&self) -> bool {
        self.0 == PHONEMIC_NULL
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0.as_ptr(), other.0.as_ptr()) && self.0.len() == other.0.len()
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.0.as_ptr() as usize).hash(state);
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            Ordering::Equal
        } else {
            self.0.cmp(other.0)
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl From<&str> for Symbol {
    fn from(token: &str) -> Self {
        Symbol::new(token)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.0)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let token = String::deserialize(deserializer)?;
        Ok(Symbol::new(&token))
    }
}

/// Interns every token in `tokens`.
pub fn symbols<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Vec<Symbol> {
    tokens.into_iter().map(Symbol::new).collect()
}
