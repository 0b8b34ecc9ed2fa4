use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::SmallVec;

/// One component of a routing key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyPart {
    Int(i64),
    Tag(&'static str),
}

macro_rules! int_part {
    ($($t:ty),*) => {$(
        impl From<$t> for KeyPart {
            fn from(v: $t) -> Self {
                KeyPart::Int(v as i64)
            }
        }
    )*};
}
int_part!(i64, i32, u32, u8, u64, usize);

impl From<&'static str> for KeyPart {
    fn from(t: &'static str) -> Self {
        KeyPart::Tag(t)
    }
}

/// Lexicographically ordered key tuple. One distinct key is one machine.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Key(SmallVec<[KeyPart; 4]>);

/// Longest tag accepted in a key.
pub const MAX_TAG_LEN: usize = 16;

impl Key {
    pub fn from_parts<I: IntoIterator<Item = KeyPart>>(parts: I) -> Self {
        Key(parts.into_iter().collect())
    }

    pub fn parts(&self) -> &[KeyPart] {
        &self.0
    }

    /// Integer component at `idx`; panics if that component is a tag.
    pub fn int(&self, idx: usize) -> i64 {
        match self.0[idx] {
            KeyPart::Int(v) => v,
            KeyPart::Tag(t) => panic!("key component {idx} is tag {t:?}"),
        }
    }

    pub fn push(&mut self, part: impl Into<KeyPart>) {
        self.0.push(part.into());
    }

    /// A key must be a non-empty tuple whose tags are short printable identifiers.
    pub fn is_well_formed(&self) -> bool {
        !self.0.is_empty()
            && self.0.iter().all(|p| match p {
                KeyPart::Int(_) => true,
                KeyPart::Tag(t) => {
                    !t.is_empty()
                        && t.len() <= MAX_TAG_LEN
                        && t.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
                }
            })
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match p {
                KeyPart::Int(v) => write!(f, "{v}")?,
                KeyPart::Tag(t) => write!(f, "{t}")?,
            }
        }
        write!(f, ")")
    }
}

impl Serialize for Key {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Builds a [`Key`] from tags and integers: `key!("lin", level, i)`.
#[macro_export]
macro_rules! key {
    ($($p:expr),* $(,)?) => {
        $crate::engine::Key::from_parts([$($crate::engine::KeyPart::from($p)),*])
    };
}
