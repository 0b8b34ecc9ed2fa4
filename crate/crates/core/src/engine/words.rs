use num_bigint::BigInt;
use num_complex::Complex64;

/// Metered size of a payload in machine words.
pub trait Words {
    fn words(&self) -> u64;
}

macro_rules! one_word {
    ($($t:ty),*) => {$(
        impl Words for $t {
            fn words(&self) -> u64 {
                1
            }
        }
    )*};
}
one_word!(i64, u64, i32, u32, usize, bool);

impl Words for () {
    fn words(&self) -> u64 {
        0
    }
}

impl Words for Complex64 {
    fn words(&self) -> u64 {
        2
    }
}

/// Bit length rounded up to 64-bit words; zero still occupies one word.
impl Words for BigInt {
    fn words(&self) -> u64 {
        self.bits().div_ceil(64).max(1)
    }
}

impl<T: Words> Words for Vec<T> {
    fn words(&self) -> u64 {
        self.iter().map(Words::words).sum()
    }
}

impl<T: Words> Words for Option<T> {
    fn words(&self) -> u64 {
        self.as_ref().map_or(0, Words::words)
    }
}

impl<A: Words, B: Words> Words for (A, B) {
    fn words(&self) -> u64 {
        self.0.words() + self.1.words()
    }
}

impl<A: Words, B: Words, C: Words> Words for (A, B, C) {
    fn words(&self) -> u64 {
        self.0.words() + self.1.words() + self.2.words()
    }
}
