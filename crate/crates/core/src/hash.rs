//! FNV-1a 64-bit hash. The same routine keys the feature store and decides
//! which partition owns an image URL, so the constants are fixed here once.

pub const FNV64_OFFSET_BASIS: u64 = 0xcbf2_9ce4_8422_2325;
pub const FNV64_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut hash = FNV64_OFFSET_BASIS;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(FNV64_PRIME);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_yields_offset_basis() {
        assert_eq!(fnv1a_64(b""), FNV64_OFFSET_BASIS);
    }

    #[test]
    fn known_vectors() {
        // Published FNV-1a 64 test values.
        assert_eq!(fnv1a_64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a_64(b"foobar"), 0x85944171f73967e8);
    }
}
