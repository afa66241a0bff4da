use crate::error::{Error, Result};

/// Symbol appended once at the end of every indexed text.
pub const SENTINEL: u8 = 0;

/// A byte text over the alphabet `1..=255`, stored with its sentinel.
#[derive(Clone, PartialEq, Eq)]
pub struct Text {
    bytes: Vec<u8>,
}

impl Text {
    /// Wraps `bytes`, rejecting any embedded sentinel.
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self> {
        let mut bytes = bytes.into();
        if let Some(offset) = bytes.iter().position(|&b| b == SENTINEL) {
            return Err(Error::SentinelInInput { offset });
        }
        bytes.push(SENTINEL);
        Ok(Text { bytes })
    }

    /// Length excluding the sentinel.
    pub fn len(&self) -> usize {
        self.bytes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The text without its sentinel.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes[..self.len()]
    }

    /// The text followed by the sentinel.
    pub fn with_sentinel(&self) -> &[u8] {
        &self.bytes
    }

    /// Number of distinct symbols, sentinel excluded.
    pub fn sigma(&self) -> u32 {
        let mut seen = [false; 256];
        for &b in self.as_bytes() {
            seen[b as usize] = true;
        }
        seen.iter().filter(|&&s| s).count() as u32
    }

    pub fn reversed(&self) -> Text {
        let mut bytes: Vec<u8> = self.as_bytes().iter().rev().copied().collect();
        bytes.push(SENTINEL);
        Text { bytes }
    }
}

impl std::fmt::Debug for Text {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Text({:?})", String::from_utf8_lossy(self.as_bytes()))
    }
}

/// Rejects patterns the index cannot answer: empty ones and ones holding the sentinel.
pub fn validate_pattern(pattern: &[u8]) -> Result<()> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if let Some(offset) = pattern.iter().position(|&b| b == SENTINEL) {
        return Err(Error::SentinelInPattern { offset });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinel_appended_once() {
        let t = Text::new(&b"abc"[..]).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.with_sentinel(), b"abc\0");
        assert_eq!(t.as_bytes(), b"abc");
    }

    #[test]
    fn embedded_sentinel_rejected() {
        assert_eq!(
            Text::new(&b"ab\0c"[..]),
            Err(Error::SentinelInInput { offset: 2 })
        );
    }

    #[test]
    fn empty_text() {
        let t = Text::new(Vec::new()).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.with_sentinel(), b"\0");
        assert_eq!(t.sigma(), 0);
    }

    #[test]
    fn pattern_validation() {
        assert_eq!(validate_pattern(b""), Err(Error::EmptyPattern));
        assert_eq!(
            validate_pattern(b"a\0"),
            Err(Error::SentinelInPattern { offset: 1 })
        );
        assert!(validate_pattern(b"ab").is_ok());
    }

    #[test]
    fn reverse_keeps_sentinel_last() {
        let t = Text::new(&b"abc"[..]).unwrap().reversed();
        assert_eq!(t.with_sentinel(), b"cba\0");
    }
}
