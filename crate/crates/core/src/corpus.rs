//! Text generators for tests, benchmarks and the `verify` command.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::text::Text;

/// The `sigma` symbols used for random texts: lowercase letters when they
/// suffice, otherwise bytes counting up from 1.
pub fn alphabet(sigma: usize) -> Vec<u8> {
    assert!((1..=255).contains(&sigma), "alphabet size must be in 1..=255");
    if sigma <= 26 {
        (b'a'..b'a' + sigma as u8).collect()
    } else {
        (1..=sigma as u8).collect()
    }
}

pub fn random_bytes<R: Rng>(rng: &mut R, n: usize, sigma: usize) -> Vec<u8> {
    let alpha = alphabet(sigma);
    (0..n).map(|_| *alpha.choose(rng).unwrap()).collect()
}

pub fn random_text<R: Rng>(rng: &mut R, n: usize, sigma: usize) -> Text {
    Text::new(random_bytes(rng, n, sigma)).expect("alphabet excludes the sentinel")
}

/// Prefix of length `n` of the Fibonacci word over {a, b}.
pub fn fibonacci(n: usize) -> Vec<u8> {
    let (mut a, mut b) = (b"a".to_vec(), b"ab".to_vec());
    while b.len() < n {
        let next = [b.as_slice(), a.as_slice()].concat();
        a = std::mem::replace(&mut b, next);
    }
    b.truncate(n);
    b
}

/// Prefix of length `n` of the Thue-Morse word over {a, b}.
pub fn thue_morse(n: usize) -> Vec<u8> {
    (0..n as u64)
        .map(|i| if i.count_ones() % 2 == 0 { b'a' } else { b'b' })
        .collect()
}

/// `unit` repeated until the result has length `n`.
pub fn periodic(unit: &[u8], n: usize) -> Vec<u8> {
    unit.iter().copied().cycle().take(n).collect()
}

/// A random unit of length `period` repeated, with `noise` random positions
/// overwritten by symbols of the same alphabet.
pub fn noisy_periodic<R: Rng>(rng: &mut R, n: usize, period: usize, sigma: usize, noise: usize) -> Vec<u8> {
    let unit = random_bytes(rng, period.max(1), sigma);
    let mut s = periodic(&unit, n);
    let alpha = alphabet(sigma);
    for _ in 0..noise.min(n) {
        let i = rng.gen_range(0..n);
        s[i] = *alpha.choose(rng).unwrap();
    }
    s
}

/// Query patterns for one text: substrings at random positions, random
/// strings that are probably absent, and substrings with one symbol changed.
pub fn probe_patterns<R: Rng>(rng: &mut R, text: &[u8], count: usize, sigma: usize) -> Vec<Vec<u8>> {
    let n = text.len();
    let alpha = alphabet(sigma.max(1));
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let kind = rng.gen_range(0..3);
        let max_len = n.clamp(1, 40);
        let m = rng.gen_range(1..=max_len);
        if kind == 0 && n > 0 {
            let m = m.min(n);
            let i = rng.gen_range(0..=n - m);
            out.push(text[i..i + m].to_vec());
        } else if kind == 1 || n == 0 {
            out.push((0..m).map(|_| *alpha.choose(rng).unwrap()).collect());
        } else {
            let m = m.min(n);
            let i = rng.gen_range(0..=n - m);
            let mut p = text[i..i + m].to_vec();
            let j = rng.gen_range(0..m);
            p[j] = *alpha.choose(rng).unwrap();
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_prefixes() {
        assert_eq!(fibonacci(8), b"abaababa");
        assert_eq!(fibonacci(0), b"");
        assert_eq!(fibonacci(1), b"a");
    }

    #[test]
    fn thue_morse_prefix() {
        assert_eq!(thue_morse(8), b"abbabaab");
    }

    #[test]
    fn periodic_and_alphabet() {
        assert_eq!(periodic(b"abc", 7), b"abcabca");
        assert_eq!(alphabet(2), b"ab");
        assert_eq!(alphabet(255).len(), 255);
        assert!(!alphabet(255).contains(&0));
    }
}
