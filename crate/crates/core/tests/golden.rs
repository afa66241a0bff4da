use lcdawg::{persist, FormatError, Index, Text};

const GOLDEN: &[u8] = include_bytes!("data/abcdbcda.lcdw");

fn u64_at(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

#[test]
fn writer_reproduces_golden_bytes() {
    let index = Index::build(&Text::new(&b"abcdbcda"[..]).unwrap()).unwrap();
    assert_eq!(persist::to_bytes(&index), GOLDEN);
}

#[test]
fn golden_header_fields() {
    assert_eq!(&GOLDEN[..4], b"LCDW");
    assert_eq!(u16::from_le_bytes([GOLDEN[4], GOLDEN[5]]), 1);
    assert_eq!(GOLDEN[6], 4);
    assert_eq!(GOLDEN[7], 0);
    assert_eq!(u64_at(GOLDEN, 8), 8);
    assert_eq!(u32::from_le_bytes(GOLDEN[16..20].try_into().unwrap()), 4);
    let (v, e, r) = (u64_at(GOLDEN, 20), u64_at(GOLDEN, 28), u64_at(GOLDEN, 36));
    assert_eq!(GOLDEN.len() as u64, 48 + 17 * v + 25 * e + 9 * r + 8 * v);
    // the source has n+1 paths to the sink
    let counts = GOLDEN.len() - 8 * v as usize;
    assert_eq!(u64_at(GOLDEN, counts), 9);
}

#[test]
fn golden_loads_without_text() {
    let index = persist::from_bytes(GOLDEN).unwrap();
    assert_eq!(index.text(), b"abcdbcda");
    assert_eq!(index.find(b"bcd").unwrap(), vec![2, 5]);
    assert_eq!(index.count(b"a").unwrap(), 2);
}

#[test]
fn header_corruption_is_diagnosed() {
    let mut b = GOLDEN.to_vec();
    b[0] = b'X';
    assert_eq!(persist::from_bytes(&b).unwrap_err(), FormatError::BadMagic);
    let mut b = GOLDEN.to_vec();
    b[4] = 2;
    assert_eq!(persist::from_bytes(&b).unwrap_err(), FormatError::UnsupportedVersion(2));
    let mut b = GOLDEN.to_vec();
    b[20] += 1;
    assert!(persist::from_bytes(&b).is_err());
}
