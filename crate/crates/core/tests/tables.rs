mod common;

use std::collections::BTreeSet;

use common::{published_row, PUBLISHED, TABLE_MAX};
use obstruction::decide::{table_generate, TableMode};

#[test]
fn every_published_row_is_reproduced() {
    for &(k, _) in PUBLISHED {
        let got: BTreeSet<(i64, u64)> = table_generate(k, TABLE_MAX, TableMode::Fast)
            .unwrap()
            .into_iter()
            .map(|e| (e.n as i64, e.a))
            .collect();
        let want: BTreeSet<(i64, u64)> = published_row(k).into_iter().collect();
        assert_eq!(got, want, "k = {k}");
    }
}

#[test]
fn rows_are_sorted_and_consistent() {
    for k in [9u64, 27, 45] {
        let entries = table_generate(k, TABLE_MAX, TableMode::Fast).unwrap();
        assert!(entries.windows(2).all(|w| w[0].m < w[1].m));
        for e in &entries {
            assert_eq!(e.n.pow(e.a as u32), e.m);
            assert_eq!(k % e.a, 0);
        }
    }
}

#[test]
fn fast_and_full_modes_agree() {
    for k in [9u64, 15] {
        let fast = table_generate(k, 100_000, TableMode::Fast).unwrap();
        let full = table_generate(k, 100_000, TableMode::Full).unwrap();
        assert_eq!(fast, full, "k = {k}");
    }
}

#[test]
fn prime_exponents_have_empty_tables() {
    for k in [3u64, 5, 7, 11] {
        assert!(table_generate(k, 1_000_000, TableMode::Fast).unwrap().is_empty());
    }
    assert!(table_generate(3, 10_000, TableMode::Full).unwrap().is_empty());
}

#[test]
fn small_bounds() {
    let row: Vec<u64> = table_generate(9, 30_000, TableMode::Fast)
        .unwrap()
        .into_iter()
        .map(|e| e.m)
        .collect();
    assert_eq!(row, vec![216, 27_000]);
    assert!(table_generate(9, 215, TableMode::Full).unwrap().is_empty());
}
