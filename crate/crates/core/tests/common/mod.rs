#![allow(dead_code)]

use num_bigint::BigInt;

/// Published list of all `1 <= m <= 10^9` without solution, per odd `k`.
pub const PUBLISHED: &[(u64, &str)] = &[
    (9, "6^3, 30^3, 54^3, 78^3, 102^3, 126^3, 150^3, 174^3, 198^3, 222^3, 246^3, 294^3, 318^3, 342^3, 366^3, 390^3, 414^3, 438^3, 462^3, 486^3, 510^3, 534^3, 558^3, 582^3, 606^3, 630^3, 654^3, 678^3, 726^3, 750^3, 774^3, 798^3, 822^3, 846^3, 870^3, 894^3, 918^3, 942^3, 966^3, 990^3"),
    (15, "6^3, 30^3, 54^3, 78^3, 102^3, 126^3, 150^3, 174^3, 198^3, 222^3, 246^3, 270^3, 294^3, 318^3, 342^3, 366^3, 390^3, 414^3, 438^3, 462^3, 510^3, 534^3, 558^3, 582^3, 606^3, 630^3, 654^3, 678^3, 702^3, 726^3, 750^3, 774^3, 798^3, 822^3, 846^3, 870^3, 894^3, 918^3, 942^3, 966^3, 990^3, 6^5, 14^5, 22^5, 30^5, 38^5, 46^5, 54^5, 62^5"),
    (21, "6^3, 30^3, 54^3, 78^3, 102^3, 126^3, 150^3, 174^3, 198^3, 222^3, 246^3, 270^3, 294^3, 318^3, 342^3, 366^3, 390^3, 414^3, 438^3, 462^3, 486^3, 510^3, 534^3, 558^3, 582^3, 606^3, 630^3, 654^3, 678^3, 702^3, 726^3, 750^3, 774^3, 798^3, 822^3, 846^3, 870^3, 894^3, 918^3, 942^3, 966^3, 990^3, 14^7"),
    (25, "6^5, 14^5, 22^5, 30^5, 38^5, 46^5, 54^5, 62^5"),
    (27, "6^3, 30^3, 46^3, 54^3, 62^3, 78^3, 102^3, 118^3, 126^3, 150^3, 174^3, 198^3, 206^3, 222^3, 246^3, 262^3, 270^3, 278^3, 294^3, 318^3, 334^3, 342^3, 366^3, 390^3, 414^3, 422^3, 438^3, 462^3, 478^3, 486^3, 494^3, 510^3, 534^3, 550^3, 558^3, 582^3, 606^3, 630^3, 638^3, 654^3, 678^3, 694^3, 702^3, 710^3, 726^3, 750^3, 766^3, 774^3, 798^3, 822^3, 846^3, 854^3, 870^3, 894^3, 910^3, 918^3, 926^3, 942^3, 966^3, 982^3, 990^3, 6^9"),
    (33, "6^3, 30^3, 54^3, 78^3, 102^3, 126^3, 150^3, 174^3, 198^3, 222^3, 246^3, 270^3, 294^3, 318^3, 342^3, 366^3, 390^3, 414^3, 438^3, 462^3, 486^3, 510^3, 534^3, 558^3, 582^3, 606^3, 630^3, 654^3, 678^3, 702^3, 726^3, 750^3, 774^3, 798^3, 822^3, 846^3, 870^3, 894^3, 918^3, 942^3, 966^3, 990^3"),
    (35, "6^5, 14^5, 22^5, 30^5, 38^5, 46^5, 54^5, 62^5, 14^7"),
    (39, "6^3, 30^3, 54^3, 78^3, 102^3, 126^3, 150^3, 174^3, 198^3, 222^3, 246^3, 270^3, 294^3, 318^3, 342^3, 366^3, 390^3, 414^3, 438^3, 462^3, 486^3, 510^3, 534^3, 558^3, 582^3, 606^3, 630^3, 654^3, 678^3, 702^3, 726^3, 750^3, 774^3, 798^3, 822^3, 846^3, 870^3, 894^3, 918^3, 942^3, 966^3, 990^3"),
    (45, "6^3, 30^3, 54^3, 78^3, 102^3, 126^3, 150^3, 174^3, 198^3, 222^3, 246^3, 270^3, 294^3, 318^3, 342^3, 366^3, 390^3, 414^3, 438^3, 462^3, 486^3, 510^3, 534^3, 558^3, 582^3, 606^3, 630^3, 654^3, 678^3, 702^3, 726^3, 750^3, 774^3, 798^3, 822^3, 846^3, 870^3, 894^3, 918^3, 942^3, 966^3, 990^3, 6^5, 14^5, 22^5, 30^5, 38^5, 46^5, 54^5, 62^5, 6^9"),
    (49, "14^7"),
];

pub const TABLE_MAX: u64 = 1_000_000_000;

/// `(n, a)` pairs of a published row, in the order listed.
pub fn published_row(k: u64) -> Vec<(i64, u64)> {
    let (_, row) = PUBLISHED.iter().find(|(kk, _)| *kk == k).expect("k has a row");
    row.split(", ")
        .map(|item| {
            let (n, a) = item.split_once('^').unwrap();
            (n.parse().unwrap(), a.parse().unwrap())
        })
        .collect()
}

/// The published row as sorted integers.
pub fn published_values(k: u64) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = published_row(k)
        .into_iter()
        .map(|(n, a)| BigInt::from(n).pow(a as u32))
        .collect();
    v.sort();
    v
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}
