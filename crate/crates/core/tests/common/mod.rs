#![allow(dead_code)]

use rigid_core::census::{CensusTable, SingularityType};
use rigid_core::group::enumerate_groups;
use rigid_core::Group;

/// Every `A ⋊ Z_d`, `d ∈ {3, 4, 6}`, of order at most `max_order`.
pub fn small_groups(max_order: usize) -> Vec<Group> {
    [3, 4, 6]
        .into_iter()
        .flat_map(|d| enumerate_groups(d, max_order).unwrap())
        .collect()
}

pub fn table(entries: &[(&str, u64)]) -> CensusTable {
    CensusTable::from_counts(
        entries
            .iter()
            .map(|(ty, count)| (ty.parse::<SingularityType>().unwrap(), *count)),
    )
}

/// `1/ℓ(1, …, 1)` or `1/ℓ(1, …, 1, last)` in dimension `n`.
pub fn ty(ell: u32, n: usize, last: u32) -> String {
    let mut w = vec!["1".to_string(); n - 1];
    w.push(last.to_string());
    format!("1/{ell}({})", w.join(","))
}
