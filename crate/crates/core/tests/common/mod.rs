// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

use semidp_core::dataspace::{DataspaceSpec, InvariantValue};

/// All compositions of `n` into `parts` non-negative (or positive) integers.
pub fn compositions(n: u64, parts: usize, positive: bool) -> Vec<Vec<u64>> {
    fn go(n: u64, parts: usize, positive: bool, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            if !positive || n > 0 {
                cur.push(n);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let lo = u64::from(positive);
        for k in lo..=n {
            cur.push(k);
            go(n - k, parts - 1, positive, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, parts, positive, &mut Vec::new(), &mut out);
    out
}

/// Every pair of (row, column) margins for an `r × c` table with `n` rows.
pub fn table_margins(r: usize, c: usize, n: usize, nondegenerate: bool) -> Vec<InvariantValue> {
    let mut out = Vec::new();
    for rows in compositions(n as u64, r, nondegenerate) {
        for cols in compositions(n as u64, c, nondegenerate) {
            out.push(InvariantValue(vec![rows.clone(), cols]));
        }
    }
    out
}

pub fn is_degenerate(t: &InvariantValue) -> bool {
    t.0.iter().any(|v| v.iter().any(|&k| k == 0))
}

pub fn table_space(r: usize, c: usize, n: usize) -> DataspaceSpec {
    DataspaceSpec::new(n, vec![r as u32, c as u32]).unwrap()
}
