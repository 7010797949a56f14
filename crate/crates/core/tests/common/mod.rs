//! Brute-force oracle shared by the Balmer tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;

use eqchrom::balmer::{enumerate_admissible, is_admissible, HeightFunction, HeightValue, TypeFunction};
use eqchrom::group::{SubgroupId, SubgroupLattice};

/// Levels checked explicitly; everything above is determined by the
/// thresholds, which are at most `VALUE_BOUND`.
pub const TOP: u32 = 12;
pub const VALUE_BOUND: u32 = 6;
/// Bit `TOP + 1` stands for the point at infinity.
pub const INF_BIT: u32 = TOP + 1;

/// `rk(C/B)` from element counts: `|{x in C : p x in B}| / |B| = p^rk`.
fn quotient_rank(l: &SubgroupLattice, b: SubgroupId, c: SubgroupId) -> u32 {
    let (bs, cs) = (l.subgroup(b), l.subgroup(c));
    let p = l.p();
    let n = cs.elements.iter().filter(|&&x| bs.contains(l.scale(p, x))).count() / bs.order();
    let mut r = 0;
    let mut m = 1;
    while m < n {
        m *= p as usize;
        r += 1;
    }
    r
}

fn contains_all(l: &SubgroupLattice, b: SubgroupId, c: SubgroupId) -> bool {
    let cs = l.subgroup(c);
    l.subgroup(b).elements.iter().all(|&x| cs.contains(x))
}

/// The per-subgroup point sets that are closed along the chain over one
/// subgroup: nothing, only the infinite point, or `{t, t+1, ..., ∞}`.
fn chain_sets() -> Vec<(u32, Option<u32>)> {
    let mut out = vec![(0, None), (1 << INF_BIT, None)];
    for t in 0..=VALUE_BOUND {
        let mut m = 1 << INF_BIT;
        for i in t..=TOP {
            m |= 1 << i;
        }
        out.push((m, Some(t)));
    }
    out
}

/// Threshold vectors (`None` = no finite points) of all point sets closed
/// under specialization, found by backtracking from the top subgroup.
pub fn oracle(l: &SubgroupLattice) -> BTreeSet<Vec<Option<u32>>> {
    let n = l.len();
    let sets = chain_sets();
    // down[b][c][k]: the points over b lying below some point of sets[k] over c.
    let mut down = vec![vec![vec![0u32; sets.len()]; n]; n];
    for b in 0..n {
        for c in 0..n {
            let (bi, ci) = (SubgroupId(b), SubgroupId(c));
            if !contains_all(l, bi, ci) {
                continue;
            }
            let r = quotient_rank(l, bi, ci);
            for (k, &(mask, _)) in sets.iter().enumerate() {
                let mut d = 0u32;
                for q in 0..=INF_BIT {
                    if mask >> q & 1 == 0 {
                        continue;
                    }
                    // points (b, i) with i >= q + r, and (b, ∞) below everything
                    d |= 1 << INF_BIT;
                    if q != INF_BIT {
                        for i in (q + r)..=TOP {
                            d |= 1 << i;
                        }
                    }
                }
                down[b][c][k] = d;
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; n];
    fn go(
        i: usize,
        n: usize,
        pick: &mut Vec<usize>,
        sets: &[(u32, Option<u32>)],
        down: &[Vec<Vec<u32>>],
        out: &mut BTreeSet<Vec<Option<u32>>>,
    ) {
        if i == 0 {
            out.insert(pick.iter().map(|&k| sets[k].1).collect());
            return;
        }
        let b = i - 1;
        for k in 0..sets.len() {
            let mask = sets[k].0;
            // closed against everything assigned (ids above b), both directions
            let ok = (b..n).all(|c| {
                let kc = if c == b { k } else { pick[c] };
                down[b][c][kc] & !mask == 0 && down[c][b][k] & !sets[kc].0 == 0
            });
            if ok {
                pick[b] = k;
                go(b, n, pick, sets, down, out);
            }
        }
    }
    go(n, n, &mut pick, &sets, &down, &mut out);
    out
}

pub fn as_thresholds(t: &TypeFunction) -> Vec<Option<u32>> {
    t.values().iter().map(|v| v.finite()).collect()
}

pub fn all_type_functions(n: usize, bound: u32) -> impl Iterator<Item = Vec<HeightValue>> {
    let choices: Vec<HeightValue> = (0..=bound).map(HeightValue::Finite).chain([HeightValue::Infinite]).collect();
    let k = choices.len();
    (0..k.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let v = choices[code % k];
                code /= k;
                v
            })
            .collect()
    })
}

/// The five groups checked exhaustively; takes a few seconds.
pub const ORACLE_GROUPS: [&str; 5] = ["2:[1]", "2:[2]", "2:[3]", "2:[1,1]", "2:[2,1]"];


/// Compares the oracle with `enumerate_admissible` and with `is_admissible`
/// on every function with values in `{0..=VALUE_BOUND, ∞}`; returns the
/// number of admissible functions.
pub fn compare_with_oracle(l: &SubgroupLattice) -> Result<usize, String> {
    let want = oracle(l);
    let got: BTreeSet<_> = enumerate_admissible(l, VALUE_BOUND)
        .map_err(|e| e.to_string())?
        .iter()
        .map(as_thresholds)
        .collect();
    if got != want {
        return Err(format!("enumeration has {} functions, oracle {}", got.len(), want.len()));
    }
    for vals in all_type_functions(l.len(), VALUE_BOUND) {
        let f = HeightFunction::new(l, vals).map_err(|e| e.to_string())?;
        let th: Vec<Option<u32>> = f.values().iter().map(|v| v.finite()).collect();
        if is_admissible(l, &f) != want.contains(&th) {
            return Err(format!("is_admissible disagrees on {:?}", f.values()));
        }
    }
    Ok(want.len())
}
