use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Mor, Obj};

pub const MAX_FINSET: usize = 4;

fn fn_name(m: usize, k: usize, values: &[u8]) -> String {
    let vals: String = values.iter().map(|v| char::from(b'0' + v)).collect();
    format!("{m}>{k}:{vals}")
}

/// Skeletal category of finite sets `0..=n` (object `k` is `{0, .., k-1}`) and all functions.
/// Functions in each hom-set are declared in lexicographic order of their value lists.
pub fn finset_skeleton(n: usize) -> Result<FinCategory> {
    if n > MAX_FINSET {
        return Err(Error::TooLarge { what: "finite-set skeleton".into(), size: n, limit: MAX_FINSET });
    }
    let mut mors: Vec<(String, Obj, Obj)> = Vec::new();
    let mut values: Vec<Vec<u8>> = Vec::new();
    let mut index: HashMap<(usize, usize, Vec<u8>), Mor> = HashMap::new();
    for m in 0..=n {
        for k in 0..=n {
            let count = k.pow(m as u32);
            for code in 0..count {
                let mut vals = vec![0u8; m];
                let mut c = code;
                for i in (0..m).rev() {
                    vals[i] = (c % k) as u8;
                    c /= k;
                }
                index.insert((m, k, vals.clone()), Mor(mors.len() as u32));
                mors.push((fn_name(m, k, &vals), Obj(m as u32), Obj(k as u32)));
                values.push(vals);
            }
        }
    }
    let identity = |o: Obj| {
        let m = o.index();
        index[&(m, m, (0..m as u8).collect::<Vec<_>>())]
    };
    let ends: Vec<(usize, usize)> = mors.iter().map(|(_, d, c)| (d.index(), c.index())).collect();
    FinCategory::generate(
        (0..=n).map(|i| i.to_string()).collect(),
        mors,
        identity,
        |g, f| {
            let (m, _) = ends[f.index()];
            let (_, k) = ends[g.index()];
            let gv = &values[g.index()];
            let composite: Vec<u8> = values[f.index()].iter().map(|&v| gv[v as usize]).collect();
            index.get(&(m, k, composite)).copied()
        },
    )
}

/// The value list of a function in a finite-set skeleton, parsed from its identifier.
pub fn function_values(c: &FinCategory, f: Mor) -> Vec<usize> {
    let name = c.name(f);
    let vals = name.rsplit(':').next().unwrap_or("");
    vals.bytes().map(|b| (b - b'0') as usize).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_of_small_skeletons() {
        let c0 = finset_skeleton(0).unwrap();
        assert_eq!((c0.object_count(), c0.morphism_count()), (1, 1));
        let c2 = finset_skeleton(2).unwrap();
        assert_eq!(c2.object_count(), 3);
        assert_eq!(c2.hom(Obj(2), Obj(2)).len(), 4);
        let c3 = finset_skeleton(3).unwrap();
        assert_eq!(c3.hom(Obj(3), Obj(3)).len(), 27);
        // sum over m, k of k^m for m, k <= 2
        assert_eq!(c2.morphism_count(), 11);
    }

    #[test]
    fn rejects_large_skeletons() {
        assert!(matches!(finset_skeleton(5), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn skeleton_is_a_category() {
        for n in 0..=3 {
            assert!(finset_skeleton(n).unwrap().validate().is_ok(), "n = {n}");
        }
    }

    #[test]
    fn values_round_trip_through_names() {
        let c = finset_skeleton(2).unwrap();
        for f in c.morphisms() {
            let v = function_values(&c, f);
            assert_eq!(v.len(), c.dom(f).index());
            assert!(v.iter().all(|&x| x < c.cod(f).index()));
        }
    }
}
