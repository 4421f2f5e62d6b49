//! Whether some nonzero `eps in {-1, 0, 1}^r` has `sum eps_i beta_i = 0`.

use std::collections::HashMap;

/// True when no nonzero `eps in {-1, 0, 1}^r` annihilates `beta`, i.e. no two
/// disjoint nonempty sub-multisets of `beta` share a sum.
pub fn uniqueness_condition(beta: &[u32]) -> bool {
    annihilating_split(beta).is_none()
}

/// Two disjoint nonempty sub-multisets of `beta` with equal sums, if any.
///
/// The side holding the lowest index comes first; each side is ascending.
pub fn annihilating_split(beta: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    // layers[i] maps (signed sum, any nonzero eps so far) after i entries to
    // the (eps, previous flag) that reached it
    type Layer = HashMap<(i64, bool), (i8, bool)>;
    let mut layers: Vec<Layer> = Vec::with_capacity(beta.len() + 1);
    let mut first = Layer::new();
    first.insert((0, false), (0, false));
    layers.push(first);
    for &b in beta {
        let b = i64::from(b);
        let prev = layers.last().expect("nonempty");
        let mut next = Layer::new();
        for &(sum, flag) in prev.keys() {
            for eps in [-1i8, 0, 1] {
                let key = (sum + i64::from(eps) * b, flag || eps != 0);
                next.entry(key).or_insert((eps, flag));
            }
        }
        layers.push(next);
    }
    let mut key = (0i64, true);
    if !layers.last()?.contains_key(&key) {
        return None;
    }
    let mut eps = vec![0i8; beta.len()];
    for i in (0..beta.len()).rev() {
        let (e, flag) = layers[i + 1][&key];
        eps[i] = e;
        key = (key.0 - i64::from(e) * i64::from(beta[i]), flag);
    }
    let lead = eps.iter().copied().find(|&e| e != 0)?;
    let side = |sign: i8| {
        let mut v: Vec<u32> = beta
            .iter()
            .zip(&eps)
            .filter(|&(_, &e)| e == sign)
            .map(|(&b, _)| b)
            .collect();
        v.sort_unstable();
        v
    };
    Some((side(lead), side(-lead)))
}
