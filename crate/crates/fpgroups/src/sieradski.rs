//! Sieradski groups `S(n) = ⟨g_1..g_n | g_i = g_{i-1} g_{i+1}⟩`, indices mod n.

use crate::presentation::Presentation;
use crate::word::{Letter, Word};
use crate::GroupError;

pub fn sieradski(n: usize) -> Result<Presentation, GroupError> {
    if n < 2 {
        return Err(GroupError::InvalidN(n));
    }
    let rels = (0..n).map(|i| relator(n, i)).collect();
    Ok(Presentation::with_numbered_gens(format!("sieradski{n}"), "g", n, rels))
}

/// `g_{i-1} g_{i+1} g_i^{-1}` with 0-based `i`.
fn relator(n: usize, i: usize) -> Word {
    Word::from_letters([Letter::pos((i + n - 1) % n), Letter::pos((i + 1) % n), Letter::neg(i)])
}

/// Detects a Sieradski presentation up to relabeling of generators along the
/// cycle (either direction), cyclic index shift, relator rotation and inversion,
/// and repeated relators. Returns `n` on success.
pub fn match_sieradski(p: &Presentation) -> Option<usize> {
    sieradski_labeling(p).map(|l| l.len())
}

/// Generator indices of `p` playing the roles of `g_1, .., g_n`.
pub fn sieradski_labeling(p: &Presentation) -> Option<Vec<usize>> {
    let n = p.num_generators();
    if n < 2 {
        return None;
    }
    let rels = p.relator_set();
    if rels.len() != n {
        return None;
    }
    // Each relator must read x = a b for a unique centre x.
    let mut split: Vec<Option<(usize, usize)>> = vec![None; n];
    for r in &rels {
        let (centre, a, b) = centre_form(r)?;
        if split[centre].replace((a, b)).is_some() {
            return None;
        }
    }
    let target = sieradski(n).ok()?;
    for start in 0..n {
        let mut labels = vec![start];
        let mut used = vec![false; n];
        used[start] = true;
        let mut ok = true;
        while labels.len() < n {
            let cur = *labels.last().expect("non-empty");
            let next = split[cur]?.1;
            if used[next] {
                ok = false;
                break;
            }
            used[next] = true;
            labels.push(next);
        }
        if !ok {
            continue;
        }
        // p's generator labels[i] plays g_{i+1}
        let mut role = vec![0usize; n];
        for (i, &g) in labels.iter().enumerate() {
            role[g] = i;
        }
        let mut mapped: Vec<Word> = rels.iter().map(|r| r.map_gens(|g| role[g]).cyclic_canonical()).collect();
        mapped.sort();
        if mapped == target.relator_set() {
            return Some(labels);
        }
    }
    None
}

/// For a length-3 relator with exponents of mixed sign, returns `(x, a, b)` with `x = a b`.
fn centre_form(r: &Word) -> Option<(usize, usize, usize)> {
    if r.len() != 3 {
        return None;
    }
    let negs = r.iter().filter(|l| l.inverse).count();
    let w = match negs {
        1 => r.clone(),
        2 => r.inverse(),
        _ => return None,
    };
    let k = w.iter().position(|l| l.inverse)?;
    let rot = w.rotate((k + 1) % 3);
    // rot = a b x^{-1}
    let l = rot.letters();
    Some((l[2].gen, l[0].gen, l[1].gen))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_n() {
        assert_eq!(sieradski(1), Err(GroupError::InvalidN(1)));
    }

    #[test]
    fn round_trip() {
        for n in 2..=12 {
            assert_eq!(match_sieradski(&sieradski(n).unwrap()), Some(n));
        }
    }

    #[test]
    fn reversed_and_shifted_labels_match() {
        // h_j = g_{-j+2}: relabel generators by a reflection of the cycle
        let n = 7;
        let s = sieradski(n).unwrap();
        let f = |g: usize| (2 * n + 2 - g) % n;
        let rels: Vec<Word> = s.relators.iter().map(|r| r.map_gens(f).inverse().rotate(1)).collect();
        let p = Presentation::with_numbered_gens("x", "h", n, rels);
        assert_eq!(match_sieradski(&p), Some(n));
    }

    #[test]
    fn trefoil_group_is_not_sieradski() {
        let p = Presentation::parse("group t\ngen m c\nrel m c m c^-1 m c^-1\n").unwrap();
        assert_eq!(match_sieradski(&p), None);
    }

    #[test]
    fn wrong_relator_rejected() {
        let mut s = sieradski(5).unwrap();
        s.relators[2] = Word::from_signed(&[1, 3, -2]);
        assert_eq!(match_sieradski(&s), None);
    }
}
