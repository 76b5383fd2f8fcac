//! Representation counts against a direct search over permutation pairs.

use std::collections::BTreeSet;

use fpgroups::Permutation;
use johansson::fan::banchoff_fan;
use johansson::monodromy::{enumerate_reps, validate_rep, MonodromyRep};

type Perm = Vec<usize>;

fn perms(n: usize) -> Vec<Perm> {
    fn extend(prefix: &mut Perm, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `a` then `b`, acting on the right.
fn then(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&i| b[i]).collect()
}

fn inv(a: &Perm) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

fn transitive(m: &Perm, c: &Perm) -> bool {
    let mut seen = vec![false; m.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in [m[i], c[i]] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&b| b)
}

/// Transitive solutions of m c m = c m⁻¹ c.
fn solutions(n: usize) -> Vec<(Perm, Perm)> {
    let all = perms(n);
    let mut out = Vec::new();
    for m in &all {
        for c in &all {
            if then(&then(m, c), m) == then(&then(c, &inv(m)), c) && transitive(m, c) {
                out.push((m.clone(), c.clone()));
            }
        }
    }
    out
}

fn conj(p: &Perm, s: &Perm) -> Perm {
    then(&then(&inv(s), p), s)
}

fn classes(n: usize) -> BTreeSet<(Perm, Perm)> {
    let all = perms(n);
    solutions(n).into_iter().map(|(m, c)| all.iter().map(|s| (conj(&m, s), conj(&c, s))).min().unwrap()).collect()
}

fn to_perm(p: &Perm) -> Permutation {
    Permutation::from_images(p.iter().map(|&i| i as u32).collect())
}

#[test]
fn all_representations_match_search() {
    let fan = banchoff_fan();
    for n in 1..=4 {
        let want: BTreeSet<(Perm, Perm)> = solutions(n).into_iter().collect();
        let got: BTreeSet<(Perm, Perm)> = enumerate_reps(&fan, n, false)
            .unwrap()
            .into_iter()
            .map(|(r, _)| {
                let f = |g: &str| r.get(g).unwrap().images().iter().map(|&i| i as usize).collect::<Perm>();
                (f("m"), f("c"))
            })
            .collect();
        assert_eq!(got, want, "n = {n}");
    }
}

#[test]
fn class_counts_match_search() {
    let fan = banchoff_fan();
    for (n, expected) in [(1, 1), (2, 1), (3, 2)] {
        let k = classes(n).len();
        assert_eq!(k, expected, "search at n = {n}");
        assert_eq!(enumerate_reps(&fan, n, true).unwrap().len(), k, "n = {n}");
    }
    for n in 4..=5 {
        assert_eq!(enumerate_reps(&fan, n, true).unwrap().len(), classes(n).len(), "n = {n}");
    }
}

#[test]
fn orbit_stabilizer() {
    // |all reps| = Σ n! / |centralizer| over classes
    let fan = banchoff_fan();
    for n in 2..=4 {
        let all = perms(n);
        let total: usize = enumerate_reps(&fan, n, true)
            .unwrap()
            .iter()
            .map(|(r, _)| {
                let m = r.get("m").unwrap();
                let c = r.get("c").unwrap();
                let stab = all
                    .iter()
                    .map(to_perm)
                    .filter(|s| m.conjugate_by(s) == *m && c.conjugate_by(s) == *c)
                    .count();
                all.len() / stab
            })
            .sum();
        assert_eq!(total, enumerate_reps(&fan, n, false).unwrap().len(), "n = {n}");
    }
}

#[test]
fn no_valid_representation_has_trivial_meridian() {
    for n in 2..=4 {
        assert!(solutions(n).iter().all(|(m, _)| m.iter().enumerate().any(|(i, &j)| i != j)));
    }
    let r = MonodromyRep::parse(2, &[("m", "()"), ("c", "(1 2)")]).unwrap();
    assert!(!validate_rep(&banchoff_fan(), &r).unwrap().accepted());
}

#[test]
fn cyclic_images_have_c_equal_m_cubed() {
    let fan = banchoff_fan();
    for n in 1..=6 {
        for (r, flags) in enumerate_reps(&fan, n, true).unwrap() {
            if flags.cyclic {
                let m = r.get("m").unwrap();
                assert_eq!(r.get("c").unwrap(), &m.pow(3), "{}", r.describe());
            }
        }
    }
}

#[test]
fn locally_cyclic_small_classes_are_cyclic() {
    let fan = banchoff_fan();
    for n in 2..=3 {
        for (r, flags) in enumerate_reps(&fan, n, true).unwrap() {
            assert!(!flags.locally_cyclic || flags.cyclic, "{}", r.describe());
        }
    }
}
