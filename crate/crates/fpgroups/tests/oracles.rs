//! Group invariants checked against computations that share no code with the
//! library: determinantal divisors, brute-force homomorphism search and
//! explicit matrix groups.

use std::collections::HashSet;

use fpgroups::{
    abelianization, hom_count, match_sieradski, sieradski, smith_diagonal, tietze_simplify, todd_coxeter,
    AbelianInvariants, CosetResult, Presentation, Word, DEFAULT_MAX_COSETS,
};
use num_bigint::BigInt;

fn trefoil() -> Presentation {
    Presentation::parse("group trefoil\ngen m c\nrel m c m c^-1 m c^-1\n").unwrap()
}

fn exponent_rows(p: &Presentation) -> Vec<Vec<i64>> {
    p.relators.iter().map(|r| (0..p.num_generators()).map(|g| r.exponent_sum(g)).collect()).collect()
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Invariant factors from d_k = gcd of k×k minors; free part as zeros.
fn determinantal_invariants(m: &[Vec<i64>], cols: usize) -> Vec<i64> {
    let rows = m.len();
    let mut d = vec![1i64];
    for k in 1..=rows.min(cols) {
        let mut g = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        d.push(g);
    }
    let rank = d.len() - 1;
    let mut out: Vec<i64> = (1..=rank).map(|k| d[k] / d[k - 1]).filter(|&x| x != 1).collect();
    out.extend(std::iter::repeat_n(0, cols - rank));
    out
}

fn invariants(x: &[i64]) -> AbelianInvariants {
    AbelianInvariants::from_u64(&x.iter().map(|&v| v as u64).collect::<Vec<_>>())
}

#[test]
fn abelianization_matches_determinantal_divisors() {
    let mut corpus = vec![trefoil()];
    corpus.extend((2..=7).map(|n| sieradski(n).unwrap()));
    for p in &corpus {
        let want = determinantal_invariants(&exponent_rows(p), p.num_generators());
        assert_eq!(abelianization(p), invariants(&want), "{}", p.name);
    }
}

#[test]
fn sieradski_six_has_rank_two() {
    let p = sieradski(6).unwrap();
    assert_eq!(determinantal_invariants(&exponent_rows(&p), 6), vec![0, 0]);
    assert_eq!(abelianization(&p), AbelianInvariants::from_u64(&[0, 0]));
}

type Perm = Vec<usize>;

fn all_perms(k: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut p: Perm = (0..k).collect();
    fn heap(n: usize, p: &mut Perm, out: &mut Vec<Perm>) {
        if n <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..n - 1 {
            heap(n - 1, p, out);
            if n.is_multiple_of(2) {
                p.swap(i, n - 1);
            } else {
                p.swap(0, n - 1);
            }
        }
        heap(n - 1, p, out);
    }
    heap(k, &mut p, &mut out);
    out
}

fn eval(w: &Word, images: &[Perm], k: usize) -> Perm {
    let mut pt: Perm = (0..k).collect();
    for l in w.iter() {
        let g = &images[l.gen];
        pt = if l.inverse {
            let mut inv = vec![0; k];
            for (i, &j) in g.iter().enumerate() {
                inv[j] = i;
            }
            pt.iter().map(|&i| inv[i]).collect()
        } else {
            pt.iter().map(|&i| g[i]).collect()
        };
    }
    pt
}

fn brute_homs(p: &Presentation, k: usize) -> u64 {
    let perms = all_perms(k);
    let n = p.num_generators();
    let id: Perm = (0..k).collect();
    let mut idx = vec![0usize; n];
    let mut count = 0;
    loop {
        let images: Vec<Perm> = idx.iter().map(|&i| perms[i].clone()).collect();
        if p.relators.iter().all(|r| eval(r, &images, k) == id) {
            count += 1;
        }
        let mut i = 0;
        while i < n {
            idx[i] += 1;
            if idx[i] < perms.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == n {
            return count;
        }
    }
}

#[test]
fn trefoil_hom_counts() {
    let t = trefoil();
    for (k, want) in [(1, 1), (2, 2), (3, 12), (4, 96)] {
        assert_eq!(brute_homs(&t, k), want);
        assert_eq!(hom_count(&t, k).unwrap(), want);
        assert_eq!(hom_count(&tietze_simplify(&t), k).unwrap(), want);
    }
}

#[test]
fn sieradski_hom_counts_agree_with_search() {
    for n in 2..=4 {
        let p = sieradski(n).unwrap();
        for k in 2..=3 {
            assert_eq!(hom_count(&p, k).unwrap(), brute_homs(&p, k), "S({n}) into S{k}");
        }
    }
}

type Mat = [[u32; 2]; 2];

fn mat_mul(a: &Mat, b: &Mat, q: u32) -> Mat {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % q;
        }
    }
    c
}

fn mat_inv(a: &Mat, q: u32) -> Mat {
    // det = 1
    [[a[1][1], (q - a[0][1]) % q], [(q - a[1][0]) % q, a[0][0]]]
}

fn sl2(q: u32) -> Vec<Mat> {
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if (a * d + q * q - b * c) % q == 1 {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    out
}

fn generated_order(gens: &[Mat], q: u32) -> usize {
    let id = [[1, 0], [0, 1]];
    let mut seen: HashSet<Mat> = HashSet::from([id]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = mat_mul(&x, g, q);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len()
}

/// Largest image of S(n) in SL(2, q): g_{i+1} = g_{i-1}⁻¹ g_i determines every
/// generator from the first two, and the cycle must close.
fn largest_image(n: usize, q: u32) -> usize {
    let group = sl2(q);
    let mut best = 1;
    for a in &group {
        for b in &group {
            let mut g = vec![*a, *b];
            for i in 2..n + 2 {
                let next = mat_mul(&mat_inv(&g[i - 2], q), &g[i - 1], q);
                g.push(next);
            }
            if g[n] == g[0] && g[n + 1] == g[1] {
                best = best.max(generated_order(&g[..n], q));
            }
        }
    }
    best
}

#[test]
fn sieradski_orders() {
    // S(2) = Z3, S(3) = Q8 and S(4) = SL(2,3) embed in SL(2,3); S(5) = SL(2,5)
    for (n, q, want) in [(2, 3, 3), (3, 3, 8), (4, 3, 24), (5, 5, 120)] {
        assert_eq!(largest_image(n, q), want as usize, "image of S({n}) in SL(2,{q})");
        let p = sieradski(n).unwrap();
        assert_eq!(todd_coxeter(&p, DEFAULT_MAX_COSETS), CosetResult::Finite(want));
        assert_eq!(todd_coxeter(&tietze_simplify(&p), DEFAULT_MAX_COSETS), CosetResult::Finite(want));
    }
}

#[test]
fn sieradski_six_exceeds_bound() {
    let p = sieradski(6).unwrap();
    assert!(matches!(todd_coxeter(&tietze_simplify(&p), DEFAULT_MAX_COSETS), CosetResult::Exceeded(_)));
}

#[test]
fn sieradski_match_examples() {
    assert_eq!(match_sieradski(&sieradski(5).unwrap()), Some(5));
    assert_eq!(match_sieradski(&trefoil()), None);
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k] == BigInt::from(0) {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != BigInt::from(0)) else { return BigInt::from(0) };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[test]
fn smith_form_of_large_entries() {
    // 64×64 with entries up to 2^40, generated by a fixed LCG
    let n = 64;
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 20) % (1 << 41)) as i64 - (1 << 40)
    };
    let m: Vec<Vec<BigInt>> = (0..n).map(|_| (0..n).map(|_| BigInt::from(next())).collect()).collect();
    let diag = smith_diagonal(m.clone(), n);
    let prod: BigInt = diag.iter().product();
    let det = bareiss_det(m);
    assert_eq!(prod, if det < BigInt::from(0) { -det } else { det });
    for w in diag.windows(2) {
        assert!(w[0] == BigInt::from(0) && w[1] == BigInt::from(0) || w[1].clone() % &w[0] == BigInt::from(0));
    }
}
