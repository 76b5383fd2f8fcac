//! Presentation simplification by Tietze moves.
//!
//! Only two moves are used: deleting a relator that is a consequence of the
//! others in the trivial way (empty after cyclic reduction, or a duplicate up
//! to rotation and inversion), and eliminating a generator that occurs exactly
//! once in some relator. The output presents a group isomorphic to the input.

use crate::presentation::Presentation;
use crate::word::Word;

/// Longest substitute word accepted when eliminating a generator.
const MAX_SUBSTITUTE_LEN: usize = 32;
/// Relator-length budget relative to the input, guarding against blow-up.
const GROWTH_FACTOR: usize = 4;

pub fn tietze_simplify(p: &Presentation) -> Presentation {
    let mut gens: Vec<String> = p.generators.clone();
    let mut rels: Vec<Word> = normalize(&p.relators);
    let budget = GROWTH_FACTOR * total_len(&rels).max(16);

    loop {
        let Some((ri, gen)) = pick_elimination(&rels, gens.len(), budget) else { break };
        let r = rels.remove(ri);
        let pos = r.iter().position(|l| l.gen == gen).expect("generator occurs");
        let rotated = r.rotate(pos);
        let rest = Word::from_letters(rotated.letters()[1..].iter().copied());
        // x^e · rest = 1  ⇒  x = rest^{-e}
        let image = if rotated.letters()[0].inverse { rest } else { rest.inverse() };
        rels = rels.iter().map(|w| w.substitute(gen, &image)).collect();
        gens.remove(gen);
        rels = rels
            .iter()
            .map(|w| w.map_gens(|g| if g > gen { g - 1 } else { g }))
            .collect();
        rels = normalize(&rels);
    }
    Presentation::new(p.name.clone(), gens, rels)
}

fn total_len(rels: &[Word]) -> usize {
    rels.iter().map(Word::len).sum()
}

fn normalize(rels: &[Word]) -> Vec<Word> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for r in rels {
        let red = r.cyclic_reduce();
        if red.is_empty() {
            continue;
        }
        if seen.insert(red.cyclic_canonical()) {
            out.push(red);
        }
    }
    out
}

/// Chooses (relator index, generator) with the shortest substitute; ties go to the
/// earlier relator, then the lower generator index.
fn pick_elimination(rels: &[Word], ngens: usize, budget: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (ri, r) in rels.iter().enumerate() {
        if r.len() > MAX_SUBSTITUTE_LEN + 1 {
            continue;
        }
        for gen in 0..ngens {
            if r.occurrences(gen) != 1 {
                continue;
            }
            let sub_len = r.len() - 1;
            if best.is_some_and(|(bl, _, _)| bl <= sub_len) {
                continue;
            }
            let growth: usize = rels
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != ri)
                .map(|(_, w)| w.len() + w.occurrences(gen) * sub_len.saturating_sub(1))
                .sum();
            if growth > budget {
                continue;
            }
            best = Some((sub_len, ri, gen));
        }
    }
    best.map(|(_, ri, gen)| (ri, gen))
}
