//! Random graphs, formulas and substitutions for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::Formula;
use crate::graph::{Graph, Item, Subst};

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

/// A random canonical graph over `atoms` with depth at most `depth` and at
/// most `width` items per area.
pub fn graph<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], depth: usize, width: usize) -> Graph {
    let n = rng.gen_range(0..=width);
    Graph::new((0..n).map(|_| item(rng, atoms, depth, width)).collect())
}

/// Like [`graph`] but never empty.
pub fn nonempty_graph<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], depth: usize, width: usize) -> Graph {
    let n = rng.gen_range(1..=width.max(1));
    Graph::new((0..n).map(|_| item(rng, atoms, depth, width)).collect())
}

pub fn item<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], depth: usize, width: usize) -> Item {
    if depth <= 1 || rng.gen_bool(0.4) {
        return Item::atom(*atoms.choose(rng).expect("some atom"));
    }
    let sub = |rng: &mut R| graph(rng, atoms, depth - 1, width.min(2));
    match rng.gen_range(0..3) {
        0 => Item::cut(sub(rng)),
        1 => {
            let a = sub(rng);
            Item::scroll(a, sub(rng))
        }
        _ => {
            let a = sub(rng);
            Item::disj(a, sub(rng))
        }
    }
}

pub fn formula<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::atom(*atoms.choose(rng).expect("some atom")),
        };
    }
    let a = formula(rng, atoms, depth - 1);
    let b = formula(rng, atoms, depth - 1);
    match rng.gen_range(0..3) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        _ => Formula::imp(a, b),
    }
}

/// Maps each of `atoms` to a small graph with probability one half.
pub fn subst<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str]) -> Subst {
    let mut sigma = Subst::new();
    for a in atoms {
        if rng.gen_bool(0.5) {
            sigma.insert(a.to_string(), graph(rng, atoms, 2, 2));
        }
    }
    sigma
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn graphs_respect_their_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let g = graph(&mut rng, &ATOMS, 3, 3);
            assert!(g.is_canonical());
            assert!(g.measure().depth <= 3);
            assert!(g.atoms().len() <= 3);
        }
    }

    #[test]
    fn formulas_respect_their_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            assert!(formula(&mut rng, &ATOMS[..2], 3).depth() <= 3);
        }
    }
}
