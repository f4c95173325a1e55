//! Finite Kripke models and bounded countermodel search.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::Formula;

/// Up to this many worlds the search walks every rooted partial order (up
/// to isomorphism) and every persistent valuation. Larger bounds add a
/// seeded random sample.
pub const EXHAUSTIVE_WORLDS: usize = 6;

const MAX_WORLDS: usize = 64;
const RANDOM_TRIES: usize = 20_000;
const SEED: u64 = 0x6b72_6970_6b65;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("a model needs between 1 and {MAX_WORLDS} worlds, got {0}")]
    WorldCount(usize),
    #[error("world {0} does not exist")]
    NoSuchWorld(usize),
    #[error("order is not antisymmetric: {0} <= {1} <= {0}")]
    NotAntisymmetric(usize, usize),
    #[error("valuation is not persistent: {atom} holds at {from} but not at {to}")]
    NotPersistent { atom: String, from: usize, to: usize },
}

/// Worlds are `0..n`; world 0 need not be a root, though search results
/// always have one there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    n: usize,
    /// `up[w]` has bit `v` set iff `w <= v`.
    up: Vec<u64>,
    valuation: Vec<BTreeSet<String>>,
}

impl KripkeModel {
    /// `order` lists pairs `(w, v)` with `w <= v`; the reflexive-transitive
    /// closure is taken before validation.
    pub fn new(
        worlds: usize,
        order: &[(usize, usize)],
        valuation: Vec<BTreeSet<String>>,
    ) -> Result<KripkeModel, KripkeError> {
        if worlds == 0 || worlds > MAX_WORLDS {
            return Err(KripkeError::WorldCount(worlds));
        }
        if valuation.len() != worlds {
            return Err(KripkeError::NoSuchWorld(valuation.len().min(worlds)));
        }
        let mut up: Vec<u64> = (0..worlds).map(|w| 1u64 << w).collect();
        for &(w, v) in order {
            for x in [w, v] {
                if x >= worlds {
                    return Err(KripkeError::NoSuchWorld(x));
                }
            }
            up[w] |= 1 << v;
        }
        loop {
            let mut changed = false;
            for w in 0..worlds {
                let mut reach = up[w];
                for v in 0..worlds {
                    if up[w] >> v & 1 == 1 {
                        reach |= up[v];
                    }
                }
                if reach != up[w] {
                    up[w] = reach;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let m = KripkeModel { n: worlds, up, valuation };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), KripkeError> {
        for w in 0..self.n {
            for v in 0..self.n {
                if w != v && self.le(w, v) && self.le(v, w) {
                    return Err(KripkeError::NotAntisymmetric(w, v));
                }
                if self.le(w, v) {
                    if let Some(atom) = self.valuation[w].difference(&self.valuation[v]).next() {
                        return Err(KripkeError::NotPersistent {
                            atom: atom.clone(),
                            from: w,
                            to: v,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn worlds(&self) -> usize {
        self.n
    }

    pub fn le(&self, w: usize, v: usize) -> bool {
        self.up[w] >> v & 1 == 1
    }

    pub fn forced_atoms(&self, w: usize) -> &BTreeSet<String> {
        &self.valuation[w]
    }

    /// Bitmask of the worlds forcing `f`.
    fn forcing(&self, f: &Formula) -> u64 {
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        match f {
            Formula::Atom(x) => (0..self.n)
                .filter(|&w| self.valuation[w].contains(x))
                .fold(0, |m, w| m | 1 << w),
            Formula::Top => all,
            Formula::Bot => 0,
            Formula::And(a, b) => self.forcing(a) & self.forcing(b),
            Formula::Or(a, b) => self.forcing(a) | self.forcing(b),
            Formula::Imp(a, b) => {
                let (fa, fb) = (self.forcing(a), self.forcing(b));
                (0..self.n)
                    .filter(|&w| self.up[w] & fa & !fb == 0)
                    .fold(0, |m, w| m | 1 << w)
            }
        }
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "worlds: {}", (0..self.n).map(|w| format!("w{w}")).collect::<Vec<_>>().join(" "))?;
        let pairs: Vec<String> = (0..self.n)
            .flat_map(|w| (0..self.n).map(move |v| (w, v)))
            .filter(|&(w, v)| w != v && self.le(w, v))
            .map(|(w, v)| format!("w{w}<=w{v}"))
            .collect();
        writeln!(f, "order: {}", if pairs.is_empty() { "-".to_string() } else { pairs.join(" ") })?;
        for w in 0..self.n {
            let atoms: Vec<&str> = self.valuation[w].iter().map(String::as_str).collect();
            let shown = if atoms.is_empty() { "-".to_string() } else { atoms.join(" ") };
            if w + 1 == self.n {
                write!(f, "w{w} forces: {shown}")?;
            } else {
                writeln!(f, "w{w} forces: {shown}")?;
            }
        }
        Ok(())
    }
}

/// Forcing relation at `w`.
pub fn eval_kripke(m: &KripkeModel, w: usize, f: &Formula) -> Result<bool, KripkeError> {
    if w >= m.n {
        return Err(KripkeError::NoSuchWorld(w));
    }
    m.validate()?;
    Ok(m.forcing(f) >> w & 1 == 1)
}

/// A rooted model with at most `max_worlds` worlds whose root (world 0)
/// does not force `f`, smallest first.
pub fn kripke_countermodel(f: &Formula, max_worlds: usize) -> Option<KripkeModel> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    for n in 1..=max_worlds.min(EXHAUSTIVE_WORLDS) {
        for up in &rooted_posets()[n] {
            let upsets = upsets(up);
            let mut choice = vec![0usize; atoms.len()];
            loop {
                let m = build(up, &atoms, &choice, &upsets);
                if m.forcing(f) & 1 == 0 {
                    debug_assert_eq!(eval_kripke(&m, 0, f), Ok(false));
                    return Some(m);
                }
                if !next_choice(&mut choice, upsets.len()) {
                    break;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n in EXHAUSTIVE_WORLDS + 1..=max_worlds.min(MAX_WORLDS) {
        for _ in 0..RANDOM_TRIES {
            let up = random_rooted_poset(n, &mut rng);
            let masks: Vec<u64> = atoms
                .iter()
                .map(|_| {
                    let seed: u64 = rng.gen::<u64>() & low_bits(n);
                    up_close(&up, seed)
                })
                .collect();
            let m = from_masks(&up, &atoms, &masks);
            if m.forcing(f) & 1 == 0 {
                return Some(m);
            }
        }
    }
    None
}

fn low_bits(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn next_choice(choice: &mut [usize], base: usize) -> bool {
    for c in choice.iter_mut() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

fn build(up: &[u64], atoms: &[String], choice: &[usize], upsets: &[u64]) -> KripkeModel {
    let masks: Vec<u64> = choice.iter().map(|&c| upsets[c]).collect();
    from_masks(up, atoms, &masks)
}

fn from_masks(up: &[u64], atoms: &[String], masks: &[u64]) -> KripkeModel {
    let n = up.len();
    let valuation = (0..n)
        .map(|w| {
            atoms
                .iter()
                .zip(masks)
                .filter(|(_, &m)| m >> w & 1 == 1)
                .map(|(a, _)| a.clone())
                .collect()
        })
        .collect();
    KripkeModel {
        n,
        up: up.to_vec(),
        valuation,
    }
}

fn upsets(up: &[u64]) -> Vec<u64> {
    let n = up.len();
    (0..1u64 << n)
        .filter(|&s| (0..n).all(|w| s >> w & 1 == 0 || up[w] & !s == 0))
        .collect()
}

fn up_close(up: &[u64], seed: u64) -> u64 {
    (0..up.len())
        .filter(|&w| seed >> w & 1 == 1)
        .fold(0, |m, w| m | up[w])
}

/// `rooted_posets()[n]` lists one up-set table per isomorphism class of
/// partial orders on `n` worlds with least element 0.
fn rooted_posets() -> &'static Vec<Vec<Vec<u64>>> {
    static CACHE: OnceLock<Vec<Vec<Vec<u64>>>> = OnceLock::new();
    CACHE.get_or_init(|| (0..=EXHAUSTIVE_WORLDS).map(posets_with_root).collect())
}

fn posets_with_root(n: usize) -> Vec<Vec<u64>> {
    if n == 0 {
        return Vec::new();
    }
    let m = n - 1;
    // Every poset has a linear extension, so it suffices to relate i < j.
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let perms = permutations(m);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for rel in 0u64..1 << pairs.len() {
        let mut le = vec![0u64; m];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if rel >> k & 1 == 1 {
                le[i] |= 1 << j;
            }
        }
        let transitive = (0..m).all(|i| (0..m).all(|j| le[i] >> j & 1 == 0 || le[j] & !le[i] == 0));
        if !transitive {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut code = 0u64;
                for i in 0..m {
                    for j in 0..m {
                        if le[i] >> j & 1 == 1 {
                            code |= 1 << (p[i] * m + p[j]);
                        }
                    }
                }
                code
            })
            .min()
            .unwrap_or(0);
        if seen.insert(canon) {
            // shift the non-root worlds up by one and add the root
            let mut up = vec![low_bits(n)];
            up.extend(le.iter().enumerate().map(|(i, &l)| (l << 1) | 1 << (i + 1)));
            out.push(up);
        }
    }
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, m - 1);
            out.push(q);
        }
    }
    out
}

fn random_rooted_poset(n: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut up: Vec<u64> = (0..n).map(|w| 1u64 << w).collect();
    for (i, mask) in up.iter_mut().enumerate().skip(1) {
        for j in i + 1..n {
            if rng.gen_bool(0.3) {
                *mask |= 1 << j;
            }
        }
    }
    for i in (1..n).rev() {
        for j in i + 1..n {
            if up[i] >> j & 1 == 1 {
                up[i] |= up[j];
            }
        }
    }
    up[0] = low_bits(n);
    up
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::semantics::eval_classical;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn set(atoms: &[&str]) -> BTreeSet<String> {
        atoms.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn poset_counts_match_known_sequence() {
        // rooted posets on n points = posets on n - 1 points
        let counts: Vec<usize> = rooted_posets().iter().map(Vec::len).collect();
        assert_eq!(counts, vec![0, 1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn double_negation_needs_two_worlds() {
        let m = kripke_countermodel(&f("~~p -> p"), 2).unwrap();
        assert_eq!(m.worlds(), 2);
        assert!(m.forced_atoms(0).is_empty());
        assert_eq!(eval_kripke(&m, 0, &f("p")), Ok(false));
        assert_eq!(eval_kripke(&m, 0, &f("~p")), Ok(false));
        assert!(kripke_countermodel(&f("~~p -> p"), 1).is_none());
    }

    #[test]
    fn theorems_have_no_countermodel() {
        assert!(kripke_countermodel(&f("p -> p"), 5).is_none());
        assert!(kripke_countermodel(&f("~(p & q) -> p -> ~q"), 5).is_none());
    }

    #[test]
    fn excluded_middle_and_peirce() {
        assert_eq!(kripke_countermodel(&f("p v ~p"), 2).unwrap().worlds(), 2);
        assert!(kripke_countermodel(&f("((p -> q) -> p) -> p"), 3).is_some());
    }

    #[test]
    fn one_world_is_classical() {
        for atoms in [set(&[]), set(&["p"]), set(&["p", "q"])] {
            let m = KripkeModel::new(1, &[], vec![atoms.clone()]).unwrap();
            for s in ["p -> q", "~~p -> p", "p v ~q", "(p -> q) -> p"] {
                let classical = eval_classical(&f(s), &|x| atoms.contains(x));
                assert_eq!(eval_kripke(&m, 0, &f(s)), Ok(classical));
            }
        }
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert_eq!(
            KripkeModel::new(2, &[(0, 1), (1, 0)], vec![set(&[]), set(&[])]),
            Err(KripkeError::NotAntisymmetric(0, 1))
        );
        assert!(matches!(
            KripkeModel::new(2, &[(0, 1)], vec![set(&["p"]), set(&[])]),
            Err(KripkeError::NotPersistent { .. })
        ));
        assert_eq!(KripkeModel::new(0, &[], vec![]), Err(KripkeError::WorldCount(0)));
        let m = KripkeModel::new(2, &[(0, 1)], vec![set(&[]), set(&["p"])]).unwrap();
        assert_eq!(eval_kripke(&m, 2, &f("p")), Err(KripkeError::NoSuchWorld(2)));
        assert_eq!(eval_kripke(&m, 0, &f("F")), Ok(false));
        assert_eq!(eval_kripke(&m, 1, &f("F")), Ok(false));
    }

    #[test]
    fn display_lists_order_and_atoms() {
        let m = KripkeModel::new(2, &[(0, 1)], vec![set(&[]), set(&["p"])]).unwrap();
        let text = m.to_string();
        assert!(text.contains("w0<=w1"), "{text}");
        assert!(text.contains("w1 forces: p"), "{text}");
    }

    #[test]
    fn random_fallback_beyond_exhaustive_bound() {
        // no countermodel with <= 6 worlds is needed, but the fallback must still validate
        let m = kripke_countermodel(&f("p"), 8).unwrap();
        assert_eq!(m.worlds(), 1);
        assert!(kripke_countermodel(&f("p -> p"), 8).is_none());
    }
}
