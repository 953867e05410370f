//! Independent oracles for small-scale equivalence over the atom `p1`.
//!
//! Formulas are grouped by their truth vector over every bisimulation type
//! of a world of height at most three. Both the shaped-model search and the
//! naive enumeration only ever look at such worlds, so formulas with equal
//! vectors get equal answers from both, and one representative per class
//! suffices.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use glkr::frame_limit::{search_counter_model, FrameConfig};
use glkr::kripke::{truth_set, KripkeFrame, KripkeModel, Valuation};
use glkr::{Formula, Vocabulary};

pub const MAX_NODES: usize = 9;
pub const MAX_DEPTH: usize = 2;
pub const MAX_WORLDS: usize = 6;

const WORDS: usize = 4;
type Vector = [u64; WORDS];

/// Worlds of height at most three over `p1`, up to bisimulation.
pub struct TypeSpace {
    types: Vec<(bool, Vec<usize>)>,
    index: HashMap<(bool, Vec<usize>), usize>,
    full: Vector,
}

impl TypeSpace {
    pub fn new() -> TypeSpace {
        let mut types: Vec<(bool, Vec<usize>)> = vec![(true, vec![]), (false, vec![])];
        let tops = |mask: usize| (0..2).filter(move |i| mask >> i & 1 == 1);
        for v in [true, false] {
            for s in 1..4usize {
                types.push((v, tops(s).collect()));
            }
        }
        let middles: Vec<usize> = (2..types.len()).collect();
        for v in [true, false] {
            for x in 1..1usize << middles.len() {
                let chosen: Vec<usize> = (0..middles.len())
                    .filter(|i| x >> i & 1 == 1)
                    .map(|i| middles[i])
                    .collect();
                let below: usize = chosen
                    .iter()
                    .flat_map(|&m| types[m].1.iter())
                    .fold(0, |acc, &t| acc | 1 << t);
                for y in 0..4usize {
                    if y & below != below {
                        continue;
                    }
                    let mut succ: Vec<usize> = tops(y).chain(chosen.iter().copied()).collect();
                    succ.sort_unstable();
                    types.push((v, succ));
                }
            }
        }
        assert!(types.len() <= WORDS * 64);
        let index = types.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut full = [0; WORDS];
        for i in 0..types.len() {
            full[i / 64] |= 1 << (i % 64);
        }
        TypeSpace { types, index, full }
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    fn get(v: &Vector, i: usize) -> bool {
        v[i / 64] >> (i % 64) & 1 == 1
    }

    fn vector_where(&self, mut p: impl FnMut(usize) -> bool) -> Vector {
        let mut out = [0; WORDS];
        for i in 0..self.types.len() {
            if p(i) {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    fn not(&self, a: &Vector) -> Vector {
        std::array::from_fn(|k| !a[k] & self.full[k])
    }

    fn boxed(&self, a: &Vector) -> Vector {
        self.vector_where(|i| self.types[i].1.iter().all(|&s| Self::get(a, s)))
    }

    fn diamond(&self, a: &Vector) -> Vector {
        self.vector_where(|i| self.types[i].1.iter().any(|&s| Self::get(a, s)))
    }

    /// Truth vector by direct recursion on the formula.
    pub fn eval(&self, f: &Formula) -> Vector {
        match f {
            Formula::Atom(1) => self.vector_where(|i| self.types[i].0),
            Formula::Atom(a) => panic!("unexpected atom p{a}"),
            Formula::Top => self.full,
            Formula::Bottom => [0; WORDS],
            Formula::Not(a) => self.not(&self.eval(a)),
            Formula::And(a, b) => {
                let (a, b) = (self.eval(a), self.eval(b));
                std::array::from_fn(|k| a[k] & b[k])
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.eval(a), self.eval(b));
                std::array::from_fn(|k| a[k] | b[k])
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.eval(a), self.eval(b));
                std::array::from_fn(|k| (!a[k] | b[k]) & self.full[k])
            }
            Formula::Box(a) => self.boxed(&self.eval(a)),
            Formula::Diamond(a) => self.diamond(&self.eval(a)),
        }
    }

    /// The type of world `w` in a finite model given by successor lists.
    fn type_of(&self, succ: &[Vec<usize>], val: &[bool], w: usize) -> usize {
        let mut below: Vec<usize> = succ[w].iter().map(|&s| self.type_of(succ, val, s)).collect();
        below.sort_unstable();
        below.dedup();
        *self
            .index
            .get(&(val[w], below))
            .expect("shaped worlds have height at most three")
    }
}

/// One formula per truth vector, over all formulas of `p1` within the node
/// and depth limits.
pub fn formula_classes(space: &TypeSpace) -> Vec<(Vector, Formula)> {
    // by_size[s][d]: vectors of formulas with exactly s nodes and depth <= d.
    let mut by_size: Vec<Vec<HashMap<Vector, Formula>>> = vec![vec![HashMap::new(); MAX_DEPTH + 1]; MAX_NODES + 1];
    for level in by_size[1].iter_mut() {
        for f in [Formula::atom(1), Formula::Top, Formula::Bottom] {
            level.insert(space.eval(&f), f);
        }
    }
    for s in 2..=MAX_NODES {
        for d in 0..=MAX_DEPTH {
            let mut out: HashMap<Vector, Formula> = HashMap::new();
            for (v, f) in &by_size[s - 1][d] {
                out.entry(space.not(v)).or_insert_with(|| Formula::not(f.clone()));
            }
            if d > 0 {
                for (v, f) in &by_size[s - 1][d - 1] {
                    out.entry(space.boxed(v)).or_insert_with(|| Formula::boxed(f.clone()));
                    out.entry(space.diamond(v))
                        .or_insert_with(|| Formula::diamond(f.clone()));
                }
            }
            for i in 1..s - 1 {
                for (a, fa) in &by_size[i][d] {
                    for (b, fb) in &by_size[s - 1 - i][d] {
                        let and: Vector = std::array::from_fn(|k| a[k] & b[k]);
                        let or: Vector = std::array::from_fn(|k| a[k] | b[k]);
                        let imp: Vector = std::array::from_fn(|k| (!a[k] | b[k]) & space.full[k]);
                        out.entry(and).or_insert_with(|| Formula::and(fa.clone(), fb.clone()));
                        out.entry(or).or_insert_with(|| Formula::or(fa.clone(), fb.clone()));
                        out.entry(imp)
                            .or_insert_with(|| Formula::implies(fa.clone(), fb.clone()));
                    }
                }
            }
            by_size[s][d] = out;
        }
    }
    let mut seen: HashMap<Vector, Formula> = HashMap::new();
    for level in &by_size[1..] {
        let mut entries: Vec<(&Vector, &Formula)> = level[MAX_DEPTH].iter().collect();
        entries.sort_by(|x, y| x.1.cmp(y.1));
        for (v, f) in entries {
            seen.entry(*v).or_insert_with(|| f.clone());
        }
    }
    let mut out: Vec<(Vector, Formula)> = seen.into_iter().collect();
    out.sort_by(|x, y| x.1.len().cmp(&y.1.len()).then_with(|| x.1.cmp(&y.1)));
    out
}

/// Every formula of `p1` with at most `nodes` nodes and depth within the
/// limit, listed explicitly.
pub fn all_formulas(nodes: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![vec![]; nodes + 1];
    by_size[1] = vec![Formula::atom(1), Formula::Top, Formula::Bottom];
    for s in 2..=nodes {
        let mut out = Vec::new();
        for f in &by_size[s - 1] {
            out.push(Formula::not(f.clone()));
            if f.modal_depth() < MAX_DEPTH {
                out.push(Formula::boxed(f.clone()));
                out.push(Formula::diamond(f.clone()));
            }
        }
        for i in 1..s - 1 {
            for a in &by_size[i] {
                for b in &by_size[s - 1 - i] {
                    out.push(Formula::and(a.clone(), b.clone()));
                    out.push(Formula::or(a.clone(), b.clone()));
                    out.push(Formula::implies(a.clone(), b.clone()));
                }
            }
        }
        by_size[s] = out;
    }
    by_size.into_iter().flatten().collect()
}

/// A uniformly shaped random formula with exactly `nodes` nodes.
pub fn random_formula(rng: &mut ChaCha8Rng, nodes: usize, depth: usize) -> Formula {
    if nodes == 1 {
        return [Formula::atom(1), Formula::Top, Formula::Bottom][rng.gen_range(0..3)].clone();
    }
    let unary = rng.gen_bool(0.4) || nodes == 2;
    if unary {
        match (rng.gen_range(0..3), depth) {
            (0, _) | (_, 0) => Formula::not(random_formula(rng, nodes - 1, depth)),
            (1, _) => Formula::boxed(random_formula(rng, nodes - 1, depth - 1)),
            _ => Formula::diamond(random_formula(rng, nodes - 1, depth - 1)),
        }
    } else {
        let left = rng.gen_range(1..nodes - 1);
        let a = random_formula(rng, left, depth);
        let b = random_formula(rng, nodes - 1 - left, depth);
        match rng.gen_range(0..3) {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            _ => Formula::implies(a, b),
        }
    }
}

/// A finite strict partial order as successor lists (0-based, transitive).
#[derive(Clone, Debug)]
pub struct Poset {
    pub succ: Vec<Vec<usize>>,
}

fn relation_bits(n: usize, rel: &[u8], perm: &[usize]) -> u64 {
    let mut bits = 0u64;
    for i in 0..n {
        for j in 0..n {
            if rel[i] >> j & 1 == 1 {
                bits |= 1 << (perm[i] * n + perm[j]);
            }
        }
    }
    bits
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// All strict partial orders on `n` worlds, one per isomorphism class.
/// Every poset has a linear extension, so relations contained in `<` cover
/// every class.
pub fn posets(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let mut rel = vec![0u8; n];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                rel[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|i| (0..n).filter(|&j| rel[i] >> j & 1 == 1).all(|j| rel[j] & !rel[i] == 0));
        if !transitive {
            continue;
        }
        let key = perms.iter().map(|p| relation_bits(n, &rel, p)).min().unwrap();
        if seen.insert(key) {
            let succ = (0..n)
                .map(|i| (0..n).filter(|&j| rel[i] >> j & 1 == 1).collect())
                .collect();
            out.push(Poset { succ });
        }
    }
    out
}

/// The shaped-model conditions, restated directly: the point sees every
/// other world; non-point worlds with successors are middles seeing only
/// tops; with middles present, some top is seen by every middle and some
/// middle sees every top.
pub fn naive_shaped(p: &Poset, point: usize) -> bool {
    let n = p.succ.len();
    if p.succ[point].len() != n - 1 {
        return false;
    }
    let others: Vec<usize> = (0..n).filter(|&w| w != point).collect();
    let tops: Vec<usize> = others.iter().copied().filter(|&w| p.succ[w].is_empty()).collect();
    let middles: Vec<usize> = others.iter().copied().filter(|&w| !p.succ[w].is_empty()).collect();
    if !middles.iter().all(|&m| p.succ[m].iter().all(|s| tops.contains(s))) {
        return false;
    }
    if middles.is_empty() {
        return true;
    }
    let umbrella = tops.iter().any(|t| middles.iter().all(|&m| p.succ[m].contains(t)));
    let full = middles.iter().any(|&m| p.succ[m].len() == tops.len());
    umbrella && full
}

/// Types of the points of all shaped pointed models with at most
/// `MAX_WORLDS` worlds, found by enumerating them.
pub fn naive_root_types(space: &TypeSpace, all_posets: &[(usize, Vec<Poset>)]) -> (Vec<usize>, usize) {
    let mut roots = std::collections::BTreeSet::new();
    let mut models = 0;
    for (n, ps) in all_posets {
        for p in ps {
            for point in 0..*n {
                if !naive_shaped(p, point) {
                    continue;
                }
                for bits in 0u32..1 << n {
                    let val: Vec<bool> = (0..*n).map(|w| bits >> w & 1 == 1).collect();
                    roots.insert(space.type_of(&p.succ, &val, point));
                    models += 1;
                }
            }
        }
    }
    (roots.into_iter().collect(), models)
}

fn brute(p: &Poset, val: &[bool], w: usize, f: &Formula) -> bool {
    match f {
        Formula::Atom(_) => val[w],
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Not(a) => !brute(p, val, w, a),
        Formula::And(a, b) => brute(p, val, w, a) && brute(p, val, w, b),
        Formula::Or(a, b) => brute(p, val, w, a) || brute(p, val, w, b),
        Formula::Implies(a, b) => !brute(p, val, w, a) || brute(p, val, w, b),
        Formula::Box(a) => p.succ[w].iter().all(|&s| brute(p, val, s, a)),
        Formula::Diamond(a) => p.succ[w].iter().any(|&s| brute(p, val, s, a)),
    }
}

pub struct Report {
    pub classes: usize,
    pub types: usize,
    pub naive_models: usize,
    pub search_mismatches: Vec<String>,
    pub direct_checked: usize,
    pub check_models: usize,
    pub check_formulas: usize,
    pub check_mismatches: Vec<String>,
}

pub fn run() -> Report {
    let space = TypeSpace::new();
    let vocab = Vocabulary::first(1).unwrap();
    let budget = FrameConfig::default().budget;
    let all_posets: Vec<(usize, Vec<Poset>)> = (1..=MAX_WORLDS).map(|n| (n, posets(n))).collect();
    // Unlabeled poset counts (OEIS A000112).
    let counts: Vec<usize> = all_posets.iter().map(|(_, ps)| ps.len()).collect();
    assert_eq!(counts, [1, 2, 5, 16, 63, 318][..MAX_WORLDS]);
    let (roots, naive_models) = naive_root_types(&space, &all_posets);
    let naive_refutes = |v: &Vector| roots.iter().any(|&r| !TypeSpace::get(v, r));
    let search_refutes = |f: &Formula| {
        search_counter_model(f, &vocab, budget)
            .expect("search within budget")
            .is_some()
    };

    let classes = formula_classes(&space);
    let mut search_mismatches: Vec<String> = classes
        .par_iter()
        .filter(|(v, f)| naive_refutes(v) != search_refutes(f))
        .map(|(v, f)| format!("{f} (naive refutes: {})", naive_refutes(v)))
        .collect();

    // Outside the class argument: every formula up to five nodes, and random
    // larger ones, compared directly.
    let mut direct = all_formulas(5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..2000 {
        let nodes = rng.gen_range(6..=MAX_NODES);
        direct.push(random_formula(&mut rng, nodes, MAX_DEPTH));
    }
    search_mismatches.extend(
        direct
            .par_iter()
            .filter(|f| naive_refutes(&space.eval(f)) != search_refutes(f))
            .map(|f| format!("{f} (direct)"))
            .collect::<Vec<_>>(),
    );

    let mut check_formulas: Vec<Formula> = classes.iter().map(|(_, f)| f.clone()).collect();
    check_formulas.extend(all_formulas(4));
    let mut check_models = 0;
    let mut check_mismatches = Vec::new();
    for (n, ps) in &all_posets {
        check_models += ps.len() << n;
        let found: Vec<String> = ps
            .par_iter()
            .flat_map_iter(|p| (0u32..1 << n).map(move |bits| (p, bits)))
            .filter_map(|(p, bits)| {
                let val: Vec<bool> = (0..*n).map(|w| bits >> w & 1 == 1).collect();
                let edges: Vec<(usize, usize)> = (0..*n)
                    .flat_map(|i| p.succ[i].iter().map(move |&j| (i + 1, j + 1)))
                    .collect();
                let frame = KripkeFrame::new(*n, &edges).expect("posets are strict orders");
                let mut valuation = Valuation::all_false(*n, vocab.clone());
                for (w, &v) in val.iter().enumerate() {
                    valuation.set(w + 1, 1, v).unwrap();
                }
                let model = KripkeModel::new(frame, valuation).unwrap();
                check_formulas.iter().find_map(|f| {
                    let t = truth_set(&model, f).unwrap();
                    (0..*n)
                        .find(|&w| t.contains(w + 1) != brute(p, &val, w, f))
                        .map(|w| format!("{f} at world {} of {:?} with p1 = {val:?}", w + 1, p.succ))
                })
            })
            .collect();
        check_mismatches.extend(found);
    }

    Report {
        classes: classes.len(),
        types: space.len(),
        naive_models,
        search_mismatches,
        direct_checked: direct.len(),
        check_models,
        check_formulas: check_formulas.len(),
        check_mismatches,
    }
}
