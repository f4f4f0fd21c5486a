//! Bounded forward proof search and derivation lemma checks.

use std::collections::{HashMap, HashSet};

use super::worms;
use bracket_core::worm::signature;
use bracket_core::{nesting_formula, tau, BracketFormula, BracketWorm, Certificate, Rule, Sequent};

/// ()b, the strict reading of a worm b.
pub fn strict(b: &BracketWorm) -> BracketFormula {
    BracketFormula::diamond(BracketWorm::top(), b.to_formula())
}

pub fn node(
    rule: Rule,
    lhs: BracketFormula,
    rhs: BracketFormula,
    premises: Vec<Certificate>,
    side: Option<Certificate>,
) -> Certificate {
    Certificate::new(rule, Sequent::new(lhs, rhs), premises, side)
}

/// The first node of `c` where nesting depth or the largest signature
/// index grows from left to right.
pub fn lemma_violation(c: &Certificate) -> Option<String> {
    for n in c.nodes() {
        let Sequent { lhs, rhs } = n.conclusion();
        if nesting_formula(lhs) < nesting_formula(rhs) {
            return Some(format!("nesting grows in {lhs} |- {rhs}"));
        }
        let (sl, sr) = (signature(&tau(lhs)), signature(&tau(rhs)));
        if let Some(max_r) = sr.last() {
            match sl.last() {
                Some(max_l) if max_l >= max_r => {}
                _ => return Some(format!("signature grows in {lhs} |- {rhs}")),
            }
        }
    }
    None
}

/// Bounded forward proof search over a subformula-closed candidate set.
pub struct Search {
    universe: HashSet<BracketFormula>,
    /// body φ ↦ labels a with (a)φ in the universe
    over: HashMap<BracketFormula, Vec<BracketWorm>>,
    pub derived: HashMap<Sequent, Certificate>,
}

impl Search {
    pub fn new(seeds: Vec<BracketFormula>) -> Search {
        let mut universe = HashSet::new();
        let mut todo = seeds;
        todo.push(BracketFormula::Top);
        while let Some(x) = todo.pop() {
            if !universe.insert(x.clone()) {
                continue;
            }
            match &x {
                BracketFormula::Conj(l, r) => {
                    todo.push((**l).clone());
                    todo.push((**r).clone());
                }
                BracketFormula::Diamond(a, body) => {
                    todo.push(a.to_formula());
                    todo.push(strict(a));
                    todo.push((**body).clone());
                }
                _ => {}
            }
        }
        let mut over: HashMap<BracketFormula, Vec<BracketWorm>> = HashMap::new();
        for x in &universe {
            if let BracketFormula::Diamond(a, body) = x {
                over.entry((**body).clone()).or_default().push(a.clone());
            }
        }
        let mut s = Search {
            universe,
            over,
            derived: HashMap::new(),
        };
        let all: Vec<_> = s.universe.iter().cloned().collect();
        for x in all {
            s.add(node(Rule::AxId, x.clone(), x.clone(), vec![], None));
            s.add(node(
                Rule::AxTop,
                x.clone(),
                BracketFormula::Top,
                vec![],
                None,
            ));
            if let BracketFormula::Conj(l, r) = &x {
                s.add(node(Rule::AxConjL, x.clone(), (**l).clone(), vec![], None));
                s.add(node(Rule::AxConjR, x.clone(), (**r).clone(), vec![], None));
            }
        }
        s
    }

    fn add(&mut self, c: Certificate) {
        let key = c.conclusion().clone();
        if self.universe.contains(&key.lhs) && self.universe.contains(&key.rhs) {
            self.derived.entry(key).or_insert(c);
        }
    }

    fn side(&self, a: &BracketWorm, b: &BracketWorm, must_be_strict: bool) -> Option<Certificate> {
        let strict_key = Sequent::new(a.to_formula(), strict(b));
        if let Some(c) = self.derived.get(&strict_key) {
            return Some(c.clone());
        }
        if must_be_strict {
            return None;
        }
        self.derived
            .get(&Sequent::new(a.to_formula(), b.to_formula()))
            .cloned()
    }

    pub fn round(&mut self) {
        let snapshot: Vec<Certificate> = self.derived.values().cloned().collect();
        let mut by_lhs: HashMap<&BracketFormula, Vec<&Certificate>> = HashMap::new();
        for c in &snapshot {
            by_lhs.entry(&c.conclusion().lhs).or_default().push(c);
        }
        let mut fresh = Vec::new();
        for p in &snapshot {
            let Sequent { lhs, rhs } = p.conclusion();
            for q in by_lhs.get(rhs).into_iter().flatten() {
                fresh.push(node(
                    Rule::RCut,
                    lhs.clone(),
                    q.conclusion().rhs.clone(),
                    vec![p.clone(), (*q).clone()],
                    None,
                ));
            }
            for q in by_lhs.get(lhs).into_iter().flatten() {
                let both = BracketFormula::conj(rhs.clone(), q.conclusion().rhs.clone());
                if self.universe.contains(&both) {
                    fresh.push(node(
                        Rule::RConjIntro,
                        lhs.clone(),
                        both,
                        vec![p.clone(), (*q).clone()],
                        None,
                    ));
                }
            }
            let outer_l = self.over.get(lhs).cloned().unwrap_or_default();
            let outer_r = self.over.get(rhs).cloned().unwrap_or_default();
            for a in &outer_l {
                for b in &outer_r {
                    if let Some(side) = self.side(a, b, false) {
                        fresh.push(node(
                            Rule::RMonoOuter,
                            BracketFormula::diamond(a.clone(), lhs.clone()),
                            BracketFormula::diamond(b.clone(), rhs.clone()),
                            vec![p.clone()],
                            Some(side),
                        ));
                    }
                }
            }
            for b in &outer_l {
                let inner = BracketFormula::diamond(b.clone(), lhs.clone());
                let target = BracketFormula::diamond(b.clone(), rhs.clone());
                if !self.universe.contains(&target) {
                    continue;
                }
                for a in self.over.get(&inner).cloned().unwrap_or_default() {
                    if let Some(side) = self.side(&a, b, false) {
                        fresh.push(node(
                            Rule::RMonoAbsorb,
                            BracketFormula::diamond(a.clone(), inner.clone()),
                            target.clone(),
                            vec![p.clone()],
                            Some(side),
                        ));
                    }
                }
            }
        }
        let conjs: Vec<BracketFormula> = self
            .universe
            .iter()
            .filter(|x| matches!(x, BracketFormula::Conj(..)))
            .cloned()
            .collect();
        for x in conjs {
            let BracketFormula::Conj(l, r) = &x else {
                unreachable!()
            };
            let (BracketFormula::Diamond(a, phi), BracketFormula::Diamond(b, _)) = (&**l, &**r)
            else {
                continue;
            };
            let target = BracketFormula::diamond(
                a.clone(),
                BracketFormula::conj((**phi).clone(), (**r).clone()),
            );
            if self.universe.contains(&target) {
                if let Some(side) = self.side(a, b, true) {
                    fresh.push(node(Rule::RNeg5, x.clone(), target, vec![], Some(side)));
                }
            }
        }
        for c in fresh {
            self.add(c);
        }
    }
}

/// Search seeded with small worms, their strict forms, and conjunctions
/// and nestings of tiny worms, run for `rounds` rounds.
pub fn order_search(rounds: usize) -> Search {
    let small = worms(3);
    let tiny = worms(2);
    let mut seeds: Vec<BracketFormula> = Vec::new();
    for a in &small {
        seeds.push(a.to_formula());
        seeds.push(strict(a));
    }
    for a in &tiny {
        for b in &tiny {
            seeds.push(BracketFormula::conj(a.to_formula(), b.to_formula()));
            for x in &tiny {
                for y in &tiny {
                    // (x)a ∧ (y)b and (x)[a ∧ (y)b]
                    let yb = BracketFormula::diamond(y.clone(), b.to_formula());
                    seeds.push(BracketFormula::conj(
                        BracketFormula::diamond(x.clone(), a.to_formula()),
                        yb.clone(),
                    ));
                    seeds.push(BracketFormula::diamond(
                        x.clone(),
                        BracketFormula::conj(a.to_formula(), yb),
                    ));
                }
            }
        }
    }
    let mut s = Search::new(seeds);
    for _ in 0..rounds {
        s.round();
    }
    s
}
