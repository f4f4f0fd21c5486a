mod common;

use bracket_core::fundseq::{a_prime, descend_with, step_iter_with, Snapshot};
use bracket_core::ordinal::add;
use bracket_core::syntax::nesting_worm;
use bracket_core::worm::uparrow_bracket;
use bracket_core::{
    a_seq, decide_lt, descend, f_witness, fs_bracket, fs_veblen, g_witness, gamma, o_star,
    step_iter, BracketWorm, Ordinal, Witness,
};
use common::{enriched_ordinals, o, worms};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// a{n} computed directly from the three defining cases.
fn fs_oracle(a: &BracketWorm, n: u64) -> BracketWorm {
    let e = a.entries();
    let Some(first) = e.first() else {
        return BracketWorm::top();
    };
    if first.is_top() {
        return BracketWorm::new(e[1..].to_vec());
    }
    let bound = o_star(first);
    let ell = (1..e.len())
        .find(|&i| o_star(&e[i]) < bound)
        .unwrap_or(e.len());
    let mut b = vec![fs_oracle(first, n)];
    b.extend_from_slice(&e[1..ell]);
    let mut out = Vec::new();
    for _ in 0..=n {
        out.extend_from_slice(&b);
    }
    out.extend_from_slice(&e[ell..]);
    BracketWorm::new(out)
}

#[test]
fn bracket_steps_match_the_defining_cases() {
    for a in worms(7) {
        for n in 0..=4 {
            assert_eq!(fs_bracket(&a, n), fs_oracle(&a, n), "{a}{{{n}}}");
        }
    }
}

#[test]
fn bracket_steps_descend() {
    for a in worms(8).iter().filter(|a| !a.is_top()) {
        for n in 0..=5 {
            assert!(decide_lt(a, &fs_bracket(a, n)), "{a}{{{n}}}");
        }
    }
}

#[test]
fn stepper_matches_explicit_iteration() {
    for a in worms(5) {
        let trace = step_iter(&a, 7);
        let mut cur = a.clone();
        for (i, snap) in trace.steps.head().iter().enumerate() {
            match snap {
                Snapshot::Worm(x) => assert_eq!(*x, cur, "{a} step {i}"),
                Snapshot::Elided { len } => assert_eq!(*len, cur.len() as u128, "{a} step {i}"),
            }
            if i < trace.steps.head().len() - 1 {
                cur = fs_oracle(&cur, i as u64 + 1);
            }
        }
        assert_eq!(trace.terminated, cur.is_top(), "{a}");
    }
}

#[test]
fn veblen_steps_descend() {
    for xi in enriched_ordinals().iter().filter(|x| !x.is_zero()) {
        for x in 0..=5 {
            assert!(fs_veblen(xi, x) < *xi, "{xi}[{x}]");
        }
    }
}

#[test]
fn bachmann_property() {
    let corpus = enriched_ordinals();
    let mut checked = 0;
    for alpha in &corpus {
        for k in 0..=3 {
            let low = fs_veblen(alpha, k);
            for beta in corpus.iter().filter(|b| low < **b && *b < alpha) {
                assert!(low <= fs_veblen(beta, 1), "{alpha}[{k}] vs {beta}[1]");
                checked += 1;
            }
        }
    }
    assert!(checked > 500, "only {checked} triples qualified");
}

#[test]
fn slow_chains_majorize_the_descent() {
    let corpus = enriched_ordinals();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for start in &corpus {
        for _ in 0..4 {
            let fast = descend(start, 12).ordinals().unwrap();
            let mut cur = start.clone();
            for (i, floor) in fast.iter().enumerate().skip(1) {
                let least = fs_veblen(&cur, i as u64);
                let mut options: Vec<Ordinal> = corpus
                    .iter()
                    .filter(|x| least <= **x && **x <= cur)
                    .cloned()
                    .collect();
                options.push(least);
                cur = options.swap_remove(rng.gen_range(0..options.len()));
                assert!(cur >= *floor, "{start}: step {i}");
            }
        }
    }
}

/// α↑ shifts every top-level label by α, unless α + o*(label) = o*(label).
fn shift_is_visible(alpha: &Ordinal, a: &BracketWorm) -> bool {
    a.entries().iter().all(|e| {
        let x = o_star(e);
        add(alpha, &x) != x
    })
}

fn commutes(alpha: &Ordinal, a: &BracketWorm, k: u64) -> bool {
    let lifted_then_step = o_star(&fs_bracket(&uparrow_bracket(alpha, a), k));
    let step_then_lifted = o_star(&uparrow_bracket(alpha, &fs_bracket(a, k)));
    lifted_then_step >= step_then_lifted
}

#[test]
fn uparrow_commutes_with_steps_for_visible_finite_shifts() {
    let mut checked = 0;
    for alpha in [o("1"), o("2")] {
        for a in worms(6).iter().filter(|a| shift_is_visible(&alpha, a)) {
            for k in 0..=3 {
                assert!(commutes(&alpha, a, k), "{alpha} {a} {k}");
                checked += 1;
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn uparrow_commutation_fails_when_the_shift_is_absorbed() {
    // 1+ω = ω, so 1↑((())) = ((())), but ((())){k} drops below ω where 1↑ bites
    let a = common::w("((()))");
    for k in 0..=3 {
        assert!(!commutes(&o("1"), &a, k));
        assert!(!commutes(&o("w"), &common::w("((())()())"), k));
    }
}

#[test]
#[ignore = "false as stated: see uparrow_commutation_fails_when_the_shift_is_absorbed"]
fn uparrow_commutes_with_steps_as_stated() {
    for alpha in [o("1"), o("w")] {
        for a in worms(6) {
            for k in 0..=3 {
                assert!(commutes(&alpha, &a, k), "{alpha} {a} {k}");
            }
        }
    }
}

#[test]
fn bracket_run_dominates_veblen_descent() {
    let bound = o("w^w");
    let mut checked = 0;
    for a in worms(7).iter().filter(|a| o_star(a) <= bound) {
        let primed = a.prepend(BracketWorm::top());
        let run = step_iter(&primed, 4);
        let run = run.worms().unwrap();
        let descent = descend(&o_star(a), 3).ordinals().unwrap();
        for k in [2usize, 3] {
            let bracket = run.get(k + 1).map_or(Ordinal::zero(), o_star);
            let veblen = descent.get(k).cloned().unwrap_or_else(Ordinal::zero);
            assert!(veblen <= bracket, "{a} k={k}: {veblen} vs {bracket}");
        }
        checked += 1;
    }
    assert!(checked > 50, "only {checked} worms");
}

#[test]
fn small_worms_reach_top() {
    let small = o("w+w+w");
    for a in worms(8) {
        if o_star(&a) < small {
            assert!(step_iter(&a, 1_000_000).terminated, "{a}");
            continue;
        }
        // every step on a deeply nested label compares large ordinals,
        // so deeper starts only get a short run
        let budget = if nesting_worm(&a) <= 2 { 10_000 } else { 10 };
        let trace = step_iter(&a, budget);
        assert!(trace.terminated || trace.steps_used == budget, "{a}");
    }
}

#[test]
fn growth_functions_on_small_arguments() {
    assert_eq!(f_witness(0, 10), Witness::Found(0));
    assert_eq!(f_witness(1, 10), Witness::Found(1));
    assert_eq!(g_witness(0, 10), Witness::Found(0));
    assert_eq!(g_witness(1, 10), Witness::Found(1));
    for m in 0..=1 {
        let (Witness::Found(f), Witness::Found(g)) = (f_witness(m, 100), g_witness(m, 100)) else {
            panic!("m = {m} should terminate");
        };
        assert!(f <= g, "m = {m}");
    }
    assert_eq!(g_witness(2, 1000), Witness::BudgetExhausted(1000));
    assert_eq!(a_prime(2).to_string(), "()((()))");
}

#[test]
fn a_seq_tracks_gamma_for_small_indices() {
    for m in 0..=3 {
        assert_eq!(o_star(&a_seq(m)), gamma(m), "m = {m}");
    }
}

#[test]
fn windows_keep_head_and_tail() {
    let trace = step_iter_with(&common::w("((()))"), 50, 3);
    assert!(!trace.terminated);
    assert_eq!(trace.steps_used, 50);
    assert_eq!(trace.steps.head().len(), 3);
    assert_eq!(trace.steps.tail().len(), 3);
    assert!(trace.worms().is_none());
    let json = trace.to_json();
    let keys: Vec<&str> = json
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    assert_eq!(keys.len(), 6);
    for k in [
        "start",
        "terminated",
        "steps_used",
        "budget",
        "head",
        "tail",
    ] {
        assert!(keys.contains(&k), "{k}");
    }
    assert_eq!(json["head"][0], "((()))");
    assert!(json["tail"][2].as_str().unwrap().starts_with("...["));

    let d = descend_with(&o("w+5"), 100, 2);
    assert!(d.terminated);
    let text = |s: &str| o(s).to_string();
    assert_eq!(
        d.to_json()["head"],
        serde_json::json!([text("w+5"), text("w+4")])
    );
    assert_eq!(d.to_json()["tail"][1], "0");
}
