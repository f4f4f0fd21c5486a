//! Certificate construction.
//!
//! The core routine `Prover::compare` works at a level α given by a label l
//! with o*(l) = α. For worms A, B whose entries are all ≥ α and with
//! o_α(B) ≤ o_α(A) it derives A ⊢ (l)B when o_α(B) < o_α(A) and A ⊢ B
//! otherwise, where o_α(X) is the order type of X with α subtracted from
//! every entry on the left. Each worm is split at its leftmost α-entry,
//! X = X₁(x)X₀, and
//!
//! * if o_α(B) ≤ o_α(A₀), recurse on A₀ and absorb the head A₁;
//! * otherwise the heads decide: o_α(B₁) < o_α(A₁) gives the strict case
//!   via the head at the next level and Rule 5, and equal heads give the
//!   equality case.
//!
//! Side conditions are derived by the same routine at level 0 on the
//! labels themselves, so every certificate is built without consulting an
//! ordinal oracle beyond the case split.

use std::collections::HashMap;

use crate::ordinal::{left_sub, Ordinal};
use crate::syntax::{BracketFormula, BracketWorm};
use crate::worm::{order_type_of, OStar};

use super::{decide_le, decide_lt, CalculusError, Certificate, Rule, Sequent};

#[derive(Clone)]
struct Lab {
    w: BracketWorm,
    v: Ordinal,
}

#[derive(Clone)]
enum Outcome {
    Strict(Certificate),
    Equal(Certificate),
}

fn node(
    rule: Rule,
    lhs: BracketFormula,
    rhs: BracketFormula,
    premises: Vec<Certificate>,
    side: Option<Certificate>,
) -> Certificate {
    Certificate::new(rule, Sequent::new(lhs, rhs), premises, side)
}

fn ax_id(phi: BracketFormula) -> Certificate {
    node(Rule::AxId, phi.clone(), phi, vec![], None)
}

fn ax_top(phi: BracketFormula) -> Certificate {
    node(Rule::AxTop, phi, BracketFormula::Top, vec![], None)
}

fn conj_l(phi: &BracketFormula, psi: &BracketFormula) -> Certificate {
    node(
        Rule::AxConjL,
        BracketFormula::conj(phi.clone(), psi.clone()),
        phi.clone(),
        vec![],
        None,
    )
}

fn conj_r(phi: &BracketFormula, psi: &BracketFormula) -> Certificate {
    node(
        Rule::AxConjR,
        BracketFormula::conj(phi.clone(), psi.clone()),
        psi.clone(),
        vec![],
        None,
    )
}

fn cut(p: Certificate, q: Certificate) -> Certificate {
    debug_assert_eq!(p.conclusion().rhs, q.conclusion().lhs);
    let lhs = p.conclusion().lhs.clone();
    let rhs = q.conclusion().rhs.clone();
    node(Rule::RCut, lhs, rhs, vec![p, q], None)
}

fn conj_intro(p: Certificate, q: Certificate) -> Certificate {
    debug_assert_eq!(p.conclusion().lhs, q.conclusion().lhs);
    let lhs = p.conclusion().lhs.clone();
    let rhs = BracketFormula::conj(p.conclusion().rhs.clone(), q.conclusion().rhs.clone());
    node(Rule::RConjIntro, lhs, rhs, vec![p, q], None)
}

/// (a)φ ⊢ (b)ψ from φ ⊢ ψ and a side proving b ⊴ a.
fn mono(side: Certificate, a: &BracketWorm, b: &BracketWorm, p: Certificate) -> Certificate {
    let lhs = BracketFormula::diamond(a.clone(), p.conclusion().lhs.clone());
    let rhs = BracketFormula::diamond(b.clone(), p.conclusion().rhs.clone());
    node(Rule::RMonoOuter, lhs, rhs, vec![p], Some(side))
}

/// (a)(b)φ ⊢ (b)ψ from φ ⊢ ψ and a side proving b ⊴ a.
fn absorb(side: Certificate, a: &BracketWorm, b: &BracketWorm, p: Certificate) -> Certificate {
    let lhs = BracketFormula::diamond(
        a.clone(),
        BracketFormula::diamond(b.clone(), p.conclusion().lhs.clone()),
    );
    let rhs = BracketFormula::diamond(b.clone(), p.conclusion().rhs.clone());
    node(Rule::RMonoAbsorb, lhs, rhs, vec![p], Some(side))
}

/// (a)φ ∧ (b)ψ ⊢ (a)[φ ∧ (b)ψ] from a side proving b ◁ a.
fn neg5(
    side: Certificate,
    a: &BracketWorm,
    b: &BracketWorm,
    phi: BracketFormula,
    psi: BracketFormula,
) -> Certificate {
    let bpsi = BracketFormula::diamond(b.clone(), psi);
    let lhs = BracketFormula::conj(
        BracketFormula::diamond(a.clone(), phi.clone()),
        bpsi.clone(),
    );
    let rhs = BracketFormula::diamond(a.clone(), BracketFormula::conj(phi, bpsi));
    node(Rule::RNeg5, lhs, rhs, vec![], Some(side))
}

/// X followed by `tail`.
fn worm_f(xs: &[Lab], tail: BracketFormula) -> BracketFormula {
    xs.iter()
        .rev()
        .fold(tail, |acc, x| BracketFormula::diamond(x.w.clone(), acc))
}

fn wf(xs: &[Lab]) -> BracketFormula {
    worm_f(xs, BracketFormula::Top)
}

fn to_worm(xs: &[Lab]) -> BracketWorm {
    BracketWorm::new(xs.iter().map(|x| x.w.clone()).collect())
}

/// o_α(X).
fn level_value(alpha: &Ordinal, xs: &[Lab]) -> Ordinal {
    let shifted: Vec<Ordinal> = xs
        .iter()
        .map(|x| left_sub(alpha, &x.v).expect("entries lie above the level"))
        .collect();
    order_type_of(&shifted)
}

fn first_at(alpha: &Ordinal, xs: &[Lab]) -> Option<usize> {
    xs.iter().position(|x| x.v == *alpha)
}

type CompareKey = (BracketWorm, BracketWorm, BracketWorm);

#[derive(Default)]
struct Prover {
    os: OStar,
    sides: HashMap<(BracketWorm, BracketWorm), Outcome>,
    compared: HashMap<CompareKey, Outcome>,
}

impl Prover {
    fn labs(&mut self, a: &BracketWorm) -> Vec<Lab> {
        a.entries()
            .iter()
            .map(|e| Lab {
                w: e.clone(),
                v: self.os.get(e),
            })
            .collect()
    }

    fn top_label(&self) -> Lab {
        Lab {
            w: BracketWorm::top(),
            v: Ordinal::zero(),
        }
    }

    /// y ⊴ x between labels.
    fn order_side(&mut self, x: &Lab, y: &Lab) -> Outcome {
        if x.w == y.w {
            return Outcome::Equal(ax_id(x.w.to_formula()));
        }
        let key = (x.w.clone(), y.w.clone());
        if let Some(o) = self.sides.get(&key) {
            return o.clone();
        }
        let (xs, ys) = (self.labs(&x.w), self.labs(&y.w));
        let top = self.top_label();
        let o = self.compare(&top, &xs, &ys);
        self.sides.insert(key, o.clone());
        o
    }

    fn le_side(&mut self, x: &Lab, y: &Lab) -> Certificate {
        match self.order_side(x, y) {
            Outcome::Strict(c) | Outcome::Equal(c) => c,
        }
    }

    fn lt_side(&mut self, x: &Lab, y: &Lab) -> Certificate {
        match self.order_side(x, y) {
            Outcome::Strict(c) => c,
            Outcome::Equal(_) => unreachable!("strict side requested for equivalent labels"),
        }
    }

    fn refl(&self, x: &Lab) -> Certificate {
        ax_id(x.w.to_formula())
    }

    /// Xφ ⊢ Xψ from φ ⊢ ψ.
    fn prefix_mono(&self, xs: &[Lab], mut p: Certificate) -> Certificate {
        for x in xs.iter().rev() {
            p = mono(self.refl(x), &x.w, &x.w, p);
        }
        p
    }

    /// X ⊢ X[..i].
    fn head_proj(&self, xs: &[Lab], i: Option<usize>) -> Certificate {
        match i {
            None => ax_id(wf(xs)),
            Some(i) => self.prefix_mono(&xs[..i], ax_top(wf(&xs[i..]))),
        }
    }

    /// X(l)φ ⊢ (l)φ when every entry of X is ⊵ l.
    fn absorb_chain(&mut self, xs: &[Lab], l: &Lab, phi: &BracketFormula) -> Certificate {
        let target = BracketFormula::diamond(l.w.clone(), phi.clone());
        let mut q = ax_id(target);
        for x in xs.iter().rev() {
            let lifted = mono(self.refl(x), &x.w, &x.w, q);
            let side = self.le_side(x, l);
            q = cut(lifted, absorb(side, &x.w, &l.w, ax_id(phi.clone())));
        }
        q
    }

    /// X ∧ (l)φ ⊢ X(l)φ when every entry of X is ▷ l.
    fn merge(&mut self, xs: &[Lab], l: &Lab, phi: &BracketFormula) -> Certificate {
        let Some((x, rest)) = xs.split_first() else {
            return conj_r(
                &BracketFormula::Top,
                &BracketFormula::diamond(l.w.clone(), phi.clone()),
            );
        };
        let side = self.lt_side(x, l);
        let step = neg5(side, &x.w, &l.w, wf(rest), phi.clone());
        let inner = self.merge(rest, l, phi);
        cut(step, mono(self.refl(x), &x.w, &x.w, inner))
    }

    /// (x)ψ ⊢ (l)ψ' from either ψ ⊢ (l)ψ' or ψ ⊢ ψ', given l ⊴ x.
    fn lift_into(&mut self, x: &Lab, l: &Lab, r: Outcome) -> Certificate {
        let side = self.le_side(x, l);
        match r {
            Outcome::Equal(c) => mono(side, &x.w, &l.w, c),
            Outcome::Strict(c) => {
                let target = c.conclusion().rhs.clone();
                let BracketFormula::Diamond(_, body) = &target else {
                    unreachable!("strict outcome has a diamond conclusion")
                };
                let body = (**body).clone();
                let lifted = mono(side, &x.w, &l.w, c);
                let refl_l = self.refl(l);
                cut(lifted, absorb(refl_l, &l.w, &l.w, ax_id(body)))
            }
        }
    }

    fn compare(&mut self, l: &Lab, a: &[Lab], b: &[Lab]) -> Outcome {
        let key = (l.w.clone(), to_worm(a), to_worm(b));
        if let Some(o) = self.compared.get(&key) {
            return o.clone();
        }
        let o = self.compare_uncached(l, a, b);
        self.compared.insert(key, o.clone());
        o
    }

    fn compare_uncached(&mut self, l: &Lab, a: &[Lab], b: &[Lab]) -> Outcome {
        let alpha = l.v.clone();
        let lb_formula = |b: &[Lab]| BracketFormula::diamond(l.w.clone(), wf(b));
        if b.is_empty() {
            if a.is_empty() {
                return Outcome::Equal(ax_id(BracketFormula::Top));
            }
            let (x, rest) = a.split_first().expect("nonempty");
            let side = self.le_side(x, l);
            return Outcome::Strict(mono(side, &x.w, &l.w, ax_top(wf(rest))));
        }
        let vb = level_value(&alpha, b);
        let ia = first_at(&alpha, a);
        let ib = first_at(&alpha, b);

        if let Some(i) = ia {
            let a0 = &a[i + 1..];
            if vb <= level_value(&alpha, a0) {
                let la = a[i].clone();
                let r = self.compare(l, a0, b);
                let into_head = self.absorb_chain(&a[..i], &la, &wf(a0));
                let tail = self.lift_into(&la, l, r);
                let c = cut(into_head, tail);
                debug_assert_eq!(c.conclusion().rhs, lb_formula(b));
                return Outcome::Strict(c);
            }
        }

        let a1 = &a[..ia.unwrap_or(a.len())];
        let b1 = &b[..ib.unwrap_or(b.len())];
        let pa = level_value(&alpha, a1);
        let pb = level_value(&alpha, b1);

        match pb.cmp(&pa) {
            std::cmp::Ordering::Less => {
                let mu = a1
                    .iter()
                    .chain(b1.iter())
                    .min_by(|x, y| x.v.cmp(&y.v))
                    .expect("the left head is nonempty")
                    .clone();
                let Outcome::Strict(h) = self.compare(&mu, a1, b1) else {
                    unreachable!("heads differ at the next level")
                };
                let to_head = cut(self.head_proj(a, ia), h);
                let to_b = match ib {
                    None => to_head,
                    Some(j) => {
                        let lb = b[j].clone();
                        let b0 = &b[j + 1..];
                        let Outcome::Strict(s) = self.compare(&lb, a, b0) else {
                            unreachable!("the body of B lies strictly below A")
                        };
                        let both = conj_intro(to_head, s);
                        let side = self.lt_side(&mu, &lb);
                        let pushed = neg5(side, &mu.w, &lb.w, wf(b1), wf(b0));
                        let merged = self.merge(b1, &lb, &wf(b0));
                        let inside = mono(self.refl(&mu), &mu.w, &mu.w, merged);
                        cut(cut(both, pushed), inside)
                    }
                };
                let side = self.le_side(&mu, l);
                let lowered = mono(side, &mu.w, &l.w, ax_id(wf(b)));
                Outcome::Strict(cut(to_b, lowered))
            }
            std::cmp::Ordering::Equal if pa.is_zero() => {
                // both worms open with their α-entry and the bodies agree
                let (la, lb) = (a[0].clone(), b[0].clone());
                let Outcome::Equal(r) = self.compare(l, &a[1..], &b[1..]) else {
                    unreachable!("a strictly larger body is the absorption case")
                };
                let side = self.le_side(&la, &lb);
                Outcome::Equal(mono(side, &la.w, &lb.w, r))
            }
            std::cmp::Ordering::Equal => {
                let mu = a1
                    .iter()
                    .chain(b1.iter())
                    .min_by(|x, y| x.v.cmp(&y.v))
                    .expect("heads are nonempty")
                    .clone();
                let Outcome::Equal(h) = self.compare(&mu, a1, b1) else {
                    unreachable!("heads agree at the next level")
                };
                let to_head = cut(self.head_proj(a, ia), h);
                match ib {
                    None => Outcome::Equal(to_head),
                    Some(j) => {
                        let lb = b[j].clone();
                        let b0 = &b[j + 1..];
                        let Outcome::Strict(s) = self.compare(&lb, a, b0) else {
                            unreachable!("the body of B lies strictly below A")
                        };
                        let merged = self.merge(b1, &lb, &wf(b0));
                        Outcome::Equal(cut(conj_intro(to_head, s), merged))
                    }
                }
            }
            std::cmp::Ordering::Greater => unreachable!("o_α(B) ≤ o_α(A) bounds the heads"),
        }
    }
}

/// A derivation of a ⊢ b or a ⊢ ()b, one of which exists exactly when
/// b ⊴ a. The plain form is returned when o*(a) = o*(b) and for b = ⊤.
pub fn prove_le(a: &BracketWorm, b: &BracketWorm) -> Result<Certificate, CalculusError> {
    if b.is_top() {
        return Ok(ax_top(a.to_formula()));
    }
    if !decide_le(a, b) {
        return Err(CalculusError::NotProvable(format!("{b} is not below {a}")));
    }
    let mut p = Prover::default();
    let (xs, ys) = (p.labs(a), p.labs(b));
    let top = p.top_label();
    match p.compare(&top, &xs, &ys) {
        Outcome::Equal(c) | Outcome::Strict(c) => Ok(c),
    }
}

/// A derivation of a ⊢ ()b, which exists exactly when b ◁ a.
pub fn prove_lt(a: &BracketWorm, b: &BracketWorm) -> Result<Certificate, CalculusError> {
    if !decide_lt(a, b) {
        return Err(CalculusError::NotProvable(format!(
            "{b} is not strictly below {a}"
        )));
    }
    let mut p = Prover::default();
    let (xs, ys) = (p.labs(a), p.labs(b));
    let top = p.top_label();
    match p.compare(&top, &xs, &ys) {
        Outcome::Strict(c) => Ok(c),
        Outcome::Equal(_) => unreachable!("decided strict"),
    }
}

/// (b₀)…(b_k) ⊢ (a₀)…(a_k) from sides proving a_i ⊴ b_i.
///
/// Side i must conclude b_i ⊢ ()a_i or b_i ⊢ a_i between worms. A right side
/// of the form ()x is always read as the strict form with a_i = x.
pub fn derived_mono(sides: &[Certificate]) -> Result<Certificate, CalculusError> {
    let mut pairs = Vec::with_capacity(sides.len());
    for (index, side) in sides.iter().enumerate() {
        let mismatch = CalculusError::SideMismatch { index };
        if !super::check_derivation(side).is_valid() {
            return Err(mismatch);
        }
        let Sequent { lhs, rhs } = side.conclusion();
        let b = lhs.as_worm().ok_or(mismatch.clone())?;
        let a = match rhs {
            BracketFormula::Diamond(l, rest) if l.is_top() => rest.as_worm(),
            _ => rhs.as_worm(),
        }
        .ok_or(mismatch)?;
        pairs.push((side.clone(), b, a));
    }
    let mut p = ax_id(BracketFormula::Top);
    for (side, b, a) in pairs.into_iter().rev() {
        p = mono(side, &b, &a, p);
    }
    Ok(p)
}

struct Merged {
    worm: Vec<Lab>,
    /// A ∧ B ⊢ C
    from_conj: Certificate,
    /// C ⊢ A
    to_left: Certificate,
    /// C ⊢ B
    to_right: Certificate,
}

impl Prover {
    /// A single worm equivalent to A ∧ B.
    fn merge_worms(&mut self, a: &[Lab], b: &[Lab]) -> Merged {
        let (af, bf) = (wf(a), wf(b));
        if a.is_empty() || b.is_empty() {
            let (keep, left_is_kept) = if a.is_empty() { (b, false) } else { (a, true) };
            let kf = wf(keep);
            let (to_left, to_right, from_conj) = if left_is_kept {
                (ax_id(kf.clone()), ax_top(kf), conj_l(&af, &bf))
            } else {
                (ax_top(kf.clone()), ax_id(kf), conj_r(&af, &bf))
            };
            return Merged {
                worm: keep.to_vec(),
                from_conj,
                to_left,
                to_right,
            };
        }
        let alpha = a
            .iter()
            .chain(b.iter())
            .map(|x| &x.v)
            .min()
            .expect("both worms are nonempty")
            .clone();
        let ia = first_at(&alpha, a);
        let ib = first_at(&alpha, b);
        let a1 = &a[..ia.unwrap_or(a.len())];
        let b1 = &b[..ib.unwrap_or(b.len())];

        // the α-entry and body kept in C, plus (x)X₀ ⊢ kept for each side
        let keep_left = match (ia, ib) {
            (Some(i), Some(j)) => {
                level_value(&alpha, &a[i + 1..]) >= level_value(&alpha, &b[j + 1..])
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => unreachable!("the minimum occurs in one of the worms"),
        };
        let (w_idx, w) = if keep_left {
            (ia.unwrap(), a)
        } else {
            (ib.unwrap(), b)
        };
        let lw = w[w_idx].clone();
        let w0 = &w[w_idx + 1..];
        let kept = BracketFormula::diamond(lw.w.clone(), wf(w0));

        let c1 = self.merge_worms(a1, b1);
        let mut worm = c1.worm.clone();
        worm.push(lw.clone());
        worm.extend_from_slice(w0);
        let cf = wf(&worm);
        let n1 = c1.worm.len();

        // A ∧ B ⊢ C
        let to_a1 = cut(conj_l(&af, &bf), self.head_proj(a, ia));
        let to_b1 = cut(conj_r(&af, &bf), self.head_proj(b, ib));
        let to_c1 = cut(conj_intro(to_a1, to_b1), c1.from_conj.clone());
        let pick = if keep_left {
            conj_l(&af, &bf)
        } else {
            conj_r(&af, &bf)
        };
        let w1 = &w[..w_idx];
        let to_kept = cut(pick, self.absorb_chain(w1, &lw, &wf(w0)));
        debug_assert_eq!(to_kept.conclusion().rhs, kept);
        let merged = self.merge(&c1.worm, &lw, &wf(w0));
        let from_conj = cut(conj_intro(to_c1, to_kept), merged);

        // C ⊢ (lw)W₀ and C ⊢ C₁
        let c_to_kept = self.absorb_chain(&c1.worm, &lw, &wf(w0));
        let c_to_c1 = self.head_proj(&worm, Some(n1));

        let back = |p: &mut Prover,
                    x: &[Lab],
                    ix: Option<usize>,
                    head: Certificate,
                    is_kept: bool|
         -> Certificate {
            let to_head = cut(c_to_c1.clone(), head);
            let Some(i) = ix else {
                return to_head;
            };
            let lx = x[i].clone();
            let x0 = &x[i + 1..];
            let to_body = if is_kept {
                c_to_kept.clone()
            } else {
                // (lw)W₀ ⊢ (lx)X₀ with o(X₀) ≤ o(W₀) at level α
                let r = p.compare(&lx, w0, x0);
                let step = p.lift_into(&lw, &lx, r);
                cut(c_to_kept.clone(), step)
            };
            let both = conj_intro(to_head, to_body);
            let merged = p.merge(&x[..i], &lx, &wf(x0));
            cut(both, merged)
        };
        let to_left = back(self, a, ia, c1.to_left.clone(), keep_left);
        let to_right = back(self, b, ib, c1.to_right.clone(), !keep_left);
        debug_assert_eq!(to_left.conclusion().rhs, af);
        debug_assert_eq!(to_right.conclusion().rhs, bf);
        debug_assert_eq!(from_conj.conclusion().rhs, cf);
        Merged {
            worm,
            from_conj,
            to_left,
            to_right,
        }
    }

    /// (C, φ ⊢ C, C ⊢ φ) for variable-free φ.
    fn normalize(&mut self, phi: &BracketFormula) -> (Vec<Lab>, Certificate, Certificate) {
        if let Some(a) = phi.as_worm() {
            let labs = self.labs(&a);
            return (labs, ax_id(phi.clone()), ax_id(phi.clone()));
        }
        match phi {
            BracketFormula::Top | BracketFormula::Var(_) => {
                unreachable!("worms and variables handled above")
            }
            BracketFormula::Diamond(l, body) => {
                let (c, to, from) = self.normalize(body);
                let lab = Lab {
                    w: l.clone(),
                    v: self.os.get(l),
                };
                let to = mono(self.refl(&lab), l, l, to);
                let from = mono(self.refl(&lab), l, l, from);
                let mut worm = vec![lab];
                worm.extend(c);
                (worm, to, from)
            }
            BracketFormula::Conj(x, y) => {
                let (cx, to_x, from_x) = self.normalize(x);
                let (cy, to_y, from_y) = self.normalize(y);
                let m = self.merge_worms(&cx, &cy);
                let split = conj_intro(cut(conj_l(x, y), to_x), cut(conj_r(x, y), to_y));
                let to = cut(split, m.from_conj);
                let from = conj_intro(cut(m.to_left, from_x), cut(m.to_right, from_y));
                (m.worm, to, from)
            }
        }
    }
}

/// A worm C with derivations of φ ⊢ C and C ⊢ φ.
pub fn conj_to_worm(
    phi: &BracketFormula,
) -> Result<(BracketWorm, Certificate, Certificate), CalculusError> {
    if phi.has_variables() {
        return Err(CalculusError::HasVariables);
    }
    let (c, to, from) = Prover::default().normalize(phi);
    Ok((to_worm(&c), to, from))
}

/// Whether φ ⊢ ψ or φ ⊢ ()ψ holds, after merging each side into a worm.
pub fn decide_closed_geq(
    phi: &BracketFormula,
    psi: &BracketFormula,
) -> Result<bool, CalculusError> {
    let (a, _, _) = conj_to_worm(phi)?;
    let (b, _, _) = conj_to_worm(psi)?;
    Ok(decide_le(&a, &b))
}
