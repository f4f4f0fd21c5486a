//! Stepping machinery.
//!
//! A worm is a persistent stack of rope pieces with its front on top, and a
//! label is such a stack together with its o* value. A step a{n} repeats a
//! block n+1 times, which the rope stores as `Rep(block, n+1)` instead of the
//! copies. Labels are never expanded: their order types are assembled from
//! [`Profile`] summaries cached on the rope.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::ordinal::{add, hyper_exp, left_sub, mul_nat, pred, Ordinal};
use crate::syntax::BracketWorm;
use crate::worm::order_type_of;

/// Enough of a nonempty sequence X of ordinals to compose o over
/// concatenation and repetition.
///
/// With μ = min X and X = F⟨μ⟩…⟨μ⟩L where F and L avoid μ,
/// `value` = o(−μ+X) = o(−μ+L) + `mid` + o(−μ+F).
#[derive(Clone)]
struct Profile(Arc<ProfileNode>);

struct ProfileNode {
    min: Ordinal,
    first: Option<Profile>,
    mid: Ordinal,
    last: Option<Profile>,
    value: Ordinal,
}

/// o(−θ+X) for X lying above θ, and 0 for the empty sequence.
fn relative(p: Option<&Profile>, theta: &Ordinal) -> Ordinal {
    p.map_or_else(Ordinal::zero, |p| {
        let shift = left_sub(theta, &p.0.min).expect("sequence lies above theta");
        hyper_exp(&shift, &p.0.value)
    })
}

fn concat_opt(a: Option<&Profile>, b: Option<&Profile>) -> Option<Profile> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.concat(b)),
        (a, b) => a.or(b).cloned(),
    }
}

impl Profile {
    fn new(min: Ordinal, first: Option<Profile>, mid: Ordinal, last: Option<Profile>) -> Profile {
        let value = add(
            &add(&relative(last.as_ref(), &min), &mid),
            &relative(first.as_ref(), &min),
        );
        Profile(Arc::new(ProfileNode {
            min,
            first,
            mid,
            last,
            value,
        }))
    }

    fn single(x: &Ordinal) -> Profile {
        Profile::new(x.clone(), None, Ordinal::one(), None)
    }

    fn order_type(&self) -> Ordinal {
        hyper_exp(&self.0.min, &self.0.value)
    }

    fn concat(&self, other: &Profile) -> Profile {
        let (x, y) = (&*self.0, &*other.0);
        match x.min.cmp(&y.min) {
            Ordering::Equal => {
                // the last segment of X and the first of Y fuse
                let joint = concat_opt(x.last.as_ref(), y.first.as_ref());
                let mid = add(&add(&y.mid, &relative(joint.as_ref(), &x.min)), &x.mid);
                Profile::new(x.min.clone(), x.first.clone(), mid, y.last.clone())
            }
            Ordering::Less => {
                let last = concat_opt(x.last.as_ref(), Some(other));
                Profile::new(x.min.clone(), x.first.clone(), x.mid.clone(), last)
            }
            Ordering::Greater => {
                let first = concat_opt(Some(self), y.first.as_ref());
                Profile::new(y.min.clone(), first, y.mid.clone(), y.last.clone())
            }
        }
    }

    fn repeat(&self, k: u64) -> Profile {
        if k == 1 {
            return self.clone();
        }
        let x = &*self.0;
        let joint = concat_opt(x.last.as_ref(), x.first.as_ref());
        let period = add(&relative(joint.as_ref(), &x.min), &x.mid);
        let mid = add(&x.mid, &mul_nat(&period, k - 1));
        Profile::new(x.min.clone(), x.first.clone(), mid, x.last.clone())
    }
}

/// A bracket worm whose nodes carry their o* value.
#[derive(Clone)]
pub(crate) struct Lw(Arc<LwNode>);

struct LwNode {
    entries: Stack,
    ord: Ordinal,
    /// Bracket pairs, saturating.
    size: u128,
}

impl Lw {
    fn with_ord(entries: Stack, ord: Ordinal) -> Lw {
        let size = entries.size();
        Lw(Arc::new(LwNode { entries, ord, size }))
    }

    fn from_stack(entries: Stack) -> Lw {
        let ord = entries
            .profile()
            .map_or_else(Ordinal::zero, |p| p.order_type());
        Lw::with_ord(entries, ord)
    }

    pub(crate) fn ord(&self) -> &Ordinal {
        &self.0.ord
    }

    fn entries(&self) -> &Stack {
        &self.0.entries
    }

    pub(crate) fn is_top(&self) -> bool {
        self.0.entries.is_empty()
    }

    pub(crate) fn to_bracket(&self) -> BracketWorm {
        let mut memo = HashMap::new();
        self.to_bracket_memo(&mut memo)
    }

    fn to_bracket_memo(&self, memo: &mut HashMap<*const LwNode, BracketWorm>) -> BracketWorm {
        let key = Arc::as_ptr(&self.0);
        if let Some(b) = memo.get(&key) {
            return b.clone();
        }
        let mut entries = Vec::new();
        self.entries().for_each_entry(|e, times| {
            let b = e.to_bracket_memo(memo);
            entries.extend(std::iter::repeat_n(b, times as usize));
        });
        let b = BracketWorm::new(entries);
        memo.insert(key, b.clone());
        b
    }
}

#[derive(Default)]
pub(crate) struct LwBuilder {
    memo: HashMap<BracketWorm, Lw>,
}

impl LwBuilder {
    pub(crate) fn build(&mut self, a: &BracketWorm) -> Lw {
        if let Some(l) = self.memo.get(a) {
            return l.clone();
        }
        let entries: Vec<Lw> = a.entries().iter().map(|e| self.build(e)).collect();
        let ords: Vec<Ordinal> = entries.iter().map(|e| e.ord().clone()).collect();
        let mut stack = Stack::default();
        for e in entries.into_iter().rev() {
            stack.push(unit(e));
        }
        let l = Lw::with_ord(stack, order_type_of(&ords));
        self.memo.insert(a.clone(), l.clone());
        l
    }
}

/// Minimum, entry count and bracket-pair count of a piece; counts saturate.
#[derive(Clone)]
struct Stats {
    min: Ordinal,
    len: u128,
    size: u128,
}

impl Stats {
    fn then(&self, other: &Stats) -> Stats {
        Stats {
            min: self.min.clone().min(other.min.clone()),
            len: self.len.saturating_add(other.len),
            size: self.size.saturating_add(other.size),
        }
    }
}

type Rope = Arc<Seg>;

enum Kind {
    Unit(Lw),
    Cat,
    Rep(u64),
}

struct Seg {
    kind: Kind,
    children: Vec<Piece>,
    /// One entry per suffix of `children` for `Cat`, otherwise one overall.
    stats: Vec<Stats>,
    profiles: OnceLock<Vec<Profile>>,
}

impl Drop for Seg {
    // ropes nest once per step, so a recursive drop would overflow the stack
    fn drop(&mut self) {
        let mut pending = std::mem::take(&mut self.children);
        while let Some(p) = pending.pop() {
            if let Ok(mut inner) = Arc::try_unwrap(p.seg) {
                pending.append(&mut inner.children);
            }
        }
    }
}

impl Seg {
    fn new(kind: Kind, children: Vec<Piece>, stats: Vec<Stats>) -> Rope {
        Arc::new(Seg {
            kind,
            children,
            stats,
            profiles: OnceLock::new(),
        })
    }

    fn profiles(&self) -> &[Profile] {
        self.profiles.get_or_init(|| match &self.kind {
            Kind::Unit(l) => vec![Profile::single(l.ord())],
            Kind::Rep(k) => vec![self.children[0].profile().repeat(*k)],
            Kind::Cat => {
                let mut out: Vec<Profile> = Vec::with_capacity(self.children.len());
                for c in self.children.iter().rev() {
                    let p = match out.last() {
                        Some(acc) => c.profile().concat(acc),
                        None => c.profile(),
                    };
                    out.push(p);
                }
                out.reverse();
                out
            }
        })
    }
}

/// A segment, or for a concatenation the suffix starting at `start`.
#[derive(Clone)]
struct Piece {
    seg: Rope,
    start: usize,
}

impl Piece {
    fn whole(seg: Rope) -> Piece {
        Piece { seg, start: 0 }
    }

    fn stats(&self) -> &Stats {
        &self.seg.stats[self.start]
    }

    fn min(&self) -> &Ordinal {
        &self.stats().min
    }

    fn profile(&self) -> Profile {
        self.seg.profiles()[self.start].clone()
    }

    fn is_unit(&self) -> bool {
        matches!(self.seg.kind, Kind::Unit(_))
    }

    /// Splits off the first part: (first, rest).
    fn split(&self) -> (Piece, Option<Piece>) {
        match self.seg.kind {
            Kind::Unit(_) => (self.clone(), None),
            Kind::Cat => {
                let first = self.seg.children[self.start].clone();
                let rest = (self.start + 1 < self.seg.children.len()).then(|| Piece {
                    seg: self.seg.clone(),
                    start: self.start + 1,
                });
                (first, rest)
            }
            Kind::Rep(k) => {
                let block = self.seg.children[0].clone();
                (block.clone(), Some(rep(block, k - 1)))
            }
        }
    }
}

fn unit(l: Lw) -> Piece {
    let stats = Stats {
        min: l.ord().clone(),
        len: 1,
        size: l.0.size.saturating_add(1),
    };
    Piece::whole(Seg::new(Kind::Unit(l), Vec::new(), vec![stats]))
}

fn cat(children: Vec<Piece>) -> Piece {
    let mut stats: Vec<Stats> = Vec::with_capacity(children.len());
    for c in children.iter().rev() {
        let s = match stats.last() {
            Some(acc) => c.stats().then(acc),
            None => c.stats().clone(),
        };
        stats.push(s);
    }
    stats.reverse();
    Piece::whole(Seg::new(Kind::Cat, children, stats))
}

fn rep(block: Piece, count: u64) -> Piece {
    if count == 1 {
        return block;
    }
    let b = block.stats();
    let stats = Stats {
        min: b.min.clone(),
        len: b.len.saturating_mul(u128::from(count)),
        size: b.size.saturating_mul(u128::from(count)),
    };
    Piece::whole(Seg::new(Kind::Rep(count), vec![block], vec![stats]))
}

/// A persistent stack of pieces, so that snapshots are O(1) clones.
struct Frame {
    piece: Piece,
    below: Option<Arc<Frame>>,
    /// Counts for this frame and all frames below.
    len: u128,
    size: u128,
    /// Profile of this frame and all frames below, filled on demand.
    profile: OnceLock<Profile>,
}

impl Drop for Frame {
    fn drop(&mut self) {
        let mut next = self.below.take();
        while let Some(f) = next {
            match Arc::try_unwrap(f) {
                Ok(mut inner) => next = inner.below.take(),
                Err(_) => break,
            }
        }
    }
}

#[derive(Clone, Default)]
struct Stack(Option<Arc<Frame>>);

impl Stack {
    fn push(&mut self, piece: Piece) {
        let below = self.0.take();
        let (len, size) = below.as_ref().map_or((0, 0), |f| (f.len, f.size));
        let s = piece.stats();
        self.0 = Some(Arc::new(Frame {
            len: s.len.saturating_add(len),
            size: s.size.saturating_add(size),
            piece,
            below,
            profile: OnceLock::new(),
        }));
    }

    fn pop(&mut self) -> Option<Piece> {
        let top = self.0.take()?;
        self.0 = top.below.clone();
        Some(top.piece.clone())
    }

    fn last(&self) -> Option<&Piece> {
        self.0.as_ref().map(|f| &f.piece)
    }

    fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    fn len(&self) -> u128 {
        self.0.as_ref().map_or(0, |f| f.len)
    }

    fn size(&self) -> u128 {
        self.0.as_ref().map_or(0, |f| f.size)
    }

    fn frames(&self) -> impl Iterator<Item = &Frame> {
        std::iter::successors(self.0.as_deref(), |f| f.below.as_deref())
    }

    /// Profile of the whole stack, or None when it is empty.
    fn profile(&self) -> Option<Profile> {
        // fill missing frame profiles bottom-up, without recursion
        let missing: Vec<&Frame> = self
            .frames()
            .take_while(|f| f.profile.get().is_none())
            .collect();
        for f in missing.into_iter().rev() {
            let own = f.piece.profile();
            let p = match &f.below {
                Some(b) => own.concat(b.profile.get().expect("filled below first")),
                None => own,
            };
            let _ = f.profile.set(p);
        }
        self.0
            .as_ref()
            .map(|f| f.profile.get().expect("filled").clone())
    }

    /// Visits the entries front to back as (label, run length).
    fn for_each_entry(&self, mut f: impl FnMut(&Lw, u64)) {
        let mut work: Vec<(Piece, u64)> = self.frames().map(|fr| (fr.piece.clone(), 1)).collect();
        work.reverse();
        while let Some((piece, times)) = work.pop() {
            match &piece.seg.kind {
                Kind::Unit(l) => f(l, times),
                Kind::Cat => {
                    for _ in 0..times {
                        for c in piece.seg.children[piece.start..].iter().rev() {
                            work.push((c.clone(), 1));
                        }
                    }
                }
                Kind::Rep(k) => work.push((piece.seg.children[0].clone(), times * k)),
            }
        }
    }

    /// Replaces the top piece by its first part and the rest.
    fn split_top(&mut self) {
        let top = self.pop().expect("nonempty stack");
        let (first, rest) = top.split();
        if let Some(rest) = rest {
            self.push(rest);
        }
        self.push(first);
    }

    fn pop_unit(&mut self) -> Option<Lw> {
        loop {
            let top = self.last()?;
            if let Kind::Unit(l) = &top.seg.kind {
                let l = l.clone();
                self.pop();
                return Some(l);
            }
            self.split_top();
        }
    }
}

enum Step {
    /// The worm was ⊤.
    Top,
    /// A leading ⟨0⟩ was dropped.
    Dropped,
    Repeated,
}

/// Turns the worm on `stack` into its n-th fundamental-sequence member.
fn fs_stack(stack: &mut Stack, n: u64) -> Step {
    let Some(head) = stack.pop_unit() else {
        return Step::Top;
    };
    if head.is_top() {
        return Step::Dropped;
    }
    // collect a₂…a_{ℓ−1}: whole pieces whose entries are all ⊵ a₁
    let mut block = vec![unit(fs_lw(&head, n))];
    while let Some(top) = stack.last() {
        if top.min() >= head.ord() {
            block.push(stack.pop().expect("checked"));
        } else if top.is_unit() {
            break;
        } else {
            stack.split_top();
        }
    }
    let block = if block.len() == 1 {
        block.pop().expect("one piece")
    } else {
        cat(block)
    };
    stack.push(rep(block, n + 1));
    Step::Repeated
}

/// a{n} on an annotated worm.
pub(crate) fn fs_lw(a: &Lw, n: u64) -> Lw {
    let mut entries = a.entries().clone();
    match fs_stack(&mut entries, n) {
        Step::Top => a.clone(),
        // o(⟨0⟩R) = o(R)+1
        Step::Dropped => Lw::with_ord(
            entries,
            pred(a.ord()).expect("a worm headed by ⟨0⟩ has successor type"),
        ),
        Step::Repeated => Lw::from_stack(entries),
    }
}

/// The worm being stepped.
#[derive(Clone)]
pub(crate) struct Stepper {
    stack: Stack,
    index: u64,
}

impl Stepper {
    pub(crate) fn new(a: &Lw) -> Stepper {
        Stepper {
            stack: a.entries().clone(),
            index: 0,
        }
    }

    /// n of the current worm a⟦n⟧.
    pub(crate) fn index(&self) -> u64 {
        self.index
    }

    pub(crate) fn is_top(&self) -> bool {
        self.stack.is_empty()
    }

    /// Number of entries, saturating at `u128::MAX`.
    pub(crate) fn len(&self) -> u128 {
        self.stack.len()
    }

    /// Advances a⟦n⟧ to a⟦n+1⟧ = a⟦n⟧{n+1}. Returns false at ⊤.
    pub(crate) fn step(&mut self) -> bool {
        if self.stack.is_empty() {
            return false;
        }
        self.index += 1;
        fs_stack(&mut self.stack, self.index);
        true
    }

    /// The current worm, or None when it has more than `cap` bracket pairs.
    pub(crate) fn materialize(&self, cap: usize) -> Option<BracketWorm> {
        if self.stack.size() > cap as u128 {
            return None;
        }
        let mut out = Vec::new();
        let mut memo = HashMap::new();
        self.stack.for_each_entry(|l, times| {
            let b = l.to_bracket_memo(&mut memo);
            out.extend(std::iter::repeat_n(b, times as usize));
        });
        Some(BracketWorm::new(out))
    }
}
