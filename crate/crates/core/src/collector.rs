//! Relation collection: random sampling, the incremental scanner, search
//! for individual-logarithm relations, and verification.

use std::collections::BTreeMap;

use log::{debug, warn};
use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decoder::{CodeSpec, DecodeOutcome};
use crate::field::{Field, QuotientElem, QuotientRing};
use crate::galois::{asymptotic_constant, count_relations, rational_to_f64};
use crate::instance::{Instance, Mode};
use crate::poly::DensePoly;
use crate::timing::{Phase, TimingReport};
use crate::{Error, Result};

/// Exponents handled by one worker task. Fixed so that results do not depend
/// on the number of workers.
pub const SCAN_BLOCK: u64 = 1 << 12;

/// `X^u · Π base(r) ≡ G (mod Q)`; `roots` are sorted factor-base descriptors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub u: u64,
    pub roots: Vec<u64>,
}

/// Provenance recorded with a relation set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMeta {
    pub mode: Mode,
    pub seed: u64,
    /// Inclusive scan range, if the set came from a scan.
    pub range: Option<(u64, u64)>,
    /// Next exponent a resumed scan should start from.
    pub cursor: Option<u64>,
}

/// Relations keyed by `u`, without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    relations: BTreeMap<u64, Relation>,
    pub meta: RelationMeta,
}

impl RelationSet {
    pub fn new(meta: RelationMeta) -> Self {
        Self {
            relations: BTreeMap::new(),
            meta,
        }
    }

    /// Returns false if a relation with this `u` is already present.
    pub fn insert(&mut self, rel: Relation) -> bool {
        if self.relations.contains_key(&rel.u) {
            return false;
        }
        self.relations.insert(rel.u, rel);
        true
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn contains(&self, u: u64) -> bool {
        self.relations.contains_key(&u)
    }

    pub fn get(&self, u: u64) -> Option<&Relation> {
        self.relations.get(&u)
    }

    /// Relations in increasing `u`.
    pub fn iter(&self) -> impl Iterator<Item = &Relation> {
        self.relations.values()
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.relations.keys().copied().collect()
    }

    /// Merges another set; relations already present are kept.
    pub fn extend(&mut self, other: impl IntoIterator<Item = Relation>) {
        for r in other {
            self.insert(r);
        }
    }
}

/// `I` modulo `G`, stored densely with `n` slots. When `G = X^n - X` the
/// slots form a ring buffer so that multiplying by `X` is a rotation.
#[derive(Clone, Debug)]
enum IPoly {
    Ring { buf: Vec<u64>, off: usize },
    Dense(Vec<u64>),
}

/// Incremental scanner state for exponent `u`: `f = f0·X^u mod Q` and the
/// matching interpolation polynomial `I`.
#[derive(Clone, Debug)]
pub struct CollectorState<'a> {
    code: &'a CodeSpec,
    ring: &'a QuotientRing,
    u: u64,
    f: QuotientElem,
    i: IPoly,
}

impl<'a> CollectorState<'a> {
    /// Starts at exponent `u` with `f` already equal to `f0·X^u mod Q`.
    pub fn start(inst: &'a Instance, f: QuotientElem, u: u64) -> Self {
        let code = &inst.code;
        let n = code.n();
        let mut dense = code.interp_shortcut(&f.to_poly()).i.into_coeffs();
        dense.resize(n, 0);
        let i = if code.is_frobenius_g() {
            IPoly::Ring { buf: dense, off: 0 }
        } else {
            IPoly::Dense(dense)
        };
        Self {
            code,
            ring: inst.tower.ring(),
            u,
            f,
            i,
        }
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn f(&self) -> &QuotientElem {
        &self.f
    }

    /// Coefficient of `X^(h-1)` in `f`.
    pub fn c(&self) -> u64 {
        *self.f.coeffs().last().expect("h >= 1")
    }

    fn coeff(&self, j: usize) -> u64 {
        match &self.i {
            IPoly::Ring { buf, off } => buf[(j + off) % buf.len()],
            IPoly::Dense(v) => v[j],
        }
    }

    /// The current `I` as a polynomial.
    pub fn i_poly(&self) -> DensePoly {
        DensePoly::new((0..self.code.n()).map(|j| self.coeff(j)).collect())
    }

    /// `I ÷ X^k`.
    pub fn s1(&self) -> DensePoly {
        DensePoly::new(
            (self.code.k()..self.code.n())
                .map(|j| self.coeff(j))
                .collect(),
        )
    }

    /// Moves to `u + 1`: `I ← X·I + X^(k+1) - X^k + c mod G`, `f ← X·f mod Q`.
    pub fn advance(&mut self) {
        let fp = self.code.base();
        let k = self.code.k();
        let c = self.ring.mul_x_in_place(&mut self.f);
        match &mut self.i {
            IPoly::Ring { buf, off } => {
                let n = buf.len();
                *off = (*off + n - 1) % n;
                let at = |j: usize| (j + *off) % n;
                // the old top coefficient now sits in slot 0; X^n ≡ X moves it to slot 1
                let t = std::mem::take(&mut buf[at(0)]);
                let s1 = at(1);
                buf[s1] = fp.add(buf[s1], t);
                let (sk, sk1, s0) = (at(k), at(k + 1), at(0));
                buf[sk1] = fp.add(buf[sk1], 1);
                buf[sk] = fp.sub(buf[sk], 1);
                buf[s0] = fp.add(buf[s0], c);
            }
            IPoly::Dense(v) => {
                let g = self.code.g().coeffs();
                let top = v.pop().expect("n >= 1");
                v.insert(0, 0);
                if top != 0 {
                    for (x, &gj) in v.iter_mut().zip(g) {
                        *x = fp.sub(*x, fp.mul(top, gj));
                    }
                }
                v[k + 1] = fp.add(v[k + 1], 1);
                v[k] = fp.sub(v[k], 1);
                v[0] = fp.add(v[0], c);
            }
        }
        self.u += 1;
    }
}

/// Decodes the word for the current state and, on success, returns the
/// relation descriptors after checking `f·v ≡ G (mod Q)` by field
/// arithmetic. Successes that fail the check are counted as rejected.
fn try_state<R: Rng + ?Sized>(
    inst: &Instance,
    f: &QuotientElem,
    s1: &DensePoly,
    rng: &mut R,
    timing: &mut TimingReport,
) -> Result<Option<Vec<u64>>> {
    timing.attempts += 1;
    if f.is_zero() {
        return Ok(None);
    }
    let errors = match inst.code.decode_s1(s1, rng, timing)? {
        DecodeOutcome::Failure => return Ok(None),
        DecodeOutcome::Success { errors, .. } => errors,
    };
    let roots = inst.base.descriptors_of(&errors)?;
    let ring = inst.tower.ring();
    let lhs = ring.mul(f, &inst.locator_product(&roots)?);
    if lhs != inst.g_element() {
        timing.rejected += 1;
        debug!("discarding locator {roots:?}: relation does not hold");
        return Ok(None);
    }
    timing.relations += 1;
    Ok(Some(roots))
}

/// Checks `X^u · Π base(r) ≡ G (mod Q)`.
pub fn verify_relation(rel: &Relation, inst: &Instance) -> bool {
    verify_target_relation(&inst.tower.ring().one(), rel, inst)
}

/// Checks `target · X^u · Π base(r) ≡ G (mod Q)`.
pub fn verify_target_relation(target: &QuotientElem, rel: &Relation, inst: &Instance) -> bool {
    let ring = inst.tower.ring();
    match inst.locator_product(&rel.roots) {
        Ok(v) => {
            let lhs = ring.mul(&ring.mul(target, &inst.tower.x_pow(rel.u)), &v);
            lhs == inst.g_element()
        }
        Err(_) => false,
    }
}

/// Samples `u` uniformly in `[1, q^h - 2]` until `count` relations are held.
/// Fails with [`Error::BudgetExhausted`] after `budget` draws (default
/// `16·(q^h - 1)`).
pub fn collect_random(
    inst: &Instance,
    count: usize,
    seed: u64,
    budget: Option<u64>,
) -> Result<(RelationSet, TimingReport)> {
    let out = collect_random_partial(inst, count, seed, budget)?;
    if out.budget_exhausted {
        return Err(Error::BudgetExhausted {
            attempts: out.timing.attempts,
            found: out.set.len(),
            rate: out.timing.success_rate(),
        });
    }
    Ok((out.set, out.timing))
}

/// Like [`collect_random`], but returns what was found when the budget runs
/// out. The cursor of the output is unused.
pub fn collect_random_partial(
    inst: &Instance,
    count: usize,
    seed: u64,
    budget: Option<u64>,
) -> Result<ScanOutput> {
    let meta = RelationMeta {
        mode: inst.mode,
        seed,
        range: None,
        cursor: None,
    };
    let mut set = RelationSet::new(meta);
    let mut timing = TimingReport::default();
    let order = inst.order();
    if count > 0 && order < 3 {
        return Err(Error::InvalidField(
            "group too small to sample exponents".into(),
        ));
    }
    let budget = budget.unwrap_or(order.saturating_mul(16));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while set.len() < count {
        if timing.attempts >= budget {
            return Ok(ScanOutput {
                set,
                timing,
                cursor: 0,
                budget_exhausted: true,
            });
        }
        let u = rng.gen_range(1..order);
        let (f, ws) = timing.time(Phase::Update, || {
            let f = inst.tower.x_pow(u);
            let ws = inst.code.interp_shortcut(&f.to_poly());
            (f, ws)
        });
        if set.contains(u) {
            timing.attempts += 1;
            continue;
        }
        if let Some(roots) = try_state(inst, &f, &ws.s1, &mut rng, &mut timing)? {
            set.insert(Relation { u, roots });
        }
    }
    Ok(ScanOutput {
        set,
        timing,
        cursor: 0,
        budget_exhausted: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Stop once this many relations are held.
    pub count: Option<usize>,
    /// Maximum number of exponents to try.
    pub budget: Option<u64>,
    pub workers: usize,
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            count: None,
            budget: None,
            workers: 1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanOutput {
    pub set: RelationSet,
    pub timing: TimingReport,
    /// First exponent not covered; `u_end + 1` when the range is done.
    pub cursor: u64,
    /// True if the budget ran out before the range or the count was reached.
    pub budget_exhausted: bool,
}

/// Scans `u ∈ [u_start, u_end]` with the incremental update. The range is
/// cut into blocks of [`SCAN_BLOCK`] exponents; each block is seeded with
/// one exponentiation and one shortcut interpolation. With a `count`, the
/// result is the `count` relations of smallest `u`, whatever the worker
/// count.
pub fn scan_incremental(
    inst: &Instance,
    u_start: u64,
    u_end: u64,
    opts: ScanOptions,
) -> Result<ScanOutput> {
    let order = inst.order();
    if u_start > u_end || u_end >= order.max(1) {
        return Err(Error::InvalidCode(format!(
            "scan range {u_start}:{u_end} outside [0, {}]",
            order.saturating_sub(1)
        )));
    }
    let meta = RelationMeta {
        mode: inst.mode,
        seed: opts.seed,
        range: Some((u_start, u_end)),
        cursor: None,
    };
    let mut set = RelationSet::new(meta);
    let mut timing = TimingReport::default();
    // last exponent the budget allows, None if nothing may be tried
    let last = match opts.budget {
        Some(0) => None,
        Some(b) => Some(u_end.min(u_start.saturating_add(b - 1))),
        None => Some(u_end),
    };
    let workers = opts.workers.max(1) as u64;
    let done = |set: &RelationSet| opts.count.is_some_and(|c| set.len() >= c);
    let mut cursor = u_start;
    if let Some(last) = last {
        while cursor <= last && !done(&set) {
            let round_end = last.min(cursor.saturating_add(workers * SCAN_BLOCK - 1));
            let blocks: Vec<(u64, u64)> = (0..workers)
                .map(|w| cursor + w * SCAN_BLOCK)
                .filter(|&b| b <= round_end)
                .map(|b| (b, round_end.min(b + SCAN_BLOCK - 1)))
                .collect();
            let results: Vec<Result<(Vec<Relation>, TimingReport)>> = if blocks.len() == 1 {
                vec![scan_block(inst, blocks[0].0, blocks[0].1, opts.seed)]
            } else {
                std::thread::scope(|s| {
                    let handles: Vec<_> = blocks
                        .iter()
                        .map(|&(a, b)| s.spawn(move || scan_block(inst, a, b, opts.seed)))
                        .collect();
                    handles
                        .into_iter()
                        .map(|h| h.join().expect("scan worker panicked"))
                        .collect()
                })
            };
            for r in results {
                let (rels, t) = r?;
                timing += &t;
                set.extend(rels);
            }
            cursor = round_end + 1;
        }
    }
    if let Some(c) = opts.count.filter(|&c| c > 0 && set.len() >= c) {
        // keep the c smallest exponents; work past the last one is discarded
        let keep: Vec<Relation> = set.iter().take(c).cloned().collect();
        let cut = keep.last().expect("c >= 1").u;
        timing.relations -= (set.len() - keep.len()) as u64;
        timing.attempts -= cursor - (cut + 1);
        set = RelationSet::new(set.meta.clone());
        set.extend(keep);
        cursor = cut + 1;
    }
    let budget_exhausted = !done(&set) && last.is_none_or(|l| l < u_end) && cursor <= u_end;
    set.meta.cursor = Some(cursor);
    Ok(ScanOutput {
        set,
        timing,
        cursor,
        budget_exhausted,
    })
}

fn scan_block(inst: &Instance, a: u64, b: u64, seed: u64) -> Result<(Vec<Relation>, TimingReport)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ a.rotate_left(17));
    let mut timing = TimingReport::default();
    let mut state = timing.time(Phase::Update, || {
        CollectorState::start(inst, inst.tower.x_pow(a), a)
    });
    let mut out = Vec::new();
    loop {
        if let Some(roots) = try_state(inst, state.f(), &state.s1(), &mut rng, &mut timing)? {
            out.push(Relation {
                u: state.u(),
                roots,
            });
        }
        if state.u() == b {
            break;
        }
        timing.time(Phase::Update, || state.advance());
    }
    Ok((out, timing))
}

/// Finds the smallest `u >= 0` such that `target·X^u` decodes, giving
/// `target · X^u · Π base(r) ≡ G (mod Q)`. At most `budget` exponents are
/// tried (default: the whole group).
pub fn individual_log_relation(
    inst: &Instance,
    target: &QuotientElem,
    seed: u64,
    budget: Option<u64>,
) -> Result<Relation> {
    if target.is_zero() {
        return Err(Error::ZeroElement);
    }
    let budget = budget.unwrap_or(inst.order()).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut timing = TimingReport::default();
    let mut state = CollectorState::start(inst, target.clone(), 0);
    loop {
        if let Some(roots) = try_state(inst, state.f(), &state.s1(), &mut rng, &mut timing)? {
            let rel = Relation {
                u: state.u(),
                roots,
            };
            if verify_target_relation(target, &rel, inst) {
                return Ok(rel);
            }
            warn!("search relation at u = {} failed re-verification", rel.u);
        }
        if state.u() + 1 >= budget {
            return Err(Error::BudgetExhausted {
                attempts: timing.attempts,
                found: 0,
                rate: timing.success_rate(),
            });
        }
        state.advance();
    }
}

/// Success probability of one decode.
#[derive(Clone, Debug, PartialEq)]
pub struct Probability {
    /// Decodable residues: `C(n, h)` or `N_e(h)`.
    pub count: BigUint,
    /// `q^h`.
    pub total: BigUint,
    /// `C(n, h)/q^h`, or `N_e(h)/q^h` with a helper field.
    pub exact: BigRational,
    pub exact_f64: f64,
    /// `n^h/(h!·q^h)`, or the limit `c_e(h)` with a helper field.
    pub approx: f64,
}

/// `counts` are the orbit counts `n_i` of the helper field; `None` for plain
/// decoding over a support of size `n`.
pub fn estimate_probability(n: u64, h: usize, q: u64, counts: Option<&[u64]>) -> Probability {
    let total = BigUint::from(q).pow(h as u32);
    let (count, approx) = match counts {
        None => {
            let fact: f64 = (1..=h).map(|i| i as f64).product();
            let approx = (n as f64 / q as f64).powi(h as i32) / fact;
            (binomial(BigUint::from(n), BigUint::from(h as u64)), approx)
        }
        Some(c) => {
            let approx = rational_to_f64(&asymptotic_constant(c.len(), h));
            (count_relations(c, h as u64), approx)
        }
    };
    let exact = BigRational::new(BigInt::from(count.clone()), BigInt::from(total.clone()));
    Probability {
        count,
        total,
        exact_f64: rational_to_f64(&exact),
        exact,
        approx,
    }
}

/// [`estimate_probability`] for an instance.
pub fn instance_probability(inst: &Instance) -> Probability {
    let counts = match &inst.base {
        crate::galois::FactorBase::Orbits(b) => Some(b.counts().to_vec()),
        _ => None,
    };
    estimate_probability(
        inst.code.n() as u64,
        inst.tower.h(),
        inst.tower.q(),
        counts.as_deref(),
    )
}

impl Probability {
    pub fn is_one(&self) -> bool {
        self.exact.is_one()
    }
}
