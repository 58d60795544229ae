//! Linear algebra over `Z/(q^h - 1)`: relation matrices, elimination modulo
//! prime powers, Pohlig-Hellman for small factors, and the logarithm table.

use std::collections::{BTreeMap, HashMap};

use log::{debug, info};

use crate::collector::{
    individual_log_relation, scan_incremental, Relation, RelationSet, ScanOptions,
};
use crate::field::QuotientElem;
use crate::instance::Instance;
use crate::nt::{self, add_mod, inv_mod, mul_mod, sub_mod};
use crate::timing::{Phase, TimingReport};
use crate::{Error, Result};

pub use crate::nt::crt_combine;

/// Prime powers up to this size are handled by Pohlig-Hellman with
/// baby-step/giant-step instead of linear algebra.
pub const DEFAULT_SMALL_THRESHOLD: u64 = 1 << 20;

/// One equation `constant + Σ coeff·x[col] ≡ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRow {
    pub constant: u64,
    /// `(column, coefficient)`, ascending by column, coefficients nonzero.
    pub entries: Vec<(usize, u64)>,
}

impl MatrixRow {
    /// Nonzero entries, counting the constant.
    pub fn weight(&self) -> usize {
        self.entries.len() + usize::from(self.constant != 0)
    }
}

/// Relations as equations modulo `modulus`. Columns are the factor-base
/// elements other than `X`, in base order, followed by one column holding
/// `-log G`. A root `X` adds 1 to the constant since `log X = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMatrix {
    pub rows: Vec<MatrixRow>,
    /// Descriptor of each column except the last.
    pub columns: Vec<u64>,
    pub modulus: u64,
}

impl RelationMatrix {
    /// Number of unknowns including the `-log G` column.
    pub fn ncols(&self) -> usize {
        self.columns.len() + 1
    }

    pub fn g_column(&self) -> usize {
        self.columns.len()
    }

    /// Dense rows `[constant, x_0, ..., -log G]`.
    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0; self.ncols() + 1];
                d[0] = r.constant;
                for &(c, a) in &r.entries {
                    d[c + 1] = a;
                }
                d
            })
            .collect()
    }

    pub fn max_row_weight(&self) -> usize {
        self.rows.iter().map(MatrixRow::weight).max().unwrap_or(0)
    }

    fn reduced(&self, m: u64) -> Vec<MatrixRow> {
        self.rows
            .iter()
            .map(|r| MatrixRow {
                constant: r.constant % m,
                entries: r
                    .entries
                    .iter()
                    .map(|&(c, a)| (c, a % m))
                    .filter(|e| e.1 != 0)
                    .collect(),
            })
            .collect()
    }
}

/// Builds the equations `u + Σ log(b) - log G ≡ 0 (mod m)`.
pub fn build_system<'a>(
    rels: impl IntoIterator<Item = &'a Relation>,
    inst: &Instance,
    m: u64,
) -> Result<RelationMatrix> {
    if m == 0 || !inst.order().is_multiple_of(m) {
        return Err(Error::InvalidCode(format!(
            "modulus {m} does not divide {}",
            inst.order()
        )));
    }
    let x_desc = inst.x_descriptor();
    let columns: Vec<u64> = inst
        .base
        .descriptors()
        .into_iter()
        .filter(|&d| Some(d) != x_desc)
        .collect();
    let index: HashMap<u64, usize> = columns.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let g_col = columns.len();
    let mut rows = Vec::new();
    for rel in rels {
        let mut constant = rel.u % m;
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        for &r in &rel.roots {
            if Some(r) == x_desc {
                constant = add_mod(constant, 1 % m, m);
                continue;
            }
            let c = *index.get(&r).ok_or(Error::UnknownBasisElement(r))?;
            let e = acc.entry(c).or_insert(0);
            *e = add_mod(*e, 1 % m, m);
        }
        acc.insert(g_col, 1 % m);
        let entries = acc.into_iter().filter(|e| e.1 != 0).collect();
        rows.push(MatrixRow { constant, entries });
    }
    Ok(RelationMatrix {
        rows,
        columns,
        modulus: m,
    })
}

/// Basis of `{v : M v ≡ 0 (mod p)}` for a dense matrix and prime `p`. A
/// one-dimensional kernel with nonzero first coordinate is scaled so that
/// coordinate is 1.
pub fn kernel_mod_prime(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x % p).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p).expect("nonzero mod prime");
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = sub_mod(0, a[i][free], p);
        }
        basis.push(v);
    }
    if basis.len() == 1 && basis[0][0] != 0 {
        let inv = inv_mod(basis[0][0], p).expect("nonzero mod prime");
        for x in basis[0].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
    }
    basis
}

/// Inverse of a square matrix modulo a prime, `None` if singular.
fn invert_mod_prime(b: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = b.len();
    let mut a: Vec<Vec<u64>> = b
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<u64> = r.iter().map(|&x| x % p).collect();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&i| a[i][c] != 0)?;
        a.swap(c, pr);
        let inv = inv_mod(a[c][c], p)?;
        for x in a[c].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != c && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Picks `ncols` rows whose square submatrix is invertible modulo the prime
/// `p`. Rows touching a single unresolved column are taken first; the rest
/// is settled by dense elimination.
fn select_rows(rows: &[MatrixRow], ncols: usize, p: u64) -> Result<Vec<usize>> {
    let mut pivoted = vec![false; ncols];
    let mut used = vec![false; rows.len()];
    let mut chosen = Vec::new();
    // structured pass
    loop {
        let mut progress = false;
        for (i, row) in rows.iter().enumerate() {
            if used[i] {
                continue;
            }
            let mut open = row
                .entries
                .iter()
                .filter(|&&(c, a)| !pivoted[c] && a % p != 0);
            if let (Some(&(c, _)), None) = (open.next(), open.next()) {
                pivoted[c] = true;
                used[i] = true;
                chosen.push(i);
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let rest: Vec<usize> = (0..ncols).filter(|&c| !pivoted[c]).collect();
    let pos: HashMap<usize, usize> = rest.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    debug!("singleton pass settled {} of {ncols} columns", chosen.len());
    // echelon basis over the remaining columns, keyed by pivot position
    let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if echelon.len() == rest.len() {
            break;
        }
        if used[i] {
            continue;
        }
        let mut v = vec![0u64; rest.len()];
        for &(c, a) in &row.entries {
            if let Some(&j) = pos.get(&c) {
                v[j] = a % p;
            }
        }
        for (pc, b) in &echelon {
            if v[*pc] != 0 {
                let f = v[*pc];
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[pc], p).expect("nonzero mod prime");
            for x in v.iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            echelon.push((pc, v));
            chosen.push(i);
        }
    }
    if echelon.len() < rest.len() {
        return Err(Error::RankDeficient {
            modulus: p,
            detail: format!(
                "rank {} of {ncols} unknowns from {} relations; collect more relations",
                chosen.len(),
                rows.len()
            ),
        });
    }
    Ok(chosen)
}

/// Solves the inhomogeneous system `constant + A x ≡ 0 (mod ℓ^k)`, which
/// must have a unique solution. Elimination runs modulo `ℓ`; the solution
/// is lifted one `ℓ`-adic digit at a time, and every row is checked.
pub fn solve_mod_prime_power(matrix: &RelationMatrix, l: u64, k: u32) -> Result<Vec<u64>> {
    if !nt::is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    let m = nt::checked_pow(l, k).ok_or_else(|| Error::InvalidCode("ℓ^k overflows".into()))?;
    let n = matrix.ncols();
    let rows = matrix.reduced(m);
    let chosen = select_rows(&rows, n, l)?;
    let dense = |i: usize| {
        let mut d = vec![0u64; n];
        for &(c, a) in &rows[i].entries {
            d[c] = a;
        }
        d
    };
    let b_full: Vec<Vec<u64>> = chosen.iter().map(|&i| dense(i)).collect();
    let rhs: Vec<u64> = chosen
        .iter()
        .map(|&i| sub_mod(0, rows[i].constant, m))
        .collect();
    let binv = invert_mod_prime(&b_full, l).ok_or_else(|| Error::RankDeficient {
        modulus: l,
        detail: "selected subsystem is singular".into(),
    })?;
    let mut x = vec![0u64; n];
    let mut lj = 1u64;
    for _ in 0..k {
        // residual (rhs - B x) is divisible by ℓ^j
        let digit_rhs: Vec<u64> = b_full
            .iter()
            .zip(&rhs)
            .map(|(row, &r)| {
                let bx = row
                    .iter()
                    .zip(&x)
                    .fold(0, |s, (&a, &xi)| add_mod(s, mul_mod(a, xi, m), m));
                (sub_mod(r, bx, m) / lj) % l
            })
            .collect();
        for (xi, brow) in x.iter_mut().zip(&binv) {
            let d = brow
                .iter()
                .zip(&digit_rhs)
                .fold(0, |s, (&a, &y)| add_mod(s, mul_mod(a, y, l), l));
            *xi = add_mod(*xi, mul_mod(d, lj, m), m);
        }
        lj = lj.saturating_mul(l);
    }
    for (i, row) in rows.iter().enumerate() {
        let s = row.entries.iter().fold(row.constant, |s, &(c, a)| {
            add_mod(s, mul_mod(a, x[c], m), m)
        });
        if s != 0 {
            return Err(Error::Verification(format!(
                "relation row {i} is inconsistent modulo {m}"
            )));
        }
    }
    Ok(x)
}

/// `log_γ(t)` in the subgroup of prime order `l` generated by `gamma`.
fn bsgs(
    inst: &Instance,
    baby: &HashMap<QuotientElem, u64>,
    giant: &QuotientElem,
    m: u64,
    l: u64,
    t: &QuotientElem,
) -> Result<u64> {
    let ring = inst.tower.ring();
    let mut y = t.clone();
    for i in 0..=m {
        if let Some(&j) = baby.get(&y) {
            return Ok((i * m + j) % l);
        }
        y = ring.mul(&y, giant);
    }
    Err(Error::Verification(format!(
        "element is not in the subgroup of order {l}"
    )))
}

/// `log_X(t) mod ℓ^k` for each target, digit by digit with baby-step/giant-step
/// in the subgroup of order `ℓ`.
pub fn small_order_logs(
    inst: &Instance,
    targets: &[QuotientElem],
    l: u64,
    k: u32,
) -> Result<Vec<u64>> {
    let n = inst.order();
    let lk = nt::checked_pow(l, k)
        .filter(|lk| n.is_multiple_of(*lk))
        .ok_or_else(|| {
            Error::InvalidCode(format!("{l}^{k} does not divide the group order {n}"))
        })?;
    let ring = inst.tower.ring();
    let gamma = inst.tower.x_pow(n / l);
    let m = (l as f64).sqrt().ceil() as u64;
    let mut baby = HashMap::with_capacity(m as usize);
    let mut acc = ring.one();
    for j in 0..m {
        baby.entry(acc.clone()).or_insert(j);
        acc = ring.mul(&acc, &gamma);
    }
    // γ^(-m) = X^(n - m·n/l)
    let giant = inst.tower.x_pow((n - (m % l) * (n / l)) % n);
    targets
        .iter()
        .map(|t| {
            if t.is_zero() {
                return Err(Error::ZeroElement);
            }
            let mut x = 0u64;
            let mut lj = 1u64;
            for j in 0..k {
                // (t · X^(-x))^(n / ℓ^(j+1))
                let shifted = ring.mul(t, &inst.tower.x_pow((n - x % n) % n));
                let h = ring.pow(&shifted, n / (lj * l));
                let d = bsgs(inst, &baby, &giant, m, l, &h)?;
                x += d * lj;
                if j + 1 < k {
                    lj *= l;
                }
            }
            Ok(x % lk)
        })
        .collect()
}

/// Logarithms of every factor-base element and of `G`, base `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTable {
    /// `q^h - 1`.
    pub order: u64,
    /// Descriptor → logarithm.
    pub logs: BTreeMap<u64, u64>,
    pub log_g: u64,
}

impl LogTable {
    pub fn get(&self, desc: u64) -> Option<u64> {
        self.logs.get(&desc).copied()
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    /// Checks `X^log = element` for every entry and for `G`.
    pub fn verify(&self, inst: &Instance) -> Result<()> {
        if self.order != inst.order() {
            return Err(Error::Verification(format!(
                "table for a group of order {}, instance has {}",
                self.order,
                inst.order()
            )));
        }
        for d in inst.base.descriptors() {
            let log = self
                .get(d)
                .ok_or_else(|| Error::Verification(format!("no logarithm for base element {d}")))?;
            if inst.tower.x_pow(log) != inst.base_element(d)? {
                return Err(Error::Verification(format!(
                    "X^{log} is not base element {d}"
                )));
            }
        }
        if inst.tower.x_pow(self.log_g) != inst.g_element() {
            return Err(Error::Verification(format!("X^{} is not G", self.log_g)));
        }
        Ok(())
    }

    /// Checks `u + Σ log(b) ≡ log G` for a relation.
    pub fn balances(&self, rel: &Relation) -> bool {
        let n = self.order;
        let mut s = rel.u % n;
        for r in &rel.roots {
            match self.get(*r) {
                Some(l) => s = add_mod(s, l, n),
                None => return false,
            }
        }
        s == self.log_g
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Largest prime power solved by Pohlig-Hellman.
    pub small_threshold: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            small_threshold: DEFAULT_SMALL_THRESHOLD,
        }
    }
}

/// Residues of every column modulo one prime power: base descriptors in base
/// order, then `log G`.
fn residues_for(
    rels: &RelationSet,
    inst: &Instance,
    (l, k, lk): (u64, u32, u64),
    opts: SolveOptions,
) -> Result<Vec<u64>> {
    let descs = inst.base.descriptors();
    let x_desc = inst.x_descriptor();
    if lk <= opts.small_threshold {
        let mut targets = descs
            .iter()
            .map(|&d| inst.base_element(d))
            .collect::<Result<Vec<_>>>()?;
        targets.push(inst.g_element());
        return small_order_logs(inst, &targets, l, k);
    }
    let matrix = build_system(rels.iter(), inst, lk)?;
    let x = solve_mod_prime_power(&matrix, l, k)?;
    let mut out = Vec::with_capacity(descs.len() + 1);
    let mut col = 0;
    for &d in &descs {
        if Some(d) == x_desc {
            out.push(1 % lk);
        } else {
            out.push(x[col]);
            col += 1;
        }
    }
    out.push(sub_mod(0, x[matrix.g_column()], lk));
    Ok(out)
}

/// Solves for the logarithms of the factor base and of `G`. Prime powers up
/// to the threshold use Pohlig-Hellman, the others linear algebra on the
/// relations; the results are combined by CRT and verified by
/// exponentiation.
pub fn derive_log_table(
    rels: &RelationSet,
    inst: &Instance,
    opts: SolveOptions,
) -> Result<(LogTable, TimingReport)> {
    let mut timing = TimingReport::default();
    let powers: Vec<(u64, u32, u64)> = inst.fact.prime_powers().collect();
    let per_prime: Vec<Result<Vec<u64>>> = timing.time(Phase::LinearAlgebra, || {
        std::thread::scope(|s| {
            let handles: Vec<_> = powers
                .iter()
                .map(|&pp| s.spawn(move || residues_for(rels, inst, pp, opts)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("solver thread panicked"))
                .collect()
        })
    });
    let per_prime = per_prime.into_iter().collect::<Result<Vec<_>>>()?;
    let descs = inst.base.descriptors();
    let combine = |col: usize| -> Result<u64> {
        let res: Vec<(u64, u64)> = powers
            .iter()
            .zip(&per_prime)
            .map(|(&(_, _, lk), r)| (r[col], lk))
            .collect();
        crt_combine(&res)
    };
    let mut logs = BTreeMap::new();
    for (i, &d) in descs.iter().enumerate() {
        logs.insert(d, combine(i)?);
    }
    let table = LogTable {
        order: inst.order(),
        logs,
        log_g: combine(descs.len())?,
    };
    table.verify(inst)?;
    if let Some(bad) = rels.iter().find(|r| !table.balances(r)) {
        return Err(Error::Verification(format!(
            "relation at u = {} does not balance",
            bad.u
        )));
    }
    info!("log table verified: {} entries", table.len());
    Ok((table, timing))
}

/// `log_X(target)` from a search relation `target·X^u·Π b ≡ G`, verified by
/// exponentiation.
pub fn individual_log(
    table: &LogTable,
    inst: &Instance,
    target: &QuotientElem,
    seed: u64,
    budget: Option<u64>,
) -> Result<u64> {
    let rel = individual_log_relation(inst, target, seed, budget)?;
    let n = table.order;
    let mut log = sub_mod(table.log_g, rel.u % n, n);
    for r in &rel.roots {
        let l = table.get(*r).ok_or(Error::UnknownBasisElement(*r))?;
        log = sub_mod(log, l, n);
    }
    if inst.tower.x_pow(log) != *target {
        return Err(Error::Verification(format!("X^{log} is not the target")));
    }
    Ok(log)
}

/// Relations to collect for a linear-algebra solve: the unknown count plus
/// a 20% margin.
pub fn default_relation_target(inst: &Instance) -> usize {
    let unknowns = inst.base.len() + 1;
    unknowns + unknowns.div_ceil(5)
}

/// Collects relations by scanning from `u = 1` and solves, scanning further
/// whenever the system is rank deficient. Relations are only needed when
/// some prime power exceeds the threshold.
pub fn solve_instance(
    inst: &Instance,
    opts: SolveOptions,
    scan: ScanOptions,
    max_rounds: usize,
) -> Result<(LogTable, RelationSet, TimingReport)> {
    let needs_relations = inst
        .fact
        .prime_powers()
        .any(|(_, _, lk)| lk > opts.small_threshold);
    let last = inst.order() - 1;
    let mut target = if needs_relations {
        scan.count.unwrap_or(default_relation_target(inst))
    } else {
        0
    };
    let step = target.max(1);
    let mut timing = TimingReport::default();
    let mut rels: Option<RelationSet> = None;
    let mut cursor = 1u64.min(last);
    for round in 0..max_rounds.max(1) {
        let have = rels.as_ref().map_or(0, RelationSet::len);
        if target > have && cursor <= last {
            let out = scan_incremental(
                inst,
                cursor,
                last,
                ScanOptions {
                    count: Some(target - have),
                    ..scan
                },
            )?;
            timing += &out.timing;
            cursor = out.cursor;
            match &mut rels {
                Some(r) => {
                    r.extend(out.set.iter().cloned());
                    r.meta.cursor = Some(cursor);
                }
                None => rels = Some(out.set),
            }
        }
        let set = rels.get_or_insert_with(|| {
            RelationSet::new(crate::collector::RelationMeta {
                mode: inst.mode,
                seed: scan.seed,
                range: None,
                cursor: None,
            })
        });
        match derive_log_table(set, inst, opts) {
            Ok((table, t)) => {
                timing += &t;
                return Ok((table, set.clone(), timing));
            }
            Err(Error::RankDeficient { detail, .. }) if cursor <= last => {
                debug!("round {round}: {detail}");
                target += step;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::RankDeficient {
        modulus: inst.order(),
        detail: format!("still deficient after {max_rounds} rounds"),
    })
}
