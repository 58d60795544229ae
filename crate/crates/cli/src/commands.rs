use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rsdl::collector::{
    collect_random_partial, instance_probability, scan_incremental, verify_relation, RelationMeta,
    RelationSet, ScanOptions, ScanOutput,
};
use rsdl::field::FieldTower;
use rsdl::instance::{parse_poly, Instance, Mode};
use rsdl::io::{self, FieldHeader, RelationFile};
use rsdl::nt::factor_group_order;
use rsdl::solver::{default_relation_target, derive_log_table, individual_log, SolveOptions};
use rsdl::timing::TimingReport;
use rsdl::Error;

use crate::context::Context;
use crate::CliError;

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes through a temporary sibling so a failed run never leaves a
/// truncated file behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut f = File::create(&tmp).map_err(io_err)?;
    f.write_all(bytes).map_err(io_err)?;
    f.sync_all().map_err(io_err)?;
    std::fs::rename(&tmp, path).map_err(io_err)
}

fn read_relation_file(path: &Path, inst: &Instance) -> Result<RelationFile, CliError> {
    let file = io::read_relations(open(path)?)?;
    if !file.header.matches(inst) {
        return Err(CliError::Config(format!(
            "{} was written for a different field or mode",
            path.display()
        )));
    }
    Ok(file)
}

#[allow(clippy::too_many_arguments)]
pub fn setup(
    p: u64,
    h: usize,
    q: &str,
    mode: &str,
    e: Option<usize>,
    seed: u64,
    threshold: Option<u64>,
    out: &Path,
) -> Result<(), CliError> {
    let mode = Mode::from_parts(mode, e)?;
    let fact = factor_group_order(p, h as u32)?;
    let tower = if q.trim() == "auto" {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FieldTower::random_primitive(p, h, &fact, &mut rng)?
    } else {
        FieldTower::new(p, h, &io::parse_list(q)?)?
    };
    let inst = Instance::with_factorization(tower, mode, fact)?;
    let ctx = Context {
        p,
        h,
        q: inst.tower.modulus().coeffs().to_vec(),
        mode: mode.name().to_string(),
        e: matches!(mode, Mode::Hf { .. }).then(|| mode.e()),
        seed,
        small_threshold: threshold.unwrap_or(rsdl::solver::DEFAULT_SMALL_THRESHOLD),
    };
    write_atomic(out, ctx.to_toml().as_bytes())?;
    let code = &inst.code;
    let prob = instance_probability(&inst);
    println!(
        "field      GF({p}^{h}), Q = {}",
        inst.tower.modulus().display()
    );
    println!("order      {}", inst.fact);
    println!(
        "mode       {mode}{}",
        if mode.e() > 1 {
            format!(", e = {}", mode.e())
        } else {
            String::new()
        }
    );
    println!(
        "code       (n, k, mu, d) = ({}, {}, {}, {})",
        code.n(),
        code.k(),
        code.mu(),
        code.d()
    );
    println!("base       {} elements", inst.base.len());
    println!(
        "success    {}/{} = {:.6} (asymptotic {:.6})",
        prob.count, prob.total, prob.exact_f64, prob.approx
    );
    println!("context    {}", out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn collect(
    ctx_path: &Path,
    out: &Path,
    range: Option<&str>,
    count: Option<usize>,
    random: bool,
    workers: usize,
    budget: Option<u64>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let ctx = Context::load(ctx_path)?;
    let inst = ctx.instance()?;
    let seed = seed.unwrap_or(ctx.seed);
    let existing = if out.exists() {
        Some(read_relation_file(out, &inst)?)
    } else {
        None
    };
    let last = inst.order() - 1;
    let (start, end) = match range {
        Some(r) => io::parse_range(r)?,
        None => (
            existing
                .as_ref()
                .and_then(|f| f.set.meta.cursor)
                .unwrap_or(1),
            last,
        ),
    };
    if !random && (start > end.saturating_add(1) || end > last) {
        return Err(CliError::Config(format!(
            "range {start}:{end} outside [0, {last}]"
        )));
    }
    let result = if random {
        let count = count.unwrap_or_else(|| default_relation_target(&inst));
        collect_random_partial(&inst, count, seed, budget)?
    } else if start > end {
        // nothing left to scan
        ScanOutput {
            set: RelationSet::new(RelationMeta {
                mode: inst.mode,
                seed,
                range: None,
                cursor: None,
            }),
            timing: TimingReport::default(),
            cursor: start,
            budget_exhausted: false,
        }
    } else {
        scan_incremental(
            &inst,
            start,
            end,
            ScanOptions {
                count,
                budget,
                workers,
                seed,
            },
        )?
    };
    let mut set = match existing {
        Some(f) => f.set,
        None => RelationSet::new(result.set.meta.clone()),
    };
    let before = set.len();
    set.extend(result.set.iter().cloned());
    set.meta.seed = seed;
    if !random {
        set.meta.range = Some((start, end));
        set.meta.cursor = Some(if start > end { start } else { result.cursor });
    }
    let mut bytes = Vec::new();
    io::write_relations(&mut bytes, &FieldHeader::of(&inst), &set)?;
    write_atomic(out, &bytes)?;
    eprintln!("{}", result.timing);
    println!("relations  {} ({} new)", set.len(), set.len() - before);
    if let Some(c) = set.meta.cursor {
        println!("cursor     {c}");
    }
    if result.budget_exhausted {
        return Err(Error::BudgetExhausted {
            attempts: result.timing.attempts,
            found: result.set.len(),
            rate: result.timing.success_rate(),
        }
        .into());
    }
    Ok(())
}

pub fn solve(
    ctx_path: &Path,
    relations: &Path,
    out: &Path,
    threshold: Option<u64>,
) -> Result<(), CliError> {
    let ctx = Context::load(ctx_path)?;
    let inst = ctx.instance()?;
    let file = read_relation_file(relations, &inst)?;
    if let Some(rel) = file.set.iter().find(|r| !verify_relation(r, &inst)) {
        return Err(Error::Verification(format!(
            "{} line {}: relation at u = {} does not hold",
            relations.display(),
            file.lines[&rel.u],
            rel.u
        ))
        .into());
    }
    let opts = SolveOptions {
        small_threshold: threshold.unwrap_or(ctx.small_threshold),
    };
    let (table, timing) = derive_log_table(&file.set, &inst, opts)?;
    let mut bytes = Vec::new();
    io::write_log_table(&mut bytes, &inst, &table)?;
    write_atomic(out, &bytes)?;
    eprintln!("{timing}");
    println!(
        "logarithms {} verified, log G = {}",
        table.len(),
        table.log_g
    );
    println!("table      {}", out.display());
    Ok(())
}

pub fn log(
    ctx_path: &Path,
    table_path: &Path,
    target: &str,
    budget: Option<u64>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let ctx = Context::load(ctx_path)?;
    let inst = ctx.instance()?;
    let table = io::read_log_table(open(table_path)?)?.into_table(&inst)?;
    let f = inst.tower.ring().reduce(&parse_poly(target, ctx.p)?);
    let log = individual_log(&table, &inst, &f, seed.unwrap_or(ctx.seed), budget)?;
    println!("{log}");
    Ok(())
}

pub fn estimate(ctx_path: &Path) -> Result<(), CliError> {
    let ctx = Context::load(ctx_path)?;
    let inst = ctx.instance()?;
    let prob = instance_probability(&inst);
    println!(
        "exact       {}/{} = {:.6e}",
        prob.count, prob.total, prob.exact_f64
    );
    println!("asymptotic  {:.6e}", prob.approx);
    if prob.exact_f64 > 0.0 {
        let target = default_relation_target(&inst);
        println!("attempts    {:.2} per relation", 1.0 / prob.exact_f64);
        println!(
            "expected    {:.0} attempts for {target} relations",
            target as f64 / prob.exact_f64
        );
    }
    Ok(())
}

pub fn verify(
    ctx_path: &Path,
    table: Option<&Path>,
    relations: Option<&Path>,
) -> Result<(), CliError> {
    if table.is_none() && relations.is_none() {
        return Err(CliError::Config(
            "nothing to verify: pass --table and/or --relations".into(),
        ));
    }
    let ctx = Context::load(ctx_path)?;
    let inst = ctx.instance()?;
    let table = match table {
        Some(path) => {
            let t = io::read_log_table(open(path)?)?
                .into_table(&inst)
                .map_err(|e| match e {
                    Error::Verification(m) => {
                        Error::Verification(format!("{}: {m}", path.display()))
                    }
                    other => other,
                })?;
            println!("table      {} entries verified", t.len());
            Some(t)
        }
        None => None,
    };
    if let Some(path) = relations {
        let file = read_relation_file(path, &inst)?;
        for rel in file.set.iter() {
            let ok = verify_relation(rel, &inst) && table.as_ref().is_none_or(|t| t.balances(rel));
            if !ok {
                return Err(Error::Verification(format!(
                    "{} line {}: relation at u = {} does not hold",
                    path.display(),
                    file.lines[&rel.u],
                    rel.u
                ))
                .into());
            }
        }
        println!("relations  {} verified", file.set.len());
    }
    Ok(())
}
