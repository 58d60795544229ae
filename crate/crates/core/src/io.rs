//! Text formats for relation files and logarithm tables.
//!
//! Both start with `# key=value` header lines describing the field. A
//! relation line is `u;r1,r2,...` with roots as base-q integers (orbit
//! representatives with a helper field). A table line is `element;log`
//! with the element serialized in base q, sorted by element.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::collector::{Relation, RelationMeta, RelationSet};
use crate::field::FieldTower;
use crate::instance::{Instance, Mode};
use crate::solver::LogTable;
use crate::{Error, Result};

/// Field description shared by both file kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldHeader {
    pub p: u64,
    pub h: usize,
    /// Coefficients of `Q`, lowest degree first.
    pub q_coeffs: Vec<u64>,
    pub mode: Mode,
}

impl FieldHeader {
    pub fn of(inst: &Instance) -> Self {
        Self {
            p: inst.tower.q(),
            h: inst.tower.h(),
            q_coeffs: inst.tower.modulus().coeffs().to_vec(),
            mode: inst.mode,
        }
    }

    pub fn tower(&self) -> Result<FieldTower> {
        FieldTower::new(self.p, self.h, &self.q_coeffs)
    }

    pub fn instance(&self) -> Result<Instance> {
        Instance::new(self.tower()?, self.mode)
    }

    /// True if both describe the same field and mode.
    pub fn matches(&self, inst: &Instance) -> bool {
        *self == Self::of(inst)
    }

    fn write_lines(&self, out: &mut String) {
        let q = self
            .q_coeffs
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(out, "# p={}", self.p);
        let _ = writeln!(out, "# h={}", self.h);
        let _ = writeln!(out, "# Q={q}");
        let _ = writeln!(out, "# mode={}", self.mode);
        let _ = writeln!(out, "# e={}", self.mode.e());
    }

    fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mode = Mode::from_parts(req(map, "mode")?, Some(parse_num(req(map, "e")?, "e")?))?;
        Ok(Self {
            p: parse_num(req(map, "p")?, "p")?,
            h: parse_num(req(map, "h")?, "h")?,
            q_coeffs: parse_list(req(map, "Q")?)?,
            mode,
        })
    }
}

fn req<'a>(map: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Parse(format!("missing header field '{key}'")))
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} '{s}'")))
}

/// Comma-separated integers; an empty string is an empty list.
pub fn parse_list(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_num(x, "integer")).collect()
}

type Split = (BTreeMap<String, String>, Vec<(usize, String)>);

/// Header map and the remaining `(line number, content)` pairs. Line numbers
/// start at 1. Blank lines are skipped.
fn split_lines(r: impl BufRead) -> Result<Split> {
    let mut header = BTreeMap::new();
    let mut body = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(h) = t.strip_prefix('#') {
            if let Some((k, v)) = h.trim().split_once('=') {
                header.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        body.push((i + 1, t.to_string()));
    }
    Ok((header, body))
}

/// Writes a relation set in `u` order.
pub fn write_relations(mut w: impl Write, header: &FieldHeader, set: &RelationSet) -> Result<()> {
    let mut out = String::new();
    header.write_lines(&mut out);
    let _ = writeln!(out, "# seed={}", set.meta.seed);
    if let Some((a, b)) = set.meta.range {
        let _ = writeln!(out, "# range={a}:{b}");
    }
    if let Some(c) = set.meta.cursor {
        let _ = writeln!(out, "# cursor={c}");
    }
    for rel in set.iter() {
        let roots = rel
            .roots
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(out, "{};{roots}", rel.u);
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

/// A parsed relation file. `lines[i]` is the source line of the i-th
/// relation in `u` order.
#[derive(Clone, Debug)]
pub struct RelationFile {
    pub header: FieldHeader,
    pub set: RelationSet,
    pub lines: BTreeMap<u64, usize>,
}

pub fn read_relations(r: impl BufRead) -> Result<RelationFile> {
    let (map, body) = split_lines(r)?;
    let header = FieldHeader::from_map(&map)?;
    let range = match map.get("range") {
        Some(s) => Some(parse_range(s)?),
        None => None,
    };
    let cursor = map
        .get("cursor")
        .map(|c| parse_num(c, "cursor"))
        .transpose()?;
    let seed = map
        .get("seed")
        .map(|s| parse_num(s, "seed"))
        .transpose()?
        .unwrap_or(0);
    let mut set = RelationSet::new(RelationMeta {
        mode: header.mode,
        seed,
        range,
        cursor,
    });
    let mut lines = BTreeMap::new();
    for (no, line) in body {
        let (u, roots) = line
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("line {no}: expected 'u;roots'")))?;
        let u: u64 =
            parse_num(u, "exponent").map_err(|e| Error::Parse(format!("line {no}: {e}")))?;
        let mut roots = parse_list(roots).map_err(|e| Error::Parse(format!("line {no}: {e}")))?;
        roots.sort_unstable();
        if !set.insert(Relation { u, roots }) {
            return Err(Error::Parse(format!("line {no}: duplicate exponent {u}")));
        }
        lines.insert(u, no);
    }
    Ok(RelationFile { header, set, lines })
}

/// Parses `a:b`.
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("range '{s}' is not a:b")))?;
    Ok((parse_num(a, "range start")?, parse_num(b, "range end")?))
}

/// Writes the table as `element;log` lines sorted by element.
pub fn write_log_table(mut w: impl Write, inst: &Instance, table: &LogTable) -> Result<()> {
    let mut out = String::new();
    FieldHeader::of(inst).write_lines(&mut out);
    let _ = writeln!(out, "# generator=X");
    let _ = writeln!(out, "# order={}", table.order);
    let _ = writeln!(out, "# logG={}", table.log_g);
    let mut rows: Vec<(u64, u64)> = Vec::with_capacity(table.len());
    for (&d, &log) in &table.logs {
        rows.push((inst.tower.serialize(&inst.base_element(d)?), log));
    }
    rows.sort_unstable();
    for (e, log) in rows {
        let _ = writeln!(out, "{e};{log}");
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub line: usize,
    pub element: u64,
    pub log: u64,
}

/// A parsed table file before it is matched against an instance.
#[derive(Clone, Debug)]
pub struct TableFile {
    pub header: FieldHeader,
    pub order: u64,
    pub log_g: u64,
    pub entries: Vec<TableEntry>,
}

pub fn read_log_table(r: impl BufRead) -> Result<TableFile> {
    let (map, body) = split_lines(r)?;
    let header = FieldHeader::from_map(&map)?;
    if let Some(g) = map.get("generator") {
        if g != "X" {
            return Err(Error::Parse(format!("unsupported generator '{g}'")));
        }
    }
    let order = parse_num(req(&map, "order")?, "order")?;
    let log_g = parse_num(req(&map, "logG")?, "logG")?;
    let entries = body
        .into_iter()
        .map(|(line, s)| {
            let bad = || Error::Parse(format!("line {line}: expected 'element;log'"));
            let (e, l) = s.split_once(';').ok_or_else(bad)?;
            Ok(TableEntry {
                line,
                element: e.trim().parse().map_err(|_| bad())?,
                log: l.trim().parse().map_err(|_| bad())?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(TableFile {
        header,
        order,
        log_g,
        entries,
    })
}

impl TableFile {
    /// Checks every line by exponentiation and rebuilds the table keyed by
    /// descriptor. The first bad line is named in the error.
    pub fn into_table(self, inst: &Instance) -> Result<LogTable> {
        if !self.header.matches(inst) {
            return Err(Error::Verification(
                "table header does not match the field".into(),
            ));
        }
        if self.order != inst.order() {
            return Err(Error::Verification(format!(
                "table order {} does not match {}",
                self.order,
                inst.order()
            )));
        }
        let mut by_element = BTreeMap::new();
        for d in inst.base.descriptors() {
            by_element.insert(inst.tower.serialize(&inst.base_element(d)?), d);
        }
        let mut logs = BTreeMap::new();
        for e in &self.entries {
            let d = *by_element.get(&e.element).ok_or_else(|| {
                Error::Verification(format!(
                    "line {}: {} is not a factor-base element",
                    e.line, e.element
                ))
            })?;
            if inst.tower.x_pow(e.log) != inst.tower.deserialize(e.element)? {
                return Err(Error::Verification(format!(
                    "line {}: X^{} is not element {}",
                    e.line, e.log, e.element
                )));
            }
            if logs.insert(d, e.log).is_some() {
                return Err(Error::Verification(format!(
                    "line {}: duplicate element",
                    e.line
                )));
            }
        }
        let table = LogTable {
            order: self.order,
            logs,
            log_g: self.log_g,
        };
        table.verify(inst)?;
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collector::{scan_incremental, ScanOptions};
    use crate::solver::{solve_instance, SolveOptions};

    fn inst13() -> Instance {
        Instance::new(FieldTower::new(13, 3, &[11, 2, 0, 1]).unwrap(), Mode::Fq).unwrap()
    }

    #[test]
    fn relation_round_trip() {
        let inst = inst13();
        let out = scan_incremental(
            &inst,
            1,
            100,
            ScanOptions {
                seed: 4,
                ..Default::default()
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_relations(&mut buf, &FieldHeader::of(&inst), &out.set).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("# Q=11,2,0,1\n") && text.contains("\n15;3,8,12\n"));
        let back = read_relations(buf.as_slice()).unwrap();
        assert_eq!(back.set, out.set);
        assert!(back.header.matches(&inst));
        assert_eq!(back.set.meta.cursor, Some(101));
    }

    #[test]
    fn empty_relation_file_is_header_only() {
        let inst = inst13();
        let set = RelationSet::new(RelationMeta {
            mode: Mode::Fq,
            seed: 0,
            range: None,
            cursor: None,
        });
        let mut buf = Vec::new();
        write_relations(&mut buf, &FieldHeader::of(&inst), &set).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().all(|l| l.starts_with('#')));
    }

    #[test]
    fn malformed_relations() {
        let head = "# p=13\n# h=3\n# Q=11,2,0,1\n# mode=fq\n# e=1\n";
        for body in ["15\n", "x;1,2\n", "15;1,a\n", "15;1\n15;2\n"] {
            let text = format!("{head}{body}");
            assert!(read_relations(text.as_bytes()).is_err(), "{body:?}");
        }
        assert!(read_relations("15;3\n".as_bytes()).is_err());
    }

    #[test]
    fn table_round_trip_and_corruption() {
        let inst = inst13();
        let (table, _, _) =
            solve_instance(&inst, SolveOptions::default(), ScanOptions::default(), 4).unwrap();
        let mut buf = Vec::new();
        write_log_table(&mut buf, &inst, &table).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = read_log_table(text.as_bytes())
            .unwrap()
            .into_table(&inst)
            .unwrap();
        assert_eq!(back, table);
        let elems: Vec<u64> = read_log_table(text.as_bytes())
            .unwrap()
            .entries
            .iter()
            .map(|e| e.element)
            .collect();
        assert!(elems.windows(2).all(|w| w[0] < w[1]));
        // bump one logarithm
        let lines: Vec<&str> = text.lines().collect();
        let idx = lines.iter().position(|l| !l.starts_with('#')).unwrap() + 3;
        let (e, l) = lines[idx].split_once(';').unwrap();
        let bumped = format!("{e};{}", (l.parse::<u64>().unwrap() + 1) % 2196);
        let mut corrupted: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        corrupted[idx] = bumped;
        let err = read_log_table(corrupted.join("\n").as_bytes())
            .unwrap()
            .into_table(&inst)
            .unwrap_err();
        assert_eq!(
            err.to_string(),
            format!(
                "verification failed: line {}: X^{} is not element {e}",
                idx + 1,
                (l.parse::<u64>().unwrap() + 1) % 2196
            )
        );
    }
}
