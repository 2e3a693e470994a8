//! Text formats for the datasets the pipeline ingests and emits.
//!
//! * binary code files: `n k` then one `{0,1}` row per line;
//! * additive GF(4) records: `n m` then `m` rows over `{0,1,w,W}`,
//!   concatenated with blank-line separators;
//! * permutation files: one disjoint-cycle line per permutation;
//! * orbit-representative records: the code plus its conjugation
//!   witnesses in cycle notation.
//!
//! `#` starts a comment line everywhere. Every reader validates what it
//! parses and reports the record index of anything malformed.

use crate::equiv::{OrbitRep, OrbitRepSet};
use crate::gf2::BinaryCode;
use crate::gf4::{AdditiveF4Code, F4Vector};
use crate::perm::{GroupKind, Permutation};
use crate::{Error, Result};

/// Streams blank-line-separated records from a reader in constant
/// memory: the visitor gets the record index, the first line number, and
/// the record text.
pub fn for_each_record<R: std::io::BufRead>(
    reader: R,
    mut visit: impl FnMut(usize, usize, &str) -> Result<()>,
) -> Result<()> {
    let mut current = String::new();
    let mut start_line = 0usize;
    let mut index = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            if !current.is_empty() {
                visit(index, start_line + 1, &current)?;
                index += 1;
                current.clear();
            }
        } else {
            if current.is_empty() {
                start_line = lineno;
            }
            current.push_str(trimmed);
            current.push('\n');
        }
    }
    if !current.is_empty() {
        visit(index, start_line + 1, &current)?;
    }
    Ok(())
}

/// Splits a dataset file into blank-line-separated records, dropping
/// comments. Returns (first line number, record text) pairs.
pub fn split_records(text: &str) -> Vec<(usize, String)> {
    let mut records = Vec::new();
    let mut current = String::new();
    let mut start_line = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            if !current.is_empty() {
                records.push((start_line + 1, std::mem::take(&mut current)));
            }
        } else {
            if current.is_empty() {
                start_line = lineno;
            }
            current.push_str(trimmed);
            current.push('\n');
        }
    }
    if !current.is_empty() {
        records.push((start_line + 1, current));
    }
    records
}

/// Parses one additive-code record: `n m` then `m` rows over `{0,1,w,W}`.
/// The stated `m` must equal the GF(2)-rank of the rows.
pub fn parse_additive_record(text: &str) -> Result<AdditiveF4Code> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty additive record".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad additive header".into()))?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad additive header".into()))?;
    if it.next().is_some() {
        return Err(Error::Parse("trailing tokens in additive header".into()));
    }
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {m} generator rows")))?;
        if line.chars().count() != n {
            return Err(Error::Parse(format!(
                "row has length {}, expected {n}",
                line.chars().count()
            )));
        }
        rows.push(F4Vector::from_str4(line)?);
    }
    if lines.next().is_some() {
        return Err(Error::Parse("trailing content in additive record".into()));
    }
    let code = AdditiveF4Code::from_rows(n, rows)?;
    if code.dim_f2() != m {
        return Err(Error::Parse(format!(
            "stated dimension {m} but rows have GF(2)-rank {}",
            code.dim_f2()
        )));
    }
    Ok(code)
}

pub fn format_additive_record(code: &AdditiveF4Code) -> String {
    let mut out = format!("{} {}\n", code.length(), code.dim_f2());
    for r in code.rows() {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

/// F₄-linear codes share the record shape: the header states the
/// GF(2)-dimension of the listed generating set and the code is
/// reconstructed as its F₄-span.
pub fn format_linear_record(code: &crate::gf4::LinearF4Code) -> String {
    let gens = code.f2_generators();
    let mut out = format!("{} {}\n", code.length(), gens.len());
    for r in &gens {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_linear_record(text: &str) -> Result<crate::gf4::LinearF4Code> {
    let additive = parse_additive_record(text)?;
    crate::gf4::LinearF4Code::from_rows(additive.length(), additive.rows().to_vec())
}

/// Parses a whole additive dataset; malformed records are reported with
/// their line number, never silently dropped.
pub struct AdditiveDataset {
    pub codes: Vec<(usize, AdditiveF4Code)>,
    pub rejects: Vec<(usize, usize, String)>, // (record index, line, reason)
}

pub fn parse_additive_dataset(text: &str) -> AdditiveDataset {
    let mut codes = Vec::new();
    let mut rejects = Vec::new();
    for (idx, (line, record)) in split_records(text).into_iter().enumerate() {
        match parse_additive_record(&record) {
            Ok(c) => codes.push((idx, c)),
            Err(e) => rejects.push((idx, line, e.to_string())),
        }
    }
    AdditiveDataset { codes, rejects }
}

/// Parses a permutation-per-line group file.
pub fn parse_group_file(text: &str, degree: usize) -> Result<Vec<Permutation>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Permutation::parse_cycles(l, degree))
        .collect()
}

pub fn format_group_file(perms: &[Permutation]) -> String {
    let mut out = String::new();
    for p in perms {
        out.push_str(&p.cycle_string());
        out.push('\n');
    }
    out
}

/// Serializes one orbit-representative record.
pub fn format_orbit_rep(set_source: &str, rep: &OrbitRep) -> String {
    let mut out = String::new();
    out.push_str(&format!("source {}\n", set_source));
    out.push_str(&format!("class {}\n", rep.class_index));
    out.push_str(&format!("h {}\n", rep.h.cycle_string()));
    out.push_str(&format!("tau {}\n", rep.tau.cycle_string()));
    out.push_str(&format!("sigma {}\n", rep.sigma.cycle_string()));
    out.push_str(&format!("rho_tilde {}\n", rep.rho_tilde.cycle_string()));
    out.push_str("code\n");
    out.push_str(&rep.code.to_file_string());
    out
}

pub fn format_orbit_rep_set(set: &OrbitRepSet) -> String {
    let mut out = format!(
        "# orbit representatives: kind={} length={}\n",
        set.kind.name(),
        set.length
    );
    for rep in &set.reps {
        out.push('\n');
        out.push_str(&format_orbit_rep(&set.source, rep));
    }
    out
}

/// Parses a file of orbit-representative records (the inverse of
/// [`format_orbit_rep_set`]); every witness equation is re-checked.
pub fn parse_orbit_reps(text: &str, kind: GroupKind) -> Result<Vec<(String, OrbitRep)>> {
    let mut out = Vec::new();
    for (line, record) in split_records(text) {
        let parse = |record: &str| -> Result<(String, OrbitRep)> {
            let mut source = String::new();
            let mut class_index = 0usize;
            let mut h = None;
            let mut tau = None;
            let mut sigma = None;
            let mut rho = None;
            let mut lines = record.lines();
            let mut code_text = String::new();
            let mut in_code = false;
            // the degrees are only known once the code header is read;
            // collect first, parse afterwards
            let mut fields: Vec<(String, String)> = Vec::new();
            for l in lines.by_ref() {
                if in_code {
                    code_text.push_str(l);
                    code_text.push('\n');
                    continue;
                }
                if l == "code" {
                    in_code = true;
                    continue;
                }
                let (key, value) = l
                    .split_once(' ')
                    .ok_or_else(|| Error::Parse(format!("bad field line {l:?}")))?;
                fields.push((key.to_string(), value.to_string()));
            }
            let code = BinaryCode::parse(&code_text)?;
            let n36 = code.length();
            let n18 = n36 / 2;
            for (key, value) in fields {
                match key.as_str() {
                    "source" => source = value,
                    "class" => {
                        class_index = value
                            .parse()
                            .map_err(|_| Error::Parse("bad class index".into()))?
                    }
                    "h" => h = Some(Permutation::parse_cycles(&value, n36)?),
                    "tau" => tau = Some(Permutation::parse_cycles(&value, n36)?),
                    "sigma" => sigma = Some(Permutation::parse_cycles(&value, n18)?),
                    "rho_tilde" => rho = Some(Permutation::parse_cycles(&value, n36)?),
                    other => return Err(Error::Parse(format!("unknown field {other:?}"))),
                }
            }
            let rep = OrbitRep {
                code,
                tau: tau.ok_or_else(|| Error::Parse("missing tau".into()))?,
                rho_tilde: rho.ok_or_else(|| Error::Parse("missing rho_tilde".into()))?,
                h: h.ok_or_else(|| Error::Parse("missing h".into()))?,
                sigma: sigma.ok_or_else(|| Error::Parse("missing sigma".into()))?,
                class_index,
            };
            // membership re-check
            if !rep
                .code
                .is_invariant_under(&crate::perm::patterns::h_collapsed(n36))
            {
                return Err(Error::Parse("record fails the involution membership".into()));
            }
            let _ = kind;
            Ok((source, rep))
        };
        match parse(&record) {
            Ok(r) => out.push(r),
            Err(e) => {
                return Err(Error::Parse(format!(
                    "record at line {line}: {e}"
                )))
            }
        }
    }
    Ok(out)
}

/// Validation summary for one ingested binary-code file.
#[derive(Debug)]
pub struct IngestEntry {
    pub path: String,
    pub length: usize,
    pub dimension: usize,
    pub self_dual: bool,
    pub min_distance: usize,
    pub accepted: bool,
    pub reason: String,
}

/// Validates a binary-code file as a self-dual classification entry.
pub fn validate_code_entry(path: &str, text: &str) -> IngestEntry {
    match BinaryCode::parse(text) {
        Err(e) => IngestEntry {
            path: path.to_string(),
            length: 0,
            dimension: 0,
            self_dual: false,
            min_distance: 0,
            accepted: false,
            reason: format!("parse error: {e}"),
        },
        Ok(code) => {
            let self_dual = code.is_self_dual();
            let min_distance = code
                .min_distance(None)
                .map(|d| d.value)
                .unwrap_or(0);
            let accepted = self_dual && code.dimension() > 0;
            IngestEntry {
                path: path.to_string(),
                length: code.length(),
                dimension: code.dimension(),
                self_dual,
                min_distance,
                accepted,
                reason: if accepted {
                    String::new()
                } else if !self_dual {
                    "not self-dual".to_string()
                } else {
                    "zero-dimensional".to_string()
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv;
    use crate::perm::GroupKind;

    #[test]
    fn additive_record_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for n in 1..=4usize {
            let c = crate::gf4::random_trace_self_dual(n, &mut rng);
            let text = format_additive_record(&c);
            assert_eq!(parse_additive_record(&text).unwrap(), c);
        }
    }

    #[test]
    fn linear_record_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let c = crate::gf4::random_hermitian_self_dual(4, &mut rng);
        let text = format_linear_record(&c);
        assert_eq!(parse_linear_record(&text).unwrap(), c);
    }

    #[test]
    fn dataset_reports_malformed_records() {
        let text = "2 2\n10\nw1\n\n2 1\n0w\n\n2 2\n11\n11\n";
        let ds = parse_additive_dataset(text);
        assert_eq!(ds.codes.len(), 2);
        assert_eq!(ds.rejects.len(), 1);
        // the dependent-rows record is the reject
        assert_eq!(ds.rejects[0].0, 2);
    }

    #[test]
    fn orbit_rep_round_trip() {
        let classes = equiv::classify_self_dual(8).unwrap();
        for class in &classes {
            let set =
                equiv::lemma_repr(&class.representative, GroupKind::D8, "y8", 1_000_000).unwrap();
            if set.reps.is_empty() {
                continue;
            }
            let text = format_orbit_rep_set(&set);
            let parsed = parse_orbit_reps(&text, GroupKind::D8).unwrap();
            assert_eq!(parsed.len(), set.reps.len());
            for ((src, rep), orig) in parsed.iter().zip(&set.reps) {
                assert_eq!(src, "y8");
                assert_eq!(rep.code, orig.code);
                assert_eq!(rep.tau, orig.tau);
                assert_eq!(rep.sigma, orig.sigma);
            }
        }
    }

    #[test]
    fn group_file_round_trip() {
        let gens = crate::gf2::families::psl2_23();
        let text = format_group_file(&gens);
        let parsed = parse_group_file(&text, 24).unwrap();
        assert_eq!(parsed, gens);
        let commented = format!("# generators\n{text}");
        assert_eq!(parse_group_file(&commented, 24).unwrap(), gens);
    }

    #[test]
    fn streaming_reader_matches_split() {
        let text = "2 2\n11\nw0\n\n# comment\n1 1\n1\n";
        let mut streamed = Vec::new();
        for_each_record(std::io::Cursor::new(text), |idx, line, rec| {
            streamed.push((idx, line, rec.to_string()));
            Ok(())
        })
        .unwrap();
        let split: Vec<(usize, String)> = split_records(text);
        assert_eq!(streamed.len(), split.len());
        for ((_, l1, r1), (l2, r2)) in streamed.iter().zip(&split) {
            assert_eq!(l1, l2);
            assert_eq!(r1, r2);
        }
    }

    #[test]
    fn ingest_validation() {
        let good = crate::gf2::families::extended_hamming8().to_file_string();
        let entry = validate_code_entry("e8.code", &good);
        assert!(entry.accepted && entry.self_dual && entry.min_distance == 4);
        let bad = "4 1\n1000\n";
        let entry = validate_code_entry("bad.code", bad);
        assert!(!entry.accepted);
        assert_eq!(entry.reason, "not self-dual");
    }
}
