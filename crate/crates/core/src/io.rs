//! Line-oriented text documents holding a metric, named tensors, scalars and
//! tractor sections, plus sample-point lists.
//!
//! ```text
//! # comment
//! [metric]
//! 1 5 = 1            # g_ij for i <= j, 1-based, omitted entries are zero
//! [tensor phi]
//! variance = co co
//! weight = 3
//! antisymmetric = yes
//! 1 2 = -sqrt3/3     # with antisymmetric = yes only increasing indices
//! [scalar sigma]
//! weight = 1
//! value = x1*x4 + x2*x5 - 1/2*x3^2
//! [tractor Phi]
//! k = 2
//! [slot Phi.sigma]
//! 1 2 = -sqrt3/3
//! ```
//!
//! Tractor slots are forms whose weights follow from k, so slot blocks carry
//! only components.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use g2t_exact::{parse_expr, Rat, RatFn};

use crate::error::CoreError;
use crate::tensor::{multi_indices, MetricField, TensorField, Variance, DIM};
use crate::tractor::TractorSection;

/// Sample points used when none are supplied: the origin and four fixed
/// rational points.
pub fn default_samples() -> Vec<Vec<Rat>> {
    let r = |n: i64, d: i64| Rat::new(n, d);
    vec![
        vec![Rat::ZERO; DIM],
        vec![r(1, 2), r(1, 1), r(-1, 1), r(2, 3), r(2, 1)],
        vec![r(-1, 3), r(1, 4), r(3, 2), r(-2, 1), r(1, 5)],
        vec![r(2, 1), r(-3, 2), r(1, 7), r(1, 2), r(-1, 1)],
        vec![r(3, 5), r(5, 2), r(-4, 3), r(-1, 6), r(3, 1)],
    ]
}

/// One point per line, five rationals separated by whitespace or commas.
pub fn parse_samples(text: &str) -> Result<Vec<Vec<Rat>>, CoreError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        let pt: Vec<Rat> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<Rat>().map_err(|_| input(n, format!("bad rational `{s}`"))))
            .collect::<Result<_, _>>()?;
        if pt.len() != DIM {
            return Err(input(n, format!("expected {DIM} coordinates, found {}", pt.len())));
        }
        out.push(pt);
    }
    if out.is_empty() {
        return Err(CoreError::Input("no sample points".into()));
    }
    Ok(out)
}

pub fn serialize_samples(samples: &[Vec<Rat>]) -> String {
    let mut s = String::new();
    for p in samples {
        let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "{}", parts.join(" "));
    }
    s
}

#[derive(Clone, Debug, Default)]
pub struct Document {
    pub metric: Option<MetricField>,
    pub tensors: BTreeMap<String, TensorField>,
    /// Scalar densities with their weights.
    pub scalars: BTreeMap<String, (RatFn, i32)>,
    pub tractors: BTreeMap<String, TractorSection>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn input(line: usize, msg: impl std::fmt::Display) -> CoreError {
    CoreError::Input(format!("line {}: {msg}", line + 1))
}

#[derive(Default)]
struct Block {
    kind: String,
    name: String,
    line: usize,
    keys: BTreeMap<String, String>,
    entries: Vec<(usize, Vec<usize>, String)>,
}

fn parse_blocks(text: &str) -> Result<Vec<Block>, CoreError> {
    let mut blocks: Vec<Block> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(head) = line.strip_prefix('[') {
            let head = head.strip_suffix(']').ok_or_else(|| input(n, "unterminated section header"))?;
            let mut it = head.split_whitespace();
            let kind = it.next().unwrap_or("").to_string();
            let name = it.next().unwrap_or("").to_string();
            if it.next().is_some() {
                return Err(input(n, "section header has extra words"));
            }
            blocks.push(Block { kind, name, line: n, ..Block::default() });
            continue;
        }
        let block = blocks.last_mut().ok_or_else(|| input(n, "content before the first section"))?;
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| input(n, "expected `key = value`"))?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        let first = lhs.chars().next().unwrap_or(' ');
        if first.is_ascii_digit() {
            let idx = lhs
                .split_whitespace()
                .map(|s| match s.parse::<usize>() {
                    Ok(i) if (1..=DIM).contains(&i) => Ok(i - 1),
                    _ => Err(input(n, format!("index `{s}` out of range 1..{DIM}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            block.entries.push((n, idx, rhs.to_string()));
        } else {
            block.keys.insert(lhs.to_string(), rhs.to_string());
        }
    }
    Ok(blocks)
}

fn expr(line: usize, s: &str) -> Result<RatFn, CoreError> {
    parse_expr(s).map_err(|e| input(line, e))
}

fn key_int(b: &Block, key: &str) -> Result<Option<i32>, CoreError> {
    b.keys
        .get(key)
        .map(|v| v.parse::<i32>().map_err(|_| input(b.line, format!("`{key}` must be an integer"))))
        .transpose()
}

fn key_flag(b: &Block, key: &str) -> Result<bool, CoreError> {
    match b.keys.get(key).map(String::as_str) {
        None | Some("no") => Ok(false),
        Some("yes") => Ok(true),
        Some(v) => Err(input(b.line, format!("`{key}` must be yes or no, found `{v}`"))),
    }
}

/// Fills a tensor from block entries; with `antisymmetric`, entries must use
/// strictly increasing indices and the rest follows by sign.
fn fill(b: &Block, variance: Vec<Variance>, weight: i32, antisymmetric: bool) -> Result<TensorField, CoreError> {
    let rank = variance.len();
    let mut t = TensorField::zeros(variance, weight);
    let mut seen = std::collections::BTreeSet::new();
    for (n, idx, rhs) in &b.entries {
        if idx.len() != rank {
            return Err(input(*n, format!("expected {rank} indices")));
        }
        if !seen.insert(idx.clone()) {
            return Err(input(*n, "duplicate entry"));
        }
        let v = expr(*n, rhs)?;
        if antisymmetric {
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(input(*n, "antisymmetric entries need increasing indices"));
            }
            for (perm, sign) in crate::tensor::permutations(rank) {
                let p: Vec<usize> = perm.iter().map(|&k| idx[k]).collect();
                t.set(&p, if sign > 0 { v.clone() } else { v.neg() });
            }
        } else {
            t.set(idx, v);
        }
    }
    Ok(t)
}

fn parse_variance(b: &Block) -> Result<Vec<Variance>, CoreError> {
    let Some(v) = b.keys.get("variance") else {
        return Err(input(b.line, "tensor needs a `variance` line"));
    };
    if v == "scalar" {
        return Ok(Vec::new());
    }
    v.split_whitespace()
        .map(|s| match s {
            "co" => Ok(Variance::Co),
            "contra" => Ok(Variance::Contra),
            _ => Err(input(b.line, format!("unknown variance `{s}`"))),
        })
        .collect()
}

pub fn parse_document(text: &str) -> Result<Document, CoreError> {
    let blocks = parse_blocks(text)?;
    let mut doc = Document::default();
    let mut tractor_k: BTreeMap<String, usize> = BTreeMap::new();
    let mut slots: BTreeMap<String, BTreeMap<String, TensorField>> = BTreeMap::new();
    for b in &blocks {
        match b.kind.as_str() {
            "metric" => {
                if doc.metric.is_some() {
                    return Err(input(b.line, "second [metric] section"));
                }
                let mut m = vec![vec![RatFn::zero(); DIM]; DIM];
                for (n, idx, rhs) in &b.entries {
                    let [i, j] = idx[..] else {
                        return Err(input(*n, "metric entries take two indices"));
                    };
                    if i > j {
                        return Err(input(*n, "metric entries are listed with i <= j"));
                    }
                    let v = expr(*n, rhs)?;
                    m[i][j] = v.clone();
                    m[j][i] = v;
                }
                doc.metric = Some(MetricField::new(m)?);
            }
            "tensor" => {
                let variance = parse_variance(b)?;
                let weight = key_int(b, "weight")?.unwrap_or(0);
                let t = fill(b, variance, weight, key_flag(b, "antisymmetric")?)?;
                named(&b.name, b.line)?;
                doc.tensors.insert(b.name.clone(), t);
            }
            "scalar" => {
                let weight = key_int(b, "weight")?.unwrap_or(0);
                let v = b.keys.get("value").ok_or_else(|| input(b.line, "scalar needs a `value` line"))?;
                named(&b.name, b.line)?;
                doc.scalars.insert(b.name.clone(), (expr(b.line, v)?, weight));
            }
            "tractor" => {
                let k = key_int(b, "k")?.ok_or_else(|| input(b.line, "tractor needs `k`"))?;
                if !(0..=2).contains(&k) {
                    return Err(input(b.line, "k must be 0, 1 or 2"));
                }
                named(&b.name, b.line)?;
                tractor_k.insert(b.name.clone(), k as usize);
            }
            "slot" => {
                let (owner, slot) = b.name.split_once('.').ok_or_else(|| input(b.line, "slot name must be OWNER.SLOT"))?;
                let k = *tractor_k.get(owner).ok_or_else(|| input(b.line, format!("slot of undeclared tractor `{owner}`")))?;
                let rank = match slot {
                    "rho" | "sigma" => k,
                    "phi" => k + 1,
                    "mu" if k > 0 => k - 1,
                    _ => return Err(input(b.line, format!("unknown slot `{slot}` for k = {k}"))),
                };
                let t = fill(b, vec![Variance::Co; rank], 0, rank > 1)?;
                slots.entry(owner.to_string()).or_default().insert(slot.to_string(), t);
            }
            other => return Err(input(b.line, format!("unknown section kind `{other}`"))),
        }
    }
    for (name, k) in tractor_k {
        let mut s = slots.remove(&name).unwrap_or_default();
        let zero = TractorSection::zero(k);
        let mut take = |slot: &str, d: TensorField| s.remove(slot).unwrap_or(d);
        let rho = take("rho", zero.rho.clone());
        let phi = take("phi", zero.phi.clone());
        let mu = zero.mu.clone().map(|m| take("mu", m));
        let sigma = take("sigma", zero.sigma.clone());
        doc.tractors.insert(name, TractorSection::new(k, rho, phi, mu, sigma)?);
    }
    Ok(doc)
}

fn named(name: &str, line: usize) -> Result<(), CoreError> {
    if name.is_empty() {
        return Err(input(line, "section needs a name"));
    }
    Ok(())
}

fn write_entries(out: &mut String, t: &TensorField, antisymmetric: bool) {
    for idx in multi_indices(t.rank()) {
        if antisymmetric && idx.windows(2).any(|w| w[0] >= w[1]) {
            continue;
        }
        let v = t.get(&idx);
        if v.is_zero() {
            continue;
        }
        let keys: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "{} = {}", keys.join(" "), v);
    }
}

pub fn serialize_metric(m: &MetricField) -> String {
    let mut out = String::from("[metric]\n");
    for i in 0..DIM {
        for j in i..DIM {
            let v = m.entry(i, j);
            if !v.is_zero() {
                let _ = writeln!(out, "{} {} = {}", i + 1, j + 1, v);
            }
        }
    }
    out
}

pub fn serialize_tensor(name: &str, t: &TensorField) -> String {
    let mut out = format!("[tensor {name}]\n");
    let var: Vec<&str> = t
        .variance()
        .iter()
        .map(|v| match v {
            Variance::Co => "co",
            Variance::Contra => "contra",
        })
        .collect();
    let _ = writeln!(out, "variance = {}", if var.is_empty() { "scalar".to_string() } else { var.join(" ") });
    let _ = writeln!(out, "weight = {}", t.weight());
    let anti = t.rank() > 1 && t.variance().iter().all(|&v| v == Variance::Co) && t.is_antisymmetric();
    if anti {
        out.push_str("antisymmetric = yes\n");
    }
    write_entries(&mut out, t, anti);
    out
}

pub fn serialize_scalar(name: &str, value: &RatFn, weight: i32) -> String {
    format!("[scalar {name}]\nweight = {weight}\nvalue = {value}\n")
}

pub fn serialize_tractor(name: &str, s: &TractorSection) -> String {
    let mut out = format!("[tractor {name}]\nk = {}\n", s.k);
    let mut slot = |label: &str, t: &TensorField| {
        let _ = writeln!(out, "[slot {name}.{label}]");
        write_entries(&mut out, t, t.rank() > 1);
    };
    slot("rho", &s.rho);
    slot("phi", &s.phi);
    if let Some(m) = &s.mu {
        slot("mu", m);
    }
    slot("sigma", &s.sigma);
    out
}

pub fn serialize_document(doc: &Document) -> String {
    let mut out = String::new();
    if let Some(m) = &doc.metric {
        out.push_str(&serialize_metric(m));
    }
    for (n, t) in &doc.tensors {
        out.push_str(&serialize_tensor(n, t));
    }
    for (n, (v, w)) in &doc.scalars {
        out.push_str(&serialize_scalar(n, v, *w));
    }
    for (n, s) in &doc.tractors {
        out.push_str(&serialize_tractor(n, s));
    }
    out
}
