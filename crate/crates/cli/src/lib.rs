//! Command implementations behind the `quasimap` binary. Every command
//! produces a [`CommandResult`], rendered either as an aligned text table or
//! as JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use quasimap_core::arith::rat::{self, Rat};
use quasimap_core::arith::LinForm;
use quasimap_core::intersection::{compute_w_with, E6Form, IntersectionError};
use quasimap_core::residue::ResiduePlan;
use quasimap_core::series;
use quasimap_core::toric;
use quasimap_core::verify::{self, VerifyOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailed,
    UsageError,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::UsageError => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::VerificationFailed => "verification_failed",
            Status::UsageError => "usage_error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub label: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandResult {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub values: Vec<Entry>,
    pub status: Status,
}

impl CommandResult {
    pub fn new(command: &str, parameters: &[(&str, String)]) -> Self {
        CommandResult {
            command: command.to_string(),
            parameters: parameters
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            values: Vec::new(),
            status: Status::Ok,
        }
    }

    pub fn push(&mut self, label: impl Into<String>, value: impl Into<String>) {
        self.values.push(Entry {
            label: label.into(),
            value: value.into(),
        });
    }

    pub fn push_rat(&mut self, label: impl Into<String>, value: &Rat) {
        self.push(label, rat::to_string(value));
    }

    pub fn usage_error(mut self, message: impl Into<String>) -> Self {
        self.values.clear();
        self.push("error", message);
        self.status = Status::UsageError;
        self
    }

    pub fn value(&self, label: &str) -> Option<&str> {
        self.values
            .iter()
            .find(|e| e.label == label)
            .map(|e| e.value.as_str())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "  {k} = {v}");
        }
        let width = self
            .values
            .iter()
            .map(|e| e.label.chars().count())
            .max()
            .unwrap_or(0);
        for e in &self.values {
            let pad = width - e.label.chars().count();
            let _ = writeln!(out, "{}{}  {}", e.label, " ".repeat(pad), e.value);
        }
        let _ = writeln!(out, "status: {}", self.status.as_str());
        out
    }
}

#[derive(Debug, thiserror::Error)]
#[error("internal error in {command}: {source}")]
pub struct InternalError {
    pub command: String,
    pub source: IntersectionError,
}

fn check_degree(result: CommandResult, d: i64, min: i64) -> Result<CommandResult, CommandResult> {
    if d < min {
        Err(result.usage_error(format!("degree must be at least {min}, got {d}")))
    } else {
        Ok(result)
    }
}

fn h_form(f: &LinForm) -> String {
    f.to_string().replace('z', "H")
}

fn vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

pub fn cmd_fan(d: i64) -> CommandResult {
    let res = CommandResult::new("fan", &[("degree", d.to_string())]);
    let mut res = match check_degree(res, d, 1) {
        Ok(r) => r,
        Err(e) => return e,
    };
    let fan = toric::build_fan(d as usize).expect("degree validated");
    let doc = fan.to_document();
    res.push("rays", doc.rays.len().to_string());
    res.push("dimension", doc.dimension.to_string());
    res.push("max_cones", fan.max_cone_count().to_string());
    let check = toric::relation_check(&fan);
    res.push(
        "relation_check",
        match check {
            toric::RelationCheck::Holds => "holds".to_string(),
            toric::RelationCheck::Fails(i) => format!("fails at relation {i}"),
        },
    );
    for ray in &doc.rays {
        res.push(ray.label.clone(), vector(&ray.vector));
    }
    for (i, p) in doc.primitive_collections.iter().enumerate() {
        res.push(format!("collection {i}"), format!("{{{}}}", p.join(", ")));
    }
    if !check.passed() {
        res.status = Status::VerificationFailed;
    }
    res
}

pub fn cmd_chow(d: i64) -> CommandResult {
    let res = CommandResult::new("chow", &[("degree", d.to_string())]);
    let mut res = match check_degree(res, d, 1) {
        Ok(r) => r,
        Err(e) => return e,
    };
    let d = d as usize;
    for (i, g) in toric::sr_ideal(d).iter().enumerate() {
        res.push(format!("r_{i}"), g.display_with("H"));
    }
    for i in 0..=d {
        let factors = toric::sr_generator_factors(d, i);
        let mut parts: Vec<String> = Vec::new();
        let mut k = 0;
        while k < factors.len() {
            let run = factors[k..]
                .iter()
                .take_while(|f| **f == factors[k])
                .count();
            let base = format!("({})", h_form(&factors[k]));
            parts.push(if run > 1 {
                format!("{base}^{run}")
            } else {
                base
            });
            k += run;
        }
        res.push(format!("r_{i} factors"), parts.join(" "));
    }
    let fan = toric::build_fan(d).expect("degree validated");
    for label in &fan.labels {
        res.push(
            format!("[{label}]"),
            h_form(&toric::divisor_class(d, *label)),
        );
    }
    res
}

pub fn cmd_intersect(d: i64, a: i64, b: i64, e6: E6Form) -> Result<CommandResult, InternalError> {
    let res = CommandResult::new(
        "intersect",
        &[
            ("degree", d.to_string()),
            ("a", a.to_string()),
            ("b", b.to_string()),
        ],
    );
    let mut res = match check_degree(res, d, 1) {
        Ok(r) => r,
        Err(e) => return Ok(e),
    };
    let d = d as usize;
    let w = compute_w_with(d, a, b, e6, &ResiduePlan::ascending(d)).map_err(|source| {
        InternalError {
            command: "intersect".into(),
            source,
        }
    })?;
    res.push_rat(format!("w(z^{a}, z^{b})_{d}"), &w);
    Ok(res)
}

pub fn cmd_mirror(order: i64) -> CommandResult {
    let res = CommandResult::new("mirror", &[("order", order.to_string())]);
    let mut res = match check_degree(res, order, 1) {
        Ok(r) => r,
        Err(e) => return e.usage_error(format!("order must be at least 1, got {order}")),
    };
    let w = series::mirror_w(order as usize).expect("order validated");
    for (i, v) in w.iter().enumerate() {
        res.push_rat(format!("w_{}", i + 1), v);
    }
    res
}

pub fn cmd_jinv(order: i64) -> CommandResult {
    let res = CommandResult::new("jinv", &[("order", order.to_string())]);
    let mut res = match check_degree(res, order, 1) {
        Ok(r) => r,
        Err(e) => return e.usage_error(format!("order must be at least 1, got {order}")),
    };
    let w = series::mirror_w(order as usize).expect("order validated");
    let j = series::j_from_w(&w);
    let lagrange = series::lagrange_oracle(&w).expect("order validated");
    for (i, v) in j.iter().enumerate() {
        res.push_rat(format!("j_{}", i + 1), v);
    }
    for (i, v) in lagrange.iter().enumerate() {
        res.push_rat(format!("j_{} (lagrange)", i + 1), v);
    }
    let agree = j == lagrange;
    res.push("agree", agree.to_string());
    if !agree {
        res.status = Status::VerificationFailed;
    }
    res
}

pub fn cmd_verify(degree_max: i64, e6: E6Form) -> CommandResult {
    let res = CommandResult::new("verify", &[("degree_max", degree_max.to_string())]);
    let mut res = match check_degree(res, degree_max, 1) {
        Ok(r) => r,
        Err(e) => return e.usage_error(format!("degree-max must be at least 1, got {degree_max}")),
    };
    let mut opts = VerifyOptions::new(degree_max as usize);
    opts.e6 = e6;
    let checks = verify::run_ladder(&opts);
    for c in &checks {
        let verdict = if c.passed { "pass" } else { "FAIL" };
        res.push(
            c.label.clone(),
            format!("{verdict}  expected {}  actual {}", c.expected, c.actual),
        );
    }
    match verify::first_failure(&checks) {
        Some(c) => {
            res.push("first_failure", c.label.clone());
            res.status = Status::VerificationFailed;
        }
        None => res.push("summary", format!("{} checks pass", checks.len())),
    }
    res
}
