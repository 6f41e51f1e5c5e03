//! Axiom reports: one entry per violated scalar equation.

use crate::scalars::CycNumber;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AxiomReport {
    /// (axiom id, number of instances checked), in check order
    pub checked: Vec<(String, usize)>,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn new() -> AxiomReport {
        AxiomReport::default()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: AxiomReport) {
        for (axiom, count) in other.checked {
            self.add_count(&axiom, count);
        }
        self.failures.extend(other.failures);
    }

    fn add_count(&mut self, axiom: &str, count: usize) {
        match self.checked.iter_mut().find(|(a, _)| a == axiom) {
            Some(entry) => entry.1 += count,
            None => self.checked.push((axiom.to_string(), count)),
        }
    }

    /// Records one equation.
    pub fn eq(&mut self, axiom: &str, lhs: &CycNumber, rhs: &CycNumber, instance: impl FnOnce() -> String) {
        self.add_count(axiom, 1);
        if lhs != rhs {
            self.failures.push(AxiomFailure {
                axiom: axiom.to_string(),
                instance: instance(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    /// Records a boolean condition.
    pub fn holds(&mut self, axiom: &str, ok: bool, instance: impl FnOnce() -> String) {
        self.add_count(axiom, 1);
        if !ok {
            self.failures.push(AxiomFailure {
                axiom: axiom.to_string(),
                instance: instance(),
                lhs: "false".into(),
                rhs: "true".into(),
            });
        }
    }

    pub fn failing_axioms(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for f in &self.failures {
            if !out.contains(&f.axiom.as_str()) {
                out.push(&f.axiom);
            }
        }
        out
    }

    /// Runs `body` for every outer index in parallel and merges in index order.
    pub fn par_section<F>(&mut self, outer: usize, body: F)
    where
        F: Fn(usize, &mut AxiomReport) + Sync,
    {
        let parts: Vec<AxiomReport> = (0..outer)
            .into_par_iter()
            .map(|i| {
                let mut r = AxiomReport::new();
                body(i, &mut r);
                r
            })
            .collect();
        for p in parts {
            self.merge(p);
        }
    }

    pub fn summary_lines(&self) -> Vec<String> {
        self.checked
            .iter()
            .map(|(axiom, count)| {
                let bad = self.failures.iter().filter(|f| &f.axiom == axiom).count();
                if bad == 0 {
                    format!("PASS {axiom} ({count} instances)")
                } else {
                    format!("FAIL {axiom} ({bad} of {count} instances)")
                }
            })
            .collect()
    }
}
