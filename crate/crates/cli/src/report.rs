//! Report assembly: one flat, ordered key-value tree per run. The machine
//! rendering is line-oriented (`key = value`); the human rendering is
//! produced from the same entries. Identical inputs yield byte-identical
//! output in both forms.

use std::fmt::Display;

use pdc_core::approx::Polytope;
use pdc_core::conditions::{Classification, StationarityReport, Verdict};
use pdc_core::dcfunc::PolyhedralDC;
use pdc_core::geometry::Certificate;
use pdc_core::rational::Rational;

#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
}

pub fn format_vector(v: &[Rational]) -> String {
    let coords: Vec<String> = v.iter().map(Rational::to_string).collect();
    format!("({})", coords.join(", "))
}

pub fn format_lifted(height: &Rational, gradient: &[Rational]) -> String {
    let coords: Vec<String> = gradient.iter().map(Rational::to_string).collect();
    format!("({}; {})", height, coords.join(", "))
}

pub fn format_polytope(p: &Polytope) -> String {
    let vertices: Vec<String> = p
        .vertices()
        .iter()
        .map(|v| format_lifted(&v.height, &v.gradient))
        .collect();
    format!("{{ {} }}", vertices.join(", "))
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn machine(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(value);
            out.push('\n');
        }
        out
    }

    /// Human rendering: same entries, section breaks at key-prefix changes.
    pub fn human(&self) -> String {
        let mut out = String::new();
        let mut last_prefix = String::new();
        for (key, value) in &self.entries {
            let prefix = key.split('.').next().unwrap_or_default().to_string();
            if prefix != last_prefix {
                if !last_prefix.is_empty() {
                    out.push('\n');
                }
                last_prefix = prefix;
            }
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }

    pub fn echo_instance(&mut self, label: Option<&str>, f: &PolyhedralDC) {
        self.push("instance.label", label.unwrap_or("-"));
        self.push("instance.dimension", f.dimension());
        self.push("instance.plus.count", f.plus_pieces().len());
        for (k, p) in f.plus_pieces().iter().enumerate() {
            self.push(
                format!("instance.plus.{}", k + 1),
                format_lifted(&p.constant, &p.gradient),
            );
        }
        self.push("instance.minus.count", f.minus_pieces().len());
        for (k, p) in f.minus_pieces().iter().enumerate() {
            self.push(
                format!("instance.minus.{}", k + 1),
                format_lifted(&p.constant, &p.gradient),
            );
        }
    }

    pub fn push_verdict(&mut self, f: &PolyhedralDC, verdict: &Verdict) {
        let base = format!("check.{}", verdict.check.name());
        self.push(format!("{base}.holds"), verdict.holds);
        self.push(format!("{base}.route.codifferential"), verdict.routes.codifferential);
        self.push(format!("{base}.route.coexhauster"), verdict.routes.coexhauster);
        if let Some(min_form) = verdict.routes.min_form {
            self.push(format!("{base}.route.min-form"), min_form);
        }
        for element in &verdict.elements {
            let key = format!("{base}.element.{}", element.index);
            self.push_certificate(&key, &element.codifferential);
        }
        match &verdict.witness {
            None => self.push(format!("{base}.witness"), "none"),
            Some(witness) => {
                self.push(format!("{base}.witness"), format_vector(witness));
                match verdict.check {
                    pdc_core::conditions::CheckKind::BoundedBelow
                    | pdc_core::conditions::CheckKind::BoundedAbove => {
                        let slope = f.recession(witness).expect("witness arity is checked");
                        self.push(format!("{base}.witness.recession"), slope);
                    }
                    _ => {
                        let value = f.eval(witness).expect("witness arity is checked");
                        self.push(format!("{base}.witness.value"), value);
                    }
                }
            }
        }
    }

    fn push_certificate(&mut self, key: &str, certificate: &Certificate) {
        match certificate {
            Certificate::Feasible { multipliers } => {
                self.push(key.to_string(), "feasible");
                for (b, lambdas) in multipliers.iter().enumerate() {
                    self.push(
                        format!("{key}.multipliers.{}", b + 1),
                        format_vector(lambdas),
                    );
                }
            }
            Certificate::Infeasible { functional, bound, .. } => {
                self.push(key.to_string(), "infeasible");
                self.push(format!("{key}.separator"), format_vector(functional));
                self.push(format!("{key}.separator.bound"), bound);
            }
        }
    }

    pub fn push_stationarity(&mut self, classification: Classification) {
        self.push("stationarity.classification", classification);
        self.push("stationarity.note", StationarityReport::NOTE);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pdc_core::rational::{int, ratio};

    #[test]
    fn machine_form_is_line_oriented_and_ordered() {
        let mut r = Report::new();
        r.push("b.first", 1);
        r.push("a.second", "x");
        assert_eq!(r.machine(), "b.first = 1\na.second = x\n");
    }

    #[test]
    fn vector_and_lifted_formats() {
        assert_eq!(format_vector(&[ratio(-3, 2), int(4)]), "(-3/2, 4)");
        assert_eq!(format_lifted(&int(-4), &[int(2)]), "(-4; 2)");
    }
}
