//! Pass/fail reports shared by all checkers.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

/// Witnesses kept per check; the violation count is always exact.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Witness {
    pub message: String,
    pub data: Value,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub description: String,
    pub cases: usize,
    pub violations: usize,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

impl Check {
    pub fn new(name: impl Into<String>, description: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            description: description.into(),
            cases: 0,
            violations: 0,
            passed: true,
            witnesses: Vec::new(),
        }
    }

    pub fn case(&mut self) {
        self.cases += 1;
    }

    pub fn fail(&mut self, message: impl Into<String>, data: Value) {
        self.violations += 1;
        self.passed = false;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness {
                message: message.into(),
                data,
            });
        }
    }

    /// Records one case, failing it unless `ok`.
    pub fn expect(&mut self, ok: bool, message: impl FnOnce() -> String, data: impl FnOnce() -> Value) {
        self.case();
        if !ok {
            self.fail(message(), data());
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            passed: true,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    /// One line per check: `PASS name (cases)` or `FAIL name (violations/cases)`.
    pub fn summary(&self) -> String {
        let mut out = format!("{}: {}\n", self.title, if self.passed { "PASS" } else { "FAIL" });
        for c in &self.checks {
            if c.passed {
                out.push_str(&format!("  PASS {} ({} cases)\n", c.name, c.cases));
            } else {
                out.push_str(&format!(
                    "  FAIL {} ({}/{} violations)\n",
                    c.name, c.violations, c.cases
                ));
                for w in &c.witnesses {
                    out.push_str(&format!("       {}\n", w.message));
                }
            }
        }
        out
    }
}

/// Sizes and seed for randomized sampling in checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleBudget {
    /// Largest carrier of enumerated sample structures.
    pub max_carrier: usize,
    /// Cap on sampled instances per check family.
    pub samples: usize,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 1948;

impl Default for SampleBudget {
    fn default() -> Self {
        SampleBudget {
            max_carrier: 4,
            samples: 400,
            seed: DEFAULT_SEED,
        }
    }
}

/// Deterministic sampler driven by a seeded ChaCha stream.
pub struct Sampler {
    rng: ChaCha8Rng,
    cap: usize,
}

impl Sampler {
    pub fn new(budget: &SampleBudget) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(budget.seed),
            cap: budget.samples,
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// At most `cap` items, in their original order.
    pub fn pick<T: Clone>(&mut self, items: &[T]) -> Vec<T> {
        self.pick_n(items, self.cap)
    }

    pub fn pick_n<T: Clone>(&mut self, items: &[T], k: usize) -> Vec<T> {
        if items.len() <= k {
            return items.to_vec();
        }
        let mut idx = sample(&mut self.rng, items.len(), k).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| items[i].clone()).collect()
    }

    /// A uniformly random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        use rand::seq::SliceRandom;
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut self.rng);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn report_aggregates() {
        let mut r = Report::new("t");
        let mut ok = Check::new("A", "always");
        ok.expect(true, String::new, || json!(null));
        r.push(ok);
        let mut bad = Check::new("B", "never");
        for i in 0..20 {
            bad.expect(false, || format!("case {i}"), || json!(i));
        }
        r.push(bad);
        assert!(!r.passed);
        assert_eq!(r.violations(), 20);
        assert_eq!(r.check("B").unwrap().witnesses.len(), MAX_WITNESSES);
        assert!(r.summary().contains("FAIL B (20/20 violations)"));
    }

    #[test]
    fn sampling_is_seeded() {
        let items: Vec<usize> = (0..100).collect();
        let b = SampleBudget {
            samples: 10,
            ..Default::default()
        };
        let a = Sampler::new(&b).pick(&items);
        let c = Sampler::new(&b).pick(&items);
        assert_eq!(a, c);
        assert_eq!(a.len(), 10);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }
}
