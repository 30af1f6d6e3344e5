//! Generator sets with a diagonal metric.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, LazyLock};

use crate::error::{Error, Result};
use crate::MAX_GENERATORS;

/// Ordered list of anticommuting generators together with their metric
/// entries `η_ii`. A zero entry marks an inert replica generator that the
/// Clifford star never contracts.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    labels: Vec<String>,
    metric: Vec<f64>,
}

static CL3: LazyLock<Arc<Signature>> = LazyLock::new(|| Signature::euclidean(3));
static CL2: LazyLock<Arc<Signature>> = LazyLock::new(|| Signature::euclidean(2));

/// The three-dimensional Euclidean algebra on `s1 s2 s3`.
pub fn cl3() -> Arc<Signature> {
    CL3.clone()
}

/// The two-dimensional Euclidean algebra on `s1 s2`.
pub fn cl2() -> Arc<Signature> {
    CL2.clone()
}

impl Signature {
    pub fn new<S: Into<String>>(labels: Vec<S>, metric: Vec<f64>) -> Result<Arc<Self>> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != metric.len() {
            return Err(Error::MetricLength {
                labels: labels.len(),
                metric: metric.len(),
            });
        }
        if labels.len() > MAX_GENERATORS {
            return Err(Error::CapacityExceeded(labels.len()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || l.contains(char::is_whitespace) {
                return Err(Error::MalformedBlade(l.clone()));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Arc::new(Self { labels, metric }))
    }

    /// `s1 … sn`, all with metric +1.
    pub fn euclidean(n: usize) -> Arc<Self> {
        Self::replicated(n, 1).expect("euclidean signature within capacity")
    }

    /// `copies` replica sets of `n` generators each. The first set is
    /// Euclidean (`s1 … sn`), replica `k` is labelled with `k` primes
    /// (`s1' …`, `s1'' …`) and is inert.
    pub fn replicated(n: usize, copies: usize) -> Result<Arc<Self>> {
        let mut labels = Vec::with_capacity(n * copies);
        let mut metric = Vec::with_capacity(n * copies);
        for c in 0..copies {
            for i in 1..=n {
                labels.push(format!("s{i}{}", "'".repeat(c)));
                metric.push(if c == 0 { 1.0 } else { 0.0 });
            }
        }
        Self::new(labels, metric)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn metric(&self, i: usize) -> f64 {
        self.metric[i]
    }

    /// Bitmask with every generator set.
    pub fn full_mask(&self) -> u32 {
        if self.dim() == 32 {
            u32::MAX
        } else {
            (1u32 << self.dim()) - 1
        }
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(Error::GeneratorOutOfRange(i))
        }
    }

    /// True for the three-generator algebra with unit metric.
    pub fn is_euclidean3(&self) -> bool {
        self.dim() == 3 && self.metric.iter().all(|&m| m == 1.0)
    }

    /// Space-separated labels in ascending generator order; `""` for the scalar.
    pub fn blade_name(&self, mask: u32) -> String {
        let mut out = String::new();
        for i in 0..self.dim() {
            if mask >> i & 1 == 1 {
                if !out.is_empty() {
                    out.push(' ');
                }
                out.push_str(&self.labels[i]);
            }
        }
        out
    }

    /// Parses a space-separated product of generator labels into a blade
    /// mask and the sign of the permutation that sorts it. Repeated
    /// generators are rejected.
    pub fn parse_blade(&self, name: &str) -> Result<(f64, u32)> {
        let mut mask = 0u32;
        let mut sign = 1.0;
        for tok in name.split_whitespace() {
            let i = self.index_of(tok)?;
            let bit = 1u32 << i;
            if mask & bit != 0 {
                return Err(Error::MalformedBlade(name.to_string()));
            }
            // moving the new generator left past every higher one already present
            if (mask >> (i + 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Ok((sign, mask))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (l, m)) in self.labels.iter().zip(&self.metric).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}:{m}")?;
        }
        write!(f, "]")
    }
}
