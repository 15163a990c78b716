//! Machine-readable pass/fail records and residual witnesses.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::qstruct::{EPS_CONVENTION, RHAT_CONVENTION};
use crate::rea::{Matrix, NCPoly};
use crate::ring::{CanonicalText, LaurentPoly, Rat, RatFunc, Ring, XPoly};
use crate::tensor::{decode, CoTensor, TensorOp};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rational sample points used for numeric evaluation by default.
pub const Q_SAMPLES: [&str; 2] = ["3/5", "7/2"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    pub rhat: String,
    pub eps: String,
    pub q_samples: Vec<String>,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            rhat: RHAT_CONVENTION.into(),
            eps: EPS_CONVENTION.into(),
            q_samples: Q_SAMPLES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked claim. Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub claim: String,
    pub n: usize,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub witness: String,
    pub wall_time_ms: Option<u64>,
    pub engine_version: String,
    pub conventions: Conventions,
}

impl Certificate {
    /// Passes exactly when `witness` is empty.
    pub fn new(claim: impl Into<String>, n: usize, witness: String) -> Self {
        let status = if witness.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            claim: claim.into(),
            n,
            params: BTreeMap::new(),
            status,
            witness,
            wall_time_ms: None,
            engine_version: ENGINE_VERSION.into(),
            conventions: Conventions::default(),
        }
    }

    /// Certificate for a residual that must vanish.
    pub fn from_residual(claim: impl Into<String>, n: usize, residual: &impl Residual) -> Self {
        Self::new(claim, n, residual.witness())
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    /// `claim n=… status` plus the witness on failure.
    pub fn to_text_line(&self) -> String {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!("{status} {} n={}", self.claim, self.n);
        if !params.is_empty() {
            line.push(' ');
            line.push_str(&params.join(" "));
        }
        if let Some(ms) = self.wall_time_ms {
            line.push_str(&format!(" ({ms} ms)"));
        }
        if !self.passed() {
            line.push_str("\n  witness: ");
            line.push_str(&self.witness);
        }
        line
    }
}

/// Canonical text of a single coefficient.
pub trait ElemText: Ring {
    fn text(&self) -> String;
}

impl ElemText for NCPoly {
    fn text(&self) -> String {
        self.to_text()
    }
}

impl ElemText for RatFunc {
    fn text(&self) -> String {
        self.to_text()
    }
}

impl ElemText for LaurentPoly {
    fn text(&self) -> String {
        self.to_text()
    }
}

impl ElemText for Rat {
    fn text(&self) -> String {
        self.0.to_string()
    }
}

/// Something that must vanish; `witness` is empty exactly when it does.
pub trait Residual {
    fn witness(&self) -> String;
}

impl<E: ElemText> Residual for E {
    fn witness(&self) -> String {
        if self.is_zero() {
            String::new()
        } else {
            self.text()
        }
    }
}

fn one_based(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
    parts.join(",")
}

impl<E: ElemText> Residual for Matrix<E> {
    fn witness(&self) -> String {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let c = self.get(i, j);
                if !c.is_zero() {
                    out.push(format!("({},{}): {}", i + 1, j + 1, c.text()));
                }
            }
        }
        out.join("; ")
    }
}

impl<E: ElemText> Residual for TensorOp<E> {
    fn witness(&self) -> String {
        let (d, l) = (self.dim(), self.legs());
        let out: Vec<String> = self
            .entries()
            .filter(|(_, _, c)| !c.is_zero())
            .map(|(r, c, v)| {
                format!(
                    "({};{}): {}",
                    one_based(&decode(d, l, r)),
                    one_based(&decode(d, l, c)),
                    v.text()
                )
            })
            .collect();
        out.join("; ")
    }
}

impl<E: ElemText> Residual for CoTensor<E> {
    fn witness(&self) -> String {
        let (d, l) = (self.dim(), self.legs());
        let out: Vec<String> = self
            .entries()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, v)| format!("({}): {}", one_based(&decode(d, l, k)), v.text()))
            .collect();
        out.join("; ")
    }
}

impl<E: ElemText> ElemText for XPoly<E> {
    fn text(&self) -> String {
        let parts: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("x^{k}: {{{}}}", c.text()))
            .collect();
        parts.join(", ")
    }
}

impl<R: Residual> Residual for [R] {
    fn witness(&self) -> String {
        let parts: Vec<String> = self
            .iter()
            .enumerate()
            .map(|(k, r)| (k, r.witness()))
            .filter(|(_, w)| !w.is_empty())
            .map(|(k, w)| format!("#{}: {w}", k + 1))
            .collect();
        parts.join(" | ")
    }
}

impl<R: Residual> Residual for Vec<R> {
    fn witness(&self) -> String {
        self.as_slice().witness()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_empty_witness() {
        let c = Certificate::from_residual("zero", 2, &Rat::int(0));
        assert!(c.passed() && c.witness.is_empty());
        let c = Certificate::from_residual("nonzero", 2, &Rat::int(3));
        assert!(!c.passed());
        assert_eq!(c.witness, "3");
    }

    #[test]
    fn json_field_order_is_fixed() {
        let line = Certificate::new("demo", 3, String::new())
            .param("i", 2)
            .to_json_line();
        let keys = [
            "\"claim\"",
            "\"n\"",
            "\"params\"",
            "\"status\"",
            "\"witness\"",
            "\"wall_time_ms\"",
            "\"engine_version\"",
            "\"conventions\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| line.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{line}");
        assert!(line.contains("\"status\":\"pass\""));
        assert!(line.contains("\"wall_time_ms\":null"));
    }

    #[test]
    fn matrix_witness_lists_nonzero_entries() {
        let m = Matrix::from_fn(2, |i, j| Rat::int(if i == 1 && j == 0 { 4 } else { 0 }));
        assert_eq!(m.witness(), "(2,1): 4");
    }
}
