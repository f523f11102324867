//! The certificate file format shared by the library and the command line.
//!
//! Field order is fixed; optional sections are omitted when absent so that
//! serialize, parse and serialize again reproduces the same bytes.
//! Permutations are stored 1-based: entry `l` is the image of `l`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, FieldParams, Poly};
use crate::balanced::{certificate_from_balanced, is_balanced, BalancedMultiset, PermutationCertificate};
use crate::bounds::{BoundsError, ExtremalInstance, OrderBoundCertificate};
use crate::engine::{verify_certificate, CoeffTuple, EngineError, DEFAULT_DET_CHECK_BOUND};
use crate::numfield::{
    parse_tuple, permutation_sum, verify_numfield_certificate, NumFieldCertificate, NumFieldError, QuadField,
    QuadInt,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("malformed certificate JSON: {0}")]
    Json(String),
    #[error("certificate does not match the schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    NumField(#[from] NumFieldError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    Balanced,
    Certificate,
    Extremal,
    Numfield,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderBoundRecord {
    pub triple: [String; 3],
    pub element: String,
    pub order: u128,
    pub group_order: u128,
    pub generator_flag: bool,
    pub degree: usize,
    pub claimed_min: u128,
    pub conditional: bool,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldHeader {
    pub m: i64,
    pub omega: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub n: usize,
    pub coeffs: Vec<String>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n_box: Option<usize>,
    pub m: usize,
    pub permutations: Vec<Vec<usize>>,
    pub kernel_vector: Vec<String>,
    pub kind: CertKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balanced: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_bound: Option<OrderBoundRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldHeader>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<u64>>>,
}

fn texts<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn one_based(perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    perms.iter().map(|p| p.iter().map(|&k| k + 1).collect()).collect()
}

fn order_record<T: ToString>(inst: &ExtremalInstance<T>) -> OrderBoundRecord {
    let c = &inst.certificate;
    OrderBoundRecord {
        triple: [c.triple[0].to_string(), c.triple[1].to_string(), c.triple[2].to_string()],
        element: c.element.to_string(),
        order: c.order,
        group_order: c.group_order,
        generator_flag: c.generator_flag,
        degree: inst.degree,
        claimed_min: inst.claimed_min,
        conditional: inst.conditional,
        degenerate: inst.degenerate,
    }
}

impl CertificateFile {
    fn poly_base(a: &CoeffTuple, n_box: Option<usize>, c: &PermutationCertificate<Poly>, kind: CertKind) -> Self {
        Self {
            q: Some(a.field().q()),
            n: a.n(),
            coeffs: texts(a.coeffs()),
            n_box,
            m: c.dimension(),
            permutations: one_based(&c.permutations),
            kernel_vector: texts(&c.kernel_vector),
            kind,
            balanced: None,
            order_bound: None,
            field: None,
            alpha: None,
            matrix: None,
        }
    }

    /// A balanced multiset together with its permutation certificate.
    pub fn from_balanced(a: &CoeffTuple, n_box: usize, b: &BalancedMultiset<Poly>) -> Self {
        let mut out = Self::poly_base(a, Some(n_box), &certificate_from_balanced(b), CertKind::Balanced);
        out.balanced = Some(b.tuples().iter().map(|t| texts(t)).collect());
        out
    }

    pub fn from_certificate(a: &CoeffTuple, n_box: Option<usize>, c: &PermutationCertificate<Poly>) -> Self {
        Self::poly_base(a, n_box, c, CertKind::Certificate)
    }

    /// An extremal triple over F_q[t], optionally with a certificate for it.
    pub fn from_extremal_fqt(inst: &ExtremalInstance<Poly>, c: Option<(usize, &PermutationCertificate<Poly>)>) -> Self {
        let a = inst.coeff_tuple();
        let empty = PermutationCertificate { permutations: Vec::new(), kernel_vector: Vec::new() };
        let (n_box, cert) = match c {
            Some((n_box, c)) => (Some(n_box), c),
            None => (None, &empty),
        };
        let mut out = Self::poly_base(&a, n_box, cert, CertKind::Extremal);
        out.order_bound = Some(order_record(inst));
        out
    }

    /// An extremal integer triple; only the order bound is certified.
    pub fn from_extremal_int(inst: &ExtremalInstance<i64>) -> Self {
        Self {
            q: None,
            n: 3,
            coeffs: texts(&inst.triple),
            n_box: None,
            m: 0,
            permutations: Vec::new(),
            kernel_vector: Vec::new(),
            kind: CertKind::Extremal,
            balanced: None,
            order_bound: Some(order_record(inst)),
            field: None,
            alpha: None,
            matrix: None,
        }
    }

    /// Coefficients `(1, ..., 1, -alpha)` with `X_n` the identity.
    pub fn from_numfield(c: &NumFieldCertificate) -> Self {
        let k = c.field;
        let mut coeffs = vec!["1".to_string(); c.n - 1];
        coeffs.push(c.alpha.neg().to_string());
        let mut perms = c.permutations.clone();
        perms.push((0..c.matrix.size()).collect());
        Self {
            q: None,
            n: c.n,
            coeffs,
            n_box: None,
            m: c.matrix.size(),
            permutations: one_based(&perms),
            kernel_vector: c.eigenvector.clone(),
            kind: CertKind::Numfield,
            balanced: None,
            order_bound: None,
            field: Some(FieldHeader { m: k.m(), omega: if k.half_omega() { "half" } else { "sqrt" }.into() }),
            alpha: Some(c.alpha.to_string()),
            matrix: Some(c.matrix.rows().to_vec()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CertError> {
        serde_json::from_str(text).map_err(|e| CertError::Json(e.to_string()))
    }

    /// Re-checks the certificate from its contents alone. `Ok(false)` means a
    /// well-formed certificate that does not verify.
    pub fn verify(&self) -> Result<bool, CertError> {
        match (self.kind, self.q) {
            (CertKind::Numfield, _) => self.verify_numfield(),
            (CertKind::Extremal, None) => self.verify_extremal_int(),
            (_, None) => Err(CertError::Schema("missing \"q\"".into())),
            (kind, Some(q)) => {
                let field = FieldParams::new(q)?;
                let a = self.poly_tuple(field)?;
                let mut ok = true;
                if kind == CertKind::Extremal {
                    ok &= self.verify_order_fqt(field, &a)?;
                    if self.m == 0 {
                        return Ok(ok && self.permutations.is_empty() && self.kernel_vector.is_empty());
                    }
                }
                if kind == CertKind::Balanced {
                    let rows = self.balanced.as_ref().ok_or_else(|| CertError::Schema("missing \"balanced\"".into()))?;
                    let rows: Vec<Vec<Poly>> = rows
                        .iter()
                        .map(|r| r.iter().map(|s| parse_poly(field, s)).collect())
                        .collect::<Result<_, _>>()?;
                    ok &= rows.len() == self.m
                        && rows.iter().all(|r| r.len() == a.n())
                        && is_balanced(a.coeffs(), &rows).unwrap_or(false);
                }
                Ok(ok && self.verify_poly_certificate(field, &a)?)
            }
        }
    }

    fn poly_tuple(&self, field: FieldParams) -> Result<CoeffTuple, CertError> {
        let coeffs: Vec<Poly> = self.coeffs.iter().map(|s| parse_poly(field, s)).collect::<Result<_, _>>()?;
        if coeffs.len() != self.n {
            return Err(CertError::Schema(format!("n = {} but {} coefficients", self.n, coeffs.len())));
        }
        Ok(CoeffTuple::new(coeffs)?)
    }

    fn zero_based(&self, count: usize) -> Option<Vec<Vec<usize>>> {
        if self.permutations.len() != count || self.permutations.iter().any(|p| p.len() != self.m) {
            return None;
        }
        self.permutations
            .iter()
            .map(|p| p.iter().map(|&k| k.checked_sub(1).filter(|&k| k < self.m)).collect())
            .collect()
    }

    fn verify_poly_certificate(&self, field: FieldParams, a: &CoeffTuple) -> Result<bool, CertError> {
        let v: Vec<Poly> = self.kernel_vector.iter().map(|s| parse_poly(field, s)).collect::<Result<_, _>>()?;
        let Some(perms) = self.zero_based(a.n()) else {
            return Ok(false);
        };
        if v.len() != self.m || self.m == 0 {
            return Ok(false);
        }
        let c = PermutationCertificate { permutations: perms, kernel_vector: v };
        match verify_certificate(a, &c, DEFAULT_DET_CHECK_BOUND) {
            Ok(ok) => Ok(ok),
            Err(EngineError::Balance(_)) => Ok(false),
            Err(e) => Err(e.into()),
        }
    }

    fn record(&self) -> Result<&OrderBoundRecord, CertError> {
        self.order_bound.as_ref().ok_or_else(|| CertError::Schema("missing \"order_bound\"".into()))
    }

    fn verify_order_fqt(&self, field: FieldParams, a: &CoeffTuple) -> Result<bool, CertError> {
        let r = self.record()?;
        let triple: Vec<Poly> = r.triple.iter().map(|s| parse_poly(field, s)).collect::<Result<_, _>>()?;
        let cert = OrderBoundCertificate {
            triple: [triple[0].clone(), triple[1].clone(), triple[2].clone()],
            element: parse_poly(field, &r.element)?,
            order: r.order,
            group_order: r.group_order,
            generator_flag: r.generator_flag,
        };
        let claimed = (field.q() as u128).checked_pow(r.degree as u32).map(|v| v - 1);
        Ok(a.coeffs() == triple.as_slice()
            && claimed == Some(r.claimed_min)
            && r.claimed_min == r.order
            && cert.verify()?)
    }

    fn verify_extremal_int(&self) -> Result<bool, CertError> {
        let r = self.record()?;
        let parse = |s: &String| s.trim().parse::<i64>().map_err(|e| CertError::Schema(format!("integer {s:?}: {e}")));
        let triple: Vec<i64> = r.triple.iter().map(parse).collect::<Result<_, _>>()?;
        let coeffs: Vec<i64> = self.coeffs.iter().map(parse).collect::<Result<_, _>>()?;
        let cert = OrderBoundCertificate {
            triple: [triple[0], triple[1], triple[2]],
            element: parse(&r.element)?,
            order: r.order,
            group_order: r.group_order,
            generator_flag: r.generator_flag,
        };
        Ok(self.n == 3 && coeffs == triple && r.claimed_min == r.order && self.m == 0 && cert.verify()?)
    }

    fn verify_numfield(&self) -> Result<bool, CertError> {
        let header = self.field.as_ref().ok_or_else(|| CertError::Schema("missing \"field\"".into()))?;
        let k = QuadField::new(header.m)?;
        if header.omega != if k.half_omega() { "half" } else { "sqrt" } {
            return Err(CertError::Schema(format!("omega {:?} does not match m = {}", header.omega, header.m)));
        }
        let alpha = self.alpha.as_ref().ok_or_else(|| CertError::Schema("missing \"alpha\"".into()))?;
        let alpha = QuadInt::parse(k, alpha)?;
        let coeffs = parse_tuple(k, &self.coeffs.join(";"))?;
        let mut expected = vec![k.int(1); self.n.saturating_sub(1)];
        expected.push(alpha.neg());
        if self.n < 3 || coeffs != expected {
            return Ok(false);
        }
        let Some(perms) = self.zero_based(self.n) else {
            return Ok(false);
        };
        if perms[self.n - 1].iter().enumerate().any(|(l, &k)| l != k) {
            return Ok(false);
        }
        let sum = permutation_sum(&perms[..self.n - 1])?;
        if self.matrix.as_ref().is_some_and(|d| d.as_slice() != sum.rows()) {
            return Ok(false);
        }
        let z: Vec<QuadInt> = self.kernel_vector.iter().map(|s| QuadInt::parse(k, s)).collect::<Result<_, _>>()?;
        Ok(sum.has_eigenvector(&alpha, &z) && verify_numfield_certificate(&alpha, self.n, &perms[..self.n - 1]))
    }
}

fn parse_poly(field: FieldParams, s: &str) -> Result<Poly, CertError> {
    Poly::parse(field, s.trim()).map_err(|e| CertError::Algebra(e.into()))
}
