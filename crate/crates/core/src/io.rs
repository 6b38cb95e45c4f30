//! JSON file format for operator sets and the per-file analysis record.
//!
//! Matrices are row-major nested arrays of `[re, im]` pairs. Floats are written in
//! shortest round-trip form, so parsing a written file gives back identical bits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cob::{sic_criterion, spectral_profile, validate_cob, Cob, SIC_GAP_TOL};
use crate::constructions::MubSet;
use crate::error::{Error, Result};
use crate::gsic::{
    average_purity, gsic_average_purity, gsic_constants, gsic_to_cob, validate_povm, GsicPovm,
};
use crate::operator::{c, CMatrix, ComplexVector, HermitianOperator};
use crate::tomography::{canonical_dual, gsic_max_mse, max_scaled_mse_over_orbit, zhu_bound};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    Cob,
    Gsic,
    Povm,
    Basis,
    Mub,
    UnitarySet,
}

impl SetKind {
    /// Required number of matrices for dimension `d`, or `None` if any positive
    /// count is allowed.
    pub fn expected_count(self, d: usize) -> Option<usize> {
        match self {
            SetKind::Cob | SetKind::Gsic | SetKind::Basis | SetKind::UnitarySet => Some(d * d),
            SetKind::Mub => Some(d + 1),
            SetKind::Povm => None,
        }
    }

    fn is_hermitian(self) -> bool {
        !matches!(self, SetKind::Mub | SetKind::UnitarySet)
    }
}

pub type Entry = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSetFile {
    pub schema_version: String,
    pub kind: SetKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub operators: Vec<Vec<Vec<Entry>>>,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

fn encode(m: &CMatrix) -> Vec<Vec<Entry>> {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|col| [m[(r, col)].re, m[(r, col)].im])
                .collect()
        })
        .collect()
}

impl OperatorSetFile {
    pub fn from_matrices(kind: SetKind, dim: usize, matrices: &[CMatrix]) -> Result<Self> {
        let file = Self {
            schema_version: SCHEMA_VERSION.into(),
            kind,
            dim,
            lambda: None,
            operators: matrices.iter().map(encode).collect(),
            metadata: BTreeMap::new(),
        };
        file.validate()?;
        Ok(file)
    }

    pub fn from_operators(kind: SetKind, ops: &[HermitianOperator]) -> Result<Self> {
        let dim = ops
            .first()
            .map(HermitianOperator::dim)
            .ok_or(Error::Count {
                expected: 1,
                actual: 0,
            })?;
        let matrices: Vec<CMatrix> = ops.iter().map(|o| o.matrix().clone()).collect();
        Self::from_matrices(kind, dim, &matrices)
    }

    pub fn from_cob(cob: &Cob) -> Result<Self> {
        Self::from_operators(SetKind::Cob, cob.elements())
    }

    pub fn from_gsic(povm: &GsicPovm) -> Result<Self> {
        Ok(Self::from_operators(SetKind::Gsic, povm.elements())?.with_lambda(povm.lambda()))
    }

    /// One unitary per basis, its columns being the basis vectors.
    pub fn from_mub(mubs: &MubSet) -> Result<Self> {
        let matrices: Vec<CMatrix> = (0..=mubs.dim()).map(|j| mubs.basis_matrix(j)).collect();
        Self::from_matrices(SetKind::Mub, mubs.dim(), &matrices)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    /// Checks the schema version, matrix shapes, counts for the kind, and that
    /// every entry is finite.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Constraint(format!(
                "unsupported schema_version {:?}, expected {SCHEMA_VERSION:?}",
                self.schema_version
            )));
        }
        let d = self.dim;
        if d == 0 {
            return Err(Error::Dimension("dim must be >= 1".into()));
        }
        match self.kind.expected_count(d) {
            Some(n) if n != self.operators.len() => {
                return Err(Error::Count {
                    expected: n,
                    actual: self.operators.len(),
                })
            }
            None if self.operators.is_empty() => {
                return Err(Error::Count {
                    expected: 1,
                    actual: 0,
                })
            }
            _ => {}
        }
        for (i, m) in self.operators.iter().enumerate() {
            if m.len() != d || m.iter().any(|row| row.len() != d) {
                return Err(Error::Dimension(format!("operator {i} is not {d}x{d}")));
            }
            if m.iter().flatten().flatten().any(|x| !x.is_finite()) {
                return Err(Error::InvalidOperator(format!(
                    "operator {i} has non-finite entries"
                )));
            }
        }
        if let Some(l) = self.lambda {
            if !l.is_finite() {
                return Err(Error::Constraint("lambda must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn matrices(&self) -> Vec<CMatrix> {
        let d = self.dim;
        self.operators
            .iter()
            .map(|m| CMatrix::from_fn(d, d, |r, col| c(m[r][col][0], m[r][col][1])))
            .collect()
    }

    /// The matrices as Hermitian operators. Fails for unitary kinds or
    /// non-Hermitian entries.
    pub fn hermitian_operators(&self) -> Result<Vec<HermitianOperator>> {
        if !self.kind.is_hermitian() {
            return Err(Error::Constraint(format!(
                "{:?} files do not hold Hermitian operators",
                self.kind
            )));
        }
        self.matrices()
            .into_iter()
            .map(HermitianOperator::new)
            .collect()
    }

    pub fn to_cob(&self, tol: f64) -> Result<Cob> {
        validate_cob(self.hermitian_operators()?, tol)
    }

    pub fn to_gsic(&self, tol: f64) -> Result<GsicPovm> {
        GsicPovm::from_operators(self.hermitian_operators()?, tol)
    }

    pub fn to_mub(&self) -> Result<MubSet> {
        if self.kind != SetKind::Mub {
            return Err(Error::Constraint(format!(
                "expected a mub file, got {:?}",
                self.kind
            )));
        }
        let bases = self
            .matrices()
            .iter()
            .map(|m| {
                (0..self.dim)
                    .map(|col| ComplexVector::new(m.column(col).iter().copied().collect()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MubSet::new(bases)
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse {
            line: 0,
            column: 0,
            message: e.to_string(),
        })
    }

    /// Parses and validates. Syntax and type errors carry their position.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        file.validate()?;
        Ok(file)
    }
}

/// Summary numbers for a COB, GSIC POVM, or general POVM.
///
/// For a COB the GSIC fields refer to its canonical GSIC POVM at `lambda*`.
/// `max_mse_pure` and `zhu_bound_pure` are for pure states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub dim: usize,
    pub kind: SetKind,
    pub tau: Option<f64>,
    pub lambda_star: Option<f64>,
    pub negativity: Option<f64>,
    pub is_sic_capable: Option<bool>,
    /// Mixing parameter of the GSIC POVM the remaining fields describe.
    pub lambda: Option<f64>,
    pub a_prime: Option<f64>,
    pub b_prime: Option<f64>,
    pub avg_purity: Option<f64>,
    pub max_mse_pure: Option<f64>,
    pub zhu_bound_pure: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_star_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_power_residuals: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_informationally_complete: Option<bool>,
}

impl AnalysisRecord {
    /// Largest violation among the identities linking the fields:
    /// `lambda* = 1/(1 + d^2 tau)`, `N = d tau`, `a' + (d^2-1) b' = 1/d`,
    /// `avg_purity = d^2 a'` for GSICs, and `zhu_bound_pure <= max_mse_pure`.
    pub fn consistency_residual(&self) -> f64 {
        let d = self.dim as f64;
        let mut worst = 0.0_f64;
        if let (Some(tau), Some(ls), Some(neg)) = (self.tau, self.lambda_star, self.negativity) {
            worst = worst.max((ls - 1.0 / (1.0 + d * d * tau)).abs());
            worst = worst.max((neg - d * tau).abs());
        }
        if let (Some(a), Some(b)) = (self.a_prime, self.b_prime) {
            worst = worst.max((a + (d * d - 1.0) * b - 1.0 / d).abs());
            if let Some(p) = self.avg_purity {
                worst = worst.max((p - d * d * a).abs());
            }
        }
        if let (Some(z), Some(m)) = (self.zhu_bound_pure, self.max_mse_pure) {
            worst = worst.max(z - m);
        }
        worst
    }
}

fn gsic_fields(record: &mut AnalysisRecord, lambda: f64, a: f64, b: f64) -> Result<()> {
    let d = record.dim;
    let purity = (d * d) as f64 * a;
    record.lambda = Some(lambda);
    record.a_prime = Some(a);
    record.b_prime = Some(b);
    record.avg_purity = Some(purity);
    record.max_mse_pure = Some(gsic_max_mse(lambda, d, 1.0)?);
    record.zhu_bound_pure = Some(zhu_bound(d, purity, 1.0)?);
    record.is_informationally_complete = Some(true);
    Ok(())
}

fn empty_record(dim: usize, kind: SetKind) -> AnalysisRecord {
    AnalysisRecord {
        dim,
        kind,
        tau: None,
        lambda_star: None,
        negativity: None,
        is_sic_capable: None,
        lambda: None,
        a_prime: None,
        b_prime: None,
        avg_purity: None,
        max_mse_pure: None,
        zhu_bound_pure: None,
        lambda_star_gap: None,
        trace_power_residuals: None,
        is_informationally_complete: None,
    }
}

fn cob_fields(record: &mut AnalysisRecord, cob: &Cob) {
    let profile = spectral_profile(cob);
    let sic = sic_criterion(cob, SIC_GAP_TOL);
    record.tau = Some(profile.tau);
    record.lambda_star = Some(profile.lambda_star);
    record.negativity = Some(profile.negativity);
    record.is_sic_capable = Some(sic.is_sic_capable);
    record.lambda_star_gap = Some(sic.lambda_star_gap);
    record.trace_power_residuals = Some(sic.trace_power_residuals);
}

pub fn analyze_cob(cob: &Cob) -> Result<AnalysisRecord> {
    let mut record = empty_record(cob.dim(), SetKind::Cob);
    cob_fields(&mut record, cob);
    let lambda = record.lambda_star.expect("set above");
    let (a, b) = gsic_constants(lambda, cob.dim())?;
    gsic_fields(&mut record, lambda, a, b)?;
    debug_assert!(
        (record.avg_purity.unwrap() - gsic_average_purity(lambda, cob.dim())).abs() < 1e-12
    );
    Ok(record)
}

pub fn analyze_gsic(povm: &GsicPovm) -> Result<AnalysisRecord> {
    let mut record = empty_record(povm.dim(), SetKind::Gsic);
    let (cob, _) = gsic_to_cob(povm)?;
    cob_fields(&mut record, &cob);
    gsic_fields(&mut record, povm.lambda(), povm.a_prime(), povm.b_prime())?;
    Ok(record)
}

/// GSIC POVMs get the full record. Other informationally complete POVMs get the
/// average purity, the Zhu bound, and the exact worst-case pure-state MSE of the
/// canonical dual estimator.
pub fn analyze_povm(ops: &[HermitianOperator], tol: f64) -> Result<AnalysisRecord> {
    let report = validate_povm(ops, tol)?;
    if report.is_gsic {
        let povm = GsicPovm::from_operators(ops.to_vec(), tol)?;
        let mut record = analyze_gsic(&povm)?;
        record.kind = SetKind::Povm;
        return Ok(record);
    }
    let d = report.dim;
    let mut record = empty_record(d, SetKind::Povm);
    record.is_informationally_complete = Some(report.is_ic);
    let purity = average_purity(ops)?;
    record.avg_purity = Some(purity);
    if report.is_ic && report.is_povm {
        let dual = canonical_dual(ops)?;
        let pure = HermitianOperator::projector(&ComplexVector::basis(d, 0));
        record.max_mse_pure = Some(max_scaled_mse_over_orbit(ops, &dual, &pure)?);
        if d >= 2 && purity > 1.0 / d as f64 {
            record.zhu_bound_pure = Some(zhu_bound(d, purity, 1.0)?);
        }
    }
    Ok(record)
}

/// Dispatches on the file kind. Only `cob`, `gsic`, and `povm` files are analyzable.
pub fn analyze_file(file: &OperatorSetFile, tol: f64) -> Result<AnalysisRecord> {
    match file.kind {
        SetKind::Cob => analyze_cob(&file.to_cob(tol)?),
        SetKind::Gsic => analyze_gsic(&file.to_gsic(tol)?),
        SetKind::Povm => analyze_povm(&file.hermitian_operators()?, tol),
        other => Err(Error::Constraint(format!(
            "cannot analyze a {other:?} file"
        ))),
    }
}
