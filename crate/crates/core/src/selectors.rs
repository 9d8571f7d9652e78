//! Text selectors for representations, curvature sources and subalgebras,
//! shared by the command-line tool and the C interface.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use serde::Deserialize;

use crate::curvature::{bi_invariant_group, curvature_from_json, random_curvature, random_symmetric, sphere, CurvatureOperator};
use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::representations::{rep_standard, rep_tensor, Rep, StandardKind};
use crate::so_algebra::{full_subalgebra, simple_algebra, so_diag_subalgebra, u_subalgebra, SoBasis, Subalgebra, TypeRank};
use crate::spin::{rep_half_spin, rep_spin};

/// `trivial | vector | adjoint | exterior:p | sym:p | sym0 | spin | spin+ |
/// spin- | tensor:a,b,…`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepSelector {
    Standard(StandardKind),
    Spin,
    HalfSpin(bool),
    Tensor(Vec<RepSelector>),
}

impl FromStr for RepSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("unknown representation '{s}'"));
        let degree = |p: &str| p.parse::<usize>().map_err(|_| bad());
        Ok(match s {
            "trivial" => RepSelector::Standard(StandardKind::Trivial),
            "vector" => RepSelector::Standard(StandardKind::Vector),
            "adjoint" => RepSelector::Standard(StandardKind::Adjoint),
            "sym0" | "sym0:2" => RepSelector::Standard(StandardKind::Sym0),
            "spin" => RepSelector::Spin,
            "spin+" => RepSelector::HalfSpin(true),
            "spin-" => RepSelector::HalfSpin(false),
            _ => match s.split_once(':') {
                Some(("exterior", p)) => RepSelector::Standard(StandardKind::Exterior(degree(p)?)),
                Some(("sym", p)) => RepSelector::Standard(StandardKind::Sym(degree(p)?)),
                Some(("tensor", rest)) => {
                    let parts: Vec<RepSelector> = rest.split(',').map(str::parse).collect::<Result<_>>()?;
                    if parts.len() < 2 {
                        return Err(Error::InvalidArgument(format!("'{s}' needs at least two factors")));
                    }
                    RepSelector::Tensor(parts)
                }
                _ => return Err(bad()),
            },
        })
    }
}

impl fmt::Display for RepSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepSelector::Standard(StandardKind::Trivial) => f.write_str("trivial"),
            RepSelector::Standard(StandardKind::Vector) => f.write_str("vector"),
            RepSelector::Standard(StandardKind::Adjoint) => f.write_str("adjoint"),
            RepSelector::Standard(StandardKind::Sym0) => f.write_str("sym0"),
            RepSelector::Standard(StandardKind::Exterior(p)) => write!(f, "exterior:{p}"),
            RepSelector::Standard(StandardKind::Sym(p)) => write!(f, "sym:{p}"),
            RepSelector::Spin => f.write_str("spin"),
            RepSelector::HalfSpin(true) => f.write_str("spin+"),
            RepSelector::HalfSpin(false) => f.write_str("spin-"),
            RepSelector::Tensor(parts) => {
                let inner: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "tensor:{}", inner.join(","))
            }
        }
    }
}

impl RepSelector {
    pub fn build(&self, basis: &Arc<SoBasis>) -> Result<Rep> {
        match self {
            RepSelector::Standard(k) => rep_standard(basis, *k),
            RepSelector::Spin => rep_spin(basis),
            RepSelector::HalfSpin(p) => {
                if basis.n() % 2 == 1 {
                    return Err(Error::InvalidArgument(format!("half-spin needs even n, got {}", basis.n())));
                }
                rep_half_spin(basis, *p)
            }
            RepSelector::Tensor(parts) => {
                let mut out = parts[0].build(basis)?;
                for p in &parts[1..] {
                    out = rep_tensor(&out, &p.build(basis)?)?;
                }
                Ok(out)
            }
        }
    }
}

/// `sphere | group:<type> | file:<path> | random:<seed> | random-symmetric:<seed>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvatureSource {
    Sphere,
    Group(TypeRank),
    File(PathBuf),
    /// Bianchi-projected Gaussian.
    Random(u64),
    /// Symmetric Gaussian without projection.
    RandomSymmetric(u64),
}

impl FromStr for CurvatureSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let seed = |x: &str| {
            x.parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("bad seed in curvature source '{s}'")))
        };
        Ok(match s.split_once(':') {
            None if s == "sphere" => CurvatureSource::Sphere,
            Some(("group", t)) => CurvatureSource::Group(t.parse()?),
            Some(("file", p)) if !p.is_empty() => CurvatureSource::File(PathBuf::from(p)),
            Some(("random", x)) => CurvatureSource::Random(seed(x)?),
            Some(("random-symmetric", x)) => CurvatureSource::RandomSymmetric(seed(x)?),
            _ => return Err(Error::InvalidArgument(format!("unknown curvature source '{s}'"))),
        })
    }
}

impl fmt::Display for CurvatureSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvatureSource::Sphere => f.write_str("sphere"),
            CurvatureSource::Group(t) => write!(f, "group:{t}"),
            CurvatureSource::File(p) => write!(f, "file:{}", p.display()),
            CurvatureSource::Random(s) => write!(f, "random:{s}"),
            CurvatureSource::RandomSymmetric(s) => write!(f, "random-symmetric:{s}"),
        }
    }
}

impl CurvatureSource {
    /// Dimension fixed by the source itself, if any.
    pub fn intrinsic_n(&self) -> Result<Option<usize>> {
        match self {
            CurvatureSource::Group(t) => Ok(Some(t.dim())),
            CurvatureSource::File(p) => Ok(Some(self.load_file(p)?.n())),
            _ => Ok(None),
        }
    }

    fn load_file(&self, p: &PathBuf) -> Result<CurvatureOperator> {
        let text = std::fs::read_to_string(p)?;
        curvature_from_json(&text)
    }

    pub fn is_random(&self) -> bool {
        matches!(self, CurvatureSource::Random(_) | CurvatureSource::RandomSymmetric(_))
    }

    /// Builds the operator; `n` is required for sources without an intrinsic
    /// dimension and must agree with it otherwise.
    pub fn load(&self, n: Option<usize>) -> Result<CurvatureOperator> {
        let need_n = || n.ok_or_else(|| Error::InvalidArgument(format!("curvature source '{self}' needs --n")));
        let op = match self {
            CurvatureSource::Sphere => sphere(need_n()?)?,
            CurvatureSource::Random(s) => random_curvature(need_n()?, *s)?,
            CurvatureSource::RandomSymmetric(s) => random_symmetric(need_n()?, *s)?,
            CurvatureSource::Group(t) => bi_invariant_group(&simple_algebra(*t)?)?,
            CurvatureSource::File(p) => self.load_file(p)?,
        };
        if let Some(n) = n {
            if n != op.n() {
                return Err(Error::DimensionMismatch(format!(
                    "curvature source '{self}' has n = {}, requested n = {n}",
                    op.n()
                )));
            }
        }
        Ok(op)
    }
}

/// `so-full | u:m | so-diag:p | file:<path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubalgebraSpec {
    Full,
    Unitary(usize),
    Diagonal(usize),
    File(PathBuf),
}

impl FromStr for SubalgebraSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("unknown subalgebra '{s}'"));
        Ok(match s.split_once(':') {
            None if s == "so-full" => SubalgebraSpec::Full,
            Some(("u", m)) => SubalgebraSpec::Unitary(m.parse().map_err(|_| bad())?),
            Some(("so-diag", p)) => SubalgebraSpec::Diagonal(p.parse().map_err(|_| bad())?),
            Some(("file", p)) if !p.is_empty() => SubalgebraSpec::File(PathBuf::from(p)),
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for SubalgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubalgebraSpec::Full => f.write_str("so-full"),
            SubalgebraSpec::Unitary(m) => write!(f, "u:{m}"),
            SubalgebraSpec::Diagonal(p) => write!(f, "so-diag:{p}"),
            SubalgebraSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Spanning set of a subalgebra: `{"n": n, "elements": [n×n real matrices]}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubalgebraFile {
    n: usize,
    elements: Vec<Vec<Vec<f64>>>,
}

impl SubalgebraSpec {
    pub fn build(&self, n: usize) -> Result<Subalgebra> {
        let h = match self {
            SubalgebraSpec::Full => full_subalgebra(n)?,
            SubalgebraSpec::Unitary(m) => {
                if 2 * m != n {
                    return Err(Error::DimensionMismatch(format!("u({m}) lives in so({}), not so({n})", 2 * m)));
                }
                u_subalgebra(*m)?
            }
            SubalgebraSpec::Diagonal(p) => so_diag_subalgebra(n, *p)?,
            SubalgebraSpec::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let f: SubalgebraFile = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
                if f.n != n {
                    return Err(Error::DimensionMismatch(format!("subalgebra file is for n = {}, requested n = {n}", f.n)));
                }
                let mut mats = Vec::with_capacity(f.elements.len());
                for rows in &f.elements {
                    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                        return Err(Error::Schema(format!("subalgebra elements must be {n}x{n}")));
                    }
                    mats.push(Matrix::from_real_rows(rows));
                }
                Subalgebra::from_spanning(Arc::new(SoBasis::new(n)?), &mats, &format!("file:{}", path.display()))?
            }
        };
        Ok(h)
    }
}
