//! The lattice-ordered group of invertible fractional ideals, seen through
//! difference functions.

mod profile;
mod rank;

pub use profile::{component_profile, ComponentProfile, Layer, LayerPiece};
pub use rank::{window, zrank, RankCertificate};

use std::fmt;

use serde::Serialize;

use crate::criticality::{crit_set, Level};
use crate::domain_model::{DomainModel, GeneratorSpec};
use crate::error::{Error, Result};
use crate::factorization::bounded_witness;
use crate::ideal_fn::{FractionalFunction, IdealFunction};
use crate::ordinal_space::{Ordinal, PointSet, SpectrumSpace};

/// How an element was built.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Zero,
    Generator {
        index: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        anchor: Option<Ordinal>,
        #[serde(skip_serializing_if = "Option::is_none")]
        t: Option<u64>,
    },
    Function(String),
    Add(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Meet(Box<Expr>, Box<Expr>),
    Join(Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Zero => write!(f, "0"),
            Expr::Generator { index, anchor, t } => {
                write!(f, "g{index}")?;
                if let Some(a) = anchor {
                    write!(f, "@{a}")?;
                }
                if let Some(t) = t {
                    write!(f, "[{t}]")?;
                }
                Ok(())
            }
            Expr::Function(s) => write!(f, "{s}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Neg(a) => write!(f, "-{a}"),
            Expr::Meet(a, b) => write!(f, "({a} ∧ {b})"),
            Expr::Join(a, b) => write!(f, "({a} ∨ {b})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupElement {
    pub value: FractionalFunction,
    pub expression: Expr,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.value.same_values(&other.value)
    }
}

impl GroupElement {
    pub fn zero(space: &SpectrumSpace) -> Self {
        GroupElement {
            value: FractionalFunction::from_ideal(IdealFunction::zero(space)),
            expression: Expr::Zero,
        }
    }

    pub fn from_ideal(f: IdealFunction, label: impl Into<String>) -> Self {
        GroupElement {
            value: FractionalFunction::from_ideal(f),
            expression: Expr::Function(label.into()),
        }
    }

    /// A generator member; `anchor` and `t` are ignored for single generators.
    pub fn generator(
        model: &DomainModel,
        index: usize,
        anchor: Option<&Ordinal>,
        t: u64,
    ) -> Result<Self> {
        let g = model
            .generators
            .get(index)
            .ok_or_else(|| Error::InvalidModel(format!("no generator {index}")))?;
        let (f, expression) = match g {
            GeneratorSpec::Single(f) => (
                f.clone(),
                Expr::Generator {
                    index,
                    anchor: None,
                    t: None,
                },
            ),
            GeneratorSpec::Chain(c) => (
                c.instance(&model.space, anchor, t)?,
                Expr::Generator {
                    index,
                    anchor: anchor.cloned(),
                    t: Some(t),
                },
            ),
        };
        Ok(GroupElement {
            value: FractionalFunction::from_ideal(f),
            expression,
        })
    }

    pub fn space(&self) -> &SpectrumSpace {
        self.value.num().space()
    }

    pub fn value_at(&self, p: &Ordinal) -> Result<i64> {
        self.value.value(p)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(GroupElement {
            value: self.value.add(&other.value)?,
            expression: Expr::Add(
                Box::new(self.expression.clone()),
                Box::new(other.expression.clone()),
            ),
        })
    }

    pub fn neg(&self) -> Self {
        GroupElement {
            value: self.value.neg(),
            expression: Expr::Neg(Box::new(self.expression.clone())),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        Ok(GroupElement {
            value: self.value.meet(&other.value)?,
            expression: Expr::Meet(
                Box::new(self.expression.clone()),
                Box::new(other.expression.clone()),
            ),
        })
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        Ok(GroupElement {
            value: self.value.join(&other.value)?,
            expression: Expr::Join(
                Box::new(self.expression.clone()),
                Box::new(other.expression.clone()),
            ),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Points where the element is nonzero.
    pub fn support(&self) -> PointSet {
        self.value
            .num()
            .support()
            .union(&self.value.den().support())
            .expect("same space")
    }
}

/// Bounds for the positive and negative parts of a kernel element.
#[derive(Clone, Debug, Serialize)]
pub struct KernelCertificate {
    pub in_kernel: bool,
    /// A point of the support inside the critical set, when not in the kernel.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Ordinal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub den_bound: Option<u64>,
}

/// Whether `g` vanishes on `Crit^level`; kernel elements come with bounds.
pub fn kernel_membership(
    model: &DomainModel,
    g: &GroupElement,
    level: Level,
) -> Result<KernelCertificate> {
    if g.space() != &model.space {
        return Err(Error::SpaceMismatch);
    }
    let crit = crit_set(model, level)?;
    if let Some(p) = g.support().intersect(&crit)?.first_point() {
        return Ok(KernelCertificate {
            in_kernel: false,
            obstruction: Some(p),
            num_bound: None,
            den_bound: None,
        });
    }
    let bound = |f: &IdealFunction| -> Result<Option<u64>> {
        if f.support().is_empty() {
            return Ok(Some(0));
        }
        Ok(Some(
            bounded_witness(model, &f.clone().with_fg(true))?.bound,
        ))
    };
    Ok(KernelCertificate {
        in_kernel: true,
        obstruction: None,
        num_bound: bound(g.value.num())?,
        den_bound: bound(g.value.den())?,
    })
}

/// Indicators of `0..6` and tail members at cuts `6..12` on `example-2`.
pub fn canonical_example2_generators(model: &DomainModel) -> Result<Vec<GroupElement>> {
    let mut out = Vec::with_capacity(12);
    for k in 0..6u64 {
        out.push(GroupElement::generator(
            model,
            0,
            Some(&Ordinal::finite(k)),
            0,
        )?);
    }
    for t in 6..12u64 {
        out.push(GroupElement::generator(model, 1, None, t)?);
    }
    Ok(out)
}
