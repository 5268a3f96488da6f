use serde::{Deserialize, Serialize};

use super::IdealFunction;
use crate::error::{Error, Result};
use crate::ordinal_space::Ordinal;

/// A formal difference `num - den` of two ideal functions, kept with
/// `min(num, den) = 0` pointwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FractionalFunction {
    num: IdealFunction,
    den: IdealFunction,
}

impl FractionalFunction {
    pub fn new(num: IdealFunction, den: IdealFunction) -> Result<FractionalFunction> {
        if num.space() != den.space() {
            return Err(Error::SpaceMismatch);
        }
        let common = num.min_fn(&den)?;
        Ok(FractionalFunction {
            num: num.sub_exact(&common)?,
            den: den.sub_exact(&common)?,
        })
    }

    pub fn from_ideal(f: IdealFunction) -> FractionalFunction {
        let den = IdealFunction::zero(f.space());
        FractionalFunction { num: f, den }
    }

    pub fn num(&self) -> &IdealFunction {
        &self.num
    }

    pub fn den(&self) -> &IdealFunction {
        &self.den
    }

    pub fn value(&self, p: &Ordinal) -> Result<i64> {
        Ok(self.num.value_signed(p)? - self.den.value_signed(p)?)
    }

    pub fn add(&self, other: &FractionalFunction) -> Result<FractionalFunction> {
        FractionalFunction::new(self.num.add(&other.num)?, self.den.add(&other.den)?)
    }

    pub fn neg(&self) -> FractionalFunction {
        FractionalFunction {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    pub fn sub(&self, other: &FractionalFunction) -> Result<FractionalFunction> {
        self.add(&other.neg())
    }

    /// Pointwise minimum: `min(a - b, c - d) = min(a + d, c + b) - (b + d)`.
    pub fn meet(&self, other: &FractionalFunction) -> Result<FractionalFunction> {
        let left = self.num.add(&other.den)?;
        let right = other.num.add(&self.den)?;
        FractionalFunction::new(left.min_fn(&right)?, self.den.add(&other.den)?)
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &FractionalFunction) -> Result<FractionalFunction> {
        let left = self.num.add(&other.den)?;
        let right = other.num.add(&self.den)?;
        FractionalFunction::new(left.max_fn(&right)?, self.den.add(&other.den)?)
    }

    pub fn is_zero(&self) -> bool {
        self.num.sup() == super::Bound::Finite(0) && self.den.sup() == super::Bound::Finite(0)
    }

    pub fn same_values(&self, other: &FractionalFunction) -> bool {
        self.sub(other).is_ok_and(|d| d.is_zero())
    }
}

impl PartialEq for FractionalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.same_values(other)
    }
}
