use num_complex::Complex64;

use super::Matrix;

/// One Fock level (matrix column) of a comparison `L = R`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelResidual {
    pub level: usize,
    /// `max_i |L_in|`; `None` where singular.
    pub value: Option<f64>,
    /// `max_i |(L − R)_in|`
    pub absolute: Option<f64>,
    /// `absolute / max(1, max|L_·n|, max|R_·n|)`
    pub relative: Option<f64>,
    pub interior: bool,
}

impl LevelResidual {
    pub fn is_singular(&self) -> bool {
        self.relative.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualTable {
    pub levels: Vec<LevelResidual>,
    /// Highest level counted as interior.
    pub last_interior: usize,
    /// Largest relative residual over non-singular interior levels.
    pub max_interior: f64,
    pub max_interior_absolute: f64,
    /// Largest absolute residual over non-singular boundary levels.
    pub max_boundary: f64,
}

impl ResidualTable {
    pub(crate) fn compare(
        l: &Matrix<Complex64>,
        r: &Matrix<Complex64>,
        diff: &Matrix<Complex64>,
        last_interior: usize,
    ) -> Self {
        let levels: Vec<LevelResidual> = (0..l.size())
            .map(|n| {
                let (lv, rv, dv) = (l.column_max(n), r.column_max(n), diff.column_max(n));
                let relative = match (lv, rv, dv) {
                    (Some(a), Some(b), Some(d)) => Some(d / a.max(b).max(1.0)),
                    _ => None,
                };
                LevelResidual {
                    level: n,
                    value: lv,
                    absolute: dv.filter(|_| relative.is_some()),
                    relative,
                    interior: n <= last_interior,
                }
            })
            .collect();
        let fold = |pick: fn(&LevelResidual) -> Option<f64>, interior: bool| {
            levels
                .iter()
                .filter(|x| x.interior == interior)
                .filter_map(pick)
                .fold(0.0f64, f64::max)
        };
        Self {
            max_interior: fold(|x| x.relative, true),
            max_interior_absolute: fold(|x| x.absolute, true),
            max_boundary: fold(|x| x.absolute, false),
            last_interior,
            levels,
        }
    }

    /// Table from per-level `(value, |defect|)` pairs computed outside a
    /// matrix comparison; every level counts as interior.
    pub fn from_rows(rows: Vec<(usize, Option<f64>, Option<f64>)>) -> Self {
        let last_interior = rows.iter().map(|r| r.0).max().unwrap_or(0);
        let levels: Vec<LevelResidual> = rows
            .into_iter()
            .map(|(level, value, absolute)| {
                let relative = match (value, absolute) {
                    (Some(v), Some(d)) => Some(d / v.abs().max(1.0)),
                    _ => None,
                };
                LevelResidual {
                    level,
                    value,
                    absolute: absolute.filter(|_| relative.is_some()),
                    relative,
                    interior: true,
                }
            })
            .collect();
        let max_interior = levels.iter().filter_map(|x| x.relative).fold(0.0, f64::max);
        let max_interior_absolute = levels.iter().filter_map(|x| x.absolute).fold(0.0, f64::max);
        Self {
            levels,
            last_interior,
            max_interior,
            max_interior_absolute,
            max_boundary: 0.0,
        }
    }

    pub fn interior(&self) -> impl Iterator<Item = &LevelResidual> {
        self.levels.iter().filter(|x| x.interior)
    }

    pub fn boundary(&self) -> impl Iterator<Item = &LevelResidual> {
        self.levels.iter().filter(|x| !x.interior)
    }

    /// Interior levels that are singular or whose relative residual exceeds `tol`.
    pub fn failing_levels(&self, tol: f64) -> Vec<usize> {
        self.interior()
            .filter(|x| x.relative.is_none_or(|r| !(r <= tol)))
            .map(|x| x.level)
            .collect()
    }

    pub fn singular_levels(&self) -> Vec<usize> {
        self.levels.iter().filter(|x| x.is_singular()).map(|x| x.level).collect()
    }
}
