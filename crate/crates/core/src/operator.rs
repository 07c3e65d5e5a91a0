//! Composable quaternionic operators acting on [`QField`]s.
//!
//! Coefficients always multiply from the left. The only way to multiply from
//! the right is [`Operator::RightI`], which is the `(O|i)Ψ = (OΨ) i` notation.

use crate::error::{QqmError, Result};
use crate::grid::{gradient, QField};
use crate::quaternion::Quaternion;

#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    Identity,
    /// `Ψ ↦ c(x) Ψ`.
    MultiplyByField(QField),
    /// `Ψ ↦ c Ψ` for a constant quaternion.
    MultiplyByConst(Quaternion),
    /// `Ψ ↦ x Ψ`.
    Position,
    /// `Ψ ↦ ∂x Ψ` (central difference).
    Derivative,
    /// `Ψ ↦ i (OΨ)`.
    LeftI(Box<Operator>),
    /// `Ψ ↦ (OΨ) i`.
    RightI(Box<Operator>),
    /// `Ψ ↦ outer(inner(Ψ))`.
    Compose(Box<Operator>, Box<Operator>),
    Sum(Vec<Operator>),
    Scale(f64, Box<Operator>),
}

impl Operator {
    pub fn left_i(self) -> Self {
        Operator::LeftI(Box::new(self))
    }

    pub fn right_i(self) -> Self {
        Operator::RightI(Box::new(self))
    }

    pub fn scaled(self, s: f64) -> Self {
        Operator::Scale(s, Box::new(self))
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(self, inner: Operator) -> Self {
        Operator::Compose(Box::new(self), Box::new(inner))
    }

    pub fn plus(self, other: Operator) -> Self {
        match self {
            Operator::Sum(mut terms) => {
                terms.push(other);
                Operator::Sum(terms)
            }
            op => Operator::Sum(vec![op, other]),
        }
    }

    pub fn minus(self, other: Operator) -> Self {
        self.plus(other.scaled(-1.0))
    }

    /// `Ψ ↦ O(iΨ)`, written `O i`.
    pub fn then_i(self) -> Self {
        self.after(Operator::Identity.left_i())
    }

    /// `Ψ ↦ i O(iΨ)`, written `i O i`.
    pub fn sandwich_i(self) -> Self {
        self.then_i().left_i()
    }

    /// `-iħ ∂x`.
    pub fn momentum_left(hbar: f64) -> Self {
        Operator::Derivative.left_i().scaled(-hbar)
    }

    /// `-ħ (∂x | i)`, i.e. `Ψ ↦ -ħ (∂xΨ) i`.
    pub fn momentum_right(hbar: f64) -> Self {
        Operator::Derivative.right_i().scaled(-hbar)
    }

    /// Evaluates the tree on `f`.
    pub fn apply(&self, f: &QField) -> Result<QField> {
        match self {
            Operator::Identity => Ok(f.clone()),
            Operator::MultiplyByField(c) => f.left_mul_field(c),
            Operator::MultiplyByConst(c) => {
                if !c.is_finite() {
                    return Err(QqmError::MalformedOperator("non-finite constant".into()));
                }
                Ok(f.left_mul(*c))
            }
            Operator::Position => Ok(f.map_with_x(|x, q| q * x)),
            Operator::Derivative => Ok(gradient(f)),
            Operator::LeftI(inner) => Ok(inner.apply(f)?.left_mul(Quaternion::I)),
            Operator::RightI(inner) => Ok(inner.apply(f)?.right_mul(Quaternion::I)),
            Operator::Compose(outer, inner) => outer.apply(&inner.apply(f)?),
            Operator::Sum(terms) => {
                let (first, rest) = terms
                    .split_first()
                    .ok_or_else(|| QqmError::MalformedOperator("empty sum".into()))?;
                let mut acc = first.apply(f)?;
                for t in rest {
                    acc = acc.add(&t.apply(f)?)?;
                }
                Ok(acc)
            }
            Operator::Scale(s, inner) => {
                if !s.is_finite() {
                    return Err(QqmError::MalformedOperator(format!("non-finite scale {s}")));
                }
                Ok(inner.apply(f)?.scale(*s))
            }
        }
    }
}

/// Free-function form of [`Operator::apply`].
pub fn apply_operator(op: &Operator, f: &QField) -> Result<QField> {
    op.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn grid() -> GridSpec {
        GridSpec::new(16, 4.0).unwrap()
    }

    fn sample(g: GridSpec) -> QField {
        QField::from_fn(g, |x| Quaternion::new(x.cos(), 0.5 * x, x.sin(), 1.0 - x))
    }

    #[test]
    fn position_scales_point_mass() {
        let g = grid();
        // x_10 = -2 + 10 * 0.25 = 0.5
        let mut v = vec![Quaternion::ZERO; 16];
        v[10] = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let f = QField::new(g, v).unwrap();
        let out = Operator::Position.apply(&f).unwrap();
        assert_eq!(out.values()[10], Quaternion::new(0.5, 1.0, 1.5, 2.0));
        assert_eq!(out.max_abs_component(), 2.0);
    }

    #[test]
    fn left_i_after_multiply_equals_multiply_by_iv() {
        let g = grid();
        let v = QField::from_fn(g, |x| Quaternion::new(x, 1.0, -x, 0.3));
        let iv = v.left_mul(Quaternion::I);
        let f = sample(g);
        let a = Operator::MultiplyByField(v).left_i().apply(&f).unwrap();
        let b = Operator::MultiplyByField(iv).apply(&f).unwrap();
        assert!(a.l2_distance(&b).unwrap() < 1e-14);
    }

    #[test]
    fn right_i_vs_left_i() {
        let g = grid();
        let complex = QField::from_fn(g, |x| Quaternion::new(x.cos(), x.sin(), 0.0, 0.0));
        let l = Operator::Identity.left_i().apply(&complex).unwrap();
        let r = Operator::Identity.right_i().apply(&complex).unwrap();
        assert_eq!(l, r);

        let jg = complex.left_mul(Quaternion::J);
        let l = Operator::Identity.left_i().apply(&jg).unwrap();
        let r = Operator::Identity.right_i().apply(&jg).unwrap();
        assert_eq!(l, r.scale(-1.0));
    }

    #[test]
    fn sandwich_of_complex_operator_is_negation() {
        let g = grid();
        let f = sample(g);
        let a = Operator::Position.sandwich_i().apply(&f).unwrap();
        let b = Operator::Position.apply(&f).unwrap().scale(-1.0);
        assert!(a.l2_distance(&b).unwrap() < 1e-15);
    }

    #[test]
    fn malformed_trees_are_rejected() {
        let g = grid();
        let f = sample(g);
        assert!(matches!(
            Operator::Sum(vec![]).apply(&f),
            Err(QqmError::MalformedOperator(_))
        ));
        assert!(Operator::Identity.scaled(f64::NAN).apply(&f).is_err());
        let other = QField::zeros(GridSpec::new(16, 5.0).unwrap());
        assert!(matches!(
            Operator::MultiplyByField(other).apply(&f),
            Err(QqmError::GridMismatch { .. })
        ));
    }

    #[test]
    fn momentum_on_plane_wave() {
        let g = GridSpec::new(64, 10.0).unwrap();
        let k = g.wavenumber(3);
        let f = QField::from_fn(g, |x| Quaternion::new((k * x).cos(), (k * x).sin(), 0.0, 0.0));
        let keff = (k * g.dx()).sin() / g.dx();
        let p = Operator::momentum_left(1.0).apply(&f).unwrap();
        assert!(p.l2_distance(&f.scale(keff)).unwrap() < 1e-12);
        let p = Operator::momentum_right(1.0).apply(&f).unwrap();
        assert!(p.l2_distance(&f.scale(keff)).unwrap() < 1e-12);
    }
}
