use std::fmt;

use crate::scalar::{rat, Rational};

/// Which index set a reference node belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeClass {
    /// Vertices of the reference triangle.
    Vertex,
    /// Edge midpoints.
    Midpoint,
    /// Remaining quarter-integer points: vertices of the twice refined triangle.
    Quarter,
}

/// A point of the reference triangle with barycentric coordinates in `Z/4`.
///
/// Stored as numerators over 4, which is all the red-refined reference
/// element needs and keeps comparisons exact and cheap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaryPoint {
    quarters: [u8; 3],
}

impl BaryPoint {
    /// Point with coordinates `q / 4`. Panics unless the numerators sum to 4.
    pub const fn from_quarters(q: [u8; 3]) -> Self {
        assert!(q[0] as u32 + q[1] as u32 + q[2] as u32 == 4, "barycentric coordinates must sum to one");
        Self { quarters: q }
    }

    /// Point from exact coordinates; `None` unless they are non-negative
    /// multiples of 1/4 summing to one.
    pub fn new(lambda: &[Rational; 3]) -> Option<Self> {
        let mut q = [0u8; 3];
        for (qi, l) in q.iter_mut().zip(lambda) {
            let four = l * rat(4, 1);
            if !four.is_integer() || four < rat(0, 1) || four > rat(4, 1) {
                return None;
            }
            *qi = num_traits::ToPrimitive::to_u8(&four.to_integer())?;
        }
        (q.iter().map(|&x| x as u32).sum::<u32>() == 4).then_some(Self { quarters: q })
    }

    pub const fn quarters(&self) -> [u8; 3] {
        self.quarters
    }

    pub fn lambda(&self) -> [Rational; 3] {
        self.quarters.map(|q| rat(q as i64, 4))
    }

    pub fn class(&self) -> NodeClass {
        if self.quarters.iter().all(|q| q % 4 == 0) {
            NodeClass::Vertex
        } else if self.quarters.iter().all(|q| q % 2 == 0) {
            NodeClass::Midpoint
        } else {
            NodeClass::Quarter
        }
    }

    /// Whether the point lies on the edge `lambda_i = 0`.
    pub fn on_edge(&self, i: usize) -> bool {
        self.quarters[i] == 0
    }

    pub fn on_boundary(&self) -> bool {
        self.quarters.contains(&0)
    }

    pub fn permute(&self, p: Perm3) -> Self {
        Self { quarters: p.apply(self.quarters) }
    }

    /// Midpoint of two points, when it is again a quarter point.
    pub fn midpoint(&self, other: &Self) -> Option<Self> {
        let mut q = [0u8; 3];
        for ((q, a), b) in q.iter_mut().zip(self.quarters).zip(other.quarters) {
            if (a + b) % 2 == 1 {
                return None;
            }
            *q = (a + b) / 2;
        }
        Some(Self { quarters: q })
    }
}

impl fmt::Display for BaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambda().iter().map(crate::scalar::format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A permutation of the three barycentric coordinates, acting by
/// `(p λ)_i = λ_{p[i]}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Perm3(pub [usize; 3]);

impl Perm3 {
    pub const IDENTITY: Perm3 = Perm3([0, 1, 2]);

    pub const ALL: [Perm3; 6] =
        [Perm3([0, 1, 2]), Perm3([1, 2, 0]), Perm3([2, 0, 1]), Perm3([1, 0, 2]), Perm3([0, 2, 1]), Perm3([2, 1, 0])];

    pub fn apply<T: Copy>(&self, x: [T; 3]) -> [T; 3] {
        [x[self.0[0]], x[self.0[1]], x[self.0[2]]]
    }

    pub fn inverse(&self) -> Perm3 {
        let mut inv = [0; 3];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Perm3(inv)
    }

    /// The permutation acting as `self` after `other`.
    pub fn after(&self, other: Perm3) -> Perm3 {
        Perm3(self.0.map(|i| other.0[i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(BaryPoint::from_quarters([4, 0, 0]).class(), NodeClass::Vertex);
        assert_eq!(BaryPoint::from_quarters([2, 0, 2]).class(), NodeClass::Midpoint);
        assert_eq!(BaryPoint::from_quarters([1, 3, 0]).class(), NodeClass::Quarter);
        assert_eq!(BaryPoint::from_quarters([2, 1, 1]).class(), NodeClass::Quarter);
    }

    #[test]
    fn permutation_group_laws() {
        let p = BaryPoint::from_quarters([2, 1, 1]);
        for a in Perm3::ALL {
            assert_eq!(p.permute(a).permute(a.inverse()), p);
            for b in Perm3::ALL {
                assert_eq!(p.permute(b).permute(a), p.permute(a.after(b)));
            }
        }
    }

    #[test]
    fn exact_construction() {
        let l = [rat(1, 2), rat(1, 4), rat(1, 4)];
        assert_eq!(BaryPoint::new(&l), Some(BaryPoint::from_quarters([2, 1, 1])));
        assert_eq!(BaryPoint::new(&[rat(1, 3), rat(1, 3), rat(1, 3)]), None);
        assert_eq!(BaryPoint::new(&[rat(1, 4), rat(1, 4), rat(3, 4)]), None);
        assert_eq!(BaryPoint::from_quarters([2, 1, 1]).to_string(), "(1/2,1/4,1/4)");
    }
}
