//! Simple (ADE) singularities, their quasi-homogeneous weights, and the
//! weighted degrees of the branches through a point.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AdeType {
    Smooth,
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::Smooth => write!(f, "smooth"),
            AdeType::A(n) => write!(f, "A{n}"),
            AdeType::D(n) => write!(f, "D{n}"),
            AdeType::E6 => write!(f, "E6"),
            AdeType::E7 => write!(f, "E7"),
            AdeType::E8 => write!(f, "E8"),
        }
    }
}

impl std::str::FromStr for AdeType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown singularity type '{s}'"));
        let s = s.trim();
        match s {
            "smooth" | "A0" => return Ok(AdeType::Smooth),
            "E6" => return Ok(AdeType::E6),
            "E7" => return Ok(AdeType::E7),
            "E8" => return Ok(AdeType::E8),
            _ => {}
        }
        let (head, tail) = s.split_at(1);
        let n: u32 = tail.parse().map_err(|_| bad())?;
        match head {
            "A" if n >= 1 => Ok(AdeType::A(n)),
            "D" if n >= 4 => Ok(AdeType::D(n)),
            _ => Err(bad()),
        }
    }
}

impl AdeType {
    fn unreduced_degree(self) -> u32 {
        match self {
            AdeType::Smooth => 1,
            AdeType::A(n) => 2 * n + 2,
            AdeType::D(n) => 2 * n - 2,
            AdeType::E6 => 12,
            AdeType::E7 => 9,
            AdeType::E8 => 15,
        }
    }

    /// Milnor (= Tjurina) number.
    pub fn milnor(self) -> u32 {
        match self {
            AdeType::Smooth => 0,
            AdeType::A(n) | AdeType::D(n) => n,
            AdeType::E6 => 6,
            AdeType::E7 => 7,
            AdeType::E8 => 8,
        }
    }

    /// Coprime weights `(w_x, w_y)` and weighted degree of the normal form
    /// `x² - y^{n+1}`, `y(x² - y^{n-2})`, `x³ - y⁴`, `x(x² - y³)`, `x³ - y⁵`.
    pub fn weights(self) -> Option<QuasiHomogeneous> {
        let q = |wx: u32, wy: u32, degree: u32| {
            let g = gcd(wx, wy);
            Some(QuasiHomogeneous { wx: wx / g, wy: wy / g, degree: degree / g })
        };
        match self {
            AdeType::Smooth => None,
            AdeType::A(n) => q(n + 1, 2, 2 * (n + 1)),
            AdeType::D(n) => q(n - 2, 2, 2 * n - 2),
            AdeType::E6 => q(4, 3, 12),
            AdeType::E7 => q(3, 2, 9),
            AdeType::E8 => q(5, 3, 15),
        }
    }

    /// Number of analytic branches of the normal form.
    pub fn branches(self) -> u32 {
        match self {
            AdeType::Smooth => 1,
            AdeType::A(n) => {
                if n % 2 == 1 {
                    2
                } else {
                    1
                }
            }
            AdeType::D(n) => {
                if n % 2 == 0 {
                    3
                } else {
                    2
                }
            }
            AdeType::E6 | AdeType::E8 => 1,
            AdeType::E7 => 2,
        }
    }

    /// Multiplicity of the normal form at the origin.
    pub fn multiplicity(self) -> u32 {
        match self {
            AdeType::Smooth => 1,
            AdeType::A(_) => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuasiHomogeneous {
    pub wx: u32,
    pub wy: u32,
    pub degree: u32,
}

/// The germ data a classification needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermInvariants {
    pub multiplicity: u32,
    pub milnor: u32,
    /// For multiplicity 3: whether the tangent cone has a repeated line, and
    /// whether it is a triple line.
    pub cone_repeated: bool,
    pub cone_triple: bool,
}

/// Reads off the simple type from multiplicity, Milnor number and tangent
/// cone. `None` means not simple.
pub fn classify(g: &GermInvariants) -> Option<AdeType> {
    match g.multiplicity {
        1 => (g.milnor == 0).then_some(AdeType::Smooth),
        2 => (g.milnor >= 1).then_some(AdeType::A(g.milnor)),
        3 if !g.cone_repeated => (g.milnor == 4).then_some(AdeType::D(4)),
        3 if g.cone_triple => match g.milnor {
            6 => Some(AdeType::E6),
            7 => Some(AdeType::E7),
            8 => Some(AdeType::E8),
            _ => None,
        },
        3 => (g.milnor >= 5).then_some(AdeType::D(g.milnor)),
        _ => None,
    }
}

/// Milnor number of a union of `k` germs without common components:
/// `Σ μ_i + 2 Σ_{i<j} I_ij - (k - 1)`.
pub fn union_milnor(milnors: &[u32], intersections: &[Vec<u32>]) -> u32 {
    let k = milnors.len() as i64;
    let mut mu: i64 = milnors.iter().map(|&m| m as i64).sum();
    for i in 0..milnors.len() {
        for j in i + 1..milnors.len() {
            mu += 2 * intersections[i][j] as i64;
        }
    }
    (mu - (k - 1)) as u32
}

/// Weighted degree `d_g` of a union of branches `g` inside a quasi-homogeneous
/// germ of weighted degree `d`: it solves `d_g (d - d_g) = w_x w_y I(g, rest)`
/// and `(d_g - w_x)(d_g - w_y) = μ(g) w_x w_y`.
pub fn weighted_degree(qh: QuasiHomogeneous, milnor: u32, with_rest: u32) -> Option<u32> {
    let (a, b, d) = (qh.wx as i64, qh.wy as i64, qh.degree as i64);
    let disc = d * d - 4 * a * b * with_rest as i64;
    if disc < 0 {
        return None;
    }
    let r = (disc as f64).sqrt().round() as i64;
    if r * r != disc || (d + r) % 2 != 0 {
        return None;
    }
    let mut found: Vec<i64> = [(d + r) / 2, (d - r) / 2]
        .into_iter()
        .filter(|&dg| dg > 0 && (dg - a) * (dg - b) == milnor as i64 * a * b)
        .collect();
    found.dedup();
    match found.as_slice() {
        [dg] => Some(*dg as u32),
        _ => None,
    }
}

/// Weighted degrees of the branches of the normal form, under the coprime
/// weights of [`AdeType::weights`].
pub fn normal_form_branch_degrees(t: AdeType) -> Vec<u32> {
    let g = match t.weights() {
        Some(w) => t.unreduced_degree() / w.degree,
        None => 1,
    };
    let raw = match t {
        AdeType::Smooth => vec![],
        AdeType::A(n) if n % 2 == 0 => vec![2 * n + 2],
        AdeType::A(n) => vec![n + 1, n + 1],
        AdeType::D(n) if n % 2 == 0 => vec![2, n - 2, n - 2],
        AdeType::D(n) => vec![2, 2 * n - 4],
        AdeType::E6 => vec![12],
        AdeType::E7 => vec![3, 6],
        AdeType::E8 => vec![15],
    };
    raw.into_iter().map(|d| d / g).collect()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Local type of a curve at a point, with the data the η tables need.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityType {
    /// `None` for a germ outside the simple list.
    pub tag: Option<AdeType>,
    pub milnor: u32,
    /// Equal to the Milnor number for the quasi-homogeneous simple germs.
    pub tjurina: u32,
    pub weights: Option<QuasiHomogeneous>,
    /// Weighted degrees of the local branches.
    pub branches: Vec<u32>,
}

impl SingularityType {
    pub fn simple(t: AdeType) -> Self {
        SingularityType {
            tag: Some(t),
            milnor: t.milnor(),
            tjurina: t.milnor(),
            weights: t.weights(),
            branches: normal_form_branch_degrees(t),
        }
    }

    pub fn unsupported(milnor: u32) -> Self {
        SingularityType { tag: None, milnor, tjurina: milnor, weights: None, branches: Vec::new() }
    }

    pub fn is_supported(&self) -> bool {
        self.tag.is_some()
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            Some(t) => write!(f, "{t}"),
            None => write!(f, "unsupported (μ = {})", self.milnor),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["A1", "A7", "D4", "D10", "E6", "E7", "E8"] {
            assert_eq!(s.parse::<AdeType>().unwrap().to_string(), s);
        }
        assert!("D3".parse::<AdeType>().is_err());
        assert!("Q1".parse::<AdeType>().is_err());
    }

    #[test]
    fn table_rows_from_weights() {
        // η for a single component is (d : w_x + w_y)
        let check = |t: AdeType, eta: (u32, u32)| {
            let w = t.weights().unwrap();
            let g = gcd(w.degree, w.wx + w.wy);
            assert_eq!((w.degree / g, (w.wx + w.wy) / g), eta, "{t}");
        };
        check(AdeType::A(1), (1, 1));
        check(AdeType::A(2), (6, 5));
        check(AdeType::E6, (12, 7));
        check(AdeType::E7, (9, 5));
        check(AdeType::E8, (15, 8));
        // D5 is y(x² - y³): 2 : 6 : 5
        let w = AdeType::D(5).weights().unwrap();
        assert_eq!(normal_form_branch_degrees(AdeType::D(5)), vec![2, 6]);
        assert_eq!(w.wx + w.wy, 5);
    }

    #[test]
    fn branch_degrees_sum_to_degree() {
        let mut all = vec![AdeType::E6, AdeType::E7, AdeType::E8];
        all.extend((1..=9).map(AdeType::A));
        all.extend((4..=10).map(AdeType::D));
        for t in all {
            let w = t.weights().unwrap();
            assert_eq!(normal_form_branch_degrees(t).iter().sum::<u32>(), w.degree, "{t}");
            assert_eq!(gcd(w.wx, w.wy), 1);
        }
        let a3 = SingularityType::simple(AdeType::A(3));
        assert_eq!(a3.branches, vec![2, 2]);
        assert_eq!((a3.weights.unwrap().wx, a3.weights.unwrap().wy), (2, 1));
        let d4 = SingularityType::simple(AdeType::D(4));
        assert_eq!(d4.branches, vec![1, 1, 1]);
    }

    #[test]
    fn branch_degrees_from_intersections() {
        // A3 = two smooth branches with contact 2
        let w = AdeType::A(3).weights().unwrap();
        assert_eq!(weighted_degree(w, 0, 2), Some(2));
        // D10: a transverse line, and a line with contact 4 to a smooth branch
        let w = AdeType::D(10).weights().unwrap();
        assert_eq!(weighted_degree(w, 0, 2), Some(1));
        assert_eq!(weighted_degree(w, 0, 5), Some(4));
        // D5 at a cusp crossed by a line: the cusp and the line
        let w = AdeType::D(5).weights().unwrap();
        assert_eq!(weighted_degree(w, 2, 2), Some(6));
        assert_eq!(weighted_degree(w, 0, 2), Some(2));
        assert_eq!(union_milnor(&[2, 0], &[vec![0, 2], vec![2, 0]]), 5);
    }

    #[test]
    fn classification() {
        let g = |m, mu, rep, tri| GermInvariants { multiplicity: m, milnor: mu, cone_repeated: rep, cone_triple: tri };
        assert_eq!(classify(&g(2, 3, false, false)), Some(AdeType::A(3)));
        assert_eq!(classify(&g(3, 4, false, false)), Some(AdeType::D(4)));
        assert_eq!(classify(&g(3, 7, true, false)), Some(AdeType::D(7)));
        assert_eq!(classify(&g(3, 8, true, true)), Some(AdeType::E8));
        assert_eq!(classify(&g(3, 9, true, true)), None);
        assert_eq!(classify(&g(4, 9, false, false)), None);
    }
}
