//! Single applications of the M-, Y- and Z-closure rules.
//!
//! Every rule picks one part `A_i` of each participating split; the other
//! part is written `Ã_i` below. An [`Orientation`] records that choice
//! (and, for the three-split Y-rule, which participant plays which role).

use std::fmt;

use crate::error::{Error, Result};
use crate::split::{PartialSplit, SplitSystem};
use crate::taxa::TaxonSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    M,
    Y,
    Z,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::M => "M",
            Rule::Y => "Y",
            Rule::Z => "Z",
        })
    }
}

/// Which participant plays each role and which of its stored sides is `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation {
    arity: u8,
    roles: [u8; 3],
    flips: u8,
}

impl Orientation {
    /// Two-split orientation: participant `i` takes its second stored side
    /// as `A_i` when `flip_i` is set.
    pub fn pair(flip1: bool, flip2: bool) -> Self {
        Orientation {
            arity: 2,
            roles: [0, 1, 2],
            flips: flip1 as u8 | (flip2 as u8) << 1,
        }
    }

    /// Three-split orientation: `roles[r]` is the participant playing role
    /// `r + 1`, and bit `r` of `flips` selects that participant's `A` part.
    pub fn triple(roles: [usize; 3], flips: [bool; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &r in &roles {
            if r > 2 || seen[r] {
                return Err(Error::InvalidOrientation { rule: Rule::Y });
            }
            seen[r] = true;
        }
        Ok(Orientation {
            arity: 3,
            roles: [roles[0] as u8, roles[1] as u8, roles[2] as u8],
            flips: flips[0] as u8 | (flips[1] as u8) << 1 | (flips[2] as u8) << 2,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    /// Participant index playing role `r` (0-based).
    pub fn role(&self, r: usize) -> usize {
        self.roles[r] as usize
    }

    /// Whether role `r` takes the second stored side as its `A` part.
    pub fn flip(&self, r: usize) -> bool {
        self.flips >> r & 1 == 1
    }

    /// `(A, Ã)` for role `r`, given the participants.
    fn parts(&self, participants: &[PartialSplit], r: usize) -> (TaxonSet, TaxonSet) {
        participants[self.role(r)].oriented(self.flip(r))
    }
}

impl fmt::Display for Orientation {
    /// `01` for pairs (one flip bit per split); `010/201` for triples
    /// (flip bits per role, then the participant in each role).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.arity() {
            write!(f, "{}", self.flip(r) as u8)?;
        }
        if self.arity == 3 {
            write!(f, "/{}{}{}", self.roles[0], self.roles[1], self.roles[2])?;
        }
        Ok(())
    }
}

const PAIR_FLIPS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

fn m_condition((a1, c1): (TaxonSet, TaxonSet), (a2, c2): (TaxonSet, TaxonSet)) -> bool {
    a1.intersects(a2) && c1.intersects(c2)
}

fn z_condition((a1, c1): (TaxonSet, TaxonSet), (a2, c2): (TaxonSet, TaxonSet)) -> bool {
    a1.intersects(a2) && a2.intersects(c1) && c1.intersects(c2) && a1.is_disjoint(c2)
}

fn y_condition(
    (a1, c1): (TaxonSet, TaxonSet),
    (a2, c2): (TaxonSet, TaxonSet),
    (a3, c3): (TaxonSet, TaxonSet),
) -> bool {
    !(a1 & a2 & a3).is_empty()
        && !(c1 & c2 & a3).is_empty()
        && !(c1 & a2 & c3).is_empty()
        && (a1 & c2 & c3).is_empty()
}

/// Orientations under which the M-rule applies to `s1, s2`.
///
/// Flipping both sides swaps the two generated splits without changing the
/// output set, so only the class representative with `s1` unflipped is
/// returned: at most two orientations.
pub fn m_orientations(s1: &PartialSplit, s2: &PartialSplit) -> Vec<Orientation> {
    if s1 == s2 {
        return Vec::new();
    }
    PAIR_FLIPS
        .iter()
        .filter(|(f1, _)| !f1)
        .filter(|(f1, f2)| m_condition(s1.oriented(*f1), s2.oriented(*f2)))
        .map(|&(f1, f2)| Orientation::pair(f1, f2))
        .collect()
}

/// `θ_M`: the two inputs plus `(A1∩A2)|(Ã1∪Ã2)` and `(Ã1∩Ã2)|(A1∪A2)`.
pub fn apply_m(s1: &PartialSplit, s2: &PartialSplit, o: Orientation) -> Result<Vec<PartialSplit>> {
    if s1 == s2 {
        return Err(Error::NotDistinct { rule: Rule::M });
    }
    let ps = [*s1, *s2];
    if o.arity() != 2 {
        return Err(Error::InvalidOrientation { rule: Rule::M });
    }
    let ((a1, c1), (a2, c2)) = (o.parts(&ps, 0), o.parts(&ps, 1));
    if !m_condition((a1, c1), (a2, c2)) {
        return Err(Error::InvalidOrientation { rule: Rule::M });
    }
    Ok(collect_outputs([
        *s1,
        *s2,
        PartialSplit::from_sides(a1 & a2, c1 | c2),
        PartialSplit::from_sides(c1 & c2, a1 | a2),
    ]))
}

/// Orientations under which the Y-rule applies to three splits.
///
/// Roles 2 and 3 enter the condition and the outputs symmetrically, so only
/// assignments with `role(1) < role(2)` are returned: at most 24.
pub fn y_orientations(s1: &PartialSplit, s2: &PartialSplit, s3: &PartialSplit) -> Vec<Orientation> {
    if s1 == s2 || s1 == s3 || s2 == s3 {
        return Vec::new();
    }
    let ps = [*s1, *s2, *s3];
    let mut out = Vec::new();
    for first in 0..3 {
        let (second, third) = match first {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let roles = [first, second, third];
        for flips in 0..8u8 {
            let o = Orientation {
                arity: 3,
                roles: [roles[0] as u8, roles[1] as u8, roles[2] as u8],
                flips,
            };
            if y_condition(o.parts(&ps, 0), o.parts(&ps, 1), o.parts(&ps, 2)) {
                out.push(o);
            }
        }
    }
    out
}

/// `θ_Y`: `Ã1∪(Ã2∩Ã3)|A1`, `A2∪(A1∩Ã3)|Ã2` and `A3∪(A1∩Ã2)|Ã3`.
///
/// Each output extends the input playing the same role.
pub fn apply_y(
    s1: &PartialSplit,
    s2: &PartialSplit,
    s3: &PartialSplit,
    o: Orientation,
) -> Result<Vec<PartialSplit>> {
    if s1 == s2 || s1 == s3 || s2 == s3 {
        return Err(Error::NotDistinct { rule: Rule::Y });
    }
    if o.arity() != 3 {
        return Err(Error::InvalidOrientation { rule: Rule::Y });
    }
    let ps = [*s1, *s2, *s3];
    let ((a1, c1), (a2, c2), (a3, c3)) = (o.parts(&ps, 0), o.parts(&ps, 1), o.parts(&ps, 2));
    if !y_condition((a1, c1), (a2, c2), (a3, c3)) {
        return Err(Error::InvalidOrientation { rule: Rule::Y });
    }
    Ok(collect_outputs([
        PartialSplit::from_sides(c1 | (c2 & c3), a1),
        PartialSplit::from_sides(a2 | (a1 & c3), c2),
        PartialSplit::from_sides(a3 | (a1 & c2), c3),
    ]))
}

/// Orientations under which the Z-rule applies to the ordered pair `s1, s2`.
pub fn z_orientations(s1: &PartialSplit, s2: &PartialSplit) -> Vec<Orientation> {
    if s1 == s2 {
        return Vec::new();
    }
    PAIR_FLIPS
        .iter()
        .filter(|(f1, f2)| z_condition(s1.oriented(*f1), s2.oriented(*f2)))
        .map(|&(f1, f2)| Orientation::pair(f1, f2))
        .collect()
}

/// `θ_Z`: `(Ã1∪Ã2)|A1` and `Ã2|(A1∪A2)`.
pub fn apply_z(s1: &PartialSplit, s2: &PartialSplit, o: Orientation) -> Result<Vec<PartialSplit>> {
    if s1 == s2 {
        return Err(Error::NotDistinct { rule: Rule::Z });
    }
    if o.arity() != 2 {
        return Err(Error::InvalidOrientation { rule: Rule::Z });
    }
    let ps = [*s1, *s2];
    let ((a1, c1), (a2, c2)) = (o.parts(&ps, 0), o.parts(&ps, 1));
    if !z_condition((a1, c1), (a2, c2)) {
        return Err(Error::InvalidOrientation { rule: Rule::Z });
    }
    Ok(collect_outputs([
        PartialSplit::from_sides(c1 | c2, a1),
        PartialSplit::from_sides(c2, a1 | a2),
    ]))
}

fn collect_outputs<const N: usize>(splits: [PartialSplit; N]) -> Vec<PartialSplit> {
    let mut v = splits.to_vec();
    v.sort();
    v.dedup();
    v
}

/// One rule application: the participants, the orientation used, and the
/// generated set `θ(𝒜)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleApplication {
    pub rule: Rule,
    pub inputs: Vec<PartialSplit>,
    pub orientation: Orientation,
    pub outputs: Vec<PartialSplit>,
}

impl RuleApplication {
    pub fn m(s1: PartialSplit, s2: PartialSplit, o: Orientation) -> Result<Self> {
        Ok(RuleApplication {
            rule: Rule::M,
            outputs: apply_m(&s1, &s2, o)?,
            inputs: vec![s1, s2],
            orientation: o,
        })
    }

    pub fn y(s1: PartialSplit, s2: PartialSplit, s3: PartialSplit, o: Orientation) -> Result<Self> {
        Ok(RuleApplication {
            rule: Rule::Y,
            outputs: apply_y(&s1, &s2, &s3, o)?,
            inputs: vec![s1, s2, s3],
            orientation: o,
        })
    }

    pub fn z(s1: PartialSplit, s2: PartialSplit, o: Orientation) -> Result<Self> {
        Ok(RuleApplication {
            rule: Rule::Z,
            outputs: apply_z(&s1, &s2, o)?,
            inputs: vec![s1, s2],
            orientation: o,
        })
    }

    /// All applications of `rule` to the given participants (in the order
    /// given; Z is sensitive to it).
    pub fn all(rule: Rule, inputs: &[PartialSplit]) -> Vec<RuleApplication> {
        match (rule, inputs) {
            (Rule::M, [a, b]) => m_orientations(a, b)
                .into_iter()
                .filter_map(|o| Self::m(*a, *b, o).ok())
                .collect(),
            (Rule::Z, [a, b]) => z_orientations(a, b)
                .into_iter()
                .filter_map(|o| Self::z(*a, *b, o).ok())
                .collect(),
            (Rule::Y, [a, b, c]) => y_orientations(a, b, c)
                .into_iter()
                .filter_map(|o| Self::y(*a, *b, *c, o).ok())
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// Whether applying `app` to irreducible `sigma` leaves it unchanged, i.e.
/// `(Σ ∪ θ(𝒜))⁻ = Σ`. For irreducible `Σ` this holds exactly when every
/// output is extended by some member of `Σ`.
pub fn is_trivial_application(sigma: &SplitSystem, app: &RuleApplication) -> bool {
    app.outputs.iter().all(|o| sigma.covers(o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::split::parse_split;
    use crate::taxa::TaxonUniverse;
    use std::sync::Arc;

    fn sp(u: &TaxonUniverse, t: &str) -> PartialSplit {
        parse_split(u, t).unwrap()
    }

    fn set(u: &TaxonUniverse, t: &str) -> TaxonSet {
        u.parse_side(t).unwrap()
    }

    /// `A` part of role `r` under `o`.
    fn a_part(ps: &[PartialSplit], o: &Orientation, r: usize) -> TaxonSet {
        o.parts(ps, r).0
    }

    #[test]
    fn m_orientation_counts() {
        let u = TaxonUniverse::numbered(8).unwrap();
        let os = m_orientations(&sp(&u, "12|34"), &sp(&u, "123|45"));
        assert_eq!(os.len(), 1);
        let ps = [sp(&u, "12|34"), sp(&u, "123|45")];
        assert_eq!(a_part(&ps, &os[0], 0), set(&u, "12"));
        assert_eq!(a_part(&ps, &os[0], 1), set(&u, "123"));

        assert_eq!(m_orientations(&sp(&u, "12|34"), &sp(&u, "13|24")).len(), 2);
        assert!(m_orientations(&sp(&u, "12|34"), &sp(&u, "56|78")).is_empty());
        assert!(m_orientations(&sp(&u, "12|34"), &sp(&u, "12|34")).is_empty());
    }

    #[test]
    fn apply_m_examples() {
        let u = TaxonUniverse::numbered(6).unwrap();
        let (s1, s2) = (sp(&u, "12|34"), sp(&u, "123|45"));
        let o = m_orientations(&s1, &s2)[0];
        let mut want = vec![s1, s2, sp(&u, "12|345"), sp(&u, "4|123")];
        want.sort();
        assert_eq!(apply_m(&s1, &s2, o).unwrap(), want);

        let (s1, s2) = (sp(&u, "15|234"), sp(&u, "45|123"));
        // A2 = {4,5} is the second stored side of 45|123.
        let o = Orientation::pair(false, true);
        let out = apply_m(&s1, &s2, o).unwrap();
        assert!(out.contains(&sp(&u, "5|1234")));
        assert!(out.contains(&sp(&u, "23|145")));
        assert_eq!(out.len(), 4);

        // Nested parts: the application is trivial.
        let (s1, s2) = (sp(&u, "123|45"), sp(&u, "12|456"));
        let o = Orientation::pair(false, false);
        let sigma = SplitSystem::from_splits(Arc::new(u.clone()), [s1, s2]).unwrap();
        let app = RuleApplication::m(s1, s2, o).unwrap();
        assert!(is_trivial_application(&sigma, &app));

        assert_eq!(
            apply_m(
                &sp(&u, "12|34"),
                &sp(&u, "56|13"),
                Orientation::pair(false, false)
            ),
            Err(Error::InvalidOrientation { rule: Rule::M })
        );
    }

    #[test]
    fn y_rule_worked_example_both_orientations() {
        let u = TaxonUniverse::numbered(7).unwrap();
        let s = [sp(&u, "145|2367"), sp(&u, "1357|246"), sp(&u, "127|356")];
        let os = y_orientations(&s[0], &s[1], &s[2]);

        let pick = |a3: &str| {
            *os.iter()
                .find(|o| {
                    o.role(0) == 0
                        && a_part(&s, o, 0) == set(&u, "145")
                        && a_part(&s, o, 1) == set(&u, "1357")
                        && a_part(&s, o, 2) == set(&u, a3)
                })
                .expect("orientation present")
        };
        let mut want = vec![s[0], s[1], sp(&u, "1247|356")];
        want.sort();
        assert_eq!(apply_y(&s[0], &s[1], &s[2], pick("127")).unwrap(), want);

        let mut want = vec![s[0], s[1], sp(&u, "127|3456")];
        want.sort();
        assert_eq!(apply_y(&s[0], &s[1], &s[2], pick("356")).unwrap(), want);

        for o in &os {
            assert!(o.role(1) < o.role(2));
        }
        assert!(os.len() <= 24);
    }

    #[test]
    fn y_rule_first_step_of_closure_example() {
        let u = TaxonUniverse::numbered(5).unwrap();
        let s = [sp(&u, "12|34"), sp(&u, "23|14"), sp(&u, "15|24")];
        let os = y_orientations(&s[0], &s[1], &s[2]);
        let o = *os
            .iter()
            .find(|o| {
                o.role(0) == 2
                    && a_part(&s, o, 0) == set(&u, "15")
                    && a_part(&s, o, 1) == set(&u, "12")
                    && a_part(&s, o, 2) == set(&u, "14")
            })
            .expect("orientation present");
        let mut want = vec![sp(&u, "234|15"), sp(&u, "12|34"), sp(&u, "14|23")];
        want.sort();
        assert_eq!(apply_y(&s[0], &s[1], &s[2], o).unwrap(), want);

        let sigma =
            SplitSystem::parse(Arc::new(u.clone()), ["12|34", "23|14", "15|24", "45|13"]).unwrap();
        let app = RuleApplication::y(s[0], s[1], s[2], o).unwrap();
        assert!(!is_trivial_application(&sigma, &app));
    }

    #[test]
    fn z_rule_examples() {
        let u = TaxonUniverse::numbered(6).unwrap();
        let (s1, s2) = (sp(&u, "13|45"), sp(&u, "34|25"));
        let os = z_orientations(&s1, &s2);
        let ps = [s1, s2];
        let o = *os
            .iter()
            .find(|o| a_part(&ps, o, 0) == set(&u, "13") && a_part(&ps, o, 1) == set(&u, "34"))
            .unwrap();
        let mut want = vec![sp(&u, "245|13"), sp(&u, "25|134")];
        want.sort();
        assert_eq!(apply_z(&s1, &s2, o).unwrap(), want);

        let (s1, s2) = (sp(&u, "12|345"), sp(&u, "45|123"));
        let ps = [s1, s2];
        let os = z_orientations(&s1, &s2);
        let o = *os
            .iter()
            .find(|o| a_part(&ps, o, 0) == set(&u, "12") && a_part(&ps, o, 1) == set(&u, "123"))
            .unwrap();
        let mut want = vec![s1, s2];
        want.sort();
        assert_eq!(apply_z(&s1, &s2, o).unwrap(), want);

        // Compatible, but no orientation meets the Z condition.
        assert!(z_orientations(&sp(&u, "12|34"), &sp(&u, "34|56")).is_empty());
        assert!(sp(&u, "12|34").compatible(&sp(&u, "34|56")));

        for flips in PAIR_FLIPS {
            assert_eq!(
                apply_z(
                    &sp(&u, "12|34"),
                    &sp(&u, "34|56"),
                    Orientation::pair(flips.0, flips.1)
                ),
                Err(Error::InvalidOrientation { rule: Rule::Z })
            );
        }
    }

    #[test]
    fn application_equal_to_inputs_is_trivial() {
        let u = Arc::new(TaxonUniverse::numbered(5).unwrap());
        let sigma = SplitSystem::parse(u.clone(), ["12|345", "45|123"]).unwrap();
        let s = sigma.to_vec();
        for app in RuleApplication::all(Rule::Z, &[s[0], s[1]]) {
            if app.outputs.iter().all(|o| s.contains(o)) {
                assert!(is_trivial_application(&sigma, &app));
            }
        }
    }

    #[test]
    fn orientation_display() {
        assert_eq!(Orientation::pair(false, true).to_string(), "01");
        let o = Orientation::triple([2, 0, 1], [false, true, false]).unwrap();
        assert_eq!(o.to_string(), "010/201");
        assert!(Orientation::triple([0, 0, 1], [false; 3]).is_err());
    }

    #[test]
    fn distinctness_required() {
        let u = TaxonUniverse::numbered(4).unwrap();
        let s = sp(&u, "12|34");
        assert_eq!(
            apply_m(&s, &s, Orientation::pair(false, false)),
            Err(Error::NotDistinct { rule: Rule::M })
        );
        assert!(y_orientations(&s, &s, &sp(&u, "13|24")).is_empty());
    }
}
