//! Irreducible characters of the dihedral group D_q (q odd), induced
//! characters from its three distinguished subgroups, exact decomposition
//! over the character table, and the zeta-factorization identity at the
//! character level.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cyclotomic::CycInt;
use crate::linalg::{big, BigRat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharacterError {
    #[error("q must be odd and >= 3, got {0}")]
    BadQ(u64),
    #[error("class functions belong to different groups ({0} vs {1})")]
    GroupMismatch(u64, u64),
    #[error("subgroup class function does not match subgroup {0:?}")]
    SubgroupMismatch(SubgroupLabel),
    #[error("inner product is not a rational number")]
    NotRational,
    #[error("not a virtual character: non-integer multiplicity on irreducible #{0}")]
    NotVirtual(usize),
}

/// The dihedral group D_q for odd q >= 3, generated by a rotation of order q
/// and a reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralGroup {
    q: u64,
}

impl DihedralGroup {
    pub fn new(q: u64) -> Result<Self, CharacterError> {
        if q < 3 || q.is_multiple_of(2) {
            return Err(CharacterError::BadQ(q));
        }
        Ok(DihedralGroup { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// r = (q - 1) / 2, the number of degree-2 irreducibles.
    pub fn r(&self) -> u64 {
        (self.q - 1) / 2
    }

    pub fn order(&self) -> u64 {
        2 * self.q
    }

    /// Conjugacy class labels in canonical order: "1", "rot:a" for
    /// 1 <= a <= r, then "ref".
    pub fn class_labels(&self) -> Vec<String> {
        let mut labels = vec!["1".to_string()];
        for a in 1..=self.r() {
            labels.push(format!("rot:{a}"));
        }
        labels.push("ref".to_string());
        labels
    }

    pub fn class_count(&self) -> usize {
        self.r() as usize + 2
    }

    /// Size of each conjugacy class, in canonical order.
    pub fn class_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![1];
        sizes.extend(std::iter::repeat_n(2, self.r() as usize));
        sizes.push(self.q);
        sizes
    }

    /// All 2q group elements.
    pub fn elements(&self) -> Vec<Elem> {
        let mut out = Vec::with_capacity(2 * self.q as usize);
        for b in [false, true] {
            for a in 0..self.q {
                out.push(Elem { a, b });
            }
        }
        out
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        // rho^a1 sigma^b1 rho^a2 sigma^b2 = rho^(a1 +/- a2) sigma^(b1+b2)
        let a2 = if x.b { self.q - y.a % self.q } else { y.a } % self.q;
        Elem {
            a: (x.a + a2) % self.q,
            b: x.b ^ y.b,
        }
    }

    pub fn inv(&self, x: Elem) -> Elem {
        if x.b {
            x // reflections are involutions
        } else {
            Elem {
                a: (self.q - x.a) % self.q,
                b: false,
            }
        }
    }

    /// Index of the conjugacy class of an element, in canonical order.
    pub fn class_index(&self, x: Elem) -> usize {
        if x.b {
            self.r() as usize + 1
        } else if x.a == 0 {
            0
        } else {
            let a = x.a.min(self.q - x.a);
            a as usize
        }
    }
}

/// Group element rho^a sigma^b with 0 <= a < q, b in {0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Elem {
    pub a: u64,
    pub b: bool,
}

impl Elem {
    pub const IDENTITY: Elem = Elem { a: 0, b: false };
}

/// The three subgroups relevant here: the trivial subgroup, the order-2
/// subgroup generated by the reflection, and the rotation subgroup C_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupLabel {
    Trivial,
    Reflection,
    Rotation,
}

impl SubgroupLabel {
    fn contains(&self, e: Elem) -> bool {
        match self {
            SubgroupLabel::Trivial => e == Elem::IDENTITY,
            SubgroupLabel::Reflection => e.a == 0,
            SubgroupLabel::Rotation => !e.b,
        }
    }

    pub fn order(&self, q: u64) -> u64 {
        match self {
            SubgroupLabel::Trivial => 1,
            SubgroupLabel::Reflection => 2,
            SubgroupLabel::Rotation => q,
        }
    }

    /// A fixed system of coset representatives for D_q / H.
    fn coset_representatives(&self, group: &DihedralGroup) -> Vec<Elem> {
        match self {
            SubgroupLabel::Trivial => group.elements(),
            SubgroupLabel::Reflection => (0..group.q).map(|a| Elem { a, b: false }).collect(),
            SubgroupLabel::Rotation => vec![Elem::IDENTITY, Elem { a: 0, b: true }],
        }
    }
}

/// A class function on D_q with values in Z\[zeta_q\], stored per conjugacy
/// class in canonical class order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    q: u64,
    values: Vec<CycInt>,
}

impl ClassFunction {
    pub fn new(group: &DihedralGroup, values: Vec<CycInt>) -> Self {
        assert_eq!(values.len(), group.class_count());
        ClassFunction { q: group.q, values }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn value(&self, class_index: usize) -> &CycInt {
        &self.values[class_index]
    }

    pub fn value_at(&self, group: &DihedralGroup, e: Elem) -> &CycInt {
        &self.values[group.class_index(e)]
    }

    /// Degree of a character: its value at the identity.
    pub fn degree(&self) -> Option<BigInt> {
        self.values[0].as_integer()
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction, CharacterError> {
        if self.q != other.q {
            return Err(CharacterError::GroupMismatch(self.q, other.q));
        }
        Ok(ClassFunction {
            q: self.q,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn scale(&self, n: &BigInt) -> ClassFunction {
        ClassFunction {
            q: self.q,
            values: self.values.iter().map(|v| v.scale(n)).collect(),
        }
    }
}

/// A class function on one of the three subgroups, stored on subgroup
/// elements (constant on subgroup conjugacy classes by construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupClassFunction {
    q: u64,
    subgroup: SubgroupLabel,
    /// Trivial: [v(1)]. Reflection: [v(1), v(sigma)]. Rotation: [v(rho^a)]_a.
    values: Vec<CycInt>,
}

impl SubgroupClassFunction {
    pub fn trivial_character(group: &DihedralGroup, subgroup: SubgroupLabel) -> Self {
        let len = match subgroup {
            SubgroupLabel::Trivial => 1,
            SubgroupLabel::Reflection => 2,
            SubgroupLabel::Rotation => group.q as usize,
        };
        SubgroupClassFunction {
            q: group.q,
            subgroup,
            values: vec![CycInt::one(group.q); len],
        }
    }

    pub fn subgroup(&self) -> SubgroupLabel {
        self.subgroup
    }

    fn value_at(&self, e: Elem) -> Option<&CycInt> {
        match self.subgroup {
            SubgroupLabel::Trivial => (e == Elem::IDENTITY).then(|| &self.values[0]),
            SubgroupLabel::Reflection => {
                (e.a == 0).then(|| &self.values[if e.b { 1 } else { 0 }])
            }
            SubgroupLabel::Rotation => (!e.b).then(|| &self.values[e.a as usize]),
        }
    }
}

/// The full irreducible character table of D_q.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    group: DihedralGroup,
    /// chi_0, chi_1, then the degree-2 characters chi^(h), h = 1..r.
    irreducibles: Vec<ClassFunction>,
}

impl CharacterTable {
    pub fn group(&self) -> &DihedralGroup {
        &self.group
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn chi0(&self) -> &ClassFunction {
        &self.irreducibles[0]
    }

    pub fn chi1(&self) -> &ClassFunction {
        &self.irreducibles[1]
    }

    /// chi^(h) for 1 <= h <= r.
    pub fn chi_two_dim(&self, h: u64) -> &ClassFunction {
        &self.irreducibles[1 + h as usize]
    }

    /// Name of irreducible #i, matching the table ordering.
    pub fn irreducible_name(&self, i: usize) -> String {
        match i {
            0 => "chi0".to_string(),
            1 => "chi1".to_string(),
            _ => format!("chi^({})", i - 1),
        }
    }
}

/// Builds the character table of D_q for odd q >= 3.
pub fn character_table(q: u64) -> Result<CharacterTable, CharacterError> {
    let group = DihedralGroup::new(q)?;
    let r = group.r();
    let mut irreducibles = Vec::with_capacity(r as usize + 2);

    // chi_0: identically 1
    irreducibles.push(ClassFunction::new(
        &group,
        vec![CycInt::one(q); group.class_count()],
    ));
    // chi_1: 1 on rotations, -1 on reflections
    let mut chi1 = vec![CycInt::one(q); group.class_count()];
    *chi1.last_mut().unwrap() = CycInt::one(q).neg();
    irreducibles.push(ClassFunction::new(&group, chi1));
    // chi^(h): 2 at identity, zeta^{ha} + zeta^{-ha} on rotation classes,
    // 0 on reflections
    for h in 1..=r {
        let mut vals = Vec::with_capacity(group.class_count());
        vals.push(CycInt::from_integer(q, big(2)));
        for a in 1..=r {
            let e = (h * a) as i64;
            vals.push(CycInt::root_power(q, e).add(&CycInt::root_power(q, -e)));
        }
        vals.push(CycInt::zero(q));
        irreducibles.push(ClassFunction::new(&group, vals));
    }
    Ok(CharacterTable {
        group,
        irreducibles,
    })
}

/// Induction of a subgroup class function to D_q, computed as the sum over
/// coset representatives t with t^{-1} u t in the subgroup.
pub fn induce(
    group: &DihedralGroup,
    subgroup: SubgroupLabel,
    chi: &SubgroupClassFunction,
) -> Result<ClassFunction, CharacterError> {
    if chi.q != group.q {
        return Err(CharacterError::GroupMismatch(chi.q, group.q));
    }
    if chi.subgroup != subgroup {
        return Err(CharacterError::SubgroupMismatch(subgroup));
    }
    let reps = subgroup.coset_representatives(group);
    let class_reps = class_representatives(group);
    let values = class_reps
        .into_iter()
        .map(|u| {
            let mut acc = CycInt::zero(group.q);
            for t in &reps {
                let conj = group.mul(group.mul(group.inv(*t), u), *t);
                if subgroup.contains(conj) {
                    if let Some(v) = chi.value_at(conj) {
                        acc = acc.add(v);
                    }
                }
            }
            acc
        })
        .collect();
    Ok(ClassFunction::new(group, values))
}

fn class_representatives(group: &DihedralGroup) -> Vec<Elem> {
    let mut reps = vec![Elem::IDENTITY];
    for a in 1..=group.r() {
        reps.push(Elem { a, b: false });
    }
    reps.push(Elem { a: 0, b: true });
    reps
}

/// Restriction of a class function on D_q to a subgroup. Not part of the
/// public operation surface; used by the reciprocity checks.
pub(crate) fn restrict(
    group: &DihedralGroup,
    chi: &ClassFunction,
    subgroup: SubgroupLabel,
) -> SubgroupClassFunction {
    let values = match subgroup {
        SubgroupLabel::Trivial => vec![chi.value(0).clone()],
        SubgroupLabel::Reflection => vec![
            chi.value(0).clone(),
            chi.value_at(group, Elem { a: 0, b: true }).clone(),
        ],
        SubgroupLabel::Rotation => (0..group.q)
            .map(|a| chi.value_at(group, Elem { a, b: false }).clone())
            .collect(),
    };
    SubgroupClassFunction {
        q: group.q,
        subgroup,
        values,
    }
}

/// Standard inner product of class functions,
/// (1/|G|) * sum_g a(g) * conj(b(g)), computed exactly.
pub fn inner_product(a: &ClassFunction, b: &ClassFunction) -> Result<BigRat, CharacterError> {
    if a.q != b.q {
        return Err(CharacterError::GroupMismatch(a.q, b.q));
    }
    let group = DihedralGroup::new(a.q).expect("stored q is valid");
    let sizes = group.class_sizes();
    let mut acc = CycInt::zero(a.q);
    for (i, size) in sizes.iter().enumerate() {
        let term = a.value(i).mul(&b.value(i).conj()).scale(&big(*size as i64));
        acc = acc.add(&term);
    }
    let n = acc.as_integer().ok_or(CharacterError::NotRational)?;
    Ok(BigRat::new(n, big(group.order() as i64)))
}

/// Inner product on a subgroup, used for the reciprocity checks.
pub(crate) fn subgroup_inner_product(
    a: &SubgroupClassFunction,
    b: &SubgroupClassFunction,
) -> Result<BigRat, CharacterError> {
    assert_eq!(a.q, b.q);
    assert_eq!(a.subgroup, b.subgroup);
    let mut acc = CycInt::zero(a.q);
    for (x, y) in a.values.iter().zip(&b.values) {
        acc = acc.add(&x.mul(&y.conj()));
    }
    let n = acc.as_integer().ok_or(CharacterError::NotRational)?;
    Ok(BigRat::new(n, big(a.subgroup.order(a.q) as i64)))
}

/// Exact decomposition of a virtual character over the irreducible table.
/// Returns (irreducible index, multiplicity) with nonzero multiplicities.
pub fn decompose(
    table: &CharacterTable,
    chi: &ClassFunction,
) -> Result<Vec<(usize, BigInt)>, CharacterError> {
    let mut result = Vec::new();
    let mut reconstruction: Option<ClassFunction> = None;
    for (i, irr) in table.irreducibles.iter().enumerate() {
        let m = inner_product(chi, irr)?;
        if !m.is_integer() {
            return Err(CharacterError::NotVirtual(i));
        }
        let m = m.to_integer();
        if m.is_zero() {
            continue;
        }
        let term = irr.scale(&m);
        reconstruction = Some(match reconstruction {
            None => term,
            Some(acc) => acc.add(&term)?,
        });
        result.push((i, m));
    }
    let reconstruction =
        reconstruction.unwrap_or_else(|| ClassFunction::new(&table.group, vec![
            CycInt::zero(table.group.q); table.group.class_count()
        ]));
    if &reconstruction != chi {
        return Err(CharacterError::NotVirtual(usize::MAX));
    }
    Ok(result)
}

/// The three induced trivial characters, decomposed over the table. These
/// are the identities behind the zeta factorization.
#[derive(Debug, Clone)]
pub struct InductionReport {
    pub q: u64,
    /// decompose(Ind from trivial subgroup) as (index, multiplicity)
    pub from_trivial: Vec<(usize, BigInt)>,
    pub from_reflection: Vec<(usize, BigInt)>,
    pub from_rotation: Vec<(usize, BigInt)>,
    /// the expected decompositions hold exactly
    pub identities_hold: bool,
}

/// Verifies the three induction identities:
/// Ind from trivial = chi0 + chi1 + 2 * sum_h chi^(h),
/// Ind from reflection = chi0 + sum_h chi^(h),
/// Ind from rotation = chi0 + chi1.
pub fn verify_induction_identities(q: u64) -> Result<InductionReport, CharacterError> {
    let table = character_table(q)?;
    let group = table.group;
    let r = group.r() as usize;

    let ind = |label: SubgroupLabel| -> Result<Vec<(usize, BigInt)>, CharacterError> {
        let chi = SubgroupClassFunction::trivial_character(&group, label);
        decompose(&table, &induce(&group, label, &chi)?)
    };
    let from_trivial = ind(SubgroupLabel::Trivial)?;
    let from_reflection = ind(SubgroupLabel::Reflection)?;
    let from_rotation = ind(SubgroupLabel::Rotation)?;

    let mut expected_trivial = vec![(0usize, big(1)), (1, big(1))];
    expected_trivial.extend((0..r).map(|h| (2 + h, big(2))));
    let mut expected_reflection = vec![(0usize, big(1))];
    expected_reflection.extend((0..r).map(|h| (2 + h, big(1))));
    let expected_rotation = vec![(0usize, big(1)), (1, big(1))];

    let identities_hold = from_trivial == expected_trivial
        && from_reflection == expected_reflection
        && from_rotation == expected_rotation;

    Ok(InductionReport {
        q,
        from_trivial,
        from_reflection,
        from_rotation,
        identities_hold,
    })
}

/// Verifies the zeta-factorization identity at the character level:
/// Ind_triv(1) + 2*chi0 = Ind_rot(1) + 2*Ind_refl(1) as class functions.
pub fn verify_zeta_identity(q: u64) -> Result<bool, CharacterError> {
    let table = character_table(q)?;
    let group = table.group;
    let two = big(2);

    let ind = |label: SubgroupLabel| -> Result<ClassFunction, CharacterError> {
        let chi = SubgroupClassFunction::trivial_character(&group, label);
        induce(&group, label, &chi)
    };
    let lhs = ind(SubgroupLabel::Trivial)?.add(&table.chi0().scale(&two))?;
    let rhs = ind(SubgroupLabel::Rotation)?.add(&ind(SubgroupLabel::Reflection)?.scale(&two))?;
    Ok(lhs == rhs)
}

/// Frobenius reciprocity spot-check over all irreducibles and the three
/// subgroups: <Ind 1_H, psi> = <1_H, Res psi>_H.
pub fn verify_frobenius_reciprocity(q: u64) -> Result<bool, CharacterError> {
    let table = character_table(q)?;
    let group = table.group;
    for label in [
        SubgroupLabel::Trivial,
        SubgroupLabel::Reflection,
        SubgroupLabel::Rotation,
    ] {
        let triv = SubgroupClassFunction::trivial_character(&group, label);
        let induced = induce(&group, label, &triv)?;
        for psi in table.irreducibles() {
            let lhs = inner_product(&induced, psi)?;
            let rhs = subgroup_inner_product(&triv, &restrict(&group, psi, label))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Orthonormality of the table under the inner product.
pub fn verify_orthonormality(table: &CharacterTable) -> Result<bool, CharacterError> {
    let irr = table.irreducibles();
    for (i, a) in irr.iter().enumerate() {
        for (j, b) in irr.iter().enumerate() {
            let p = inner_product(a, b)?;
            let expected = if i == j { BigRat::one() } else { BigRat::zero() };
            if p != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn rejects_bad_q() {
        assert!(matches!(character_table(4), Err(CharacterError::BadQ(4))));
        assert!(matches!(character_table(1), Err(CharacterError::BadQ(1))));
        assert!(matches!(character_table(0), Err(CharacterError::BadQ(0))));
    }

    #[test]
    fn q3_table_values() {
        let table = character_table(3).unwrap();
        assert_eq!(table.irreducibles().len(), 3);
        // chi0 identically 1
        for i in 0..3 {
            assert_eq!(table.chi0().value(i).as_integer(), Some(big(1)));
        }
        // chi^(1)(rho) = zeta_3 + zeta_3^2 = -1, chi^(1) on reflections = 0
        let chi = table.chi_two_dim(1);
        assert_eq!(chi.value(0).as_integer(), Some(big(2)));
        assert_eq!(chi.value(1).as_integer(), Some(big(-1)));
        assert!(chi.value(2).is_zero());
    }

    #[test]
    fn degree_square_sum_is_group_order() {
        for q in (3..=31).step_by(2) {
            let table = character_table(q).unwrap();
            let sum: i64 = table
                .irreducibles()
                .iter()
                .map(|c| {
                    let d = c.degree().unwrap().to_i64().unwrap();
                    d * d
                })
                .sum();
            assert_eq!(sum, 2 * q as i64, "q = {q}");
        }
    }

    #[test]
    fn induced_regular_character() {
        // Ind from trivial of the trivial character = regular character:
        // 2q at the identity, 0 elsewhere
        for q in [3u64, 5, 9] {
            let group = DihedralGroup::new(q).unwrap();
            let chi = SubgroupClassFunction::trivial_character(&group, SubgroupLabel::Trivial);
            let ind = induce(&group, SubgroupLabel::Trivial, &chi).unwrap();
            assert_eq!(ind.value(0).as_integer(), Some(big(2 * q as i64)));
            for i in 1..group.class_count() {
                assert!(ind.value(i).is_zero());
            }
        }
    }

    #[test]
    fn induced_from_reflection_vanishes_on_rotations() {
        for q in [3u64, 5, 7] {
            let group = DihedralGroup::new(q).unwrap();
            let chi = SubgroupClassFunction::trivial_character(&group, SubgroupLabel::Reflection);
            let ind = induce(&group, SubgroupLabel::Reflection, &chi).unwrap();
            assert_eq!(ind.value(0).as_integer(), Some(big(q as i64)));
            for a in 1..=group.r() {
                assert!(ind.value(a as usize).is_zero(), "q={q} a={a}");
            }
            // value 1 on the reflection class
            assert_eq!(
                ind.value(group.class_count() - 1).as_integer(),
                Some(big(1))
            );
        }
    }

    #[test]
    fn induced_from_rotation_is_chi0_plus_chi1() {
        for q in [3u64, 5, 9, 15] {
            let table = character_table(q).unwrap();
            let group = *table.group();
            let chi = SubgroupClassFunction::trivial_character(&group, SubgroupLabel::Rotation);
            let ind = induce(&group, SubgroupLabel::Rotation, &chi).unwrap();
            let expected = table.chi0().add(table.chi1()).unwrap();
            assert_eq!(ind, expected);
        }
    }

    #[test]
    fn inner_product_values() {
        let table = character_table(5).unwrap();
        assert_eq!(
            inner_product(table.chi0(), table.chi0()).unwrap(),
            BigRat::one()
        );
        assert_eq!(
            inner_product(table.chi0(), table.chi1()).unwrap(),
            BigRat::zero()
        );
        // coefficient 2 of every chi^(h) inside Ind from the trivial subgroup
        let group = *table.group();
        let chi = SubgroupClassFunction::trivial_character(&group, SubgroupLabel::Trivial);
        let ind = induce(&group, SubgroupLabel::Trivial, &chi).unwrap();
        for h in 1..=group.r() {
            assert_eq!(
                inner_product(&ind, table.chi_two_dim(h)).unwrap(),
                BigRat::from_integer(big(2))
            );
        }
    }

    #[test]
    fn decompose_examples() {
        // regular character of D_3 = chi0 + chi1 + 2 chi^(1)
        let table = character_table(3).unwrap();
        let group = *table.group();
        let chi = SubgroupClassFunction::trivial_character(&group, SubgroupLabel::Trivial);
        let reg = induce(&group, SubgroupLabel::Trivial, &chi).unwrap();
        assert_eq!(
            decompose(&table, &reg).unwrap(),
            vec![(0, big(1)), (1, big(1)), (2, big(2))]
        );
        // chi1 decomposes as itself
        assert_eq!(decompose(&table, table.chi1()).unwrap(), vec![(1, big(1))]);
        // q = 5: Ind from reflection = chi0 + chi^(1) + chi^(2)
        let table5 = character_table(5).unwrap();
        let group5 = *table5.group();
        let chi5 = SubgroupClassFunction::trivial_character(&group5, SubgroupLabel::Reflection);
        let ind5 = induce(&group5, SubgroupLabel::Reflection, &chi5).unwrap();
        assert_eq!(
            decompose(&table5, &ind5).unwrap(),
            vec![(0, big(1)), (2, big(1)), (3, big(1))]
        );
    }

    #[test]
    fn decompose_rejects_non_virtual() {
        let table = character_table(3).unwrap();
        let group = *table.group();
        // chi0 with the identity value bumped to 2 is not a virtual character
        let mut vals: Vec<CycInt> = (0..group.class_count())
            .map(|i| table.chi0().value(i).clone())
            .collect();
        vals[0] = CycInt::from_integer(3, big(2));
        let bad = ClassFunction::new(&group, vals);
        assert!(matches!(
            decompose(&table, &bad),
            Err(CharacterError::NotVirtual(_))
        ));
    }

    #[test]
    fn zeta_identity_small_q() {
        for q in [3u64, 5, 31] {
            assert!(verify_zeta_identity(q).unwrap(), "q = {q}");
        }
    }

    #[test]
    fn induction_identities_across_range() {
        for q in (3..=31).step_by(2) {
            let report = verify_induction_identities(q).unwrap();
            assert!(report.identities_hold, "q = {q}");
        }
    }

    #[test]
    fn orthonormality_and_reflection_row() {
        for q in (3..=31).step_by(2) {
            let table = character_table(q).unwrap();
            assert!(verify_orthonormality(&table).unwrap(), "q = {q}");
            // degree-2 characters vanish on the reflection class
            for h in 1..=table.group().r() {
                assert!(table.chi_two_dim(h).value(table.group().class_count() - 1).is_zero());
            }
        }
    }

    #[test]
    fn frobenius_reciprocity_spot_check() {
        for q in [3u64, 5, 9, 13] {
            assert!(verify_frobenius_reciprocity(q).unwrap(), "q = {q}");
        }
    }

    #[test]
    fn group_mismatch_is_an_error() {
        let t3 = character_table(3).unwrap();
        let t5 = character_table(5).unwrap();
        assert!(matches!(
            inner_product(t3.chi0(), t5.chi0()),
            Err(CharacterError::GroupMismatch(3, 5))
        ));
    }
}
