//! The sixteen binary tensor operators on families, three-valued
//! characteristic functions and the closed-form action on intervals.

use crate::setfam::{mask_full, Family, Interval, Subset};
use crate::{Error, Result};

/// A binary operation on `{0,1}`, addressed by its 4-bit truth table.
/// Bit `(a << 1) | b` holds the value of `a ⊛ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoolOp2(u8);

pub const OP_COUNT: usize = 16;

impl BoolOp2 {
    pub fn from_table(table: u8) -> Self {
        BoolOp2(table & 0xf)
    }

    /// Parse `b00 b01 b10 b11` as written, e.g. `0111` for disjunction.
    pub fn from_bits_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 || !bytes.iter().all(|b| *b == b'0' || *b == b'1') {
            return Err(Error::Invalid(format!(
                "expected a 4-character 0/1 truth table, got `{s}`"
            )));
        }
        let mut t = 0u8;
        for (i, b) in bytes.iter().enumerate() {
            if *b == b'1' {
                t |= 1 << i;
            }
        }
        Ok(BoolOp2(t))
    }

    pub fn from_name(name: &str) -> Result<Self> {
        // literals are the internal table: bit (a << 1) | b = a ⊛ b
        let table = match name {
            "false" | "zero" => 0b0000,
            "and" => 0b1000,
            "minus" | "andnot" => 0b0100,
            "left" | "p" => 0b1100,
            "rminus" => 0b0010,
            "right" | "q" => 0b1010,
            "xor" => 0b0110,
            "or" => 0b1110,
            "nor" => 0b0001,
            "xnor" | "iff" => 0b1001,
            "notq" => 0b0101,
            "convimpl" | "impliedby" => 0b1101,
            "notp" => 0b0011,
            "impl" | "implies" => 0b1011,
            "nand" => 0b0111,
            "true" | "one" => 0b1111,
            _ => return Self::from_bits_str(name),
        };
        Ok(BoolOp2(table))
    }

    pub fn name(&self) -> Option<&'static str> {
        Some(match self.bits_str().as_str() {
            "0000" => "false",
            "0001" => "and",
            "0010" => "minus",
            "0011" => "left",
            "0100" => "rminus",
            "0101" => "right",
            "0110" => "xor",
            "0111" => "or",
            "1000" => "nor",
            "1001" => "xnor",
            "1010" => "notq",
            "1011" => "impliedby",
            "1100" => "notp",
            "1101" => "implies",
            "1110" => "nand",
            "1111" => "true",
            _ => return None,
        })
    }

    /// Render as `b00 b01 b10 b11`.
    pub fn bits_str(&self) -> String {
        (0..4)
            .map(|i| if self.0 >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn all() -> impl Iterator<Item = BoolOp2> {
        (0..OP_COUNT as u8).map(BoolOp2)
    }

    pub fn apply(&self, a: bool, b: bool) -> bool {
        self.0 >> (((a as u8) << 1) | b as u8) & 1 == 1
    }

    /// Apply the corresponding set operation to two subsets, bitwise.
    pub fn apply_masks(&self, a: u32, b: u32, width: usize) -> u32 {
        let full = mask_full(width);
        let mut out = 0u32;
        if self.apply(false, false) {
            out |= !a & !b;
        }
        if self.apply(false, true) {
            out |= !a & b;
        }
        if self.apply(true, false) {
            out |= a & !b;
        }
        if self.apply(true, true) {
            out |= a & b;
        }
        out & full
    }

    pub fn is_commutative(&self) -> bool {
        self.apply(false, true) == self.apply(true, false)
    }

    pub fn is_associative(&self) -> bool {
        let vals = [false, true];
        vals.iter().all(|&a| {
            vals.iter().all(|&b| {
                vals.iter()
                    .all(|&c| self.apply(self.apply(a, b), c) == self.apply(a, self.apply(b, c)))
            })
        })
    }

    pub fn is_monotone(&self) -> bool {
        let vals = [(false, false), (false, true), (true, false), (true, true)];
        vals.iter().all(|&(a, b)| {
            vals.iter().all(|&(a2, b2)| {
                !((a <= a2) && (b <= b2)) || self.apply(a, b) <= self.apply(a2, b2)
            })
        })
    }
}

/// Three truth values: classical 0 and 1, and `U` for "unknown".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    Zero,
    One,
    U,
}

impl Tri {
    fn value_set(self) -> &'static [bool] {
        match self {
            Tri::Zero => &[false],
            Tri::One => &[true],
            Tri::U => &[false, true],
        }
    }

    fn from_value_set(zero: bool, one: bool) -> Tri {
        match (zero, one) {
            (true, false) => Tri::Zero,
            (false, true) => Tri::One,
            (true, true) => Tri::U,
            (false, false) => unreachable!("value sets are nonempty"),
        }
    }
}

/// Kleene's extension of a binary operation to `{0, 1, U}`:
/// `u ⊛ v = w` iff applying `⊛` elementwise to the value sets of `u` and
/// `v` yields the value set of `w`.
pub fn kleene_extend(op: BoolOp2) -> impl Fn(Tri, Tri) -> Tri {
    move |u, v| {
        let mut zero = false;
        let mut one = false;
        for &a in u.value_set() {
            for &b in v.value_set() {
                if op.apply(a, b) {
                    one = true;
                } else {
                    zero = true;
                }
            }
        }
        Tri::from_value_set(zero, one)
    }
}

/// The three-valued characteristic function of a nonempty family: per
/// element, 1 if every member contains it, 0 if none does, U otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KleeneChar {
    width: usize,
    ones: u32,
    unknown: u32,
}

impl KleeneChar {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn value(&self, elem: usize) -> Tri {
        if self.ones >> elem & 1 == 1 {
            Tri::One
        } else if self.unknown >> elem & 1 == 1 {
            Tri::U
        } else {
            Tri::Zero
        }
    }

    /// Elements with value 1.
    pub fn ones(&self) -> u32 {
        self.ones
    }

    /// Elements with value 1 or U.
    pub fn possible(&self) -> u32 {
        self.ones | self.unknown
    }

    fn of_interval(iv: &Interval) -> KleeneChar {
        KleeneChar {
            width: iv.width(),
            ones: iv.lower().bits(),
            unknown: iv.upper().bits() & !iv.lower().bits(),
        }
    }
}

pub fn char_function(fam: &Family) -> Result<KleeneChar> {
    let ones = fam.inter_all().ok_or(Error::EmptyFamily)?;
    let union = fam.union_all();
    Ok(KleeneChar {
        width: fam.width(),
        ones,
        unknown: union & !ones,
    })
}

/// Elementwise set operation applied to all member pairs, deduplicated.
pub fn tensor_apply(op: BoolOp2, a: &Family, b: &Family) -> Result<Family> {
    if a.width() != b.width() {
        return Err(Error::BaseMismatch(a.width(), b.width()));
    }
    let w = a.width();
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &ma in a.masks() {
        for &mb in b.masks() {
            out.push(op.apply_masks(ma, mb, w));
        }
    }
    Ok(Family::from_masks(w, out))
}

/// `{X ∖ A | A ∈ fam}` over the family's base `X`.
pub fn tensor_negation(fam: &Family) -> Family {
    let full = mask_full(fam.width());
    Family::from_masks(fam.width(), fam.masks().iter().map(|&m| !m & full))
}

/// Closed form of a tensor operator on two intervals: the pointwise Kleene
/// extension of the interval characteristic functions, read back as an
/// interval.
pub fn tensor_interval_apply(op: BoolOp2, a: &Interval, b: &Interval) -> Result<Interval> {
    if a.width() != b.width() {
        return Err(Error::BaseMismatch(a.width(), b.width()));
    }
    let ka = KleeneChar::of_interval(a);
    let kb = KleeneChar::of_interval(b);
    let ext = kleene_extend(op);
    let mut ones = 0u32;
    let mut unknown = 0u32;
    for e in 0..a.width() {
        match ext(ka.value(e), kb.value(e)) {
            Tri::One => ones |= 1 << e,
            Tri::U => unknown |= 1 << e,
            Tri::Zero => {}
        }
    }
    Interval::new(
        Subset::new(a.width(), ones),
        Subset::new(a.width(), ones | unknown),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::interval_family;

    fn or() -> BoolOp2 {
        BoolOp2::from_name("or").unwrap()
    }
    fn and() -> BoolOp2 {
        BoolOp2::from_name("and").unwrap()
    }
    fn xor() -> BoolOp2 {
        BoolOp2::from_name("xor").unwrap()
    }

    #[test]
    fn op_tables() {
        assert!(or().apply(false, true));
        assert!(!or().apply(false, false));
        assert_eq!(or().bits_str(), "0111");
        assert_eq!(and().bits_str(), "0001");
        assert_eq!(BoolOp2::from_name("minus").unwrap().bits_str(), "0010");
        assert_eq!(BoolOp2::from_bits_str("0111").unwrap(), or());
        assert_eq!(or().name(), Some("or"));
        assert!(or().is_monotone() && and().is_monotone());
        assert!(!xor().is_monotone());
        assert!(BoolOp2::from_bits_str("012").is_err());
    }

    #[test]
    fn kleene_examples() {
        let e_or = kleene_extend(or());
        assert_eq!(e_or(Tri::U, Tri::One), Tri::One);
        let e_and = kleene_extend(and());
        assert_eq!(e_and(Tri::U, Tri::Zero), Tri::Zero);
        let e_xor = kleene_extend(xor());
        assert_eq!(e_xor(Tri::U, Tri::One), Tri::U);
    }

    #[test]
    fn char_function_examples() {
        let f = Family::from_masks(2, [0b01u32, 0b11]);
        let k = char_function(&f).unwrap();
        assert_eq!(k.value(0), Tri::One);
        assert_eq!(k.value(1), Tri::U);

        let k = char_function(&Family::from_masks(2, [0u32])).unwrap();
        assert_eq!(k.value(0), Tri::Zero);
        assert_eq!(k.value(1), Tri::Zero);

        let k = char_function(&Family::powerset(1)).unwrap();
        assert_eq!(k.value(0), Tri::U);

        assert!(matches!(
            char_function(&Family::empty(2)).unwrap_err(),
            Error::EmptyFamily
        ));
    }

    #[test]
    fn tensor_apply_examples() {
        let a = Family::from_masks(2, [0b01u32]);
        let b = Family::from_masks(2, [0b10u32]);
        let c = tensor_apply(or(), &a, &b).unwrap();
        assert_eq!(c.masks(), &[0b11]);

        // singletons ∨ singletons over base 3: all nonempty sets of size ≤ 2
        let singl = Family::from_masks(3, [0b001u32, 0b010, 0b100]);
        let c = tensor_apply(or(), &singl, &singl).unwrap();
        let expect: Vec<u32> = (1u32..8).filter(|m| m.count_ones() <= 2).collect();
        assert_eq!(c.masks(), &expect[..]);

        let neg = tensor_negation(&Family::from_masks(2, [0u32]));
        assert_eq!(neg.masks(), &[0b11]);

        // A ⊛ ∅ = ∅ ⊛ B = ∅
        let empty = Family::empty(3);
        assert!(tensor_apply(or(), &singl, &empty).unwrap().is_empty());
        assert!(tensor_apply(and(), &empty, &singl).unwrap().is_empty());
    }

    #[test]
    fn or_not_idempotent() {
        let singl = Family::from_masks(3, [0b001u32, 0b010, 0b100]);
        let c = tensor_apply(or(), &singl, &singl).unwrap();
        assert_ne!(c, singl);
    }

    #[test]
    fn interval_closed_form_examples() {
        let i = Interval::new(Subset::empty(2), Subset::from_elems(2, &[0])).unwrap();
        let j = Interval::point(Subset::from_elems(2, &[1]));
        let r = tensor_interval_apply(or(), &i, &j).unwrap();
        assert_eq!(r.lower(), Subset::from_elems(2, &[1]));
        assert_eq!(r.upper(), Subset::full(2));

        let lu = Interval::new(Subset::from_elems(3, &[0]), Subset::from_elems(3, &[0, 2]))
            .unwrap();
        let full = Interval::point(Subset::full(3));
        assert_eq!(tensor_interval_apply(and(), &lu, &full).unwrap(), lu);

        let zero = Interval::point(Subset::empty(3));
        assert_eq!(tensor_interval_apply(xor(), &zero, &lu).unwrap(), lu);
    }

    #[test]
    fn interval_closed_form_matches_enumeration() {
        for op in BoolOp2::all() {
            for (al, au) in [(0b00u32, 0b01u32), (0b01, 0b11), (0b00, 0b11), (0b10, 0b10)] {
                for (bl, bu) in [(0b00u32, 0b10u32), (0b00, 0b11), (0b01, 0b01)] {
                    let a = Interval::new(Subset::new(2, al), Subset::new(2, au)).unwrap();
                    let b = Interval::new(Subset::new(2, bl), Subset::new(2, bu)).unwrap();
                    let closed = interval_family(&tensor_interval_apply(op, &a, &b).unwrap());
                    let direct =
                        tensor_apply(op, &interval_family(&a), &interval_family(&b)).unwrap();
                    assert_eq!(closed, direct, "op {}", op.bits_str());
                }
            }
        }
    }

    #[test]
    fn non_monotone_breaks_domination() {
        // the "p but not q" operator applied to {X} and a dominated convex
        // non-supported family yields a non-dominated family
        let minus = BoolOp2::from_name("minus").unwrap();
        let f = Family::from_masks(2, [0b01u32, 0b10, 0b11]);
        let p = crate::setfam::classify(&f);
        assert!(p.dominated && p.convex && !p.supported);
        let top = Family::from_masks(2, [0b11u32]);
        let neg = tensor_apply(minus, &top, &f).unwrap();
        let np = crate::setfam::classify(&neg);
        assert!(!np.dominated);
    }
}
