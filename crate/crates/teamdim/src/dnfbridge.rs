//! Families as Boolean functions: a member corresponds to a satisfying
//! valuation (element i ↔ variable i, variable 0 least significant).
//! Prime implicants are found by Quine–McCluskey merging; the minimal DNF
//! length is the exact prime-implicant cover, solved with the shared
//! branch-and-bound engine.

use crate::dims::{solve_cover, BitSet, BudgetClock, CandSet, CoverResult, CoverStatus,
    CoverWitness, SearchBudget};
use crate::setfam::{mask_full, Family, Interval, Subset};
use crate::{Error, Result};
use std::collections::HashSet;

/// A Boolean function given by its full truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolFunc {
    vars: usize,
    table: Vec<u64>,
}

impl BoolFunc {
    pub fn new(vars: usize) -> Result<Self> {
        if vars > 20 {
            return Err(Error::CapExceeded(format!(
                "{vars}-variable truth table exceeds the 20-variable cap"
            )));
        }
        let words = ((1usize << vars) + 63) / 64;
        Ok(BoolFunc {
            vars,
            table: vec![0; words],
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn get(&self, minterm: u32) -> bool {
        self.table[(minterm >> 6) as usize] >> (minterm & 63) & 1 == 1
    }

    pub fn set(&mut self, minterm: u32, value: bool) {
        let (w, b) = ((minterm >> 6) as usize, minterm & 63);
        if value {
            self.table[w] |= 1 << b;
        } else {
            self.table[w] &= !(1 << b);
        }
    }

    pub fn on_set(&self) -> Vec<u32> {
        (0..(1u64 << self.vars) as u32).filter(|&m| self.get(m)).collect()
    }

    /// Parse `boolfunc n` followed by a 2^n-character 0/1 string; minterm
    /// index = row, variable 0 least significant.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "empty input"))?
            .trim();
        let n: usize = header
            .strip_prefix("boolfunc ")
            .ok_or_else(|| Error::parse(1, 1, "expected `boolfunc n` header"))?
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, 1, "invalid variable count"))?;
        let mut f = BoolFunc::new(n)?;
        let body: String = lines.collect::<Vec<_>>().join("");
        let body = body.trim();
        if body.len() != 1usize << n {
            return Err(Error::parse(
                2,
                1,
                format!("expected {} table characters, got {}", 1usize << n, body.len()),
            ));
        }
        for (i, c) in body.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => f.set(i as u32, true),
                _ => return Err(Error::parse(2, i + 1, "table characters must be 0 or 1")),
            }
        }
        Ok(f)
    }

    pub fn emit(&self) -> String {
        let mut s = format!("boolfunc {}\n", self.vars);
        for m in 0..(1u64 << self.vars) as u32 {
            s.push(if self.get(m) { '1' } else { '0' });
        }
        s.push('\n');
        s
    }
}

/// Member ↔ satisfying valuation.
pub fn family_to_bool_func(fam: &Family) -> Result<BoolFunc> {
    let mut f = BoolFunc::new(fam.width())?;
    for &m in fam.masks() {
        f.set(m, true);
    }
    Ok(f)
}

pub fn bool_func_to_family(f: &BoolFunc) -> Family {
    Family::from_masks(f.vars, f.on_set())
}

/// A cube: per variable fixed-0, fixed-1 or free. Its satisfying set is
/// exactly an interval over the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implicant {
    /// Positions with a fixed value.
    pub fixed: u32,
    /// Values at the fixed positions (zero elsewhere).
    pub value: u32,
}

impl Implicant {
    pub fn to_interval(&self, vars: usize) -> Interval {
        let lower = self.value;
        let upper = self.value | (!self.fixed & mask_full(vars));
        Interval::new(Subset::new(vars, lower), Subset::new(vars, upper))
            .expect("cube bounds are nested")
    }

    pub fn from_interval(iv: &Interval) -> Self {
        let free = iv.upper().bits() & !iv.lower().bits();
        Implicant {
            fixed: !free & mask_full(iv.width()),
            value: iv.lower().bits(),
        }
    }

    pub fn minterms(&self, vars: usize) -> Vec<u32> {
        self.to_interval(vars).members()
    }

    /// Cube string, variable 0 first: `0`, `1` or `-` per variable.
    pub fn cube_str(&self, vars: usize) -> String {
        (0..vars)
            .map(|i| {
                if self.fixed >> i & 1 == 0 {
                    '-'
                } else if self.value >> i & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

/// All prime implicants, via Quine–McCluskey pair merging over levels of
/// increasing free-variable count.
pub fn prime_implicants(f: &BoolFunc) -> Result<Vec<Implicant>> {
    let full = mask_full(f.vars);
    let mut level: HashSet<Implicant> = f
        .on_set()
        .into_iter()
        .map(|m| Implicant {
            fixed: full,
            value: m,
        })
        .collect();
    let mut primes: Vec<Implicant> = Vec::new();
    while !level.is_empty() {
        let mut merged_away: HashSet<Implicant> = HashSet::new();
        let mut next: HashSet<Implicant> = HashSet::new();
        for cube in level.iter() {
            for v in 0..f.vars {
                let bit = 1u32 << v;
                if cube.fixed & bit == 0 {
                    continue;
                }
                let partner = Implicant {
                    fixed: cube.fixed,
                    value: cube.value ^ bit,
                };
                if level.contains(&partner) {
                    merged_away.insert(*cube);
                    merged_away.insert(partner);
                    next.insert(Implicant {
                        fixed: cube.fixed & !bit,
                        value: cube.value & !bit,
                    });
                }
            }
        }
        primes.extend(level.iter().filter(|c| !merged_away.contains(c)));
        level = next;
    }
    primes.sort_unstable();
    Ok(primes)
}

/// Exact minimum number of prime implicants covering the on-set, with the
/// chosen cubes as witness intervals.
pub fn minimal_dnf_length(f: &BoolFunc, budget: &SearchBudget) -> Result<CoverResult> {
    let on: Vec<u32> = f.on_set();
    if on.is_empty() {
        return Ok(CoverResult {
            value: 0,
            witness: CoverWitness::Intervals(Vec::new()),
            status: CoverStatus::Exact,
        });
    }
    let primes = prime_implicants(f)?;
    let mut clock = BudgetClock::start(budget);
    let pos = |m: u32| on.binary_search(&m).unwrap();
    let candidates: Vec<CandSet> = primes
        .iter()
        .enumerate()
        .map(|(i, p)| CandSet {
            label: i as u32,
            cover: {
                let mut bs = BitSet::new(on.len());
                for m in p.minterms(f.vars) {
                    bs.set(pos(m));
                }
                bs
            },
        })
        .collect();
    let total: u64 = candidates.iter().map(|c| c.cover.count() as u64).sum();
    let exact = clock.tick(total);
    let (picked, status) = solve_cover(on.len(), &candidates, &[], &mut clock, exact);
    let witness: Vec<Interval> = picked.iter().map(|&i| primes[i].to_interval(f.vars)).collect();
    Ok(CoverResult {
        value: witness.len(),
        witness: CoverWitness::Intervals(witness),
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::cylindrical_dimension;
    use crate::setfam::{even_family, random_family};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let fam = random_family(&mut rng, 5, 0.5);
            let f = family_to_bool_func(&fam).unwrap();
            assert_eq!(bool_func_to_family(&f), fam);
        }
    }

    #[test]
    fn even_is_xnor() {
        let f = family_to_bool_func(&even_family(2)).unwrap();
        assert!(f.get(0b00) && f.get(0b11));
        assert!(!f.get(0b01) && !f.get(0b10));
        let primes = prime_implicants(&f).unwrap();
        assert_eq!(primes.len(), 2);
        assert!(primes.iter().all(|p| p.fixed == 0b11));
        let r = minimal_dnf_length(&f, &SearchBudget::default()).unwrap();
        assert_eq!(r.value, 2);
    }

    #[test]
    fn constant_false_and_powerset() {
        let f = BoolFunc::new(3).unwrap();
        assert!(bool_func_to_family(&f).is_empty());
        assert_eq!(minimal_dnf_length(&f, &SearchBudget::default()).unwrap().value, 0);

        let mut t = BoolFunc::new(3).unwrap();
        for m in 0..8 {
            t.set(m, true);
        }
        let primes = prime_implicants(&t).unwrap();
        assert_eq!(primes.len(), 1);
        assert_eq!(primes[0].fixed, 0);
        assert_eq!(minimal_dnf_length(&t, &SearchBudget::default()).unwrap().value, 1);
    }

    #[test]
    fn single_minterm() {
        let mut f = BoolFunc::new(4).unwrap();
        f.set(0b1010, true);
        let primes = prime_implicants(&f).unwrap();
        assert_eq!(primes, vec![Implicant { fixed: 0b1111, value: 0b1010 }]);
        assert_eq!(primes[0].cube_str(4), "0101");
    }

    #[test]
    fn primes_are_maximal_intervals_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let fam = random_family(&mut rng, 5, 0.5);
            let f = family_to_bool_func(&fam).unwrap();
            for p in prime_implicants(&f).unwrap() {
                let iv = p.to_interval(5);
                // contained in the family
                assert!(iv.members().iter().all(|&m| fam.contains_mask(m)));
                // maximal: no one-step enlargement stays inside
                for v in 0..5 {
                    let bit = 1u32 << v;
                    if p.fixed & bit != 0 {
                        let grown = Implicant { fixed: p.fixed & !bit, value: p.value & !bit };
                        assert!(!grown
                            .minterms(5)
                            .iter()
                            .all(|&m| fam.contains_mask(m)));
                    }
                }
            }
        }
    }

    #[test]
    fn dnf_length_equals_cylindrical_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let budget = SearchBudget::default();
        for _ in 0..30 {
            let n = 3 + rng.gen_range(0..4);
            let fam = random_family(&mut rng, n, 0.5);
            let f = family_to_bool_func(&fam).unwrap();
            let m = minimal_dnf_length(&f, &budget).unwrap();
            let cd = cylindrical_dimension(&fam, &budget);
            assert_eq!(m.value, cd.value);
            assert_eq!(m.status, CoverStatus::Exact);
            assert_eq!(cd.status, CoverStatus::Exact);
        }
    }

    #[test]
    fn parse_emit() {
        let text = "boolfunc 2\n1001\n";
        let f = BoolFunc::parse(text).unwrap();
        assert_eq!(f.emit(), text);
        assert!(BoolFunc::parse("boolfunc 2\n10\n").is_err());
        assert!(BoolFunc::parse("bool 2\n1001\n").is_err());
    }
}
