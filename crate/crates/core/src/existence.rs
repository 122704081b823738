//! Necessary conditions and the constructive criterion for BH(Z_n, h).
//!
//! Each `test_*` function inspects a single pair and returns `Open` unless
//! its rule applies. Nonexistence verdicts carry a [`Certificate`] holding
//! the numbers needed to redo the argument by hand; [`Certificate::recheck`]
//! does exactly that from the recorded values.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constructions;
use crate::numtheory::{
    self, descent_residue, factor, gcd, is_prime, is_self_conjugate, is_square, isqrt, lcm,
    pow_mod, squarefree_part, strip, valuation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Trivial,
    Construction,
    PrimePowerNecessity,
    Known2p2,
    Known3pq,
    KnownPPlusQ,
    SylvesterI,
    SylvesterII,
    SylvesterIII,
    LamLeung,
    Brock,
    MainInequality,
    SelfconjugateDivisor,
    SelfconjugateBound,
    PrimePowerAlphabet,
    OddPrimeAlphabet,
    TwoPCorollary,
    DivisorClosure,
}

impl Rule {
    pub const ALL: [Rule; 18] = [
        Rule::Trivial,
        Rule::Construction,
        Rule::PrimePowerNecessity,
        Rule::Known2p2,
        Rule::Known3pq,
        Rule::KnownPPlusQ,
        Rule::SylvesterI,
        Rule::SylvesterII,
        Rule::SylvesterIII,
        Rule::LamLeung,
        Rule::Brock,
        Rule::MainInequality,
        Rule::SelfconjugateDivisor,
        Rule::SelfconjugateBound,
        Rule::PrimePowerAlphabet,
        Rule::OddPrimeAlphabet,
        Rule::TwoPCorollary,
        Rule::DivisorClosure,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::Trivial => "trivial",
            Rule::Construction => "construction",
            Rule::PrimePowerNecessity => "prime_power_necessity",
            Rule::Known2p2 => "known_2p2",
            Rule::Known3pq => "known_3pq",
            Rule::KnownPPlusQ => "known_p_plus_q",
            Rule::SylvesterI => "sylvester_i",
            Rule::SylvesterII => "sylvester_ii",
            Rule::SylvesterIII => "sylvester_iii",
            Rule::LamLeung => "lam_leung",
            Rule::Brock => "brock",
            Rule::MainInequality => "main_inequality",
            Rule::SelfconjugateDivisor => "selfconjugate_divisor",
            Rule::SelfconjugateBound => "selfconjugate_bound",
            Rule::PrimePowerAlphabet => "prime_power_alphabet",
            Rule::OddPrimeAlphabet => "odd_prime_alphabet",
            Rule::TwoPCorollary => "two_p_corollary",
            Rule::DivisorClosure => "divisor_closure",
        }
    }

    pub fn from_id(id: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.id() == id)
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Rule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let id = String::deserialize(d)?;
        Rule::from_id(&id).ok_or_else(|| serde::de::Error::custom(format!("unknown rule {id:?}")))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// The decomposition `u = w^2 k` of the self-conjugate part of `n` modulo `lcm(n, h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfConjDecomp {
    pub n: u64,
    pub h: u64,
    pub m: u64,
    pub u: u64,
    pub w: u64,
    pub k: u64,
    pub t: u32,
    pub r: u32,
    pub delta: u32,
}

impl SelfConjDecomp {
    pub fn new(n: u64, h: u64) -> Self {
        let m = lcm(n, h);
        let u = factor(n)
            .factors()
            .iter()
            .filter(|&&(p, _)| is_self_conjugate(p, m))
            .map(|&(p, e)| p.pow(e))
            .product::<u64>();
        let k = squarefree_part(u);
        let w = isqrt(u / k);
        let t = factor(h).num_primes() as u32;
        let r = factor(k).num_primes() as u32;
        Self {
            n,
            h,
            m,
            u,
            w,
            k,
            t,
            r,
            delta: u32::from(r == t),
        }
    }
}

/// `n = p^c m` with `p` odd and `p` not dividing `m`, and `f = gcd ord_p(q)` over primes `q | m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerSplit {
    pub p: u64,
    pub b: u32,
    pub c: u32,
    pub m: u64,
    pub primes: Vec<u64>,
    pub f: u64,
}

impl PrimePowerSplit {
    /// Defined when `p` is an odd prime and `n` has a prime factor other than `p`.
    pub fn new(n: u64, p: u64, b: u32) -> Option<Self> {
        if p == 2 || !is_prime(p) || n == 0 {
            return None;
        }
        let c = valuation(p, n);
        let m = strip(p, n);
        let primes: Vec<u64> = factor(m).primes().collect();
        if primes.is_empty() {
            return None;
        }
        let f = primes.iter().fold(0, |acc, &q| {
            numtheory::gcd(acc, numtheory::ord(p, q).expect("q differs from p"))
        });
        Some(Self {
            p,
            b,
            c,
            m,
            primes,
            f,
        })
    }

    /// The first of the three conditions that fails.
    pub fn violated(&self) -> Option<AlphabetCondition> {
        let (p, m, f) = (self.p as u128, self.m as u128, self.f as u128);
        if f % 2 == 0 {
            Some(AlphabetCondition::FOdd)
        } else if !(f <= m || p * (f - m) <= f * f - m) {
            Some(AlphabetCondition::DescentBound)
        } else if p > m * m + m + 1 {
            Some(AlphabetCondition::PrimeBound)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphabetCondition {
    /// `f` must be odd.
    FOdd,
    /// `f <= m` or `p (f - m) <= f^2 - m`.
    DescentBound,
    /// `p <= m^2 + m + 1`.
    PrimeBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    OddK,
    EvenK,
}

/// Parameters behind a nonexistence verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Constant rows have `R_s = n`.
    ConstantRow { n: u64 },
    PrimePower {
        p: u64,
        a: u32,
        nu_p_h: u32,
        required: u32,
    },
    #[serde(rename = "known_2p2")]
    Known2p2 { p: u64 },
    #[serde(rename = "known_3pq")]
    Known3pq { p: u64, q: u64 },
    /// Matched against the alphabet `pq` only, never its multiples.
    KnownPPlusQ { p: u64, q: u64, exact_alphabet: bool },
    SylvesterI { n: u64 },
    #[serde(rename = "sylvester_ii")]
    SylvesterII { p: u64, b: u32 },
    #[serde(rename = "sylvester_iii")]
    SylvesterIII { q: u64, p: u64, a: u32, b: u32 },
    LamLeung { primes: Vec<u64> },
    Brock { p: u64, j: u64, squarefree_part: u64 },
    MainInequality { m: u64, gcd: u64 },
    SelfconjugateDivisor { p: u64, m: u64 },
    SelfconjugateBound {
        decomp: SelfConjDecomp,
        case: BoundCase,
        exponent: i32,
        /// `w^2 phi(k)`, scaled by `4^{-E}` when the exponent is negative.
        lhs: u64,
        /// `4^E gcd(h,u)^2 k` (times 2 in the even case) with `E` clamped at 0.
        rhs: u64,
    },
    PrimePowerAlphabet { p: u64, b: u32, c: u32, m: u64 },
    OddPrimeAlphabet {
        split: PrimePowerSplit,
        failed: AlphabetCondition,
    },
    TwoPCorollary { p: u64, c: u32 },
    DivisorClosure {
        multiple: u64,
        rule: Rule,
        source: Box<Certificate>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Exists { method: Rule },
    NotExists { rule: Rule, certificate: Certificate },
    Open,
}

impl Verdict {
    pub fn is_open(&self) -> bool {
        matches!(self, Verdict::Open)
    }

    pub fn rule(&self) -> Option<Rule> {
        match self {
            Verdict::Exists { method } => Some(*method),
            Verdict::NotExists { rule, .. } => Some(*rule),
            Verdict::Open => None,
        }
    }

    fn refuted(rule: Rule, certificate: Certificate) -> Self {
        Verdict::NotExists { rule, certificate }
    }
}

fn odd_prime(p: u64) -> bool {
    p > 2 && is_prime(p)
}

fn ceil_half(a: u32) -> u32 {
    a.div_ceil(2)
}

/// `(p, b)` when `h = p^b` with `b >= 1`.
fn prime_power(h: u64) -> Option<(u64, u32)> {
    if h < 2 {
        return None;
    }
    factor(h).as_prime_power()
}

/// `(p, b)` when `h` is `p^b` or `2 p^b` with `p` an odd prime and `b >= 1`.
fn odd_alphabet(h: u64) -> Option<(u64, u32)> {
    let h = if h % 4 == 2 { h / 2 } else { h };
    prime_power(h).filter(|&(p, _)| p != 2)
}

pub fn test_trivial(n: u64, h: u64) -> Verdict {
    if n == 1 {
        Verdict::Exists {
            method: Rule::Trivial,
        }
    } else if h == 1 {
        Verdict::refuted(Rule::Trivial, Certificate::ConstantRow { n })
    } else {
        Verdict::Open
    }
}

/// `Exists` exactly when [`constructions::cyclic_bh`] returns a verified witness.
pub fn test_construction(n: u64, h: u64) -> Verdict {
    match constructions::cyclic_bh(n, h) {
        Ok(_) => Verdict::Exists {
            method: Rule::Construction,
        },
        Err(constructions::ConstructionError::Inapplicable { .. }) => Verdict::Open,
        Err(e) => panic!("construction of BH(Z_{n}, {h}) failed: {e}"),
    }
}

pub fn test_prime_power_necessity(n: u64, h: u64) -> Verdict {
    let Some((p, a)) = prime_power(n) else {
        return Verdict::Open;
    };
    let nu_p_h = valuation(p, h);
    let required = if p == 2 && a == 1 { 2 } else { ceil_half(a) };
    if nu_p_h < required {
        Verdict::refuted(
            Rule::PrimePowerNecessity,
            Certificate::PrimePower {
                p,
                a,
                nu_p_h,
                required,
            },
        )
    } else {
        Verdict::Open
    }
}

fn two_distinct_primes_above_3(x: u64) -> Option<(u64, u64)> {
    match factor(x).factors() {
        &[(p, 1), (q, 1)] if p > 3 => Some((p, q)),
        _ => None,
    }
}

pub fn test_known_families(n: u64, h: u64) -> Verdict {
    if n < 2 {
        return Verdict::Open;
    }
    if h % 2 == 0 {
        let p = h / 2;
        if odd_prime(p) && n == 2 * p * p {
            return Verdict::refuted(Rule::Known2p2, Certificate::Known2p2 { p });
        }
    }
    if h == 3 && n % 3 == 0 {
        if let Some((p, q)) = two_distinct_primes_above_3(n / 3) {
            return Verdict::refuted(Rule::Known3pq, Certificate::Known3pq { p, q });
        }
    }
    if let Some((p, q)) = two_distinct_primes_above_3(h) {
        if n == p + q {
            return Verdict::refuted(
                Rule::KnownPPlusQ,
                Certificate::KnownPPlusQ {
                    p,
                    q,
                    exact_alphabet: true,
                },
            );
        }
    }
    Verdict::Open
}

pub fn test_sylvester(n: u64, h: u64) -> Verdict {
    if n < 2 {
        return Verdict::Open;
    }
    if h == 2 && !(n % 4 == 0 && is_square(n / 4)) {
        return Verdict::refuted(Rule::SylvesterI, Certificate::SylvesterI { n });
    }
    if n >= 5 && is_prime(n - 2) && h % 2 == 0 {
        let p = n - 2;
        if let Some((q, b)) = prime_power(h / 2) {
            if q == p {
                return Verdict::refuted(Rule::SylvesterII, Certificate::SylvesterII { p, b });
            }
        }
    }
    if n % 2 == 0 && odd_prime(n / 2) {
        let q = n / 2;
        if let &[(2, a), (p, b)] = factor(h).factors() {
            if p > q {
                return Verdict::refuted(
                    Rule::SylvesterIII,
                    Certificate::SylvesterIII { q, p, a, b },
                );
            }
        }
    }
    Verdict::Open
}

pub fn test_lam_leung(n: u64, h: u64) -> Verdict {
    if n < 2 {
        return Verdict::Open;
    }
    let primes = numtheory::prime_divisors(h);
    if numtheory::semigroup_member(n, &primes) {
        Verdict::Open
    } else {
        Verdict::refuted(Rule::LamLeung, Certificate::LamLeung { primes })
    }
}

/// Smallest `j` in `[0, ord_h(p))` with `p^j = -1 mod h`.
fn minus_one_power(p: u64, h: u64) -> Option<u64> {
    let period = numtheory::ord(h, p).ok()?;
    (0..period).find(|&j| pow_mod(p, j, h) == (h - 1) % h)
}

pub fn test_brock(n: u64, h: u64) -> Verdict {
    if n < 2 {
        return Verdict::Open;
    }
    let sf = squarefree_part(n);
    if sf % 2 == 0 {
        return Verdict::Open;
    }
    for p in factor(sf).primes().filter(|&p| h % p != 0) {
        if let Some(j) = minus_one_power(p, h) {
            return Verdict::refuted(
                Rule::Brock,
                Certificate::Brock {
                    p,
                    j,
                    squarefree_part: sf,
                },
            );
        }
    }
    Verdict::Open
}

/// Whether clause (ii) of the main theorem holds for the ordered pair `(p, q)`.
///
/// A prime `p` whose full power in `lcm(n, h)` already divides `h` needs no
/// descent condition.
fn descent_blocked(p: u64, q: u64, h: u64, m: u64) -> bool {
    let e = valuation(p, h);
    if e >= valuation(p, m) {
        return true;
    }
    descent_residue(q, m, p.pow(e + 1)) != 1
}

pub fn test_main_inequality(n: u64, h: u64) -> Verdict {
    if n < 2 {
        return Verdict::Open;
    }
    let m = lcm(n, h);
    let primes: Vec<u64> = factor(n).primes().collect();
    if primes.iter().any(|&p| h % p != 0) {
        return Verdict::Open;
    }
    let hypotheses = primes.iter().all(|&p| {
        primes
            .iter()
            .filter(|&&q| q != p)
            .all(|&q| descent_blocked(p, q, h, m))
    });
    let g = gcd(h, n);
    if hypotheses && n > g * g {
        Verdict::refuted(Rule::MainInequality, Certificate::MainInequality { m, gcd: g })
    } else {
        Verdict::Open
    }
}

pub fn test_selfconjugate_divisor(n: u64, h: u64) -> Verdict {
    if n < 2 {
        return Verdict::Open;
    }
    let m = lcm(n, h);
    match factor(n)
        .primes()
        .find(|&p| h % p != 0 && is_self_conjugate(p, m))
    {
        Some(p) => Verdict::refuted(
            Rule::SelfconjugateDivisor,
            Certificate::SelfconjugateDivisor { p, m },
        ),
        None => Verdict::Open,
    }
}

/// `(case, E, lhs, rhs)` for the bound; the bound is violated iff `lhs > rhs`.
fn bound_sides(d: &SelfConjDecomp) -> (BoundCase, i32, u64, u64) {
    let (t, r) = (d.t as i32, d.r as i32);
    let g = gcd(d.h, d.u);
    let phi_k = numtheory::euler_phi(d.k);
    let (case, e, scale) = if d.k % 2 == 1 {
        (BoundCase::OddK, t - r - 1 + d.delta as i32, 1)
    } else {
        (BoundCase::EvenK, t - r - 1, 2)
    };
    let four = |x: i32| 4u64.pow(x.max(0) as u32);
    let lhs = d.w * d.w * phi_k * four(-e);
    let rhs = four(e) * g * g * d.k * scale;
    (case, e, lhs, rhs)
}

pub fn test_selfconjugate_bound(n: u64, h: u64) -> Verdict {
    if n < 2 {
        return Verdict::Open;
    }
    let decomp = SelfConjDecomp::new(n, h);
    let (case, exponent, lhs, rhs) = bound_sides(&decomp);
    if lhs > rhs {
        Verdict::refuted(
            Rule::SelfconjugateBound,
            Certificate::SelfconjugateBound {
                decomp,
                case,
                exponent,
                lhs,
                rhs,
            },
        )
    } else {
        Verdict::Open
    }
}

pub fn test_prime_power_alphabet(n: u64, h: u64) -> Verdict {
    if n < 2 {
        return Verdict::Open;
    }
    let Some((p, b)) = prime_power(h) else {
        return Verdict::Open;
    };
    let c = valuation(p, n);
    let m = strip(p, n);
    if c > 0 && is_self_conjugate(p, m) && b < c / 2 {
        Verdict::refuted(
            Rule::PrimePowerAlphabet,
            Certificate::PrimePowerAlphabet { p, b, c, m },
        )
    } else {
        Verdict::Open
    }
}

/// The three conditions for alphabets `p^b` and `2 p^b`, without the `n = 2 p^c` case.
pub fn test_odd_prime_alphabet(n: u64, h: u64) -> Verdict {
    if n < 2 {
        return Verdict::Open;
    }
    let Some((p, b)) = odd_alphabet(h) else {
        return Verdict::Open;
    };
    let Some(split) = PrimePowerSplit::new(n, p, b) else {
        return Verdict::Open;
    };
    if split.m < 2 || is_square(split.m) {
        return Verdict::Open;
    }
    match split.violated() {
        Some(failed) => Verdict::refuted(
            Rule::OddPrimeAlphabet,
            Certificate::OddPrimeAlphabet { split, failed },
        ),
        None => Verdict::Open,
    }
}

/// No BH(Z_{2p^c}, p^b) or BH(Z_{2p^c}, 2p^b) for odd `p`.
pub fn test_two_p_corollary(n: u64, h: u64) -> Verdict {
    if n < 2 {
        return Verdict::Open;
    }
    let Some((p, _)) = odd_alphabet(h) else {
        return Verdict::Open;
    };
    if strip(p, n) == 2 {
        let c = valuation(p, n);
        Verdict::refuted(Rule::TwoPCorollary, Certificate::TwoPCorollary { p, c })
    } else {
        Verdict::Open
    }
}

/// Both odd-prime alphabet rules, corollary first.
pub fn test_odd_prime_alphabet_conditions(n: u64, h: u64) -> Verdict {
    match test_two_p_corollary(n, h) {
        Verdict::Open => test_odd_prime_alphabet(n, h),
        v => v,
    }
}

type Test = fn(u64, u64) -> Verdict;

/// The base battery in pipeline order; closure is applied on top.
pub const PIPELINE: [(&str, Test); 12] = [
    ("trivial", test_trivial),
    ("construction", test_construction),
    ("prime_power_necessity", test_prime_power_necessity),
    ("known_families", test_known_families),
    ("sylvester", test_sylvester),
    ("lam_leung", test_lam_leung),
    ("brock", test_brock),
    ("main_inequality", test_main_inequality),
    ("selfconjugate_divisor", test_selfconjugate_divisor),
    ("selfconjugate_bound", test_selfconjugate_bound),
    ("prime_power_alphabet", test_prime_power_alphabet),
    ("odd_prime_alphabet_conditions", test_odd_prime_alphabet_conditions),
];

/// Every rule that refutes a pair, each evaluated on its own.
///
/// The known families and the Sylvester clauses are pairwise exclusive, so
/// one call per group finds all of them.
pub fn refutations(n: u64, h: u64) -> Vec<(Rule, Certificate)> {
    let tests: [Test; 11] = [
        test_trivial,
        test_prime_power_necessity,
        test_known_families,
        test_sylvester,
        test_lam_leung,
        test_brock,
        test_main_inequality,
        test_selfconjugate_divisor,
        test_selfconjugate_bound,
        test_prime_power_alphabet,
        test_odd_prime_alphabet,
    ];
    let mut out: Vec<(Rule, Certificate)> = tests
        .iter()
        .chain(std::iter::once(&(test_two_p_corollary as Test)))
        .filter_map(|t| match t(n, h) {
            Verdict::NotExists { rule, certificate } => Some((rule, certificate)),
            _ => None,
        })
        .collect();
    out.sort_by_key(|(r, _)| *r);
    out
}

/// Result of running every test on one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub n: u64,
    pub h: u64,
    pub exists: Option<Rule>,
    pub refutations: Vec<(Rule, Certificate)>,
}

impl Evaluation {
    pub fn conflict(&self) -> bool {
        self.exists.is_some() && !self.refutations.is_empty()
    }

    pub fn fires(&self, rule: Rule) -> bool {
        self.exists == Some(rule) || self.refutations.iter().any(|(r, _)| *r == rule)
    }
}

/// Consistency mode: all tests, no short-circuit, no closure.
pub fn evaluate_all(n: u64, h: u64) -> Evaluation {
    let exists = match (test_trivial(n, h), test_construction(n, h)) {
        (_, Verdict::Exists { method }) | (Verdict::Exists { method }, _) => Some(method),
        _ => None,
    };
    Evaluation {
        n,
        h,
        exists,
        refutations: refutations(n, h),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Largest alphabet inspected by the divisor closure; 0 disables it.
    pub closure_limit: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { closure_limit: 100 }
    }
}

/// Runs the pipeline and returns the first decisive verdict.
pub fn classify(n: u64, h: u64) -> Verdict {
    classify_with(n, h, ClassifyOptions::default())
}

pub fn classify_with(n: u64, h: u64, opts: ClassifyOptions) -> Verdict {
    assert!(n >= 1 && h >= 1, "n and h must be positive");
    let verdict = PIPELINE
        .iter()
        .map(|(_, t)| t(n, h))
        .find(|v| !v.is_open())
        .unwrap_or(Verdict::Open);
    if let Verdict::Exists { method } = &verdict {
        let later = refutations(n, h);
        assert!(
            later.is_empty(),
            "BH(Z_{n}, {h}) built by {method} but refuted by {}",
            later[0].0
        );
        return verdict;
    }
    if verdict.is_open() {
        return divisor_closure(n, h, opts.closure_limit);
    }
    verdict
}

/// Nonexistence over alphabet `h'` implies nonexistence over every divisor of `h'`.
pub fn divisor_closure(n: u64, h: u64, limit: u64) -> Verdict {
    (2..)
        .map(|k| k * h)
        .take_while(|&hh| hh <= limit)
        .find_map(|hh| {
            refutations(n, hh).into_iter().next().map(|(rule, source)| {
                Verdict::refuted(
                    Rule::DivisorClosure,
                    Certificate::DivisorClosure {
                        multiple: hh,
                        rule,
                        source: Box::new(source),
                    },
                )
            })
        })
        .unwrap_or(Verdict::Open)
}

impl Certificate {
    /// Re-derives the verdict for `(n, h)` from the recorded parameters.
    pub fn recheck(&self, n: u64, h: u64) -> bool {
        match self {
            Certificate::ConstantRow { n: m } => *m == n && n >= 2 && h == 1,
            Certificate::PrimePower {
                p,
                a,
                nu_p_h,
                required,
            } => {
                let need = if *p == 2 && *a == 1 { 2 } else { ceil_half(*a) };
                is_prime(*p)
                    && p.pow(*a) == n
                    && valuation(*p, h) == *nu_p_h
                    && need == *required
                    && nu_p_h < required
            }
            Certificate::Known2p2 { p } => odd_prime(*p) && n == 2 * p * p && h == 2 * p,
            Certificate::Known3pq { p, q } => {
                p != q && *p > 3 && *q > 3 && is_prime(*p) && is_prime(*q) && n == 3 * p * q && h == 3
            }
            Certificate::KnownPPlusQ {
                p,
                q,
                exact_alphabet,
            } => {
                *exact_alphabet
                    && p != q && *p > 3 && *q > 3 && is_prime(*p) && is_prime(*q) && n == p + q && h == p * q
            }
            Certificate::SylvesterI { n: m } => {
                *m == n && h == 2 && !(n % 4 == 0 && is_square(n / 4))
            }
            Certificate::SylvesterII { p, b } => {
                odd_prime(*p) && n == p + 2 && *b >= 1 && h == 2 * p.pow(*b)
            }
            Certificate::SylvesterIII { q, p, a, b } => {
                odd_prime(*q)
                    && is_prime(*p)
                    && p > q
                    && n == 2 * q
                    && *a >= 1
                    && *b >= 1
                    && h == 2u64.pow(*a) * p.pow(*b)
            }
            Certificate::LamLeung { primes } => {
                n >= 2
                    && *primes == numtheory::prime_divisors(h)
                    && !numtheory::semigroup_member(n, primes)
            }
            Certificate::Brock {
                p,
                j,
                squarefree_part: sf,
            } => {
                *sf == squarefree_part(n)
                    && sf % 2 == 1
                    && is_prime(*p)
                    && sf % p == 0
                    && h % p != 0
                    && pow_mod(*p, *j, h) == (h - 1) % h
            }
            Certificate::MainInequality { m, gcd: g } => {
                *m == lcm(n, h) && *g == gcd(n, h) && n > g * g && {
                    let primes: Vec<u64> = factor(n).primes().collect();
                    primes.iter().all(|&p| {
                        h % p == 0
                            && primes
                                .iter()
                                .filter(|&&q| q != p)
                                .all(|&q| descent_blocked(p, q, h, *m))
                    })
                }
            }
            Certificate::SelfconjugateDivisor { p, m } => {
                *m == lcm(n, h) && is_prime(*p) && n % p == 0 && h % p != 0 && is_self_conjugate(*p, *m)
            }
            Certificate::SelfconjugateBound {
                decomp,
                case,
                exponent,
                lhs,
                rhs,
            } => {
                let fresh = SelfConjDecomp::new(n, h);
                fresh == *decomp
                    && decomp.w * decomp.w * decomp.k == decomp.u
                    && bound_sides(decomp) == (*case, *exponent, *lhs, *rhs)
                    && lhs > rhs
            }
            Certificate::PrimePowerAlphabet { p, b, c, m } => {
                is_prime(*p)
                    && h == p.pow(*b)
                    && n == p.pow(*c) * m
                    && m % p != 0
                    && is_self_conjugate(*p, *m)
                    && *b < c / 2
            }
            Certificate::OddPrimeAlphabet { split, failed } => {
                odd_alphabet(h).map(|(p, _)| p) == Some(split.p)
                    && PrimePowerSplit::new(n, split.p, split.b).as_ref() == Some(split)
                    && split.m >= 2
                    && !is_square(split.m)
                    && split.violated() == Some(*failed)
            }
            Certificate::TwoPCorollary { p, c } => {
                odd_alphabet(h).map(|(q, _)| q) == Some(*p) && n == 2 * p.pow(*c)
            }
            Certificate::DivisorClosure {
                multiple,
                rule,
                source,
            } => {
                *multiple > h
                    && multiple % h == 0
                    && refutations(n, *multiple)
                        .iter()
                        .any(|(r, c)| r == rule && c == source.as_ref())
                    && source.recheck(n, *multiple)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refuted_by(v: &Verdict) -> Option<Rule> {
        match v {
            Verdict::NotExists { rule, .. } => Some(*rule),
            _ => None,
        }
    }

    #[test]
    fn trivial_examples() {
        assert_eq!(test_trivial(1, 7), Verdict::Exists { method: Rule::Trivial });
        assert_eq!(refuted_by(&test_trivial(5, 1)), Some(Rule::Trivial));
        assert_eq!(test_trivial(6, 6), Verdict::Open);
    }

    #[test]
    fn construction_examples() {
        assert!(matches!(test_construction(4, 2), Verdict::Exists { .. }));
        assert!(matches!(test_construction(9, 3), Verdict::Exists { .. }));
        assert_eq!(test_construction(6, 2), Verdict::Open);
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(refuted_by(&test_prime_power_necessity(8, 2)), Some(Rule::PrimePowerNecessity));
        assert_eq!(refuted_by(&test_prime_power_necessity(2, 2)), Some(Rule::PrimePowerNecessity));
        assert_eq!(test_prime_power_necessity(4, 2), Verdict::Open);
        assert_eq!(test_prime_power_necessity(12, 2), Verdict::Open);
    }

    #[test]
    fn known_family_examples() {
        assert_eq!(refuted_by(&test_known_families(50, 10)), Some(Rule::Known2p2));
        assert_eq!(refuted_by(&test_known_families(105, 3)), Some(Rule::Known3pq));
        assert_eq!(refuted_by(&test_known_families(12, 35)), Some(Rule::KnownPPlusQ));
        assert_eq!(test_known_families(12, 70), Verdict::Open);
        assert_eq!(test_known_families(8, 4), Verdict::Open);
    }

    #[test]
    fn sylvester_examples() {
        assert_eq!(refuted_by(&test_sylvester(8, 2)), Some(Rule::SylvesterI));
        assert_eq!(refuted_by(&test_sylvester(7, 10)), Some(Rule::SylvesterII));
        assert_eq!(refuted_by(&test_sylvester(6, 10)), Some(Rule::SylvesterIII));
        assert_eq!(test_sylvester(4, 2), Verdict::Open);
        assert_eq!(test_sylvester(16, 2), Verdict::Open);
    }

    #[test]
    fn lam_leung_examples() {
        assert_eq!(refuted_by(&test_lam_leung(5, 8)), Some(Rule::LamLeung));
        assert_eq!(test_lam_leung(7, 6), Verdict::Open);
        assert_eq!(test_lam_leung(1, 8), Verdict::Open);
    }

    #[test]
    fn brock_examples() {
        assert_eq!(refuted_by(&test_brock(21, 5)), Some(Rule::Brock));
        assert_eq!(refuted_by(&test_brock(12, 5)), Some(Rule::Brock));
        assert_eq!(test_brock(9, 5), Verdict::Open);
        // j = 0 makes every odd squarefree part fatal over h = 2.
        assert_eq!(refuted_by(&test_brock(3, 2)), Some(Rule::Brock));
    }

    #[test]
    fn main_inequality_examples() {
        assert_eq!(refuted_by(&test_main_inequality(8, 2)), Some(Rule::MainInequality));
        assert_eq!(refuted_by(&test_main_inequality(27, 3)), Some(Rule::MainInequality));
        assert_eq!(test_main_inequality(4, 2), Verdict::Open);
    }

    #[test]
    fn selfconjugate_divisor_examples() {
        assert_eq!(refuted_by(&test_selfconjugate_divisor(3, 2)), Some(Rule::SelfconjugateDivisor));
        assert_eq!(test_selfconjugate_divisor(4, 2), Verdict::Open);
        let expect = [5u64, 7].iter().any(|&p| is_self_conjugate(p, 210));
        assert_eq!(!test_selfconjugate_divisor(35, 6).is_open(), expect);
    }

    #[test]
    fn selfconjugate_bound_examples() {
        let d = SelfConjDecomp::new(16, 2);
        assert_eq!((d.u, d.w, d.k, d.t, d.r, d.delta), (16, 4, 1, 1, 0, 0));
        assert_eq!(refuted_by(&test_selfconjugate_bound(16, 2)), Some(Rule::SelfconjugateBound));
        assert_eq!(test_selfconjugate_bound(4, 2), Verdict::Open);
        let d = SelfConjDecomp::new(8, 2);
        assert_eq!((d.u, d.w, d.k, d.r, d.t), (8, 2, 2, 1, 1));
        assert_eq!(bound_sides(&d), (BoundCase::EvenK, -1, 16, 16));
        assert_eq!(test_selfconjugate_bound(8, 2), Verdict::Open);
    }

    #[test]
    fn prime_power_alphabet_examples() {
        assert_eq!(refuted_by(&test_prime_power_alphabet(162, 3)), Some(Rule::PrimePowerAlphabet));
        assert_eq!(test_prime_power_alphabet(54, 3), Verdict::Open);
        assert_eq!(test_prime_power_alphabet(9, 2), Verdict::Open);
    }

    #[test]
    fn odd_alphabet_examples() {
        assert_eq!(refuted_by(&test_odd_prime_alphabet_conditions(14, 14)), Some(Rule::TwoPCorollary));
        let v = test_odd_prime_alphabet_conditions(10, 5);
        assert_eq!(refuted_by(&v), Some(Rule::TwoPCorollary));
        let Verdict::NotExists { certificate: Certificate::OddPrimeAlphabet { split, failed }, .. } =
            test_odd_prime_alphabet(10, 5)
        else {
            panic!("theorem should fire on (10, 5)");
        };
        assert_eq!((split.m, split.f, failed), (2, 4, AlphabetCondition::FOdd));
        assert_eq!(test_odd_prime_alphabet_conditions(45, 5), Verdict::Open);
    }

    #[test]
    fn classify_examples() {
        assert!(matches!(classify(4, 2), Verdict::Exists { method: Rule::Construction }));
        assert!(matches!(classify(8, 2), Verdict::NotExists { .. }));
        assert_eq!(refuted_by(&classify(2, 2)), Some(Rule::PrimePowerNecessity));
        assert!(matches!(classify(1, 9), Verdict::Exists { method: Rule::Trivial }));
    }

    #[test]
    fn closure_uses_multiples() {
        let v = divisor_closure(6, 5, 10);
        if let Verdict::NotExists { certificate, .. } = &v {
            assert!(certificate.recheck(6, 5));
        }
        assert_eq!(divisor_closure(6, 60, 100), Verdict::Open);
    }

    #[test]
    fn certificates_recheck() {
        for n in 1..=60 {
            for h in 1..=60 {
                for (rule, cert) in refutations(n, h) {
                    assert!(cert.recheck(n, h), "{rule} on ({n},{h}): {cert:?}");
                }
            }
        }
    }

    #[test]
    fn rule_ids_round_trip() {
        for r in Rule::ALL {
            assert_eq!(Rule::from_id(r.id()), Some(r));
            assert_eq!(serde_json::to_string(&r).unwrap(), format!("\"{}\"", r.id()));
        }
    }
}
