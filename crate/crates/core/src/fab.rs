//! Gcd and divisibility arithmetic of the Grassmannians `Gr_{k,kl}`: transition
//! multipliers on stable homotopy, limit sequences, stable-equivalence chains
//! and finite direct limits of `ℤ →×a₁→ ℤ →×a₂→ …`.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::report::{Location, VerificationReport};

pub type Pair = (u64, u64);

/// Pairs `(k_j, l_j)` and an optional `dim X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairChain {
    pub name: String,
    pairs: Vec<Pair>,
    pub dim: Option<u64>,
}

impl PairChain {
    pub fn new(name: impl Into<String>, pairs: Vec<Pair>, dim: Option<u64>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::IllFormed("a chain needs at least one pair".into()));
        }
        if let Some((k, l)) = pairs.iter().find(|(k, l)| *k == 0 || *l == 0) {
            return Err(Error::IllFormed(format!("pair ({k},{l}) has an entry below 1")));
        }
        Ok(PairChain {
            name: name.into(),
            pairs,
            dim,
        })
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn first(&self) -> Pair {
        self.pairs[0]
    }

    pub fn last(&self) -> Pair {
        self.pairs[self.pairs.len() - 1]
    }
}

/// A subgroup of `ℚ` (or `0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitGroup {
    Trivial,
    Integers,
    /// `(1/D)ℤ` with `D >= 1`.
    CyclicFraction(BigUint),
    /// `ℤ[1/p : p ∈ S]` with `S` nonempty.
    Localization(BTreeSet<u64>),
}

impl fmt::Display for LimitGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitGroup::Trivial => f.write_str("0"),
            LimitGroup::Integers => f.write_str("Z"),
            LimitGroup::CyclicFraction(d) => write!(f, "(1/{d})Z"),
            LimitGroup::Localization(primes) => {
                let inv: Vec<String> = primes.iter().map(|p| format!("1/{p}")).collect();
                write!(f, "Z[{}]", inv.join(", "))
            }
        }
    }
}

/// `i_{kl,mn*}(γ_{k,l}) = (gcd(m,n)/gcd(k,l)) γ_{m,n}`; requires `k | m` and `l | n`.
pub fn transition_multiplier(k: u64, l: u64, m: u64, n: u64) -> Result<u64> {
    if [k, l, m, n].contains(&0) {
        return Err(Error::Divisibility(format!("({k},{l}) -> ({m},{n}) has a zero entry")));
    }
    if !u64::is_multiple_of(m, k) {
        return Err(Error::Divisibility(format!("{k} does not divide {m}")));
    }
    if !u64::is_multiple_of(n, l) {
        return Err(Error::Divisibility(format!("{l} does not divide {n}")));
    }
    Ok(m.gcd(&n) / k.gcd(&l))
}

/// `π_r(Gr_{k,kl})` in the stable range `r < 2 min(k,l)`.
pub fn stable_homotopy_group(r: u64, k: u64, l: u64) -> Result<LimitGroup> {
    if u128::from(r) >= 2 * u128::from(k.min(l)) {
        return Err(Error::OutOfStableRange { r, k, l });
    }
    Ok(if r > 2 && u64::is_multiple_of(r, 2) {
        LimitGroup::Integers
    } else {
        LimitGroup::Trivial
    })
}

fn pair(p: Pair) -> String {
    format!("({},{})", p.0, p.1)
}

/// Checks `k_j | k_{j+1}, l_j | l_{j+1}` and `gcd(k_j, l_j) = 1`; growth of
/// the entries is reported as a note only. Indices are 1-based.
pub fn validate_limit_sequence(c: &PairChain) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new(c.name.clone(), "limit-sequence", None);
    for (j, &(k, l)) in c.pairs.iter().enumerate() {
        let index = j + 1;
        if j > 0 {
            let (pk, pl) = c.pairs[j - 1];
            for (a, b) in [(pk, k), (pl, l)] {
                if b % a != 0 {
                    report.push(
                        Location::ChainIndex {
                            condition: "divisibility".into(),
                            index,
                        },
                        format!("(ii) {a} does not divide {b}"),
                    );
                }
            }
        }
        let g = k.gcd(&l);
        if g != 1 {
            report.push(
                Location::ChainIndex {
                    condition: "coprime".into(),
                    index,
                },
                format!("(iii) gcd({k},{l}) = {g}"),
            );
        }
    }
    let (first, last) = (c.first(), c.last());
    let grows = last.0 > first.0 && last.1 > first.1;
    report.note(format!(
        "advisory (i): last pair strictly exceeds first: {}",
        if grows { "yes" } else { "no" }
    ));
    if report.passed() {
        if let Ok(ms) = chain_multipliers(c) {
            let limit = finite_direct_limit(&ms);
            report.note(format!("prefix direct limit: {}", limit.group));
        }
    }
    report.timed(started)
}

/// Checks the endpoints and `gcd(t_i t_{i+1}, u_i u_{i+1}) = 1` for
/// `1 <= i < s`. The isomorphism data of a stable equivalence is not checked.
pub fn validate_stable_chain(c: &PairChain, first: Pair, last: Pair) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new(c.name.clone(), "stable-chain", None);
    for (label, want, got) in [("first", first, c.first()), ("last", last, c.last())] {
        if want != got {
            report.push(
                Location::Named(format!("{label}-endpoint")),
                format!("(i) {} != {}", pair(got), pair(want)),
            );
        }
    }
    for (i, w) in c.pairs.windows(2).enumerate() {
        let (t, u) = (
            u128::from(w[0].0) * u128::from(w[1].0),
            u128::from(w[0].1) * u128::from(w[1].1),
        );
        let g = t.gcd(&u);
        if g != 1 {
            report.push(
                Location::ChainIndex {
                    condition: "coprime".into(),
                    index: i + 1,
                },
                format!("(ii) gcd({t},{u}) = {g}"),
            );
        }
    }
    report.note("condition (2) on FAB isomorphisms is not checked");
    report.timed(started)
}

/// `gcd(km, ln) = 1`.
pub fn tensor_admissible(k: u64, l: u64, m: u64, n: u64) -> bool {
    let a = u128::from(k) * u128::from(m);
    let b = u128::from(l) * u128::from(n);
    a.gcd(&b) == 1
}

/// `gcd(k,l) = 1` and `2 min(k,l) > dim X`.
pub fn representative_exists(k: u64, l: u64, dim: u64) -> bool {
    k.gcd(&l) == 1 && 2 * u128::from(k.min(l)) > u128::from(dim)
}

/// Multipliers of consecutive pairs of a chain.
pub fn chain_multipliers(c: &PairChain) -> Result<Vec<u64>> {
    c.pairs
        .windows(2)
        .map(|w| transition_multiplier(w[0].0, w[0].1, w[1].0, w[1].1))
        .collect()
}

/// The colimit of a finite chain, with the primes that become invertible if
/// the same multipliers keep recurring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectLimit {
    pub group: LimitGroup,
    /// Primes dividing the product of the multipliers: an invariant of the
    /// prefix, not of an infinite limit.
    pub inverted_primes: BTreeSet<u64>,
}

impl DirectLimit {
    /// `ℤ[1/p]` over the inverted primes, or `ℤ` if there are none.
    pub fn localization(&self) -> LimitGroup {
        if self.inverted_primes.is_empty() {
            LimitGroup::Integers
        } else {
            LimitGroup::Localization(self.inverted_primes.clone())
        }
    }
}

/// Colimit of `ℤ →×a₁→ ℤ → … →×a_n→ ℤ`, identified with `(1/∏aᵢ)ℤ ⊂ ℚ`.
pub fn finite_direct_limit(multipliers: &[u64]) -> DirectLimit {
    let mut product = BigUint::one();
    let mut primes = BTreeSet::new();
    for &a in multipliers {
        product *= a;
        primes.extend(num_prime::nt_funcs::factorize64(a).into_keys().filter(|p| *p > 1));
    }
    let group = if product.is_one() {
        LimitGroup::Integers
    } else {
        LimitGroup::CyclicFraction(product)
    };
    DirectLimit {
        group,
        inverted_primes: primes,
    }
}
