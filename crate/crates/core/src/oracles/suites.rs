use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::{
    count_w0_sequences, count_w0_sequences_brute_force, hom_count_brute_force, verify_balanced_sums,
    verify_chain_claim, verify_cok_identity, verify_moment_identity, verify_residual_bound, verify_w0_decomposition,
    w0_count_target, w0_sum_by_enumeration, EntryLaw, FiniteSupportMatrixLaw, W0BlockLaw, ENUMERATION_LIMIT,
};
use crate::error::{Error, Result};
use crate::exact_linalg::IntMatrix;
use crate::pgroups::{
    chain_counts_by_type, enumerate_subgroups, hom_count, partitions_up_to, AbelianPGroup, Partition,
};

/// Seed for the randomized parts of the suites.
pub const SUITE_SEED: u64 = 0x5eed_c0c0;

/// Random subgroup sequences checked by the chain suite.
pub const CHAIN_SEQUENCES: u64 = 10_000;

/// Random factor lists checked by the cok suite.
pub const COK_INSTANCES: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identity,
    Balanced,
    Cok,
    Chains,
    Decomposition,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Identity, Suite::Balanced, Suite::Cok, Suite::Chains, Suite::Decomposition];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identity => "identity",
            Suite::Balanced => "balanced",
            Suite::Cok => "cok",
            Suite::Chains => "chains",
            Suite::Decomposition => "decomposition",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

/// One named statement checked over `total` instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: u64,
    pub total: u64,
    pub detail: String,
}

impl CheckOutcome {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {} ({}/{})", self.name, self.passed, self.total)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(CheckOutcome::ok)
    }
}

/// Counts passes and keeps the first few failure descriptions.
struct Tally {
    name: String,
    passed: u64,
    total: u64,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally { name: name.into(), passed: 0, total: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    fn note(&mut self, note: String) {
        self.notes.push(note);
    }

    fn finish(self) -> CheckOutcome {
        let mut parts = self.notes;
        if !self.failures.is_empty() {
            parts.push(format!("failures: {}", self.failures.join("; ")));
        }
        CheckOutcome { name: self.name, passed: self.passed, total: self.total, detail: parts.join("; ") }
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteOutcome> {
    let checks = match suite {
        Suite::Identity => identity_checks()?,
        Suite::Balanced => balanced_checks()?,
        Suite::Cok => cok_checks()?,
        Suite::Chains => chain_checks()?,
        Suite::Decomposition => decomposition_checks()?,
    };
    Ok(SuiteOutcome { suite, checks })
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn group(p: u64, parts: &[u32]) -> Result<AbelianPGroup> {
    AbelianPGroup::new(p, Partition::new(parts.to_vec())?)
}

/// Entry laws with at most three support points.
fn small_laws() -> Result<Vec<(&'static str, EntryLaw)>> {
    Ok(vec![
        ("uniform{0,1}", EntryLaw::uniform(&[0, 1])),
        ("uniform{0,1,2}", EntryLaw::uniform(&[0, 1, 2])),
        ("{-1:1/2,0:1/4,3:1/4}", EntryLaw::new(vec![(-1, q(1, 2)), (0, q(1, 4)), (3, q(1, 4))])?),
        ("bernoulli(1/3)", EntryLaw::bernoulli(1, 3)?),
        ("uniform{0,2,4}", EntryLaw::uniform(&[0, 2, 4])),
        ("constant 1", EntryLaw::constant(1)),
    ])
}

fn identity_checks() -> Result<Vec<CheckOutcome>> {
    let mut tally = Tally::new("E|Hom(cok M, G)| = sum over g in G^n of P(Mg = 0), exact");
    let groups = [group(2, &[1])?, group(3, &[1])?, group(2, &[1, 1])?, group(2, &[2])?];
    let laws = small_laws()?;
    for g in &groups {
        for n in 1..=2 {
            for (name, law) in &laws {
                let law_m = FiniteSupportMatrixLaw::iid(n, n, law.clone())?;
                let r = verify_moment_identity(&law_m, g)?;
                tally.record(r.equal, || format!("G={g}, n={n}, {name}: {} vs {}", r.lhs, r.rhs));
            }
            // Entries with different laws.
            let mixed: Vec<EntryLaw> = (0..n * n).map(|i| laws[i % laws.len()].1.clone()).collect();
            let r = verify_moment_identity(&FiniteSupportMatrixLaw::new(n, n, mixed)?, g)?;
            tally.record(r.equal, || format!("G={g}, n={n}, mixed laws: {} vs {}", r.lhs, r.rhs));
        }
    }
    let single = verify_moment_identity(&FiniteSupportMatrixLaw::iid(1, 1, EntryLaw::uniform(&[0, 1]))?, &groups[0])?;
    let mut example = Tally::new("n=1, uniform{0,1}, G=Z/2 gives 3/2 on both sides");
    example.record(single.equal && single.lhs == q(3, 2), || format!("{} vs {}", single.lhs, single.rhs));
    Ok(vec![tally.finish(), example.finish()])
}

fn balanced_checks() -> Result<Vec<CheckOutcome>> {
    let z2 = group(2, &[1])?;
    let mut uniform = Tally::new("uniform mod-2 entries: S_min = S_max = 1 - 2^-n");
    for n in 1..=8 {
        let s = verify_balanced_sums(&FiniteSupportMatrixLaw::iid(n, n, EntryLaw::uniform(&[0, 1]))?, &z2)?;
        let expected = BigRational::one() - q(1, 1i64 << n);
        uniform.record(s.s_min == expected && s.s_max == expected, || format!("n={n}: {} / {}", s.s_min, s.s_max));
    }

    let mut ordered = Tally::new("S_min <= S_max");
    let laws = [
        ("uniform{0,1}", EntryLaw::uniform(&[0, 1])),
        ("bernoulli(3/10)", EntryLaw::bernoulli(3, 10)?),
        ("uniform{0,1,2}", EntryLaw::uniform(&[0, 1, 2])),
    ];
    for g in [z2.clone(), group(3, &[1])?, group(2, &[2])?] {
        for (name, law) in &laws {
            for n in 1..=4 {
                let s = verify_balanced_sums(&FiniteSupportMatrixLaw::iid(n, n, law.clone())?, &g)?;
                ordered.record(s.s_min <= s.s_max, || format!("G={g}, n={n}, {name}"));
            }
        }
    }

    let mut trend = Tally::new("Bernoulli(3/10) over Z/2: |S_max - 1| shrinks over n = 6, 8, 10");
    let mut gaps = Vec::new();
    for n in [4, 6, 8, 10] {
        let s = verify_balanced_sums(&FiniteSupportMatrixLaw::iid(n, n, EntryLaw::bernoulli(3, 10)?)?, &z2)?;
        let gap = num_traits::Signed::abs(&(s.s_max - BigRational::one()));
        gaps.push((n, gap));
    }
    for w in gaps[1..].windows(2) {
        trend.record(w[1].1 < w[0].1, || format!("n={} to n={}", w[0].0, w[1].0));
    }
    trend.note(format!(
        "gaps {}",
        gaps.iter().map(|(n, g)| format!("n={n}: {:.4}", g.to_f64().unwrap_or(f64::NAN))).collect::<Vec<_>>().join(", ")
    ));

    Ok(vec![uniform.finish(), ordered.finish(), trend.finish(), residual_check()?])
}

fn residual_check() -> Result<CheckOutcome> {
    let mut tally = Tally::new("P(f + Mg in G_0^m) <= (1 - eps)^m with certified eps");
    let laws = [
        EntryLaw::uniform(&[0, 1]),
        EntryLaw::uniform(&[0, 1, 2, 3]),
        EntryLaw::bernoulli(3, 10)?,
        EntryLaw::uniform(&[0, 1, 2]),
    ];
    for g in [group(2, &[1])?, group(2, &[2])?, group(2, &[1, 1])?, group(3, &[1])?] {
        let lattice = enumerate_subgroups(&g)?;
        let table = lattice.table();
        for sub in &lattice.subgroups()[..lattice.len() - 1] {
            for n in 1..=2 {
                for m in 0..=2 {
                    super::law::for_each_vector(table.order(), n, |gv| {
                        if table.generated(gv).is_subgroup_of(sub) {
                            return;
                        }
                        super::law::for_each_vector(table.order(), m, |f| {
                            for law in &laws {
                                match verify_residual_bound(law, table, sub, gv, f) {
                                    Ok(r) => tally.record(r.holds(), || {
                                        format!("G={g}, |G_0|={}, g={gv:?}, f={f:?}: {} > {}", sub.order(), r.probability, r.bound)
                                    }),
                                    Err(e) => tally.record(false, || e.to_string()),
                                }
                            }
                        });
                    });
                }
            }
        }
    }
    Ok(tally.finish())
}

fn cok_checks() -> Result<Vec<CheckOutcome>> {
    let mut examples = Tally::new("cok of bidiagonal embedding equals cok of A_1...A_k: worked examples");
    let two = IntMatrix::from_rows(&[[2]])?;
    let three = IntMatrix::from_rows(&[[3]])?;
    examples.record(verify_cok_identity(&[two, three])?, || "[(2),(3)]".into());
    examples.record(verify_cok_identity(&[IntMatrix::identity(2), IntMatrix::identity(2)])?, || "[I, I]".into());

    let mut random = Tally::new("cok of bidiagonal embedding equals cok of A_1...A_k: random n<=3, k<=4, entries in [-5,5]");
    let mut rng = ChaCha20Rng::seed_from_u64(SUITE_SEED);
    for _ in 0..COK_INSTANCES {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=4);
        let factors: Vec<IntMatrix> = (0..k)
            .map(|_| {
                let e: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-5..=5)).collect();
                IntMatrix::from_i64(n, n, &e)
            })
            .collect::<Result<_>>()?;
        let ok = verify_cok_identity(&factors)?;
        random.record(ok, || format!("{factors:?}"));
    }
    Ok(vec![examples.finish(), random.finish()])
}

/// Every abelian p-group of order at most `max_order`, trivial group once.
fn groups_up_to(max_order: u64) -> Result<Vec<AbelianPGroup>> {
    let mut out = vec![AbelianPGroup::trivial(2)?];
    for p in (2..=max_order).filter(|&p| crate::is_prime(p)) {
        let max_size = (1..).take_while(|&a| p.pow(a) <= max_order).last().unwrap_or(0);
        for lambda in partitions_up_to(max_size, max_size as usize) {
            if !lambda.is_empty() {
                out.push(AbelianPGroup::new(p, lambda)?);
            }
        }
    }
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn chain_checks() -> Result<Vec<CheckOutcome>> {
    let mut basics = Tally::new("c(Z/2+Z/2, 2) = 3 and c(G, 0) = 1");
    let v = group(2, &[1, 1])?;
    basics.record(enumerate_subgroups(&v)?.chain_counts()[2] == BigUint::from(3u8), || "c(Z/2+Z/2,2)".into());
    for g in groups_up_to(81)? {
        let c = chain_counts_by_type(g.lambda(), g.p());
        basics.record(c[0].is_one(), || format!("c({g},0)"));
    }

    let mut agree = Tally::new("chain counts from the subgroup lattice equal chain counts by subgroup type");
    for p in [2, 3] {
        for lambda in partitions_up_to(4, 4) {
            let g = AbelianPGroup::new(p, lambda.clone())?;
            let by_lattice = enumerate_subgroups(&g)?.chain_counts();
            let by_type = chain_counts_by_type(&lambda, p);
            agree.record(by_lattice == by_type, || format!("{g}: {by_lattice:?} vs {by_type:?}"));
        }
    }

    let mut homs = Tally::new("|Hom(G_lambda, G_mu)| = p^(sum min(lambda_i, mu_j)) against brute force");
    for p in [2, 3] {
        for lambda in partitions_up_to(3, 3) {
            for mu in partitions_up_to(3, 3) {
                let brute = hom_count_brute_force(&lambda, &mu, p)?;
                homs.record(brute == hom_count(&lambda, &mu, p), || format!("p={p}, {lambda} -> {mu}"));
            }
        }
    }

    let mut counts = Tally::new("|{H in Sg(G)^k : w(H) = 0, t(H) = i}| = c(G,i) C(k,i), all |G| <= 16, k <= 6");
    for g in groups_up_to(16)? {
        let lattice = enumerate_subgroups(&g)?;
        for k in 1..=6usize {
            for i in 0..=(g.ell() as usize + 1) {
                let target = w0_count_target(&g, k, i);
                let dp = count_w0_sequences(&lattice, k, i);
                counts.record(dp == target, || format!("{g}, k={k}, i={i}: {dp} vs {target}"));
                if (lattice.len() as u64).checked_pow(k as u32).is_some_and(|s| s <= ENUMERATION_LIMIT / 10) {
                    let brute = BigUint::from(count_w0_sequences_brute_force(&lattice, k, i)?);
                    counts.record(brute == target, || format!("{g}, k={k}, i={i}: brute {brute} vs {target}"));
                }
            }
        }
    }

    let mut claim = Tally::new("t(H) <= l(G)(1 + w(H)) on random sequences in Sg(Z/4+Z/2)^10");
    let g = group(2, &[2, 1])?;
    let lattice = enumerate_subgroups(&g)?;
    let mut rng = ChaCha20Rng::seed_from_u64(SUITE_SEED ^ 1);
    for _ in 0..CHAIN_SEQUENCES {
        let seq: Vec<_> = (0..10).map(|_| lattice.subgroups()[rng.gen_range(0..lattice.len())].clone()).collect();
        claim.record(verify_chain_claim(&seq, g.ell()), || format!("{:?}", super::sequence_wt(&seq)));
    }
    Ok(vec![basics.finish(), agree.finish(), homs.finish(), counts.finish(), claim.finish()])
}

fn decomposition_checks() -> Result<Vec<CheckOutcome>> {
    let uniform = EntryLaw::uniform(&[0, 1]);
    let mut b3 = IntMatrix::zeros(3, 3);
    b3.set(2, 0, BigInt::from(1));
    let cases = vec![
        (group(2, &[1])?, W0BlockLaw::without_b(vec![1, 1], uniform.clone())?),
        (group(2, &[1])?, W0BlockLaw::without_b(vec![1, 1, 1], uniform.clone())?),
        (group(2, &[1])?, W0BlockLaw::new(vec![1, 1, 1], uniform.clone(), b3)?),
        (group(2, &[1])?, W0BlockLaw::without_b(vec![2, 1], EntryLaw::bernoulli(1, 3)?)?),
        (group(3, &[1])?, W0BlockLaw::without_b(vec![1, 1], EntryLaw::uniform(&[0, 1, 2]))?),
        (group(2, &[2])?, W0BlockLaw::without_b(vec![1, 1], EntryLaw::uniform(&[0, 1, 2, 3]))?),
        (group(2, &[1, 1])?, W0BlockLaw::without_b(vec![1, 1], uniform)?),
    ];
    let mut counts = Tally::new("|{H : w = 0, t = i}| = c(G,i) C(k,i) for the tiny block laws");
    let mut sums = Tally::new("w = 0, t = i slice of sum P(Cg = 0): row factorization equals full enumeration");
    for (g, law) in &cases {
        for i in 0..=(g.ell() as usize).min(law.k()) {
            let d = verify_w0_decomposition(law, g, i)?;
            counts.record(d.count_matches(), || format!("{g}, blocks {:?}, i={i}", law.block_sizes()));
            let brute = w0_sum_by_enumeration(law, g, i)?;
            sums.record(brute == d.sum, || format!("{g}, blocks {:?}, i={i}: {} vs {brute}", law.block_sizes(), d.sum));
            sums.note(format!(
                "{g} blocks {:?} i={i}: sum {} vs c(G,i)C(k,i) = {}",
                law.block_sizes(),
                d.sum,
                d.target
            ));
        }
    }
    Ok(vec![counts.finish(), sums.finish()])
}

/// Exact `S_max` for Bernoulli(`num/den`) entries over `Z/2`, by the closed form
/// `Σ_w C(n,w) ((1 + (1-2q)^w) / 2)^n`.
pub fn bernoulli_s_max_closed_form(n: usize, num: i64, den: i64) -> BigRational {
    let bias = BigRational::one() - q(2 * num, den);
    let half = q(1, 2);
    (1..=n)
        .map(|w| {
            let c = BigRational::from_integer(BigInt::from(binomial(n as u64, w as u64)));
            c * Pow::pow((BigRational::one() + Pow::pow(&bias, w)) * &half, n)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_group_list() {
        let orders: Vec<u64> = groups_up_to(16).unwrap().iter().map(|g| g.order().to_u64().unwrap()).collect();
        // 1; Z/2 types of size 1..4: 1+2+3+5; Z/3 sizes 1..2: 1+2; 5, 7, 11, 13.
        assert_eq!(orders.len(), 1 + 11 + 3 + 4);
        assert!(orders.iter().all(|&o| o <= 16));
    }

    #[test]
    fn closed_form_matches_oracle() {
        let z2 = AbelianPGroup::cyclic(2, 1).unwrap();
        for n in [2, 5] {
            let law = FiniteSupportMatrixLaw::iid(n, n, EntryLaw::bernoulli(3, 10).unwrap()).unwrap();
            assert_eq!(verify_balanced_sums(&law, &z2).unwrap().s_max, bernoulli_s_max_closed_form(n, 3, 10));
        }
    }
}
