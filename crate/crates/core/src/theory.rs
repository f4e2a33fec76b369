//! Limiting values the simulations are compared against.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pgroups::{enumerate_subgroups, AbelianPGroup, Partition};

/// Parameters of the fluctuation law: prime `p`, offset `ζ ∈ [0,1)`, dimension `d`,
/// and the derived `χ = p^{-ζ}/(p-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluctuationParams {
    p: u64,
    zeta: f64,
    chi: f64,
    d: usize,
}

impl FluctuationParams {
    pub fn new(p: u64, zeta: f64, d: usize) -> Result<Self> {
        if !crate::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(0.0..1.0).contains(&zeta) {
            return Err(Error::Config(format!("zeta must lie in [0, 1), got {zeta}")));
        }
        if d == 0 {
            return Err(Error::Config("d must be positive".into()));
        }
        let chi = (p as f64).powf(-zeta) / (p - 1) as f64;
        Ok(FluctuationParams { p, zeta, chi, d })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

fn factorial(n: u32) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// `c(G, ℓ(G)) / ℓ(G)!`, the limit of `E|Hom(cok, G)| / k^{ℓ(G)}`.
pub fn limit_rescaled_hom_moment(g: &AbelianPGroup) -> Result<BigRational> {
    let ell = g.ell();
    let c = enumerate_subgroups(g)?.chain_counts().swap_remove(ell as usize);
    Ok(BigRational::new(BigInt::from(c), BigInt::from(factorial(ell))))
}

/// A moment `E p^{⟨L, λ⟩}` of the fluctuation law, split into an exact rational part
/// and the real factor `((p-1)χ)^{|λ|} = p^{-ζ|λ|}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LMoment {
    pub lambda: Partition,
    #[serde(with = "rational_string")]
    pub exact: BigRational,
    pub scale: f64,
}

impl LMoment {
    pub fn value(&self) -> f64 {
        self.exact.to_f64().unwrap_or(f64::NAN) * self.scale
    }
}

/// `((p-1)χ)^{|λ|} / |λ|! · c(G_{λ'}, |λ|)`.
pub fn l_moment(lambda: &Partition, params: &FluctuationParams) -> Result<LMoment> {
    if lambda.len() > params.d {
        return Err(Error::TooManyParts { lambda: lambda.to_string(), d: params.d });
    }
    let n = lambda.size();
    let dual = AbelianPGroup::new(params.p, lambda.conjugate())?;
    let c = enumerate_subgroups(&dual)?.chain_counts().swap_remove(n as usize);
    let exact = BigRational::new(BigInt::from(c), BigInt::from(factorial(n)));
    let scale = if params.zeta == 0.0 { 1.0 } else { (params.p as f64).powf(-params.zeta * f64::from(n)) };
    Ok(LMoment { lambda: lambda.clone(), exact, scale })
}

/// Exact `log_p k` when `k` is a power of `p`.
pub fn exact_log(k: u64, p: u64) -> Option<u32> {
    let mut x = k;
    let mut m = 0;
    while x > 1 {
        if !x.is_multiple_of(p) {
            return None;
        }
        x /= p;
        m += 1;
    }
    (x == 1).then_some(m)
}

/// Nearest integer to `log_p k + ζ`, ties away from zero.
pub fn centering(k: u64, params: &FluctuationParams) -> i64 {
    assert!(k >= 1, "k must be positive");
    match exact_log(k, params.p) {
        Some(m) => i64::from(m) + params.zeta.round() as i64,
        None => ((k as f64).ln() / (params.p as f64).ln() + params.zeta).round() as i64,
    }
}

/// `(rank(p^{i-1}Γ) - centering)_{i=1..d}`, weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CenteredRankVector(pub Vec<i64>);

impl CenteredRankVector {
    pub fn values(&self) -> &[i64] {
        &self.0
    }

    /// `⟨self, λ⟩`, treating missing parts as zero.
    pub fn pairing(&self, lambda: &Partition) -> i64 {
        self.0.iter().enumerate().map(|(i, &x)| x * i64::from(lambda.part(i))).sum()
    }
}

impl std::fmt::Display for CenteredRankVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Centered conjugate of the Sylow type. Trials with free rank carry no finite
/// Sylow subgroup and are refused.
pub fn centered_rank_vector(
    lambda: &Partition,
    free_rank: usize,
    k: u64,
    params: &FluctuationParams,
) -> Result<CenteredRankVector> {
    if free_rank > 0 {
        return Err(Error::FreeRank(free_rank));
    }
    let shift = centering(k, params);
    Ok(CenteredRankVector(
        lambda.conjugate_prefix(params.d).into_iter().map(|r| i64::from(r) - shift).collect(),
    ))
}

/// `p^x` as a float for a possibly negative exponent.
pub fn p_power(p: u64, x: i64) -> f64 {
    (p as f64).powi(x as i32)
}

/// `BigRational` values written as `"num/den"` strings.
pub(crate) mod rational_string {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad rational {s:?}")))
    }
}
