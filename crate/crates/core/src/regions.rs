//! Closed-form sum SDoF, the three converse bounds, case regions, and the
//! jamming-dimension planner behind each achievability construction.
//!
//! All arithmetic here is exact. Configurations are canonicalized
//! (`m1 >= m2`) before classification.
//!
//! Boundary configurations with `M1 = N` are served by the `M1 < N`
//! constructions (no nullspace, intersection of dimension `M - N`), and
//! `M2 = N` by the `M2 >= N` construction with an empty nullspace part for
//! transmitter two. In both cases `max(Mi, N)` is continuous across the
//! boundary, so the case formula still agrees with the converse.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AntennaConfig, ModelError, Validity};

/// Exact SDoF values; every value produced here has denominator 1 or 2.
pub type Rational = Rational64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("degenerate configuration {0}: N_E >= M1 + M2, SDoF is zero")]
    DegenerateConfig(AntennaConfig),
}

/// Which of the three regions a case belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    C1,
    C2,
    C3,
}

/// One achievability construction per variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    /// `M <= N`: random jamming only.
    C1MleN,
    /// `M1 < N`, `N_E >= 2(M - N)`: aligned plus random.
    C1M1ltNBigNe,
    /// `M1 > N`, `M2 < N`, `N_E >= M1 - N + 2 M2`: nullspace, aligned and random.
    C1M1gtNM2ltNBigNe,
    /// `M1 < N`, `N_E < 2(M - N)`: aligned only.
    C2M1ltN,
    /// `M1 > N`, `M2 < N`, `M1 - N <= N_E < M1 - N + 2 M2`: nullspace plus aligned.
    C2M1gtNM2ltN,
    /// `M1 > N`, `M2 >= N`, `N_E >= M - 2N`: nullspace plus aligned on both.
    C2M1gtNM2geN,
    /// `N_E < [M1 - N]+ + [M2 - N]+`: nullspace only.
    C3,
}

impl CaseId {
    pub const ALL: [CaseId; 7] = [
        CaseId::C1MleN,
        CaseId::C1M1ltNBigNe,
        CaseId::C1M1gtNM2ltNBigNe,
        CaseId::C2M1ltN,
        CaseId::C2M1gtNM2ltN,
        CaseId::C2M1gtNM2geN,
        CaseId::C3,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CaseId::C1MleN => "C1_MleN",
            CaseId::C1M1ltNBigNe => "C1_M1ltN_bigNE",
            CaseId::C1M1gtNM2ltNBigNe => "C1_M1gtN_M2ltN_bigNE",
            CaseId::C2M1ltN => "C2_M1ltN",
            CaseId::C2M1gtNM2ltN => "C2_M1gtN_M2ltN",
            CaseId::C2M1gtNM2geN => "C2_M1gtN_M2geN",
            CaseId::C3 => "C3",
        }
    }

    pub fn region(&self) -> Region {
        match self {
            CaseId::C1MleN | CaseId::C1M1ltNBigNe | CaseId::C1M1gtNM2ltNBigNe => Region::C1,
            CaseId::C2M1ltN | CaseId::C2M1gtNM2ltN | CaseId::C2M1gtNM2geN => Region::C2,
            CaseId::C3 => Region::C3,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::C1 => "C1",
            Region::C2 => "C2",
            Region::C3 => "C3",
        };
        f.write_str(s)
    }
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

fn ints(cfg: &AntennaConfig) -> (i64, i64, i64, i64) {
    (cfg.m1 as i64, cfg.m2 as i64, cfg.n as i64, cfg.ne as i64)
}

fn checked_canonical(cfg: &AntennaConfig) -> Result<AntennaConfig, RegionError> {
    let (c, _) = cfg.canonical();
    match c.validate()? {
        Validity::Degenerate => Err(RegionError::DegenerateConfig(c)),
        Validity::Ok => Ok(c),
    }
}

pub fn classify_case(cfg: &AntennaConfig) -> Result<CaseId, RegionError> {
    let c = checked_canonical(cfg)?;
    let (m1, m2, n, ne) = ints(&c);
    let m = m1 + m2;
    let case = if m <= n {
        CaseId::C1MleN
    } else if m1 <= n {
        if ne >= 2 * (m - n) {
            CaseId::C1M1ltNBigNe
        } else {
            CaseId::C2M1ltN
        }
    } else if m2 < n {
        if ne < m1 - n {
            CaseId::C3
        } else if ne < m1 - n + 2 * m2 {
            CaseId::C2M1gtNM2ltN
        } else {
            CaseId::C1M1gtNM2ltNBigNe
        }
    } else if ne < pos(m1 - n) + pos(m2 - n) {
        CaseId::C3
    } else {
        CaseId::C2M1gtNM2geN
    };
    Ok(case)
}

/// Sum SDoF from the case formula of the region the configuration falls in;
/// zero for degenerate configurations.
pub fn sum_sdof(cfg: &AntennaConfig) -> Result<Rational, RegionError> {
    let case = match classify_case(cfg) {
        Ok(c) => c,
        Err(RegionError::DegenerateConfig(_)) => return Ok(Rational::from_integer(0)),
        Err(e) => return Err(e),
    };
    let (c, _) = cfg.canonical();
    let (m1, m2, n, ne) = ints(&c);
    Ok(match case.region() {
        Region::C1 => Rational::from_integer(m1 + m2 - ne),
        Region::C2 => Rational::new(m1.max(n) + m2.max(n) - ne, 2),
        Region::C3 => Rational::from_integer(n),
    })
}

/// The three converse terms: receiver antennas, cooperative bound
/// `M1 + M2 - N_E`, and the Z-channel bound `(max(M1,N) + max(M2,N) - N_E)/2`.
pub fn upper_bound_terms(
    cfg: &AntennaConfig,
) -> Result<(Rational, Rational, Rational), RegionError> {
    cfg.validate()?;
    let (m1, m2, n, ne) = ints(cfg);
    Ok((
        Rational::from_integer(n),
        Rational::from_integer(m1 + m2 - ne),
        Rational::new(m1.max(n) + m2.max(n) - ne, 2),
    ))
}

/// Smallest of the three converse terms.
pub fn upper_bound(cfg: &AntennaConfig) -> Result<Rational, RegionError> {
    let (a, b, c) = upper_bound_terms(cfg)?;
    Ok(a.min(b).min(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JamMethod {
    /// Random directions; occupies receiver dimensions one for one.
    Random,
    /// Steered into the intersection of both transmitters' receive spaces;
    /// the two transmitters share receiver dimensions.
    Aligned,
    /// Inside the nullspace of the transmitter's own legitimate channel;
    /// invisible at the receiver.
    Nullspace,
}

impl fmt::Display for JamMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            JamMethod::Random => "random",
            JamMethod::Aligned => "aligned",
            JamMethod::Nullspace => "nullspace",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JamPart {
    pub method: JamMethod,
    pub dims: usize,
}

/// Jamming budgets and stream counts per extended block of `extension`
/// channel uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JammingPlan {
    /// Canonical configuration the plan was made for.
    pub config: AntennaConfig,
    pub case: CaseId,
    pub extension: usize,
    pub tx1: Vec<JamPart>,
    pub tx2: Vec<JamPart>,
    /// Receiver dimensions occupied by jamming.
    pub j_s: usize,
    pub d1: usize,
    pub d2: usize,
}

impl JammingPlan {
    pub fn parts(&self, tx: usize) -> &[JamPart] {
        match tx {
            1 => &self.tx1,
            2 => &self.tx2,
            _ => panic!("transmitter index must be 1 or 2, got {tx}"),
        }
    }

    pub fn parts_mut(&mut self, tx: usize) -> &mut Vec<JamPart> {
        match tx {
            1 => &mut self.tx1,
            2 => &mut self.tx2,
            _ => panic!("transmitter index must be 1 or 2, got {tx}"),
        }
    }

    /// Total jamming columns of one transmitter.
    pub fn jam_dims(&self, tx: usize) -> usize {
        self.parts(tx).iter().map(|p| p.dims).sum()
    }

    pub fn method_dims(&self, tx: usize, method: JamMethod) -> usize {
        self.parts(tx).iter().filter(|p| p.method == method).map(|p| p.dims).sum()
    }

    pub fn total_jam(&self) -> usize {
        self.jam_dims(1) + self.jam_dims(2)
    }

    pub fn streams(&self, tx: usize) -> usize {
        match tx {
            1 => self.d1,
            2 => self.d2,
            _ => panic!("transmitter index must be 1 or 2, got {tx}"),
        }
    }

    pub fn total_streams(&self) -> usize {
        self.d1 + self.d2
    }

    /// Transmit input dimension of one transmitter over the block.
    pub fn input_dims(&self, tx: usize) -> usize {
        let m = if tx == 1 { self.config.m1 } else { self.config.m2 };
        self.extension * m
    }

    /// Jamming-free receiver dimensions, `extension * N - J_s`.
    pub fn receiver_free_dims(&self) -> i64 {
        (self.extension * self.config.n) as i64 - self.j_s as i64
    }

    /// Receiver dimensions the plan's parts occupy: every random column
    /// takes one, every aligned pair shares one, nullspace columns take none.
    pub fn implied_receiver_occupancy(&self) -> usize {
        let random = self.method_dims(1, JamMethod::Random) + self.method_dims(2, JamMethod::Random);
        let aligned = self.method_dims(1, JamMethod::Aligned).max(self.method_dims(2, JamMethod::Aligned));
        random + aligned
    }
}

fn push(parts: &mut Vec<JamPart>, method: JamMethod, dims: i64) {
    if dims > 0 {
        parts.push(JamPart { method, dims: dims as usize });
    }
}

/// Builds the jamming plan of the achievability construction for `cfg`.
///
/// Odd aligned shares are realized by a two-use time extension of the
/// constant legitimate channel, so every count in the plan is an integer
/// per extended block.
pub fn jamming_plan(cfg: &AntennaConfig) -> Result<JammingPlan, RegionError> {
    let case = classify_case(cfg)?;
    let c = checked_canonical(cfg)?;
    let (m1, m2, n, ne) = ints(&c);
    let m = m1 + m2;

    let mut tx1 = Vec::new();
    let mut tx2 = Vec::new();
    let extension: i64;
    let j_s: i64;
    let d_total: i64;

    match case {
        CaseId::C1MleN => {
            extension = 1;
            let r1 = ne.min(m1);
            push(&mut tx1, JamMethod::Random, r1);
            push(&mut tx2, JamMethod::Random, ne - r1);
            j_s = ne;
            d_total = m - ne;
        }
        CaseId::C1M1ltNBigNe => {
            extension = 1;
            let shared = m - n;
            let random = ne - 2 * shared;
            let r1 = random.min(m1 - shared);
            push(&mut tx1, JamMethod::Aligned, shared);
            push(&mut tx1, JamMethod::Random, r1);
            push(&mut tx2, JamMethod::Aligned, shared);
            push(&mut tx2, JamMethod::Random, random - r1);
            j_s = shared + random;
            d_total = m - ne;
        }
        CaseId::C2M1ltN => {
            extension = if ne % 2 == 0 { 1 } else { 2 };
            let aligned = extension * ne / 2;
            push(&mut tx1, JamMethod::Aligned, aligned);
            push(&mut tx2, JamMethod::Aligned, aligned);
            j_s = aligned;
            d_total = extension * n - j_s;
        }
        CaseId::C3 => {
            extension = 1;
            let z1 = ne.min(pos(m1 - n));
            push(&mut tx1, JamMethod::Nullspace, z1);
            push(&mut tx2, JamMethod::Nullspace, ne - z1);
            j_s = 0;
            d_total = n;
        }
        CaseId::C1M1gtNM2ltNBigNe => {
            extension = 1;
            let null1 = m1 - n;
            let random = ne - null1 - 2 * m2;
            push(&mut tx1, JamMethod::Nullspace, null1);
            push(&mut tx1, JamMethod::Aligned, m2);
            push(&mut tx1, JamMethod::Random, random);
            push(&mut tx2, JamMethod::Aligned, m2);
            j_s = m2 + random;
            d_total = m - ne;
        }
        CaseId::C2M1gtNM2ltN => {
            let rest = ne - (m1 - n);
            extension = if rest % 2 == 0 { 1 } else { 2 };
            let aligned = extension * rest / 2;
            push(&mut tx1, JamMethod::Nullspace, extension * (m1 - n));
            push(&mut tx1, JamMethod::Aligned, aligned);
            push(&mut tx2, JamMethod::Aligned, aligned);
            j_s = aligned;
            d_total = extension * n - j_s;
        }
        CaseId::C2M1gtNM2geN => {
            let rest = ne - (m - 2 * n);
            extension = if rest % 2 == 0 { 1 } else { 2 };
            let aligned = extension * rest / 2;
            push(&mut tx1, JamMethod::Nullspace, extension * (m1 - n));
            push(&mut tx1, JamMethod::Aligned, aligned);
            push(&mut tx2, JamMethod::Nullspace, extension * (m2 - n));
            push(&mut tx2, JamMethod::Aligned, aligned);
            j_s = aligned;
            d_total = extension * n - j_s;
        }
    }

    let jam1: i64 = tx1.iter().map(|p| p.dims as i64).sum();
    let d1 = (extension * m1 - jam1).min(d_total);
    let d2 = d_total - d1;
    Ok(JammingPlan {
        config: c,
        case,
        extension: extension as usize,
        tx1,
        tx2,
        j_s: j_s as usize,
        d1: d1 as usize,
        d2: d2 as usize,
    })
}

/// Exact dimension-counting check of a plan: the jamming budget covers
/// `extension * N_E` eavesdropper dimensions, the stream count equals
/// `extension * D_s`, each transmitter fits its streams and jamming, and the
/// receiver keeps at least `d1 + d2` jamming-free dimensions.
pub fn verify_plan_arithmetic(cfg: &AntennaConfig, plan: &JammingPlan) -> bool {
    let (c, _) = cfg.canonical();
    if plan.config != c || !matches!(plan.extension, 1 | 2) {
        return false;
    }
    let Ok(ds) = sum_sdof(&c) else { return false };
    let e = plan.extension as i64;
    let target = ds * Rational::from_integer(e);
    let d = plan.total_streams() as i64;
    let budget_ok = plan.total_jam() == plan.extension * c.ne;
    let streams_ok = target.is_integer() && target.to_integer() == d;
    let receiver_ok = plan.receiver_free_dims() >= d;
    let capacity_ok = (1..=2).all(|tx| plan.streams(tx) + plan.jam_dims(tx) <= plan.input_dims(tx));
    budget_ok && streams_ok && receiver_ok && capacity_ok
}

/// Geometric feasibility of the parts for generic channels: nullspace parts
/// fit inside `Null(H_i)`, aligned parts are paired and fit inside the
/// generic intersection of the two receive spaces, and `J_s` matches the
/// occupancy the parts imply.
pub fn plan_is_feasible(plan: &JammingPlan) -> bool {
    let c = plan.config;
    let e = plan.extension;
    let null_ok = plan.method_dims(1, JamMethod::Nullspace) <= e * c.m1.saturating_sub(c.n)
        && plan.method_dims(2, JamMethod::Nullspace) <= e * c.m2.saturating_sub(c.n);
    let a1 = plan.method_dims(1, JamMethod::Aligned);
    let a2 = plan.method_dims(2, JamMethod::Aligned);
    let intersection = (c.m1.min(c.n) + c.m2.min(c.n)).saturating_sub(c.n);
    let aligned_ok = a1 == a2 && a1 <= e * intersection;
    null_ok && aligned_ok && plan.j_s == plan.implied_receiver_occupancy()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m1: usize, m2: usize, n: usize, ne: usize) -> AntennaConfig {
        AntennaConfig::new(m1, m2, n, ne)
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_case(&cfg(2, 2, 4, 1)).unwrap(), CaseId::C1MleN);
        assert_eq!(classify_case(&cfg(2, 2, 3, 1)).unwrap(), CaseId::C2M1ltN);
        assert_eq!(classify_case(&cfg(3, 3, 2, 1)).unwrap(), CaseId::C3);
        assert_eq!(classify_case(&cfg(3, 1, 2, 3)).unwrap(), CaseId::C1M1gtNM2ltNBigNe);
        assert_eq!(classify_case(&cfg(3, 1, 2, 2)).unwrap(), CaseId::C2M1gtNM2ltN);
        assert_eq!(classify_case(&cfg(3, 2, 2, 1)).unwrap(), CaseId::C2M1gtNM2geN);
        assert!(matches!(
            classify_case(&cfg(2, 2, 3, 4)),
            Err(RegionError::DegenerateConfig(_))
        ));
    }

    #[test]
    fn classify_canonicalizes() {
        assert_eq!(classify_case(&cfg(1, 3, 2, 2)).unwrap(), CaseId::C2M1gtNM2ltN);
    }

    #[test]
    fn sdof_examples() {
        assert_eq!(sum_sdof(&cfg(2, 2, 4, 1)).unwrap(), r(3, 1));
        assert_eq!(sum_sdof(&cfg(2, 2, 3, 1)).unwrap(), r(5, 2));
        assert_eq!(sum_sdof(&cfg(3, 1, 2, 3)).unwrap(), r(1, 1));
        assert_eq!(sum_sdof(&cfg(3, 2, 2, 1)).unwrap(), r(2, 1));
        assert_eq!(sum_sdof(&cfg(2, 2, 3, 4)).unwrap(), r(0, 1));
        assert!(sum_sdof(&cfg(0, 2, 3, 1)).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(upper_bound_terms(&cfg(2, 2, 3, 1)).unwrap(), (r(3, 1), r(3, 1), r(5, 2)));
        assert_eq!(upper_bound_terms(&cfg(3, 3, 2, 1)).unwrap(), (r(2, 1), r(5, 1), r(5, 2)));
        assert_eq!(upper_bound_terms(&cfg(1, 1, 1, 0)).unwrap(), (r(1, 1), r(2, 1), r(1, 1)));
        assert_eq!(upper_bound_terms(&cfg(2, 2, 4, 1)).unwrap(), (r(4, 1), r(3, 1), r(7, 2)));
    }

    #[test]
    fn boundary_m1_equals_n() {
        // M1 = N uses the M1 < N construction with an M - N dimensional
        // intersection.
        let c = cfg(3, 2, 3, 1);
        assert_eq!(classify_case(&c).unwrap(), CaseId::C2M1ltN);
        assert_eq!(sum_sdof(&c).unwrap(), upper_bound(&c).unwrap());
        let c = cfg(3, 3, 3, 2);
        assert_eq!(sum_sdof(&c).unwrap(), upper_bound(&c).unwrap());
    }

    #[test]
    fn plan_random_jamming() {
        let p = jamming_plan(&cfg(2, 2, 4, 1)).unwrap();
        assert_eq!(p.extension, 1);
        assert_eq!(p.tx1, vec![JamPart { method: JamMethod::Random, dims: 1 }]);
        assert!(p.tx2.is_empty());
        assert_eq!(p.j_s, 1);
        assert_eq!((p.d1, p.d2), (1, 2));
    }

    #[test]
    fn plan_aligned_with_extension() {
        let p = jamming_plan(&cfg(2, 2, 3, 1)).unwrap();
        assert_eq!(p.extension, 2);
        assert_eq!(p.tx1, vec![JamPart { method: JamMethod::Aligned, dims: 1 }]);
        assert_eq!(p.tx2, vec![JamPart { method: JamMethod::Aligned, dims: 1 }]);
        assert_eq!(p.j_s, 1);
        assert_eq!(p.total_streams(), 5);
    }

    #[test]
    fn plan_nullspace_plus_aligned() {
        let p = jamming_plan(&cfg(3, 1, 2, 2)).unwrap();
        assert_eq!(p.extension, 2);
        assert_eq!(p.method_dims(1, JamMethod::Nullspace), 2);
        assert_eq!(p.method_dims(1, JamMethod::Aligned), 1);
        assert_eq!(p.method_dims(2, JamMethod::Aligned), 1);
        assert_eq!(p.j_s, 1);
        assert_eq!(p.total_streams(), 3);
    }

    #[test]
    fn plan_nullspace_only() {
        let p = jamming_plan(&cfg(3, 3, 2, 1)).unwrap();
        assert_eq!(p.extension, 1);
        assert_eq!(p.tx1, vec![JamPart { method: JamMethod::Nullspace, dims: 1 }]);
        assert_eq!(p.jam_dims(2), 0);
        assert_eq!(p.j_s, 0);
        assert_eq!(p.total_streams(), 2);
    }

    #[test]
    fn plan_identities() {
        let c = cfg(3, 1, 2, 3);
        let p = jamming_plan(&c).unwrap();
        assert!(verify_plan_arithmetic(&c, &p));
        assert_eq!(p.receiver_free_dims(), 1);
        assert_eq!(p.receiver_free_dims(), (c.m() - c.ne) as i64);

        let c = cfg(3, 2, 2, 1);
        let p = jamming_plan(&c).unwrap();
        assert!(verify_plan_arithmetic(&c, &p));
        assert_eq!(p.receiver_free_dims() * 2, (c.m() - c.ne) as i64 * p.extension as i64);
    }

    #[test]
    fn removing_a_jamming_dim_fails() {
        let c = cfg(2, 2, 3, 1);
        let mut p = jamming_plan(&c).unwrap();
        p.tx1[0].dims -= 1;
        assert!(!verify_plan_arithmetic(&c, &p));
    }

    #[test]
    fn degenerate_plan_rejected() {
        assert!(matches!(
            jamming_plan(&cfg(1, 1, 3, 2)),
            Err(RegionError::DegenerateConfig(_))
        ));
    }

    #[test]
    fn no_eavesdropper_no_jamming() {
        for c in [cfg(2, 1, 2, 0), cfg(4, 4, 2, 0), cfg(1, 1, 5, 0)] {
            let p = jamming_plan(&c).unwrap();
            assert_eq!(p.total_jam(), 0);
            assert!(verify_plan_arithmetic(&c, &p));
        }
    }
}
