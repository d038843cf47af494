//! Monte-Carlo estimates of the secrecy metrics, used as an independent
//! check on the analytical paths.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::alpha_mu::AlphaMuSampler;
use crate::channels::shadowed_rician::SrSampler;
use crate::channels::{AlphaMuParams, SrParams};
use crate::error::{invalid, Result};
use crate::metrics::SecrecyConfig;
use crate::orderstats::LinkPair;

/// Trials per reduction unit. Fixed, so the summation order and with it the
/// result never depend on how many workers ran.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimMode {
    /// Fresh first-hop draws for every user and eavesdropper path, matching
    /// the independence the analysis assumes.
    #[default]
    PaperIndependent,
    /// One satellite→relay draw per relay shared by all terminals, and a
    /// single relay chosen to help the weakest user.
    SharedUplink,
}

impl std::str::FromStr for SimMode {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_independent" => Ok(SimMode::PaperIndependent),
            "shared_uplink" => Ok(SimMode::SharedUplink),
            _ => Err(invalid(format!("unknown simulation mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimPlan {
    pub cfg: SecrecyConfig,
    pub n_trials: u64,
    pub seed: u64,
    pub mode: SimMode,
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub sopm: f64,
    pub esmc: f64,
    pub pnsmc: f64,
    pub se_sopm: f64,
    pub se_esmc: f64,
    pub se_pnsmc: f64,
    /// `E[log2(1 + ζ_min)]` and `E[log2(1 + ζ_max)]`.
    pub capacity_user: f64,
    pub capacity_eve: f64,
    pub n_trials: u64,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Partial {
    n: u64,
    outage: u64,
    positive: u64,
    cap_user: Sum,
    cap_eve: Sum,
    cs: Sum,
    cs2: Sum,
}

impl Partial {
    fn absorb(&mut self, other: &Partial) {
        self.n += other.n;
        self.outage += other.outage;
        self.positive += other.positive;
        self.cap_user.add(other.cap_user.value());
        self.cap_eve.add(other.cap_eve.value());
        self.cs.add(other.cs.value());
        self.cs2.add(other.cs2.value());
    }
}

/// Per-trial random stream derived from `(seed, trial)`.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

struct Link {
    sr: SrSampler,
    hop2: AlphaMuSampler,
}

impl Link {
    fn new(l: &LinkPair) -> Self {
        Self { sr: SrSampler::new(&l.sr), hop2: AlphaMuSampler::new(&l.hop2) }
    }

    /// Best of `n` independent dual-hop paths.
    #[inline]
    fn best_relay(&self, n: u32, rng: &mut ChaCha8Rng) -> f64 {
        (0..n).map(|_| self.sr.sample(rng).min(self.hop2.sample(rng))).fold(f64::NEG_INFINITY, f64::max)
    }
}

struct Trial<'a> {
    cfg: &'a SecrecyConfig,
    user: Link,
    eve: Link,
    mode: SimMode,
    // scratch for shared-uplink trials
    uplink: Vec<f64>,
}

impl Trial<'_> {
    /// `(ζ_min, ζ_max)` for one trial.
    fn draw(&mut self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        let t = self.cfg.topo;
        match self.mode {
            SimMode::PaperIndependent => {
                let z_min = (0..t.p).map(|_| self.user.best_relay(t.n, rng)).fold(f64::INFINITY, f64::min);
                let z_max = (0..t.q).map(|_| self.eve.best_relay(t.n, rng)).fold(f64::NEG_INFINITY, f64::max);
                (z_min, z_max)
            }
            SimMode::SharedUplink => {
                self.uplink.clear();
                for _ in 0..t.n {
                    self.uplink.push(self.user.sr.sample(rng));
                }
                let (mut chosen, mut best) = (0usize, f64::NEG_INFINITY);
                for (r, &up) in self.uplink.iter().enumerate() {
                    let weakest = (0..t.p).map(|_| up.min(self.user.hop2.sample(rng))).fold(f64::INFINITY, f64::min);
                    if weakest > best {
                        best = weakest;
                        chosen = r;
                    }
                }
                let up = self.uplink[chosen];
                let z_max = (0..t.q).map(|_| up.min(self.eve.hop2.sample(rng))).fold(f64::NEG_INFINITY, f64::max);
                (best, z_max)
            }
        }
    }
}

fn run_chunk(plan: &SimPlan, chunk: u64) -> Partial {
    let mut trial = Trial {
        cfg: &plan.cfg,
        user: Link::new(&plan.cfg.user_link),
        eve: Link::new(&plan.cfg.eve_link),
        mode: plan.mode,
        uplink: Vec::with_capacity(plan.cfg.topo.n as usize),
    };
    let start = chunk * CHUNK;
    let end = (start + CHUNK).min(plan.n_trials);
    let mut part = Partial::default();
    for i in start..end {
        let mut rng = trial_rng(plan.seed, i);
        let (z_min, z_max) = trial.draw(&mut rng);
        let c_user = z_min.ln_1p() / std::f64::consts::LN_2;
        let c_eve = z_max.ln_1p() / std::f64::consts::LN_2;
        let cs = c_user - c_eve;
        part.n += 1;
        part.outage += (cs < plan.cfg.phi_c) as u64;
        part.positive += (cs > 0.0) as u64;
        part.cap_user.add(c_user);
        part.cap_eve.add(c_eve);
        part.cs.add(cs);
        part.cs2.add(cs * cs);
    }
    part
}

fn proportion_se(k: u64, n: u64) -> f64 {
    if n < 2 {
        return f64::NAN;
    }
    let p = k as f64 / n as f64;
    (p * (1.0 - p) / (n - 1) as f64).sqrt()
}

/// Runs the plan; identical output for a fixed seed at any worker count.
pub fn simulate(plan: &SimPlan) -> Result<SimEstimate> {
    plan.cfg.validate()?;
    if plan.n_trials == 0 {
        return Err(invalid("n_trials must be >= 1"));
    }
    if plan.workers == 0 {
        return Err(invalid("workers must be >= 1"));
    }
    let chunks = plan.n_trials.div_ceil(CHUNK) as usize;
    let slots: Mutex<Vec<Option<Partial>>> = Mutex::new(vec![None; chunks]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..plan.workers.min(chunks) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= chunks {
                    break;
                }
                let part = run_chunk(plan, idx as u64);
                slots.lock().expect("no worker panics while holding the lock")[idx] = Some(part);
            });
        }
    });
    let mut total = Partial::default();
    for part in slots.into_inner().expect("workers joined").iter() {
        total.absorb(part.as_ref().expect("every chunk ran"));
    }
    let n = total.n as f64;
    let mean_cs = total.cs.value() / n;
    let var_cs = if total.n > 1 { ((total.cs2.value() - n * mean_cs * mean_cs) / (n - 1.0)).max(0.0) } else { f64::NAN };
    let capacity_user = total.cap_user.value() / n;
    let capacity_eve = total.cap_eve.value() / n;
    Ok(SimEstimate {
        sopm: total.outage as f64 / n,
        esmc: capacity_user - capacity_eve,
        pnsmc: total.positive as f64 / n,
        se_sopm: proportion_se(total.outage, total.n),
        se_esmc: (var_cs / n).sqrt(),
        se_pnsmc: proportion_se(total.positive, total.n),
        capacity_user,
        capacity_eve,
        n_trials: total.n,
    })
}

/// Random variables that [`empirical_cdf`] and [`draw_samples`] can produce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplerSpec {
    ShadowedRician(SrParams),
    AlphaMu(AlphaMuParams),
    DualHop(LinkPair),
    BestRelay { link: LinkPair, n: u32 },
    MulticastMin { link: LinkPair, n: u32, p: u32 },
    EavesMax { link: LinkPair, n: u32, q: u32 },
}

/// `n` draws, draw `i` taken from stream `(seed, i)`.
pub fn draw_samples(spec: &SamplerSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    let link_of = |l: &LinkPair| -> Result<Link> {
        l.validate()?;
        Ok(Link::new(l))
    };
    let mut out = Vec::with_capacity(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut each = |f: &mut dyn FnMut(&mut ChaCha8Rng) -> f64| {
        for i in 0..n {
            rng.set_stream(i as u64);
            rng.set_word_pos(0);
            out.push(f(&mut rng));
        }
    };
    match *spec {
        SamplerSpec::ShadowedRician(p) => {
            p.validate()?;
            let s = SrSampler::new(&p);
            each(&mut |r| s.sample(r));
        }
        SamplerSpec::AlphaMu(p) => {
            p.validate()?;
            let s = AlphaMuSampler::new(&p);
            each(&mut |r| s.sample(r));
        }
        SamplerSpec::DualHop(l) => {
            let s = link_of(&l)?;
            each(&mut |r| s.best_relay(1, r));
        }
        SamplerSpec::BestRelay { link, n: relays } => {
            let s = link_of(&link)?;
            each(&mut |r| s.best_relay(relays, r));
        }
        SamplerSpec::MulticastMin { link, n: relays, p } => {
            let s = link_of(&link)?;
            each(&mut |r| (0..p).map(|_| s.best_relay(relays, r)).fold(f64::INFINITY, f64::min));
        }
        SamplerSpec::EavesMax { link, n: relays, q } => {
            let s = link_of(&link)?;
            each(&mut |r| (0..q).map(|_| s.best_relay(relays, r)).fold(f64::NEG_INFINITY, f64::max));
        }
    }
    Ok(out)
}

/// Fraction of `n` draws at or below each grid point.
pub fn empirical_cdf(spec: &SamplerSpec, n: usize, seed: u64, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(invalid("grid must be sorted ascending"));
    }
    let mut xs = draw_samples(spec, n, seed)?;
    xs.sort_by(f64::total_cmp);
    Ok(grid.iter().map(|&g| xs.partition_point(|&x| x <= g) as f64 / n as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{db_to_linear, shadowing_preset};
    use crate::orderstats::Topology;

    fn cfg(n: u32, p: u32, q: u32) -> SecrecyConfig {
        let sr = SrParams::from_shadowing(shadowing_preset(2).unwrap(), 10.0).unwrap();
        SecrecyConfig {
            user_link: LinkPair::user(sr, AlphaMuParams::new(2.0, 1.0, 10.0).unwrap()),
            eve_link: LinkPair::eavesdropper(sr, AlphaMuParams::new(2.0, 1.0, db_to_linear(-10.0)).unwrap()),
            topo: Topology::new(n, p, q).unwrap(),
            phi_c: 0.5,
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut plan = SimPlan { cfg: cfg(2, 2, 2), n_trials: 3 * CHUNK + 17, seed: 7, mode: SimMode::PaperIndependent, workers: 1 };
        let a = simulate(&plan).unwrap();
        plan.workers = 4;
        assert_eq!(a, simulate(&plan).unwrap());
        plan.mode = SimMode::SharedUplink;
        let s1 = simulate(&plan).unwrap();
        plan.workers = 3;
        assert_eq!(s1, simulate(&plan).unwrap());
    }

    #[test]
    fn zero_rate_outage_complements_positive() {
        let plan = SimPlan { cfg: cfg(1, 2, 1).with_phi_c(0.0), n_trials: 20_000, seed: 1, mode: SimMode::PaperIndependent, workers: 2 };
        let e = simulate(&plan).unwrap();
        assert!((e.sopm + e.pnsmc - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn empirical_cdf_basics() {
        let exp = SamplerSpec::AlphaMu(AlphaMuParams::new(2.0, 1.0, 1.0).unwrap());
        let v = empirical_cdf(&exp, 40_000, 3, &[std::f64::consts::LN_2, f64::INFINITY]).unwrap();
        assert_eq!(v[1], 1.0);
        assert!((v[0] - 0.5).abs() < 3.0 * (0.25f64 / 40_000.0).sqrt());
        assert!(empirical_cdf(&exp, 10, 3, &[2.0, 1.0]).is_err());
    }
}
