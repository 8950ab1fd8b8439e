//! Runtime self-checks, grouped into sections that can be run one at a time.
//!
//! Every randomised section draws from a ChaCha8 stream seeded by the
//! configured seed mixed with the section's index, so a section produces the
//! same report whether it runs alone or as part of the full suite.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::asymptotics::{a, a_offset, compare_denominator, OFFSET_AT_ONE, OFFSET_AT_ZERO};
use crate::barycentric::{evaluate, probe_points, SampledFunction, WeightScheme};
use crate::counterexample::{
    assembly_margin, cross_term_violations, hat_sums, header_check, header_split, main_term, shifted_harmonic_bound,
    support_disjointness, uk_forms, SawtoothParams,
};
use crate::error::{Error, Result};
use crate::error_analysis::{bv_bound_check, decompose_error, delta_sup, uniform_study};
use crate::grid::{Parity, RationalPoint, UniformGrid};
use crate::limits::{
    accumulation_scan, bias, convergence_check, denominator_limits, error_limit_set, period_limits, Point,
};
use crate::model::{library, FunctionModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Section {
    Exactness,
    LemA,
    LemDen,
    CorConv,
    DiffN,
    CorNumBV,
    Thm2,
    ThmUnifBV,
    ThmMain,
    LemHarmo,
    BoundUj,
    MainR2,
    Uk,
    Support,
}

impl Section {
    pub const ALL: [Section; 14] = [
        Section::Exactness,
        Section::LemA,
        Section::LemDen,
        Section::CorConv,
        Section::DiffN,
        Section::CorNumBV,
        Section::Thm2,
        Section::ThmUnifBV,
        Section::ThmMain,
        Section::LemHarmo,
        Section::BoundUj,
        Section::MainR2,
        Section::Uk,
        Section::Support,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Section::Exactness => "exact",
            Section::LemA => "lemA",
            Section::LemDen => "lemDen",
            Section::CorConv => "corConv",
            Section::DiffN => "diffN",
            Section::CorNumBV => "corNumBV",
            Section::Thm2 => "thm2",
            Section::ThmUnifBV => "thmUnifBV",
            Section::ThmMain => "thmMain",
            Section::LemHarmo => "lemHarmo",
            Section::BoundUj => "boundUj",
            Section::MainR2 => "mainR2",
            Section::Uk => "uk",
            Section::Support => "support",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Section::Exactness => "interpolation at nodes and reproduction of constants",
            Section::LemA => "the limit profile A",
            Section::LemDen => "sign, size and asymptotics of the denominator",
            Section::CorConv => "denominator limit sets at rational points",
            Section::DiffN => "error decomposition into remainder and bias",
            Section::CorNumBV => "remainder bound for f' of bounded variation",
            Section::Thm2 => "remainder decay for absolutely continuous f'",
            Section::ThmUnifBV => "uniform error bound for f' of bounded variation",
            Section::ThmMain => "accumulation points of the scaled error",
            Section::LemHarmo => "shifted harmonic lower bound",
            Section::BoundUj => "sawtooth hat sums and the header estimate",
            Section::MainR2 => "sawtooth main term",
            Section::Uk => "polynomial forms of the hat numerators",
            Section::Support => "disjoint supports and the final margin",
        }
    }

    /// Looks a section up by id, ignoring ASCII case.
    pub fn from_id(id: &str) -> Option<Section> {
        let id = id.trim();
        Section::ALL.into_iter().find(|s| s.id().eq_ignore_ascii_case(id))
    }

    fn salt(self) -> u64 {
        Section::ALL.iter().position(|&s| s == self).unwrap_or(0) as u64
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides the sample count of the randomised sections.
    pub samples: Option<usize>,
    /// Sawtooth sizes for the main-term section.
    pub ms: Vec<u64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: None,
            ms: vec![256, 4096, 65536],
        }
    }
}

impl VerifyConfig {
    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn rng(&self, section: Section) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ section.salt().wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionReport {
    pub section: Section,
    pub checks: Vec<Check>,
    /// Free-form summary lines, such as histograms.
    pub notes: Vec<String>,
}

impl SectionReport {
    fn new(section: Section) -> Self {
        Self {
            section,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            label: label.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run(config: &VerifyConfig, sections: &[Section]) -> Result<Vec<SectionReport>> {
    sections.iter().map(|&s| run_section(s, config)).collect()
}

pub fn run_section(section: Section, config: &VerifyConfig) -> Result<SectionReport> {
    let mut r = SectionReport::new(section);
    match section {
        Section::Exactness => exactness(&mut r)?,
        Section::LemA => profile_a(&mut r)?,
        Section::LemDen => denominator(&mut r, config)?,
        Section::CorConv => limit_sets(&mut r)?,
        Section::DiffN => decomposition(&mut r, config)?,
        Section::CorNumBV => remainder_bound(&mut r)?,
        Section::Thm2 => remainder_decay(&mut r)?,
        Section::ThmUnifBV => uniform_bound(&mut r)?,
        Section::ThmMain => accumulation(&mut r)?,
        Section::LemHarmo => harmonic(&mut r)?,
        Section::BoundUj => hats(&mut r)?,
        Section::MainR2 => main_terms(&mut r, config)?,
        Section::Uk => uk(&mut r, config)?,
        Section::Support => support(&mut r)?,
    }
    Ok(r)
}

fn sci(v: f64) -> String {
    format!("{v:.6e}")
}

/// Primes up to `n_max`.
fn primes(n_max: usize) -> Vec<usize> {
    let mut sieve = vec![true; n_max + 1];
    let mut out = Vec::new();
    for i in 2..=n_max {
        if sieve[i] {
            out.push(i);
            for j in (i * i..=n_max).step_by(i) {
                sieve[j] = false;
            }
        }
    }
    out
}

/// Every tenth prime below 2000, plus the first and last.
fn prime_ladder() -> Vec<usize> {
    let p = primes(2000);
    let mut out: Vec<usize> = p.iter().step_by(10).copied().collect();
    out.push(*p.last().unwrap_or(&2));
    out.dedup();
    out
}

fn exactness(r: &mut SectionReport) -> Result<()> {
    let f = library::exp();
    let schemes = [WeightScheme::Berrut, WeightScheme::EndpointHalved];
    let mut misses = 0usize;
    for n in 1..=200 {
        let s = SampledFunction::from_model(&f, n)?;
        for scheme in &schemes {
            for (k, &v) in s.values().iter().enumerate() {
                if evaluate(&s, scheme, s.grid().node(k))?.to_bits() != v.to_bits() {
                    misses += 1;
                }
            }
        }
    }
    r.check(
        "node values, n = 1..200, both schemes",
        misses == 0,
        format!("{misses} mismatches"),
    );

    let mut worst = 0.0f64;
    for n in [1, 2, 7, 10, 100, 1000, 10_000] {
        let s = SampledFunction::from_fn(n, |_| 1.0)?;
        for scheme in &schemes {
            for x in probe_points(101, n) {
                worst = worst.max((evaluate(&s, scheme, x)? - 1.0).abs());
            }
        }
    }
    r.check(
        "constants to 1e-13, n <= 10^4",
        worst <= 1e-13,
        format!("max error {}", sci(worst)),
    );
    Ok(())
}

fn profile_a(r: &mut SectionReport) -> Result<()> {
    let a0 = a(0.0)?.to_f64();
    r.check(
        "A(0) = π/2",
        (a0 - FRAC_PI_2).abs() <= 1e-10,
        format!("gap {}", sci(a0 - FRAC_PI_2)),
    );

    let xs: Vec<f64> = (0..1000).map(|j| j as f64 / 1000.0).collect();
    let vals = xs.iter().map(|&x| Ok(a(x)?.to_f64())).collect::<Result<Vec<_>>>()?;
    let drops = vals.windows(2).filter(|w| w[1] <= w[0]).count();
    r.check(
        "strictly increasing on 1000 points",
        drops == 0,
        format!("{drops} non-increasing steps"),
    );

    let mut outside = 0usize;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in &xs {
        let h = a_offset(x)?;
        lo = lo.min(h);
        hi = hi.max(h);
        if !(OFFSET_AT_ONE - 1e-12..=OFFSET_AT_ZERO + 1e-12).contains(&h) {
            outside += 1;
        }
    }
    r.check(
        "-1/2 <= A(x) - 2/(1-x) <= (π-4)/2",
        outside == 0,
        format!("offset range [{}, {}]", sci(lo), sci(hi)),
    );
    Ok(())
}

fn denominator(r: &mut SectionReport, config: &VerifyConfig) -> Result<()> {
    let count = config.samples_or(1000);
    let mut rng = config.rng(Section::LemDen);
    let mut draws = Vec::with_capacity(count);
    while draws.len() < count {
        let n = rng.gen_range(10..=5000usize);
        let x: f64 = rng.gen_range(-1.0..1.0);
        if !UniformGrid::new(n)?.is_node(x) {
            draws.push((n, x));
        }
    }
    let cmp = draws
        .par_iter()
        .map(|&(n, x)| compare_denominator(n, x))
        .collect::<Result<Vec<_>>>()?;

    let sign_bad = cmp
        .iter()
        .filter(|c| {
            let want = if c.iota % 2 == 0 { 1.0 } else { -1.0 };
            c.scaled_denominator.signum() != want
        })
        .count();
    r.check(
        "sign(D_n) = (-1)^iota",
        sign_bad == 0,
        format!("{sign_bad} of {count} wrong"),
    );

    let floor_bad = cmp.iter().filter(|c| c.scaled_denominator.abs() < 1.0 - 1e-12).count();
    r.check("|D_n/n| >= 1", floor_bad == 0, format!("{floor_bad} of {count} below"));

    let stated = cmp.iter().filter(|c| c.residual > c.bound + 1e-9).count();
    let worst_excess = cmp
        .iter()
        .map(|c| c.residual - c.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    r.check(
        "residual <= 1/(4(1+iota)) + 1/(4(n-iota))",
        stated == 0,
        format!("{stated} of {count} above, worst excess {}", sci(worst_excess)),
    );

    let proven = cmp.iter().filter(|c| c.residual > c.proven_bound + 1e-9).count();
    r.check(
        "residual <= 1/(2(1+iota)) + 1/(2(n-iota))",
        proven == 0,
        format!("{proven} of {count} above"),
    );

    let edges = [0.25, 0.5, 1.0, 2.0];
    let mut bins = [0usize; 5];
    for c in &cmp {
        let ratio = c.residual / c.bound;
        bins[edges.iter().take_while(|&&e| ratio >= e).count()] += 1;
    }
    r.notes.push(format!(
        "residual/bound: [0,0.25) {} | [0.25,0.5) {} | [0.5,1) {} | [1,2) {} | [2,inf) {}",
        bins[0], bins[1], bins[2], bins[3], bins[4]
    ));
    if let Some((c, &(n, x))) = cmp
        .iter()
        .zip(&draws)
        .max_by(|p, q| p.0.residual.total_cmp(&q.0.residual))
    {
        r.notes.push(format!(
            "largest residual {} at n = {n}, x = {}, iota = {}, bound {}",
            sci(c.residual),
            sci(x),
            c.iota,
            sci(c.bound)
        ));
    }
    Ok(())
}

fn limit_sets(r: &mut SectionReport) -> Result<()> {
    let mut mismatches = Vec::new();
    let mut points = 0usize;
    for b in 1..=12i64 {
        for num in 1..2 * b {
            let Ok(x) = RationalPoint::new(num, b) else { continue };
            points += 1;
            for parity in [Parity::Odd, Parity::Even] {
                if denominator_limits(x, parity) != period_limits(x, parity) {
                    mismatches.push(format!("{num}/{b} {parity}"));
                }
            }
        }
    }
    r.check(
        "closed-form sets = one period of n",
        mismatches.is_empty(),
        format!(
            "{points} points with denominator <= 12, mismatches: {}",
            mismatches.len()
        ),
    );

    for (num, den) in [(1, 1), (1, 3), (2, 3), (1, 2), (3, 5), (4, 7)] {
        let x = RationalPoint::new(num, den)?;
        for parity in [Parity::Odd, Parity::Even] {
            if denominator_limits(x, parity).is_empty() {
                continue;
            }
            let c = convergence_check(x, parity, 1001, 3000)?;
            let ok = c.samples > 0 && c.sign_mismatches == 0 && c.max_value_gap < 1e-2 && c.max_rho_gap < 1e-8;
            r.check(
                format!("D_n/n approaches its set, x+1 = {num}/{den}, {parity} n"),
                ok,
                format!(
                    "{} n, sign mismatches {}, value gap {}, rho² gap {}",
                    c.samples,
                    c.sign_mismatches,
                    sci(c.max_value_gap),
                    sci(c.max_rho_gap)
                ),
            );
        }
    }
    Ok(())
}

fn decomposition(r: &mut SectionReport, config: &VerifyConfig) -> Result<()> {
    let count = config.samples_or(10_000);
    let models: Vec<FunctionModel> = library::all();
    let mut rng = config.rng(Section::DiffN);
    let mut draws = Vec::with_capacity(count);
    while draws.len() < count {
        let m = rng.gen_range(0..models.len());
        let n = rng.gen_range(1..=2000usize);
        let x: f64 = rng.gen_range(-1.0..1.0);
        if !UniformGrid::new(n)?.is_node(x) {
            draws.push((m, n, x));
        }
    }
    let worst = draws
        .par_iter()
        .map(|&(m, n, x)| Ok(decompose_error(&models[m], n, x)?.relative_gap()))
        .try_reduce(|| 0.0, |p, q| Ok(p.max(q)))?;
    r.check(
        "B_n f - f = (remainder + bias)/D_n, relative to the largest term",
        worst <= 1e-10,
        format!("{count} samples, worst relative gap {}", sci(worst)),
    );
    Ok(())
}

fn remainder_bound(r: &mut SectionReport) -> Result<()> {
    let ladder = prime_ladder();
    for model in library::bv1() {
        let tv = model.tv()?;
        let worst = ladder
            .par_iter()
            .map(|&n| Ok(delta_sup(&model, n, 2001)? - tv / 2.0))
            .try_reduce(|| f64::NEG_INFINITY, |p, q| Ok(p.max(q)))?;
        r.check(
            format!("{}: |remainder| <= TV(f')/2", model.name),
            worst <= 1e-9,
            format!("{} prime n, max excess {}", ladder.len(), sci(worst)),
        );
    }
    Ok(())
}

/// Remainders below this are treated as zero in the decay check.
const ROUNDOFF: f64 = 1e-8;

fn remainder_decay(r: &mut SectionReport) -> Result<()> {
    for model in library::ac1() {
        let early = delta_sup(&model, 100, 2001)?;
        let late = delta_sup(&model, 3200, 2001)?;
        // The remainder vanishes identically for linear f, and for x² at even
        // n; there only roundoff is left to compare.
        let (label, ok) = if early <= ROUNDOFF {
            ("stays at roundoff", late <= ROUNDOFF)
        } else {
            ("at n = 3200 <= half of n = 100", late <= 0.5 * early)
        };
        r.check(
            format!("{}: remainder {label}", model.name),
            ok,
            format!("{} -> {}", sci(early), sci(late)),
        );
    }
    let ladder = [51, 201, 801, 3201];
    let rows = uniform_study(&library::exp(), &ladder, Parity::Odd, 2001)?;
    let vals: Vec<f64> = rows.iter().map(|r| r.bias_corrected).collect();
    let decreasing = vals.windows(2).all(|w| w[1] < w[0]);
    r.check(
        "exp: bias-corrected scaled error decreasing on 51, 201, 801, 3201",
        decreasing && vals[3] <= vals[0] / 3.0,
        vals.iter().map(|&v| sci(v)).collect::<Vec<_>>().join(" "),
    );
    Ok(())
}

fn uniform_bound(r: &mut SectionReport) -> Result<()> {
    let ladder = prime_ladder();
    for model in library::bv1() {
        let checks = ladder
            .par_iter()
            .map(|&n| bv_bound_check(&model, n, 2001))
            .collect::<Result<Vec<_>>>()?;
        let failing = checks.iter().filter(|c| !c.holds()).count();
        let slack = checks.iter().map(|c| c.lhs - c.rhs).fold(f64::NEG_INFINITY, f64::max);
        r.check(
            format!("{}: n ||B_n f - f|| <= TV(f')/2 + max(||O||, ||E||)", model.name),
            failing == 0,
            format!(
                "{} prime n, {failing} failing, max lhs - rhs {}",
                ladder.len(),
                sci(slack)
            ),
        );
    }
    Ok(())
}

fn accumulation(r: &mut SectionReport) -> Result<()> {
    let quad = library::quadratic();
    let zero = RationalPoint::new(1, 1)?;
    let set = error_limit_set(&quad, Point::Rational(zero), Parity::Odd)?;
    let scan = accumulation_scan(&quad, 0.0, Parity::Odd, 10_001, 12_001)?;
    let far = scan.iter().map(|&(_, v)| set.distance(v)).fold(0.0, f64::max);
    let both = scan.iter().any(|&(_, v)| v > 0.0) && scan.iter().any(|&(_, v)| v < 0.0);
    r.check(
        "x² at 0, odd n in [10001, 12001]: within 0.02 of ±2/π, both signs",
        far <= 0.02 && both,
        format!("{} n, max distance {}", scan.len(), sci(far)),
    );

    let x = std::f64::consts::SQRT_2 - 1.0;
    let o = bias(&quad, x)?.odd_bias.abs();
    let scan = accumulation_scan(&quad, x, Parity::Odd, 1001, 5001)?;
    let peak = scan.iter().map(|&(_, v)| v.abs()).fold(0.0, f64::max);
    let cap = FRAC_2_PI * o + 0.05 * o;
    r.check(
        "x² at √2 - 1, odd n in [1001, 5001]: within (2/π)|O| + 0.05|O|",
        peak <= cap,
        format!("max {} vs {}", sci(peak), sci(cap)),
    );
    Ok(())
}

fn harmonic(r: &mut SectionReport) -> Result<()> {
    for a in [0.5, 1.0, 3.7] {
        let mut bad = 0usize;
        let mut slack = f64::INFINITY;
        for l in 1..=1000 {
            let h = shifted_harmonic_bound(a, l)?;
            slack = slack.min(h.sum - h.lower_bound);
            if !h.holds() {
                bad += 1;
            }
        }
        r.check(
            format!("shifted harmonic sum >= log bound, a = {a}"),
            bad == 0,
            format!("l = 1..1000, {bad} failing, min slack {}", sci(slack)),
        );
    }
    Ok(())
}

fn hats(r: &mut SectionReport) -> Result<()> {
    for (q, m) in [(16u64, 256u64), (16, 4096), (32, 1024)] {
        let params = SawtoothParams::new(m)?;
        let sums = (0..=params.hats())
            .map(|p| hat_sums(q, &params, p))
            .collect::<Result<Vec<_>>>()?;
        let gap = sums
            .iter()
            .flat_map(|h| h.raise.iter().chain(std::iter::once(&h.fall)))
            .map(|s| s.rel_gap())
            .fold(0.0, f64::max);
        r.check(
            format!("closed forms of raises and falls, q = {q}, m = {m}"),
            gap <= 1e-12,
            format!("p = 0..{}, max relative gap {}", params.hats(), sci(gap)),
        );
        let min_hat = sums.iter().filter_map(|h| h.hat()).fold(f64::INFINITY, f64::min);
        r.check(
            format!("H_p > 0 for p >= 1, q = {q}, m = {m}"),
            min_hat > 0.0,
            format!("min {}", sci(min_hat)),
        );
        let f0 = sums[0].fall.direct;
        let floor = -3.0 / (16.0 * q as f64 * m as f64);
        r.check(
            format!("F_0 >= -3/(16qm), q = {q}, m = {m}"),
            f0 >= floor,
            format!("{} vs {}", sci(f0), sci(floor)),
        );
        let split = header_split(q, &params)?;
        let split_gap = (split.parts_sum() - split.total).abs();
        r.check(
            format!("R_- + F_0 + ΣH_p + R_+ = whole sum, q = {q}, m = {m}"),
            split_gap <= 1e-12 && split.r_minus > 0.0 && split.r_plus > 0.0,
            format!(
                "gap {}, R_- {}, R_+ {}",
                sci(split_gap),
                sci(split.r_minus),
                sci(split.r_plus)
            ),
        );
    }
    for (q, m) in [(16u64, 256u64), (64, 256), (16, 4096)] {
        let h = header_check(q, &SawtoothParams::new(m)?)?;
        r.check(
            format!("N >= -3/4 and B >= -9/(8n) at n = 4qm = {}", h.n),
            h.holds(),
            format!("N = {}, B = {}", sci(h.numerator), sci(h.value)),
        );
    }
    Ok(())
}

fn main_terms(r: &mut SectionReport, config: &VerifyConfig) -> Result<()> {
    if config.ms.is_empty() {
        return Err(Error::InvalidArgument("no sawtooth sizes given".into()));
    }
    for &m in &config.ms {
        let t = main_term(&SawtoothParams::new(m)?)?;
        r.check(
            format!("N_m(f_m, 1/m) = ln(m)/4 + δ_m/2, m = {m}"),
            t.identity_holds(1e-10),
            format!(
                "N_m = {}, formula = {}, gap {}",
                sci(t.direct),
                sci(t.formula),
                sci(t.direct - t.formula)
            ),
        );
        let odd_gap = (t.direct - t.harmonic).abs();
        r.check(
            format!("N_m(f_m, 1/m) = Σ 1/(2i-1), m = {m}"),
            odd_gap <= 1e-12 * t.harmonic,
            format!("gap {}", sci(odd_gap)),
        );
        r.check(
            format!("N_m(f_m, 1/m) >= ln(m)/4 + δ_m/2, m = {m}"),
            t.lower_bound_holds(),
            format!("margin {}", sci(t.direct - t.formula)),
        );
    }
    Ok(())
}

fn uk(r: &mut SectionReport, config: &VerifyConfig) -> Result<()> {
    let count = config.samples_or(1000);
    let mut rng = config.rng(Section::Uk);
    let (mut gap, mut low, mut nonpos) = (0.0f64, f64::INFINITY, 0usize);
    for _ in 0..count {
        let q = rng.gen_range(16..=2000u64);
        let p = rng.gen_range(1..=200u64);
        let xi: f64 = rng.gen_range(0.0..2.0);
        let u = uk_forms(q, p, xi)?;
        gap = gap.max(u.rel_gap());
        low = low.min(u.expanded);
        if u.expanded <= 0.0 || u.direct <= 0.0 {
            nonpos += 1;
        }
    }
    r.check(
        "direct and expanded forms agree",
        gap <= 1e-10,
        format!("{count} samples, max relative gap {}", sci(gap)),
    );
    r.check(
        "u_k > 0",
        nonpos == 0,
        format!("{nonpos} non-positive, min {}", sci(low)),
    );
    Ok(())
}

fn support(r: &mut SectionReport) -> Result<()> {
    let disjoint = support_disjointness(5)?;
    r.check("consecutive supports disjoint through j = 5", disjoint, "n_j = 2^(2^j)");
    let bad = cross_term_violations(&[256, 65536, 1 << 32])?;
    r.check(
        "cross terms vanish at t_n and the smaller grid, m = 256, 65536, 2^32",
        bad == 0,
        format!("{bad} nonzero values"),
    );
    let margin = assembly_margin(100, 1000)?;
    r.check(
        "1/16 - 1/20 - (9/8) j/ln(n_j) > 0 for j = 100..1000",
        margin > 0.0,
        format!("min margin {}", sci(margin)),
    );
    Ok(())
}
