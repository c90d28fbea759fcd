//! Named families of matrix spaces, flag counts, and exhaustive campaigns
//! over Grassmannians of matrix spaces.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::io::Write as _;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adapted::find_adapted_vector;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::flag::{flag_space, invariant_subspaces, is_chain, Flag};
use crate::grassmann::{ConstrainedGrassmannian, Grassmannian};
use crate::mat::{Mat, Vector};
use crate::par::{map_shards, Execution};
use crate::recover::{optimal_dim, recover_flag_with, RecoverOptions};
use crate::space::{check_budget, power_count, MatSpace, DEFAULT_BUDGET};
use crate::spacefile;
use crate::sweep::{first_non_split, SplitOracle};
use crate::triang::{is_weakly_triangularizable, space_weakly_triangularizable, Mode, Verdict};

/// Upper triangular matrices, conjugated to `P T_n P^{-1}` when `p` is given.
pub fn gen_triangular(n: usize, f: &FieldCtx, p: Option<&Mat>) -> Result<MatSpace> {
    let mats: Vec<Mat> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| Mat::unit(f, n, i, j))
        .collect();
    let t = MatSpace::from_span(f, n, &mats)?;
    match p {
        Some(p) => t.conjugate(p),
        None => Ok(t),
    }
}

pub fn gen_sym(n: usize, f: &FieldCtx) -> MatSpace {
    let mats: Vec<Mat> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut m = Mat::unit(f, n, i, j);
            m.set(j, i, 1);
            m
        })
        .collect();
    MatSpace::from_span(f, n, &mats).expect("same shapes")
}

/// Trace-zero matrices.
pub fn gen_sl(n: usize, f: &FieldCtx) -> MatSpace {
    let mut mats = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                mats.push(Mat::unit(f, n, i, j));
            }
        }
    }
    for i in 1..n {
        let mut m = Mat::unit(f, n, 0, 0);
        m.set(i, i, f.neg(1));
        mats.push(m);
    }
    MatSpace::from_span(f, n, &mats).expect("same shapes")
}

/// Block upper triangular space with the given spaces as diagonal blocks and
/// arbitrary blocks above the diagonal.
pub fn gen_joint(spaces: &[MatSpace]) -> Result<MatSpace> {
    let Some(first) = spaces.first() else {
        return Err(Error::arg("joint of no spaces"));
    };
    let f = first.field();
    if spaces.iter().any(|s| s.field() != f) {
        return Err(Error::shape("joint of spaces over different fields"));
    }
    let total: usize = spaces.iter().map(|s| s.n()).sum();
    let mut vectors: Vec<Vec<Elem>> = Vec::new();
    let mut offset = 0;
    for s in spaces {
        let k = s.n();
        for b in s.basis_vectors() {
            let mut v = vec![0; total * total];
            for i in 0..k {
                for j in 0..k {
                    v[(offset + i) * total + offset + j] = b[i * k + j];
                }
            }
            vectors.push(v);
        }
        for i in offset..offset + k {
            for j in offset + k..total {
                let mut v = vec![0; total * total];
                v[i * total + j] = 1;
                vectors.push(v);
            }
        }
        offset += k;
    }
    MatSpace::from_vectors(f, total, vectors)
}

/// Uniformly random invertible matrix from a seeded generator.
pub fn random_conjugator(f: &FieldCtx, n: usize, seed: u64) -> Mat {
    Mat::random_invertible(f, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A uniformly drawn spanning set of `d` matrices, redrawn until it is
/// independent.
pub fn gen_random(n: usize, f: &FieldCtx, d: usize, seed: u64) -> Result<MatSpace> {
    if d > n * n {
        return Err(Error::arg(format!("no {d}-dimensional subspace of M_{n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mats: Vec<Mat> = (0..d).map(|_| Mat::random(f, n, &mut rng)).collect();
        let s = MatSpace::from_span(f, n, &mats)?;
        if s.dim() == d {
            return Ok(s);
        }
    }
}

/// Number of complete flags of `F^n`: `prod_{i=1}^{n} (q^i - 1) / (q - 1)`.
pub fn count_flags_formula(n: usize, q: u64) -> u128 {
    (1..=n as u32)
        .map(|i| ((q as u128).pow(i) - 1) / (q as u128 - 1))
        .product()
}

/// Number of complete flags by counting chains of subspaces, dimension by
/// dimension.
pub fn count_flags_by_enumeration(n: usize, f: &FieldCtx) -> Result<u128> {
    let mut prev: Vec<(crate::linalg::Subspace, u128)> =
        vec![(crate::linalg::Subspace::zero(n), 1)];
    for k in 1..=n {
        let g = Grassmannian::new(f, n, k)?;
        let mut cur = g.cursor(0, g.count());
        let mut next = Vec::new();
        while let Some(rows) = cur.next_rows() {
            let u = crate::linalg::Subspace::span(f, n, rows)?;
            let chains: u128 = prev
                .iter()
                .filter(|(w, _)| w.is_subspace_of(f, &u))
                .map(|&(_, c)| c)
                .sum();
            next.push((u, chains));
        }
        prev = next;
    }
    Ok(prev.iter().map(|&(_, c)| c).sum())
}

/// Number of complete flags of `F^n`: by enumeration for `n <= 3`, checked
/// against the product formula, and by the formula beyond.
pub fn count_flags(n: usize, f: &FieldCtx) -> Result<u128> {
    let formula = count_flags_formula(n, f.q() as u64);
    if n <= 3 {
        let direct = count_flags_by_enumeration(n, f)?;
        if direct != formula {
            return Err(crate::recover::alarm(
                "flag_count",
                format!("enumeration gives {direct}, product formula {formula}"),
            ));
        }
    }
    Ok(formula)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CampaignMode {
    Exhaustive,
    /// `count` candidates drawn uniformly (with replacement) by index.
    Random {
        count: u64,
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub struct CampaignSpec {
    pub n: usize,
    pub field: FieldCtx,
    pub dim: usize,
    /// Matrices every candidate must contain; they must be independent.
    pub constraints: Vec<Mat>,
    pub mode: CampaignMode,
    pub shards: usize,
    /// Cap on both the number of candidates and the elements of one
    /// candidate.
    pub budget: u128,
    pub execution: Execution,
    pub journal: Option<PathBuf>,
    pub resume: bool,
}

impl CampaignSpec {
    pub fn new(n: usize, field: &FieldCtx, dim: usize) -> Self {
        CampaignSpec {
            n,
            field: field.clone(),
            dim,
            constraints: Vec::new(),
            mode: CampaignMode::Exhaustive,
            shards: 1,
            budget: DEFAULT_BUDGET,
            execution: Execution::default(),
            journal: None,
            resume: false,
        }
    }

    pub fn with_identity(mut self) -> Self {
        self.constraints.push(Mat::identity(&self.field, self.n));
        self
    }

    pub fn contains_identity(&self) -> bool {
        let id = Mat::identity(&self.field, self.n);
        MatSpace::from_span(&self.field, self.n, &self.constraints)
            .is_ok_and(|c| c.contains(&id).unwrap_or(false))
    }

    /// Stable one-line description, used to match a journal to its spec.
    pub fn fingerprint(&self) -> String {
        let constraints: Vec<String> = self.constraints.iter().map(|m| m.to_string()).collect();
        let mode = match self.mode {
            CampaignMode::Exhaustive => "exhaustive".to_string(),
            CampaignMode::Random { count, seed } => format!("random:{count}:{seed}"),
        };
        format!(
            "n={} field={} dim={} contains=[{}] mode={} shards={}",
            self.n,
            self.field,
            self.dim,
            constraints.join(";"),
            mode,
            self.shards
        )
    }
}

/// Post-processing of one weakly triangularizable candidate.
#[derive(Clone, Debug)]
pub struct HitRecord {
    pub space: MatSpace,
    pub contains_identity: bool,
    pub adapted: Option<Vector>,
    pub flag: Option<Flag>,
    /// `Some(true)` when the structure maps were extracted and all vanish.
    pub structure: Option<bool>,
    /// Whether the invariant subspaces are exactly the recovered chain.
    pub chain: Option<bool>,
    pub alarm: Option<String>,
}

impl HitRecord {
    pub fn recovered(&self) -> bool {
        self.flag.is_some() && self.alarm.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShardStat {
    pub index: usize,
    pub lo: u128,
    pub hi: u128,
    pub total: u128,
    pub hits: usize,
    pub resumed: bool,
}

#[derive(Clone, Debug)]
pub struct CampaignReport {
    pub fingerprint: String,
    pub contains_identity: bool,
    pub total: u128,
    pub hits: Vec<HitRecord>,
    pub shards: Vec<ShardStat>,
    pub alarms: Vec<String>,
    /// Complete flags of `F^n`, the expected hit count of an optimal
    /// campaign.
    pub expected_hits: Option<u128>,
    pub elapsed: Duration,
}

impl CampaignReport {
    pub fn hit_count(&self) -> usize {
        self.hits.len()
    }

    pub fn non_hits(&self) -> u128 {
        self.total - self.hits.len() as u128
    }

    pub fn all_recovered(&self) -> bool {
        self.alarms.is_empty() && self.hits.iter().all(|h| h.recovered())
    }

    pub fn resumed_shards(&self) -> usize {
        self.shards.iter().filter(|s| s.resumed).count()
    }

    /// Text report with a `# key: value` header. Wall-clock time is left out
    /// unless asked for, so that identical specs give identical bytes.
    pub fn render(&self, timing: bool) -> String {
        let mut out = String::new();
        let flag = |b: bool| if b { "true" } else { "false" };
        let _ = writeln!(out, "# campaign: {}", self.fingerprint);
        let _ = writeln!(out, "# total: {}", self.total);
        let _ = writeln!(out, "# hits: {}", self.hit_count());
        let _ = writeln!(out, "# non_hits: {}", self.non_hits());
        if let Some(e) = self.expected_hits {
            let _ = writeln!(out, "# complete_flags: {e}");
        }
        let _ = writeln!(out, "# all_recovered: {}", flag(self.all_recovered()));
        let _ = writeln!(
            out,
            "# hits_contain_identity: {}",
            flag(self.hits.iter().all(|h| h.contains_identity))
        );
        if self.contains_identity {
            let _ = writeln!(
                out,
                "# identity_constraint: an optimal space S contains the identity, since F I + S is again weakly triangularizable"
            );
        }
        let _ = writeln!(out, "# alarms: {}", self.alarms.len());
        for s in &self.shards {
            let _ = writeln!(
                out,
                "# shard.{}: range {}..{} total {} hits {}",
                s.index, s.lo, s.hi, s.total, s.hits
            );
        }
        if timing {
            let _ = writeln!(out, "# resumed_shards: {}", self.resumed_shards());
            let _ = writeln!(out, "# elapsed_seconds: {:.3}", self.elapsed.as_secs_f64());
        }
        for a in &self.alarms {
            let _ = writeln!(out, "alarm: {a}");
        }
        for (i, h) in self.hits.iter().enumerate() {
            let _ = writeln!(out, "[hit {i}]");
            let opt = |b: Option<bool>| b.map_or("-", flag);
            let _ = writeln!(out, "recovered: {}", flag(h.recovered()));
            let _ = writeln!(out, "structure_maps_vanish: {}", opt(h.structure));
            let _ = writeln!(out, "invariant_chain: {}", opt(h.chain));
            let _ = writeln!(
                out,
                "adapted_vector: {}",
                h.adapted
                    .as_ref()
                    .map_or_else(|| "none".to_string(), |v| v.to_string())
            );
            if let Some(flag) = &h.flag {
                let basis: Vec<String> = flag.basis().iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "flag_basis: {}", basis.join(" "));
            }
            if let Some(a) = &h.alarm {
                let _ = writeln!(out, "alarm: {a}");
            }
            out.push_str(&spacefile::render(&h.space));
        }
        out
    }
}

/// Contiguous index ranges splitting `[0, total)` into `shards` parts.
pub fn shard_ranges(total: u128, shards: usize) -> Vec<(u128, u128)> {
    let shards = shards.max(1) as u128;
    (0..shards)
        .map(|i| (total * i / shards, total * (i + 1) / shards))
        .collect()
}

struct ShardResult {
    stat: ShardStat,
    hits: Vec<MatSpace>,
}

/// Sweeps candidates and returns the canonical hits in index order.
struct Sweeper {
    grass: ConstrainedGrassmannian,
    oracle: std::sync::Arc<SplitOracle>,
    /// Constraint rows included in every generator set; one row is left out
    /// when the identity lies in the constraint span.
    fixed: Vec<Vec<Elem>>,
    n: usize,
    field: FieldCtx,
}

impl Sweeper {
    fn new(spec: &CampaignSpec) -> Result<Self> {
        let n = spec.n;
        let f = &spec.field;
        let rows: Vec<Vec<Elem>> = spec
            .constraints
            .iter()
            .map(|m| m.entries().to_vec())
            .collect();
        let grass = ConstrainedGrassmannian::new(f, n * n, spec.dim, &rows)?;
        let constraint = MatSpace::from_subspace(f, n, grass.constraint().clone())?;
        let fixed = crate::triang::identity_complement(&constraint)
            .unwrap_or_else(|| constraint.basis_vectors().to_vec());
        Ok(Sweeper {
            grass,
            oracle: SplitOracle::shared(f, n),
            fixed,
            n,
            field: f.clone(),
        })
    }

    fn is_hit(
        &self,
        rows: &[Vec<Elem>],
        gens: &mut Vec<Vec<Elem>>,
        lifted: &mut Vec<Vec<Elem>>,
    ) -> bool {
        self.grass.lift_into(rows, lifted);
        gens.clear();
        gens.extend(self.fixed.iter().cloned());
        gens.extend(lifted.iter().cloned());
        first_non_split(&self.oracle, gens).is_none()
    }

    fn canonical(&self, rows: &[Vec<Elem>]) -> MatSpace {
        MatSpace::from_subspace(&self.field, self.n, self.grass.lift(rows)).expect("ambient n^2")
    }

    fn range(&self, index: usize, lo: u128, hi: u128) -> ShardResult {
        let mut hits = Vec::new();
        let (mut gens, mut lifted) = (Vec::new(), Vec::new());
        let mut cur = self.grass.quotient().cursor(lo, hi);
        while let Some(rows) = cur.next_rows() {
            if self.is_hit(rows, &mut gens, &mut lifted) {
                hits.push(self.canonical(rows));
            }
        }
        ShardResult {
            stat: ShardStat {
                index,
                lo,
                hi,
                total: hi - lo,
                hits: hits.len(),
                resumed: false,
            },
            hits,
        }
    }

    fn sample(&self, index: usize, indices: &[u128]) -> ShardResult {
        let mut hits = Vec::new();
        let (mut gens, mut lifted) = (Vec::new(), Vec::new());
        for &idx in indices {
            let rows = self.grass.quotient().rows_at(idx);
            if self.is_hit(&rows, &mut gens, &mut lifted) {
                hits.push(self.canonical(&rows));
            }
        }
        ShardResult {
            stat: ShardStat {
                index,
                lo: 0,
                hi: indices.len() as u128,
                total: indices.len() as u128,
                hits: hits.len(),
                resumed: false,
            },
            hits,
        }
    }
}

const JOURNAL_HEADER: &str = "# trispace campaign journal";

fn journal_record(r: &ShardResult) -> String {
    let mut out = format!(
        "shard {} range {}..{} total {} hits {}\n",
        r.stat.index, r.stat.lo, r.stat.hi, r.stat.total, r.stat.hits
    );
    for h in &r.hits {
        out.push_str(&spacefile::render(h));
    }
    out
}

/// Completed shard records of a journal. A record cut short by an
/// interruption is ignored.
fn read_journal(text: &str, fingerprint: &str) -> Result<HashMap<usize, ShardResult>> {
    // every record ends in a newline, so an unterminated last line is torn
    let text = match text.rfind('\n') {
        Some(end) => &text[..=end],
        None => "",
    };
    let mut lines = text.lines();
    let header = format!("{JOURNAL_HEADER}: {fingerprint}");
    match lines.next() {
        Some(h) if h == header => {}
        Some(h) => {
            return Err(Error::Journal(format!(
                "journal belongs to a different campaign: `{h}`"
            )))
        }
        None => return Ok(HashMap::new()),
    }
    let mut done = HashMap::new();
    let all: Vec<&str> = lines.collect();
    let mut i = 0;
    while i < all.len() {
        let parts: Vec<&str> = all[i].split_whitespace().collect();
        let parsed = (|| {
            if parts.len() != 8
                || parts[0] != "shard"
                || parts[2] != "range"
                || parts[4] != "total"
                || parts[6] != "hits"
            {
                return None;
            }
            let index: usize = parts[1].parse().ok()?;
            let (lo, hi) = parts[3].split_once("..")?;
            let lo: u128 = lo.parse().ok()?;
            let hi: u128 = hi.parse().ok()?;
            let total: u128 = parts[5].parse().ok()?;
            let hits: usize = parts[7].parse().ok()?;
            Some((index, lo, hi, total, hits))
        })();
        let Some((index, lo, hi, total, hit_count)) = parsed else {
            if i + 1 == all.len() {
                break;
            }
            return Err(Error::Journal(format!(
                "malformed record at line {}",
                i + 2
            )));
        };
        i += 1;
        let mut hits = Vec::with_capacity(hit_count);
        let mut complete = true;
        for _ in 0..hit_count {
            let Some(len) = mat_line_count(&all[i..]).filter(|&len| i + 3 + len <= all.len())
            else {
                complete = false;
                break;
            };
            let block = all[i..i + 3 + len].join("\n");
            match spacefile::parse(&block, true) {
                Ok(s) => hits.push(s),
                Err(_) => {
                    complete = false;
                    break;
                }
            }
            i += 3 + len;
        }
        if !complete {
            break;
        }
        done.insert(
            index,
            ShardResult {
                stat: ShardStat {
                    index,
                    lo,
                    hi,
                    total,
                    hits: hit_count,
                    resumed: true,
                },
                hits,
            },
        );
    }
    Ok(done)
}

/// Number of `mat` lines announced by the `dim` line of a block starting at
/// `lines[0]`, if the block header is complete.
fn mat_line_count(lines: &[&str]) -> Option<usize> {
    lines
        .get(2)
        .and_then(|l| l.strip_prefix("dim "))
        .and_then(|d| d.trim().parse().ok())
}

/// Runs a campaign: every candidate subspace of the requested dimension
/// containing the constraints is swept for a non-split element; each hit
/// is then re-verified, its flag recovered, and (for `n >= 3`) its
/// structure maps extracted and its invariant subspaces compared with the
/// flag.
pub fn run_campaign(spec: &CampaignSpec) -> Result<CampaignReport> {
    let start = Instant::now();
    let f = &spec.field;
    let n = spec.n;
    if spec.dim > n * n {
        return Err(Error::arg(format!(
            "dimension {} exceeds n^2 = {}",
            spec.dim,
            n * n
        )));
    }
    if spec
        .constraints
        .iter()
        .any(|m| m.n() != n || m.field() != f)
    {
        return Err(Error::shape("constraint matrix differs in size or field"));
    }
    check_budget(power_count(f.q(), spec.dim), spec.budget)?;
    let sweeper = Sweeper::new(spec)?;
    let candidates = sweeper.grass.count();
    let fingerprint = spec.fingerprint();

    let mut results: Vec<ShardResult> = match spec.mode {
        CampaignMode::Exhaustive => {
            check_budget(candidates, spec.budget)?;
            let ranges = shard_ranges(candidates, spec.shards);
            let mut done = HashMap::new();
            let journal = match &spec.journal {
                Some(path) => {
                    if spec.resume && path.exists() {
                        done = read_journal(&fs::read_to_string(path)?, &fingerprint)?;
                        // rewrite without any trailing partial record
                        let mut text = format!("{JOURNAL_HEADER}: {fingerprint}\n");
                        let mut keys: Vec<_> = done.keys().copied().collect();
                        keys.sort_unstable();
                        for k in keys {
                            text.push_str(&journal_record(&done[&k]));
                        }
                        fs::write(path, text)?;
                    } else {
                        fs::write(path, format!("{JOURNAL_HEADER}: {fingerprint}\n"))?;
                    }
                    Some(Mutex::new(OpenOptions::new().append(true).open(path)?))
                }
                None => None,
            };
            for (idx, r) in &done {
                if ranges.get(*idx) != Some(&(r.stat.lo, r.stat.hi)) {
                    return Err(Error::Journal(format!(
                        "shard {idx} range disagrees with the campaign"
                    )));
                }
            }
            let todo: Vec<(usize, (u128, u128))> = ranges
                .iter()
                .copied()
                .enumerate()
                .filter(|(i, _)| !done.contains_key(i))
                .collect();
            let fresh = map_shards(
                todo,
                spec.execution,
                |(i, (lo, hi))| -> Result<ShardResult> {
                    let r = sweeper.range(i, lo, hi);
                    if let Some(j) = &journal {
                        let mut file: std::sync::MutexGuard<'_, File> =
                            j.lock().expect("journal lock");
                        file.write_all(journal_record(&r).as_bytes())?;
                        file.flush()?;
                    }
                    Ok(r)
                },
            );
            let mut all: Vec<ShardResult> = done.into_values().collect();
            for r in fresh {
                all.push(r?);
            }
            all.sort_by_key(|r| r.stat.index);
            all
        }
        CampaignMode::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let indices: Vec<u128> = (0..count)
                .map(|_| rng.gen_range(0..candidates.max(1)))
                .collect();
            let indices: Vec<u128> = if candidates == 0 { Vec::new() } else { indices };
            let ranges = shard_ranges(indices.len() as u128, spec.shards);
            let chunks: Vec<(usize, Vec<u128>)> = ranges
                .iter()
                .enumerate()
                .map(|(i, &(lo, hi))| (i, indices[lo as usize..hi as usize].to_vec()))
                .collect();
            map_shards(chunks, spec.execution, |(i, chunk)| {
                sweeper.sample(i, &chunk)
            })
        }
    };

    let total: u128 = results.iter().map(|r| r.stat.total).sum();
    let shards: Vec<ShardStat> = results.iter().map(|r| r.stat.clone()).collect();
    let hit_spaces: Vec<MatSpace> = results
        .iter_mut()
        .flat_map(|r| std::mem::take(&mut r.hits))
        .collect();
    let hits = map_shards(hit_spaces, spec.execution, |s| process_hit(s, spec.budget));
    let alarms: Vec<String> = hits.iter().filter_map(|h| h.alarm.clone()).collect();
    let expected_hits = (spec.dim == optimal_dim(n)).then(|| count_flags_formula(n, f.q() as u64));
    Ok(CampaignReport {
        fingerprint,
        contains_identity: spec.contains_identity(),
        total,
        hits,
        shards,
        alarms,
        expected_hits,
        elapsed: start.elapsed(),
    })
}

fn process_hit(space: MatSpace, budget: u128) -> HitRecord {
    let mut rec = HitRecord {
        contains_identity: space.contains_identity(),
        adapted: find_adapted_vector(&space),
        flag: None,
        structure: None,
        chain: None,
        alarm: None,
        space,
    };
    let s = &rec.space;
    let n = s.n();
    // independent re-verification through the generic sweep
    match space_weakly_triangularizable(s, Mode::Exhaustive, budget) {
        Ok(Verdict::WeaklyTriangularizable) => {}
        Ok(v) => {
            rec.alarm = Some(format!("fast sweep and generic sweep disagree: {v:?}"));
            return rec;
        }
        Err(e) => {
            rec.alarm = Some(e.to_string());
            return rec;
        }
    }
    if rec.adapted.is_none() {
        rec.alarm = Some("weakly triangularizable space without an adapted vector".into());
    }
    if s.dim() != optimal_dim(n) {
        return rec;
    }
    let opts = RecoverOptions {
        precheck: false,
        budget,
        ..Default::default()
    };
    match recover_flag_with(s, &opts) {
        Ok((flag, trace)) => {
            if n >= 3 {
                rec.structure = Some(
                    trace
                        .structure
                        .as_ref()
                        .is_some_and(|r| r.passed() && r.maps_vanish()),
                );
            }
            if flag_space(&flag) != *s {
                rec.alarm = Some("recovered flag does not reproduce the space".into());
            }
            match invariant_subspaces(s, None, budget) {
                Ok(inv) => {
                    rec.chain = Some(inv == flag.subspaces() && is_chain(s.field(), &inv));
                    if rec.chain == Some(false) {
                        rec.alarm =
                            Some("invariant subspaces differ from the recovered chain".into());
                    }
                }
                Err(Error::BudgetExceeded { .. }) => {}
                Err(e) => rec.alarm = Some(e.to_string()),
            }
            rec.flag = Some(flag);
        }
        Err(Error::TheoremViolation(a)) => {
            rec.alarm = Some(format!("{a}\n{}", a.trace.render()));
        }
        Err(e) => rec.alarm = Some(e.to_string()),
    }
    rec
}

/// Exhaustive verdict for each space; convenience for closure checks.
pub fn all_weakly_triangularizable(spaces: &[MatSpace], budget: u128) -> Result<bool> {
    for s in spaces {
        if !is_weakly_triangularizable(s, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}
