//! Polynomial partitioning of finite point sets.
//!
//! Round `j` of the partitioning loop picks a polynomial of degree `d_j`
//! whose zero set near-bisects every currently occupied sign class, and the
//! product of the round polynomials cuts space into cells that each hold a
//! small fraction of the points.  Floating point appears only inside the
//! descent that proposes candidate coefficient vectors; every candidate is
//! snapped to dyadic rationals and certified with exact arithmetic before it
//! is accepted, so a returned polynomial is always a genuine bisector.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvegeom::{restrict_to_curve, ParamCurve};
use crate::geom::{Line3, Point3};
use crate::polyalg::{restrict_to_line, Mono3, TriPoly};
use crate::rat::Rat;

/// Largest supported number of partitioning rounds.
///
/// The degree schedule is tabulated up to this depth; the cube bound on the
/// total degree is checked exactly in [`DegreeSchedule::new`].
pub const MAX_ROUNDS: usize = 15;

/// Partitioning errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    /// No candidate polynomial of the requested degree could be certified.
    #[error("no bisecting polynomial of the requested degree was certified")]
    BisectionFailed,
    /// No admissible perturbation moved a cube face off the input family.
    #[error("could not move a cube face off the input family")]
    GenericityFailure,
}

/// Dimension of the space of nonconstant polynomials of degree at most `d`
/// in three variables.
pub fn veronese_dim(d: u32) -> usize {
    let n = d as usize;
    (n + 1) * (n + 2) * (n + 3) / 6 - 1
}

/// The nonconstant monomials of degree at most `d`, by degree and then by
/// descending exponent of `x`, then of `y`.
pub fn monomial_basis(d: u32) -> Vec<Mono3> {
    let mut out = Vec::with_capacity(veronese_dim(d));
    for total in 1..=d {
        for ex in (0..=total).rev() {
            for ey in (0..=total - ex).rev() {
                out.push(Mono3::new(ex, ey, total - ex - ey));
            }
        }
    }
    debug_assert_eq!(out.len(), veronese_dim(d));
    out
}

/// The values of the nonconstant monomials of degree at most `d` at `p`,
/// in [`monomial_basis`] order.
pub fn veronese_lift(p: &Point3, d: u32) -> Vec<Rat> {
    lift(p.coords(), &monomial_basis(d))
}

fn lift(coords: [&Rat; 3], basis: &[Mono3]) -> Vec<Rat> {
    let top = basis.iter().fold([0u32; 3], |acc, m| {
        [acc[0].max(m.ex), acc[1].max(m.ey), acc[2].max(m.ez)]
    });
    let pows: Vec<Vec<Rat>> = coords
        .iter()
        .zip(top)
        .map(|(c, t)| {
            let mut axis = vec![Rat::one()];
            for k in 0..t as usize {
                axis.push(&axis[k] * *c);
            }
            axis
        })
        .collect();
    basis
        .iter()
        .map(|m| &(&pows[0][m.ex as usize] * &pows[1][m.ey as usize]) * &pows[2][m.ez as usize])
        .collect()
}

/// Per-round degrees `d_j = min { d : dim(d) >= 2^(j-1) }`, where `dim` is
/// [`veronese_dim`].  Round `j` bisects at most `2^(j-1)` sign classes, and
/// the affine span of the lifted points must be large enough for all of them.
///
/// Invariant: the total degree `D` satisfies `D^3 <= 512 * 2^rounds`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSchedule {
    degrees: Vec<u32>,
}

impl DegreeSchedule {
    pub fn new(rounds: usize) -> Self {
        assert!(
            (1..=MAX_ROUNDS).contains(&rounds),
            "rounds must lie in 1..={MAX_ROUNDS}"
        );
        let mut degrees = Vec::with_capacity(rounds);
        let mut d = 1u32;
        for j in 0..rounds {
            let classes = 1u64 << j;
            while (veronese_dim(d) as u64) < classes {
                d += 1;
            }
            degrees.push(d);
        }
        let schedule = DegreeSchedule { degrees };
        let total = u64::from(schedule.total_degree());
        assert!(total.pow(3) <= 512u64 << rounds);
        schedule
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Degree for the given zero-based round.
    pub fn degree(&self, round: usize) -> u32 {
        self.degrees[round]
    }

    pub fn total_degree(&self) -> u32 {
        self.degrees.iter().sum()
    }
}

/// Knobs for the bisection descent.
#[derive(Debug, Clone)]
pub struct BisectOptions {
    /// Seed for the restart stream.
    pub seed: u64,
    /// Random restarts before the search gives up.
    pub restarts: u32,
    /// Descent iterations per restart.
    pub max_iters: u32,
}

impl Default for BisectOptions {
    fn default() -> Self {
        BisectOptions {
            seed: 0x7061_7274,
            restarts: 64,
            max_iters: 240,
        }
    }
}

struct ActiveSet {
    points: Vec<Point3>,
    /// Exact lifted rows over the reframed basis, affine coordinate appended,
    /// scaled by the shared denominator of the whole instance so every entry
    /// is an integer.  Scaling by a positive constant preserves both the
    /// nullspace of anchor constraints and the order of offset values, so all
    /// exact work runs gcd-free over integers.
    int_rows: Vec<Vec<BigInt>>,
    rows: Vec<Vec<f64>>,
    /// Largest admissible strict-side count, `floor(n (1 + 2 eps) / 2)`.
    cap: usize,
}

/// Per-axis affine change of coordinates `(x - mu) / scale` placing the
/// points in the centered unit cube, so lifted values never saturate the
/// descent.  `scale` is a power of two, which keeps snapped candidates
/// dyadic after the exact change back to original coordinates.
struct Frame {
    mu: [Rat; 3],
    scale: [Rat; 3],
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a Point3>) -> Frame {
        let mut lo: Option<[Rat; 3]> = None;
        let mut hi: Option<[Rat; 3]> = None;
        for p in points {
            let lo = lo.get_or_insert_with(|| std::array::from_fn(|a| p.coord(a).clone()));
            let hi = hi.get_or_insert_with(|| std::array::from_fn(|a| p.coord(a).clone()));
            for axis in 0..3 {
                if p.coord(axis) < &lo[axis] {
                    lo[axis] = p.coord(axis).clone();
                }
                if p.coord(axis) > &hi[axis] {
                    hi[axis] = p.coord(axis).clone();
                }
            }
        }
        let lo = lo.expect("frame of a nonempty set");
        let hi = hi.expect("frame of a nonempty set");
        let half = Rat::new(BigInt::from(1), BigInt::from(2));
        let mu = std::array::from_fn(|a| (&lo[a] + &hi[a]) * &half);
        let scale = std::array::from_fn(|a| {
            let h = (&hi[a] - &lo[a]) * &half;
            let mut s = Rat::one();
            while s < h {
                s = s * Rat::from_int(2);
            }
            s
        });
        Frame { mu, scale }
    }

    fn apply(&self, p: &Point3) -> [Rat; 3] {
        std::array::from_fn(|a| &(p.coord(a) - &self.mu[a]) / &self.scale[a])
    }
}

/// Finds a nonzero polynomial of total degree at most `degree` whose zero
/// set near-bisects every set: each strict side of each set holds at most
/// `(1 + 2 eps) / 2` of its points.  Sets with fewer than two points are
/// exempt; if every set is exempt the plane `x = max + 1` is returned.
///
/// When a set is so small that the side caps cannot absorb all of its points
/// (any odd set at `eps = 0`, three-point sets for `eps < 1/6`), the deficit
/// must sit exactly on the zero set.  The descent picks those anchor points
/// by residual size and the snapping step solves for coefficients that
/// vanish on them exactly, so certification never depends on a float hitting
/// zero.
///
/// The search space is the Veronese lift of degree `degree` plus an affine
/// offset.  Coordinates are centered and rescaled by powers of two first,
/// so lifted values stay in the unit cube; the exact change of coordinates
/// back keeps every snapped candidate a rational-coefficient polynomial.
pub fn bisect_sets(
    sets: &[Vec<Point3>],
    degree: u32,
    eps: &Rat,
    opts: &BisectOptions,
) -> Result<TriPoly, PartitionError> {
    assert!(degree >= 1, "bisection degree must be positive");
    assert!(
        eps.sign() >= 0 && eps < &Rat::new(BigInt::from(1), BigInt::from(2)),
        "eps must lie in [0, 1/2)"
    );

    let active_points: Vec<&Vec<Point3>> = sets.iter().filter(|s| s.len() >= 2).collect();
    if active_points.is_empty() {
        let max_x = sets
            .iter()
            .flatten()
            .map(|p| p.coord(0))
            .max()
            .cloned()
            .unwrap_or_else(Rat::zero);
        return Ok(TriPoly::from_terms([
            (1, 0, 0, Rat::one()),
            (0, 0, 0, -(max_x + Rat::one())),
        ]));
    }

    let basis = monomial_basis(degree);
    let frame = Frame::fit(active_points.iter().flat_map(|s| s.iter()));
    let side_factor = Rat::one() + Rat::from_int(2) * eps;

    let lifted: Vec<Vec<Vec<Rat>>> = active_points
        .iter()
        .map(|points| {
            points
                .iter()
                .map(|p| {
                    let framed = frame.apply(p);
                    let mut row = lift([&framed[0], &framed[1], &framed[2]], &basis);
                    row.push(Rat::one());
                    row
                })
                .collect()
        })
        .collect();
    let mut den = BigInt::from(1);
    for rows in &lifted {
        for row in rows {
            for e in row {
                den = den.lcm(e.denom());
            }
        }
    }

    let active: Vec<ActiveSet> = lifted
        .into_iter()
        .zip(&active_points)
        .map(|(exact_rows, points)| {
            let rows = exact_rows
                .iter()
                .map(|r| r.iter().map(Rat::to_f64).collect())
                .collect();
            let int_rows = exact_rows
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|e| &den / e.denom() * e.numer())
                        .collect()
                })
                .collect();
            let cap_rat = Rat::from_int(points.len() as i64) * &side_factor
                / Rat::from_int(2);
            let cap = usize::try_from(cap_rat.floor()).expect("side cap fits usize");
            ActiveSet {
                points: (*points).clone(),
                int_rows,
                rows,
                cap,
            }
        })
        .collect();

    let dims = basis.len() + 1;
    assert!(
        active.len() <= basis.len(),
        "more sets than lifted dimensions"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let iters = opts.max_iters.max(24 * active.len() as u32);
    let mut order_idx: Vec<usize> = (0..active.len()).collect();
    let mut scratch = vec![0.0; dims];
    let (mut t_state, mut t_pass, mut t_cert) = (0.0f64, 0.0f64, 0.0f64);
    let mut n_cert = 0u32;
    for _restart in 0..opts.restarts {
        let mut w: Vec<f64> = (0..dims).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalize(&mut w);
        // Points pinned onto the zero set for the rest of this basin; the
        // descent continues in the nullspace of their rows.
        let mut pinned: Vec<Vec<bool>> =
            active.iter().map(|s| vec![false; s.rows.len()]).collect();
        let mut pins = 0usize;
        let mut ortho: Vec<Vec<f64>> = Vec::new();
        let mut grows: Option<Vec<Vec<Vec<f64>>>> = None;
        let mut best_v = f64::INFINITY;
        let mut diag_best = usize::MAX;
        let mut since_improve = 0u32;
        let mut cooldown = 0u32;
        for it in 0..=iters {
            let t0 = std::time::Instant::now();
            let (v, overflow, deficits) = window_state(&w, &active, &pinned);
            t_state += t0.elapsed().as_secs_f64();
            // Sets with a forced on-Z point always show one strict point
            // too many, so they are discounted when judging closeness; the
            // anchoring inside certification absorbs them.
            let over_adj = overflow.saturating_sub(deficits);
            diag_best = diag_best.min(over_adj);
            let anchor_limit = dims - 2;
            let near = 12.max(dims / 4);
            // Anchored certification is a last resort: a clean sweep leaves
            // no points on the zero set, so only a stalled descent close to
            // feasibility is worth anchoring.
            let stalled = since_improve >= 8;
            let try_now = over_adj == 0
                || (stalled && over_adj <= near && cooldown == 0)
                || it == iters;
            cooldown = cooldown.saturating_sub(1);
            if try_now {
                let mut exact_ran = false;
                let t0 = std::time::Instant::now();
                let cq = certify(
                    &w, &active, &basis, &frame, &den, anchor_limit, &pinned, &mut exact_ran,
                );
                t_cert += t0.elapsed().as_secs_f64();
                n_cert += 1;
                if let Some(q) = cq {
                    eprintln!("timing: state={t_state:.2}s pass={t_pass:.2}s cert={t_cert:.2}s n_cert={n_cert}");
                    return Ok(q);
                }
                if over_adj == 0 {
                    // Float-feasible but not certifiable; move to a fresh
                    // basin rather than re-trying the same candidate.
                    kick(&mut w, 0.2, &mut rng);
                    clear_pins(&mut pinned, &mut pins, &mut ortho, &mut grows);
                    best_v = f64::INFINITY;
                    since_improve = 0;
                    continue;
                }
                // Attempts that died in the float preview are cheap; ones
                // that burned exact arithmetic earn a longer pause.
                cooldown = if exact_ran { 16 } else { 4 };
            }
            if it == iters {
                break;
            }
            order_idx.shuffle(&mut rng);
            let t0 = std::time::Instant::now();
            incremental_pass(
                &mut w,
                &active,
                &pinned,
                &ortho,
                grows.as_ref(),
                &order_idx,
                &mut scratch,
            );
            t_pass += t0.elapsed().as_secs_f64();
            if v + 1e-12 < best_v {
                best_v = v;
                since_improve = 0;
            } else {
                since_improve += 1;
                let chunk = near.min((dims - 2).saturating_sub(pins));
                if since_improve == 12 && over_adj > 0 && chunk > 0 {
                    // The basin cannot clear these offenders, so pin the
                    // worst of them onto the zero set exactly and rebalance
                    // what remains in the pinned nullspace.
                    pins += pin_offenders(&w, &active, &mut pinned, chunk);
                    ortho = orthonormalize(&pinned_rows(&pinned, &active));
                    deflate(&mut w, &ortho);
                    if dot(&w, &w).sqrt() < 1e-9 {
                        kick(&mut w, 0.2, &mut rng);
                        clear_pins(&mut pinned, &mut pins, &mut ortho, &mut grows);
                    } else {
                        normalize(&mut w);
                        grows = Some(deflated_rows(&active, &ortho));
                    }
                    best_v = f64::INFINITY;
                    since_improve = 0;
                } else if since_improve > 30 {
                    kick(&mut w, 0.08, &mut rng);
                    clear_pins(&mut pinned, &mut pins, &mut ortho, &mut grows);
                    best_v = f64::INFINITY;
                    since_improve = 0;
                }
            }
        }
        eprintln!("restart {_restart}: min over_adj = {diag_best} pins = {pins}");
    }
    eprintln!("timing: state={t_state:.2}s pass={t_pass:.2}s cert={t_cert:.2}s n_cert={n_cert}");
    Err(PartitionError::BisectionFailed)
}

fn clear_pins(
    pinned: &mut [Vec<bool>],
    pins: &mut usize,
    ortho: &mut Vec<Vec<f64>>,
    grows: &mut Option<Vec<Vec<Vec<f64>>>>,
) {
    for mask in pinned.iter_mut() {
        mask.fill(false);
    }
    *pins = 0;
    ortho.clear();
    *grows = None;
}

/// Marks up to `limit` cap-excess points as pinned, preferring the points
/// nearest the zero set across all sets, and reports how many were added.
fn pin_offenders(
    w: &[f64],
    active: &[ActiveSet],
    pinned: &mut [Vec<bool>],
    limit: usize,
) -> usize {
    let mut offenders: Vec<(f64, usize, usize)> = Vec::new();
    for (si, (mask, set)) in pinned.iter().zip(active).enumerate() {
        let mut pos: Vec<(f64, usize)> = Vec::new();
        let mut neg: Vec<(f64, usize)> = Vec::new();
        for (i, row) in set.rows.iter().enumerate() {
            if mask[i] {
                continue;
            }
            let d = dot(w, row);
            if d > 0.0 {
                pos.push((d, i));
            } else if d < 0.0 {
                neg.push((-d, i));
            }
        }
        for side in [&mut pos, &mut neg] {
            let over = side.len().saturating_sub(set.cap);
            if over > 0 {
                side.sort_by(|a, b| a.0.total_cmp(&b.0));
                for &(d, i) in side.iter().take(over) {
                    offenders.push((d, si, i));
                }
            }
        }
    }
    offenders.sort_by(|a, b| a.0.total_cmp(&b.0));
    let added = offenders.len().min(limit);
    for &(_, si, i) in offenders.iter().take(added) {
        pinned[si][i] = true;
    }
    added
}

fn pinned_rows<'a>(pinned: &[Vec<bool>], active: &'a [ActiveSet]) -> Vec<&'a Vec<f64>> {
    pinned
        .iter()
        .zip(active)
        .flat_map(|(mask, set)| {
            mask.iter()
                .enumerate()
                .filter_map(|(i, m)| m.then(|| &set.rows[i]))
        })
        .collect()
}

/// The exact sweep certifies a direction iff every set's admissible-offset
/// window contains a common level, and the offset coordinate shifts all
/// windows together.  The float search therefore minimizes how far each
/// window sits from the zero level.  The margin keeps certified candidates
/// away from window edges so snapping cannot push them out.
const WINDOW_MARGIN: f64 = 2e-3;

/// One set's window violation, accumulated into `grad`, with its strict
/// overflow beyond the side caps and whether a point is structurally forced
/// onto the zero set.  Pinned points already sit on the zero set and are
/// skipped.
///
/// With `m` live points, the lowest `m - cap` values are pushed below
/// `-margin` and the highest `m - cap` above `+margin`; every rank in
/// violation contributes, which gives the descent a much richer signal than
/// the two boundary order statistics alone.  When `m > 2 cap` the two
/// ranges overlap in the middle rank, whose opposing demands cancel to a
/// constant `2·margin` that is subtracted from the reported violation.
fn set_violation(
    w: &[f64],
    set: &ActiveSet,
    mask: &[bool],
    grad_rows: &[Vec<f64>],
    grad: &mut [f64],
) -> (f64, usize, bool) {
    let mut dots: Vec<(f64, usize)> = set
        .rows
        .iter()
        .enumerate()
        .filter_map(|(i, row)| (!mask[i]).then(|| (dot(w, row), i)))
        .collect();
    let m = dots.len();
    let deficit = m > 2 * set.cap;
    let pos = dots.iter().filter(|(d, _)| *d > 0.0).count();
    let neg = dots.iter().filter(|(d, _)| *d < 0.0).count();
    let overflow = pos.saturating_sub(set.cap) + neg.saturating_sub(set.cap);
    dots.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut v = 0.0;
    for &(d, i) in &dots[..m.saturating_sub(set.cap)] {
        let excess = d + WINDOW_MARGIN;
        if excess > 0.0 {
            v += excess;
            for (g, r) in grad.iter_mut().zip(&grad_rows[i]) {
                *g += r;
            }
        }
    }
    for &(d, i) in &dots[set.cap.min(m)..] {
        let excess = WINDOW_MARGIN - d;
        if excess > 0.0 {
            v += excess;
            for (g, r) in grad.iter_mut().zip(&grad_rows[i]) {
                *g -= r;
            }
        }
    }
    if deficit {
        v = (v - 2.0 * WINDOW_MARGIN).max(0.0);
    }
    (v, overflow, deficit)
}

/// Total violation, strict overflow, and the count of sets with a point
/// structurally forced onto the zero set.
fn window_state(w: &[f64], active: &[ActiveSet], pinned: &[Vec<bool>]) -> (f64, usize, usize) {
    let mut scratch = vec![0.0; w.len()];
    let mut v = 0.0;
    let mut overflow = 0;
    let mut deficits = 0;
    for (set, mask) in active.iter().zip(pinned) {
        let (sv, so, sd) = set_violation(w, set, mask, &set.rows, &mut scratch);
        v += sv;
        overflow += so;
        deficits += usize::from(sd);
    }
    (v, overflow, deficits)
}

/// Gradient rows pre-projected onto the pinned nullspace, one block per
/// set.  A subgradient assembled from them stays in the nullspace, which
/// keeps the incremental pass from paying a projection per set.
fn deflated_rows(active: &[ActiveSet], ortho: &[Vec<f64>]) -> Vec<Vec<Vec<f64>>> {
    active
        .iter()
        .map(|set| {
            set.rows
                .iter()
                .map(|r| {
                    let mut d = r.clone();
                    deflate(&mut d, ortho);
                    d
                })
                .collect()
        })
        .collect()
}

/// One incremental pass over the sets in the given order: each violated set
/// applies its own Polyak step inside the pinned nullspace.  Sequential
/// per-set steps burrow into the common feasible region far better than one
/// summed subgradient, whose conflicting terms cancel near a stall.
fn incremental_pass(
    w: &mut [f64],
    active: &[ActiveSet],
    pinned: &[Vec<bool>],
    ortho: &[Vec<f64>],
    grows: Option<&Vec<Vec<Vec<f64>>>>,
    order: &[usize],
    grad: &mut [f64],
) {
    for &si in order {
        grad.fill(0.0);
        let set = &active[si];
        let grad_rows = grows.map_or(&set.rows, |g| &g[si]);
        let (v, _, _) = set_violation(w, set, &pinned[si], grad_rows, grad);
        if v <= 0.0 {
            continue;
        }
        let gg = dot(grad, grad);
        if gg < 1e-24 {
            continue;
        }
        let step = (v / gg).min(0.3);
        for (x, g) in w.iter_mut().zip(grad.iter()) {
            *x -= step * g;
        }
    }
    deflate(w, ortho);
    normalize(w);
}

fn kick(w: &mut [f64], amp: f64, rng: &mut ChaCha8Rng) {
    for x in w.iter_mut() {
        *x += amp * rng.gen_range(-1.0..1.0);
    }
    normalize(w);
}

fn normalize(w: &mut [f64]) {
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1e-12 {
        for x in w.iter_mut() {
            *x /= norm;
        }
    }
}

fn dot(w: &[f64], row: &[f64]) -> f64 {
    w.iter().zip(row).map(|(a, b)| a * b).sum()
}

const SNAP_BITS: [u32; 4] = [12, 22, 34, 48];

fn snap_int(x: f64, bits: u32) -> i64 {
    let num = (x * (1i64 << bits) as f64).round();
    debug_assert!(num.abs() < 9e15, "iterate out of range for exact snapping");
    num as i64
}

fn snap(x: f64, bits: u32) -> Rat {
    Rat::new(BigInt::from(snap_int(x, bits)), BigInt::from(1i64 << bits))
}

/// Snaps the float iterate to an exact candidate and verifies it.
///
/// The direction part is snapped to dyadic rationals; the affine offset is
/// then chosen exactly.  For a fixed direction the admissible offsets of a
/// set form the closed interval between its order statistics at the side
/// caps, so intersecting the intervals finds a valid offset whenever one
/// exists.
///
/// When the sweep fails, the cap-excess points of each overloaded side are
/// forced exactly onto the zero set instead: points on the zero set count on
/// neither side, so a near-feasible direction certifies once its few
/// overflow points are anchored by exact elimination.
///
/// The anchoring is prepared entirely in floats.  The iterate is projected
/// onto the nullspace of the anchored rows, which can push further points
/// across zero or into the clearance band around it, so the selection loops
/// until the picture is stable: every remaining point keeps a clear sign and
/// every side sits within its cap.  Only then is the exact completion run;
/// it reproduces the projected iterate up to snapping error, far below the
/// clearance, so the exact verification sees the same sign pattern.
fn certify(
    w: &[f64],
    active: &[ActiveSet],
    basis: &[Mono3],
    frame: &Frame,
    den: &BigInt,
    anchor_limit: usize,
    pinned: &[Vec<bool>],
    exact_ran: &mut bool,
) -> Option<TriPoly> {
    if let Some(q) = certify_by_offset_sweep(w, active, basis, frame, den, exact_ran) {
        return Some(q);
    }
    let budget = anchor_limit.min(w.len().saturating_sub(2));
    let mut wp = w.to_vec();
    let mut picked: Vec<Vec<bool>> = pinned.to_vec();
    let mut count: usize = picked
        .iter()
        .map(|m| m.iter().filter(|b| **b).count())
        .sum();
    for pass in 0.. {
        let mut grew = false;
        for (mask, set) in picked.iter_mut().zip(active) {
            let mut pos: Vec<(f64, usize)> = Vec::new();
            let mut neg: Vec<(f64, usize)> = Vec::new();
            for (i, row) in set.rows.iter().enumerate() {
                if mask[i] {
                    continue;
                }
                let d = dot(&wp, row);
                if d.abs() < SIGN_CLEARANCE {
                    mask[i] = true;
                    count += 1;
                    grew = true;
                } else if d > 0.0 {
                    pos.push((d, i));
                } else {
                    neg.push((-d, i));
                }
            }
            for side in [&mut pos, &mut neg] {
                let over = side.len().saturating_sub(set.cap);
                if over > 0 {
                    side.sort_by(|a, b| a.0.total_cmp(&b.0));
                    for &(_, i) in side.iter().take(over) {
                        mask[i] = true;
                        count += 1;
                        grew = true;
                    }
                }
            }
        }
        if count == 0 || count > budget {
            if count > 0 {
                eprintln!("anchored bail: count={count} budget={budget} pass={pass}");
            }
            return None;
        }
        if !grew {
            break;
        }
        if pass == 8 {
            eprintln!("anchored bail: pass limit, count={count}");
            return None;
        }
        let ortho = orthonormalize(&pinned_rows(&picked, active));
        deflate(&mut wp, &ortho);
        if dot(&wp, &wp).sqrt() < 1e-9 {
            return None;
        }
        normalize(&mut wp);
    }
    let anchor_rows: Vec<&Vec<BigInt>> = picked
        .iter()
        .zip(active)
        .flat_map(|(mask, set)| {
            mask.iter()
                .enumerate()
                .filter_map(|(i, m)| m.then(|| &set.int_rows[i]))
        })
        .collect();
    *exact_ran = true;
    certify_with_anchors(&wp, active, basis, frame, anchor_rows)
}

/// Signed distance under which a float sign is not trusted.  Points inside
/// the band get anchored onto the zero set rather than counted on a side.
const SIGN_CLEARANCE: f64 = 1e-7;

/// Orthonormal basis of the span of `rows` by modified Gram-Schmidt; rows
/// that are numerically dependent on earlier ones are dropped.
fn orthonormalize(rows: &[&Vec<f64>]) -> Vec<Vec<f64>> {
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let mut u = (*r).clone();
        for q in &ortho {
            let c = dot(&u, q);
            for (x, y) in u.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
        let nn = dot(&u, &u).sqrt();
        if nn < 1e-9 {
            continue;
        }
        for x in u.iter_mut() {
            *x /= nn;
        }
        ortho.push(u);
    }
    ortho
}

/// Removes the components of `v` along the given orthonormal vectors.
fn deflate(v: &mut [f64], ortho: &[Vec<f64>]) {
    for q in ortho {
        let c = dot(v, q);
        for (x, y) in v.iter_mut().zip(q) {
            *x -= c * y;
        }
    }
}

/// Float preview of the admissible-offset window intersection for the given
/// direction: the largest per-set lower bound and smallest upper bound.
fn float_window(dir: &[f64], active: &[ActiveSet]) -> (f64, f64) {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for set in active {
        let mut f: Vec<f64> = set.rows.iter().map(|row| dot(dir, row)).collect();
        f.sort_by(f64::total_cmp);
        let n = f.len();
        lo = lo.max(f[n - set.cap - 1]);
        hi = hi.min(f[set.cap]);
        if lo > hi + 1e-7 {
            break;
        }
    }
    (lo, hi)
}

fn certify_by_offset_sweep(
    w: &[f64],
    active: &[ActiveSet],
    basis: &[Mono3],
    frame: &Frame,
    den: &BigInt,
    exact_ran: &mut bool,
) -> Option<TriPoly> {
    let dims = w.len();
    // Cheap float preview: the per-set offset windows must nearly share a
    // level before any exact rational work is worth doing.
    let (lo, hi) = float_window(&w[..dims - 1], active);
    if lo > hi + 1e-7 {
        return None;
    }
    for bits in SNAP_BITS {
        let nums: Vec<i64> = w[..dims - 1].iter().map(|&x| snap_int(x, bits)).collect();
        if nums.iter().all(|&n| n == 0) {
            continue;
        }
        // The snapped direction shifts every f-value, so preview again at
        // this quantization before computing exact order statistics.
        let unit = 1.0 / (1i64 << bits) as f64;
        let dirf: Vec<f64> = nums.iter().map(|&n| n as f64 * unit).collect();
        let (lo, hi) = float_window(&dirf, active);
        if lo > hi + 1e-9 {
            continue;
        }
        *exact_ran = true;
        let _t_sweep = std::time::Instant::now();
        // f-values scaled by `den << bits`, a positive constant, so the order
        // statistics and the window intersection live entirely in integers.
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        let mut empty = false;
        for set in active {
            let mut f: Vec<BigInt> = set
                .int_rows
                .iter()
                .map(|row| {
                    nums.iter()
                        .zip(row)
                        .filter(|&(&a, _)| a != 0)
                        .map(|(&a, b)| b * a)
                        .sum()
                })
                .collect();
            f.sort();
            // strict sides stay within cap iff the zero level lies between
            // the (n-cap)-th and (cap+1)-th smallest value
            let n = f.len();
            let set_lo = &f[n - set.cap - 1];
            let set_hi = &f[set.cap];
            if lo.as_ref().is_none_or(|v| set_lo > v) {
                lo = Some(set_lo.clone());
            }
            if hi.as_ref().is_none_or(|v| set_hi < v) {
                hi = Some(set_hi.clone());
            }
            if let (Some(l), Some(h)) = (&lo, &hi) {
                if l > h {
                    empty = true;
                    break;
                }
            }
        }
        if empty {
            if _t_sweep.elapsed().as_millis() > 10 {
                eprintln!("sweep level {bits}: {:.2?} (empty)", _t_sweep.elapsed());
            }
            continue;
        }
        let (lo, hi) = (lo?, hi?);
        let scale = den * (BigInt::from(1) << bits);
        let g = if lo == hi {
            Rat::new(lo, scale)
        } else {
            Rat::new(lo + hi, scale * BigInt::from(2))
        };
        let den_bits = BigInt::from(1i64 << bits);
        let mut coeffs: Vec<Rat> = nums
            .iter()
            .map(|&n| Rat::new(BigInt::from(n), den_bits.clone()))
            .collect();
        coeffs.push(-g);
        let q = build_poly(basis, &coeffs, frame);
        let ok = verify(&q, active);
        if _t_sweep.elapsed().as_millis() > 10 {
            eprintln!("sweep level {bits}: {:.2?} (ok={ok})", _t_sweep.elapsed());
        }
        if ok {
            return Some(q);
        }
    }
    None
}

/// Forces the given points onto the zero set by exact elimination and snaps
/// only the remaining free coordinates: the anchors vanish exactly, so the
/// strict sides they leave behind are what the exact verification counts.
///
/// The elimination is fraction-free (Bareiss): rows arrive as integer
/// vectors, each step updates the remaining submatrix with the two-by-two
/// determinant rule and divides out the previous pivot, which is exact by
/// the Sylvester identity.  Entry growth stays determinant-bounded and no
/// gcd normalization runs inside the loop; rationals appear only in the
/// back-substitution over the pivot rows.
fn certify_with_anchors(
    w: &[f64],
    active: &[ActiveSet],
    basis: &[Mono3],
    frame: &Frame,
    anchor_rows: Vec<&Vec<BigInt>>,
) -> Option<TriPoly> {
    let dims = w.len();
    let _t = std::time::Instant::now();
    struct G(std::time::Instant, usize);
    impl Drop for G {
        fn drop(&mut self) {
            let e = self.0.elapsed();
            if e.as_millis() > 10 {
                eprintln!("anchored completion: {e:.2?} anchors={}", self.1);
            }
        }
    }
    let _g = G(_t, anchor_rows.len());
    let mut mat: Vec<Vec<BigInt>> = anchor_rows.iter().map(|r| (*r).clone()).collect();
    let nrows = mat.len();
    let mut row_free = vec![true; nrows];
    let mut col_free = vec![true; dims];
    // Pivot row and column per elimination step, in pick order.
    let mut steps: Vec<(usize, usize)> = Vec::new();
    let mut prev = BigInt::from(1);
    loop {
        // Complete pivoting on the largest remaining entry keeps the solved
        // pivot coordinates small, so the candidate stays close to the
        // projected iterate.
        let mut best: Option<(usize, usize)> = None;
        for r in (0..nrows).filter(|&r| row_free[r]) {
            for c in (0..dims).filter(|&c| col_free[c]) {
                if mat[r][c].is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((br, bc)) => mat[r][c].magnitude() > mat[br][bc].magnitude(),
                };
                if better {
                    best = Some((r, c));
                }
            }
        }
        // Remaining rows are zero: dependent constraints, already satisfied.
        let Some((pr, pc)) = best else { break };
        row_free[pr] = false;
        col_free[pc] = false;
        let pivot = mat[pr][pc].clone();
        for r in (0..nrows).filter(|&r| row_free[r]) {
            let lead = std::mem::take(&mut mat[r][pc]);
            for c in (0..dims).filter(|&c| c != pc) {
                let num = &mat[r][c] * &pivot - &lead * &mat[pr][c];
                debug_assert!(num.is_multiple_of(&prev), "bareiss division stays exact");
                mat[r][c] = num / &prev;
            }
        }
        prev = pivot;
        steps.push((pr, pc));
    }
    eprintln!("  elim: {:.2?} steps={}", _t.elapsed(), steps.len());
    if steps.len() >= dims {
        return None;
    }

    let bits = *SNAP_BITS.last().unwrap();
    let mut coeffs: Vec<Rat> = (0..dims)
        .map(|c| if col_free[c] { snap(w[c], bits) } else { Rat::zero() })
        .collect();
    // Each pivot row was frozen at its own step, when all earlier pivot
    // columns had just been zeroed in it, so in reverse pick order every
    // unknown it touches is already solved or free.
    for &(pr, pc) in steps.iter().rev() {
        let mut v = Rat::zero();
        for c in (0..dims).filter(|&c| c != pc) {
            if !mat[pr][c].is_zero() && !coeffs[c].is_zero() {
                v += Rat::from_bigint(mat[pr][c].clone()) * &coeffs[c];
            }
        }
        coeffs[pc] = -(v / Rat::from_bigint(mat[pr][pc].clone()));
    }
    if coeffs.iter().all(Rat::is_zero) {
        return None;
    }
    eprintln!("  backsub done: {:.2?}", _t.elapsed());
    // The candidate must reproduce the projected iterate to well below the
    // sign clearance, otherwise unanchored points could flip between the
    // float preview and the exact count.
    let drift = coeffs
        .iter()
        .zip(w)
        .map(|(c, x)| (c.to_f64() - x).abs())
        .fold(0.0, f64::max);
    if drift * 4.0 * dims as f64 > SIGN_CLEARANCE {
        eprintln!("anchored bail: drift={drift:.2e} anchors={}", anchor_rows.len());
        return None;
    }
    let q = build_poly(basis, &coeffs, frame);
    let ok = verify(&q, active);
    if !ok {
        eprintln!("anchored bail: exact verify failed, anchors={}", anchor_rows.len());
    }
    ok.then_some(q)
}

/// Expands coefficients over the reframed basis back to original
/// coordinates by composing with `(x_a - mu_a) / s_a` exactly.
fn build_poly(basis: &[Mono3], coeffs: &[Rat], frame: &Frame) -> TriPoly {
    let top = basis.iter().fold([0u32; 3], |acc, m| {
        [acc[0].max(m.ex), acc[1].max(m.ey), acc[2].max(m.ez)]
    });
    let pows: Vec<Vec<TriPoly>> = (0..3)
        .map(|axis| {
            let mut exps = [0u32; 3];
            exps[axis] = 1;
            let linear = TriPoly::from_terms([
                (exps[0], exps[1], exps[2], Rat::one() / &frame.scale[axis]),
                (0, 0, 0, -(&frame.mu[axis] / &frame.scale[axis])),
            ]);
            let mut axis_pows = vec![TriPoly::one()];
            for k in 0..top[axis] as usize {
                axis_pows.push(axis_pows[k].mul(&linear));
            }
            axis_pows
        })
        .collect();
    let mut p = TriPoly::zero();
    for (m, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let term = pows[0][m.ex as usize]
            .mul(&pows[1][m.ey as usize])
            .mul(&pows[2][m.ez as usize]);
        p = p.add(&term.scale(c));
    }
    let offset = &coeffs[basis.len()];
    if !offset.is_zero() {
        p = p.add(&TriPoly::constant(offset.clone()));
    }
    p.canonical()
}

fn verify(q: &TriPoly, active: &[ActiveSet]) -> bool {
    if q.is_zero() {
        return false;
    }
    for set in active {
        let mut pos = 0usize;
        let mut neg = 0usize;
        for p in &set.points {
            match q.eval_sign(p) {
                1 => pos += 1,
                -1 => neg += 1,
                _ => {}
            }
        }
        if pos > set.cap || neg > set.cap {
            return false;
        }
    }
    true
}

/// Where a point ends up relative to the round polynomials: either on the
/// zero set of some round, or in the cell named by its sign vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CellLabel {
    OnZ,
    Cell(Vec<i8>),
}

/// Exact cell counts for a point set against a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellHistogram {
    pub classes: BTreeMap<Vec<i8>, usize>,
    pub on_z: usize,
}

impl CellHistogram {
    pub fn total(&self) -> usize {
        self.classes.values().sum::<usize>() + self.on_z
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn max_class(&self) -> usize {
        self.classes.values().copied().max().unwrap_or(0)
    }
}

/// Result of the partitioning loop.  `product` is the product of the round
/// polynomials, times the cube face planes once augmented.
#[derive(Debug, Clone)]
pub struct Partition {
    schedule: DegreeSchedule,
    slack: Rat,
    rounds: Vec<TriPoly>,
    product: TriPoly,
    cube: Option<CubeFaces>,
}

impl Partition {
    pub fn schedule(&self) -> &DegreeSchedule {
        &self.schedule
    }

    pub fn slack(&self) -> &Rat {
        &self.slack
    }

    pub fn round_polys(&self) -> &[TriPoly] {
        &self.rounds
    }

    pub fn product(&self) -> &TriPoly {
        &self.product
    }

    pub fn cube(&self) -> Option<&CubeFaces> {
        self.cube.as_ref()
    }

    /// Exact signs of the round polynomials at `x`; `OnZ` iff any is zero.
    pub fn cell_label(&self, x: &Point3) -> CellLabel {
        let mut signs = Vec::with_capacity(self.rounds.len());
        for q in &self.rounds {
            match q.eval_sign(x) {
                0 => return CellLabel::OnZ,
                s => signs.push(s),
            }
        }
        CellLabel::Cell(signs)
    }

    pub fn cell_histogram(&self, points: &[Point3]) -> CellHistogram {
        let mut hist = CellHistogram {
            classes: BTreeMap::new(),
            on_z: 0,
        };
        for p in points {
            match self.cell_label(p) {
                CellLabel::OnZ => hist.on_z += 1,
                CellLabel::Cell(signs) => *hist.classes.entry(signs).or_insert(0) += 1,
            }
        }
        hist
    }
}

/// Iterated near-bisection: round `j` (degree `d_j` from the schedule)
/// bisects every sign class of the previous rounds at once.  Points landing
/// on a round's zero set are retired as `OnZ`; the rest end up in cells of
/// at most `max(1, n ((1 + 2 eps) / 2)^rounds)` points.
///
/// Round seeds are drawn up front from a master stream, so the rounds are
/// reproducible individually.  Duplicate input points are collapsed before
/// bisection.
pub fn gk_partition(
    points: &[Point3],
    rounds: usize,
    eps: &Rat,
    seed: u64,
) -> Result<Partition, PartitionError> {
    assert!(!points.is_empty(), "cannot partition an empty point set");
    let schedule = DegreeSchedule::new(rounds);

    let distinct: Vec<Point3> = points
        .iter()
        .cloned()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let round_seeds: Vec<u64> = (0..rounds).map(|_| master.gen()).collect();

    let mut sign_hist: Vec<Option<Vec<i8>>> = vec![Some(Vec::new()); distinct.len()];
    let mut round_polys = Vec::with_capacity(rounds);
    for (j, &round_seed) in round_seeds.iter().enumerate() {
        let mut groups: BTreeMap<Vec<i8>, Vec<Point3>> = BTreeMap::new();
        for (i, p) in distinct.iter().enumerate() {
            if let Some(sig) = &sign_hist[i] {
                groups.entry(sig.clone()).or_default().push(p.clone());
            }
        }
        let sets: Vec<Vec<Point3>> = groups.into_values().collect();
        let q = bisect_sets(
            &sets,
            schedule.degree(j),
            eps,
            &BisectOptions {
                seed: round_seed,
                ..BisectOptions::default()
            },
        )?;
        for (i, p) in distinct.iter().enumerate() {
            if let Some(sig) = &mut sign_hist[i] {
                match q.eval_sign(p) {
                    0 => sign_hist[i] = None,
                    s => sig.push(s),
                }
            }
        }
        round_polys.push(q);
    }

    let product = round_polys
        .iter()
        .fold(TriPoly::one(), |acc, q| acc.mul(q));
    Ok(Partition {
        schedule,
        slack: eps.clone(),
        rounds: round_polys,
        product,
        cube: None,
    })
}

/// An axis-aligned cube enclosing the points, with faces nudged off the
/// input family.  Planes are inward-positive, ordered
/// `[x_lo, x_hi, y_lo, y_hi, z_lo, z_hi]`.
#[derive(Debug, Clone)]
pub struct CubeFaces {
    bounds: [(Rat, Rat); 3],
    planes: Vec<TriPoly>,
}

impl CubeFaces {
    pub fn bounds(&self) -> &[(Rat, Rat); 3] {
        &self.bounds
    }

    pub fn planes(&self) -> &[TriPoly] {
        &self.planes
    }

    /// Strict interior test.
    pub fn contains(&self, p: &Point3) -> bool {
        self.planes.iter().all(|q| q.eval_sign(p) == 1)
    }
}

/// Multiplies the partition product by six face planes of an axis-aligned
/// rational cube strictly containing the points, nudged until generic.
///
/// The cube starts from the bounding box padded by two on every side, and
/// each face shifts outward in steps of `1/97` until it contains no input
/// line or curve.  Each line or curve obstructs at most one position per
/// face, so the shift budget `lines + curves + 1` suffices; exhausting it
/// means the input was inconsistent and is reported as
/// [`PartitionError::GenericityFailure`].
pub fn augment_with_cube(
    part: &Partition,
    points: &[Point3],
    lines: &[Line3],
    curves: &[ParamCurve],
) -> Result<Partition, PartitionError> {
    assert!(part.cube.is_none(), "partition is already augmented");
    let cube = fit_cube(points, lines, curves)?;
    let product = cube
        .planes
        .iter()
        .fold(part.product.clone(), |acc, q| acc.mul(q));
    Ok(Partition {
        schedule: part.schedule.clone(),
        slack: part.slack.clone(),
        rounds: part.rounds.clone(),
        product,
        cube: Some(cube),
    })
}

fn fit_cube(
    points: &[Point3],
    lines: &[Line3],
    curves: &[ParamCurve],
) -> Result<CubeFaces, PartitionError> {
    let pad = Rat::from_int(2);
    let mut bounds: [(Rat, Rat); 3] = std::array::from_fn(|axis| {
        let lo = points.iter().map(|p| p.coord(axis)).min();
        let hi = points.iter().map(|p| p.coord(axis)).max();
        match (lo, hi) {
            (Some(lo), Some(hi)) => (lo - &pad, hi + &pad),
            _ => (-pad.clone(), pad.clone()),
        }
    });

    let step = Rat::new(BigInt::from(1), BigInt::from(97));
    let budget = lines.len() + curves.len() + 1;
    for axis in 0..3 {
        for side in 0..2 {
            let mut moved = 0usize;
            loop {
                let plane = face_plane(axis, side, &bounds[axis]);
                if !face_blocked(&plane, lines, curves) {
                    break;
                }
                if moved >= budget {
                    return Err(PartitionError::GenericityFailure);
                }
                if side == 0 {
                    bounds[axis].0 -= &step;
                } else {
                    bounds[axis].1 += &step;
                }
                moved += 1;
            }
        }
    }

    let planes = (0..3)
        .flat_map(|axis| [face_plane(axis, 0, &bounds[axis]), face_plane(axis, 1, &bounds[axis])])
        .collect();
    let cube = CubeFaces { bounds, planes };
    debug_assert!(points.iter().all(|p| cube.contains(p)));
    Ok(cube)
}

fn face_plane(axis: usize, side: usize, bounds: &(Rat, Rat)) -> TriPoly {
    let mut exps = [0u32; 3];
    exps[axis] = 1;
    if side == 0 {
        TriPoly::from_terms([
            (exps[0], exps[1], exps[2], Rat::one()),
            (0, 0, 0, -bounds.0.clone()),
        ])
    } else {
        TriPoly::from_terms([
            (exps[0], exps[1], exps[2], -Rat::one()),
            (0, 0, 0, bounds.1.clone()),
        ])
    }
}

fn face_blocked(plane: &TriPoly, lines: &[Line3], curves: &[ParamCurve]) -> bool {
    lines.iter().any(|l| restrict_to_line(plane, l).is_zero())
        || curves.iter().any(|g| restrict_to_curve(plane, g).is_zero())
}
