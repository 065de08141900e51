//! The bag-message dynamic program.
//!
//! Bags are processed children first. For bag `a` the message is
//!
//! ```text
//! g(a, z_S) = Σ_{z_V} Π_{u ∈ V_a} f(z_u) · exp(i Σ_j Γ_j C_{E_a}(z^[j])) · Π_c g(c, z_{S_c})
//! ```
//!
//! with the observable multiplied in at the root. Per-vertex domains are
//! either all `2^L` layer words or, with [`Reduction::Lightcone`], the words
//! that survive once gates outside the vertex's lightcone are cancelled.

use num_complex::Complex64;

use super::{kernel_word, AngleSchedule, Reduction};
use crate::error::{Error, Result};
use crate::graph::{distance_vector, CutInstance};
use crate::local::LocalInstance;
use crate::treewidth::RootedDecomposition;

/// Layer words a vertex ranges over, with the kernel weight of each.
#[derive(Debug, Clone)]
struct Domain {
    words: Vec<u32>,
    kernel: Vec<Complex64>,
}

fn full_domain(sched: &AngleSchedule) -> Domain {
    let words: Vec<u32> = (0..1u32 << sched.layers()).collect();
    let kernel = words.iter().map(|&w| kernel_word(w, sched)).collect();
    Domain { words, kernel }
}

/// Vertex touched by rounds `1..=k` only (`1 <= k <= p`). Its free layers
/// are `1..=k` and `-1..=-(k-1)`; layer `-k` equals layer `k` and all
/// deeper layers are zero. Summing `f` over the discarded layers leaves the
/// shortened mixer chain, since the middle rotations multiply to identity.
fn truncated_domain(sched: &AngleSchedule, k: usize) -> Domain {
    let p = sched.p();
    if k == 0 {
        return Domain { words: vec![0], kernel: vec![Complex64::new(1.0, 0.0)] };
    }
    let forward = (1u32 << k) - 1;
    let backward = ((1u32 << (k - 1)) - 1) << (2 * p + 2 - k);
    let free = forward | backward;
    let tied = 2 * p + 1 - k;
    let mut acc = std::collections::BTreeMap::<u32, Complex64>::new();
    for w in 0..1u32 << sched.layers() {
        let key = (w & free) | (((w >> (k - 1)) & 1) << tied);
        *acc.entry(key).or_default() += kernel_word(w, sched);
    }
    Domain { words: acc.keys().copied().collect(), kernel: acc.values().copied().collect() }
}

/// Observable vertex: layer 0 is summed against `z^[0]`, so the root
/// multiplies the parity of the anchor spins in directly.
fn anchor_domain(sched: &AngleSchedule) -> Domain {
    let p = sched.p();
    let words: Vec<u32> = (0..1u32 << sched.layers()).filter(|w| (w >> p) & 1 == 0).collect();
    let kernel = words
        .iter()
        .map(|&w| kernel_word(w, sched) - kernel_word(w | 1 << p, sched))
        .collect();
    Domain { words, kernel }
}

/// A finished message `g(a, ·)`.
///
/// Entries are indexed vertex-major over the separator (ascending local id,
/// first vertex most significant) with each vertex contributing the rank of
/// its layer word in its domain. Without reduction every domain is the full
/// `0..2^L`, so the index is the concatenation of the separator words.
#[derive(Debug, Clone, PartialEq)]
pub struct BagMessageTable {
    pub bag: usize,
    pub separator: Vec<usize>,
    /// Domain size of each separator vertex.
    pub radices: Vec<usize>,
    pub values: Vec<Complex64>,
}

struct Plan<'a> {
    sched: &'a AngleSchedule,
    domains: Vec<Domain>,
    class: Vec<usize>,
    /// `scale · Σ_b Γ_b bit_b(x)`, tabulated when `2^L` is small.
    angle_table: Option<Vec<f64>>,
    gv: Vec<f64>,
    scale: f64,
}

impl Plan<'_> {
    fn angle(&self, x: u32) -> f64 {
        match &self.angle_table {
            Some(t) => t[x as usize],
            None => {
                let mut s = 0.0;
                let mut m = x;
                while m != 0 {
                    s += self.gv[m.trailing_zeros() as usize];
                    m &= m - 1;
                }
                self.scale * s
            }
        }
    }

    fn domain(&self, v: usize) -> &Domain {
        &self.domains[self.class[v]]
    }
}

fn plan<'a, I: CutInstance>(local: &LocalInstance<I>, sched: &'a AngleSchedule, reduction: Reduction) -> Plan<'a> {
    let n = local.sub.num_vertices();
    let p = sched.p();
    let (domains, class) = match reduction {
        Reduction::None => (vec![full_domain(sched)], vec![0; n]),
        Reduction::Lightcone => {
            let dist = distance_vector(&local.sub.primal_adjacency(), &local.anchor);
            // Class 0 is the anchor, class j >= 1 is "rounds 1..=j-1 visible".
            let mut domains = vec![anchor_domain(sched)];
            domains.extend((0..=p).map(|k| truncated_domain(sched, k)));
            let class = dist
                .iter()
                .map(|&d| if d == 0 { 0 } else { 1 + (p + 1).saturating_sub(d) })
                .collect();
            (domains, class)
        }
    };
    let gv = sched.gamma_vector();
    let scale = sched.convention().scale();
    let layers = sched.layers();
    let angle_table = (layers <= 16).then(|| {
        (0..1u32 << layers)
            .map(|x| scale * (0..layers).filter(|b| (x >> b) & 1 == 1).map(|b| gv[b]).sum::<f64>())
            .collect()
    });
    Plan { sched, domains, class, angle_table, gv, scale }
}

/// One multiplicative factor of a bag's summand, evaluated as soon as all
/// of its slots are assigned.
enum Factor<'t> {
    /// A term's phase, or the observable, looked up by the XOR of the
    /// members' layer words.
    Table { slots: Vec<usize>, table: Vec<Complex64> },
    /// A term's phase computed directly (long layer words).
    Angle { slots: Vec<usize>, weight: f64 },
    /// A child message; `(slot, stride)` per child separator vertex.
    Child { map: Vec<(usize, usize)>, values: &'t [Complex64] },
}

impl Factor<'_> {
    fn last_slot(&self) -> Option<usize> {
        match self {
            Factor::Table { slots, .. } | Factor::Angle { slots, .. } => slots.iter().copied().max(),
            Factor::Child { map, .. } => map.iter().map(|m| m.0).max(),
        }
    }

    /// Value with every slot except `level` fixed, as a partial key: the
    /// XOR of the other words, or the index offset of the other ranks.
    #[inline]
    fn partial(&self, level: usize, rank: &[usize], word: &[u32]) -> usize {
        match self {
            Factor::Table { slots, .. } | Factor::Angle { slots, .. } => {
                slots.iter().filter(|&&s| s != level).fold(0u32, |x, &s| x ^ word[s]) as usize
            }
            Factor::Child { map, .. } => map.iter().filter(|m| m.0 != level).map(|&(s, stride)| rank[s] * stride).sum(),
        }
    }

    /// Stride of `level` inside a child lookup (zero if absent).
    fn own_stride(&self, level: usize) -> usize {
        match self {
            Factor::Child { map, .. } => map.iter().find(|m| m.0 == level).map_or(0, |m| m.1),
            _ => 0,
        }
    }

    /// Value of a factor that involves no slot at all.
    fn constant(&self, plan: &Plan<'_>) -> Complex64 {
        match self {
            Factor::Table { table, .. } => table[0],
            Factor::Angle { weight, .. } => Complex64::from_polar(1.0, weight * plan.angle(0)),
            Factor::Child { values, .. } => values[0],
        }
    }
}

/// Largest layer count for which per-term phase tables are built.
const TABLE_LAYERS: usize = 14;

struct BagLoop<'a, 't> {
    plan: &'a Plan<'a>,
    doms: Vec<&'a Domain>,
    /// Number of separator slots; they come first and index the output.
    ns: usize,
    out_stride: Vec<usize>,
    /// Factors grouped by the slot that completes them, with the stride of
    /// that slot for child lookups.
    levels: Vec<Vec<(Factor<'t>, usize)>>,
}

impl BagLoop<'_, '_> {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        level: usize,
        prefix: Complex64,
        rank: &mut [usize],
        word: &mut [u32],
        out: usize,
        values: &mut [Complex64],
        scratch: &mut [Vec<usize>],
    ) {
        let (partials, deeper) = scratch.split_first_mut().expect("one scratch buffer per level");
        let factors = &self.levels[level];
        partials.clear();
        partials.extend(factors.iter().map(|(f, _)| f.partial(level, rank, word)));
        let d = self.doms[level];
        let last = level + 1 == self.doms.len();
        let introduced = level >= self.ns;
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, &w) in d.words.iter().enumerate() {
            let mut v = if introduced { prefix * d.kernel[r] } else { prefix };
            for ((f, stride), &part) in factors.iter().zip(partials.iter()) {
                v *= match f {
                    Factor::Table { table, .. } => table[part ^ w as usize],
                    Factor::Child { values, .. } => values[part + r * stride],
                    Factor::Angle { weight, .. } => Complex64::from_polar(1.0, weight * self.plan.angle(part as u32 ^ w)),
                };
            }
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let next = if introduced { out } else { out + r * self.out_stride[level] };
            if last {
                if introduced {
                    acc += v;
                } else {
                    values[next] += v;
                }
            } else {
                rank[level] = r;
                word[level] = w;
                self.walk(level + 1, v, rank, word, next, values, deeper);
            }
        }
        if last && introduced {
            values[out] += acc;
        }
    }
}

/// Computes every bag message, children first; the last entry is the root.
fn messages<I: CutInstance>(
    local: &LocalInstance<I>,
    rd: &RootedDecomposition,
    plan: &Plan<'_>,
    reduction: Reduction,
) -> Result<Vec<BagMessageTable>> {
    let root_bag = &rd.base.bags[rd.root];
    if !local.anchor.iter().all(|v| root_bag.binary_search(v).is_ok()) {
        return Err(Error::AnchorNotInRoot(local.anchor.clone()));
    }
    let p = plan.sched.p();
    let layers = plan.sched.layers();
    let nb = rd.base.bags.len();
    let mut done: Vec<Option<BagMessageTable>> = vec![None; nb];

    for &a in rd.order.iter().rev() {
        // Slots: separator vertices first, then introduced ones.
        let slots: Vec<usize> = rd.separators[a].iter().chain(&rd.introduced_vertices[a]).copied().collect();
        let slot_of = |v: usize| slots.iter().position(|&x| x == v).expect("vertex lives in the bag");
        let ns = rd.separators[a].len();
        let doms: Vec<&Domain> = slots.iter().map(|&v| plan.domain(v)).collect();
        let radix: Vec<usize> = doms.iter().map(|d| d.words.len()).collect();

        let mut factors: Vec<Factor<'_>> = Vec::new();
        for &t in &rd.introduced_terms[a] {
            let (vs, w) = local.sub.term(t);
            let slots = vs.iter().map(|&v| slot_of(v)).collect();
            factors.push(if layers <= TABLE_LAYERS {
                let table = (0..1u32 << layers).map(|x| Complex64::from_polar(1.0, w * plan.angle(x))).collect();
                Factor::Table { slots, table }
            } else {
                Factor::Angle { slots, weight: w }
            });
        }
        if a == rd.root && reduction == Reduction::None {
            // Observable parity on layer 0.
            let table = (0..1u32 << layers).map(|x| Complex64::new(((x >> p) & 1) as f64, 0.0)).collect();
            factors.push(Factor::Table { slots: local.anchor.iter().map(|&v| slot_of(v)).collect(), table });
        }
        for &c in &rd.children[a] {
            let msg = done[c].as_ref().expect("children are finished first");
            let mut stride = 1;
            let mut map: Vec<(usize, usize)> = msg
                .separator
                .iter()
                .zip(&msg.radices)
                .rev()
                .map(|(&v, &r)| {
                    let entry = (slot_of(v), stride);
                    stride *= r;
                    entry
                })
                .collect();
            map.reverse();
            factors.push(Factor::Child { map, values: &msg.values });
        }

        let mut levels: Vec<Vec<(Factor<'_>, usize)>> = (0..slots.len()).map(|_| Vec::new()).collect();
        let mut constant = Complex64::new(1.0, 0.0);
        for f in factors {
            match f.last_slot() {
                Some(level) => {
                    let stride = f.own_stride(level);
                    levels[level].push((f, stride));
                }
                None => constant *= f.constant(plan),
            }
        }
        let mut out_stride = vec![1usize; ns];
        for s in (0..ns.saturating_sub(1)).rev() {
            out_stride[s] = out_stride[s + 1] * radix[s + 1];
        }
        let out_len: usize = radix[..ns].iter().product();
        let mut values = vec![Complex64::new(0.0, 0.0); out_len];
        let looper = BagLoop { plan, doms, ns, out_stride, levels };
        if slots.is_empty() {
            values[0] = constant;
        } else {
            let mut rank = vec![0usize; slots.len()];
            let mut word = vec![0u32; slots.len()];
            let mut scratch = vec![Vec::new(); slots.len()];
            looper.walk(0, constant, &mut rank, &mut word, 0, &mut values, &mut scratch);
        }

        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("bag message"));
        }
        done[a] = Some(BagMessageTable { bag: a, separator: rd.separators[a].clone(), radices: radix[..ns].to_vec(), values });
    }
    Ok(rd.order.iter().rev().map(|&a| done[a].take().expect("every bag is processed")).collect())
}

/// All bag messages in processing order (root last).
pub fn message_tables<I: CutInstance>(
    local: &LocalInstance<I>,
    rd: &RootedDecomposition,
    sched: &AngleSchedule,
    reduction: Reduction,
) -> Result<Vec<BagMessageTable>> {
    let plan = plan(local, sched, reduction);
    messages(local, rd, &plan, reduction)
}

pub(super) fn run<I: CutInstance>(
    local: &LocalInstance<I>,
    rd: &RootedDecomposition,
    sched: &AngleSchedule,
    reduction: Reduction,
) -> Result<Complex64> {
    crate::treewidth::validate(&rd.base, &local.sub).map_err(Error::InvalidDecomposition)?;
    let plan = plan(local, sched, reduction);
    let tables = messages(local, rd, &plan, reduction)?;
    let total = tables.last().expect("at least one bag").values[0];
    let w = local.anchor_weight();
    Ok(match reduction {
        Reduction::None => total * w,
        // The root total is ⟨Π_{i ∈ S0} Z_i⟩.
        Reduction::Lightcone => (Complex64::new(1.0, 0.0) - total) * (w / 2.0),
    })
}
