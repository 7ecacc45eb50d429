#include "hompart/pipeline.hpp"

#include "hompart/graphreg.hpp"
#include "hompart/parallel.hpp"
#include "hompart/vc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace hompart {

namespace {

Threshold thr_root(const Ratio& base, unsigned r) {
    return Threshold::root(Ratio::integer(1), base, r);
}

double ratio_to_double(const Ratio& r) {
    return r.num().convert_to<double>() / r.den().convert_to<double>();
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_ll(long long v) { return std::to_string(v); }

std::string fmt_fraction(long long num, long long den) {
    if (den == 0) return "0/0";
    return fmt_double(static_cast<double>(num) / static_cast<double>(den)) + " (" +
           fmt_ll(num) + "/" + fmt_ll(den) + ")";
}

void push_row(std::vector<RunlogRow>& log, std::string step, std::string bound, std::string formula,
              std::string achieved, bool pass) {
    log.push_back(RunlogRow{std::move(step), std::move(bound), std::move(formula),
                            std::move(achieved), pass});
}

void check_unit(const Ratio& r, const char* name) {
    if (!(Ratio() < r) || !(r < Ratio::integer(1)))
        throw std::invalid_argument(std::string("WorkingParams: ") + name + " must lie in (0,1)");
}

} // namespace

void validate_params(const WorkingParams& wp) {
    if (wp.k < 1) throw std::invalid_argument("WorkingParams: k must be >= 1");
    check_unit(wp.eps_slice, "eps_slice");
    check_unit(wp.eps_working, "eps_working");
    check_unit(wp.delta_cover, "delta_cover");
    check_unit(wp.delta_pack, "delta_pack");
    if (wp.size_cap < 0) throw std::invalid_argument("WorkingParams: size_cap must be >= 0");
    if (wp.threads == 0) throw std::invalid_argument("WorkingParams: threads must be >= 1");
}

// ---------------------------------------------------------------------------
// achieved_goodness

namespace {

// Pair histograms of min(|N(pair) cap Y|, |Y| - |N(pair) cap Y|) per block.
struct BlockHists {
    std::vector<std::vector<long long>> hist;  // per block, indexed by m'
    std::vector<long long> sizes;
    long long pairs_total = 0;
};

BlockHists goodness_hists(const TripartiteThreeGraph& h, int part_index, const Partition& p) {
    const PairTable* table = nullptr;
    int n1 = 0, n2 = 0;
    switch (part_index) {
        case 0: table = &h.table_vw(); n1 = h.nv(); n2 = h.nw(); break;
        case 1: table = &h.table_uw(); n1 = h.nu(); n2 = h.nw(); break;
        case 2: table = &h.table_uv(); n1 = h.nu(); n2 = h.nv(); break;
        default: throw std::invalid_argument("achieved_goodness: part_index must be 0, 1 or 2");
    }
    BlockHists out;
    out.pairs_total = static_cast<long long>(n1) * n2;
    const std::size_t nb = p.size();
    out.hist.resize(nb);
    out.sizes.resize(nb);
    std::vector<Bits> masks;
    masks.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        masks.push_back(p.block_bits(b));
        out.sizes[b] = p.block_size(b);
        out.hist[b].assign(static_cast<std::size_t>(out.sizes[b] / 2 + 1), 0);
    }
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            for (std::size_t b = 0; b < nb; ++b) {
                long long m = table->count_and(i, j, masks[b]);
                long long mp = std::min(m, out.sizes[b] - m);
                ++out.hist[b][static_cast<std::size_t>(mp)];
            }
    return out;
}

// Feasibility of "p is almost eps-good" from the histograms, evaluated with
// exact integer arithmetic. eps = pn/pd.
bool goodness_feasible(const BlockHists& bh, long long part_size, const bigint& pn,
                       const bigint& pd) {
    long long cov = 0;
    for (std::size_t b = 0; b < bh.hist.size(); ++b) {
        const long long sz = bh.sizes[b];
        // smallest m' with m' * pd >= pn * sz
        bigint lo = (pn * sz + pd - 1) / pd;
        long long cnt = 0;
        if (lo <= bh.sizes[b] / 2) {
            long long from = lo < 0 ? 0 : lo.convert_to<long long>();
            for (std::size_t m = static_cast<std::size_t>(from); m < bh.hist[b].size(); ++m)
                cnt += bh.hist[b][m];
        }
        if (bigint(cnt) * pd <= pn * bh.pairs_total) cov += sz;
    }
    return bigint(part_size - cov) * pd <= pn * part_size;
}

} // namespace

Ratio achieved_goodness(const TripartiteThreeGraph& h, int part_index, const Partition& p,
                        bool& valid) {
    const int part_size =
        part_index == 0 ? h.nu() : (part_index == 1 ? h.nv() : h.nw());
    if (p.ground_size() != part_size)
        throw std::invalid_argument("achieved_goodness: partition ground does not match the part");
    BlockHists bh = goodness_hists(h, part_index, p);

    // Candidate thresholds: the block flip points m'/|Y| and count/T, plus the
    // partition flip points (n - cov)/n at the covers those statuses realize.
    std::vector<Ratio> cands;
    cands.push_back(Ratio());
    cands.push_back(Ratio::integer(1));
    for (std::size_t b = 0; b < bh.hist.size(); ++b) {
        long long suffix = 0;
        for (std::size_t m = bh.hist[b].size(); m-- > 0;) {
            if (bh.hist[b][m] == 0) continue;
            suffix += bh.hist[b][m];
            cands.push_back(Ratio(static_cast<long long>(m), bh.sizes[b]));
            if (bh.pairs_total > 0) cands.push_back(Ratio(suffix, bh.pairs_total));
        }
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    if (part_size > 0) {
        std::vector<Ratio> extra;
        for (const Ratio& c : cands) {
            long long cov = 0;
            for (std::size_t b = 0; b < bh.hist.size(); ++b) {
                const long long sz = bh.sizes[b];
                bigint lo = (c.num() * sz + c.den() - 1) / c.den();
                long long cnt = 0;
                if (lo <= sz / 2) {
                    long long from = lo < 0 ? 0 : lo.convert_to<long long>();
                    for (std::size_t m = static_cast<std::size_t>(from); m < bh.hist[b].size(); ++m)
                        cnt += bh.hist[b][m];
                }
                if (bigint(cnt) * c.den() <= c.num() * bh.pairs_total) cov += sz;
            }
            extra.push_back(Ratio(part_size - cov, part_size));
        }
        cands.insert(cands.end(), extra.begin(), extra.end());
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    }

    // The pair criterion is strict at its lower edge, so the feasible set can
    // be open at a flip point. Every flip denominator is at most S, hence
    // f + 1/(den(f) S) stays at or below the next flip and represents the
    // open interval just above f.
    {
        const bigint S = bigint(bh.pairs_total) + part_size + 1;
        const std::size_t base = cands.size();
        for (std::size_t i = 0; i < base; ++i) {
            if (!(cands[i] < Ratio::integer(1))) continue;
            cands.push_back(cands[i] + Ratio(bigint(1), cands[i].den() * S));
        }
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    }

    // Feasibility is monotone in eps; find the first feasible candidate.
    std::size_t lo = 0, hi = cands.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (goodness_feasible(bh, part_size, cands[mid].num(), cands[mid].den()))
            hi = mid;
        else
            lo = mid + 1;
    }
    if (lo == cands.size()) {
        valid = false;
        return Ratio::integer(1);
    }
    valid = cands[lo] < Ratio::integer(1);
    return cands[lo];
}

// ---------------------------------------------------------------------------
// slice_reduce

namespace {

struct ProfileKey {
    std::array<long long, 3> degs{};
    int orig = 0;
    bool operator<(const ProfileKey& o) const {
        return std::tie(degs, orig) < std::tie(o.degs, o.orig);
    }
};

} // namespace

SliceReduction slice_reduce(const TripartiteThreeGraph& h, int x, const Ratio& eps_slice,
                            int size_cap, unsigned threads) {
    if (x < 0 || x >= h.nu()) throw std::invalid_argument("slice_reduce: x outside U");
    check_unit(eps_slice, "eps_slice");
    const int nv = h.nv(), nw = h.nw();
    BipartiteGraph g = h.slice_at_u(x);
    EquipartitionResult equi = homogeneous_equipartition(g, 0, eps_slice, size_cap, threads);

    SliceReduction red;
    red.x = x;
    red.equi_fallback = equi.used_fallback;
    red.size_cap_exceeded = equi.size_cap_exceeded;

    // Split the combined partition back into V-side and W-side blocks.
    std::vector<std::vector<int>> vb, wb;
    for (std::size_t i = 0; i < equi.partition.size(); ++i) {
        const std::vector<int>& blk = equi.partition.block(i);
        if (blk.front() < nv) {
            vb.push_back(blk);
        } else {
            std::vector<int> shifted(blk.size());
            for (std::size_t t = 0; t < blk.size(); ++t) shifted[t] = blk[t] - nv;
            wb.push_back(std::move(shifted));
        }
    }
    red.ell_v = static_cast<int>(vb.size());
    red.ell_w = static_cast<int>(wb.size());

    // Exact pair densities of the slice graph over the block grid.
    std::vector<Bits> wmask(wb.size(), Bits(static_cast<std::size_t>(nw)));
    for (std::size_t j = 0; j < wb.size(); ++j)
        for (int z : wb[j]) wmask[j].set(static_cast<std::size_t>(z));
    std::vector<std::vector<long long>> cnt(vb.size(), std::vector<long long>(wb.size(), 0));
    for (std::size_t i = 0; i < vb.size(); ++i)
        for (int y : vb[i])
            for (std::size_t j = 0; j < wb.size(); ++j)
                cnt[i][j] += g.row_a(y).and_count(wmask[j]);

    const Threshold te = Threshold::ratio(eps_slice);
    std::vector<std::vector<char>> irr(vb.size(), std::vector<char>(wb.size(), 0));
    std::vector<long long> irr_v(vb.size(), 0), irr_w(wb.size(), 0);
    for (std::size_t i = 0; i < vb.size(); ++i)
        for (std::size_t j = 0; j < wb.size(); ++j) {
            long long tot = static_cast<long long>(vb[i].size()) * static_cast<long long>(wb[j].size());
            if (!te.in_hom_interval(cnt[i][j], tot)) {
                irr[i][j] = 1;
                ++red.irregular_pairs;
                ++irr_v[i];
                ++irr_w[j];
            }
        }

    // Pool blocks with at least sqrt(eps_slice) * (opposite count) irregular
    // partners into index 0.
    const Threshold thalf = thr_root(eps_slice, 2);
    std::vector<int> vidx(vb.size(), 0), widx(wb.size(), 0);
    int r = 0, s = 0;
    for (std::size_t i = 0; i < vb.size(); ++i)
        if (red.ell_w == 0 || thalf.below(irr_v[i], red.ell_w)) vidx[i] = ++r;
    for (std::size_t j = 0; j < wb.size(); ++j)
        if (red.ell_v == 0 || thalf.below(irr_w[j], red.ell_v)) widx[j] = ++s;
    red.r = r;
    red.s = s;

    // Color matrix before canonicalization; index 0 row and column stay 2.
    std::vector<signed char> colors(static_cast<std::size_t>(r + 1) * (s + 1), 2);
    for (std::size_t i = 0; i < vb.size(); ++i) {
        if (vidx[i] == 0) continue;
        for (std::size_t j = 0; j < wb.size(); ++j) {
            if (widx[j] == 0) continue;
            long long tot = static_cast<long long>(vb[i].size()) * static_cast<long long>(wb[j].size());
            signed char c = 2;
            if (te.below_eq(cnt[i][j], tot)) c = 0;
            else if (te.above_eq_one_minus(cnt[i][j], tot)) c = 1;
            colors[static_cast<std::size_t>(vidx[i]) * (s + 1) + widx[j]] = c;
        }
    }

    // Canonical order of non-error indices: (color degree profile, index).
    // Profiles are permutation-invariant on the opposite side, so one pass
    // per side suffices.
    auto profile_rows = [&](bool rows) {
        int count = rows ? r : s;
        std::vector<ProfileKey> keys(static_cast<std::size_t>(count));
        for (int a = 1; a <= count; ++a) {
            ProfileKey k;
            k.orig = a;
            int opp = rows ? s : r;
            for (int b = 0; b <= opp; ++b) {
                int c = rows ? colors[static_cast<std::size_t>(a) * (s + 1) + b]
                             : colors[static_cast<std::size_t>(b) * (s + 1) + a];
                ++k.degs[static_cast<std::size_t>(c)];
            }
            keys[static_cast<std::size_t>(a - 1)] = k;
        }
        std::sort(keys.begin(), keys.end());
        std::vector<int> newpos(static_cast<std::size_t>(count + 1), 0);
        for (int a = 0; a < count; ++a)
            newpos[static_cast<std::size_t>(keys[static_cast<std::size_t>(a)].orig)] = a + 1;
        return newpos;
    };
    std::vector<int> vperm = profile_rows(true);
    std::vector<int> wperm = profile_rows(false);
    red.colors.assign(colors.size(), 2);
    for (int i = 0; i <= r; ++i)
        for (int j = 0; j <= s; ++j) {
            int ni = i == 0 ? 0 : vperm[static_cast<std::size_t>(i)];
            int nj = j == 0 ? 0 : wperm[static_cast<std::size_t>(j)];
            red.colors[static_cast<std::size_t>(ni) * (s + 1) + nj] =
                colors[static_cast<std::size_t>(i) * (s + 1) + j];
        }

    red.v_block.assign(static_cast<std::size_t>(nv), 0);
    red.w_block.assign(static_cast<std::size_t>(nw), 0);
    for (std::size_t i = 0; i < vb.size(); ++i) {
        int lab = vidx[i] == 0 ? 0 : vperm[static_cast<std::size_t>(vidx[i])];
        for (int y : vb[i]) red.v_block[static_cast<std::size_t>(y)] = lab;
    }
    for (std::size_t j = 0; j < wb.size(); ++j) {
        int lab = widx[j] == 0 ? 0 : wperm[static_cast<std::size_t>(widx[j])];
        for (int z : wb[j]) red.w_block[static_cast<std::size_t>(z)] = lab;
    }
    return red;
}

// ---------------------------------------------------------------------------
// group_slices

SliceGrouping group_slices(const TripartiteThreeGraph& h, const Ratio& eps_slice, int size_cap,
                           unsigned threads) {
    check_unit(eps_slice, "eps_slice");
    const int nu = h.nu();
    SliceGrouping out;
    out.reductions.resize(static_cast<std::size_t>(nu));
    parallel_for(static_cast<std::size_t>(nu), threads, [&](std::size_t x) {
        out.reductions[x] = slice_reduce(h, static_cast<int>(x), eps_slice, size_cap, 1);
    });

    using Key = std::tuple<int, int, int, int, std::string>;
    std::map<Key, int> index;
    for (int x = 0; x < nu; ++x) {
        const SliceReduction& red = out.reductions[static_cast<std::size_t>(x)];
        Key key{red.ell_v, red.ell_w, red.r, red.s,
                std::string(red.colors.begin(), red.colors.end())};
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, static_cast<int>(out.classes.size())).first;
            SliceClass cls;
            cls.ell_v = red.ell_v;
            cls.ell_w = red.ell_w;
            cls.r = red.r;
            cls.s = red.s;
            cls.colors = red.colors;
            out.classes.push_back(std::move(cls));
        }
        out.classes[static_cast<std::size_t>(it->second)].members.push_back(x);
    }

    // Small classes fold into U_err: |X| < eps_slice |U| / #classes, strict.
    out.u_err = Bits(static_cast<std::size_t>(nu));
    const Threshold te = Threshold::ratio(eps_slice);
    const long long total_classes = static_cast<long long>(out.classes.size());
    for (SliceClass& cls : out.classes) {
        long long scaled = static_cast<long long>(cls.members.size()) * total_classes;
        if (nu > 0 && te.below(scaled, nu)) {
            cls.pooled = true;
            for (int x : cls.members) out.u_err.set(static_cast<std::size_t>(x));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// mainslice_partition

namespace {

// Exact fraction tracker for worst-case rows; denominators stay positive.
struct Frac {
    long long n = 0, d = 1;
};

void take_max(Frac& acc, long long n, long long d) {
    if (d <= 0) return;
    if (static_cast<__int128>(n) * acc.d > static_cast<__int128>(acc.n) * d) acc = Frac{n, d};
}

void take_min(Frac& acc, long long n, long long d) {
    if (d <= 0) return;
    if (static_cast<__int128>(n) * acc.d < static_cast<__int128>(acc.n) * d) acc = Frac{n, d};
}

double frac_val(const Frac& f) { return static_cast<double>(f.n) / static_cast<double>(f.d); }

Partition one_block(const VertexPart& ground) {
    return ground.n == 0 ? Partition(ground, {}) : Partition::trivial(ground);
}

// Threshold comparisons with the empty-denominator cases pinned: c <= theta*0
// only for c == 0, and c >= (1-theta)*0 always.
bool le_at(const Threshold& th, long long c, long long t) { return t == 0 ? c <= 0 : th.below_eq(c, t); }
bool ge_om(const Threshold& th, long long c, long long t) { return t == 0 ? true : th.above_eq_one_minus(c, t); }

// Everything one refinement cell reports back to the sequential merge.
struct CellOutcome {
    bool skipped = false;  // no usable cover index, members rejoin the error set
    Partition dv;
    Frac q0{0, 1};         // worst pooled Q-degree over the cell, against |W|
    Frac p2{0, 1};         // worst unclassified P-mass, against |V|
    long long uk_witness = 0, uk_done = 0, uk_exhausted = 0, uk_skipped = 0;
    Frac pack_cover{1, 1};
    long long pack_size_max = 0;
    int pack_bad_steps = 0;
    long long t_with_mass = 0, t_good = 0, t_hom_bad = 0;
    long long cov_good = 0, mass = 0;
    long long va_size = 0, va_blocks = 0, va_bad = 0;
};

} // namespace

MainsliceResult mainslice_partition(const TripartiteThreeGraph& h, const SliceGrouping& grouping,
                                    int class_index, const WorkingParams& wp) {
    validate_params(wp);
    if (class_index < 0 || static_cast<std::size_t>(class_index) >= grouping.classes.size())
        throw std::invalid_argument("mainslice_partition: class index out of range");
    const SliceClass& cls = grouping.classes[static_cast<std::size_t>(class_index)];
    const int nv = h.nv(), nw = h.nw();
    const std::vector<int>& xs = cls.members;
    const int na = static_cast<int>(xs.size());
    const int r = cls.r, s = cls.s;
    const Ratio& ew = wp.eps_working;
    const Threshold te = Threshold::ratio(ew);
    const Threshold t2 = thr_root(ew, 2);
    const Threshold t4 = thr_root(ew, 4);
    const Threshold t8 = thr_root(ew, 8);
    const Threshold t16 = thr_root(ew, 16);
    const double ed = ratio_to_double(ew);
    const double mud = 8.0 * std::pow(16.0 * std::pow(ed, 1.0 / 16.0), 1.0 / (4.0 * wp.k + 4.0));

    MainsliceResult out;

    // Class-restricted host, ground X then V then W; every audit runs here.
    std::vector<int> a_of(static_cast<std::size_t>(h.nu()), -1);
    for (int a = 0; a < na; ++a) a_of[static_cast<std::size_t>(xs[a])] = a;
    std::vector<std::array<int, 3>> cls_edges;
    for (const auto& e : h.edges()) {
        int a = a_of[static_cast<std::size_t>(e[0])];
        if (a >= 0) cls_edges.push_back({a, e[1], e[2]});
    }
    TripartiteThreeGraph hcls(VertexPart{"X", na}, h.part_v(), h.part_w(), std::move(cls_edges));

    auto finish = [&](Partition pv) {
        out.pv = std::move(pv);
        out.audit = almost_good_partition(hcls, 1, out.pv, te);
        push_row(out.log, "VII", "pv_goodness", fmt_double(1.0 - ed),
                 fmt_fraction(out.audit.covered, std::max<long long>(1, out.audit.part_size)),
                 out.audit.is_almost_good);
        out.achieved_eps = achieved_goodness(hcls, 1, out.pv, out.achieved_valid);
        if (out.achieved_valid) {
            GoodnessAudit re = almost_good_partition(hcls, 1, out.pv, Threshold::ratio(out.achieved_eps));
            if (!re.is_almost_good)
                throw std::logic_error("mainslice_partition: achieved eps failed its own audit");
        }
        const double concl = 6.0 * std::pow(mud, 1.0 / 512.0);
        bool cpass = out.achieved_valid &&
                     (concl >= 1.0 || ratio_to_double(out.achieved_eps) <= concl);
        push_row(out.log, "VII", "achieved_eps", fmt_double(concl),
                 out.achieved_valid ? out.achieved_eps.str() : "none", cpass);
    };

    // Hypothesis (sl:0): slicewise VC below k on the class graph.
    SvcResult svc = slicewise_vc(hcls, wp.k, wp.threads);
    const bool sl0 = svc.value < wp.k;
    push_row(out.log, "hyp", "svc_lt_k", fmt_ll(wp.k),
             fmt_ll(svc.value) + std::string(svc.capped ? " (capped)" : ""), sl0);

    // Hypothesis (sl:5): few irregular partners among the non-error indices.
    long long sl5_bad = 0;
    for (int u = 1; u <= r; ++u) {
        long long d2 = 0;
        for (int v = 1; v <= s; ++v) d2 += cls.color(u, v) == 2;
        if (!le_at(te, d2, s)) ++sl5_bad;
    }
    for (int v = 1; v <= s; ++v) {
        long long d2 = 0;
        for (int u = 1; u <= r; ++u) d2 += cls.color(u, v) == 2;
        if (!le_at(te, d2, r)) ++sl5_bad;
    }
    const bool sl5 = sl5_bad == 0;
    push_row(out.log, "hyp", "f2_degrees", fmt_double(ed), fmt_ll(sl5_bad) + " over", sl5);

    if (na == 0 || nv == 0 || nw == 0 || r == 0 || s == 0) {
        out.warnings = true;
        out.hypotheses_ok = false;
        push_row(out.log, "I", "degenerate_class",
                 "", "r=" + fmt_ll(r) + " s=" + fmt_ll(s) + " |X|=" + fmt_ll(na), false);
        finish(one_block(h.part_v()));
        return out;
    }

    // Per-slice block masks; the grouping key guarantees one shared color graph.
    std::vector<std::vector<Bits>> bmask(static_cast<std::size_t>(na));
    std::vector<std::vector<Bits>> cmask(static_cast<std::size_t>(na));
    std::vector<std::vector<long long>> bsz(static_cast<std::size_t>(na)), csz(static_cast<std::size_t>(na));
    for (int a = 0; a < na; ++a) {
        const SliceReduction& red = grouping.reductions[static_cast<std::size_t>(xs[a])];
        bmask[a].assign(static_cast<std::size_t>(r) + 1, Bits(static_cast<std::size_t>(nv)));
        cmask[a].assign(static_cast<std::size_t>(s) + 1, Bits(static_cast<std::size_t>(nw)));
        for (int y = 0; y < nv; ++y) bmask[a][static_cast<std::size_t>(red.v_block[y])].set(static_cast<std::size_t>(y));
        for (int z = 0; z < nw; ++z) cmask[a][static_cast<std::size_t>(red.w_block[z])].set(static_cast<std::size_t>(z));
        bsz[a].resize(static_cast<std::size_t>(r) + 1);
        csz[a].resize(static_cast<std::size_t>(s) + 1);
        for (int u = 0; u <= r; ++u) bsz[a][u] = bmask[a][u].count();
        for (int v = 0; v <= s; ++v) csz[a][v] = cmask[a][v].count();
    }

    // Triad graph Gamma over (x, y; z) plus hypothesis scans, one pass per slice.
    std::vector<Bits> gamma(static_cast<std::size_t>(na) * static_cast<std::size_t>(nv));
    std::vector<long long> rowdeg(gamma.size(), 0);
    std::vector<long long> sl2_bad(static_cast<std::size_t>(na), 0);
    std::vector<Frac> sl2_worst(static_cast<std::size_t>(na));
    std::vector<char> sl3_ok(static_cast<std::size_t>(na), 1), sl4_ok(static_cast<std::size_t>(na), 1);
    parallel_for(static_cast<std::size_t>(na), wp.threads, [&](std::size_t ai) {
        const int a = static_cast<int>(ai);
        const int x = xs[ai];
        const SliceReduction& red = grouping.reductions[static_cast<std::size_t>(x)];
        std::vector<std::vector<long long>> cell(static_cast<std::size_t>(r) + 1,
                                                 std::vector<long long>(static_cast<std::size_t>(s) + 1, 0));
        Bits tmp(static_cast<std::size_t>(nw));
        for (int y = 0; y < nv; ++y) {
            Bits& g = gamma[ai * static_cast<std::size_t>(nv) + static_cast<std::size_t>(y)];
            g = Bits(static_cast<std::size_t>(nw));
            const int u = red.v_block[y];
            if (u == 0) continue;
            const Bits rowb = h.table_uv().row_copy(x, y);
            for (int v = 1; v <= s; ++v) {
                cell[u][v] += rowb.and_count(cmask[ai][v]);
                const int col = cls.color(u, v);
                if (col == 2) continue;
                tmp = cmask[ai][v];
                if (col == 1) tmp &= rowb; else tmp.and_not(rowb);
                g |= tmp;
            }
            rowdeg[ai * static_cast<std::size_t>(nv) + static_cast<std::size_t>(y)] = g.count();
        }
        for (int u = 1; u <= r; ++u)
            for (int v = 1; v <= s; ++v) {
                const int col = cls.color(u, v);
                if (col == 2) continue;
                const long long tot = bsz[ai][u] * csz[ai][v];
                const long long bad = col == 1 ? tot - cell[u][v] : cell[u][v];
                if (!le_at(te, bad, tot)) ++sl2_bad[ai];
                take_max(sl2_worst[ai], bad, tot);
            }
        sl4_ok[ai] = le_at(te, bsz[ai][0], nv) && le_at(te, csz[ai][0], nw);
        long long mn = nv + 1, mx = 0;
        for (int u = 1; u <= r; ++u) { mn = std::min(mn, bsz[ai][u]); mx = std::max(mx, bsz[ai][u]); }
        bool ok = mx - mn <= 1;
        mn = nw + 1; mx = 0;
        for (int v = 1; v <= s; ++v) { mn = std::min(mn, csz[ai][v]); mx = std::max(mx, csz[ai][v]); }
        sl3_ok[ai] = ok && mx - mn <= 1;
        (void)a;
    });

    long long sl2_total = 0;
    Frac sl2w{0, 1};
    bool sl3 = true, sl4 = true;
    for (int a = 0; a < na; ++a) {
        sl2_total += sl2_bad[a];
        take_max(sl2w, sl2_worst[a].n, sl2_worst[a].d);
        sl3 = sl3 && sl3_ok[a];
        sl4 = sl4 && sl4_ok[a];
    }
    push_row(out.log, "hyp", "pair_density", fmt_double(ed),
             fmt_ll(sl2_total) + " cells over, worst " + fmt_double(frac_val(sl2w)), sl2_total == 0);
    push_row(out.log, "hyp", "block_sizes", "within 1", sl3 ? "yes" : "no", sl3);
    push_row(out.log, "hyp", "pooled_mass", fmt_double(ed), sl4 ? "all within" : "over", sl4);
    out.hypotheses_ok = sl0 && sl2_total == 0 && sl3 && sl4 && sl5;

    // Degrees of Gamma and the good sets.
    std::vector<long long> colsum(static_cast<std::size_t>(nw), 0);
    std::vector<long long> vdeg(static_cast<std::size_t>(nv), 0);
    long long egam = 0;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        gamma[i].for_each_set([&](std::size_t z) { ++colsum[z]; });
        vdeg[i % static_cast<std::size_t>(nv)] += rowdeg[i];
        egam += rowdeg[i];
    }
    const long long tot3 = static_cast<long long>(na) * nv * nw;
    push_row(out.log, "I", "gamma_mass", fmt_double(1.0 - 3.0 * ed), fmt_fraction(egam, tot3),
             Ratio(tot3 - egam, tot3) <= Ratio::integer(3) * ew);

    Bits wg(static_cast<std::size_t>(nw)), vg(static_cast<std::size_t>(nv));
    for (int z = 0; z < nw; ++z)
        if (ge_om(t2, colsum[z], static_cast<long long>(na) * nv)) wg.set(static_cast<std::size_t>(z));
    for (int y = 0; y < nv; ++y)
        if (ge_om(t2, vdeg[y], static_cast<long long>(na) * nw)) vg.set(static_cast<std::size_t>(y));
    const long long n_wg = wg.count(), n_vg = vg.count();
    const Threshold t3sq = Threshold::root(Ratio::integer(3), ew, 2);
    push_row(out.log, "I", "w_good", fmt_double(1.0 - 3.0 * std::sqrt(ed)), fmt_fraction(n_wg, nw),
             le_at(t3sq, nw - n_wg, nw));
    push_row(out.log, "I", "v_good", fmt_double(1.0 - 3.0 * std::sqrt(ed)), fmt_fraction(n_vg, nv),
             le_at(t3sq, nv - n_vg, nv));

    // Good pair graph rows and the bad pair sets, per slice.
    std::vector<Bits> ggv(static_cast<std::size_t>(na)), ggw(static_cast<std::size_t>(na));
    std::vector<char> in_ug(static_cast<std::size_t>(na), 0);
    std::vector<long long> ggv_cnt(static_cast<std::size_t>(na), 0), ggw_cnt(static_cast<std::size_t>(na), 0);
    parallel_for(static_cast<std::size_t>(na), wp.threads, [&](std::size_t ai) {
        Bits gv(static_cast<std::size_t>(nv)), gw(static_cast<std::size_t>(nw));
        std::vector<long long> cnt(static_cast<std::size_t>(nw), 0);
        vg.for_each_set([&](std::size_t y) {
            const Bits& g = gamma[ai * static_cast<std::size_t>(nv) + y];
            if (ge_om(t4, g.and_count(wg), n_wg)) gv.set(y);
            g.for_each_set([&](std::size_t z) { ++cnt[z]; });
        });
        wg.for_each_set([&](std::size_t z) {
            if (ge_om(t4, cnt[z], n_vg)) gw.set(z);
        });
        ggv_cnt[ai] = gv.count();
        ggw_cnt[ai] = gw.count();
        Bits qb = cmask[ai][0];
        qb |= gw.complement();
        Bits pb = bmask[ai][0];
        pb |= gv.complement();
        in_ug[ai] = le_at(t8, qb.count(), n_wg) && le_at(t8, pb.count(), n_vg);
        ggv[ai] = std::move(gv);
        ggw[ai] = std::move(gw);
    });

    long long ggv_sum = 0, ggw_sum = 0;
    std::vector<int> ug_ids;
    for (int a = 0; a < na; ++a) {
        ggv_sum += ggv_cnt[a];
        ggw_sum += ggw_cnt[a];
        if (in_ug[a]) ug_ids.push_back(a);
    }
    const int n_ug = static_cast<int>(ug_ids.size());
    const Threshold t3q = Threshold::root(Ratio::integer(3), ew, 4);
    const Threshold t4e = Threshold::root(Ratio::integer(4), ew, 8);
    push_row(out.log, "I", "pair_good_uv", fmt_double(1.0 - 3.0 * std::pow(ed, 0.25)),
             fmt_fraction(ggv_sum, static_cast<long long>(na) * nv),
             le_at(t3q, static_cast<long long>(na) * nv - ggv_sum, static_cast<long long>(na) * nv));
    push_row(out.log, "I", "pair_good_uw", fmt_double(1.0 - 3.0 * std::pow(ed, 0.25)),
             fmt_fraction(ggw_sum, static_cast<long long>(na) * nw),
             le_at(t3q, static_cast<long long>(na) * nw - ggw_sum, static_cast<long long>(na) * nw));
    push_row(out.log, "I", "u_good", fmt_double(1.0 - 4.0 * std::pow(ed, 0.125)),
             fmt_fraction(n_ug, na), le_at(t4e, na - n_ug, na));

    if (n_ug == 0) {
        out.warnings = true;
        push_row(out.log, "II", "u_good_empty", "", "no slices survive", false);
        finish(one_block(h.part_v()));
        return out;
    }

    // Filtered Q columns for the surviving slices.
    std::vector<std::vector<Bits>> qgood(static_cast<std::size_t>(na));
    for (int a : ug_ids) {
        qgood[static_cast<std::size_t>(a)].assign(static_cast<std::size_t>(s) + 1, Bits());
        for (int v = 1; v <= s; ++v) {
            Bits q = cmask[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)];
            q &= ggw[static_cast<std::size_t>(a)];
            qgood[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)] = std::move(q);
        }
    }

    // Step II: one neighborhood cover per column index.
    std::vector<int> wg_ids;
    std::vector<int> wpos(static_cast<std::size_t>(nw), -1);
    wg.for_each_set([&](std::size_t z) {
        wpos[z] = static_cast<int>(wg_ids.size());
        wg_ids.push_back(static_cast<int>(z));
    });
    std::vector<CoverResult> covers(static_cast<std::size_t>(s) + 1);
    std::vector<std::vector<int>> lbl(static_cast<std::size_t>(s) + 1,
                                      std::vector<int>(static_cast<std::size_t>(n_ug), 0));
    bool cover_verified = true, cover_t_ok = true, cover_err_ok = true;
    long long kmax = 0;
    Frac xerr_frac{0, 1};
    const Threshold tdq = thr_root(wp.delta_cover, 4);
    for (int v = 1; v <= s; ++v) {
        BipartiteGraph bv(VertexPart{"Ug", n_ug}, VertexPart{"Wg", static_cast<int>(wg_ids.size())});
        for (int i = 0; i < n_ug; ++i)
            qgood[static_cast<std::size_t>(ug_ids[i])][static_cast<std::size_t>(v)].for_each_set(
                [&](std::size_t z) { bv.add_edge(i, wpos[z]); });
        covers[v] = greedy_cover(bv, wp.delta_cover);
        const CoverCheck ck = verify_cover(bv, covers[v]);
        // t_ok is the paper bound, reported through the cover_t row instead.
        cover_verified = cover_verified && ck.partition_ok && ck.containment_ok && ck.sizes_ok &&
                         ck.degree_ok && ck.err_ok;
        cover_t_ok = cover_t_ok && covers[v].t_bound_ok;
        kmax = std::max(kmax, static_cast<long long>(covers[v].blocks.size()));
        const long long ec = covers[v].a_err.count();
        take_max(xerr_frac, ec, n_ug);
        cover_err_ok = cover_err_ok && le_at(tdq, ec, n_ug);
        for (std::size_t j = 0; j < covers[v].blocks.size(); ++j)
            for (int i : covers[v].blocks[j]) lbl[v][static_cast<std::size_t>(i)] = static_cast<int>(j) + 1;
        covers[v].a_err.for_each_set([&](std::size_t i) { lbl[v][i] = -1; });
    }
    const double dd = ratio_to_double(wp.delta_cover);
    push_row(out.log, "II", "cover_t", fmt_double(std::pow(dd, -0.5)), fmt_ll(kmax), cover_t_ok);
    push_row(out.log, "II", "cover_err", fmt_double(std::pow(dd, 0.25)), fmt_double(frac_val(xerr_frac)),
             cover_err_ok);
    push_row(out.log, "II", "cover_verified", "", fmt_ll(s) + " covers", cover_verified);

    // Common refinement of the covers, small and error cells pooled.
    std::map<std::vector<int>, int> cell_index;
    std::vector<std::vector<int>> cellmem;
    for (int i = 0; i < n_ug; ++i) {
        std::vector<int> key(static_cast<std::size_t>(s));
        for (int v = 1; v <= s; ++v) key[static_cast<std::size_t>(v - 1)] = lbl[v][static_cast<std::size_t>(i)];
        auto it = cell_index.find(key);
        if (it == cell_index.end()) {
            it = cell_index.emplace(std::move(key), static_cast<int>(cellmem.size())).first;
            cellmem.emplace_back();
        }
        cellmem[static_cast<std::size_t>(it->second)].push_back(i);
    }
    const long long ncells = static_cast<long long>(cellmem.size());
    push_row(out.log, "II", "refinement_cells", fmt_double(std::pow(std::pow(dd, -0.5) + 2.0, s)),
             fmt_ll(ncells), static_cast<double>(ncells) <= std::pow(std::pow(dd, -0.5) + 2.0, s));

    Bits uerr(static_cast<std::size_t>(na));
    for (int a = 0; a < na; ++a) uerr.set(static_cast<std::size_t>(a));
    for (int a : ug_ids) uerr.reset(static_cast<std::size_t>(a));
    std::vector<int> live;
    for (int c = 0; c < ncells; ++c) {
        const std::vector<int>& mem = cellmem[static_cast<std::size_t>(c)];
        bool err = le_at(te, static_cast<long long>(mem.size()) * ncells, n_ug);
        for (int v = 1; v <= s && !err; ++v) err = lbl[v][static_cast<std::size_t>(mem[0])] == -1;
        if (err)
            for (int i : mem) uerr.set(static_cast<std::size_t>(ug_ids[i]));
        else
            live.push_back(c);
    }

    // Steps III to VI per surviving cell.
    std::vector<CellOutcome> cells_out(live.size());
    parallel_for(live.size(), wp.threads, [&](std::size_t li) {
        CellOutcome co;
        const std::vector<int>& mem = cellmem[static_cast<std::size_t>(live[li])];
        const int m = static_cast<int>(mem.size());
        std::vector<int> sa;
        std::vector<int> jv(static_cast<std::size_t>(s) + 1, -1);
        for (int v = 1; v <= s; ++v) {
            const int L = lbl[v][static_cast<std::size_t>(mem[0])];
            if (L >= 1) { sa.push_back(v); jv[v] = L - 1; }
        }
        if (sa.empty()) {
            co.skipped = true;
            cells_out[li] = std::move(co);
            return;
        }
        std::vector<int> am(static_cast<std::size_t>(m));
        for (int p = 0; p < m; ++p) am[p] = ug_ids[mem[p]];

        // Column ownership map: 0 keeps the pooled remainder.
        std::vector<std::vector<int>> zv(static_cast<std::size_t>(m),
                                         std::vector<int>(static_cast<std::size_t>(nw), 0));
        for (int p = 0; p < m; ++p) {
            long long qsum = 0;
            for (int v : sa) {
                const Bits& q = qgood[static_cast<std::size_t>(am[p])][static_cast<std::size_t>(v)];
                qsum += q.count();
                q.for_each_set([&](std::size_t z) { zv[p][z] = v; });
            }
            take_max(co.q0, nw - qsum, nw);
        }

        // Classified P rows per column index.
        std::vector<std::vector<Bits>> P1(static_cast<std::size_t>(s) + 1), P0(static_cast<std::size_t>(s) + 1);
        std::vector<char> case_c(static_cast<std::size_t>(s) + 1, 0);
        for (int v : sa) {
            int degf1 = 0, degf0 = 0;
            for (int u = 1; u <= r; ++u) {
                degf1 += cls.color(u, v) == 1;
                degf0 += cls.color(u, v) == 0;
            }
            const bool f0small = le_at(t16, degf0, r);
            const bool f1small = le_at(t16, degf1, r);
            // One-sided construction only when exactly one color degree is
            // negligible; both-small is out of regime and falls through to
            // the two-color case.
            const bool build1 = !(f1small && !f0small);
            const bool build0 = !(f0small && !f1small);
            case_c[static_cast<std::size_t>(v)] = build1 && build0;
            const int cz = wg_ids[static_cast<std::size_t>(covers[v].centers[static_cast<std::size_t>(jv[v])])];
            P1[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(m), Bits(static_cast<std::size_t>(nv)));
            P0[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(m), Bits(static_cast<std::size_t>(nv)));
            for (int p = 0; p < m; ++p) {
                const int a = am[p];
                Bits ngc(static_cast<std::size_t>(nv));
                for (int y = 0; y < nv; ++y)
                    if (gamma[static_cast<std::size_t>(a) * nv + static_cast<std::size_t>(y)].test(static_cast<std::size_t>(cz)))
                        ngc.set(static_cast<std::size_t>(y));
                ngc &= ggv[static_cast<std::size_t>(a)];
                long long inb = 0;
                if (build1) {
                    Bits b(static_cast<std::size_t>(nv));
                    for (int u = 1; u <= r; ++u)
                        if (cls.color(u, v) == 1) b |= bmask[static_cast<std::size_t>(a)][static_cast<std::size_t>(u)];
                    b &= ngc;
                    inb += b.count();
                    P1[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)] = std::move(b);
                }
                if (build0) {
                    Bits b(static_cast<std::size_t>(nv));
                    for (int u = 1; u <= r; ++u)
                        if (cls.color(u, v) == 0) b |= bmask[static_cast<std::size_t>(a)][static_cast<std::size_t>(u)];
                    b &= ngc;
                    inb += b.count();
                    P0[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)] = std::move(b);
                }
                take_max(co.p2, nv - inb, nv);
            }
        }

        // Shared edge colored graph per column: forbidden-configuration probe,
        // then the packing.
        std::vector<Partition> da_parts, dv_parts;
        for (int v : sa) {
            EdgeColoredBipartiteGraph g(VertexPart{"A", m}, VertexPart{"V", nv}, 3);
            for (int p = 0; p < m; ++p) {
                const Bits& one = P1[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)];
                const Bits& zero = P0[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)];
                for (int y = 0; y < nv; ++y)
                    g.set_color(p, y, one.test(static_cast<std::size_t>(y)) ? 1
                                       : zero.test(static_cast<std::size_t>(y)) ? 0 : 2);
            }
            if (case_c[static_cast<std::size_t>(v)]) {
                if (static_cast<long long>(m) * nv <= wp.uk_size_cap) {
                    const UkSearchResult uk = find_uk_copy(g, 1, 0, wp.k, wp.uk_budget);
                    if (uk.outcome == UkOutcome::witness) ++co.uk_witness;
                    else if (uk.outcome == UkOutcome::budget_exhausted) ++co.uk_exhausted;
                    else ++co.uk_done;
                } else {
                    ++co.uk_skipped;
                }
            }
            VcRemovalResult vcr = vcremoval_partition(g, wp.k, ew, wp.delta_pack, 1);
            co.pack_size_max = std::max(co.pack_size_max, static_cast<long long>(vcr.echom.size));
            take_min(co.pack_cover, vcr.echom.covered_mass, std::max<long long>(1, vcr.echom.total_mass));
            if (!(vcr.e2_small && vcr.b_err_bound_ok && vcr.a0_bound_ok)) ++co.pack_bad_steps;
            da_parts.push_back(vcr.echom.part_a);
            dv_parts.push_back(std::move(vcr.echom.part_b));
        }
        const Partition da = common_refinement(da_parts);
        Partition dvp = common_refinement(dv_parts);

        // Step V: triad accounting over the refined cell.
        const int nX = static_cast<int>(da.size());
        const int nY = static_cast<int>(dvp.size());
        const int sv = s + 1;
        std::vector<Bits> ymask(static_cast<std::size_t>(nY), Bits(static_cast<std::size_t>(nv)));
        std::vector<long long> ysz(static_cast<std::size_t>(nY), 0);
        for (int yb = 0; yb < nY; ++yb) {
            for (int y : dvp.blocks()[static_cast<std::size_t>(yb)]) ymask[yb].set(static_cast<std::size_t>(y));
            ysz[yb] = static_cast<long long>(dvp.blocks()[static_cast<std::size_t>(yb)].size());
        }
        auto at = [&](int v, int X, int Y) {
            return (static_cast<std::size_t>(v) * nX + static_cast<std::size_t>(X)) * nY + static_cast<std::size_t>(Y);
        };
        std::vector<long long> p0y(static_cast<std::size_t>(sv) * m * nY, 0);
        std::vector<long long> pur1(static_cast<std::size_t>(sv) * nX * nY, 0), pur0(static_cast<std::size_t>(sv) * nX * nY, 0);
        for (int v : sa)
            for (int p = 0; p < m; ++p) {
                const int X = da.block_of(p);
                for (int yb = 0; yb < nY; ++yb) {
                    const long long c1 = P1[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)].and_count(ymask[yb]);
                    const long long c0 = P0[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)].and_count(ymask[yb]);
                    p0y[(static_cast<std::size_t>(v) * m + static_cast<std::size_t>(p)) * nY + static_cast<std::size_t>(yb)] = c0;
                    pur1[at(v, X, yb)] += c1;
                    pur0[at(v, X, yb)] += c0;
                }
            }
        std::vector<long long> qcnt(static_cast<std::size_t>(sv) * nX, 0);
        std::vector<long long> eh(static_cast<std::size_t>(sv) * nX * nY, 0);
        std::vector<long long> gamA(static_cast<std::size_t>(sv) * nX * nY, 0);
        std::vector<long long> exc(static_cast<std::size_t>(nY), 0);
        for (int p = 0; p < m; ++p) {
            const int X = da.block_of(p);
            const int x = xs[static_cast<std::size_t>(am[p])];
            for (int z = 0; z < nw; ++z) {
                const int vs = zv[p][static_cast<std::size_t>(z)];
                ++qcnt[static_cast<std::size_t>(vs) * nX + static_cast<std::size_t>(X)];
                for (int yb = 0; yb < nY; ++yb) {
                    const long long mm = h.table_uw().count_and(x, z, ymask[yb]);
                    eh[at(vs, X, yb)] += mm;
                    if (!te.in_hom_interval(mm, ysz[yb])) ++exc[yb];
                    if (vs >= 1) {
                        const long long g1 = h.table_uw().count_and2(
                            x, z, P1[static_cast<std::size_t>(vs)][static_cast<std::size_t>(p)], ymask[yb]);
                        const long long g0 = h.table_uw().count_and2(
                            x, z, P0[static_cast<std::size_t>(vs)][static_cast<std::size_t>(p)], ymask[yb]);
                        gamA[at(vs, X, yb)] +=
                            g1 + p0y[(static_cast<std::size_t>(vs) * m + static_cast<std::size_t>(p)) * nY + static_cast<std::size_t>(yb)] - g0;
                    }
                }
            }
        }

        co.mass = static_cast<long long>(m) * nv * nw;
        std::vector<long long> covY(static_cast<std::size_t>(nY), 0);
        const long long ellw = cls.ell_w;
        for (int v = 0; v <= s; ++v) {
            if (v != 0 && jv[static_cast<std::size_t>(v)] < 0) continue;
            for (int X = 0; X < nX; ++X) {
                const long long base = qcnt[static_cast<std::size_t>(v) * nX + static_cast<std::size_t>(X)];
                if (base == 0) continue;
                const long long xsz2 = static_cast<long long>(da.blocks()[static_cast<std::size_t>(X)].size());
                for (int yb = 0; yb < nY; ++yb) {
                    const long long k3 = base * ysz[yb];
                    ++co.t_with_mass;
                    const bool in_t = v >= 1 && ge_om(te, gamA[at(v, X, yb)], k3);
                    const bool in_omega =
                        v >= 1 && (ge_om(te, pur1[at(v, X, yb)], xsz2 * ysz[yb]) ||
                                   ge_om(te, pur0[at(v, X, yb)], xsz2 * ysz[yb]));
                    const bool in_reg = ge_om(te, k3 * ellw, xsz2 * ysz[yb] * nw);
                    if (in_t && in_omega && in_reg) {
                        ++co.t_good;
                        co.cov_good += k3;
                        covY[yb] += k3;
                        if (!te.in_hom_interval(eh[at(v, X, yb)], k3)) ++co.t_hom_bad;
                    }
                }
            }
        }
        for (int yb = 0; yb < nY; ++yb) {
            if (!ge_om(te, covY[yb], static_cast<long long>(m) * ysz[yb] * nw)) continue;
            co.va_size += ysz[yb];
            ++co.va_blocks;
            if (!le_at(te, exc[yb], static_cast<long long>(m) * nw)) ++co.va_bad;
        }
        co.dv = std::move(dvp);
        cells_out[li] = std::move(co);
    });

    // Sequential merge of the cell reports.
    Frac q0w{0, 1}, p2w{0, 1}, packcov{1, 1}, tcov{1, 1}, vacov{1, 1};
    long long ukw = 0, ukd = 0, uke = 0, uks = 0;
    long long packsz = 0, packbad = 0;
    long long tgood = 0, thombad = 0;
    long long vablocks = 0, vabad = 0;
    std::vector<Partition> dv_all;
    for (std::size_t li = 0; li < cells_out.size(); ++li) {
        CellOutcome& co = cells_out[li];
        if (co.skipped) {
            out.warnings = true;
            for (int i : cellmem[static_cast<std::size_t>(live[li])]) uerr.set(static_cast<std::size_t>(ug_ids[i]));
            continue;
        }
        take_max(q0w, co.q0.n, co.q0.d);
        take_max(p2w, co.p2.n, co.p2.d);
        ukw += co.uk_witness; ukd += co.uk_done; uke += co.uk_exhausted; uks += co.uk_skipped;
        take_min(packcov, co.pack_cover.n, co.pack_cover.d);
        packsz = std::max(packsz, co.pack_size_max);
        packbad += co.pack_bad_steps;
        tgood += co.t_good;
        thombad += co.t_hom_bad;
        take_min(tcov, co.cov_good, co.mass);
        take_min(vacov, co.va_size, nv);
        vablocks += co.va_blocks;
        vabad += co.va_bad;
        dv_all.push_back(std::move(co.dv));
    }

    const Threshold t5e = Threshold::root(Ratio::integer(5), ew, 8);
    const Threshold t4s = Threshold::root(Ratio::integer(4), ew, 16);
    const Threshold t3e = Threshold::root(Ratio::integer(3), ew, 8);
    push_row(out.log, "II", "u_err", fmt_double(3.0 * std::pow(ed, 0.125)),
             fmt_fraction(uerr.count(), na), le_at(t3e, uerr.count(), na));
    push_row(out.log, "III", "pooled_q_degree", fmt_double(5.0 * std::pow(ed, 0.125)),
             fmt_double(frac_val(q0w)), le_at(t5e, q0w.n, q0w.d));
    push_row(out.log, "III", "unclassified_p", fmt_double(4.0 * std::pow(ed, 1.0 / 16.0)),
             fmt_double(frac_val(p2w)), le_at(t4s, p2w.n, p2w.d));
    push_row(out.log, "III", "uk_copies", "0",
             fmt_ll(ukw) + " witness / " + fmt_ll(ukw + ukd + uke) + " searched, " + fmt_ll(uke) +
                 " capped, " + fmt_ll(uks) + " skipped",
             ukw == 0);
    push_row(out.log, "IV", "pack_cover", fmt_double(1.0 - 2.0 * std::pow(mud, 1.0 / 16.0)),
             fmt_double(frac_val(packcov)), frac_val(packcov) >= 1.0 - 2.0 * std::pow(mud, 1.0 / 16.0));
    push_row(out.log, "IV", "pack_size", fmt_double(2.0 * std::pow(mud / 8.0, -static_cast<double>(wp.k))),
             fmt_ll(packsz),
             static_cast<double>(packsz) <= 2.0 * std::pow(mud / 8.0, -static_cast<double>(wp.k)));
    push_row(out.log, "IV", "pack_steps", "0", fmt_ll(packbad) + " flagged", packbad == 0);
    push_row(out.log, "V", "triads_hom", fmt_double(3.0 * std::pow(mud, 1.0 / 32.0)),
             fmt_fraction(thombad, std::max<long long>(1, tgood)), thombad == 0);
    push_row(out.log, "V", "triads_cover", fmt_double(1.0 - 3.0 * std::pow(mud, 1.0 / 32.0)),
             fmt_double(frac_val(tcov)), frac_val(tcov) >= 1.0 - 3.0 * std::pow(mud, 1.0 / 32.0));
    push_row(out.log, "VI", "block_cover", fmt_double(1.0 - 3.0 * std::pow(mud, 1.0 / 64.0)),
             fmt_double(frac_val(vacov)), frac_val(vacov) >= 1.0 - 3.0 * std::pow(mud, 1.0 / 64.0));
    push_row(out.log, "VI", "block_goodness", fmt_double(6.0 * std::pow(mud, 1.0 / 128.0)),
             fmt_fraction(vabad, std::max<long long>(1, vablocks)), vabad == 0);

    Partition pv = dv_all.empty() ? one_block(h.part_v()) : common_refinement(dv_all);
    if (dv_all.empty()) out.warnings = true;
    const double lf = static_cast<double>(std::max(cls.ell_v, cls.ell_w));
    const double size_bound =
        std::pow(2.0 * std::pow(mud / 8.0, -static_cast<double>(wp.k)),
                 lf * std::pow(2.0 * lf, lf) * std::pow(ed, -lf));
    push_row(out.log, "VII", "pv_size", fmt_double(size_bound), fmt_ll(static_cast<long long>(pv.size())),
             !std::isfinite(size_bound) || static_cast<double>(pv.size()) <= size_bound);
    finish(std::move(pv));
    return out;
}

// ---------------------------------------------------------------------------
// slvc_partition and the non-partite wrapper

namespace {

struct RotationOut {
    Partition part;
    std::vector<RunlogRow> log;
    int classes_run = 0, classes_pooled = 0;
    bool warnings = false;
};

// One grouped mainslice pass; hr is already rotated so the returned partition
// lives on hr's middle part.
RotationOut run_rotation(const TripartiteThreeGraph& hr, const char* side, const WorkingParams& wp) {
    RotationOut ro;
    const SliceGrouping grouping = group_slices(hr, wp.eps_slice, wp.size_cap, wp.threads);
    std::vector<Partition> parts;
    for (std::size_t ci = 0; ci < grouping.classes.size(); ++ci) {
        if (grouping.classes[ci].pooled) {
            ++ro.classes_pooled;
            continue;
        }
        MainsliceResult mr = mainslice_partition(hr, grouping, static_cast<int>(ci), wp);
        ++ro.classes_run;
        ro.warnings = ro.warnings || mr.warnings;
        for (RunlogRow& rr : mr.log) {
            rr.step = std::string(side) + ".c" + std::to_string(ci) + "." + rr.step;
            ro.log.push_back(std::move(rr));
        }
        parts.push_back(std::move(mr.pv));
    }
    ro.part = parts.empty() ? one_block(hr.part_v()) : common_refinement(parts);
    push_row(ro.log, std::string(side) + ".VII", "classes", "",
             fmt_ll(ro.classes_run) + " run, " + fmt_ll(ro.classes_pooled) + " pooled, " +
                 fmt_ll(static_cast<long long>(grouping.u_err.count())) + " slices pooled",
             true);
    push_row(ro.log, std::string(side) + ".VII", "part_size", "",
             fmt_ll(static_cast<long long>(ro.part.size())), true);
    return ro;
}

} // namespace

SlvcResult slvc_partition(const TripartiteThreeGraph& h, const WorkingParams& wp) {
    validate_params(wp);
    if (h.nu() != h.nv() || h.nv() != h.nw())
        throw std::invalid_argument("slvc_partition: parts must have equal sizes");
    SlvcResult out;

    RotationOut ru = run_rotation(h.permuted({1, 0, 2}), "pu", wp);
    RotationOut rv = run_rotation(h, "pv", wp);
    RotationOut rw = run_rotation(h.permuted({0, 2, 1}), "pw", wp);
    out.pu = std::move(ru.part);
    out.pv = std::move(rv.part);
    out.pw = std::move(rw.part);
    out.log = std::move(ru.log);
    out.log.insert(out.log.end(), std::make_move_iterator(rv.log.begin()), std::make_move_iterator(rv.log.end()));
    out.log.insert(out.log.end(), std::make_move_iterator(rw.log.begin()), std::make_move_iterator(rw.log.end()));

    std::vector<std::vector<int>> blocks;
    auto append_side = [&](const Partition& p, int offset) {
        for (const auto& b : p.blocks()) {
            std::vector<int> nb;
            nb.reserve(b.size());
            for (int v : b) nb.push_back(v + offset);
            blocks.push_back(std::move(nb));
        }
    };
    append_side(out.pu, 0);
    append_side(out.pv, h.nu());
    append_side(out.pw, h.nu() + h.nv());
    out.combined = Partition(VertexPart{"UVW", h.nu() + h.nv() + h.nw()}, std::move(blocks));

    const Ratio& ew = wp.eps_working;
    out.goodhom = goodhom_audit(h, out.combined, ew, Threshold::ratio(ew));
    const Partition* sides[3] = {&out.pu, &out.pv, &out.pw};
    for (int i = 0; i < 3; ++i) {
        out.achieved[i] = achieved_goodness(h, i, *sides[i], out.achieved_valid[i]);
        if (out.achieved_valid[i]) {
            const GoodnessAudit re = almost_good_partition(h, i, *sides[i], Threshold::ratio(out.achieved[i]));
            if (!re.is_almost_good)
                throw std::logic_error("slvc_partition: achieved eps failed its own audit");
        }
    }

    const double ed = ratio_to_double(ew);
    push_row(out.log, "assembly", "sides_good", fmt_double(1.0 - ed),
             fmt_ll(static_cast<long long>(out.goodhom.sides[0].covered)) + "/" +
                 fmt_ll(static_cast<long long>(out.goodhom.sides[1].covered)) + "/" +
                 fmt_ll(static_cast<long long>(out.goodhom.sides[2].covered)) + " covered",
             out.goodhom.hypothesis);
    push_row(out.log, "assembly", "hom_at_bound", fmt_double(28.0 * std::pow(ed, 1.0 / 64.0)),
             fmt_fraction(out.goodhom.at_bound.good_mass, std::max<long long>(1, out.goodhom.at_bound.total_mass)),
             out.goodhom.at_bound.is_homogeneous);
    push_row(out.log, "assembly", "hom_working", fmt_double(1.0 - ed),
             fmt_fraction(out.goodhom.at_working.good_mass, std::max<long long>(1, out.goodhom.at_working.total_mass)),
             out.goodhom.at_working.is_homogeneous);
    push_row(out.log, "assembly", "part_sizes", "",
             fmt_ll(static_cast<long long>(out.pu.size())) + "/" + fmt_ll(static_cast<long long>(out.pv.size())) +
                 "/" + fmt_ll(static_cast<long long>(out.pw.size())),
             true);
    return out;
}

SlvccorResult slvccor_partition(const GeneralThreeGraph& h, const WorkingParams& wp) {
    validate_params(wp);
    SlvccorResult out;
    const TripartiteThreeGraph t = tripartitize(h);
    out.inner = slvc_partition(t, wp);
    out.log = std::move(out.inner.log);
    out.inner.log.clear();

    const long long n = h.n();
    const VertexPart vg{"V", h.n()};
    std::vector<Partition> pulls;
    pulls.emplace_back(vg, out.inner.pu.blocks());
    pulls.emplace_back(vg, out.inner.pv.blocks());
    pulls.emplace_back(vg, out.inner.pw.blocks());
    Partition q = common_refinement(pulls);
    out.q = Partition(vg, q.blocks());

    const Threshold te = Threshold::ratio(wp.eps_working);
    out.general_audit = audit_triple_homogeneity(h, out.q, te);

    std::vector<std::vector<int>> lb;
    for (int side = 0; side < 3; ++side)
        for (const auto& b : out.q.blocks()) {
            std::vector<int> nb;
            nb.reserve(b.size());
            for (int v : b) nb.push_back(v + side * h.n());
            lb.push_back(std::move(nb));
        }
    const Partition lifted(VertexPart{"UVW", 3 * h.n()}, std::move(lb));
    out.lifted_audit = audit_triple_homogeneity(t, lifted, te);

    // The tripartitization puts every edge in all six orientations, so the
    // lifted audit must reproduce the direct one exactly: 27x the tuple mass,
    // 6x the good mass plus the 21 n^3 of part-repeating tuples (density 0,
    // good whenever eps > 0).
    const long long n3 = n * n * n;
    if (out.lifted_audit.total_mass != 27 * out.general_audit.total_mass ||
        out.lifted_audit.good_mass != 6 * out.general_audit.good_mass + 21 * n3)
        throw std::logic_error("slvccor_partition: lifted audit disagrees with the direct audit");

    const long long cap = static_cast<long long>(out.inner.pu.size()) *
                          static_cast<long long>(out.inner.pv.size()) *
                          static_cast<long long>(out.inner.pw.size());
    push_row(out.log, "cor", "q_size", fmt_ll(cap), fmt_ll(static_cast<long long>(out.q.size())),
             static_cast<long long>(out.q.size()) <= cap);
    push_row(out.log, "cor", "hom_general", fmt_double(1.0 - ratio_to_double(wp.eps_working)),
             fmt_fraction(out.general_audit.good_mass, std::max<long long>(1, out.general_audit.total_mass)),
             out.general_audit.is_homogeneous);
    push_row(out.log, "cor", "lift_identity", "27x total, 6x good + 21 n^3", "exact", true);
    return out;
}

// ---------------------------------------------------------------------------
// Theoretical constants

namespace {

// Exact record; the rational string is dropped when it stops being readable.
ConstantRecord rec_exact(std::string name, std::string formula, const Ratio& v) {
    ConstantRecord r;
    r.name = std::move(name);
    r.formula = std::move(formula);
    r.exact = v.str();
    if (r.exact.size() > 80) r.exact.clear();
    const double d = v.to_double();
    r.approx = fmt_double(d);
    r.log2_value = std::log2(d);
    r.finite_log2 = std::isfinite(r.log2_value);
    return r;
}

// Value known only through its base-2 logarithm.
ConstantRecord rec_log2(std::string name, std::string formula, double l2) {
    ConstantRecord r;
    r.name = std::move(name);
    r.formula = std::move(formula);
    r.log2_value = l2;
    r.finite_log2 = std::isfinite(l2);
    if (!r.finite_log2)
        r.approx = l2 > 0 ? "overflow" : "underflow";
    else if (std::abs(l2) < 900.0)
        r.approx = fmt_double(std::pow(2.0, l2));
    else
        r.approx = "2^(" + fmt_double(l2) + ")";
    return r;
}

} // namespace

const ConstantRecord* ConstantsReport::find(const std::string& name) const {
    for (const ConstantRecord& r : records)
        if (r.name == name) return &r;
    return nullptr;
}

std::optional<Ratio> mu_exact(const Ratio& eps, const Ratio& c, int k) {
    if (k < 1 || eps.num() <= 0 || c.num() <= 0) return std::nullopt;
    Ratio r16;
    if (!try_exact_root(eps, 16, r16)) return std::nullopt;
    const Ratio inner = Ratio::integer(16) * c.pow(4) * r16;
    Ratio rk;
    if (!try_exact_root(inner, static_cast<unsigned>(4 * k + 4), rk)) return std::nullopt;
    return Ratio::integer(8) * rk;
}

ConstantsReport theoretical_constants(int k, const Ratio& tau, const Ratio& c1) {
    if (k < 1) throw std::invalid_argument("theoretical_constants: k must be at least 1");
    check_unit(tau, "tau");
    if (c1.num() <= 0) throw std::invalid_argument("theoretical_constants: c1 must be positive");

    ConstantsReport rep;
    rep.k = k;
    rep.tau = tau;
    rep.c1 = c1;

    const long long m = (4LL * k + 4) * 100000;
    const long long c4v = m * 16;
    const Ratio d = Ratio::integer(2LL * k + 2);
    const Ratio big_c1 = Ratio::integer(2) * c1;
    Ratio k1 = Ratio::integer(2);
    if (big_c1 > k1) k1 = big_c1;
    if (d > k1) k1 = d;
    const Ratio c2 = Ratio::integer(16) * c1.pow(4);
    const Ratio k3 = Ratio::integer(200) * Ratio::integer(c4v) * k1;

    const double l2c2 = std::log2(c2.to_double());
    const double l2tau = std::log2(tau.to_double());
    const double l2k1 = std::log2(k1.to_double());
    const double k1d = k1.to_double();
    const double l2c3 = l2c2 / static_cast<double>(m) - 1.0;
    const double l2k2 = std::log2(300.0) + 2.0 * l2k1 - 200.0 * k1d * l2c3;
    const double l2k3 = std::log2(k3.to_double());
    const double hi = std::max(l2k2, l2k3), lo = std::min(l2k2, l2k3);
    const double l2k = hi + std::log2(1.0 + std::pow(2.0, lo - hi));
    const double l2eps = static_cast<double>(c4v) * (l2c3 + l2tau);
    const double l2mu = 3.0 + (l2c2 + l2eps / 16.0) / (4.0 * k + 4.0);
    const double l2ell = l2k1 - 100.0 * k1d * l2eps;

    rep.records.push_back(rec_exact("D", "2k+2", d));
    rep.records.push_back(rec_exact("C1", "2 c1", big_c1));
    rep.records.push_back(rec_exact("K1", "max{2, 2 c1, 2k+2}", k1));
    rep.records.push_back(rec_exact("c2", "16 c1^4", c2));
    {
        Ratio c3r;
        if (try_exact_root(c2, static_cast<unsigned>(m), c3r)) {
            rep.records.push_back(
                rec_exact("c3", "c2^{1/(100000 (4k+4))} / 2", c3r * Ratio(1, 2)));
        } else {
            rep.records.push_back(rec_log2("c3", "c2^{1/(100000 (4k+4))} / 2", l2c3));
        }
    }
    rep.records.push_back(rec_exact("c4", "16 * 100000 * (4k+4)", Ratio::integer(c4v)));
    rep.records.push_back(rec_log2("K2", "300 K1^2 c3^{-200 K1}", l2k2));
    rep.records.push_back(rec_exact("K3", "200 c4 K1", k3));
    rep.records.push_back(rec_log2("K", "K2 + K3", l2k));
    rep.records.push_back(rec_log2("eps", "(c3 tau)^{c4}", l2eps));
    rep.records.push_back(rec_log2("mu", "8 (16 eps^{1/16} c1^4)^{1/(4k+4)}", l2mu));
    rep.records.push_back(rec_log2("ell", "K1 eps^{-100 K1}", l2ell));

    // bound = 2^(2^(tau^-K)); each stage stays symbolic once the next one
    // leaves double range.
    {
        ConstantRecord r;
        r.name = "bound";
        r.formula = "2^(2^(tau^-K))";
        const double kd = std::pow(2.0, l2k);
        const double t1 = std::isfinite(kd) ? kd * (-l2tau) : std::numeric_limits<double>::infinity();
        const double tk = t1 < 1023.0 ? std::pow(2.0, t1) : std::numeric_limits<double>::infinity();
        const double l2b = tk < 1023.0 ? std::pow(2.0, tk) : std::numeric_limits<double>::infinity();
        if (std::isfinite(l2b)) {
            r.log2_value = l2b;
            r.finite_log2 = true;
            r.approx = std::abs(l2b) < 900.0 ? fmt_double(std::pow(2.0, l2b)) : "2^(" + fmt_double(l2b) + ")";
        } else {
            r.finite_log2 = false;
            if (std::isfinite(tk))
                r.approx = "2^(2^(" + fmt_double(tk) + "))";
            else if (std::isfinite(t1))
                r.approx = "2^(2^(2^(" + fmt_double(t1) + ")))";
            else
                r.approx = "2^(2^(2^(2^(" + fmt_double(l2k) + "))))";
        }
        rep.records.push_back(std::move(r));
    }
    return rep;
}

} // namespace hompart
