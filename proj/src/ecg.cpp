#include "hompart/ecg.hpp"

#include "hompart/graphreg.hpp"

#include <algorithm>
#include <stdexcept>

namespace hompart {

EdgeColoredBipartiteGraph::EdgeColoredBipartiteGraph(VertexPart a, VertexPart b, int num_colors)
    : a_(std::move(a)), b_(std::move(b)) {
    if (num_colors < 1) throw std::invalid_argument("EdgeColoredBipartiteGraph: need at least one color");
    rows_a_.assign(static_cast<std::size_t>(num_colors),
                   std::vector<Bits>(static_cast<std::size_t>(a_.n), Bits(static_cast<std::size_t>(b_.n))));
    rows_b_.assign(static_cast<std::size_t>(num_colors),
                   std::vector<Bits>(static_cast<std::size_t>(b_.n), Bits(static_cast<std::size_t>(a_.n))));
}

EdgeColoredBipartiteGraph EdgeColoredBipartiteGraph::from_graph(const BipartiteGraph& g) {
    EdgeColoredBipartiteGraph e(g.part_a(), g.part_b(), 3);
    for (int a = 0; a < g.na(); ++a) {
        const Bits& ne = g.row_a(a);
        Bits non = ne.complement();
        e.rows_a_[1][static_cast<std::size_t>(a)] = ne;
        e.rows_a_[0][static_cast<std::size_t>(a)] = std::move(non);
    }
    for (int b = 0; b < g.nb(); ++b) {
        const Bits& ne = g.row_b(b);
        e.rows_b_[1][static_cast<std::size_t>(b)] = ne;
        e.rows_b_[0][static_cast<std::size_t>(b)] = ne.complement();
    }
    return e;
}

void EdgeColoredBipartiteGraph::set_color(int a, int b, int color) {
    if (a < 0 || a >= a_.n || b < 0 || b >= b_.n)
        throw std::out_of_range("EdgeColoredBipartiteGraph::set_color: vertex out of range");
    if (color < 0 || color >= num_colors())
        throw std::out_of_range("EdgeColoredBipartiteGraph::set_color: bad color");
    for (int c = 0; c < num_colors(); ++c) {
        rows_a_[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)].reset(static_cast<std::size_t>(b));
        rows_b_[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)].reset(static_cast<std::size_t>(a));
    }
    rows_a_[static_cast<std::size_t>(color)][static_cast<std::size_t>(a)].set(static_cast<std::size_t>(b));
    rows_b_[static_cast<std::size_t>(color)][static_cast<std::size_t>(b)].set(static_cast<std::size_t>(a));
}

int EdgeColoredBipartiteGraph::color_of(int a, int b) const {
    for (int c = 0; c < num_colors(); ++c)
        if (rows_a_[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)].test(static_cast<std::size_t>(b)))
            return c;
    return -1;
}

long long EdgeColoredBipartiteGraph::color_count(int color) const {
    long long c = 0;
    for (const Bits& row : rows_a_[static_cast<std::size_t>(color)]) c += row.count();
    return c;
}

bool EdgeColoredBipartiteGraph::fully_colored() const {
    long long total = 0;
    for (int c = 0; c < num_colors(); ++c) total += color_count(c);
    return total == static_cast<long long>(a_.n) * b_.n;
}

void EdgeColoredBipartiteGraph::require_complete() const {
    if (!fully_colored())
        throw std::invalid_argument("edge coloring does not cover every cross pair");
}

BipartiteGraph EdgeColoredBipartiteGraph::color_graph(int color) const {
    BipartiteGraph g(a_, b_);
    for (int a = 0; a < a_.n; ++a)
        nbr_a(color, a).for_each_set([&](std::size_t b) { g.add_edge(a, static_cast<int>(b)); });
    return g;
}

EdgeColoredBipartiteGraph EdgeColoredBipartiteGraph::transposed() const {
    EdgeColoredBipartiteGraph t(b_, a_, num_colors());
    t.rows_a_ = rows_b_;
    t.rows_b_ = rows_a_;
    return t;
}

EdgeColoredBipartiteGraph::Restriction EdgeColoredBipartiteGraph::restrict(const Bits& sub_a,
                                                                           const Bits& sub_b) const {
    if (sub_a.size() != static_cast<std::size_t>(a_.n) || sub_b.size() != static_cast<std::size_t>(b_.n))
        throw std::invalid_argument("EdgeColoredBipartiteGraph::restrict: subset width mismatch");
    Restriction r;
    r.a_ids = sub_a.to_vector();
    r.b_ids = sub_b.to_vector();
    std::vector<int> b_rank(static_cast<std::size_t>(b_.n), -1);
    for (std::size_t i = 0; i < r.b_ids.size(); ++i) b_rank[static_cast<std::size_t>(r.b_ids[i])] = static_cast<int>(i);
    std::vector<int> a_rank(static_cast<std::size_t>(a_.n), -1);
    for (std::size_t i = 0; i < r.a_ids.size(); ++i) a_rank[static_cast<std::size_t>(r.a_ids[i])] = static_cast<int>(i);

    r.g = EdgeColoredBipartiteGraph(VertexPart{a_.name, static_cast<int>(r.a_ids.size())},
                                    VertexPart{b_.name, static_cast<int>(r.b_ids.size())}, num_colors());
    for (int c = 0; c < num_colors(); ++c) {
        for (std::size_t i = 0; i < r.a_ids.size(); ++i) {
            Bits& row = r.g.rows_a_[static_cast<std::size_t>(c)][i];
            nbr_a(c, r.a_ids[i]).for_each_set([&](std::size_t b) {
                if (b_rank[b] >= 0) row.set(static_cast<std::size_t>(b_rank[b]));
            });
        }
        for (std::size_t j = 0; j < r.b_ids.size(); ++j) {
            Bits& row = r.g.rows_b_[static_cast<std::size_t>(c)][j];
            nbr_b(c, r.b_ids[j]).for_each_set([&](std::size_t a) {
                if (a_rank[a] >= 0) row.set(static_cast<std::size_t>(a_rank[a]));
            });
        }
    }
    return r;
}

EchomResult audit_echom(const EdgeColoredBipartiteGraph& g, const Partition& pa, const Partition& pb,
                        const Threshold& eps) {
    if (pa.ground_size() != g.na() || pb.ground_size() != g.nb())
        throw std::invalid_argument("audit_echom: partitions do not match the graph sides");
    if (g.num_colors() < 2) throw std::invalid_argument("audit_echom: need colors 0 and 1");

    EchomResult r;
    r.part_a = pa;
    r.part_b = pb;
    r.size = static_cast<int>(std::max(pa.size(), pb.size()));
    r.total_mass = static_cast<long long>(g.na()) * g.nb();

    // Impurity of a block pair under its best color, for the minimal
    // achievable threshold scan below.
    struct PairStat {
        long long miss;  // |X||Y| - max_alpha |E_alpha cap X x Y|
        long long mass;
    };
    std::vector<PairStat> stats;
    stats.reserve(pa.size() * pb.size());

    std::vector<Bits> bblocks(pb.size());
    for (std::size_t j = 0; j < pb.size(); ++j) bblocks[j] = pb.block_bits(j);

    for (std::size_t i = 0; i < pa.size(); ++i) {
        const std::vector<int>& xa = pa.block(i);
        for (std::size_t j = 0; j < pb.size(); ++j) {
            long long c0 = 0, c1 = 0;
            for (int a : xa) {
                c0 += g.nbr_a(0, a).and_count(bblocks[j]);
                c1 += g.nbr_a(1, a).and_count(bblocks[j]);
            }
            long long mass = pa.block_size(i) * pb.block_size(j);
            bool in0 = eps.above_eq_one_minus(c0, mass);
            bool in1 = eps.above_eq_one_minus(c1, mass);
            if (in0) r.sigma0.emplace_back(static_cast<int>(i), static_cast<int>(j));
            if (in1) r.sigma1.emplace_back(static_cast<int>(i), static_cast<int>(j));
            if (in0 || in1) r.covered_mass += mass;
            stats.push_back(PairStat{mass - std::max(c0, c1), mass});
        }
    }

    // Minimal threshold that would succeed: order block pairs by impurity
    // miss/mass ascending; admitting the first i pairs needs
    // eps >= max(miss_i/mass_i, 1 - M_i/T) where M_i is their mass.
    std::sort(stats.begin(), stats.end(), [](const PairStat& x, const PairStat& y) {
        return static_cast<unsigned __int128>(x.miss) * static_cast<unsigned __int128>(y.mass) <
               static_cast<unsigned __int128>(y.miss) * static_cast<unsigned __int128>(x.mass);
    });
    Ratio best;
    bool have = false;
    long long covered = 0;
    for (const PairStat& s : stats) {
        covered += s.mass;
        Ratio cand = Ratio(s.miss, s.mass);
        Ratio floor_eps = Ratio(r.total_mass - covered, r.total_mass);
        if (floor_eps > cand) cand = floor_eps;
        if (!have || cand < best) {
            best = cand;
            have = true;
        }
    }
    if (have && best < Ratio::integer(1)) {
        r.achieved_eps = best;
        r.achieved_valid = true;
    } else {
        r.achieved_eps = Ratio::integer(1);
        r.achieved_valid = false;
    }
    return r;
}

VcRemovalResult vcremoval_partition(const EdgeColoredBipartiteGraph& g, int k, const Ratio& eps,
                                    const Ratio& delta, unsigned threads) {
    (void)k;
    g.require_complete();
    if (g.num_colors() != 3)
        throw std::invalid_argument("vcremoval needs exactly the colors E0, E1, E2");
    const int na = g.na(), nb = g.nb();
    if (na == 0 || nb == 0) throw std::invalid_argument("vcremoval needs nonempty sides");

    VcRemovalResult r;
    r.e2_small =
        Threshold::ratio(eps).cmp_fraction(g.color_count(2), static_cast<long long>(na) * nb) <= 0;

    PackingResult p1 = packing_cluster(g, delta, eps, threads);
    r.m = static_cast<long long>(p1.representatives.size());
    r.u_size = p1.exceptional.count();

    Bits b_err(static_cast<std::size_t>(nb));
    for (int x : p1.representatives) b_err |= g.nbr_a(2, x);
    r.b_err_size = b_err.count();
    r.b_err_bound_ok =
        Threshold::root(Ratio::integer(r.m), eps, 2).cmp_fraction(r.b_err_size, nb) <= 0;

    Bits a_prime = p1.exceptional.complement();
    Bits b_prime = b_err.complement();
    auto rst = g.restrict(a_prime, b_prime);
    EdgeColoredBipartiteGraph rt = rst.g.transposed();
    const long long a_prime_n = static_cast<long long>(rst.a_ids.size());

    PackingResult p2 =
        packing_cluster(rt, delta, Threshold::root(Ratio::integer(1), Ratio(4, 1) * eps, 4), threads);
    r.p = static_cast<long long>(p2.representatives.size());
    r.v_size = p2.exceptional.count();

    Bits b0 = b_err;
    p2.exceptional.for_each_set([&](std::size_t i) { b0.set(static_cast<std::size_t>(rst.b_ids[i])); });
    r.b0_size = b0.count();

    std::vector<std::vector<int>> bblocks(static_cast<std::size_t>(r.p));
    for (std::size_t i = 0; i < rst.b_ids.size(); ++i) {
        int j = p2.assignment[i];
        if (j >= 0) bblocks[static_cast<std::size_t>(j)].push_back(rst.b_ids[i]);
    }

    // U absorbs the part of each error row falling outside A', so the union
    // over the original rows equals the proof's U cup N_{E2}(y_1..y_p).
    Bits a0 = p1.exceptional;
    long long pass2_rows = 0;
    for (int yi : p2.representatives) {
        a0 |= g.nbr_b(2, rst.b_ids[static_cast<std::size_t>(yi)]);
        pass2_rows += rt.nbr_a(2, yi).count();
    }
    r.a0_size = a0.count();
    bool u_ok = Threshold::root(Ratio::integer(1), eps, 2).cmp_fraction(r.u_size, na) <= 0;
    bool rows_ok = a_prime_n == 0 ? pass2_rows == 0
                                  : Threshold::root(Ratio::integer(r.p), Ratio(4, 1) * eps, 4)
                                            .cmp_fraction(pass2_rows, a_prime_n) <= 0;
    r.a0_bound_ok = u_ok && rows_ok;

    std::vector<std::vector<int>> ablocks(static_cast<std::size_t>(r.m));
    for (int a = 0; a < na; ++a) {
        if (a0.test(static_cast<std::size_t>(a))) continue;
        ablocks[static_cast<std::size_t>(p1.assignment[static_cast<std::size_t>(a)])].push_back(a);
    }

    std::vector<std::vector<int>> pa_blocks, pb_blocks;
    if (r.a0_size > 0) pa_blocks.push_back(a0.to_vector());
    for (auto& blk : ablocks)
        if (!blk.empty()) pa_blocks.push_back(std::move(blk));
    if (r.b0_size > 0) pb_blocks.push_back(b0.to_vector());
    for (auto& blk : bblocks)
        if (!blk.empty()) pb_blocks.push_back(std::move(blk));

    Partition pa(g.part_a(), std::move(pa_blocks));
    Partition pb(g.part_b(), std::move(pb_blocks));

    // The minimal-threshold scan does not depend on the audit threshold, so
    // one probe fixes achieved_eps and the second call populates the sigmas
    // at exactly that value.
    EchomResult scan = audit_echom(g, pa, pb, Threshold::ratio(Ratio(1, 2)));
    Threshold at = Threshold::ratio(scan.achieved_valid ? scan.achieved_eps : Ratio::integer(1));
    r.echom = audit_echom(g, pa, pb, at);

    if (r.echom.achieved_valid &&
        !at.above_eq_one_minus(r.echom.covered_mass, r.echom.total_mass))
        throw std::logic_error("vcremoval output fails its own echom audit");
    return r;
}

} // namespace hompart
