#include "hompart/graphreg.hpp"

#include "hompart/parallel.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace hompart {

namespace {

// max of the two non-error colors' Hamming distances
long long two_color_dist(const EdgeColoredBipartiteGraph& g, int x, int y) {
    return std::max(g.nbr_a(1, x).xor_count(g.nbr_a(1, y)),
                    g.nbr_a(0, x).xor_count(g.nbr_a(0, y)));
}

bool packing_recheck(const EdgeColoredBipartiteGraph& g, const PackingResult& r) {
    const int na = g.na(), nb = g.nb();
    Threshold rad = Threshold::ratio(r.radius);
    for (std::size_t i = 0; i < r.representatives.size(); ++i) {
        if (r.exceptional.test(static_cast<std::size_t>(r.representatives[i]))) return false;
        for (std::size_t j = i + 1; j < r.representatives.size(); ++j) {
            long long d = two_color_dist(g, r.representatives[i], r.representatives[j]);
            if (rad.cmp_fraction(d, nb) <= 0) return false;
        }
    }
    for (int a = 0; a < na; ++a) {
        bool exc = r.error_color_bound.cmp_fraction(g.nbr_a(2, a).count(), nb) > 0;
        if (exc != r.exceptional.test(static_cast<std::size_t>(a))) return false;
        if (exc) {
            if (r.assignment[static_cast<std::size_t>(a)] != -1) return false;
            continue;
        }
        int idx = r.assignment[static_cast<std::size_t>(a)];
        if (idx < 0 || idx >= static_cast<int>(r.representatives.size())) return false;
        if (rad.cmp_fraction(two_color_dist(g, a, r.representatives[static_cast<std::size_t>(idx)]), nb) > 0)
            return false;
        for (int e = 0; e < idx; ++e) {
            if (rad.cmp_fraction(two_color_dist(g, a, r.representatives[static_cast<std::size_t>(e)]), nb) <= 0)
                return false;
        }
    }
    return true;
}

} // namespace

PackingResult packing_cluster(const EdgeColoredBipartiteGraph& g, const Ratio& delta,
                              const Threshold& e2_bound, unsigned threads) {
    g.require_complete();
    if (g.num_colors() != 3)
        throw std::invalid_argument("packing needs exactly the colors E0, E1, E2");
    const int na = g.na(), nb = g.nb();

    PackingResult res;
    res.radius = delta;
    res.error_color_bound = e2_bound;
    res.exceptional = Bits(static_cast<std::size_t>(na));
    res.assignment.assign(static_cast<std::size_t>(na), -1);
    if (na == 0) {
        res.verified = true;
        return res;
    }
    if (nb == 0) {
        // all distances vanish, one representative absorbs everything
        res.representatives.push_back(0);
        std::fill(res.assignment.begin(), res.assignment.end(), 0);
        res.verified = true;
        return res;
    }

    for (int a = 0; a < na; ++a) {
        if (e2_bound.cmp_fraction(g.nbr_a(2, a).count(), nb) > 0)
            res.exceptional.set(static_cast<std::size_t>(a));
    }

    Threshold rad = Threshold::ratio(delta);
    constexpr long long kFar = std::numeric_limits<long long>::max();
    std::vector<long long> min_dist(static_cast<std::size_t>(na), kFar);

    // next = farthest unreached vertex; min_dist stays exact after each round
    int next = -1;
    for (int a = 0; a < na; ++a) {
        if (!res.exceptional.test(static_cast<std::size_t>(a))) { next = a; break; }
    }
    while (next >= 0) {
        int rep = next;
        int rep_idx = static_cast<int>(res.representatives.size());
        res.representatives.push_back(rep);
        parallel_for(static_cast<std::size_t>(na), threads, [&](std::size_t a) {
            if (res.exceptional.test(a)) return;
            long long d = two_color_dist(g, static_cast<int>(a), rep);
            if (d < min_dist[a]) min_dist[a] = d;
            if (res.assignment[a] == -1 && rad.cmp_fraction(d, nb) <= 0)
                res.assignment[a] = rep_idx;
        });
        next = -1;
        long long best = -1;
        for (int a = 0; a < na; ++a) {
            if (res.exceptional.test(static_cast<std::size_t>(a))) continue;
            if (min_dist[static_cast<std::size_t>(a)] > best) {
                best = min_dist[static_cast<std::size_t>(a)];
                next = a;
            }
        }
        if (next >= 0 && rad.cmp_fraction(best, nb) <= 0) next = -1;
    }

    res.verified = packing_recheck(g, res);
    if (!res.verified)
        throw std::logic_error("packing invariant recheck failed");
    return res;
}

PackingResult packing_cluster(const EdgeColoredBipartiteGraph& g, const Ratio& delta,
                              const Ratio& eps, unsigned threads) {
    return packing_cluster(g, delta, Threshold::root(Ratio::integer(1), eps, 2), threads);
}

CoverResult greedy_cover(const BipartiteGraph& g, const Ratio& delta) {
    if (!(Ratio() < delta) || !(delta < Ratio::integer(1)))
        throw std::invalid_argument("delta must lie in (0,1)");
    const int na = g.na(), nb = g.nb();

    CoverResult res;
    res.delta = delta;
    res.a0 = Bits(static_cast<std::size_t>(na));
    res.a_err = Bits(static_cast<std::size_t>(na));
    res.t_bound_ok = true;
    if (na == 0) return res;

    Threshold sq = Threshold::root(Ratio::integer(1), delta, 2);
    Threshold qt = Threshold::root(Ratio::integer(1), delta, 4);

    Bits residual = Bits::full(static_cast<std::size_t>(na));
    long long rsize = na;
    while (qt.cmp_fraction(rsize, na) >= 0) {
        int center = -1;
        long long center_deg = -1;
        for (int b = 0; b < nb; ++b) {
            long long d = g.row_b(b).and_count(residual);
            if (d > center_deg) {
                center_deg = d;
                center = b;
            }
        }
        if (center < 0 || sq.cmp_fraction(center_deg, rsize) < 0) break;
        long long want = std::max<long long>(1, sq.floor_scaled(rsize));
        std::vector<int> blk;
        blk.reserve(static_cast<std::size_t>(want));
        Bits cand = g.row_b(center);
        cand &= residual;
        cand.for_each_set([&](std::size_t x) {
            if (static_cast<long long>(blk.size()) < want) blk.push_back(static_cast<int>(x));
        });
        for (int x : blk) residual.reset(static_cast<std::size_t>(x));
        rsize -= static_cast<long long>(blk.size());
        res.centers.push_back(center);
        res.blocks.push_back(std::move(blk));
    }

    residual.for_each_set([&](std::size_t x) {
        long long deg = g.row_a(static_cast<int>(x)).count();
        if (qt.cmp_fraction(deg, nb) <= 0) {
            res.a0.set(x);
            ++res.a0_low_quarter;
            if (sq.cmp_fraction(deg, nb) <= 0) ++res.a0_low_sqrt;
        } else {
            res.a_err.set(x);
        }
    });

    long long t = static_cast<long long>(res.centers.size());
    res.t_bound_ok = Ratio(t * t, 1) * delta <= Ratio::integer(1);
    return res;
}

CoverCheck verify_cover(const BipartiteGraph& g, const CoverResult& c) {
    CoverCheck k;
    const int na = g.na(), nb = g.nb();
    Threshold sq = Threshold::root(Ratio::integer(1), c.delta, 2);
    Threshold qt = Threshold::root(Ratio::integer(1), c.delta, 4);

    Bits seen(static_cast<std::size_t>(na));
    bool overlap = false;
    auto mark = [&](long long x) {
        if (x < 0 || x >= na || seen.test(static_cast<std::size_t>(x))) {
            overlap = true;
            return;
        }
        seen.set(static_cast<std::size_t>(x));
    };
    for (const auto& blk : c.blocks)
        for (int x : blk) mark(x);
    c.a0.for_each_set([&](std::size_t x) { mark(static_cast<long long>(x)); });
    c.a_err.for_each_set([&](std::size_t x) { mark(static_cast<long long>(x)); });
    k.partition_ok = !overlap && seen.count() == na;

    k.containment_ok = c.centers.size() == c.blocks.size();
    k.sizes_ok = k.containment_ok;
    Bits residual = Bits::full(static_cast<std::size_t>(na));
    long long rsize = na;
    for (std::size_t i = 0; i < c.blocks.size() && k.containment_ok; ++i) {
        if (c.centers[i] < 0 || c.centers[i] >= nb) {
            k.containment_ok = false;
            break;
        }
        const Bits& row = g.row_b(c.centers[i]);
        long long want = std::max<long long>(1, sq.floor_scaled(rsize));
        if (static_cast<long long>(c.blocks[i].size()) != want) k.sizes_ok = false;
        for (int x : c.blocks[i]) {
            if (x < 0 || x >= na || !row.test(static_cast<std::size_t>(x)) ||
                !residual.test(static_cast<std::size_t>(x))) {
                k.containment_ok = false;
                break;
            }
            residual.reset(static_cast<std::size_t>(x));
            --rsize;
        }
    }

    k.degree_ok = true;
    c.a0.for_each_set([&](std::size_t x) {
        if (qt.cmp_fraction(g.row_a(static_cast<int>(x)).count(), nb) > 0) k.degree_ok = false;
    });
    k.err_ok = qt.cmp_fraction(c.a_err.count(), na) <= 0;
    long long t = static_cast<long long>(c.blocks.size());
    k.t_ok = Ratio(t * t, 1) * c.delta <= Ratio::integer(1);
    return k;
}

namespace {

struct Chunk {
    int src;
    std::vector<int> members;
};

struct PoolElem {
    int src;
    int id;
};

// cut sorted proto-blocks into chunks of exactly `s`, pooling whole blocks
// below `small` and the per-block leftovers
void cut_side(const std::vector<std::vector<int>>& proto, long long s, const Ratio& small,
              std::vector<Chunk>& chunks, std::vector<PoolElem>& pool) {
    for (std::size_t bi = 0; bi < proto.size(); ++bi) {
        const auto& blk = proto[bi];
        if (Ratio(static_cast<long long>(blk.size()), 1) < small) {
            for (int x : blk) pool.push_back({static_cast<int>(bi), x});
            continue;
        }
        std::size_t q = blk.size() / static_cast<std::size_t>(s);
        for (std::size_t c = 0; c < q; ++c) {
            Chunk ch;
            ch.src = static_cast<int>(bi);
            ch.members.assign(blk.begin() + static_cast<std::ptrdiff_t>(c * s),
                              blk.begin() + static_cast<std::ptrdiff_t>((c + 1) * s));
            chunks.push_back(std::move(ch));
        }
        for (std::size_t i = q * static_cast<std::size_t>(s); i < blk.size(); ++i)
            pool.push_back({static_cast<int>(bi), blk[i]});
    }
}

// glue pool vertices onto chunks so final sizes differ by at most one;
// when the pool is smaller than the chunk count each vertex lands on a
// distinct chunk, preferring chunks cut from its own proto-block
void glue_side(std::vector<Chunk>& chunks, const std::vector<PoolElem>& pool, int num_src) {
    const std::size_t keep = chunks.size();
    const std::size_t psz = pool.size();
    if (psz == 0) return;
    if (psz < keep) {
        std::vector<std::vector<std::size_t>> by_src(static_cast<std::size_t>(num_src));
        for (std::size_t ci = 0; ci < keep; ++ci)
            by_src[static_cast<std::size_t>(chunks[ci].src)].push_back(ci);
        std::vector<std::size_t> cursor(static_cast<std::size_t>(num_src), 0);
        std::vector<char> used(keep, 0);
        std::vector<PoolElem> overflow;
        for (const auto& pe : pool) {
            auto& lst = by_src[static_cast<std::size_t>(pe.src)];
            auto& cur = cursor[static_cast<std::size_t>(pe.src)];
            if (cur < lst.size()) {
                chunks[lst[cur]].members.push_back(pe.id);
                used[lst[cur]] = 1;
                ++cur;
            } else {
                overflow.push_back(pe);
            }
        }
        std::size_t scan = 0;
        for (const auto& pe : overflow) {
            while (used[scan]) ++scan;
            chunks[scan].members.push_back(pe.id);
            used[scan] = 1;
        }
        return;
    }
    const std::size_t glow = psz / keep, r = psz % keep;
    std::size_t pos = 0;
    for (std::size_t ci = 0; ci < keep; ++ci) {
        std::size_t take = glow + (ci < r ? 1 : 0);
        for (std::size_t j = 0; j < take; ++j) chunks[ci].members.push_back(pool[pos++].id);
    }
}

std::vector<std::vector<int>> proto_blocks(const PackingResult& p, int n) {
    std::vector<std::vector<int>> blocks(p.representatives.size());
    for (int a = 0; a < n; ++a) {
        int idx = p.assignment[static_cast<std::size_t>(a)];
        if (idx < 0) throw std::logic_error("packing left a vertex unassigned with an empty error color");
        blocks[static_cast<std::size_t>(idx)].push_back(a);
    }
    return blocks;
}

long long ceil_ratio(const Ratio& r) {
    auto q = (r.num() + r.den() - 1) / r.den();
    return q.convert_to<long long>();
}

} // namespace

EquipartitionResult homogeneous_equipartition(const BipartiteGraph& g, int k, const Ratio& eps,
                                              int size_cap, unsigned threads) {
    (void)k;
    const int n = g.na();
    if (g.nb() != n) throw std::invalid_argument("equipartition needs |A| = |B|");
    if (n == 0) throw std::invalid_argument("empty graph");
    if (!(Ratio() < eps)) throw std::invalid_argument("eps must be positive");

    EdgeColoredBipartiteGraph ecg = EdgeColoredBipartiteGraph::from_graph(g);
    PackingResult pack_a = packing_cluster(ecg, eps, eps, threads);
    PackingResult pack_b = packing_cluster(ecg.transposed(), eps, eps, threads);

    EquipartitionResult out;
    out.m_a = static_cast<long long>(pack_a.representatives.size());
    out.m_b = static_cast<long long>(pack_b.representatives.size());

    const long long t = out.m_a + out.m_b;
    const Ratio small = eps * Ratio(n, t);
    const long long s = ceil_ratio(small);

    std::vector<Chunk> chunks_a, chunks_b;
    std::vector<PoolElem> pool_a, pool_b;
    cut_side(proto_blocks(pack_a, n), s, small, chunks_a, pool_a);
    cut_side(proto_blocks(pack_b, n), s, small, chunks_b, pool_b);

    std::vector<std::vector<int>> final_blocks;
    if (chunks_a.empty() || chunks_b.empty()) {
        out.used_fallback = true;
        long long tf = std::clamp<long long>(ceil_ratio(Ratio::integer(1) / eps), 1, n);
        long long base = n / tf, rem = n % tf;
        long long at = 0;
        for (long long i = 0; i < tf; ++i) {
            long long len = base + (i < rem ? 1 : 0);
            std::vector<int> ba, bb;
            for (long long j = 0; j < len; ++j) {
                ba.push_back(static_cast<int>(at + j));
                bb.push_back(static_cast<int>(n + at + j));
            }
            at += len;
            final_blocks.push_back(std::move(ba));
            final_blocks.push_back(std::move(bb));
        }
    } else {
        // demote trailing chunks on the longer side until the counts agree
        while (chunks_a.size() > chunks_b.size()) {
            for (int x : chunks_a.back().members) pool_a.push_back({chunks_a.back().src, x});
            chunks_a.pop_back();
        }
        while (chunks_b.size() > chunks_a.size()) {
            for (int x : chunks_b.back().members) pool_b.push_back({chunks_b.back().src, x});
            chunks_b.pop_back();
        }
        glue_side(chunks_a, pool_a, static_cast<int>(out.m_a));
        glue_side(chunks_b, pool_b, static_cast<int>(out.m_b));
        for (auto& ch : chunks_a) final_blocks.push_back(std::move(ch.members));
        for (auto& ch : chunks_b) {
            for (int& x : ch.members) x += n;
            final_blocks.push_back(std::move(ch.members));
        }
    }

    out.partition = Partition(VertexPart{"V", 2 * n}, std::move(final_blocks));
    out.audit = audit_pair_homogeneity(g.combined(), out.partition, Threshold::ratio(eps));
    out.size_cap_exceeded = size_cap > 0 && static_cast<int>(out.partition.size()) > size_cap;
    return out;
}

} // namespace hompart
