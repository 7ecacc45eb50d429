#include "hompart/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace hompart {

Partition::Partition(VertexPart ground, std::vector<std::vector<int>> blocks)
    : ground_(std::move(ground)), blocks_(std::move(blocks)) {
    if (ground_.n < 0) throw std::invalid_argument("Partition: negative ground size");
    block_of_.assign(static_cast<std::size_t>(ground_.n), -1);
    for (auto& b : blocks_) {
        if (b.empty()) throw std::invalid_argument("Partition: empty block");
        std::sort(b.begin(), b.end());
        for (int v : b) {
            if (v < 0 || v >= ground_.n)
                throw std::out_of_range("Partition: element outside ground set");
            if (block_of_[static_cast<std::size_t>(v)] != -1)
                throw std::invalid_argument("Partition: blocks overlap at " + std::to_string(v));
            block_of_[static_cast<std::size_t>(v)] = 0; // provisional, relabeled below
        }
    }
    for (int v = 0; v < ground_.n; ++v)
        if (block_of_[static_cast<std::size_t>(v)] == -1)
            throw std::invalid_argument("Partition: element " + std::to_string(v) + " uncovered");
    std::sort(blocks_.begin(), blocks_.end(),
              [](const std::vector<int>& x, const std::vector<int>& y) { return x.front() < y.front(); });
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        for (int v : blocks_[i]) block_of_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

Partition Partition::trivial(VertexPart ground) {
    std::vector<int> all(static_cast<std::size_t>(ground.n));
    std::iota(all.begin(), all.end(), 0);
    return Partition(std::move(ground), {std::move(all)});
}

Partition Partition::discrete(VertexPart ground) {
    std::vector<std::vector<int>> blocks;
    blocks.reserve(static_cast<std::size_t>(ground.n));
    for (int v = 0; v < ground.n; ++v) blocks.push_back({v});
    return Partition(std::move(ground), std::move(blocks));
}

Partition Partition::from_assignment(VertexPart ground, const std::vector<int>& block_of) {
    if (block_of.size() != static_cast<std::size_t>(ground.n))
        throw std::invalid_argument("Partition::from_assignment: size mismatch");
    std::map<int, std::vector<int>> by_label;
    for (int v = 0; v < ground.n; ++v) by_label[block_of[static_cast<std::size_t>(v)]].push_back(v);
    std::vector<std::vector<int>> blocks;
    blocks.reserve(by_label.size());
    for (auto& [label, vs] : by_label) blocks.push_back(std::move(vs));
    return Partition(std::move(ground), std::move(blocks));
}

Bits Partition::block_bits(std::size_t i) const {
    return Bits::from_indices(static_cast<std::size_t>(ground_.n), blocks_[i]);
}

Partition restrict_partition(const Partition& p, const Bits& subset, const std::string& name) {
    if (subset.size() != static_cast<std::size_t>(p.ground_size()))
        throw std::invalid_argument("restrict_partition: subset width mismatch");
    std::vector<int> rank(subset.size(), -1);
    int m = 0;
    subset.for_each_set([&](std::size_t v) { rank[v] = m++; });
    std::vector<std::vector<int>> blocks(p.size());
    subset.for_each_set([&](std::size_t v) {
        blocks[static_cast<std::size_t>(p.block_of(static_cast<int>(v)))].push_back(rank[v]);
    });
    std::vector<std::vector<int>> nonempty;
    for (auto& b : blocks)
        if (!b.empty()) nonempty.push_back(std::move(b));
    return Partition(VertexPart{name, m}, std::move(nonempty));
}

Partition common_refinement(const std::vector<Partition>& parts) {
    if (parts.empty()) throw std::invalid_argument("common_refinement: no partitions");
    int n = parts[0].ground_size();
    for (const Partition& p : parts)
        if (p.ground_size() != n)
            throw std::invalid_argument("common_refinement: ground sets differ");
    // Iteratively intersect; labels are temporary, the Partition constructor
    // normalizes the result into canonical order.
    std::vector<int> label(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) label[static_cast<std::size_t>(v)] = parts[0].block_of(v);
    for (std::size_t k = 1; k < parts.size(); ++k) {
        std::map<std::pair<int, int>, int> remap;
        for (int v = 0; v < n; ++v) {
            auto key = std::make_pair(label[static_cast<std::size_t>(v)], parts[k].block_of(v));
            auto it = remap.emplace(key, static_cast<int>(remap.size())).first;
            label[static_cast<std::size_t>(v)] = it->second;
        }
    }
    return Partition::from_assignment(parts[0].ground(), label);
}

bool is_equipartition(const Partition& p) {
    if (p.size() == 0) return true;
    long long mn = p.block_size(0), mx = p.block_size(0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        mn = std::min(mn, p.block_size(i));
        mx = std::max(mx, p.block_size(i));
    }
    return mx - mn <= 1;
}

AveragingResult averaging_select(const Bits& a, const Partition& p, const Ratio& par_a, const Ratio& par_b) {
    if (a.size() != static_cast<std::size_t>(p.ground_size()))
        throw std::invalid_argument("averaging_select: subset width mismatch");
    AveragingResult r;
    Threshold ta = Threshold::ratio(par_a);
    for (std::size_t i = 0; i < p.size(); ++i) {
        long long inter = a.and_count(p.block_bits(i));
        if (ta.above_eq_one_minus(inter, p.block_size(i))) {
            r.selected.push_back(static_cast<int>(i));
            r.selected_union += p.block_size(i);
        }
    }
    long long n = p.ground_size();
    r.hypothesis_holds = Threshold::ratio(par_a * par_b).above_eq_one_minus(a.count(), n);
    r.conclusion_holds = Threshold::ratio(par_b).above_eq_one_minus(r.selected_union, n);
    return r;
}

namespace {

constexpr long long kFlagCap = 20000;
constexpr std::size_t kWorstCap = 8;

// Orders tuples by closeness of their density to 1/2: |den - 2 num| / den
// ascending, compared exactly by cross multiplication.
bool closer_to_half(const Density& x, const Density& y) {
    auto dist = [](const Density& d) { return d.den > 2 * d.num ? d.den - 2 * d.num : 2 * d.num - d.den; };
    unsigned __int128 lhs = static_cast<unsigned __int128>(dist(x)) * static_cast<unsigned __int128>(y.den);
    unsigned __int128 rhs = static_cast<unsigned __int128>(dist(y)) * static_cast<unsigned __int128>(x.den);
    return lhs < rhs;
}

struct AuditBuilder {
    HomogeneityAudit out;

    explicit AuditBuilder(const Threshold& eps) { out.epsilon = eps; }

    // One audited block tuple standing for `multiplicity` ordered tuples of
    // identical density. Contributes den * multiplicity to the mass when
    // good; recorded in flags once, as a representative.
    void add(std::array<int, 3> blocks, long long num, long long den, long long multiplicity,
             bool record_good_flags) {
        bool good = out.epsilon.in_hom_interval(num, den);
        out.tuples_total += multiplicity;
        if (good)
            out.good_mass += den * multiplicity;
        else
            out.tuples_bad += multiplicity;
        Density d{num, den};
        if (record_good_flags || !good) {
            if (static_cast<long long>(out.flags.size()) < kFlagCap)
                out.flags.push_back(TupleFlag{blocks, d, good});
            else
                out.flags_complete = false;
        }
        if (!good) {
            if (out.worst.size() < kWorstCap) {
                out.worst.push_back(TupleFlag{blocks, d, good});
            } else if (closer_to_half(d, out.worst.back().d)) {
                out.worst.back() = TupleFlag{blocks, d, good};
            } else {
                return;
            }
            std::sort(out.worst.begin(), out.worst.end(),
                      [](const TupleFlag& x, const TupleFlag& y) { return closer_to_half(x.d, y.d); });
        }
    }

    HomogeneityAudit finish(long long total_mass) {
        out.total_mass = total_mass;
        out.is_homogeneous = out.epsilon.above_eq_one_minus(out.good_mass, total_mass);
        return std::move(out);
    }
};

// Sorted key runs from a flat u64 key list.
std::vector<std::pair<std::uint64_t, long long>> key_counts(std::vector<std::uint64_t>& keys) {
    std::sort(keys.begin(), keys.end());
    std::vector<std::pair<std::uint64_t, long long>> runs;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        runs.emplace_back(keys[i], static_cast<long long>(j - i));
        i = j;
    }
    return runs;
}

} // namespace

HomogeneityAudit audit_pair_homogeneity(const SimpleGraph& g, const Partition& p, const Threshold& eps) {
    if (p.ground_size() != g.n())
        throw std::invalid_argument("audit_pair_homogeneity: partition ground does not match graph");
    std::size_t t = p.size();
    std::vector<long long> cnt(t * t, 0);
    for (int v = 0; v < g.n(); ++v) {
        std::size_t bv = static_cast<std::size_t>(p.block_of(v));
        g.row(v).for_each_set([&](std::size_t u) {
            cnt[bv * t + static_cast<std::size_t>(p.block_of(static_cast<int>(u)))]++;
        });
    }
    bool record_all = static_cast<long long>(t) * static_cast<long long>(t) <= kFlagCap;
    AuditBuilder b(eps);
    if (!record_all) b.out.flags_complete = false;
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j)
            b.add({static_cast<int>(i), static_cast<int>(j), -1}, cnt[i * t + j],
                  p.block_size(i) * p.block_size(j), 1, record_all);
    long long n = g.n();
    return b.finish(n * n);
}

HomogeneityAudit audit_pair_homogeneity(const BipartiteGraph& g, const Partition& p, const Threshold& eps) {
    return audit_pair_homogeneity(g.combined(), p, eps);
}

namespace {

// Shared tail of the sparse triple audits: fold the block tuples carrying no
// edges in closed form. Their density is exactly 0, homogeneous iff the
// interval [0, eps) is nonempty.
HomogeneityAudit finish_sparse_triples(AuditBuilder& b, long long t3, long long nonzero_mass,
                                       long long total_mass) {
    long long zero_tuples = t3 - b.out.tuples_total;
    if (b.out.epsilon.below(0, 1))
        b.out.good_mass += total_mass - nonzero_mass;
    else
        b.out.tuples_bad += zero_tuples;
    b.out.tuples_total = t3;
    b.out.flags_complete = false;
    return b.finish(total_mass);
}

} // namespace

HomogeneityAudit audit_triple_homogeneity(const TripartiteThreeGraph& h, const Partition& p,
                                          const Threshold& eps) {
    long long n = h.nu() + h.nv() + h.nw();
    if (p.ground_size() != n)
        throw std::invalid_argument(
            "audit_triple_homogeneity: partition must cover U+V+W (combined ids)");
    std::size_t t = p.size();
    std::uint64_t tt = t;
    long long t3 = static_cast<long long>(t) * t * t;

    // When every block sits inside a single part, one (U,V,W)-oriented count
    // stands for all six ordered arrangements of its blocks. Straddling
    // blocks fall back to placing each of the six arrangements explicitly.
    auto side_of = [&](int v) { return v < h.nu() ? 0 : (v < h.nu() + h.nv() ? 1 : 2); };
    std::vector<int> part_of(t);
    bool part_respecting = true;
    for (std::size_t i = 0; i < t; ++i) {
        const auto& blk = p.block(i);
        part_of[i] = side_of(blk.front());
        for (int v : blk)
            if (side_of(v) != part_of[i]) { part_respecting = false; break; }
    }

    std::vector<std::uint64_t> keys;
    keys.reserve(h.edges().size() * (part_respecting ? 1 : 6));
    for (const auto& e : h.edges()) {
        int bu = p.block_of(e[0]);
        int bv = p.block_of(h.nu() + e[1]);
        int bw = p.block_of(h.nu() + h.nv() + e[2]);
        if (part_respecting) {
            keys.push_back((static_cast<std::uint64_t>(bu) * tt + bv) * tt + bw);
        } else {
            int ids[3] = {bu, bv, bw};
            static constexpr int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                               {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
            for (const auto& pr : perm)
                keys.push_back((static_cast<std::uint64_t>(ids[pr[0]]) * tt + ids[pr[1]]) * tt + ids[pr[2]]);
        }
    }
    auto runs = key_counts(keys);

    auto den_of = [&](int i, int j, int k) {
        return p.block_size(static_cast<std::size_t>(i)) * p.block_size(static_cast<std::size_t>(j)) *
               p.block_size(static_cast<std::size_t>(k));
    };

    if (t3 <= kFlagCap) {
        // Dense path: every ordered block tuple enumerated and flagged.
        std::unordered_map<std::uint64_t, long long> by_key(runs.size() * 2 + 1);
        for (const auto& [key, c] : runs) by_key.emplace(key, c);
        AuditBuilder b(eps);
        for (int i = 0; i < static_cast<int>(t); ++i)
            for (int j = 0; j < static_cast<int>(t); ++j)
                for (int k = 0; k < static_cast<int>(t); ++k) {
                    std::uint64_t key;
                    bool has = true;
                    if (part_respecting) {
                        // Reorder to the stored (U,V,W) orientation; tuples
                        // not meeting all three parts have density 0.
                        int by_part[3] = {-1, -1, -1};
                        int ids[3] = {i, j, k};
                        for (int s = 0; s < 3; ++s) {
                            if (by_part[part_of[static_cast<std::size_t>(ids[s])]] != -1) has = false;
                            by_part[part_of[static_cast<std::size_t>(ids[s])]] = ids[s];
                        }
                        key = has ? (static_cast<std::uint64_t>(by_part[0]) * tt + by_part[1]) * tt + by_part[2]
                                  : 0;
                    } else {
                        key = (static_cast<std::uint64_t>(i) * tt + j) * tt + k;
                    }
                    long long num = 0;
                    if (has) {
                        auto it = by_key.find(key);
                        if (it != by_key.end()) num = it->second;
                    }
                    b.add({i, j, k}, num, den_of(i, j, k), 1, true);
                }
        return b.finish(n * n * n);
    }

    AuditBuilder b(eps);
    long long nonzero_mass = 0;
    long long mult = part_respecting ? 6 : 1;
    for (const auto& [key, c] : runs) {
        int k = static_cast<int>(key % tt);
        int j = static_cast<int>((key / tt) % tt);
        int i = static_cast<int>(key / (tt * tt));
        long long den = den_of(i, j, k);
        nonzero_mass += den * mult;
        b.add({i, j, k}, c, den, mult, false);
    }
    return finish_sparse_triples(b, t3, nonzero_mass, n * n * n);
}

HomogeneityAudit audit_triple_homogeneity(const GeneralThreeGraph& h, const Partition& p,
                                          const Threshold& eps) {
    long long n = h.n();
    if (p.ground_size() != h.n())
        throw std::invalid_argument("audit_triple_homogeneity: partition ground does not match graph");
    std::size_t t = p.size();
    std::uint64_t tt = t;
    long long t3 = static_cast<long long>(t) * t * t;

    std::vector<std::uint64_t> keys;
    keys.reserve(h.edges().size());
    for (const auto& e : h.edges()) {
        int s[3] = {p.block_of(e[0]), p.block_of(e[1]), p.block_of(e[2])};
        std::sort(s, s + 3);
        keys.push_back((static_cast<std::uint64_t>(s[0]) * tt + s[1]) * tt + s[2]);
    }
    auto runs = key_counts(keys);

    auto den_of = [&](int i, int j, int k) {
        return p.block_size(static_cast<std::size_t>(i)) * p.block_size(static_cast<std::size_t>(j)) *
               p.block_size(static_cast<std::size_t>(k));
    };
    // Each edge splits its six ordered vertex placements evenly over the
    // distinct ordered arrangements of its block multiset, so every
    // arrangement of a run receives numerator 6c / arrangements exactly.
    auto arrangements_of = [](int i, int j, int k) {
        return (i == j && j == k) ? 1LL : ((i == j || j == k) ? 3LL : 6LL);
    };

    if (t3 <= kFlagCap) {
        std::unordered_map<std::uint64_t, long long> by_key(runs.size() * 2 + 1);
        for (const auto& [key, c] : runs) by_key.emplace(key, c);
        AuditBuilder b(eps);
        for (int i = 0; i < static_cast<int>(t); ++i)
            for (int j = 0; j < static_cast<int>(t); ++j)
                for (int k = 0; k < static_cast<int>(t); ++k) {
                    int s[3] = {i, j, k};
                    std::sort(s, s + 3);
                    long long num = 0;
                    auto it = by_key.find((static_cast<std::uint64_t>(s[0]) * tt + s[1]) * tt + s[2]);
                    if (it != by_key.end())
                        num = 6 * it->second / arrangements_of(s[0], s[1], s[2]);
                    b.add({i, j, k}, num, den_of(i, j, k), 1, true);
                }
        return b.finish(n * n * n);
    }

    AuditBuilder b(eps);
    long long nonzero_mass = 0;
    for (const auto& [key, c] : runs) {
        int k = static_cast<int>(key % tt);
        int j = static_cast<int>((key / tt) % tt);
        int i = static_cast<int>(key / (tt * tt));
        long long arr = arrangements_of(i, j, k);
        long long den = den_of(i, j, k);
        nonzero_mass += den * arr;
        b.add({i, j, k}, 6 * c / arr, den, arr, false);
    }
    return finish_sparse_triples(b, t3, nonzero_mass, n * n * n);
}

GoodSetAudit almost_good_set(const TripartiteThreeGraph& h, int part_index, const Bits& x,
                             const Threshold& eps) {
    GoodSetAudit r;
    long long xs = x.count();
    if (xs == 0) throw std::invalid_argument("almost_good_set: empty set");
    const PairTable* tab;
    int ni, nj, nx;
    switch (part_index) {
        case 0: tab = &h.table_vw(); ni = h.nv(); nj = h.nw(); nx = h.nu(); break;
        case 1: tab = &h.table_uw(); ni = h.nu(); nj = h.nw(); nx = h.nv(); break;
        case 2: tab = &h.table_uv(); ni = h.nu(); nj = h.nv(); nx = h.nw(); break;
        default: throw std::invalid_argument("almost_good_set: part_index must be 0, 1 or 2");
    }
    if (x.size() != static_cast<std::size_t>(nx))
        throw std::invalid_argument("almost_good_set: subset width does not match the part");
    r.total_pairs = static_cast<long long>(ni) * nj;
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j) {
            long long c = tab->count_and(i, j, x);
            if (!eps.in_hom_interval(c, xs)) ++r.exceptional_pairs;
        }
    r.is_almost_good = eps.above_eq_one_minus(r.total_pairs - r.exceptional_pairs, r.total_pairs);
    return r;
}

GoodSetAudit almost_good_set_graph(const BipartiteGraph& g, const Bits& x, const Threshold& eps) {
    if (x.size() != static_cast<std::size_t>(g.nb()))
        throw std::invalid_argument("almost_good_set_graph: X must live in part B");
    long long xs = x.count();
    if (xs == 0) throw std::invalid_argument("almost_good_set_graph: empty set");
    GoodSetAudit r;
    r.total_pairs = g.na();
    for (int a = 0; a < g.na(); ++a) {
        long long c = g.row_a(a).and_count(x);
        if (!eps.in_hom_interval(c, xs)) ++r.exceptional_pairs;
    }
    r.is_almost_good = eps.above_eq_one_minus(r.total_pairs - r.exceptional_pairs, r.total_pairs);
    return r;
}

GoodnessAudit almost_good_partition(const TripartiteThreeGraph& h, int part_index, const Partition& p,
                                    const Threshold& eps) {
    int part_n = part_index == 0 ? h.nu() : part_index == 1 ? h.nv() : h.nw();
    if (p.ground_size() != part_n)
        throw std::invalid_argument("almost_good_partition: partition must cover the named part");
    GoodnessAudit r;
    r.part_size = part_n;
    for (std::size_t i = 0; i < p.size(); ++i) {
        GoodSetAudit a = almost_good_set(h, part_index, p.block_bits(i), eps);
        if (a.is_almost_good) r.covered += p.block_size(i);
        r.block_audits.push_back(a);
    }
    r.is_almost_good = eps.above_eq_one_minus(r.covered, r.part_size);
    return r;
}

} // namespace hompart
