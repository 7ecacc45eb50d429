#include "hompart/vc.hpp"

#include "hompart/parallel.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace hompart {

namespace {

ShatterWitness witness_from_cells(const std::vector<int>& set, const std::vector<Bits>& cells) {
    ShatterWitness w;
    w.shattered = set;
    w.witnesses.reserve(cells.size());
    for (const Bits& c : cells) w.witnesses.push_back(static_cast<int>(c.find_first()));
    return w;
}

} // namespace

VcResult vc_dimension_system(const std::vector<const Bits*>& member_of, std::size_t family_size,
                             int cap) {
    if (cap < 0) throw std::invalid_argument("vc_dimension: cap must be nonnegative");
    VcResult r;
    if (family_size == 0) return r;

    // Two ground elements with the same membership row are interchangeable and
    // can never sit in one shattered set, so one representative per distinct
    // row is enough.
    std::vector<int> reps;
    {
        std::map<const Bits*, int, bool (*)(const Bits*, const Bits*)> seen(
            [](const Bits* a, const Bits* b) { return *a < *b; });
        for (std::size_t e = 0; e < member_of.size(); ++e)
            if (seen.emplace(member_of[e], static_cast<int>(e)).second)
                reps.push_back(static_cast<int>(e));
    }
    int ground_n = static_cast<int>(reps.size());

    std::vector<Bits> root{Bits::full(family_size)};
    r.witness = witness_from_cells({}, root);
    if (cap == 0) {
        r.capped = true;
        return r;
    }

    bool stop = false;
    std::vector<int> cur;
    // Cells are indexed by trace mask: bit j set means the member is
    // adjacent to cur[j]. Extending by e splits every cell in two; the
    // extension survives only if all 2^(j+1) cells stay nonempty.
    auto dfs = [&](auto&& self, int min_next, const std::vector<Bits>& cells) -> void {
        for (int ei = min_next; ei < ground_n && !stop; ++ei) {
            const int e = reps[static_cast<std::size_t>(ei)];
            const Bits& mem = *member_of[static_cast<std::size_t>(e)];
            std::size_t half = cells.size();
            std::vector<Bits> nc(half * 2);
            bool ok = true;
            for (std::size_t m = 0; m < half; ++m) {
                nc[m] = cells[m];
                nc[m].and_not(mem);
                nc[m | half] = cells[m] & mem;
                if (!nc[m].any() || !nc[m | half].any()) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            cur.push_back(e);
            if (static_cast<int>(cur.size()) > r.value) {
                r.value = static_cast<int>(cur.size());
                r.witness = witness_from_cells(cur, nc);
                if (r.value >= cap) {
                    r.capped = true;
                    stop = true;
                }
            }
            if (!stop) self(self, ei + 1, nc);
            cur.pop_back();
        }
    };
    dfs(dfs, 0, root);
    return r;
}

VcResult vc_dimension(const SimpleGraph& g, int cap) {
    std::vector<const Bits*> member(static_cast<std::size_t>(g.n()));
    for (int v = 0; v < g.n(); ++v) member[static_cast<std::size_t>(v)] = &g.row(v);
    return vc_dimension_system(member, static_cast<std::size_t>(g.n()), cap);
}

VcResult vc_dimension(const BipartiteGraph& g, int cap) {
    return vc_dimension(g.combined(), cap);
}

VcResult vc_dimension_oriented(const BipartiteGraph& g, int cap) {
    std::vector<const Bits*> member(static_cast<std::size_t>(g.na()));
    for (int a = 0; a < g.na(); ++a) member[static_cast<std::size_t>(a)] = &g.row_a(a);
    return vc_dimension_system(member, static_cast<std::size_t>(g.nb()), cap);
}

namespace {

SvcResult reduce_slices(std::vector<VcResult>&& per_slice) {
    SvcResult r;
    for (std::size_t x = 0; x < per_slice.size(); ++x) {
        if (per_slice[x].value > r.value || r.worst_slice < 0) {
            r.value = per_slice[x].value;
            r.capped = per_slice[x].capped;
            r.worst_slice = static_cast<int>(x);
            r.witness = std::move(per_slice[x].witness);
        }
    }
    return r;
}

} // namespace

SvcResult slicewise_vc(const TripartiteThreeGraph& h, int cap, unsigned threads) {
    int n = h.nu() + h.nv() + h.nw();
    std::vector<VcResult> per_slice(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t x) {
        int c = static_cast<int>(x);
        BipartiteGraph slice = c < h.nu()              ? h.slice_at_u(c)
                               : c < h.nu() + h.nv()   ? h.slice_at_v(c - h.nu())
                                                       : h.slice_at_w(c - h.nu() - h.nv());
        per_slice[x] = vc_dimension(slice, cap);
    });
    return reduce_slices(std::move(per_slice));
}

SvcResult slicewise_vc(const GeneralThreeGraph& h, int cap, unsigned threads) {
    std::vector<VcResult> per_slice(static_cast<std::size_t>(h.n()));
    parallel_for(static_cast<std::size_t>(h.n()), threads, [&](std::size_t x) {
        per_slice[x] = vc_dimension(h.slice_at(static_cast<int>(x)), cap);
    });
    return reduce_slices(std::move(per_slice));
}

UkSearchResult find_uk_copy(const EdgeColoredBipartiteGraph& g, int color_u, int color_v, int k,
                            long long budget) {
    if (color_u < 0 || color_u >= g.num_colors() || color_v < 0 || color_v >= g.num_colors() ||
        color_u == color_v)
        throw std::invalid_argument("find_uk_copy: invalid color pair");
    if (k < 1) throw std::invalid_argument("find_uk_copy: k must be positive");

    UkSearchResult res;
    long long remaining = budget;
    for (int orient = 0; orient < 2; ++orient) {
        int nleft = orient == 0 ? g.na() : g.nb();
        std::size_t nright = static_cast<std::size_t>(orient == 0 ? g.nb() : g.na());
        auto row_u = [&](int x) -> const Bits& { return orient == 0 ? g.nbr_a(color_u, x) : g.nbr_b(color_u, x); };
        auto row_v = [&](int x) -> const Bits& { return orient == 0 ? g.nbr_a(color_v, x) : g.nbr_b(color_v, x); };

        bool exhausted = false;
        std::vector<int> cur;
        auto dfs = [&](auto&& self, int min_next, const std::vector<Bits>& cells) -> bool {
            for (int x = min_next; x < nleft; ++x) {
                if (remaining <= 0) {
                    exhausted = true;
                    return false;
                }
                --remaining;
                std::size_t half = cells.size();
                std::vector<Bits> nc(half * 2);
                bool ok = true;
                for (std::size_t m = 0; m < half; ++m) {
                    nc[m] = cells[m] & row_v(x);
                    nc[m | half] = cells[m] & row_u(x);
                    if (!nc[m].any() || !nc[m | half].any()) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                cur.push_back(x);
                if (static_cast<int>(cur.size()) == k) {
                    UkWitness w;
                    w.left = cur;
                    w.right.reserve(nc.size());
                    for (const Bits& c : nc) w.right.push_back(static_cast<int>(c.find_first()));
                    w.color_u = color_u;
                    w.color_v = color_v;
                    w.right_in_b = orient == 0;
                    res.witness = std::move(w);
                    return true;
                }
                if (self(self, x + 1, nc)) return true;
                if (exhausted) return false;
                cur.pop_back();
            }
            return false;
        };
        std::vector<Bits> root{Bits::full(nright)};
        bool found = dfs(dfs, 0, root);
        if (found) {
            res.outcome = UkOutcome::witness;
            break;
        }
        if (exhausted) {
            res.outcome = UkOutcome::budget_exhausted;
            break;
        }
        res.outcome = UkOutcome::none;
    }
    res.nodes = budget - remaining;
    return res;
}

} // namespace hompart
