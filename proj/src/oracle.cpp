#include "hompart/oracle.hpp"

#include "hompart/rng.hpp"

#include <stdexcept>
#include <string>

namespace hompart {

namespace {

void guard_tuples(long long count, const char* who) {
    if (count > kOracleTupleCap)
        throw std::invalid_argument(std::string(who) + ": instance exceeds the oracle size guard");
}

long long cube(long long n) { return n * n * n; }

} // namespace

long long brute_triangle_count(const Triad& t) {
    long long nx = static_cast<long long>(t.xs.size());
    long long ny = static_cast<long long>(t.ys.size());
    long long nz = static_cast<long long>(t.zs.size());
    guard_tuples(nx * ny * nz, "brute_triangle_count");
    long long c = 0;
    for (std::size_t i = 0; i < t.xs.size(); ++i)
        for (std::size_t j = 0; j < t.ys.size(); ++j)
            for (std::size_t k = 0; k < t.zs.size(); ++k)
                if (t.p[i].test(j) && t.q[i].test(k) && t.r[j].test(k)) ++c;
    return c;
}

Density brute_density_pair(const BipartiteGraph& g, const std::vector<int>& xs,
                           const std::vector<int>& ys) {
    long long pairs = static_cast<long long>(xs.size()) * static_cast<long long>(ys.size());
    guard_tuples(pairs, "brute_density_pair");
    Density d{0, pairs};
    for (int x : xs)
        for (int y : ys)
            if (g.has_edge(x, y)) ++d.num;
    return d;
}

Density brute_density_pair(const SimpleGraph& g, const std::vector<int>& xs,
                           const std::vector<int>& ys) {
    long long pairs = static_cast<long long>(xs.size()) * static_cast<long long>(ys.size());
    guard_tuples(pairs, "brute_density_pair");
    Density d{0, pairs};
    for (int x : xs)
        for (int y : ys)
            if (x != y && g.has_edge(x, y)) ++d.num;
    return d;
}

Density brute_density_triple(const TripartiteThreeGraph& h, const std::vector<int>& xs,
                             const std::vector<int>& ys, const std::vector<int>& zs) {
    long long tuples = static_cast<long long>(xs.size()) * static_cast<long long>(ys.size()) *
                       static_cast<long long>(zs.size());
    guard_tuples(tuples, "brute_density_triple");
    Density d{0, tuples};
    for (int x : xs)
        for (int y : ys)
            for (int z : zs)
                if (h.has_edge(x, y, z)) ++d.num;
    return d;
}

Density brute_density_triple(const GeneralThreeGraph& h, const std::vector<int>& xs,
                             const std::vector<int>& ys, const std::vector<int>& zs) {
    long long tuples = static_cast<long long>(xs.size()) * static_cast<long long>(ys.size()) *
                       static_cast<long long>(zs.size());
    guard_tuples(tuples, "brute_density_triple");
    Density d{0, tuples};
    for (int x : xs)
        for (int y : ys) {
            if (x == y) continue;
            for (int z : zs)
                if (z != x && z != y && h.has_edge(x, y, z)) ++d.num;
        }
    return d;
}

namespace {

// Lexicographic combinations of size s over [0, n).
bool next_combination(std::vector<int>& idx, int n) {
    int s = static_cast<int>(idx.size());
    int i = s - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - s + i) --i;
    if (i < 0) return false;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    return true;
}

bool any_shattered_of_size(const SimpleGraph& g, int s) {
    int n = g.n();
    if (s > n || s >= 31) return false;
    std::vector<int> idx(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::vector<char> seen;
    do {
        seen.assign(static_cast<std::size_t>(1) << s, 0);
        int found = 0;
        for (int v = 0; v < n && found < (1 << s); ++v) {
            unsigned m = 0;
            for (int i = 0; i < s; ++i)
                if (g.has_edge(v, idx[static_cast<std::size_t>(i)])) m |= 1u << i;
            if (!seen[m]) {
                seen[m] = 1;
                ++found;
            }
        }
        if (found == 1 << s) return true;
    } while (next_combination(idx, n));
    return false;
}

} // namespace

VcResult brute_vc(const SimpleGraph& g, int cap) {
    if (cap < 0) throw std::invalid_argument("brute_vc: cap must be nonnegative");
    if (g.n() > kOracleVcVertexCap)
        throw std::invalid_argument("brute_vc: graph exceeds the oracle size guard");
    VcResult r;
    if (g.n() == 0) return r;
    for (int s = 1; s <= cap; ++s) {
        if (!any_shattered_of_size(g, s)) break;
        r.value = s;
    }
    r.capped = r.value == cap;
    return r;
}

namespace {

SimpleGraph combined_naive(const BipartiteGraph& g) {
    SimpleGraph c(g.na() + g.nb());
    for (int a = 0; a < g.na(); ++a)
        for (int b = 0; b < g.nb(); ++b)
            if (g.has_edge(a, b)) c.add_edge(a, g.na() + b);
    return c;
}

} // namespace

VcResult brute_vc(const BipartiteGraph& g, int cap) { return brute_vc(combined_naive(g), cap); }

namespace {

BipartiteGraph brute_slice_u(const TripartiteThreeGraph& h, int x) {
    BipartiteGraph s({"V", h.nv()}, {"W", h.nw()});
    for (int y = 0; y < h.nv(); ++y)
        for (int z = 0; z < h.nw(); ++z)
            if (h.has_edge(x, y, z)) s.add_edge(y, z);
    return s;
}

BipartiteGraph brute_slice_v(const TripartiteThreeGraph& h, int y) {
    BipartiteGraph s({"U", h.nu()}, {"W", h.nw()});
    for (int x = 0; x < h.nu(); ++x)
        for (int z = 0; z < h.nw(); ++z)
            if (h.has_edge(x, y, z)) s.add_edge(x, z);
    return s;
}

BipartiteGraph brute_slice_w(const TripartiteThreeGraph& h, int z) {
    BipartiteGraph s({"U", h.nu()}, {"V", h.nv()});
    for (int x = 0; x < h.nu(); ++x)
        for (int y = 0; y < h.nv(); ++y)
            if (h.has_edge(x, y, z)) s.add_edge(x, y);
    return s;
}

SimpleGraph brute_slice_general(const GeneralThreeGraph& h, int x) {
    SimpleGraph s(h.n());
    for (int y = 0; y < h.n(); ++y) {
        if (y == x) continue;
        for (int z = y + 1; z < h.n(); ++z)
            if (z != x && h.has_edge(x, y, z)) s.add_edge(y, z);
    }
    return s;
}

// Same reduction as the fast path: first strict improvement in ascending
// slice order wins, and the capped flag is the recorded slice's.
void fold_slice(SvcResult& r, const VcResult& s, int id) {
    if (s.value > r.value || r.worst_slice < 0) {
        r.value = s.value;
        r.capped = s.capped;
        r.worst_slice = id;
    }
}

} // namespace

SvcResult brute_svc(const TripartiteThreeGraph& h, int cap) {
    SvcResult r;
    int id = 0;
    for (int x = 0; x < h.nu(); ++x, ++id) fold_slice(r, brute_vc(brute_slice_u(h, x), cap), id);
    for (int y = 0; y < h.nv(); ++y, ++id) fold_slice(r, brute_vc(brute_slice_v(h, y), cap), id);
    for (int z = 0; z < h.nw(); ++z, ++id) fold_slice(r, brute_vc(brute_slice_w(h, z), cap), id);
    return r;
}

SvcResult brute_svc(const GeneralThreeGraph& h, int cap) {
    SvcResult r;
    for (int x = 0; x < h.n(); ++x) fold_slice(r, brute_vc(brute_slice_general(h, x), cap), x);
    return r;
}

namespace {

bool in_interval(long long num, long long den, const Ratio& eps) {
    Ratio d(num, den);
    return d < eps || Ratio::integer(1) - d < eps;
}

} // namespace

Density brute_pair_audit_fraction(const SimpleGraph& g, const Partition& p, const Ratio& eps) {
    long long n = g.n();
    guard_tuples(n * n, "brute_pair_audit_fraction");
    Density out{0, n * n};
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) {
            long long num = 0;
            for (int u : p.block(i))
                for (int v : p.block(j))
                    if (u != v && g.has_edge(u, v)) ++num;
            long long den = p.block_size(i) * p.block_size(j);
            if (in_interval(num, den, eps)) out.num += den;
        }
    return out;
}

Density brute_triple_audit_fraction(const TripartiteThreeGraph& h, const Partition& p,
                                    const Ratio& eps) {
    long long n = h.nu() + h.nv() + h.nw();
    guard_tuples(cube(n), "brute_triple_audit_fraction");
    int ov = h.nu(), ow = h.nu() + h.nv();
    auto edge = [&](int a, int b, int c) {
        return a < ov && b >= ov && b < ow && c >= ow && h.has_edge(a, b - ov, c - ow);
    };
    Density out{0, cube(n)};
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            for (std::size_t k = 0; k < p.size(); ++k) {
                long long num = 0;
                for (int a : p.block(i))
                    for (int b : p.block(j))
                        for (int c : p.block(k))
                            if (edge(a, b, c)) ++num;
                long long den = p.block_size(i) * p.block_size(j) * p.block_size(k);
                if (in_interval(num, den, eps)) out.num += den;
            }
    return out;
}

Density brute_triple_audit_fraction(const GeneralThreeGraph& h, const Partition& p,
                                    const Ratio& eps) {
    long long n = h.n();
    guard_tuples(cube(n), "brute_triple_audit_fraction");
    Density out{0, cube(n)};
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            for (std::size_t k = 0; k < p.size(); ++k) {
                long long num = 0;
                for (int a : p.block(i))
                    for (int b : p.block(j)) {
                        if (a == b) continue;
                        for (int c : p.block(k))
                            if (c != a && c != b && h.has_edge(a, b, c)) ++num;
                    }
                long long den = p.block_size(i) * p.block_size(j) * p.block_size(k);
                if (in_interval(num, den, eps)) out.num += den;
            }
    return out;
}

namespace {

constexpr std::uint64_t kTagSubsetX = 21;
constexpr std::uint64_t kTagSubsetY = 22;
constexpr std::uint64_t kTagSubsetZ = 23;
constexpr std::uint64_t kTagTriadP = 24;
constexpr std::uint64_t kTagTriadQ = 25;
constexpr std::uint64_t kTagTriadR = 26;
constexpr std::uint64_t kTagProbe = 27;
constexpr std::uint64_t kTagBlocks = 28;

std::uint64_t stream(std::uint64_t seed, std::uint64_t tag) { return mix64(seed ^ mix64(tag)); }

// Nonempty subset of [lo, lo+n) whenever n > 0.
std::vector<int> pick_ids(std::uint64_t s, int n, int lo) {
    std::vector<int> ids;
    for (int v = 0; v < n; ++v)
        if (hash2(s, static_cast<std::uint64_t>(v)) & 1) ids.push_back(lo + v);
    if (ids.empty() && n > 0)
        ids.push_back(lo + static_cast<int>(hash2(s, static_cast<std::uint64_t>(n)) %
                                            static_cast<std::uint64_t>(n)));
    return ids;
}

Bits ids_to_bits(const std::vector<int>& ids, int n, int lo) {
    Bits b(static_cast<std::size_t>(n));
    for (int id : ids) b.set(static_cast<std::size_t>(id - lo));
    return b;
}

std::vector<Bits> random_rows(std::uint64_t s, std::size_t rows, std::size_t width) {
    std::vector<Bits> out(rows, Bits(width));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < width; ++j)
            if (hash2(s, i * width + j) & 1) out[i].set(j);
    return out;
}

Partition random_partition(std::uint64_t s, int n, const char* name) {
    std::uint64_t b = 2 + hash2(s, static_cast<std::uint64_t>(n) + 1) % 3;
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        labels[static_cast<std::size_t>(v)] =
            static_cast<int>(hash2(s, static_cast<std::uint64_t>(v)) % b);
    return Partition::from_assignment({name, n}, labels);
}

std::string fmt(const Density& d) { return std::to_string(d.num) + "/" + std::to_string(d.den); }
std::string fmt(const VcResult& r) { return std::to_string(r.value) + (r.capped ? "*" : ""); }
std::string fmt(const SvcResult& r) {
    return std::to_string(r.value) + (r.capped ? "*" : "") + "@" + std::to_string(r.worst_slice);
}

OracleReport rep(std::string q, std::string fast, std::string brute) {
    bool m = fast == brute;
    return {std::move(q), std::move(fast), std::move(brute), m};
}

// Triad over the given side sizes with seed-drawn relation rows; the ids are
// 0-based per side, so it is valid against any ambient graph of those sizes.
Triad random_triad(std::uint64_t seed, const std::vector<int>& xs, const std::vector<int>& ys,
                   const std::vector<int>& zs) {
    Triad t;
    t.xs = xs;
    t.ys = ys;
    t.zs = zs;
    t.p = random_rows(stream(seed, kTagTriadP), xs.size(), ys.size());
    t.q = random_rows(stream(seed, kTagTriadQ), xs.size(), zs.size());
    t.r = random_rows(stream(seed, kTagTriadR), ys.size(), zs.size());
    return t;
}

[[noreturn]] void unknown_quantity(const std::string& q) {
    throw std::invalid_argument("brute_oracles: unknown quantity \"" + q + "\"");
}

} // namespace

std::vector<OracleReport> brute_oracles(const TripartiteThreeGraph& h,
                                        const std::vector<std::string>& quantities,
                                        std::uint64_t seed, int vc_cap, unsigned threads) {
    std::vector<OracleReport> out;
    for (const std::string& q : quantities) {
        if (q == "density") {
            auto xs = pick_ids(stream(seed, kTagSubsetX), h.nu(), 0);
            auto ys = pick_ids(stream(seed, kTagSubsetY), h.nv(), 0);
            auto zs = pick_ids(stream(seed, kTagSubsetZ), h.nw(), 0);
            Density fast = density_triple(h, ids_to_bits(xs, h.nu(), 0),
                                          ids_to_bits(ys, h.nv(), 0), ids_to_bits(zs, h.nw(), 0));
            out.push_back(rep(q, fmt(fast), fmt(brute_density_triple(h, xs, ys, zs))));
        } else if (q == "triangles") {
            auto xs = pick_ids(stream(seed, kTagSubsetX), h.nu(), 0);
            auto ys = pick_ids(stream(seed, kTagSubsetY), h.nv(), 0);
            auto zs = pick_ids(stream(seed, kTagSubsetZ), h.nw(), 0);
            Triad t = random_triad(seed, xs, ys, zs);
            out.push_back(rep(q, std::to_string(triangle_count(t, threads)),
                              std::to_string(brute_triangle_count(t))));
        } else if (q == "vc") {
            int total = h.nu() + h.nv() + h.nw();
            if (total == 0) throw std::invalid_argument("brute_oracles: vc probe on empty graph");
            int x = static_cast<int>(hash2(stream(seed, kTagProbe), 0) %
                                     static_cast<std::uint64_t>(total));
            BipartiteGraph fast_slice =
                x < h.nu() ? h.slice_at_u(x)
                           : (x < h.nu() + h.nv() ? h.slice_at_v(x - h.nu())
                                                  : h.slice_at_w(x - h.nu() - h.nv()));
            BipartiteGraph brute_slice =
                x < h.nu() ? brute_slice_u(h, x)
                           : (x < h.nu() + h.nv() ? brute_slice_v(h, x - h.nu())
                                                  : brute_slice_w(h, x - h.nu() - h.nv()));
            out.push_back(
                rep(q, fmt(vc_dimension(fast_slice, vc_cap)), fmt(brute_vc(brute_slice, vc_cap))));
        } else if (q == "svc") {
            out.push_back(
                rep(q, fmt(slicewise_vc(h, vc_cap, threads)), fmt(brute_svc(h, vc_cap))));
        } else if (q == "audit") {
            int n = h.nu() + h.nv() + h.nw();
            Partition p = random_partition(stream(seed, kTagBlocks), n, "UVW");
            Ratio eps(1, 4);
            Density fast = audit_triple_homogeneity(h, p, Threshold::ratio(eps)).fraction();
            out.push_back(rep(q, fmt(fast), fmt(brute_triple_audit_fraction(h, p, eps))));
        } else {
            unknown_quantity(q);
        }
    }
    return out;
}

std::vector<OracleReport> brute_oracles(const GeneralThreeGraph& h,
                                        const std::vector<std::string>& quantities,
                                        std::uint64_t seed, int vc_cap, unsigned threads) {
    std::vector<OracleReport> out;
    int third = h.n() / 3;
    for (const std::string& q : quantities) {
        if (q == "density") {
            auto xs = pick_ids(stream(seed, kTagSubsetX), h.n(), 0);
            auto ys = pick_ids(stream(seed, kTagSubsetY), h.n(), 0);
            auto zs = pick_ids(stream(seed, kTagSubsetZ), h.n(), 0);
            Density fast = density_triple(h, ids_to_bits(xs, h.n(), 0), ids_to_bits(ys, h.n(), 0),
                                          ids_to_bits(zs, h.n(), 0));
            out.push_back(rep(q, fmt(fast), fmt(brute_density_triple(h, xs, ys, zs))));
        } else if (q == "triangles") {
            auto xs = pick_ids(stream(seed, kTagSubsetX), third, 0);
            auto ys = pick_ids(stream(seed, kTagSubsetY), third, third);
            auto zs = pick_ids(stream(seed, kTagSubsetZ), h.n() - 2 * third, 2 * third);
            Triad t = random_triad(seed, xs, ys, zs);
            out.push_back(rep(q, std::to_string(triangle_count(t, threads)),
                              std::to_string(brute_triangle_count(t))));
        } else if (q == "vc") {
            if (h.n() == 0) throw std::invalid_argument("brute_oracles: vc probe on empty graph");
            int x = static_cast<int>(hash2(stream(seed, kTagProbe), 0) %
                                     static_cast<std::uint64_t>(h.n()));
            out.push_back(rep(q, fmt(vc_dimension(h.slice_at(x), vc_cap)),
                              fmt(brute_vc(brute_slice_general(h, x), vc_cap))));
        } else if (q == "svc") {
            out.push_back(
                rep(q, fmt(slicewise_vc(h, vc_cap, threads)), fmt(brute_svc(h, vc_cap))));
        } else if (q == "audit") {
            Partition p = random_partition(stream(seed, kTagBlocks), h.n(), "V");
            Ratio eps(1, 4);
            Density fast = audit_triple_homogeneity(h, p, Threshold::ratio(eps)).fraction();
            out.push_back(rep(q, fmt(fast), fmt(brute_triple_audit_fraction(h, p, eps))));
        } else {
            unknown_quantity(q);
        }
    }
    return out;
}

std::vector<OracleReport> brute_oracles(const BipartiteGraph& g,
                                        const std::vector<std::string>& quantities,
                                        std::uint64_t seed, int vc_cap) {
    std::vector<OracleReport> out;
    for (const std::string& q : quantities) {
        if (q == "density") {
            auto xs = pick_ids(stream(seed, kTagSubsetX), g.na(), 0);
            auto ys = pick_ids(stream(seed, kTagSubsetY), g.nb(), 0);
            Density fast =
                density_pair(g, ids_to_bits(xs, g.na(), 0), ids_to_bits(ys, g.nb(), 0));
            out.push_back(rep(q, fmt(fast), fmt(brute_density_pair(g, xs, ys))));
        } else if (q == "vc") {
            out.push_back(rep(q, fmt(vc_dimension(g, vc_cap)), fmt(brute_vc(g, vc_cap))));
        } else if (q == "audit") {
            int n = g.na() + g.nb();
            Partition p = random_partition(stream(seed, kTagBlocks), n, "AB");
            Ratio eps(1, 4);
            Density fast = audit_pair_homogeneity(g, p, Threshold::ratio(eps)).fraction();
            out.push_back(
                rep(q, fmt(fast), fmt(brute_pair_audit_fraction(g.combined(), p, eps))));
        } else {
            unknown_quantity(q);
        }
    }
    return out;
}

} // namespace hompart
