#include "hompart/gen.hpp"

#include "hompart/parallel.hpp"
#include "hompart/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace hompart {

namespace {

// Independent named streams off one user seed. The tags are part of the
// corpus contract: changing any of them changes every generated instance.
constexpr std::uint64_t kTagPattern = 1;
constexpr std::uint64_t kTagNoise = 2;
constexpr std::uint64_t kTagWeights = 3;
constexpr std::uint64_t kTagTemplate = 4;
constexpr std::uint64_t kTagBase = 5;
constexpr std::uint64_t kTagDensity = 6;

std::uint64_t stream(std::uint64_t seed, std::uint64_t tag) { return mix64(seed ^ mix64(tag)); }

void check_prob(const Ratio& p, const char* who, bool allow_one) {
    bool ok = !(p < Ratio()) && (allow_one ? !(Ratio::integer(1) < p) : p < Ratio::integer(1));
    if (!ok)
        throw std::invalid_argument(std::string(who) + (allow_one
                                        ? ": probability must lie in [0,1]"
                                        : ": noise must lie in [0,1)"));
}

std::vector<int> contiguous_classes(int n, int d) {
    std::vector<int> cls(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        cls[static_cast<std::size_t>(v)] = static_cast<int>(static_cast<long long>(v) * d / n);
    return cls;
}

std::vector<char> hash_bits(std::uint64_t s, std::size_t count) {
    std::vector<char> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<char>(hash2(s, i) & 1);
    return out;
}

// Rows filled in parallel, flattened in x order, so the edge list does not
// depend on the thread count.
template <typename F>
std::vector<std::array<int, 3>> collect_rows(int nu, unsigned threads, F&& fill) {
    std::vector<std::vector<std::array<int, 3>>> rows(static_cast<std::size_t>(nu));
    parallel_for(static_cast<std::size_t>(nu), threads,
                 [&](std::size_t x) { fill(static_cast<int>(x), rows[x]); });
    std::size_t total = 0;
    for (const auto& r : rows) total += r.size();
    std::vector<std::array<int, 3>> edges;
    edges.reserve(total);
    for (auto& r : rows) {
        edges.insert(edges.end(), r.begin(), r.end());
        r.clear();
        r.shrink_to_fit();
    }
    return edges;
}

TripartiteThreeGraph three_sides(int n, std::vector<std::array<int, 3>> edges) {
    return TripartiteThreeGraph({"U", n}, {"V", n}, {"W", n}, std::move(edges));
}

} // namespace

const char* to_string(GenKind k) {
    switch (k) {
        case GenKind::class_based: return "class_based";
        case GenKind::threshold: return "threshold";
        case GenKind::slice_template: return "slice_template";
        case GenKind::random: return "random";
        case GenKind::blowup_graph: return "blowup_graph";
    }
    return "?";
}

bool gen_kind_from_string(const std::string& name, GenKind& out) {
    for (GenKind k : {GenKind::class_based, GenKind::threshold, GenKind::slice_template,
                      GenKind::random, GenKind::blowup_graph})
        if (name == to_string(k)) {
            out = k;
            return true;
        }
    return false;
}

ClassBasedInstance gen_class_based(int n, int d, const Ratio& noise, std::uint64_t seed,
                                   unsigned threads) {
    if (d < 1) throw std::invalid_argument("gen_class_based: d must be at least 1");
    std::size_t cells = static_cast<std::size_t>(d) * d * d;
    return gen_class_based_pattern(n, d, hash_bits(stream(seed, kTagPattern), cells), noise, seed,
                                   threads);
}

ClassBasedInstance gen_class_based_pattern(int n, int d, std::vector<char> pattern,
                                           const Ratio& noise, std::uint64_t seed,
                                           unsigned threads) {
    if (n < 0) throw std::invalid_argument("gen_class_based: negative n");
    if (d < 1) throw std::invalid_argument("gen_class_based: d must be at least 1");
    if (pattern.size() != static_cast<std::size_t>(d) * d * d)
        throw std::invalid_argument("gen_class_based: pattern must have d^3 entries");
    check_prob(noise, "gen_class_based", false);

    ClassBasedTruth t;
    t.d = d;
    t.cls_u = contiguous_classes(n, d);
    t.cls_v = t.cls_u;
    t.cls_w = t.cls_u;
    t.pattern = std::move(pattern);

    NoiseGate gate(stream(seed, kTagNoise), noise);
    const bool noisy = Ratio() < noise;
    const long long nn = n;
    auto edges = collect_rows(n, threads, [&](int x, std::vector<std::array<int, 3>>& out) {
        int cu = t.cls_u[static_cast<std::size_t>(x)];
        for (int y = 0; y < n; ++y) {
            int cv = t.cls_v[static_cast<std::size_t>(y)];
            long long row = (static_cast<long long>(x) * nn + y) * nn;
            for (int z = 0; z < n; ++z) {
                bool e = t.at(cu, cv, t.cls_w[static_cast<std::size_t>(z)]);
                if (noisy && gate.fires(static_cast<std::uint64_t>(row + z))) e = !e;
                if (e) out.push_back({x, y, z});
            }
        }
    });
    return {three_sides(n, std::move(edges)), std::move(t)};
}

namespace {

std::vector<std::uint64_t> threshold_weights(int n, std::uint64_t seed) {
    std::uint64_t s = stream(seed, kTagWeights);
    std::vector<std::uint64_t> w(static_cast<std::size_t>(3) * n);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = hash2(s, i) >> 32;
    return w;
}

TripartiteThreeGraph threshold_graph(int n, const std::vector<std::uint64_t>& w,
                                     std::uint64_t theta, unsigned threads) {
    auto edges = collect_rows(n, threads, [&](int x, std::vector<std::array<int, 3>>& out) {
        std::uint64_t wx = w[static_cast<std::size_t>(x)];
        for (int y = 0; y < n; ++y) {
            std::uint64_t wxy = wx + w[static_cast<std::size_t>(n + y)];
            for (int z = 0; z < n; ++z)
                if (wxy + w[static_cast<std::size_t>(2 * n + z)] <= theta)
                    out.push_back({x, y, z});
        }
    });
    return three_sides(n, std::move(edges));
}

// Exact median of all triple sums is affordable up to this many triples;
// past it the midpoint of the sum range serves, the sum distribution being
// symmetric around it.
constexpr long long kExactMedianTriples = 1LL << 21;
constexpr std::uint64_t kMidpointTheta = 3ULL * 0xFFFFFFFFULL / 2;

} // namespace

TripartiteThreeGraph gen_threshold(int n, std::uint64_t seed, unsigned threads) {
    if (n < 0) throw std::invalid_argument("gen_threshold: negative n");
    auto w = threshold_weights(n, seed);
    std::uint64_t theta = kMidpointTheta;
    long long triples = static_cast<long long>(n) * n * n;
    if (triples > 0 && triples <= kExactMedianTriples) {
        std::vector<std::uint64_t> sums;
        sums.reserve(static_cast<std::size_t>(triples));
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                std::uint64_t wxy = w[static_cast<std::size_t>(x)] + w[static_cast<std::size_t>(n + y)];
                for (int z = 0; z < n; ++z)
                    sums.push_back(wxy + w[static_cast<std::size_t>(2 * n + z)]);
            }
        std::size_t mid = (sums.size() - 1) / 2;
        std::nth_element(sums.begin(), sums.begin() + static_cast<std::ptrdiff_t>(mid), sums.end());
        theta = sums[mid];
    }
    return threshold_graph(n, w, theta, threads);
}

TripartiteThreeGraph gen_threshold_fixed(int n, std::uint64_t seed, std::uint64_t theta,
                                         unsigned threads) {
    if (n < 0) throw std::invalid_argument("gen_threshold_fixed: negative n");
    return threshold_graph(n, threshold_weights(n, seed), theta, threads);
}

SliceTemplateInstance gen_slice_template(int n, int templates, int d, const Ratio& noise,
                                         std::uint64_t seed, unsigned threads) {
    if (n < 0) throw std::invalid_argument("gen_slice_template: negative n");
    if (templates < 1) throw std::invalid_argument("gen_slice_template: need at least one template");
    if (d < 1) throw std::invalid_argument("gen_slice_template: d must be at least 1");
    check_prob(noise, "gen_slice_template", false);

    SliceTemplateInstance inst;
    inst.templates = templates;
    inst.d = d;
    inst.cls_v = contiguous_classes(n, d);
    inst.cls_w = inst.cls_v;
    inst.patterns = hash_bits(stream(seed, kTagPattern),
                              static_cast<std::size_t>(templates) * d * d);
    std::uint64_t ts = stream(seed, kTagTemplate);
    inst.tpl_u.resize(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x)
        inst.tpl_u[static_cast<std::size_t>(x)] =
            static_cast<int>(hash2(ts, static_cast<std::uint64_t>(x)) % static_cast<std::uint64_t>(templates));

    NoiseGate gate(stream(seed, kTagNoise), noise);
    const bool noisy = Ratio() < noise;
    const long long nn = n;
    auto edges = collect_rows(n, threads, [&](int x, std::vector<std::array<int, 3>>& out) {
        int tpl = inst.tpl_u[static_cast<std::size_t>(x)];
        for (int y = 0; y < n; ++y) {
            int cv = inst.cls_v[static_cast<std::size_t>(y)];
            long long row = (static_cast<long long>(x) * nn + y) * nn;
            for (int z = 0; z < n; ++z) {
                bool e = inst.at(tpl, cv, inst.cls_w[static_cast<std::size_t>(z)]);
                if (noisy && gate.fires(static_cast<std::uint64_t>(row + z))) e = !e;
                if (e) out.push_back({x, y, z});
            }
        }
    });
    inst.h = three_sides(n, std::move(edges));
    return inst;
}

TripartiteThreeGraph gen_random(int n, const Ratio& density, std::uint64_t seed,
                                unsigned threads) {
    if (n < 0) throw std::invalid_argument("gen_random: negative n");
    check_prob(density, "gen_random", true);
    NoiseGate gate(stream(seed, kTagDensity), density);
    const long long nn = n;
    auto edges = collect_rows(n, threads, [&](int x, std::vector<std::array<int, 3>>& out) {
        for (int y = 0; y < n; ++y) {
            long long row = (static_cast<long long>(x) * nn + y) * nn;
            for (int z = 0; z < n; ++z)
                if (gate.fires(static_cast<std::uint64_t>(row + z))) out.push_back({x, y, z});
        }
    });
    return three_sides(n, std::move(edges));
}

namespace {

BlowupTruth blowup_truth(int na, int nb, int d, std::uint64_t seed) {
    BlowupTruth t;
    t.d = d;
    t.cls_a = contiguous_classes(na, d);
    t.cls_b = contiguous_classes(nb, d);
    t.base = hash_bits(stream(seed, kTagBase), static_cast<std::size_t>(d) * d);
    return t;
}

} // namespace

BlowupGraphInstance gen_blowup_graph(int na, int nb, int d, const Ratio& noise,
                                     std::uint64_t seed) {
    if (na < 0 || nb < 0) throw std::invalid_argument("gen_blowup_graph: negative side");
    if (d < 1) throw std::invalid_argument("gen_blowup_graph: d must be at least 1");
    check_prob(noise, "gen_blowup_graph", false);
    BlowupTruth t = blowup_truth(na, nb, d, seed);
    BipartiteGraph g({"A", na}, {"B", nb});
    NoiseGate gate(stream(seed, kTagNoise), noise);
    const bool noisy = Ratio() < noise;
    for (int a = 0; a < na; ++a) {
        int ca = t.cls_a[static_cast<std::size_t>(a)];
        for (int b = 0; b < nb; ++b) {
            bool e = t.at(ca, t.cls_b[static_cast<std::size_t>(b)]);
            if (noisy && gate.fires(static_cast<std::uint64_t>(a) * nb + b)) e = !e;
            if (e) g.add_edge(a, b);
        }
    }
    return {std::move(g), std::move(t)};
}

BlowupEcgInstance gen_blowup_ecg(int na, int nb, int d, const Ratio& error_noise,
                                 std::uint64_t seed) {
    if (na < 0 || nb < 0) throw std::invalid_argument("gen_blowup_ecg: negative side");
    if (d < 1) throw std::invalid_argument("gen_blowup_ecg: d must be at least 1");
    check_prob(error_noise, "gen_blowup_ecg", false);
    BlowupTruth t = blowup_truth(na, nb, d, seed);
    EdgeColoredBipartiteGraph g({"A", na}, {"B", nb}, 3);
    NoiseGate gate(stream(seed, kTagNoise), error_noise);
    const bool noisy = Ratio() < error_noise;
    for (int a = 0; a < na; ++a) {
        int ca = t.cls_a[static_cast<std::size_t>(a)];
        for (int b = 0; b < nb; ++b) {
            int color = t.at(ca, t.cls_b[static_cast<std::size_t>(b)]) ? 1 : 0;
            if (noisy && gate.fires(static_cast<std::uint64_t>(a) * nb + b)) color = 2;
            g.set_color(a, b, color);
        }
    }
    return {std::move(g), std::move(t)};
}

GeneralThreeGraph symmetrize(const TripartiteThreeGraph& h) {
    int ov = h.nu(), ow = h.nu() + h.nv();
    std::vector<std::array<int, 3>> edges;
    edges.reserve(h.edges().size());
    for (const auto& e : h.edges()) edges.push_back({e[0], e[1] + ov, e[2] + ow});
    return GeneralThreeGraph(h.nu() + h.nv() + h.nw(), std::move(edges));
}

BipartiteGraph uk_graph(int k) {
    if (k < 0 || k > 20) throw std::invalid_argument("uk_graph: k out of range");
    int nb = 1 << k;
    BipartiteGraph g({"A", k}, {"B", nb});
    for (int i = 0; i < k; ++i)
        for (int s = 0; s < nb; ++s)
            if (s >> i & 1) g.add_edge(i, s);
    return g;
}

} // namespace hompart
