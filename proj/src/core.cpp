#include "hompart/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace hompart {

namespace {

void check_range(int v, int n, const char* what) {
    if (v < 0 || v >= n)
        throw std::out_of_range(std::string(what) + ": vertex " + std::to_string(v) +
                                " outside [0," + std::to_string(n) + ")");
}

} // namespace

void SimpleGraph::add_edge(int u, int v) {
    check_range(u, n_, "SimpleGraph::add_edge");
    check_range(v, n_, "SimpleGraph::add_edge");
    if (u == v) throw std::invalid_argument("SimpleGraph::add_edge: loop");
    rows_[static_cast<std::size_t>(u)].set(static_cast<std::size_t>(v));
    rows_[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(u));
}

long long SimpleGraph::edge_count() const {
    long long c = 0;
    for (const Bits& r : rows_) c += r.count();
    return c / 2;
}

BipartiteGraph::BipartiteGraph(VertexPart a, VertexPart b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.n < 0 || b_.n < 0) throw std::invalid_argument("BipartiteGraph: negative part size");
    rows_a_.assign(static_cast<std::size_t>(a_.n), Bits(static_cast<std::size_t>(b_.n)));
    rows_b_.assign(static_cast<std::size_t>(b_.n), Bits(static_cast<std::size_t>(a_.n)));
}

void BipartiteGraph::add_edge(int a, int b) {
    check_range(a, a_.n, "BipartiteGraph::add_edge (A side)");
    check_range(b, b_.n, "BipartiteGraph::add_edge (B side)");
    rows_a_[static_cast<std::size_t>(a)].set(static_cast<std::size_t>(b));
    rows_b_[static_cast<std::size_t>(b)].set(static_cast<std::size_t>(a));
}

long long BipartiteGraph::edge_count() const {
    long long c = 0;
    for (const Bits& r : rows_a_) c += r.count();
    return c;
}

SimpleGraph BipartiteGraph::combined() const {
    SimpleGraph g(a_.n + b_.n);
    for (int a = 0; a < a_.n; ++a)
        rows_a_[static_cast<std::size_t>(a)].for_each_set([&](std::size_t b) {
            g.add_edge(a, a_.n + static_cast<int>(b));
        });
    return g;
}

PairTable::PairTable(int ni, int nj, int nk)
    : ni_(ni), nj_(nj), nk_(nk), words_((static_cast<std::size_t>(nk) + 63) / 64) {
    if (ni < 0 || nj < 0 || nk < 0) throw std::invalid_argument("PairTable: negative dimension");
    std::size_t total = static_cast<std::size_t>(ni) * nj * words_;
    w_.assign(total, 0);
}

void PairTable::set(int i, int j, int k) { row(i, j)[k >> 6] |= (std::uint64_t{1} << (k & 63)); }

bool PairTable::test(int i, int j, int k) const { return (row(i, j)[k >> 6] >> (k & 63)) & 1; }

long long PairTable::row_count(int i, int j) const {
    const std::uint64_t* r = row(i, j);
    long long c = 0;
    for (std::size_t t = 0; t < words_; ++t) c += std::popcount(r[t]);
    return c;
}

long long PairTable::count_and(int i, int j, const Bits& m) const {
    const std::uint64_t* r = row(i, j);
    long long c = 0;
    for (std::size_t t = 0; t < words_; ++t) c += std::popcount(r[t] & m.word(t));
    return c;
}

long long PairTable::count_and2(int i, int j, const Bits& m1, const Bits& m2) const {
    const std::uint64_t* r = row(i, j);
    long long c = 0;
    for (std::size_t t = 0; t < words_; ++t)
        c += std::popcount(r[t] & m1.word(t) & m2.word(t));
    return c;
}

long long PairTable::count_andnot2(int i, int j, const Bits& m1, const Bits& m2) const {
    const std::uint64_t* r = row(i, j);
    long long c = 0;
    for (std::size_t t = 0; t < words_; ++t)
        c += std::popcount(~r[t] & m1.word(t) & m2.word(t));
    return c;
}

Bits PairTable::row_copy(int i, int j) const {
    Bits b(static_cast<std::size_t>(nk_));
    const std::uint64_t* r = row(i, j);
    for (std::size_t t = 0; t < words_; ++t) b.set_word(t, r[t]);
    return b;
}

void PairTable::row_and_into(int i, int j, Bits& acc) const {
    const std::uint64_t* r = row(i, j);
    for (std::size_t t = 0; t < words_; ++t) acc.and_word(t, r[t]);
}

void PairTable::row_or_into(int i, int j, Bits& acc) const {
    const std::uint64_t* r = row(i, j);
    for (std::size_t t = 0; t < words_; ++t) acc.or_word(t, r[t]);
}

TripartiteThreeGraph::TripartiteThreeGraph(VertexPart u, VertexPart v, VertexPart w,
                                           std::vector<std::array<int, 3>> edges,
                                           int dense_threshold)
    : u_(std::move(u)), v_(std::move(v)), w_(std::move(w)), edges_(std::move(edges)) {
    for (const auto& e : edges_) {
        check_range(e[0], u_.n, "TripartiteThreeGraph (U)");
        check_range(e[1], v_.n, "TripartiteThreeGraph (V)");
        check_range(e[2], w_.n, "TripartiteThreeGraph (W)");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    dense_ = u_.n <= dense_threshold && v_.n <= dense_threshold && w_.n <= dense_threshold;
    if (dense_) {
        uv_ = PairTable(u_.n, v_.n, w_.n);
        uw_ = PairTable(u_.n, w_.n, v_.n);
        vw_ = PairTable(v_.n, w_.n, u_.n);
        for (const auto& e : edges_) {
            uv_.set(e[0], e[1], e[2]);
            uw_.set(e[0], e[2], e[1]);
            vw_.set(e[1], e[2], e[0]);
        }
    }
}

bool TripartiteThreeGraph::has_edge(int u, int v, int w) const {
    check_range(u, u_.n, "TripartiteThreeGraph::has_edge (U)");
    check_range(v, v_.n, "TripartiteThreeGraph::has_edge (V)");
    check_range(w, w_.n, "TripartiteThreeGraph::has_edge (W)");
    if (dense_) return uv_.test(u, v, w);
    return std::binary_search(edges_.begin(), edges_.end(), std::array<int, 3>{u, v, w});
}

const PairTable& TripartiteThreeGraph::require(const PairTable& t) const {
    if (!dense_)
        throw std::runtime_error(
            "TripartiteThreeGraph: pair tables not built (a part exceeds the dense "
            "threshold; construct with a larger dense_threshold)");
    return t;
}

BipartiteGraph TripartiteThreeGraph::slice_at_u(int x) const {
    check_range(x, u_.n, "slice_at_u");
    BipartiteGraph g(v_, w_);
    if (dense_) {
        for (int v = 0; v < v_.n; ++v)
            uv_.row_copy(x, v).for_each_set([&](std::size_t w) { g.add_edge(v, static_cast<int>(w)); });
    } else {
        auto lo = std::lower_bound(edges_.begin(), edges_.end(), std::array<int, 3>{x, 0, 0});
        for (auto it = lo; it != edges_.end() && (*it)[0] == x; ++it) g.add_edge((*it)[1], (*it)[2]);
    }
    return g;
}

BipartiteGraph TripartiteThreeGraph::slice_at_v(int y) const {
    check_range(y, v_.n, "slice_at_v");
    BipartiteGraph g(u_, w_);
    for (const auto& e : edges_)
        if (e[1] == y) g.add_edge(e[0], e[2]);
    return g;
}

BipartiteGraph TripartiteThreeGraph::slice_at_w(int z) const {
    check_range(z, w_.n, "slice_at_w");
    BipartiteGraph g(u_, v_);
    for (const auto& e : edges_)
        if (e[2] == z) g.add_edge(e[0], e[1]);
    return g;
}

TripartiteThreeGraph TripartiteThreeGraph::permuted(const std::array<int, 3>& perm) const {
    auto part_of = [&](int which) -> const VertexPart& {
        switch (which) {
            case 0: return u_;
            case 1: return v_;
            default: return w_;
        }
    };
    std::vector<std::array<int, 3>> es;
    es.reserve(edges_.size());
    for (const auto& e : edges_) es.push_back({e[perm[0]], e[perm[1]], e[perm[2]]});
    return TripartiteThreeGraph(part_of(perm[0]), part_of(perm[1]), part_of(perm[2]), std::move(es));
}

GeneralThreeGraph::GeneralThreeGraph(int n, std::vector<std::array<int, 3>> edges, int dense_threshold)
    : n_(n), edges_(std::move(edges)) {
    for (auto& e : edges_) {
        std::sort(e.begin(), e.end());
        check_range(e[0], n_, "GeneralThreeGraph");
        check_range(e[2], n_, "GeneralThreeGraph");
        if (e[0] == e[1] || e[1] == e[2])
            throw std::invalid_argument("GeneralThreeGraph: edge with repeated vertex");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    if (n_ <= dense_threshold) {
        tab_ = PairTable(n_, n_, n_);
        for (const auto& e : edges_) {
            tab_.set(e[0], e[1], e[2]);
            tab_.set(e[1], e[0], e[2]);
            tab_.set(e[0], e[2], e[1]);
            tab_.set(e[2], e[0], e[1]);
            tab_.set(e[1], e[2], e[0]);
            tab_.set(e[2], e[1], e[0]);
        }
    }
}

bool GeneralThreeGraph::has_edge(int a, int b, int c) const {
    std::array<int, 3> e{a, b, c};
    std::sort(e.begin(), e.end());
    if (e[0] == e[1] || e[1] == e[2]) return false;
    check_range(e[0], n_, "GeneralThreeGraph::has_edge");
    check_range(e[2], n_, "GeneralThreeGraph::has_edge");
    if (tab_.built()) return tab_.test(e[0], e[1], e[2]);
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

const PairTable& GeneralThreeGraph::require(const PairTable& t) const {
    if (!t.built())
        throw std::runtime_error(
            "GeneralThreeGraph: pair table not built (n exceeds the dense threshold; "
            "construct with a larger dense_threshold)");
    return t;
}

SimpleGraph GeneralThreeGraph::slice_at(int x) const {
    check_range(x, n_, "GeneralThreeGraph::slice_at");
    SimpleGraph g(n_);
    for (const auto& e : edges_) {
        if (e[0] == x) g.add_edge(e[1], e[2]);
        else if (e[1] == x) g.add_edge(e[0], e[2]);
        else if (e[2] == x) g.add_edge(e[0], e[1]);
    }
    return g;
}

namespace {

long long require_mass(long long m, const char* what) {
    if (m == 0) throw std::invalid_argument(std::string(what) + ": empty side, density undefined");
    return m;
}

} // namespace

Density density_pair(const BipartiteGraph& g, const Bits& x, const Bits& y) {
    if (x.size() != static_cast<std::size_t>(g.na()) || y.size() != static_cast<std::size_t>(g.nb()))
        throw std::invalid_argument("density_pair: subset widths do not match the parts");
    long long num = 0;
    x.for_each_set([&](std::size_t a) { num += g.row_a(static_cast<int>(a)).and_count(y); });
    long long den = require_mass(x.count() * y.count(), "density_pair");
    return Density{num, den};
}

Density density_pair(const SimpleGraph& g, const Bits& x, const Bits& y) {
    if (x.size() != static_cast<std::size_t>(g.n()) || y.size() != static_cast<std::size_t>(g.n()))
        throw std::invalid_argument("density_pair: subset width does not match the graph");
    long long num = 0;
    x.for_each_set([&](std::size_t v) { num += g.row(static_cast<int>(v)).and_count(y); });
    long long den = require_mass(x.count() * y.count(), "density_pair");
    return Density{num, den};
}

Density density_triple(const TripartiteThreeGraph& h, const Bits& x, const Bits& y, const Bits& z) {
    if (x.size() != static_cast<std::size_t>(h.nu()) || y.size() != static_cast<std::size_t>(h.nv()) ||
        z.size() != static_cast<std::size_t>(h.nw()))
        throw std::invalid_argument("density_triple: subset widths do not match the parts");
    long long num = 0;
    const PairTable& uv = h.table_uv();
    x.for_each_set([&](std::size_t u) {
        y.for_each_set([&](std::size_t v) {
            num += uv.count_and(static_cast<int>(u), static_cast<int>(v), z);
        });
    });
    long long den = require_mass(x.count() * y.count() * z.count(), "density_triple");
    return Density{num, den};
}

Density density_triple(const GeneralThreeGraph& h, const Bits& x, const Bits& y, const Bits& z) {
    std::size_t n = static_cast<std::size_t>(h.n());
    if (x.size() != n || y.size() != n || z.size() != n)
        throw std::invalid_argument("density_triple: subset width does not match the graph");
    long long num = 0;
    const PairTable& tab = h.pair_table();
    x.for_each_set([&](std::size_t a) {
        y.for_each_set([&](std::size_t b) {
            if (a != b) num += tab.count_and(static_cast<int>(a), static_cast<int>(b), z);
        });
    });
    long long den = require_mass(x.count() * y.count() * z.count(), "density_triple");
    return Density{num, den};
}

TripartiteThreeGraph tripartitize(const GeneralThreeGraph& g) {
    int n = g.n();
    std::vector<std::array<int, 3>> es;
    es.reserve(g.edges().size() * 6);
    for (const auto& e : g.edges()) {
        es.push_back({e[0], e[1], e[2]});
        es.push_back({e[0], e[2], e[1]});
        es.push_back({e[1], e[0], e[2]});
        es.push_back({e[1], e[2], e[0]});
        es.push_back({e[2], e[0], e[1]});
        es.push_back({e[2], e[1], e[0]});
    }
    return TripartiteThreeGraph(VertexPart{"A", n}, VertexPart{"B", n}, VertexPart{"C", n}, std::move(es));
}

} // namespace hompart
