#pragma once

#include "hompart/bits.hpp"
#include "hompart/ratio.hpp"

#include <array>
#include <string>
#include <vector>

namespace hompart {

struct VertexPart {
    std::string name;
    int n = 0;
};

/**
 * Plain undirected graph on [0, n), no loops. Slice graphs of general
 * 3-graphs live here, and bipartite graphs flatten into one of these for
 * anything that treats both sides symmetrically (VC, pair-homogeneity
 * audits).
 */
class SimpleGraph {
public:
    SimpleGraph() = default;
    explicit SimpleGraph(int n) : n_(n), rows_(n, Bits(static_cast<std::size_t>(n))) {}

    int n() const { return n_; }
    const Bits& row(int v) const { return rows_[static_cast<std::size_t>(v)]; }
    bool has_edge(int u, int v) const { return rows_[static_cast<std::size_t>(u)].test(static_cast<std::size_t>(v)); }

    void add_edge(int u, int v);
    long long edge_count() const;

private:
    int n_ = 0;
    std::vector<Bits> rows_;
};

class BipartiteGraph {
public:
    BipartiteGraph() = default;
    BipartiteGraph(VertexPart a, VertexPart b);

    const VertexPart& part_a() const { return a_; }
    const VertexPart& part_b() const { return b_; }
    int na() const { return a_.n; }
    int nb() const { return b_.n; }

    void add_edge(int a, int b);
    bool has_edge(int a, int b) const { return rows_a_[static_cast<std::size_t>(a)].test(static_cast<std::size_t>(b)); }

    // N(a) as a subset of B, N(b) as a subset of A.
    const Bits& row_a(int a) const { return rows_a_[static_cast<std::size_t>(a)]; }
    const Bits& row_b(int b) const { return rows_b_[static_cast<std::size_t>(b)]; }

    long long edge_count() const;

    // One graph on na()+nb() vertices, A ids first, B ids offset by na().
    SimpleGraph combined() const;

private:
    VertexPart a_, b_;
    std::vector<Bits> rows_a_, rows_b_;
};

/**
 * Flat bit cube: rows indexed by (i, j), each a k-bit vector. Holds the
 * per-pair neighborhoods of a 3-graph in one allocation so a part of size n
 * costs exactly ni*nj*ceil(nk/64) words.
 */
class PairTable {
public:
    PairTable() = default;
    PairTable(int ni, int nj, int nk);

    bool built() const { return !w_.empty() || (ni_ == 0 || nj_ == 0); }
    void set(int i, int j, int k);
    bool test(int i, int j, int k) const;

    long long row_count(int i, int j) const;
    long long count_and(int i, int j, const Bits& m) const;
    // popcount(row & m1 & m2)
    long long count_and2(int i, int j, const Bits& m1, const Bits& m2) const;
    // popcount(m1 & ~row & m2); complements stay masked because callers pass
    // masks that are already subsets of [0, nk).
    long long count_andnot2(int i, int j, const Bits& m1, const Bits& m2) const;
    Bits row_copy(int i, int j) const;
    void row_and_into(int i, int j, Bits& acc) const;
    void row_or_into(int i, int j, Bits& acc) const;

private:
    const std::uint64_t* row(int i, int j) const { return w_.data() + (static_cast<std::size_t>(i) * nj_ + j) * words_; }
    std::uint64_t* row(int i, int j) { return w_.data() + (static_cast<std::size_t>(i) * nj_ + j) * words_; }

    int ni_ = 0, nj_ = 0, nk_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> w_;
};

/**
 * 3-partite 3-uniform hypergraph: every edge meets each of U, V, W exactly
 * once. Edges are stored as a sorted triple list (the source of truth) plus
 * three dense pair-neighborhood tables, built when every part is at most
 * dense_threshold vertices (default 2048). The tables are what the counting
 * paths hit; the triple list is what generators and serialization use.
 */
class TripartiteThreeGraph {
public:
    static constexpr int kDefaultDenseThreshold = 2048;

    TripartiteThreeGraph() = default;
    TripartiteThreeGraph(VertexPart u, VertexPart v, VertexPart w,
                         std::vector<std::array<int, 3>> edges,
                         int dense_threshold = kDefaultDenseThreshold);

    const VertexPart& part_u() const { return u_; }
    const VertexPart& part_v() const { return v_; }
    const VertexPart& part_w() const { return w_; }
    int nu() const { return u_.n; }
    int nv() const { return v_.n; }
    int nw() const { return w_.n; }

    const std::vector<std::array<int, 3>>& edges() const { return edges_; }
    long long edge_count() const { return static_cast<long long>(edges_.size()); }

    bool has_edge(int u, int v, int w) const;

    // Pair neighborhoods as bit vectors over the opposite part.
    const PairTable& table_uv() const { return require(uv_); } // rows over W
    const PairTable& table_uw() const { return require(uw_); } // rows over V
    const PairTable& table_vw() const { return require(vw_); } // rows over U

    Bits nbr_uv(int u, int v) const { return table_uv().row_copy(u, v); }
    Bits nbr_uw(int u, int w) const { return table_uw().row_copy(u, w); }
    Bits nbr_vw(int v, int w) const { return table_vw().row_copy(v, w); }

    // Slice graph at a vertex of the named part, on the two remaining parts.
    BipartiteGraph slice_at_u(int x) const;
    BipartiteGraph slice_at_v(int y) const;
    BipartiteGraph slice_at_w(int z) const;

    // Same hypergraph with parts relabeled so that the part originally in
    // position perm[0] becomes U, perm[1] becomes V, perm[2] becomes W.
    TripartiteThreeGraph permuted(const std::array<int, 3>& perm) const;

private:
    const PairTable& require(const PairTable& t) const;

    VertexPart u_, v_, w_;
    std::vector<std::array<int, 3>> edges_;
    PairTable uv_, uw_, vw_;
    bool dense_ = false;
};

/**
 * 3-uniform hypergraph on one vertex set [0, n); edges are 3-element sets
 * stored as sorted triples.
 */
class GeneralThreeGraph {
public:
    static constexpr int kDefaultDenseThreshold = 2048;

    GeneralThreeGraph() = default;
    GeneralThreeGraph(int n, std::vector<std::array<int, 3>> edges,
                      int dense_threshold = kDefaultDenseThreshold);

    int n() const { return n_; }
    const std::vector<std::array<int, 3>>& edges() const { return edges_; }
    long long edge_count() const { return static_cast<long long>(edges_.size()); }

    bool has_edge(int a, int b, int c) const;

    // N(xy) over V; zero row when x == y.
    const PairTable& pair_table() const { return require(tab_); }
    Bits nbr(int x, int y) const { return pair_table().row_copy(x, y); }

    SimpleGraph slice_at(int x) const;

private:
    const PairTable& require(const PairTable& t) const;

    int n_ = 0;
    std::vector<std::array<int, 3>> edges_;
    PairTable tab_;
};

// Exact pair densities. Bipartite: one count per cross edge. Graph: ordered
// pairs, so d(X, X) doubles nothing only because loops do not exist.
Density density_pair(const BipartiteGraph& g, const Bits& x, const Bits& y);
Density density_pair(const SimpleGraph& g, const Bits& x, const Bits& y);

// Exact triple densities. Tripartite: X in U, Y in V, Z in W, unordered
// count. General: ordered tuples |E_ord cap (X x Y x Z)|.
Density density_triple(const TripartiteThreeGraph& h, const Bits& x, const Bits& y, const Bits& z);
Density density_triple(const GeneralThreeGraph& h, const Bits& x, const Bits& y, const Bits& z);

/**
 * Symmetrized tripartite double cover: parts A, B, C are three copies of
 * V(G), and every edge {v, v', v''} of G is placed in all six ordered
 * part-assignments. Densities are preserved exactly, including for
 * overlapping index sets, because repeated-coordinate tuples carry no edges
 * on either side.
 */
TripartiteThreeGraph tripartitize(const GeneralThreeGraph& g);

} // namespace hompart
