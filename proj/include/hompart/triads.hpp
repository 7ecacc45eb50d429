#pragma once

#include "hompart/partition.hpp"

#include <array>
#include <optional>
#include <vector>

namespace hompart {

/**
 * A triad: tripartite graph on three disjoint vertex sets X, Y, Z drawn from
 * a host 3-graph, with edge sets P between X and Y, Q between X and Z, R
 * between Y and Z. Members are host vertex ids; edges are stored over local
 * positions (p[i] is the row of xs[i] over ys, q[i] its row over zs, r[j] the
 * row of ys[j] over zs).
 */
struct Triad {
    std::vector<int> xs, ys, zs;
    std::vector<Bits> p, q, r;
};

// All three edge sets complete.
Triad complete_triad(std::vector<int> xs, std::vector<int> ys, std::vector<int> zs);

// Shape check: row counts match member counts, row widths match the opposite
// side, no duplicate ids within a side. Throws std::invalid_argument.
void validate_triad(const Triad& t);

// Number of triangles x-y-z with xy in P, xz in Q, yz in R. Exact; the
// parallel reduction is independent of the thread count.
long long triangle_count(const Triad& t, unsigned threads = 1);

// Visits every triangle as local positions (xi, yj, zk), lexicographically.
template <typename F>
void for_each_triangle(const Triad& t, F&& f) {
    for (std::size_t xi = 0; xi < t.xs.size(); ++xi) {
        t.p[xi].for_each_set([&](std::size_t yj) {
            Bits m = t.q[xi];
            m &= t.r[yj];
            m.for_each_set([&](std::size_t zk) { f(xi, yj, zk); });
        });
    }
}

/**
 * Density of the 3-graph on the triangle set of T: edges of H among the
 * triangles of T, over the triangle count. Empty when T has no triangles.
 * Triad members must be valid ids of the matching parts (tripartite) or
 * pairwise disjoint vertex sets (general); violations throw.
 */
std::optional<Density> triad_density(const TripartiteThreeGraph& h, const Triad& t);
std::optional<Density> triad_density(const GeneralThreeGraph& h, const Triad& t);

/**
 * Two-level decomposition of a tripartite ground: vertex partitions of the
 * three parts, plus a partition of each cross pair set K2[X,Y] for every
 * block pair (X,Y). Pair classes are stored as a class id per vertex pair
 * (part-local ids); within each block pair the ids must form a contiguous
 * range 0..k-1 with every class nonempty. The constructor validates and
 * records the class counts.
 */
class TripartiteDecomposition {
public:
    TripartiteDecomposition(Partition pa, Partition pb, Partition pc,
                            std::vector<std::vector<int>> cls_ab,
                            std::vector<std::vector<int>> cls_ac,
                            std::vector<std::vector<int>> cls_bc);

    // One class per block pair.
    static TripartiteDecomposition trivial(Partition pa, Partition pb, Partition pc);

    const Partition& pa() const { return pa_; }
    const Partition& pb() const { return pb_; }
    const Partition& pc() const { return pc_; }

    int class_ab(int a, int b) const { return cls_ab_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
    int class_ac(int a, int c) const { return cls_ac_[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)]; }
    int class_bc(int b, int c) const { return cls_bc_[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]; }

    // Class counts for a block pair.
    int k_ab(std::size_t i, std::size_t j) const { return k_ab_[i][j]; }
    int k_ac(std::size_t i, std::size_t j) const { return k_ac_[i][j]; }
    int k_bc(std::size_t i, std::size_t j) const { return k_bc_[i][j]; }

    // Number of triads: sum over block triples of the class-count product.
    long long triad_total() const;

private:
    Partition pa_, pb_, pc_;
    std::vector<std::vector<int>> cls_ab_, cls_ac_, cls_bc_;
    std::vector<std::vector<int>> k_ab_, k_ac_, k_bc_;
};

/** Coordinates of one triad: block triple plus one class per block pair. */
struct TriadRef {
    int bx = 0, by = 0, bz = 0;
    int cp = 0, cq = 0, cr = 0;

    bool operator==(const TriadRef& o) const {
        return bx == o.bx && by == o.by && bz == o.bz && cp == o.cp && cq == o.cq && cr == o.cr;
    }
};

Triad materialize_triad(const TripartiteDecomposition& d, const TriadRef& ref);

inline constexpr long long kLargeTriadCount = 1'000'000;

// Streams every triad in lexicographic TriadRef order. Decompositions past
// kLargeTriadCount triads need allow_large; the product blow-up is easy to
// hit by accident.
template <typename F>
void enumerate_triads(const TripartiteDecomposition& d, F&& f, bool allow_large = false) {
    if (!allow_large && d.triad_total() > kLargeTriadCount)
        throw std::invalid_argument("enumerate_triads: triad count exceeds opt-in limit");
    for (std::size_t bx = 0; bx < d.pa().size(); ++bx)
        for (std::size_t by = 0; by < d.pb().size(); ++by)
            for (std::size_t bz = 0; bz < d.pc().size(); ++bz)
                for (int cp = 0; cp < d.k_ab(bx, by); ++cp)
                    for (int cq = 0; cq < d.k_ac(bx, bz); ++cq)
                        for (int cr = 0; cr < d.k_bc(by, bz); ++cr) {
                            TriadRef ref{static_cast<int>(bx), static_cast<int>(by), static_cast<int>(bz),
                                         cp, cq, cr};
                            f(materialize_triad(d, ref));
                        }
}

/**
 * Decomposition-level homogeneity: sigma lists the triads whose density on
 * their own triangle set lies in [0,eps) u (1-eps,1], covered is their total
 * triangle count, total is |A||B||C|. Zero-triangle triads carry no mass and
 * never enter sigma. is_homogeneous: covered >= (1-eps) * total.
 */
struct DecompositionAudit {
    std::vector<TriadRef> sigma;
    long long covered = 0;
    long long total = 0;
    long long triangle_sum = 0;   // over all triads; equals total by construction
    long long triads_seen = 0;
    bool is_homogeneous = false;

    Density mass() const { return Density{covered, total}; }
};

DecompositionAudit audit_decomposition(const TripartiteThreeGraph& h, const TripartiteDecomposition& d,
                                       const Threshold& eps, bool allow_large = false, unsigned threads = 1);

/**
 * Hypothesis/conclusion report for the three-part goodness statement: if all
 * three parts (as whole sets) are almost eps-good at some eps < 1/100, the
 * global edge density must land in [0, 4 eps^{1/16}) u (1 - 4 eps^{1/16}, 1].
 * Both sides are evaluated exactly and reported; neither is assumed.
 */
struct SymmetryAudit {
    Ratio eps;
    bool eps_in_range = false;               // 0 < eps < 1/100
    std::array<GoodSetAudit, 3> parts{};     // U, V, W as single sets
    bool hypothesis = false;                 // all three almost good
    Density density;                         // |E| over |U||V||W|
    bool conclusion = false;                 // density within the 4 eps^{1/16} interval
};

SymmetryAudit symmetry_audit(const TripartiteThreeGraph& h, const Ratio& eps);

/**
 * Report for the good-partition-to-homogeneous statement: a partition
 * refining the tripartition whose restriction to each part is an almost
 * eps-good partition must be 28 eps^{1/64}-homogeneous. The hypothesis is
 * audited per side; homogeneity is audited both at that bound and at a
 * caller-chosen working threshold. Non-refining partitions are rejected.
 */
struct GoodHomAudit {
    Ratio eps;
    std::array<GoodnessAudit, 3> sides{};
    bool hypothesis = false;
    HomogeneityAudit at_bound;      // 28 eps^{1/64}
    HomogeneityAudit at_working;
};

GoodHomAudit goodhom_audit(const TripartiteThreeGraph& h, const Partition& p, const Ratio& eps,
                           const Threshold& working);
GoodHomAudit goodhom_audit(const TripartiteThreeGraph& h, const Partition& p, const Ratio& eps);

} // namespace hompart
