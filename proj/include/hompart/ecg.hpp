#pragma once

#include "hompart/core.hpp"
#include "hompart/partition.hpp"

#include <vector>

namespace hompart {

struct EcgRestriction;

/**
 * Bipartite graph whose cross pairs are partitioned into colors E_0..E_r.
 * Rows are kept per color and per side, so N_{E_c}(a) and N_{E_c}(b) are
 * single lookups. Pairs start uncolored; most consumers call
 * require_complete() up front.
 *
 * Convention for three-color inputs: E_0 sparse, E_1 dense, E_2 error.
 */
class EdgeColoredBipartiteGraph {
public:
    EdgeColoredBipartiteGraph() = default;
    EdgeColoredBipartiteGraph(VertexPart a, VertexPart b, int num_colors);

    // E_0 = non-edges, E_1 = edges, E_2 reserved and empty.
    static EdgeColoredBipartiteGraph from_graph(const BipartiteGraph& g);

    const VertexPart& part_a() const { return a_; }
    const VertexPart& part_b() const { return b_; }
    int na() const { return a_.n; }
    int nb() const { return b_.n; }
    int num_colors() const { return static_cast<int>(rows_a_.size()); }

    // Overwrites any previous color of the pair.
    void set_color(int a, int b, int color);
    // -1 while the pair is uncolored.
    int color_of(int a, int b) const;

    const Bits& nbr_a(int color, int a) const { return rows_a_[static_cast<std::size_t>(color)][static_cast<std::size_t>(a)]; }
    const Bits& nbr_b(int color, int b) const { return rows_b_[static_cast<std::size_t>(color)][static_cast<std::size_t>(b)]; }

    long long color_count(int color) const;
    bool fully_colored() const;
    void require_complete() const;

    // Plain graph of one color class.
    BipartiteGraph color_graph(int color) const;

    EdgeColoredBipartiteGraph transposed() const;

    using Restriction = EcgRestriction;
    Restriction restrict(const Bits& sub_a, const Bits& sub_b) const;

private:
    VertexPart a_, b_;
    // rows_a_[color][a] over B; rows_b_[color][b] over A.
    std::vector<std::vector<Bits>> rows_a_, rows_b_;
};

struct EcgRestriction {
    EdgeColoredBipartiteGraph g;
    std::vector<int> a_ids; // new index -> original id
    std::vector<int> b_ids;
};

/**
 * Result of a pair-partition homogeneity run or audit with respect to
 * {E_0, E_1}: sigma[alpha] lists the block pairs (i, j) where color alpha
 * fills at least a (1 - achieved_eps) fraction of X_i x Y_j, with
 * achieved_eps the smallest audited threshold making the covered mass reach
 * (1 - achieved_eps)|A||B|. Block pairs dominated by neither color count
 * toward neither sigma.
 */
struct EchomResult {
    Partition part_a, part_b;
    std::vector<std::pair<int, int>> sigma0, sigma1;
    Ratio achieved_eps;
    bool achieved_valid = false;  // false when no threshold below 1 works
    long long covered_mass = 0;
    long long total_mass = 0;
    int size = 0;                 // max(|P_A|, |P_B|)
};

// Maximal sigma sets and covered mass for the given partitions at a fixed
// epsilon; achieved_eps/achieved_valid report the minimal threshold that
// would succeed (independent of eps).
EchomResult audit_echom(const EdgeColoredBipartiteGraph& g, const Partition& pa, const Partition& pb,
                        const Threshold& eps);

/**
 * Structure partition for a 3-colored bipartite graph whose {E_0, E_1}
 * coloring is expected to omit U(k) patterns and whose error color E_2 is
 * small. Two packing passes (A, then B away from the error neighborhoods of
 * the A-representatives) produce blocks A_0..A_m, B_0..B_p with index-0
 * catching the exceptional mass. Every proof-step bound is measured and
 * reported, audited at the end via audit_echom.
 */
struct VcRemovalResult {
    EchomResult echom;
    // Achieved proof-step quantities, for the runlog.
    long long m = 0, p = 0;
    long long u_size = 0, v_size = 0;
    long long b_err_size = 0;
    long long a0_size = 0, b0_size = 0;
    bool e2_small = false;        // |E_2| <= eps |A||B|
    bool b_err_bound_ok = false;  // |B_err| <= m sqrt(eps) |B|
    bool a0_bound_ok = false;     // |U| <= sqrt(eps)|A| and the pass-2 rows within p (4eps)^{1/4}|A'|
};
VcRemovalResult vcremoval_partition(const EdgeColoredBipartiteGraph& g, int k, const Ratio& eps,
                                    const Ratio& delta, unsigned threads = 1);

} // namespace hompart
