#pragma once

#include "hompart/core.hpp"

#include <array>
#include <optional>
#include <vector>

namespace hompart {

/**
 * Partition of a ground set [0, n): nonempty pairwise-disjoint blocks whose
 * union is the ground set. Blocks are kept in canonical order (sorted by
 * smallest element, elements sorted within a block) so that any two routines
 * producing the same partition produce the same object.
 */
class Partition {
public:
    Partition() = default;
    Partition(VertexPart ground, std::vector<std::vector<int>> blocks);

    static Partition trivial(VertexPart ground);
    static Partition discrete(VertexPart ground);
    // Builds from an assignment vector; labels may be arbitrary, empty labels
    // are dropped.
    static Partition from_assignment(VertexPart ground, const std::vector<int>& block_of);

    const VertexPart& ground() const { return ground_; }
    int ground_size() const { return ground_.n; }
    std::size_t size() const { return blocks_.size(); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    const std::vector<int>& block(std::size_t i) const { return blocks_[i]; }
    int block_of(int v) const { return block_of_[static_cast<std::size_t>(v)]; }
    long long block_size(std::size_t i) const { return static_cast<long long>(blocks_[i].size()); }

    Bits block_bits(std::size_t i) const;

    bool operator==(const Partition& o) const { return ground_.n == o.ground_.n && blocks_ == o.blocks_; }

private:
    VertexPart ground_;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
};

// Induced partition on a subset; elements are renumbered by rank within the
// subset (bit order), ground renamed to `name`.
Partition restrict_partition(const Partition& p, const Bits& subset, const std::string& name);

// Coarsest partition refining all inputs (which must share a ground set).
Partition common_refinement(const std::vector<Partition>& parts);

// Every pair of blocks differs in size by at most 1.
bool is_equipartition(const Partition& p);

/**
 * Averaging selection: Sigma = blocks Y with |A cap Y| >= (1-a)|Y|.
 * The hypothesis |A| >= (1-ab)|X| and the conclusion |union Sigma| >=
 * (1-b)|X| are both evaluated exactly and reported; nothing is assumed.
 */
struct AveragingResult {
    std::vector<int> selected;        // block indices forming Sigma
    long long selected_union = 0;     // |union Sigma|
    bool hypothesis_holds = false;
    bool conclusion_holds = false;
};
AveragingResult averaging_select(const Bits& a, const Partition& p, const Ratio& par_a, const Ratio& par_b);

/** One audited block tuple. blocks[2] is -1 for pair audits. */
struct TupleFlag {
    std::array<int, 3> blocks{-1, -1, -1};
    Density d;
    bool good = false;
};

/**
 * Exact homogeneity audit. good_mass counts the ordered vertex tuples lying
 * in homogeneous block tuples (density in [0,eps) u (1-eps,1], strict at the
 * boundary); total_mass is |V|^2 or |V|^3 including repeated-coordinate
 * tuples. flags lists every audited tuple while small, otherwise only the
 * failing ones up to a cap (flags_complete says which); worst keeps the
 * tuples closest to density 1/2.
 */
struct HomogeneityAudit {
    Threshold epsilon = Threshold::ratio(Ratio());
    long long good_mass = 0;
    long long total_mass = 0;
    bool is_homogeneous = false;      // good_mass >= (1-eps) * total_mass
    long long tuples_total = 0;
    long long tuples_bad = 0;
    std::vector<TupleFlag> flags;
    bool flags_complete = true;
    std::vector<TupleFlag> worst;

    Density fraction() const { return Density{good_mass, total_mass}; }
};

HomogeneityAudit audit_pair_homogeneity(const SimpleGraph& g, const Partition& p, const Threshold& eps);
// Combined-vertex-set view: the partition lives on A ids then B ids + na.
HomogeneityAudit audit_pair_homogeneity(const BipartiteGraph& g, const Partition& p, const Threshold& eps);

HomogeneityAudit audit_triple_homogeneity(const TripartiteThreeGraph& h, const Partition& p, const Threshold& eps);
HomogeneityAudit audit_triple_homogeneity(const GeneralThreeGraph& h, const Partition& p, const Threshold& eps);

/**
 * Goodness of one set X inside part i1 of a tripartite 3-graph: a cross pair
 * (y, z) of the two opposite parts is exceptional when |N(yz) cap X| / |X|
 * falls in the closed middle [eps, 1-eps]. X is almost eps-good when the
 * exceptional pairs number at most eps * (product of opposite part sizes).
 */
struct GoodSetAudit {
    long long exceptional_pairs = 0;
    long long total_pairs = 0;
    bool is_almost_good = false;
};
GoodSetAudit almost_good_set(const TripartiteThreeGraph& h, int part_index, const Bits& x, const Threshold& eps);

// Bipartite analog: X inside B; exceptional vertices are a in A with
// |N(a) cap X| / |X| in the closed middle.
GoodSetAudit almost_good_set_graph(const BipartiteGraph& g, const Bits& x, const Threshold& eps);

/**
 * Goodness of a partition of part i1: the union of the almost eps-good
 * blocks must reach (1-eps) of the part.
 */
struct GoodnessAudit {
    std::vector<GoodSetAudit> block_audits;
    long long covered = 0;            // union of good blocks
    long long part_size = 0;
    bool is_almost_good = false;
};
GoodnessAudit almost_good_partition(const TripartiteThreeGraph& h, int part_index, const Partition& p,
                                    const Threshold& eps);

} // namespace hompart
