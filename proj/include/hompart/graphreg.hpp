#pragma once

#include "hompart/core.hpp"
#include "hompart/ecg.hpp"
#include "hompart/partition.hpp"
#include "hompart/ratio.hpp"

#include <vector>

namespace hompart {

/**
 * Greedy farthest-point packing of side A under the metric
 *
 *   d(a, a') = max(|N_{E1}(a) xor N_{E1}(a')|, |N_{E0}(a) xor N_{E0}(a')|).
 *
 * Vertices whose error-color degree |N_{E2}(a)| exceeds error_color_bound
 * times |B| land in `exceptional` and never become representatives or get
 * assigned. Representatives are pairwise more than radius*|B| apart; every
 * other non-exceptional vertex is assigned to the lowest-index representative
 * within radius*|B|.
 */
struct PackingResult {
    std::vector<int> representatives;  // ids in A, in selection order
    Bits exceptional;                  // U
    std::vector<int> assignment;       // per A id: representative index, -1 on U
    Ratio radius;
    Threshold error_color_bound = Threshold::ratio(Ratio());
    bool verified = false;  // separation and radius invariants rechecked post hoc
};

PackingResult packing_cluster(const EdgeColoredBipartiteGraph& g, const Ratio& delta,
                              const Threshold& e2_bound, unsigned threads = 1);
// Error-color cutoff sqrt(eps)|B|.
PackingResult packing_cluster(const EdgeColoredBipartiteGraph& g, const Ratio& delta,
                              const Ratio& eps, unsigned threads = 1);

/**
 * Greedy cover of A by pieces carved from single neighborhoods. Each round
 * picks the vertex b of highest residual degree (ties to the smallest id),
 * requires deg_R(b) >= sqrt(delta)|R|, and carves the smallest-id
 * max(1, floor(sqrt(delta)|R|)) members of N(b) in the residual R. Rounds
 * stop once |R| < delta^{1/4}|A| or no vertex qualifies; the leftover splits
 * into a0 (degree at most delta^{1/4}|B| in the whole graph) and a_err.
 */
struct CoverResult {
    std::vector<int> centers;              // backing vertex of each carved block
    std::vector<std::vector<int>> blocks;  // carved pieces, disjoint, sorted ids
    Bits a0;
    Bits a_err;
    Ratio delta;
    long long a0_low_quarter = 0;  // members of a0 with deg <= delta^{1/4}|B|, all of them
    long long a0_low_sqrt = 0;     // members of a0 with deg <= sqrt(delta)|B|, reported only
    bool t_bound_ok = false;       // t^2 * delta <= 1
};

CoverResult greedy_cover(const BipartiteGraph& g, const Ratio& delta);

// Post-hoc validation of the cover conclusions, written against the result
// alone so a construction bug cannot vouch for itself.
struct CoverCheck {
    bool partition_ok = false;    // blocks, a0 and a_err tile A exactly
    bool containment_ok = false;  // block i inside N(centers[i])
    bool sizes_ok = false;        // |A_i| = max(1, floor(sqrt(delta)|R_i|)) per round
    bool degree_ok = false;       // every a0 member has deg <= delta^{1/4}|B|
    bool err_ok = false;          // |a_err| <= delta^{1/4}|A|
    bool t_ok = false;            // t <= delta^{-1/2}
    bool all() const {
        return partition_ok && containment_ok && sizes_ok && degree_ok && err_ok && t_ok;
    }
};

CoverCheck verify_cover(const BipartiteGraph& g, const CoverResult& c);

/**
 * Equipartition of A and B refining {A, B}, |A| = |B| required. Proto-blocks
 * come from packing both sides of the (non-edge, edge) coloring at radius
 * eps; blocks shorter than eps|A|/t are pooled, the rest are cut into chunks
 * of exactly ceil(eps|A|/t) with the leftovers pooled too. Pooled vertices
 * are glued back one per chunk, preferring chunks cut from their own
 * proto-block, so zero-noise block structures stay exactly homogeneous.
 */
struct EquipartitionResult {
    Partition partition;     // ground = combined vertex set, A ids then B ids
    HomogeneityAudit audit;  // pair audit of the combined graph at the input eps
    long long m_a = 0, m_b = 0;  // packing representative counts
    bool used_fallback = false;  // no chunk survived pooling; plain contiguous split
    bool size_cap_exceeded = false;
};

// k is reported in logs only, the construction never reads it.
EquipartitionResult homogeneous_equipartition(const BipartiteGraph& g, int k, const Ratio& eps,
                                              int size_cap = 0, unsigned threads = 1);

} // namespace hompart
