#pragma once

#include "hompart/core.hpp"
#include "hompart/partition.hpp"
#include "hompart/ratio.hpp"
#include "hompart/triads.hpp"
#include "hompart/vc.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hompart {

/**
 * Independent unoptimized recomputations of the quantities the fast paths
 * produce. Everything here is plain nested loops over explicit id lists, no
 * bit tricks, so a bug would have to appear twice to go unnoticed. Inputs
 * past the size guards are rejected, never truncated.
 */

inline constexpr long long kOracleTupleCap = 100'000'000;
inline constexpr int kOracleVcVertexCap = 40;

long long brute_triangle_count(const Triad& t);

Density brute_density_pair(const BipartiteGraph& g, const std::vector<int>& xs,
                           const std::vector<int>& ys);
Density brute_density_pair(const SimpleGraph& g, const std::vector<int>& xs,
                           const std::vector<int>& ys);
Density brute_density_triple(const TripartiteThreeGraph& h, const std::vector<int>& xs,
                             const std::vector<int>& ys, const std::vector<int>& zs);
Density brute_density_triple(const GeneralThreeGraph& h, const std::vector<int>& xs,
                             const std::vector<int>& ys, const std::vector<int>& zs);

// Subset enumeration by size, ascending; same cap convention as the fast
// path. Witness reconstruction is skipped.
VcResult brute_vc(const SimpleGraph& g, int cap);
VcResult brute_vc(const BipartiteGraph& g, int cap);
SvcResult brute_svc(const TripartiteThreeGraph& h, int cap);
SvcResult brute_svc(const GeneralThreeGraph& h, int cap);

// Raw good mass over total tuple mass of the homogeneity audit, recomputed
// with per-tuple rational comparisons against the interval [0,eps) u
// (1-eps,1]. Comparable to HomogeneityAudit::fraction() without normalizing.
Density brute_pair_audit_fraction(const SimpleGraph& g, const Partition& p, const Ratio& eps);
Density brute_triple_audit_fraction(const TripartiteThreeGraph& h, const Partition& p,
                                    const Ratio& eps);
Density brute_triple_audit_fraction(const GeneralThreeGraph& h, const Partition& p,
                                    const Ratio& eps);

struct OracleReport {
    std::string quantity;
    std::string fast_value;
    std::string brute_value;
    bool match = false;
};

/**
 * Runs fast path and brute path side by side for each named quantity and
 * reports both values. Subsets, partitions, and probe vertices are drawn
 * deterministically from the seed. Unknown quantity names are rejected.
 *
 * Tripartite and general 3-graphs understand "density", "triangles", "vc"
 * (one slice), "svc", "audit"; bipartite graphs understand "density", "vc",
 * "audit".
 */
std::vector<OracleReport> brute_oracles(const TripartiteThreeGraph& h,
                                        const std::vector<std::string>& quantities,
                                        std::uint64_t seed, int vc_cap = 8,
                                        unsigned threads = 1);
std::vector<OracleReport> brute_oracles(const GeneralThreeGraph& h,
                                        const std::vector<std::string>& quantities,
                                        std::uint64_t seed, int vc_cap = 8,
                                        unsigned threads = 1);
std::vector<OracleReport> brute_oracles(const BipartiteGraph& g,
                                        const std::vector<std::string>& quantities,
                                        std::uint64_t seed, int vc_cap = 8);

} // namespace hompart
