#pragma once

#include "hompart/core.hpp"
#include "hompart/ecg.hpp"

#include <optional>
#include <vector>

namespace hompart {

/**
 * Shattering certificate: witnesses[mask] is a vertex whose neighborhood
 * meets {shattered[i] : bit i of mask} and misses the rest of the shattered
 * set. witnesses has exactly 2^|shattered| entries.
 */
struct ShatterWitness {
    std::vector<int> shattered;
    std::vector<int> witnesses;
};

struct VcResult {
    int value = 0;
    bool capped = false;
    std::optional<ShatterWitness> witness;
};

/**
 * Exact VC dimension of the neighborhood set system {N(x) : x in V} over
 * ground set V, by depth-first extension of shattered subsets in
 * lexicographic order. A subset is shattered iff its 2^k trace cells are all
 * nonempty; cells only shrink under extension, which is the pruning rule.
 * Stops at `cap`: value == cap with capped == true means dimension >= cap.
 */
VcResult vc_dimension(const SimpleGraph& g, int cap);

// Combined-vertex-set view (both sides shatterable, witnesses anywhere).
VcResult vc_dimension(const BipartiteGraph& g, int cap);

// One-sided variant: shattered set inside A, witnesses drawn from B.
VcResult vc_dimension_oriented(const BipartiteGraph& g, int cap);

// Generic engine over an explicit set system. member_of[e] lists the family
// members containing ground element e (the transpose of the system).
VcResult vc_dimension_system(const std::vector<const Bits*>& member_of, std::size_t family_size,
                             int cap);

struct SvcResult {
    int value = 0;
    bool capped = false;
    int worst_slice = -1; // combined vertex id; smallest id among maximizers
    std::optional<ShatterWitness> witness;
};

/**
 * Slicewise VC dimension: max over every vertex x of the VC dimension of
 * the slice graph at x. Tripartite slices are evaluated on the combined
 * two-part vertex set. Parallel over slices; the reported worst slice is
 * thread-count independent.
 */
SvcResult slicewise_vc(const TripartiteThreeGraph& h, int cap, unsigned threads = 1);
SvcResult slicewise_vc(const GeneralThreeGraph& h, int cap, unsigned threads = 1);

enum class UkOutcome { witness, none, budget_exhausted };

/**
 * An E_u/E_v-copy of U(k): left vertices x_1..x_k on one side, right
 * vertices y_S (S over subset masks) on the other, with x_i y_S in E_u when
 * i is in S and in E_v otherwise. The y_S are automatically distinct because
 * the two colors are disjoint.
 */
struct UkWitness {
    std::vector<int> left;
    std::vector<int> right; // indexed by subset mask
    int color_u = 0, color_v = 0;
    bool right_in_b = true;
};

struct UkSearchResult {
    UkOutcome outcome = UkOutcome::none;
    std::optional<UkWitness> witness;
    long long nodes = 0;
};

inline constexpr long long kDefaultUkBudget = 100'000'000;

/**
 * Exact search for an E_u/E_v-copy of U(k), both orientations. Depth-first
 * over increasing left tuples; each partial tuple keeps one candidate set
 * per trace cell, and a tuple dies as soon as some cell empties. `none` is
 * conclusive; budget_exhausted is not. A node is one attempted extension.
 */
UkSearchResult find_uk_copy(const EdgeColoredBipartiteGraph& g, int color_u, int color_v, int k,
                            long long budget = kDefaultUkBudget);

} // namespace hompart
