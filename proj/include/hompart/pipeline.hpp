#pragma once

#include "hompart/core.hpp"
#include "hompart/ecg.hpp"
#include "hompart/io.hpp"
#include "hompart/partition.hpp"
#include "hompart/ratio.hpp"
#include "hompart/triads.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hompart {

/**
 * Working-scale knobs for the slicewise pipeline. The asymptotic schedule
 * (slice homogeneity eps^100, cover delta eps^{1/2}/2l, packing delta'
 * 8(8c^4 eps')^{1/(4k+4)}) is vacuous at desk scale, so the construction
 * runs on these parameters instead and every audited bound lands in the
 * runlog with both the formula value and the achieved quantity.
 *
 * eps_slice drives slice reduction and grouping, eps_working every
 * downstream filter, delta_cover the neighborhood covers, delta_pack the
 * vcremoval packings. strict_mode changes nothing here; it only asks the
 * CLI to evaluate the theoretical constants alongside.
 */
struct WorkingParams {
    int k = 2;
    Ratio eps_slice{1, 20};
    Ratio eps_working{1, 20};
    Ratio delta_cover{1, 100};
    Ratio delta_pack{1, 20};
    int size_cap = 0;          // per-side block cap for slice equipartitions, 0 = off
    bool strict_mode = false;
    unsigned threads = 1;
    long long uk_budget = 1'000'000;  // node budget per sampled U(k) search
    long long uk_size_cap = 100'000;  // skip the sampled search when |A||V| exceeds this
};

// Throws std::invalid_argument unless k >= 1 and every rational is in (0,1).
void validate_params(const WorkingParams& wp);

/**
 * Reduced picture of one slice graph H_x: an equipartition of V and W with
 * the high-irregularity blocks pooled into index 0, plus the complete edge
 * colored graph on block indices. colors is (r+1) x (s+1) row-major with
 * entries 0 (sparse), 1 (dense), 2 (irregular); row 0 and column 0 are
 * always 2. Non-error indices are canonical: sorted by (color degree
 * profile, pre-sort index), so equal reduced graphs agree entrywise.
 */
struct SliceReduction {
    int x = -1;
    int ell_v = 0, ell_w = 0;  // equipartition block counts per side
    int r = 0, s = 0;          // non-error block counts after pooling
    std::vector<int> v_block;  // per y in V: 0 = pooled, else 1..r
    std::vector<int> w_block;  // per z in W: 0 = pooled, else 1..s
    std::vector<signed char> colors;
    long long irregular_pairs = 0;  // pre-pooling count at eps_slice
    bool equi_fallback = false;
    bool size_cap_exceeded = false;

    int color(int i, int j) const {
        return colors[static_cast<std::size_t>(i) * (s + 1) + static_cast<std::size_t>(j)];
    }
};

SliceReduction slice_reduce(const TripartiteThreeGraph& h, int x, const Ratio& eps_slice,
                            int size_cap = 0, unsigned threads = 1);

/** Slices with identical (ell_v, ell_w, r, s, colors), in first-seen order. */
struct SliceClass {
    std::vector<int> members;  // ascending x ids
    int ell_v = 0, ell_w = 0, r = 0, s = 0;
    std::vector<signed char> colors;
    bool pooled = false;  // class mass below eps_slice |U| / #classes, folded into u_err

    int color(int i, int j) const {
        return colors[static_cast<std::size_t>(i) * (s + 1) + static_cast<std::size_t>(j)];
    }
};

struct SliceGrouping {
    std::vector<SliceReduction> reductions;  // indexed by x over all of U
    std::vector<SliceClass> classes;
    Bits u_err{0};  // members of pooled classes
};

SliceGrouping group_slices(const TripartiteThreeGraph& h, const Ratio& eps_slice,
                           int size_cap = 0, unsigned threads = 1);

/**
 * Output of the per-class construction: a partition of V audited against H
 * restricted to (X, V, W). achieved_eps is the smallest goodness parameter
 * the partition satisfies there; the result is re-audited at that value and
 * a disagreement throws std::logic_error. hypotheses_ok reports the
 * working-scale slice hypothesis checks; failures flag, they never abort.
 */
struct MainsliceResult {
    Partition pv;
    GoodnessAudit audit;  // at eps_working
    Ratio achieved_eps;
    bool achieved_valid = false;
    bool hypotheses_ok = false;
    bool warnings = false;  // degenerate cells pooled mid-run
    std::vector<RunlogRow> log;
};

MainsliceResult mainslice_partition(const TripartiteThreeGraph& h, const SliceGrouping& grouping,
                                    int class_index, const WorkingParams& wp);

/**
 * Whole-graph assembly: one grouped mainslice pass per part with the roles
 * rotated, refined per part, then audited together. combined lives on U ids,
 * V ids + |U|, W ids + |U| + |V|. Parts must have equal sizes.
 */
struct SlvcResult {
    Partition pu, pv, pw;
    Partition combined;
    GoodHomAudit goodhom;               // goodness parameter and working audit at eps_working
    std::array<Ratio, 3> achieved{};    // per-side achieved goodness on the full graph
    std::array<bool, 3> achieved_valid{};
    std::vector<RunlogRow> log;
};

SlvcResult slvc_partition(const TripartiteThreeGraph& h, const WorkingParams& wp);

/**
 * Non-partite version: tripartitize, run slvc_partition, pull the three
 * block systems back to V(H) and refine. The audit of q on H and the audit
 * of the lifted blocks on the tripartitization must agree exactly up to
 * diagonal-tuple mass (27x total, 6x good plus 21 n^3 when eps > 0); a
 * mismatch throws std::logic_error.
 */
struct SlvccorResult {
    Partition q;
    HomogeneityAudit general_audit;
    HomogeneityAudit lifted_audit;
    SlvcResult inner;
    std::vector<RunlogRow> log;
};

SlvccorResult slvccor_partition(const GeneralThreeGraph& h, const WorkingParams& wp);

/**
 * One evaluated constant. exact is the full rational rendering when the
 * value is rational and printably small; approx always holds something
 * readable, escalating from a decimal to a power-of-two form to a nested
 * tower as magnitudes grow. log2_value is meaningful while finite_log2.
 */
struct ConstantRecord {
    std::string name;
    std::string formula;
    std::string exact;
    std::string approx;
    double log2_value = 0.0;
    bool finite_log2 = true;
};

struct ConstantsReport {
    int k = 0;
    Ratio tau;
    Ratio c1;
    std::vector<ConstantRecord> records;

    const ConstantRecord* find(const std::string& name) const;
};

// The VC-removal constant c(k) stays abstract; c1 is supplied by the caller.
ConstantsReport theoretical_constants(int k, const Ratio& tau, const Ratio& c1);

// 8 (16 eps^{1/16} c^4)^{1/(4k+4)} when both roots come out rational.
std::optional<Ratio> mu_exact(const Ratio& eps, const Ratio& c, int k);

/**
 * Smallest eps for which p (a partition of the given part) is almost
 * eps-good with respect to h, found by exact search over the finitely many
 * thresholds where feasibility can flip. valid goes false only when no
 * eps < 1 works (possible for a partition of an empty part).
 */
Ratio achieved_goodness(const TripartiteThreeGraph& h, int part_index, const Partition& p,
                        bool& valid);

} // namespace hompart
