#pragma once

#include "hompart/core.hpp"
#include "hompart/ecg.hpp"
#include "hompart/ratio.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hompart {

/**
 * Seeded instance generators. Every generator is a pure function of its
 * arguments: vertex classes are contiguous index ranges, random bits come
 * from the fixed 64-bit mixer in rng.hpp, and noise decisions are keyed by
 * cell index (triples: (x*nv + y)*nw + z part-local; pairs: a*nb + b), so
 * output is byte-identical across runs, platforms, and thread counts.
 */

enum class GenKind { class_based, threshold, slice_template, random, blowup_graph };

const char* to_string(GenKind k);
bool gen_kind_from_string(const std::string& name, GenKind& out);

struct GenSpec {
    GenKind kind = GenKind::class_based;
    int n = 0;      // vertices per side
    int d = 1;      // classes (class_based, blowup_graph) or templates (slice_template)
    Ratio noise;    // flip probability in [0,1); density for kind random
    std::uint64_t seed = 0;
};

/**
 * Ground truth of a class-based instance. Each side splits into d contiguous
 * classes; the pattern bit of a class triple decides edge membership before
 * noise. At noise 0 every slice graph is a blow-up of a d-vertex graph, so
 * the slicewise VC-dimension is at most d.
 */
struct ClassBasedTruth {
    int d = 1;
    std::vector<int> cls_u, cls_v, cls_w;
    std::vector<char> pattern; // d^3 bits, row-major over (cu, cv, cw)

    bool at(int cu, int cv, int cw) const {
        return pattern[(static_cast<std::size_t>(cu) * d + cv) * d + cw] != 0;
    }
};

struct ClassBasedInstance {
    TripartiteThreeGraph h;
    ClassBasedTruth truth;
};

// Pattern drawn from the seed.
ClassBasedInstance gen_class_based(int n, int d, const Ratio& noise, std::uint64_t seed,
                                   unsigned threads = 1);
// Same construction with the class-triple pattern chosen by the caller.
ClassBasedInstance gen_class_based_pattern(int n, int d, std::vector<char> pattern,
                                           const Ratio& noise, std::uint64_t seed,
                                           unsigned threads = 1);

// Weights f(v) uniform on [0, 2^32) per combined vertex id; edge iff
// f(x)+f(y)+f(z) <= theta. Slices are threshold graphs, so the slicewise
// VC-dimension is at most 2 regardless of n.
TripartiteThreeGraph gen_threshold(int n, std::uint64_t seed, unsigned threads = 1);
TripartiteThreeGraph gen_threshold_fixed(int n, std::uint64_t seed, std::uint64_t theta,
                                         unsigned threads = 1);

/**
 * Every slice at a U vertex is one of `templates` fixed d x d class patterns
 * over V and W; which template a vertex uses is drawn from the seed.
 */
struct SliceTemplateInstance {
    TripartiteThreeGraph h;
    int templates = 1;
    int d = 1;
    std::vector<int> tpl_u;
    std::vector<int> cls_v, cls_w;
    std::vector<char> patterns; // templates * d * d, row-major over (t, cv, cw)

    bool at(int tpl, int cv, int cw) const {
        return patterns[(static_cast<std::size_t>(tpl) * d + cv) * d + cw] != 0;
    }
};

SliceTemplateInstance gen_slice_template(int n, int templates, int d, const Ratio& noise,
                                         std::uint64_t seed, unsigned threads = 1);

// Each triple an edge independently with the given density, which may be 1.
TripartiteThreeGraph gen_random(int n, const Ratio& density, std::uint64_t seed,
                                unsigned threads = 1);

/**
 * Bipartite blow-up truth: d contiguous classes per side and a d x d base
 * pattern. Used both for plain graphs (noise flips edge membership) and for
 * three-color edge-colored graphs (noise reassigns pairs to the error color).
 */
struct BlowupTruth {
    int d = 1;
    std::vector<int> cls_a, cls_b;
    std::vector<char> base; // d*d bits, row-major over (ca, cb)

    bool at(int ca, int cb) const {
        return base[static_cast<std::size_t>(ca) * d + cb] != 0;
    }
};

struct BlowupGraphInstance {
    BipartiteGraph g;
    BlowupTruth truth;
};

BlowupGraphInstance gen_blowup_graph(int na, int nb, int d, const Ratio& noise,
                                     std::uint64_t seed);

struct BlowupEcgInstance {
    EdgeColoredBipartiteGraph g;
    BlowupTruth truth;
};

// Colors 0/1 from the base pattern, each pair independently moved to the
// error color 2 with probability error_noise. Every pair ends up colored.
BlowupEcgInstance gen_blowup_ecg(int na, int nb, int d, const Ratio& error_noise,
                                 std::uint64_t seed);

// Forgets the tripartition: vertex set U+V+W under combined ids, one
// 3-element set per tripartite edge. Edge sets and densities carry over
// exactly because distinct parts never share vertices.
GeneralThreeGraph symmetrize(const TripartiteThreeGraph& h);

// The canonical shattering pattern: left vertices a_1..a_k, right vertices
// b_S for every S subset of [k], edge a_i b_S iff i in S. VC-dimension k.
BipartiteGraph uk_graph(int k);

} // namespace hompart
