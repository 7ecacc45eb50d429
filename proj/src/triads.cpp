#include "hompart/triads.hpp"

#include "hompart/parallel.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace hompart {

namespace {

void check_rows(const std::vector<Bits>& rows, std::size_t want_rows, std::size_t width, const char* what) {
    if (rows.size() != want_rows) throw std::invalid_argument(std::string("Triad: row count mismatch in ") + what);
    for (const Bits& r : rows)
        if (r.size() != width) throw std::invalid_argument(std::string("Triad: row width mismatch in ") + what);
}

void check_ids(const std::vector<int>& ids, int limit, const char* what) {
    std::unordered_set<int> seen;
    for (int v : ids) {
        if (v < 0 || v >= limit) throw std::invalid_argument(std::string("Triad: id out of range in ") + what);
        if (!seen.insert(v).second) throw std::invalid_argument(std::string("Triad: duplicate id in ") + what);
    }
}

} // namespace

Triad complete_triad(std::vector<int> xs, std::vector<int> ys, std::vector<int> zs) {
    Triad t;
    t.p.assign(xs.size(), Bits::full(ys.size()));
    t.q.assign(xs.size(), Bits::full(zs.size()));
    t.r.assign(ys.size(), Bits::full(zs.size()));
    t.xs = std::move(xs);
    t.ys = std::move(ys);
    t.zs = std::move(zs);
    return t;
}

void validate_triad(const Triad& t) {
    check_rows(t.p, t.xs.size(), t.ys.size(), "P");
    check_rows(t.q, t.xs.size(), t.zs.size(), "Q");
    check_rows(t.r, t.ys.size(), t.zs.size(), "R");
}

long long triangle_count(const Triad& t, unsigned threads) {
    validate_triad(t);
    std::vector<long long> per_row(t.xs.size(), 0);
    parallel_for(t.xs.size(), threads, [&](std::size_t xi) {
        long long c = 0;
        t.p[xi].for_each_set([&](std::size_t yj) { c += t.q[xi].and_count(t.r[yj]); });
        per_row[xi] = c;
    });
    long long total = 0;
    for (long long c : per_row) total += c;
    return total;
}

std::optional<Density> triad_density(const TripartiteThreeGraph& h, const Triad& t) {
    validate_triad(t);
    check_ids(t.xs, h.nu(), "X");
    check_ids(t.ys, h.nv(), "Y");
    check_ids(t.zs, h.nw(), "Z");
    long long den = 0, num = 0;
    for (std::size_t xi = 0; xi < t.xs.size(); ++xi) {
        t.p[xi].for_each_set([&](std::size_t yj) {
            Bits m = t.q[xi];
            m &= t.r[yj];
            den += static_cast<long long>(m.count());
            m.for_each_set([&](std::size_t zk) {
                if (h.has_edge(t.xs[xi], t.ys[yj], t.zs[zk])) ++num;
            });
        });
    }
    if (den == 0) return std::nullopt;
    return Density{num, den};
}

std::optional<Density> triad_density(const GeneralThreeGraph& h, const Triad& t) {
    validate_triad(t);
    check_ids(t.xs, h.n(), "X");
    check_ids(t.ys, h.n(), "Y");
    check_ids(t.zs, h.n(), "Z");
    std::unordered_set<int> all(t.xs.begin(), t.xs.end());
    for (int v : t.ys)
        if (!all.insert(v).second) throw std::invalid_argument("triad_density: parts overlap");
    for (int v : t.zs)
        if (!all.insert(v).second) throw std::invalid_argument("triad_density: parts overlap");
    long long den = 0, num = 0;
    for (std::size_t xi = 0; xi < t.xs.size(); ++xi) {
        t.p[xi].for_each_set([&](std::size_t yj) {
            Bits m = t.q[xi];
            m &= t.r[yj];
            den += static_cast<long long>(m.count());
            m.for_each_set([&](std::size_t zk) {
                if (h.has_edge(t.xs[xi], t.ys[yj], t.zs[zk])) ++num;
            });
        });
    }
    if (den == 0) return std::nullopt;
    return Density{num, den};
}

namespace {

// Class counts per block pair; rejects gaps, negatives, and empty classes so
// that the class ids of every block pair are exactly 0..k-1.
std::vector<std::vector<int>> class_counts(const Partition& px, const Partition& py,
                                           const std::vector<std::vector<int>>& cls, const char* what) {
    std::size_t nx = static_cast<std::size_t>(px.ground_size());
    std::size_t ny = static_cast<std::size_t>(py.ground_size());
    if (cls.size() != nx) throw std::invalid_argument(std::string("decomposition: class matrix shape for ") + what);
    for (const auto& row : cls)
        if (row.size() != ny) throw std::invalid_argument(std::string("decomposition: class matrix shape for ") + what);

    std::size_t bi = px.size(), bj = py.size();
    std::vector<std::vector<int>> k(bi, std::vector<int>(bj, 0));
    for (std::size_t a = 0; a < nx; ++a) {
        std::size_t i = static_cast<std::size_t>(px.block_of(static_cast<int>(a)));
        for (std::size_t b = 0; b < ny; ++b) {
            int c = cls[a][b];
            if (c < 0) throw std::invalid_argument(std::string("decomposition: negative class id in ") + what);
            std::size_t j = static_cast<std::size_t>(py.block_of(static_cast<int>(b)));
            k[i][j] = std::max(k[i][j], c + 1);
        }
    }
    for (std::size_t i = 0; i < bi; ++i)
        for (std::size_t j = 0; j < bj; ++j) {
            std::vector<char> seen(static_cast<std::size_t>(k[i][j]), 0);
            for (int a : px.block(i))
                for (int b : py.block(j)) seen[static_cast<std::size_t>(cls[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])] = 1;
            for (char s : seen)
                if (!s) throw std::invalid_argument(std::string("decomposition: empty pair class in ") + what);
        }
    return k;
}

} // namespace

TripartiteDecomposition::TripartiteDecomposition(Partition pa, Partition pb, Partition pc,
                                                 std::vector<std::vector<int>> cls_ab,
                                                 std::vector<std::vector<int>> cls_ac,
                                                 std::vector<std::vector<int>> cls_bc)
    : pa_(std::move(pa)), pb_(std::move(pb)), pc_(std::move(pc)),
      cls_ab_(std::move(cls_ab)), cls_ac_(std::move(cls_ac)), cls_bc_(std::move(cls_bc)) {
    k_ab_ = class_counts(pa_, pb_, cls_ab_, "A/B");
    k_ac_ = class_counts(pa_, pc_, cls_ac_, "A/C");
    k_bc_ = class_counts(pb_, pc_, cls_bc_, "B/C");
}

TripartiteDecomposition TripartiteDecomposition::trivial(Partition pa, Partition pb, Partition pc) {
    auto zero = [](int nx, int ny) {
        return std::vector<std::vector<int>>(static_cast<std::size_t>(nx), std::vector<int>(static_cast<std::size_t>(ny), 0));
    };
    std::vector<std::vector<int>> ab = zero(pa.ground_size(), pb.ground_size());
    std::vector<std::vector<int>> ac = zero(pa.ground_size(), pc.ground_size());
    std::vector<std::vector<int>> bc = zero(pb.ground_size(), pc.ground_size());
    return TripartiteDecomposition(std::move(pa), std::move(pb), std::move(pc),
                                   std::move(ab), std::move(ac), std::move(bc));
}

long long TripartiteDecomposition::triad_total() const {
    long long total = 0;
    for (std::size_t i = 0; i < pa_.size(); ++i)
        for (std::size_t j = 0; j < pb_.size(); ++j)
            for (std::size_t l = 0; l < pc_.size(); ++l)
                total += static_cast<long long>(k_ab_[i][j]) * k_ac_[i][l] * k_bc_[j][l];
    return total;
}

Triad materialize_triad(const TripartiteDecomposition& d, const TriadRef& ref) {
    if (ref.bx < 0 || static_cast<std::size_t>(ref.bx) >= d.pa().size() ||
        ref.by < 0 || static_cast<std::size_t>(ref.by) >= d.pb().size() ||
        ref.bz < 0 || static_cast<std::size_t>(ref.bz) >= d.pc().size())
        throw std::invalid_argument("materialize_triad: block index out of range");
    std::size_t bx = static_cast<std::size_t>(ref.bx), by = static_cast<std::size_t>(ref.by), bz = static_cast<std::size_t>(ref.bz);
    if (ref.cp < 0 || ref.cp >= d.k_ab(bx, by) || ref.cq < 0 || ref.cq >= d.k_ac(bx, bz) ||
        ref.cr < 0 || ref.cr >= d.k_bc(by, bz))
        throw std::invalid_argument("materialize_triad: class index out of range");

    Triad t;
    t.xs = d.pa().block(bx);
    t.ys = d.pb().block(by);
    t.zs = d.pc().block(bz);
    t.p.assign(t.xs.size(), Bits(t.ys.size()));
    t.q.assign(t.xs.size(), Bits(t.zs.size()));
    t.r.assign(t.ys.size(), Bits(t.zs.size()));
    for (std::size_t xi = 0; xi < t.xs.size(); ++xi) {
        for (std::size_t yj = 0; yj < t.ys.size(); ++yj)
            if (d.class_ab(t.xs[xi], t.ys[yj]) == ref.cp) t.p[xi].set(yj);
        for (std::size_t zk = 0; zk < t.zs.size(); ++zk)
            if (d.class_ac(t.xs[xi], t.zs[zk]) == ref.cq) t.q[xi].set(zk);
    }
    for (std::size_t yj = 0; yj < t.ys.size(); ++yj)
        for (std::size_t zk = 0; zk < t.zs.size(); ++zk)
            if (d.class_bc(t.ys[yj], t.zs[zk]) == ref.cr) t.r[yj].set(zk);
    return t;
}

namespace {

// Per block triple: triangle and edge counts for every class combination,
// flattened as (cp * kq + cq) * kr + cr.
struct TripleCounts {
    int kp = 0, kq = 0, kr = 0;
    std::vector<long long> tri, in_h;
};

} // namespace

DecompositionAudit audit_decomposition(const TripartiteThreeGraph& h, const TripartiteDecomposition& d,
                                       const Threshold& eps, bool allow_large, unsigned threads) {
    if (h.nu() != d.pa().ground_size() || h.nv() != d.pb().ground_size() || h.nw() != d.pc().ground_size())
        throw std::invalid_argument("audit_decomposition: ground sizes do not match the 3-graph");
    if (!allow_large && d.triad_total() > kLargeTriadCount)
        throw std::invalid_argument("audit_decomposition: triad count exceeds opt-in limit");

    std::size_t na = d.pa().size(), nb = d.pb().size(), nc = d.pc().size();
    std::size_t nbt = na * nb * nc;
    std::vector<TripleCounts> slots(nbt);

    parallel_for(nbt, threads, [&](std::size_t bt) {
        std::size_t bx = bt / (nb * nc);
        std::size_t by = (bt / nc) % nb;
        std::size_t bz = bt % nc;
        const std::vector<int>& xs = d.pa().block(bx);
        const std::vector<int>& ys = d.pb().block(by);
        const std::vector<int>& zs = d.pc().block(bz);
        TripleCounts& out = slots[bt];
        out.kp = d.k_ab(bx, by);
        out.kq = d.k_ac(bx, bz);
        out.kr = d.k_bc(by, bz);
        out.tri.assign(static_cast<std::size_t>(out.kp) * out.kq * out.kr, 0);
        out.in_h.assign(out.tri.size(), 0);

        // Q and R rows split per class once per block triple; each (x, y)
        // pair then contributes to exactly one cp.
        std::vector<std::vector<Bits>> qr(static_cast<std::size_t>(out.kq), std::vector<Bits>(xs.size(), Bits(zs.size())));
        std::vector<std::vector<Bits>> rr(static_cast<std::size_t>(out.kr), std::vector<Bits>(ys.size(), Bits(zs.size())));
        for (std::size_t xi = 0; xi < xs.size(); ++xi)
            for (std::size_t zk = 0; zk < zs.size(); ++zk)
                qr[static_cast<std::size_t>(d.class_ac(xs[xi], zs[zk]))][xi].set(zk);
        for (std::size_t yj = 0; yj < ys.size(); ++yj)
            for (std::size_t zk = 0; zk < zs.size(); ++zk)
                rr[static_cast<std::size_t>(d.class_bc(ys[yj], zs[zk]))][yj].set(zk);

        Bits hm(zs.size());
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
            for (std::size_t yj = 0; yj < ys.size(); ++yj) {
                int cp = d.class_ab(xs[xi], ys[yj]);
                Bits full_row = h.nbr_uv(xs[xi], ys[yj]);
                hm = Bits(zs.size());
                for (std::size_t zk = 0; zk < zs.size(); ++zk)
                    if (full_row.test(static_cast<std::size_t>(zs[zk]))) hm.set(zk);
                for (int cq = 0; cq < out.kq; ++cq)
                    for (int cr = 0; cr < out.kr; ++cr) {
                        Bits m = qr[static_cast<std::size_t>(cq)][xi];
                        m &= rr[static_cast<std::size_t>(cr)][yj];
                        std::size_t idx = (static_cast<std::size_t>(cp) * out.kq + static_cast<std::size_t>(cq)) * out.kr +
                                          static_cast<std::size_t>(cr);
                        out.tri[idx] += static_cast<long long>(m.count());
                        out.in_h[idx] += static_cast<long long>(m.and_count(hm));
                    }
            }
        }
    });

    DecompositionAudit audit;
    audit.total = static_cast<long long>(h.nu()) * h.nv() * h.nw();
    for (std::size_t bt = 0; bt < nbt; ++bt) {
        const TripleCounts& s = slots[bt];
        std::size_t bx = bt / (nb * nc);
        std::size_t by = (bt / nc) % nb;
        std::size_t bz = bt % nc;
        for (int cp = 0; cp < s.kp; ++cp)
            for (int cq = 0; cq < s.kq; ++cq)
                for (int cr = 0; cr < s.kr; ++cr) {
                    std::size_t idx = (static_cast<std::size_t>(cp) * s.kq + static_cast<std::size_t>(cq)) * s.kr +
                                      static_cast<std::size_t>(cr);
                    ++audit.triads_seen;
                    audit.triangle_sum += s.tri[idx];
                    if (s.tri[idx] > 0 && eps.in_hom_interval(s.in_h[idx], s.tri[idx])) {
                        audit.sigma.push_back(TriadRef{static_cast<int>(bx), static_cast<int>(by), static_cast<int>(bz),
                                                       cp, cq, cr});
                        audit.covered += s.tri[idx];
                    }
                }
    }
    audit.is_homogeneous = eps.above_eq_one_minus(audit.covered, audit.total);
    return audit;
}

SymmetryAudit symmetry_audit(const TripartiteThreeGraph& h, const Ratio& eps) {
    SymmetryAudit rep;
    rep.eps = eps;
    rep.eps_in_range = !eps.is_zero() && eps < Ratio(1, 100);
    Threshold t = Threshold::ratio(eps);
    rep.parts[0] = almost_good_set(h, 0, Bits::full(static_cast<std::size_t>(h.nu())), t);
    rep.parts[1] = almost_good_set(h, 1, Bits::full(static_cast<std::size_t>(h.nv())), t);
    rep.parts[2] = almost_good_set(h, 2, Bits::full(static_cast<std::size_t>(h.nw())), t);
    rep.hypothesis = rep.parts[0].is_almost_good && rep.parts[1].is_almost_good && rep.parts[2].is_almost_good;
    long long total = static_cast<long long>(h.nu()) * h.nv() * h.nw();
    rep.density = Density{h.edge_count(), total > 0 ? total : 1};
    rep.conclusion = Threshold::root(Ratio::integer(4), eps, 16).in_hom_interval(rep.density.num, rep.density.den);
    return rep;
}

GoodHomAudit goodhom_audit(const TripartiteThreeGraph& h, const Partition& p, const Ratio& eps,
                           const Threshold& working) {
    int nu = h.nu(), nv = h.nv(), nw = h.nw();
    if (p.ground_size() != nu + nv + nw)
        throw std::invalid_argument("goodhom_audit: partition ground does not match the 3-graph");
    auto side_of = [&](int v) { return v < nu ? 0 : (v < nu + nv ? 1 : 2); };
    for (const std::vector<int>& blk : p.blocks()) {
        int s = side_of(blk.front());
        for (int v : blk)
            if (side_of(v) != s) throw std::invalid_argument("goodhom_audit: partition does not refine the tripartition");
    }

    GoodHomAudit rep;
    rep.eps = eps;
    Threshold t = Threshold::ratio(eps);
    int offs[4] = {0, nu, nu + nv, nu + nv + nw};
    const char* names[3] = {h.part_u().name.c_str(), h.part_v().name.c_str(), h.part_w().name.c_str()};
    for (int side = 0; side < 3; ++side) {
        Bits mask(static_cast<std::size_t>(p.ground_size()));
        for (int v = offs[side]; v < offs[side + 1]; ++v) mask.set(static_cast<std::size_t>(v));
        Partition restricted = restrict_partition(p, mask, names[side]);
        rep.sides[static_cast<std::size_t>(side)] = almost_good_partition(h, side, restricted, t);
    }
    rep.hypothesis = rep.sides[0].is_almost_good && rep.sides[1].is_almost_good && rep.sides[2].is_almost_good;
    rep.at_bound = audit_triple_homogeneity(h, p, Threshold::root(Ratio::integer(28), eps, 64));
    rep.at_working = audit_triple_homogeneity(h, p, working);
    return rep;
}

GoodHomAudit goodhom_audit(const TripartiteThreeGraph& h, const Partition& p, const Ratio& eps) {
    return goodhom_audit(h, p, eps, Threshold::root(Ratio::integer(28), eps, 64));
}

} // namespace hompart
