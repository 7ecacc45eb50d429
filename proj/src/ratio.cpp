#include "hompart/ratio.hpp"

#include <cctype>

namespace hompart {

Ratio Ratio::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Ratio::parse: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        bigint n(s.substr(0, slash));
        bigint d(s.substr(slash + 1));
        return Ratio(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Ratio(bigint(s), bigint(1));
    std::string ip = s.substr(0, dot);
    std::string fp = s.substr(dot + 1);
    for (char c : fp)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("Ratio::parse: bad decimal '" + s + "'");
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    bigint den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    bigint num = bigint(ip) * den + (fp.empty() ? bigint(0) : bigint(fp));
    if (neg) num = -num;
    return Ratio(num, den);
}

long long Threshold::floor_scaled(long long scale) const {
    if (scale < 0) throw std::domain_error("Threshold::floor_scaled: negative scale");
    // s <= coef * base^{1/root} * scale  <=>  s^root * cd^root * bd <= cn^root * bn * scale^root
    bigint rhs = pow_big(coef_.num(), root_) * base_.num() * pow_big(bigint(scale), root_);
    bigint cmul = pow_big(coef_.den(), root_) * base_.den();
    // binary search on s in [0, scale*coef ceiling]; values are tiny, a loop
    // from an isqrt-style initial guess would also do, but this is simplest.
    long long lo = 0, hi = scale + 1;
    // enlarge hi until definitely above (coef may exceed 1)
    while (pow_big(bigint(hi), root_) * cmul <= rhs) hi *= 2;
    while (lo < hi) {
        long long mid = lo + (hi - lo + 1) / 2;
        if (pow_big(bigint(mid), root_) * cmul <= rhs) lo = mid;
        else hi = mid - 1;
    }
    return lo;
}

std::string Threshold::str() const {
    if (root_ == 1 && coef_ == Ratio::integer(1)) return base_.str();
    std::string r = coef_.str() + "*(" + base_.str() + ")";
    if (root_ != 1) r += "^(1/" + std::to_string(root_) + ")";
    return r;
}

bool try_exact_root(const Ratio& x, unsigned m, Ratio& out) {
    if (m == 0) return false;
    if (m == 1) { out = x; return true; }
    if (x.num() < 0) return false;
    auto iroot = [&](const bigint& v, bigint& r) {
        if (v == 0) { r = 0; return true; }
        // Newton-free bracketed search on bit length.
        bigint lo = 1, hi = bigint(1) << (boost::multiprecision::msb(v) / m + 1);
        while (lo < hi) {
            bigint mid = (lo + hi + 1) / 2;
            bigint p = 1;
            for (unsigned i = 0; i < m; ++i) p *= mid;
            if (p <= v) lo = mid;
            else hi = mid - 1;
        }
        bigint p = 1;
        for (unsigned i = 0; i < m; ++i) p *= lo;
        if (p != v) return false;
        r = lo;
        return true;
    };
    bigint rn, rd;
    if (!iroot(x.num(), rn) || !iroot(x.den(), rd)) return false;
    out = Ratio(rn, rd);
    return true;
}

} // namespace hompart
