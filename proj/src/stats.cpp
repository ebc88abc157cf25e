#include "feqlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "feqlab/rng.hpp"

namespace feqlab::stats {

namespace {

constexpr std::size_t kLeafSize = 32;

} // namespace

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= kLeafSize) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

Moments moments(std::span<const double> v) {
    Moments m;
    m.n = v.size();
    if (m.n == 0) return m;
    m.mean = pairwise_sum(v) / static_cast<double>(m.n);

    std::vector<double> p2(m.n), p3(m.n), p4(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        const double d = v[i] - m.mean;
        p2[i] = d * d;
        p3[i] = d * d * d;
        p4[i] = d * d * d * d;
        m.max_abs = std::max(m.max_abs, std::fabs(v[i]));
    }
    const double nd = static_cast<double>(m.n);
    const double m2 = pairwise_sum(p2) / nd;
    const double m3 = pairwise_sum(p3) / nd;
    const double m4 = pairwise_sum(p4) / nd;
    m.sd = m.n > 1 ? std::sqrt(pairwise_sum(p2) / (nd - 1.0)) : 0.0;
    if (m2 > 0.0) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.ex_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return m;
}

double correlation(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const double ma = pairwise_sum(a) / static_cast<double>(n);
    const double mb = pairwise_sum(b) / static_cast<double>(n);
    std::vector<double> ab(n), aa(n), bb(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        ab[i] = da * db;
        aa[i] = da * da;
        bb[i] = db * db;
    }
    const double sab = pairwise_sum(ab);
    const double saa = pairwise_sum(aa);
    const double sbb = pairwise_sum(bb);
    return sab / std::sqrt(saa * sbb);
}

double ks_distance_normal(std::span<const double> sorted, double mean, double sd) {
    const double n = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double F = rng::normal_cdf((sorted[i] - mean) / sd);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        sup = std::max({sup, std::fabs(F - lo), std::fabs(hi - F)});
    }
    return sup;
}

double ks_distance_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b) {
    const double na = static_cast<double>(sorted_a.size());
    const double nb = static_cast<double>(sorted_b.size());
    std::size_t ia = 0, ib = 0;
    double sup = 0.0;
    while (ia < sorted_a.size() && ib < sorted_b.size()) {
        const double v = std::min(sorted_a[ia], sorted_b[ib]);
        while (ia < sorted_a.size() && sorted_a[ia] <= v) ++ia;
        while (ib < sorted_b.size() && sorted_b[ib] <= v) ++ib;
        sup = std::max(sup, std::fabs(static_cast<double>(ia) / na -
                                      static_cast<double>(ib) / nb));
    }
    return sup;
}

} // namespace feqlab::stats
