// Distribution comparison helpers: total-variation distance and chi-square
// tests with small-expectation pooling.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "mbqc/errors.hpp"

namespace mbqc {

namespace detail {

// Regularized upper incomplete gamma Q(a, x), series / continued fraction.
inline double gammq(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw error("gammq: bad arguments");
    if (x == 0.0) return 1.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // lower series, return 1 - P
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Lentz continued fraction for Q directly
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

} // namespace detail

// Survival function of the chi-square distribution.
inline double chi2_sf(double chi2, int dof) {
    if (dof < 1) return 1.0;
    return detail::gammq(dof / 2.0, chi2 / 2.0);
}

// (1/2) sum |p_hat - p| over the union support.
inline double tv_distance(const std::map<std::uint64_t, long>& counts, long shots,
                          const std::map<std::uint64_t, double>& probs) {
    double acc = 0.0;
    for (const auto& [k, c] : counts) {
        auto it = probs.find(k);
        const double p = it == probs.end() ? 0.0 : it->second;
        acc += std::abs(double(c) / double(shots) - p);
    }
    for (const auto& [k, p] : probs)
        if (!counts.count(k)) acc += p;
    return acc / 2.0;
}

// Goodness-of-fit p-value of observed counts against a model distribution.
// Cells with expected count below min_expected are pooled.
inline double chi2_gof_pvalue(const std::map<std::uint64_t, long>& counts, long shots,
                              const std::map<std::uint64_t, double>& probs,
                              double min_expected = 5.0) {
    long outside = 0;
    for (const auto& [k, c] : counts)
        if (!probs.count(k)) outside += c;
    if (outside > 0) return 0.0; // support violation: impossible outcomes seen

    std::vector<std::pair<double, long>> cells; // expected, observed
    double pooled_e = 0.0;
    long pooled_o = 0;
    for (const auto& [k, p] : probs) {
        const double e = p * double(shots);
        auto it = counts.find(k);
        const long o = it == counts.end() ? 0 : it->second;
        if (e < min_expected) {
            pooled_e += e;
            pooled_o += o;
        } else {
            cells.emplace_back(e, o);
        }
    }
    if (pooled_e > 0.0) cells.emplace_back(pooled_e, pooled_o);
    if (cells.size() < 2) return 1.0;
    double chi2 = 0.0;
    for (const auto& [e, o] : cells) chi2 += (double(o) - e) * (double(o) - e) / e;
    return chi2_sf(chi2, int(cells.size()) - 1);
}

// Two-sample homogeneity test over the union support.
inline double chi2_two_sample_pvalue(const std::map<std::uint64_t, long>& a, long na,
                                     const std::map<std::uint64_t, long>& b, long nb,
                                     double min_expected = 5.0) {
    std::map<std::uint64_t, std::pair<long, long>> joint;
    for (const auto& [k, c] : a) joint[k].first = c;
    for (const auto& [k, c] : b) joint[k].second = c;
    const double fa = double(na) / double(na + nb);
    const double fb = double(nb) / double(na + nb);

    std::vector<std::array<double, 4>> cells; // ea, oa, eb, ob
    std::array<double, 4> pooled = {0, 0, 0, 0};
    for (const auto& [k, oc] : joint) {
        const double tot = double(oc.first + oc.second);
        const std::array<double, 4> cell = {tot * fa, double(oc.first), tot * fb,
                                            double(oc.second)};
        if (cell[0] < min_expected || cell[2] < min_expected) {
            for (int i = 0; i < 4; ++i) pooled[i] += cell[i];
        } else {
            cells.push_back(cell);
        }
    }
    if (pooled[0] + pooled[2] > 0.0) cells.push_back(pooled);
    if (cells.size() < 2) return 1.0;
    double chi2 = 0.0;
    for (const auto& c : cells) {
        if (c[0] > 0.0) chi2 += (c[1] - c[0]) * (c[1] - c[0]) / c[0];
        if (c[2] > 0.0) chi2 += (c[3] - c[2]) * (c[3] - c[2]) / c[2];
    }
    return chi2_sf(chi2, int(cells.size()) - 1);
}

} // namespace mbqc
