#include "lobsim/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace lobsim {

namespace {

// Doubled midranks of the pooled sample, so tied ranks stay integral.
std::vector<long> doubled_ranks(const std::vector<double>& pooled, std::vector<long>& tie_sizes) {
    std::vector<std::size_t> idx(pooled.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pooled[a] < pooled[b]; });
    std::vector<long> ranks(pooled.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && pooled[idx[j + 1]] == pooled[idx[i]]) ++j;
        const long doubled = static_cast<long>(i + 1 + j + 1);  // 2 * midrank
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = doubled;
        tie_sizes.push_back(static_cast<long>(j - i + 1));
        i = j + 1;
    }
    return ranks;
}

double exact_p(const std::vector<long>& ranks, std::size_t n1, long observed) {
    // ways[k][s]: subsets of size k with doubled rank sum s.
    long total = 0;
    for (long r : ranks) total += r;
    std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    ways[0][0] = 1.0;
    for (long r : ranks) {
        for (std::size_t k = n1; k >= 1; --k) {
            auto& row = ways[k];
            const auto& prev = ways[k - 1];
            for (long s = total; s >= r; --s) row[s] += prev[s - r];
        }
    }
    const auto n2 = ranks.size() - n1;
    // Centre of the doubled rank-sum distribution is n1 (N + 1).
    const long centre = static_cast<long>(n1 * (n1 + n2 + 1));
    const long dev = std::abs(observed - centre);
    double hit = 0.0;
    double all = 0.0;
    for (long s = 0; s <= total; ++s) {
        const double w = ways[n1][s];
        if (w == 0.0) continue;
        all += w;
        if (std::abs(s - centre) >= dev) hit += w;
    }
    return std::min(1.0, hit / all);
}

}  // namespace

MannWhitney mann_whitney_u(std::span<const double> x, std::span<const double> y, std::size_t exact_limit) {
    if (x.empty() || y.empty()) throw std::invalid_argument("mann_whitney_u: empty sample");
    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    std::vector<long> ties;
    const auto ranks = doubled_ranks(pooled, ties);
    const double n1 = static_cast<double>(x.size());
    const double n2 = static_cast<double>(y.size());
    long rx2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) rx2 += ranks[i];

    MannWhitney out;
    out.u = static_cast<double>(rx2) / 2.0 - n1 * (n1 + 1.0) / 2.0;
    if (pooled.size() < exact_limit) {
        out.exact = true;
        out.p = exact_p(ranks, x.size(), rx2);
        return out;
    }
    const double n = n1 + n2;
    double tie_term = 0.0;
    for (long t : ties) tie_term += static_cast<double>(t * t * t - t);
    const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (var <= 0.0) return out;
    const double z = std::max(0.0, std::abs(out.u - n1 * n2 / 2.0) - 0.5) / std::sqrt(var);
    out.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    return out;
}

double median_of_sorted(std::span<const double> s) {
    if (s.empty()) throw std::invalid_argument("median of empty data");
    const auto n = s.size();
    return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

BoxSummary box_summary(std::span<const double> data) {
    if (data.empty()) throw std::invalid_argument("box_summary: empty data");
    std::vector<double> s(data.begin(), data.end());
    std::sort(s.begin(), s.end());
    const auto n = s.size();
    BoxSummary b;
    b.n = n;
    b.median = median_of_sorted(s);
    const auto half = (n + 1) / 2;
    b.q1 = median_of_sorted(std::span(s).first(half));
    b.q3 = median_of_sorted(std::span(s).last(half));
    const double fence = 1.5 * (b.q3 - b.q1);
    const double lo = b.q1 - fence;
    const double hi = b.q3 + fence;
    b.whisker_low = b.q1;
    b.whisker_high = b.q3;
    for (double v : s) {
        if (v < lo || v > hi) {
            b.outliers.push_back(v);
            continue;
        }
        b.whisker_low = std::min(b.whisker_low, v);
        b.whisker_high = std::max(b.whisker_high, v);
    }
    return b;
}

MeanCi mean_ci(std::span<const double> data, double level) {
    if (data.size() < 2) throw std::invalid_argument("mean_ci: need at least two values");
    const double n = static_cast<double>(data.size());
    const double mean = std::accumulate(data.begin(), data.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : data) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (n - 1.0) / n);
    const boost::math::students_t dist(n - 1.0);
    const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - level) / 2.0));
    return {mean, mean - t * se, mean + t * se};
}

}  // namespace lobsim
