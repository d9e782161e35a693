#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lobsim {

struct MannWhitney {
    double u = 0.0;  // statistic of the first sample
    double p = 1.0;  // two-sided
    bool exact = false;
};

/// Rank-sum test with midranks for ties. The p-value is exact (full permutation
/// distribution of the tied ranks) when n1 + n2 < exact_limit, otherwise the normal
/// approximation with tie-corrected variance and continuity correction.
/// Throws std::invalid_argument on an empty sample.
MannWhitney mann_whitney_u(std::span<const double> x, std::span<const double> y, std::size_t exact_limit = 20);

/// Box-and-whisker summary. Quartiles are Tukey hinges (medians of the lower and
/// upper halves, the median included in both when n is odd); whiskers reach the
/// most extreme data within 1.5 IQR of the hinges.
struct BoxSummary {
    std::size_t n = 0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;  // ascending
};

/// Throws std::invalid_argument on empty input.
BoxSummary box_summary(std::span<const double> data);

struct MeanCi {
    double mean = 0.0;
    double low = 0.0;
    double high = 0.0;
};

/// Student-t confidence interval on the mean. Throws std::invalid_argument for n < 2.
MeanCi mean_ci(std::span<const double> data, double level = 0.95);

double median_of_sorted(std::span<const double> sorted);

}  // namespace lobsim
