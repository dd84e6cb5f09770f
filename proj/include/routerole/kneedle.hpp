#pragma once

#include <cstddef>
#include <vector>

namespace routerole {

struct KneeResult {
    double value = 0.0;
    bool fallback = false; // true when history was too thin to calibrate
};

// Knee of the empirical CDF of a sample, for picking "where the bulk ends"
// thresholds without tuning. Sorted sample values are the x axis, their
// normalized ranks the y axis; both axes are min-max normalized and the knee
// is the sample value maximizing y - x (the curve is concave increasing for
// a bottom-heavy distribution). Ties resolve to the smallest maximizer, a
// constant sample knees at that constant, and fewer than min_samples values
// yield the fallback, flagged.
KneeResult knee_of_cdf(std::vector<double> sample, double fallback_value,
                       size_t min_samples = 20);

// Value at or below which quantile q (0..1) of the sample sits.
double quantile_of(std::vector<double> sample, double q);

} // namespace routerole
