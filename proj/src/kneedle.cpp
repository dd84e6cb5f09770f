#include "routerole/kneedle.hpp"

#include <algorithm>
#include <cmath>

namespace routerole {

KneeResult knee_of_cdf(std::vector<double> sample, double fallback_value, size_t min_samples) {
    if (sample.size() < min_samples || sample.size() < 2)
        return {fallback_value, true};
    std::sort(sample.begin(), sample.end());

    const size_t n = sample.size();
    double lo = sample.front(), hi = sample.back();
    if (lo == hi) return {lo, false};

    double best = -1.0;
    size_t best_idx = 0;
    for (size_t i = 0; i < n; ++i) {
        double x = (sample[i] - lo) / (hi - lo);
        double y = static_cast<double>(i) / static_cast<double>(n - 1);
        double d = y - x;
        if (d > best) { // strictly greater keeps the smallest maximizer
            best = d;
            best_idx = i;
        }
    }
    return {sample[best_idx], false};
}

double quantile_of(std::vector<double> sample, double q) {
    if (sample.empty()) return 0.0;
    std::sort(sample.begin(), sample.end());
    q = std::clamp(q, 0.0, 1.0);
    size_t idx = static_cast<size_t>(std::ceil(q * static_cast<double>(sample.size())));
    if (idx > 0) --idx;
    return sample[std::min(idx, sample.size() - 1)];
}

} // namespace routerole
