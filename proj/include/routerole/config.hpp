#pragma once

#include <cstdint>
#include <optional>

#include "routerole/errors.hpp"

namespace routerole {

// Detection-side knobs. Thresholds default to self-calibration; pinning one
// turns the corresponding calibration off. Times are in seconds.
struct DetectorConfig {
    int64_t window_s = 7200;   // event quiet window, also the recalibration period
    int64_t lookback_s = 7200; // history the calibrations draw from

    std::optional<double> distance_threshold;  // pin th_d instead of knee calibration
    std::optional<uint32_t> vantage_threshold; // pin th_v likewise
    std::optional<double> unknown_pair_score;  // pin the unknown-ASN sentinel

    uint32_t vantage_fallback = 2;       // th_v before enough event history exists
    double unknown_fallback = 1.0;       // sentinel before enough score history exists
    uint32_t min_calibration_samples = 20;

    bool collapse_prepend = true;
    int64_t skew_allowance_s = 0;

    void validate() const; // throws ConfigError
};

} // namespace routerole
