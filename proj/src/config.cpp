#include "routerole/config.hpp"

#include <cmath>

namespace routerole {

void DetectorConfig::validate() const {
    if (window_s <= 0) throw ConfigError("window must be positive");
    if (lookback_s <= 0) throw ConfigError("lookback must be positive");
    if (distance_threshold && !std::isfinite(*distance_threshold))
        throw ConfigError("pinned distance threshold must be finite");
    if (distance_threshold && *distance_threshold < 0)
        throw ConfigError("pinned distance threshold must be nonnegative");
    if (unknown_pair_score && (!std::isfinite(*unknown_pair_score) || *unknown_pair_score < 0))
        throw ConfigError("pinned unknown-pair score must be a nonnegative number");
    if (unknown_fallback < 0 || !std::isfinite(unknown_fallback))
        throw ConfigError("unknown-pair fallback must be a nonnegative number");
    if (min_calibration_samples == 0) throw ConfigError("calibration needs at least one sample");
    if (skew_allowance_s < 0) throw ConfigError("skew allowance cannot be negative");
}

} // namespace routerole
