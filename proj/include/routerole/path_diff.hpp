#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "routerole/asn.hpp"
#include "routerole/errors.hpp"

namespace routerole {

using AsPath = std::vector<Asn>;

// Path as it arrives off the wire, before cleanup.
struct RawPath {
    std::vector<Asn> asns;
    bool has_as_set = false;
};

// Cleans an announced path for comparison. collapse_prepend removes
// consecutive duplicates (prepending); non-consecutive repeats are kept, a
// poisoned path should stay visible. Throws EmptyPath / ContainsAsSet.
AsPath preprocess_path(const RawPath& raw, bool collapse_prepend);
AsPath preprocess_path(const std::vector<Asn>& asns, bool collapse_prepend);

// (m+1) x (n+1) dynamic-programming table; row 0 / column 0 are the +inf
// border except the 0,0 corner.
struct DiffMatrix {
    size_t rows = 0, cols = 0;
    std::vector<double> cells;
    double& at(size_t i, size_t j) { return cells[i * cols + j]; }
    double at(size_t i, size_t j) const { return cells[i * cols + j]; }
};

// Pairing sequence from (1,1) to (m,n), 1-based positions into the two paths.
using Alignment = std::vector<std::pair<size_t, size_t>>;

// Difference between two AS paths: both paths are consumed front to back and
// every AS must be paired with at least one AS of the other path, pairings
// may not cross, and the first/last elements pair with each other. The score
// is the minimum total pair difference over all such pairings, found by the
// usual warping recurrence
//   DIFF[i][j] = diff(a[i], b[j]) + min(DIFF[i-1][j], DIFF[i][j-1], DIFF[i-1][j-1])
// When backtracking an alignment, ties prefer the diagonal, then (i, j-1),
// then (i-1, j).
template <typename DiffFn>
double path_diff_score(DiffFn&& diff, const AsPath& a, const AsPath& b,
                       DiffMatrix* matrix_out = nullptr, Alignment* alignment_out = nullptr) {
    if (a.empty() || b.empty()) throw EmptyPath("cannot score an empty path");
    const size_t m = a.size(), n = b.size();
    const double inf = std::numeric_limits<double>::infinity();

    DiffMatrix local;
    DiffMatrix& dp = matrix_out ? *matrix_out : local;
    dp.rows = m + 1;
    dp.cols = n + 1;
    dp.cells.assign(dp.rows * dp.cols, inf);
    dp.at(0, 0) = 0.0;

    for (size_t i = 1; i <= m; ++i) {
        for (size_t j = 1; j <= n; ++j) {
            double best = std::min(dp.at(i - 1, j), std::min(dp.at(i, j - 1), dp.at(i - 1, j - 1)));
            dp.at(i, j) = diff(a[i - 1], b[j - 1]) + best;
        }
    }

    if (alignment_out) {
        Alignment rev;
        size_t i = m, j = n;
        rev.emplace_back(i, j);
        while (i != 1 || j != 1) {
            double diag = dp.at(i - 1, j - 1), left = dp.at(i, j - 1), up = dp.at(i - 1, j);
            if (diag <= left && diag <= up) {
                --i; --j;
            } else if (left <= up) {
                --j;
            } else {
                --i;
            }
            rev.emplace_back(i, j);
        }
        alignment_out->assign(rev.rbegin(), rev.rend());
    }
    return dp.at(m, n);
}

} // namespace routerole
