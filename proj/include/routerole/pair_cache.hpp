#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <utility>

#include "routerole/embedding.hpp"

namespace routerole {

// Memoizes pair differences keyed on the unordered ASN pair (the measure is
// symmetric). Safe for concurrent readers; lookups take a shared lock and
// only a miss upgrades to exclusive. Pairs involving an AS missing from the
// model resolve to the configured unknown-pair score and are not cached, so
// a recalibrated sentinel takes effect immediately.
//
// A second level memoizes whole path-pair scores. Route churn mostly flaps
// between the same few paths per prefix, so at steady state the full
// alignment is a single lookup instead of a table fill.
class PairDiffCache {
public:
    explicit PairDiffCache(const EmbeddingModel& model) : model_(&model) {}

    void set_unknown_score(std::optional<double> score) {
        std::unique_lock lock(mutex_);
        unknown_score_ = score;
    }
    std::optional<double> unknown_score() const {
        std::shared_lock lock(mutex_);
        return unknown_score_;
    }

    // Throws UnknownAsn when an AS is missing and no unknown score is set.
    double get(Asn u, Asn v) {
        if (!model_->contains(u) || !model_->contains(v)) {
            unknown_.fetch_add(1, std::memory_order_relaxed);
            std::shared_lock lock(mutex_);
            if (unknown_score_) return *unknown_score_;
            throw UnknownAsn(model_->contains(u) ? v : u);
        }
        uint64_t key = pack(u, v);
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) {
                hits_.fetch_add(1, std::memory_order_relaxed);
                return it->second;
            }
        }
        double value = model_->pair_difference(u, v);
        misses_.fetch_add(1, std::memory_order_relaxed);
        std::unique_lock lock(mutex_);
        cache_.emplace(key, value);
        return value;
    }

    double operator()(Asn u, Asn v) { return get(u, v); }

    std::optional<double> path_score(const AsPath& a, const AsPath& b) const {
        PathPair key{a, b};
        std::shared_lock lock(mutex_);
        auto it = paths_.find(key);
        if (it == paths_.end()) {
            path_misses_.fetch_add(1, std::memory_order_relaxed);
            return std::nullopt;
        }
        path_hits_.fetch_add(1, std::memory_order_relaxed);
        return it->second;
    }
    void store_path_score(const AsPath& a, const AsPath& b, double score) {
        std::unique_lock lock(mutex_);
        paths_.emplace(PathPair{a, b}, score);
    }

    struct Stats {
        uint64_t hits = 0;
        uint64_t misses = 0;
        uint64_t unknown_pairs = 0;
        uint64_t path_hits = 0;
        uint64_t path_misses = 0;
        double hit_ratio() const {
            uint64_t total = hits + misses;
            return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
        }
    };
    Stats stats() const {
        return {hits_.load(), misses_.load(), unknown_.load(), path_hits_.load(),
                path_misses_.load()};
    }

    size_t size() const {
        std::shared_lock lock(mutex_);
        return cache_.size();
    }
    void clear() {
        std::unique_lock lock(mutex_);
        cache_.clear();
        paths_.clear();
    }

private:
    static uint64_t pack(Asn u, Asn v) {
        if (u > v) std::swap(u, v);
        return (uint64_t(u) << 32) | v;
    }

    struct PathPair {
        AsPath old_path, new_path;
        bool operator==(const PathPair& o) const {
            return old_path == o.old_path && new_path == o.new_path;
        }
    };
    struct PathPairHash {
        size_t operator()(const PathPair& p) const {
            uint64_t h = 1469598103934665603ull;
            auto mix = [&](uint64_t x) {
                h ^= x;
                h *= 1099511628211ull;
            };
            for (Asn a : p.old_path) mix(a);
            mix(0xffffffffull); // keeps ([a,b],[c]) apart from ([a],[b,c])
            for (Asn a : p.new_path) mix(a);
            return size_t(h);
        }
    };

    const EmbeddingModel* model_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<uint64_t, double> cache_;
    std::unordered_map<PathPair, double, PathPairHash> paths_;
    std::optional<double> unknown_score_;
    std::atomic<uint64_t> hits_{0}, misses_{0}, unknown_{0};
    mutable std::atomic<uint64_t> path_hits_{0}, path_misses_{0};
};

// Convenience wrapper matching the call style of the scoring templates.
inline double cached_pair_diff(PairDiffCache& cache, Asn u, Asn v) { return cache.get(u, v); }

} // namespace routerole
