#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "routerole/asn.hpp"
#include "routerole/rng.hpp"

namespace routerole {

struct Hyperparams {
    uint32_t dim = 128;
    uint32_t epochs = 1000;
    uint32_t batch_size = 1024;   // gradient is summed over the batch
    double learning_rate = 1e-5;
    uint32_t negative_samples = 10; // negatives drawn per positive edge
    // Lower bound kept on every proximity weight so the weighted squared
    // distance never ignores a dimension completely. 0 means the default
    // (1/dim) * 1e-6.
    double weight_floor = 0.0;
    uint64_t seed = 1;

    double resolved_floor() const {
        return weight_floor > 0.0 ? weight_floor : (1.0 / dim) * 1e-6;
    }
    void validate() const; // throws InvalidHyperparams
};

// Learned representation of the AS topology. Each AS gets a position vector;
// two global parameters shape how positions are read:
//   weights  l: per-dimension proximity weights, l = (1 - dim*floor) *
//               softmax(raw) + floor, so l stays strictly positive and sums
//               to one no matter what the raw values are
//   direction r: unit vector along which provider/customer hierarchy grows
//
// proximity_score  (x_v - x_u)^T ((x_v - x_u) . l)   weighted squared distance
// hierarchy_score  (x_v - x_u)^T r                   signed, antisymmetric
// score            -proximity + hierarchy            training objective
// pair_difference  |proximity| + |hierarchy|         dissimilarity for detection
class EmbeddingModel {
public:
    EmbeddingModel() = default;
    // Seeded initialization: positions uniform in [-0.5/dim, 0.5/dim],
    // raw weights zero, direction a random unit vector.
    EmbeddingModel(std::vector<Asn> asns_ascending, const Hyperparams& hp, Rng& rng);
    EmbeddingModel(std::vector<Asn> asns_ascending, const Hyperparams& hp);

    size_t size() const { return asns_.size(); }
    uint32_t dim() const { return hp_.dim; }
    const Hyperparams& hyper() const { return hp_; }

    bool contains(Asn asn) const { return row_.count(asn) != 0; }
    uint32_t row_of(Asn asn) const; // throws UnknownAsn
    const std::vector<Asn>& asns() const { return asns_; }

    const double* vec(uint32_t row) const { return x_.data() + size_t(row) * hp_.dim; }
    double* vec_mut(uint32_t row) { return x_.data() + size_t(row) * hp_.dim; }

    const std::vector<double>& weights() const { return l_; }
    const std::vector<double>& raw_weights() const { return l_raw_; }
    std::vector<double>& raw_weights_mut() { return l_raw_; }
    const std::vector<double>& direction() const { return r_; }
    std::vector<double>& direction_mut() { return r_; }

    // Recomputes the derived weights after raw weights change.
    void refresh_weights();
    void renormalize_direction();

    double proximity_score(Asn u, Asn v) const;
    double hierarchy_score(Asn u, Asn v) const;
    double score(Asn u, Asn v) const;
    double pair_difference(Asn u, Asn v) const;

    double proximity_score_rows(uint32_t u, uint32_t v) const;
    double hierarchy_score_rows(uint32_t u, uint32_t v) const;
    double score_rows(uint32_t u, uint32_t v) const;
    double pair_difference_rows(uint32_t u, uint32_t v) const;

    // Component of x_u along the hierarchy direction, and the remainder.
    double hierarchy_projection(Asn u) const;
    std::vector<double> rejection(Asn u) const;

    uint64_t data_fingerprint() const { return fingerprint_; }
    void set_data_fingerprint(uint64_t fp) { fingerprint_ = fp; }

    bool operator==(const EmbeddingModel& other) const;

private:
    friend EmbeddingModel load_model(const std::string& path);

    Hyperparams hp_;
    std::vector<Asn> asns_;
    std::unordered_map<Asn, uint32_t> row_;
    std::vector<double> x_;     // size * dim, row-major
    std::vector<double> l_raw_; // dim
    std::vector<double> l_;     // dim, derived
    std::vector<double> r_;     // dim
    uint64_t fingerprint_ = 0;
};

// Scores past this magnitude saturate the logistic; clamping keeps the loss
// finite without visibly changing it.
inline constexpr double kScoreClamp = 30.0;

double sigmoid(double z);
// -log sigmoid(pos - neg) with the argument clamped to +-kScoreClamp.
double ranking_loss(double pos_score, double neg_score);

} // namespace routerole
