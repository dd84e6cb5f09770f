#include "routerole/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "routerole/errors.hpp"

namespace routerole {

void Hyperparams::validate() const {
    if (dim < 2) throw InvalidHyperparams("dim must be at least 2");
    if (epochs == 0) throw InvalidHyperparams("epochs must be positive");
    if (batch_size == 0) throw InvalidHyperparams("batch_size must be positive");
    if (!(learning_rate > 0.0)) throw InvalidHyperparams("learning_rate must be positive");
    if (negative_samples == 0) throw InvalidHyperparams("negative_samples must be positive");
    if (!(resolved_floor() > 0.0)) throw InvalidHyperparams("weight_floor must be positive");
    if (resolved_floor() * dim >= 1.0)
        throw InvalidHyperparams("weight_floor too large, dim * floor must stay below 1");
}

EmbeddingModel::EmbeddingModel(std::vector<Asn> asns_ascending, const Hyperparams& hp, Rng& rng)
    : hp_(hp), asns_(std::move(asns_ascending)) {
    hp_.validate();
    if (asns_.empty()) throw EmptyInput("embedding model needs at least one AS");
    if (!std::is_sorted(asns_.begin(), asns_.end()))
        std::sort(asns_.begin(), asns_.end());
    row_.reserve(asns_.size());
    for (uint32_t i = 0; i < asns_.size(); ++i) row_[asns_[i]] = i;

    size_t d = hp_.dim;
    x_.resize(asns_.size() * d);
    double init = 0.5 / static_cast<double>(d);
    for (double& value : x_) value = rng.range(-init, init);

    l_raw_.assign(d, 0.0);
    r_.resize(d);
    for (double& value : r_) value = rng.gaussian();
    renormalize_direction();
    refresh_weights();
}

EmbeddingModel::EmbeddingModel(std::vector<Asn> asns_ascending, const Hyperparams& hp) {
    Rng rng(hp.seed);
    *this = EmbeddingModel(std::move(asns_ascending), hp, rng);
}

uint32_t EmbeddingModel::row_of(Asn asn) const {
    auto it = row_.find(asn);
    if (it == row_.end()) throw UnknownAsn(asn);
    return it->second;
}

void EmbeddingModel::refresh_weights() {
    size_t d = hp_.dim;
    l_.resize(d);
    double mx = l_raw_[0];
    for (double value : l_raw_) mx = std::max(mx, value);
    double sum = 0.0;
    for (size_t i = 0; i < d; ++i) {
        l_[i] = std::exp(l_raw_[i] - mx);
        sum += l_[i];
    }
    double floor = hp_.resolved_floor();
    double scale = (1.0 - static_cast<double>(d) * floor) / sum;
    for (size_t i = 0; i < d; ++i) l_[i] = l_[i] * scale + floor;
}

void EmbeddingModel::renormalize_direction() {
    double norm2 = 0.0;
    for (double value : r_) norm2 += value * value;
    double norm = std::sqrt(norm2);
    if (norm == 0.0) {
        // Degenerate, keep a valid unit vector.
        r_.assign(hp_.dim, 0.0);
        r_[0] = 1.0;
        return;
    }
    for (double& value : r_) value /= norm;
}

double EmbeddingModel::proximity_score_rows(uint32_t u, uint32_t v) const {
    const double* xu = vec(u);
    const double* xv = vec(v);
    double acc = 0.0;
    for (size_t i = 0; i < hp_.dim; ++i) {
        double diff = xv[i] - xu[i];
        acc += l_[i] * diff * diff;
    }
    return acc;
}

double EmbeddingModel::hierarchy_score_rows(uint32_t u, uint32_t v) const {
    const double* xu = vec(u);
    const double* xv = vec(v);
    double acc = 0.0;
    for (size_t i = 0; i < hp_.dim; ++i) acc += (xv[i] - xu[i]) * r_[i];
    return acc;
}

double EmbeddingModel::score_rows(uint32_t u, uint32_t v) const {
    return -proximity_score_rows(u, v) + hierarchy_score_rows(u, v);
}

double EmbeddingModel::pair_difference_rows(uint32_t u, uint32_t v) const {
    return std::abs(proximity_score_rows(u, v)) + std::abs(hierarchy_score_rows(u, v));
}

double EmbeddingModel::proximity_score(Asn u, Asn v) const {
    return proximity_score_rows(row_of(u), row_of(v));
}
double EmbeddingModel::hierarchy_score(Asn u, Asn v) const {
    return hierarchy_score_rows(row_of(u), row_of(v));
}
double EmbeddingModel::score(Asn u, Asn v) const {
    return score_rows(row_of(u), row_of(v));
}
double EmbeddingModel::pair_difference(Asn u, Asn v) const {
    return pair_difference_rows(row_of(u), row_of(v));
}

double EmbeddingModel::hierarchy_projection(Asn u) const {
    const double* xu = vec(row_of(u));
    double acc = 0.0;
    for (size_t i = 0; i < hp_.dim; ++i) acc += xu[i] * r_[i];
    return acc;
}

std::vector<double> EmbeddingModel::rejection(Asn u) const {
    const double* xu = vec(row_of(u));
    double proj = hierarchy_projection(u);
    std::vector<double> out(hp_.dim);
    for (size_t i = 0; i < hp_.dim; ++i) out[i] = xu[i] - proj * r_[i];
    return out;
}

bool EmbeddingModel::operator==(const EmbeddingModel& other) const {
    return asns_ == other.asns_ && x_ == other.x_ && l_raw_ == other.l_raw_ &&
           r_ == other.r_ && hp_.dim == other.hp_.dim;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double ranking_loss(double pos_score, double neg_score) {
    double z = std::clamp(pos_score - neg_score, -kScoreClamp, kScoreClamp);
    // -log sigmoid(z), written to stay accurate for both signs
    return z >= 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

} // namespace routerole
