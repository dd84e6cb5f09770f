#pragma once

#include <functional>
#include <map>
#include <vector>

#include "routerole/as_graph.hpp"
#include "routerole/embedding.hpp"

namespace routerole {

// Gradient of the ranking loss for one (positive edge, negative pair)
// instance. Position gradients are accumulated per distinct AS, so an AS
// shared between the two edges appears once with the summed contribution;
// ASes not involved are absent (their gradient is zero).
struct InstanceGradient {
    std::map<Asn, std::vector<double>> x;
    std::vector<double> raw_weights;
    std::vector<double> direction;
    double loss = 0.0;
};

InstanceGradient instance_gradient(const EmbeddingModel& model, Asn u, Asn v, Asn neg_u,
                                   Asn neg_v);

struct TrainReport {
    std::vector<double> epoch_mean_loss;
    uint64_t steps = 0;
    uint64_t instances = 0;
    uint64_t negative_redraws = 0;
};

// Called after every optimizer step, once the direction has been
// renormalized and the weights recomputed.
using StepObserver = std::function<void(const EmbeddingModel&, uint64_t step)>;

// SGD over all directed edges. Each epoch walks the edges in a seeded
// shuffled order; every edge contributes hyper.negative_samples instances
// whose negative pairs are drawn uniformly and redrawn while they collide
// with an existing edge or a self-pair. Gradients are summed over
// batch_size instances per step. A trailing partial batch is flushed at the
// end of each epoch. Same graph + same hyperparameters -> bit-identical
// model.
EmbeddingModel train(const AsGraph& graph, const Hyperparams& hyper,
                     TrainReport* report = nullptr, const StepObserver& observer = {});

// Fingerprint of the training input recorded inside the model file.
uint64_t training_fingerprint(const AsGraph& graph, const Hyperparams& hyper);

} // namespace routerole
