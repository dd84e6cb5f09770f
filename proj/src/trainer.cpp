#include "routerole/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "routerole/errors.hpp"

namespace routerole {

namespace {

// Shared gradient core. Writes the four per-endpoint position gradients and
// the raw-weight / direction gradients into caller-owned buffers (each dim
// wide) and returns the instance loss.
//
// With delta = x_v - x_u, delta_n = x_nv - x_nu, z = score(u,v) -
// score(nu,nv) clamped, and g = -sigmoid(-z):
//   d/dx_u  = g * (2 delta . l - r)        d/dx_v  = -d/dx_u
//   d/dx_nu = g * (-2 delta_n . l + r)     d/dx_nv = -d/dx_nu
//   d/dl    = g * (delta_n^2 - delta^2)  elementwise squares
//   d/dr    = g * (delta - delta_n)
// The weight gradient is then pushed through l = (1 - dim*floor)*softmax(raw)
// + floor to get the raw-weight gradient.
double gradient_core(const EmbeddingModel& model, uint32_t u, uint32_t v, uint32_t nu,
                     uint32_t nv, double* gxu, double* gxv, double* gxnu, double* gxnv,
                     double* graw, double* gr) {
    const size_t d = model.dim();
    const double* xu = model.vec(u);
    const double* xv = model.vec(v);
    const double* xnu = model.vec(nu);
    const double* xnv = model.vec(nv);
    const std::vector<double>& l = model.weights();
    const std::vector<double>& r = model.direction();

    double pos = 0.0, neg = 0.0;
    for (size_t i = 0; i < d; ++i) {
        double dp = xv[i] - xu[i];
        double dn = xnv[i] - xnu[i];
        pos += -l[i] * dp * dp + dp * r[i];
        neg += -l[i] * dn * dn + dn * r[i];
    }
    double z = std::clamp(pos - neg, -kScoreClamp, kScoreClamp);
    double g = -sigmoid(-z);
    double loss = z >= 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));

    // dL/dl, kept local; chained through the softmax below.
    // Reuse graw as scratch for dL/dl first.
    for (size_t i = 0; i < d; ++i) {
        double dp = xv[i] - xu[i];
        double dn = xnv[i] - xnu[i];
        gxu[i] = g * (2.0 * dp * l[i] - r[i]);
        gxv[i] = -gxu[i];
        gxnu[i] = g * (-2.0 * dn * l[i] + r[i]);
        gxnv[i] = -gxnu[i];
        graw[i] = g * (dn * dn - dp * dp);
        gr[i] = g * (dp - dn);
    }

    // Chain through l = scale * softmax(raw) + floor. The softmax values are
    // recovered from l itself instead of re-exponentiating the raw weights.
    double floor = model.hyper().resolved_floor();
    double scale = 1.0 - static_cast<double>(d) * floor;
    double dot = 0.0;
    for (size_t i = 0; i < d; ++i) dot += graw[i] * (l[i] - floor);
    dot /= scale;
    for (size_t i = 0; i < d; ++i) {
        double s = (l[i] - floor) / scale;
        graw[i] = scale * s * (graw[i] - dot);
    }

    return loss;
}

} // namespace

InstanceGradient instance_gradient(const EmbeddingModel& model, Asn u, Asn v, Asn neg_u,
                                   Asn neg_v) {
    const size_t d = model.dim();
    std::vector<double> gxu(d), gxv(d), gxnu(d), gxnv(d);
    InstanceGradient out;
    out.raw_weights.resize(d);
    out.direction.resize(d);

    uint32_t ur = model.row_of(u), vr = model.row_of(v);
    uint32_t nur = model.row_of(neg_u), nvr = model.row_of(neg_v);
    out.loss = gradient_core(model, ur, vr, nur, nvr, gxu.data(), gxv.data(), gxnu.data(),
                             gxnv.data(), out.raw_weights.data(), out.direction.data());

    auto accumulate = [&](Asn asn, const std::vector<double>& grad) {
        auto [it, inserted] = out.x.try_emplace(asn, std::vector<double>(d, 0.0));
        for (size_t i = 0; i < d; ++i) it->second[i] += grad[i];
    };
    accumulate(u, gxu);
    accumulate(v, gxv);
    accumulate(neg_u, gxnu);
    accumulate(neg_v, gxnv);
    return out;
}

uint64_t training_fingerprint(const AsGraph& graph, const Hyperparams& hyper) {
    uint64_t h = 0xcbf29ce484222325ull; // FNV-1a 64
    auto mix = [&h](uint64_t value) {
        for (int b = 0; b < 8; ++b) {
            h ^= (value >> (b * 8)) & 0xff;
            h *= 0x100000001b3ull;
        }
    };
    mix(graph.vertex_count());
    for (Asn a : graph.asns()) mix(a);
    for (auto [u, v] : graph.edges()) mix((uint64_t(u) << 32) | v);
    mix(hyper.dim);
    mix(hyper.epochs);
    mix(hyper.batch_size);
    mix(hyper.negative_samples);
    uint64_t lr_bits, floor_bits;
    double lr = hyper.learning_rate, floor = hyper.resolved_floor();
    static_assert(sizeof lr_bits == sizeof lr);
    std::memcpy(&lr_bits, &lr, 8);
    std::memcpy(&floor_bits, &floor, 8);
    mix(lr_bits);
    mix(floor_bits);
    mix(hyper.seed);
    return h;
}

EmbeddingModel train(const AsGraph& graph, const Hyperparams& hyper, TrainReport* report,
                     const StepObserver& observer) {
    hyper.validate();
    if (graph.vertex_count() < 2) throw EmptyInput("training needs at least two ASes");
    const auto& edges = graph.edges();
    if (edges.empty()) throw EmptyInput("training needs at least one edge");

    Rng rng(hyper.seed);
    EmbeddingModel model(graph.asns(), hyper, rng);
    model.set_data_fingerprint(training_fingerprint(graph, hyper));

    const size_t d = hyper.dim;
    const size_t n = graph.vertex_count();
    const uint32_t q = hyper.negative_samples;

    // Batch accumulators. Position gradients go into a dense buffer with a
    // touched-row list so only dirty rows get cleared between steps.
    std::vector<double> batch_x(n * d, 0.0);
    std::vector<uint32_t> touched;
    std::vector<char> is_touched(n, 0);
    std::vector<double> batch_raw(d, 0.0), batch_r(d, 0.0);
    std::vector<double> gxu(d), gxv(d), gxnu(d), gxnv(d), graw(d), gr(d);

    uint64_t steps = 0, instances_total = 0, redraws = 0;
    size_t batch_fill = 0;
    const double lr = hyper.learning_rate;

    auto touch = [&](uint32_t row) {
        if (!is_touched[row]) {
            is_touched[row] = 1;
            touched.push_back(row);
        }
    };
    auto add_row = [&](uint32_t row, const double* grad) {
        touch(row);
        double* dst = batch_x.data() + size_t(row) * d;
        for (size_t i = 0; i < d; ++i) dst[i] += grad[i];
    };
    auto apply_step = [&]() {
        if (batch_fill == 0) return;
        for (uint32_t row : touched) {
            double* x = model.vec_mut(row);
            double* gacc = batch_x.data() + size_t(row) * d;
            for (size_t i = 0; i < d; ++i) {
                x[i] -= lr * gacc[i];
                gacc[i] = 0.0;
            }
            is_touched[row] = 0;
        }
        touched.clear();
        std::vector<double>& raw = model.raw_weights_mut();
        std::vector<double>& dir = model.direction_mut();
        for (size_t i = 0; i < d; ++i) {
            raw[i] -= lr * batch_raw[i];
            dir[i] -= lr * batch_r[i];
            batch_raw[i] = 0.0;
            batch_r[i] = 0.0;
        }
        model.renormalize_direction();
        model.refresh_weights();
        batch_fill = 0;
        ++steps;
        if (observer) observer(model, steps);
    };

    std::vector<size_t> order(edges.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    if (report) report->epoch_mean_loss.reserve(hyper.epochs);
    for (uint32_t epoch = 0; epoch < hyper.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        uint64_t epoch_instances = 0;
        for (size_t oi : order) {
            auto [u, v] = edges[oi];
            for (uint32_t k = 0; k < q; ++k) {
                uint32_t nu, nv;
                while (true) {
                    nu = static_cast<uint32_t>(rng.below(n));
                    nv = static_cast<uint32_t>(rng.below(n));
                    if (nu != nv && !graph.has_edge_idx(nu, nv)) break;
                    ++redraws;
                }
                double loss = gradient_core(model, u, v, nu, nv, gxu.data(), gxv.data(),
                                            gxnu.data(), gxnv.data(), graw.data(), gr.data());
                add_row(u, gxu.data());
                add_row(v, gxv.data());
                add_row(nu, gxnu.data());
                add_row(nv, gxnv.data());
                for (size_t i = 0; i < d; ++i) {
                    batch_raw[i] += graw[i];
                    batch_r[i] += gr[i];
                }
                epoch_loss += loss;
                ++epoch_instances;
                ++batch_fill;
                if (batch_fill == hyper.batch_size) apply_step();
            }
        }
        apply_step(); // trailing partial batch
        instances_total += epoch_instances;
        if (report)
            report->epoch_mean_loss.push_back(
                epoch_instances ? epoch_loss / static_cast<double>(epoch_instances) : 0.0);
    }

    if (report) {
        report->steps = steps;
        report->instances = instances_total;
        report->negative_redraws = redraws;
    }
    return model;
}

} // namespace routerole
