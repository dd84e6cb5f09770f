#include "routerole/model_io.hpp"

#include <cstring>
#include <fstream>

#include "routerole/errors.hpp"

namespace routerole {

namespace {

constexpr char kMagic[8] = {'R', 'R', 'E', 'M', 'B', 'E', 'D', '1'};

template <typename T>
void put(std::ostream& out, T value) {
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
    char buf[sizeof(T)];
    in.read(buf, sizeof(T));
    if (!in) throw CorruptModel("truncated model file " + path);
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

void put_doubles(std::ostream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_doubles(std::istream& in, std::vector<double>& v, const std::string& path) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw CorruptModel("truncated model file " + path);
}

} // namespace

void save_model(const std::string& path, const EmbeddingModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model file " + path);

    out.write(kMagic, sizeof(kMagic));
    const Hyperparams& hp = model.hyper();
    put<uint32_t>(out, hp.dim);
    put<uint64_t>(out, model.size());
    put<uint32_t>(out, hp.epochs);
    put<uint32_t>(out, hp.batch_size);
    put<uint32_t>(out, hp.negative_samples);
    put<double>(out, hp.learning_rate);
    put<double>(out, hp.weight_floor);
    put<uint64_t>(out, hp.seed);
    put<uint64_t>(out, model.data_fingerprint());
    for (Asn a : model.asns()) put<uint32_t>(out, a);
    for (uint32_t row = 0; row < model.size(); ++row)
        out.write(reinterpret_cast<const char*>(model.vec(row)),
                  static_cast<std::streamsize>(size_t(hp.dim) * sizeof(double)));
    put_doubles(out, model.raw_weights());
    put_doubles(out, model.direction());
    if (!out) throw IoError("short write to model file " + path);
}

EmbeddingModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file " + path);

    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw CorruptModel("not a model file: " + path);

    EmbeddingModel model;
    model.hp_.dim = get<uint32_t>(in, path);
    uint64_t count = get<uint64_t>(in, path);
    model.hp_.epochs = get<uint32_t>(in, path);
    model.hp_.batch_size = get<uint32_t>(in, path);
    model.hp_.negative_samples = get<uint32_t>(in, path);
    model.hp_.learning_rate = get<double>(in, path);
    model.hp_.weight_floor = get<double>(in, path);
    model.hp_.seed = get<uint64_t>(in, path);
    model.fingerprint_ = get<uint64_t>(in, path);
    if (model.hp_.dim < 2 || count == 0)
        throw CorruptModel("implausible header in model file " + path);

    model.asns_.resize(count);
    for (uint64_t i = 0; i < count; ++i) model.asns_[i] = get<uint32_t>(in, path);
    model.row_.reserve(count);
    for (uint32_t i = 0; i < count; ++i) model.row_[model.asns_[i]] = i;

    model.x_.resize(count * model.hp_.dim);
    get_doubles(in, model.x_, path);
    model.l_raw_.resize(model.hp_.dim);
    get_doubles(in, model.l_raw_, path);
    model.r_.resize(model.hp_.dim);
    get_doubles(in, model.r_, path);

    char extra;
    if (in.read(&extra, 1)) throw CorruptModel("trailing bytes in model file " + path);

    model.refresh_weights();
    return model;
}

} // namespace routerole
