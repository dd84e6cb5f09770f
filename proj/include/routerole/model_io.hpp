#pragma once

#include <string>

#include "routerole/embedding.hpp"

namespace routerole {

// Binary model file, little-endian, doubles stored as raw IEEE-754 bytes so
// a save/load cycle reproduces the model bit for bit.
void save_model(const std::string& path, const EmbeddingModel& model);
EmbeddingModel load_model(const std::string& path); // throws CorruptModel, IoError

} // namespace routerole
