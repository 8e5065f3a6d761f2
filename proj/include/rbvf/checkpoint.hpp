#pragma once

#include <filesystem>
#include <string>

#include "rbvf/param_store.hpp"
#include "rbvf/rbvf_model.hpp"

namespace rbvf {

/// Checkpoint container: a UTF-8 text header (version tag, serialized model
/// spec, parameter names and shapes, total element count) followed by
/// little-endian IEEE-754 float64 values in header declaration order,
/// row-major. Loading validates the header against the expected model spec.
void save_checkpoint(const std::filesystem::path& path, const RbvfModelSpec& spec,
                     const ParamStore& store);

struct Checkpoint {
  RbvfModelSpec spec;
  ParamStore params;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Loads and additionally verifies the stored spec matches `expected`.
ParamStore load_checkpoint_for(const std::filesystem::path& path, const RbvfModelSpec& expected);

bool specs_equal(const RbvfModelSpec& a, const RbvfModelSpec& b);

}  // namespace rbvf
