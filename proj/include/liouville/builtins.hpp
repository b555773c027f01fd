#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "liouville/model_io.hpp"
#include "liouville/models.hpp"

namespace liouville {

/// Model descriptions for the bundled systems, addressable without files:
/// "two-level", "lambda3", "rb87-waveplate". Coefficients are derived from
/// the corresponding builder so file and builder stay identical; each model
/// carries its default sweep grid and observables.
std::optional<io::ModelFile> builtin_model(std::string_view name);

std::vector<std::string> builtin_names();

}  // namespace liouville
