#pragma once

#include <map>
#include <string>

namespace wavesys::cli {

// Named example problems shipped with the tool, as spec-file texts.
const std::map<std::string, std::string>& builtin_specs();

}  // namespace wavesys::cli
