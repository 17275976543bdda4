#pragma once

// Plain-text model files. Numbers are written at 17 significant digits, so
// save -> load reproduces every double bit for bit.

#include "gplda/discriminant.hpp"

#include <string>

namespace gplda {

std::string format_model(const DiscriminantModel& model);
DiscriminantModel parse_model(std::string_view text);

void save_model(const std::string& path, const DiscriminantModel& model);
DiscriminantModel load_model(const std::string& path);

}  // namespace gplda
