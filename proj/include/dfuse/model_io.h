#pragma once

#include <string>

#include "dfuse/body_model.h"

namespace dfuse {

// Binary model container (named arrays, 64-bit floats) or a JSON variant
// for small test models. Format is picked by file content on load and by
// the .json extension on save.
void save_model(const BodyModel& model, const std::string& path);
BodyModel load_model(const std::string& path);

}  // namespace dfuse
