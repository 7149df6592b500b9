#pragma once

#include <string>
#include <vector>

namespace flame {

/// Names of the built-in presets shipped under presets/.
const std::vector<std::string>& preset_names();

bool is_preset(const std::string& name);

/// Raw JSON text of a built-in preset.
const std::string& preset_json(const std::string& name);

/// Provenance completeness check: every preset field must carry a
/// provenance note.  Returns one message per problem; empty means clean.
std::vector<std::string> lint_presets();

}  // namespace flame
