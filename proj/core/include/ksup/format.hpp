#pragma once

#include <string>

namespace ksup {

/// Locale-independent "%g"-style formatting via std::to_chars.
std::string format_double(double x, int significant = 12);

/// Locale-independent parse; the whole string must be consumed.
/// Returns false on failure.
bool parse_double(const std::string& text, double& out);

} // namespace ksup
