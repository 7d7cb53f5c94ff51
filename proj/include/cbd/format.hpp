#pragma once

#include <string>

namespace cbd {

/// Shortest decimal text that reads back to exactly `value`.
std::string format_number(double value);

}  // namespace cbd
