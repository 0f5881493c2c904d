#pragma once

#include <string>
#include <string_view>

namespace fabsafe {

// SHA-256 of the input, as a lowercase hex string.
std::string sha256_hex(std::string_view data);

}  // namespace fabsafe
