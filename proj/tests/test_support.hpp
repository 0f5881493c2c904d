#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fabsafe/model_io.hpp"

namespace test_support {

inline std::string fixture_path(const std::string& name) {
    return std::string(FABSAFE_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Loads a fixture that is expected to be valid.
inline fabsafe::ModelRepository load_fixture(const std::string& name) {
    auto result = fabsafe::parse_model_file(fixture_path(name), fabsafe::ParseMode::strict);
    if (!result.ok()) {
        std::string message = "fixture " + name + " is invalid";
        if (!result.violations.empty()) message += ": " + result.violations.front().message;
        throw std::runtime_error(message);
    }
    return *std::move(result.repository);
}

}  // namespace test_support
