#pragma once

#include <stdexcept>
#include <string>

namespace hadacov {

// Process exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 resource-guard refusal. The CLI maps these exception types to codes.
struct config_error : std::runtime_error {
    static constexpr int exit_code = 2;
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct numerical_error : std::runtime_error {
    static constexpr int exit_code = 3;
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

struct resource_error : std::runtime_error {
    static constexpr int exit_code = 4;
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}
