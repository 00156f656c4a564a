#pragma once

#include <stdexcept>
#include <string>

namespace gprank {

// Error categories, mapped to distinct process exit codes by the CLI.
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gprank
