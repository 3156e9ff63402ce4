#pragma once

#include <stdexcept>
#include <string>

namespace odar {

// File- and content-level failures (missing files, parse errors, schema
// violations). Parameter and precondition violations throw
// std::invalid_argument instead.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace odar
