#pragma once

#include <stdexcept>
#include <string>

namespace epigraph {

/// Input data violated a format or invariant. Maps to CLI exit code 3.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation left its numerical domain (model blow-up, singular volume, ...).
/// Maps to CLI exit code 4.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace epigraph
