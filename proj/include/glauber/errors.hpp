#pragma once

#include <stdexcept>
#include <string>

namespace glauber {

/// Malformed input: bad indices, antiferromagnetic couplings, violated preconditions.
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation would exceed a configured enumeration/matrix/tree cap.
class size_cap_exceeded : public std::length_error {
public:
    explicit size_cap_exceeded(const std::string& what) : std::length_error(what) {}
};

/// A mixing certificate was requested but at least one condition failed.
class certification_refused : public std::runtime_error {
public:
    explicit certification_refused(const std::string& what) : std::runtime_error(what) {}
};

} // namespace glauber
