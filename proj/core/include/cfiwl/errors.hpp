#pragma once

#include <stdexcept>
#include <string>

namespace cfiwl {

// Bad caller input: malformed graphs, out-of-range parameters, unknown formats.
class invalid_input_error : public std::runtime_error {
public:
    explicit invalid_input_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource budget (tuple count, vertex cap, search cap) was exceeded.
class resource_cap_error : public std::runtime_error {
public:
    explicit resource_cap_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant that the theory guarantees was found violated at runtime.
// Indicates an implementation bug; callers must not swallow it.
class invariant_violation_error : public std::logic_error {
public:
    explicit invariant_violation_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace cfiwl
