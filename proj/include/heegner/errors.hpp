#pragma once

#include <stdexcept>
#include <string>

namespace heegner {

// Bad user input: rejected at validation time (CLI exit code 1).
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct not_symmetric_error : validation_error {
    explicit not_symmetric_error(const std::string& msg) : validation_error(msg) {}
};

struct odd_diagonal_error : validation_error {
    explicit odd_diagonal_error(const std::string& msg) : validation_error(msg) {}
};

struct singular_lattice_error : validation_error {
    explicit singular_lattice_error(const std::string& msg) : validation_error(msg) {}
};

// A computation could not be carried out (CLI exit code 2).
struct computation_error : std::runtime_error {
    explicit computation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The enumeration kernel would exceed its point budget.
struct budget_error : computation_error {
    explicit budget_error(const std::string& msg) : computation_error(msg) {}
};

}  // namespace heegner
