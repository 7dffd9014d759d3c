#pragma once

#include <stdexcept>
#include <string>

namespace kroner {

/// Mismatched dimension, shape or value space between operands.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A symmetry tag (symmetric / skew) that does not hold entry-by-entry.
class SymmetryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its domain (form degree, homogeneity,
/// unresolved sign slot, ...).
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A lift/projection pair failed a commutation probe during homotopy transfer.
class CommutationError : public std::runtime_error {
public:
    CommutationError(const std::string& what, std::string probe)
        : std::runtime_error(what + " (probe: " + probe + ")"), probe_(std::move(probe)) {}
    const std::string& probe() const noexcept { return probe_; }

private:
    std::string probe_;
};

/// Malformed path or quadrature configuration.
class PathError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed JSON document or schema violation.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kroner
