#pragma once

#include <stdexcept>
#include <string>

namespace narrowgap {

/// Input outside the domain where an operation is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Non-positive gap width or degenerate geometry.
class SingularGeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mesh construction produced an invalid (folded or degenerate) cell.
class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear solve failed or missed the residual tolerance.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Regime classification failed or a required limit quantity is missing.
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace narrowgap
