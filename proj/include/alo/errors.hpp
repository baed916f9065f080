#ifndef ALO_ERRORS_HPP
#define ALO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace alo {

/// Operands live on incompatible bases or have mismatched sizes.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A model constructor was given parameters outside its domain.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Eigensolver or decomposition failure.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An engine operation was called on inputs that violate its premises
/// (non-eigenvector seed, degenerate level that fails direct verification, ...).
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Down-ladders under the generalized relation have no eigenvalue law.
class UnsupportedDirection : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed operator/state/scenario file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace alo

#endif
