#ifndef ALO_OPERATOR_HPP
#define ALO_OPERATOR_HPP

#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "alo/basis.hpp"
#include "alo/errors.hpp"

namespace alo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex I_unit{0.0, 1.0};

/*
 * Complex matrix over a truncated basis. The matrix is shared and never
 * mutated after construction, so copies are cheap and thread-safe.
 */
class Operator {
public:
    Operator() : Operator(BasisSpec{}, Matrix::Zero(2, 2)) {}

    Operator(BasisSpec basis, Matrix matrix, std::string name = {})
        : basis_(std::move(basis)),
          matrix_(std::make_shared<const Matrix>(std::move(matrix))),
          name_(std::move(name))
    {
        const auto d = static_cast<Eigen::Index>(basis_.total_dim());
        if (matrix_->rows() != d || matrix_->cols() != d)
            throw DimensionError("Operator '" + name_ + "': matrix is " +
                                 std::to_string(matrix_->rows()) + "x" +
                                 std::to_string(matrix_->cols()) + ", basis needs " +
                                 std::to_string(d) + "x" + std::to_string(d));
    }

    static Operator identity(const BasisSpec& basis, std::string name = "1")
    {
        const auto d = static_cast<Eigen::Index>(basis.total_dim());
        return Operator(basis, Matrix::Identity(d, d), std::move(name));
    }

    static Operator zero(const BasisSpec& basis, std::string name = "0")
    {
        const auto d = static_cast<Eigen::Index>(basis.total_dim());
        return Operator(basis, Matrix::Zero(d, d), std::move(name));
    }

    const BasisSpec& basis() const { return basis_; }
    const Matrix& matrix() const { return *matrix_; }
    const std::string& name() const { return name_; }
    Eigen::Index dim() const { return matrix_->rows(); }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return (*matrix_)(i, j); }

    Operator renamed(std::string name) const
    {
        Operator out = *this;
        out.name_ = std::move(name);
        return out;
    }

    /// Frobenius norm over the whole truncated space.
    double norm() const { return matrix_->norm(); }

    bool is_hermitian(double tol = 0.0) const
    {
        return (*matrix_ - matrix_->adjoint()).norm() <= tol * std::max(1.0, norm());
    }

private:
    BasisSpec basis_;
    std::shared_ptr<const Matrix> matrix_;
    std::string name_;
};

namespace detail {

inline bool mostly_zero(const Matrix& m)
{
    const Eigen::Index nnz = (m.array() != Complex(0.0)).count();
    return nnz * 10 < m.size();
}

/// Dense product with a sparse path for ladder-like factors (exact zeros skipped).
inline Matrix product(const Matrix& x, const Matrix& y)
{
    if (x.rows() >= 64) {
        if (mostly_zero(x)) {
            const Eigen::SparseMatrix<Complex> xs = x.sparseView();
            return xs * y;
        }
        if (mostly_zero(y)) {
            const Eigen::SparseMatrix<Complex> ys = y.sparseView();
            return x * ys;
        }
    }
    return x * y;
}

} // namespace detail

inline void require_same_basis(const BasisSpec& a, const BasisSpec& b, const char* context)
{
    if (!a.compatible(b)) throw DimensionError(std::string(context) + ": basis mismatch");
}

inline Operator adjoint(const Operator& x)
{
    return Operator(x.basis(), x.matrix().adjoint(), x.name() + "^+");
}

inline Operator operator+(const Operator& x, const Operator& y)
{
    require_same_basis(x.basis(), y.basis(), "operator+");
    return Operator(x.basis(), x.matrix() + y.matrix(), x.name() + "+" + y.name());
}

inline Operator operator-(const Operator& x, const Operator& y)
{
    require_same_basis(x.basis(), y.basis(), "operator-");
    return Operator(x.basis(), x.matrix() - y.matrix(), x.name() + "-" + y.name());
}

inline Operator operator-(const Operator& x)
{
    return Operator(x.basis(), -x.matrix(), "-" + x.name());
}

inline Operator operator*(const Operator& x, const Operator& y)
{
    require_same_basis(x.basis(), y.basis(), "operator*");
    return Operator(x.basis(), detail::product(x.matrix(), y.matrix()), x.name() + y.name());
}

inline Operator operator*(Complex s, const Operator& x)
{
    return Operator(x.basis(), s * x.matrix(), x.name());
}

inline Operator operator*(double s, const Operator& x) { return Complex(s, 0.0) * x; }

/// x + s*1
inline Operator operator+(const Operator& x, Complex s)
{
    Matrix m = x.matrix();
    m.diagonal().array() += s;
    return Operator(x.basis(), std::move(m), x.name());
}

inline Operator operator+(const Operator& x, double s) { return x + Complex(s, 0.0); }

inline Operator commutator(const Operator& x, const Operator& y)
{
    require_same_basis(x.basis(), y.basis(), "commutator");
    return Operator(x.basis(), detail::product(x.matrix(), y.matrix()) - detail::product(y.matrix(), x.matrix()),
                    "[" + x.name() + "," + y.name() + "]");
}

inline Operator anticommutator(const Operator& x, const Operator& y)
{
    require_same_basis(x.basis(), y.basis(), "anticommutator");
    return Operator(x.basis(), detail::product(x.matrix(), y.matrix()) + detail::product(y.matrix(), x.matrix()),
                    "{" + x.name() + "," + y.name() + "}");
}

inline Operator power(const Operator& x, int n)
{
    if (n < 0) throw ParameterError("power: negative exponent");
    Matrix acc = Matrix::Identity(x.dim(), x.dim());
    for (int k = 0; k < n; ++k) acc = detail::product(acc, x.matrix());
    return Operator(x.basis(), std::move(acc), x.name() + "^" + std::to_string(n));
}

/// P X P: the block of x acting inside the valid subspace.
inline Matrix restrict_to_valid(const Operator& x)
{
    const auto& idx = x.basis().valid_indices();
    return x.matrix()(idx, idx);
}

inline double restricted_norm(const Operator& x) { return restrict_to_valid(x).norm(); }

/*
 * ||P (lhs - rhs) P|| / max(||P rhs P||, scale). `scale` is the reference
 * size used when the right-hand side vanishes.
 */
inline double restricted_residual(const Operator& lhs, const Operator& rhs, double scale = 0.0)
{
    require_same_basis(lhs.basis(), rhs.basis(), "restricted_residual");
    const auto& idx = lhs.basis().valid_indices();
    const double diff = (lhs.matrix()(idx, idx) - rhs.matrix()(idx, idx)).norm();
    const double ref = std::max(rhs.matrix()(idx, idx).norm(), scale);
    if (ref == 0.0) return diff;
    return diff / ref;
}

// ---------------------------------------------------------------------------

class StateVector {
public:
    StateVector() : StateVector(BasisSpec{}, Vector::Zero(2)) {}

    StateVector(BasisSpec basis, Vector amplitudes, std::string name = {})
        : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)), name_(std::move(name))
    {
        if (amplitudes_.size() != static_cast<Eigen::Index>(basis_.total_dim()))
            throw DimensionError("StateVector '" + name_ + "': wrong number of amplitudes");
    }

    static StateVector basis_state(const BasisSpec& basis, std::size_t flat, std::string name = {})
    {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.total_dim()));
        v(static_cast<Eigen::Index>(flat)) = 1.0;
        return StateVector(basis, std::move(v), std::move(name));
    }

    const BasisSpec& basis() const { return basis_; }
    const Vector& amplitudes() const { return amplitudes_; }
    const std::string& name() const { return name_; }
    Eigen::Index dim() const { return amplitudes_.size(); }

    double norm() const { return amplitudes_.norm(); }
    double squared_norm() const { return amplitudes_.squaredNorm(); }

    /// Sum of |amplitude|^2 outside the valid subspace.
    double tail_mass() const
    {
        double tail = 0.0;
        for (Eigen::Index i = 0; i < amplitudes_.size(); ++i)
            if (!basis_.is_valid(static_cast<std::size_t>(i))) tail += std::norm(amplitudes_(i));
        return tail;
    }

    /// tail_mass / squared_norm (0 for the zero vector).
    double tail_fraction() const
    {
        const double n2 = squared_norm();
        return n2 > 0.0 ? tail_mass() / n2 : 0.0;
    }

    StateVector renamed(std::string name) const
    {
        StateVector out = *this;
        out.name_ = std::move(name);
        return out;
    }

    StateVector scaled(Complex s) const { return StateVector(basis_, s * amplitudes_, name_); }

    StateVector normalized() const
    {
        const double n = norm();
        if (n == 0.0) throw NumericalError("StateVector::normalized: zero vector");
        return StateVector(basis_, amplitudes_ / n, name_);
    }

    /// First amplitude above 1e-8 of the largest made real and positive.
    StateVector phase_normalized() const
    {
        const double peak = amplitudes_.cwiseAbs().maxCoeff();
        if (peak == 0.0) return *this;
        for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
            const double mag = std::abs(amplitudes_(i));
            if (mag > 1e-8 * peak) {
                return StateVector(basis_, amplitudes_ * (std::conj(amplitudes_(i)) / mag), name_);
            }
        }
        return *this;
    }

private:
    BasisSpec basis_;
    Vector amplitudes_;
    std::string name_;
};

inline StateVector operator*(const Operator& x, const StateVector& v)
{
    require_same_basis(x.basis(), v.basis(), "Operator*StateVector");
    return StateVector(v.basis(), x.matrix() * v.amplitudes(), v.name());
}

/// <u, v>, antilinear in the first argument.
inline Complex inner(const StateVector& u, const StateVector& v)
{
    require_same_basis(u.basis(), v.basis(), "inner");
    return u.amplitudes().dot(v.amplitudes());
}

/// <v, X v> / <v, v>
inline Complex rayleigh_quotient(const Operator& x, const StateVector& v)
{
    const double n2 = v.squared_norm();
    if (n2 == 0.0) throw NumericalError("rayleigh_quotient: zero vector");
    return v.amplitudes().dot(x.matrix() * v.amplitudes()) / n2;
}

/// ||X v - value v|| / ||v||
inline double eigen_residual(const Operator& x, const StateVector& v, Complex value)
{
    const double n = v.norm();
    if (n == 0.0) throw NumericalError("eigen_residual: zero vector");
    return (x.matrix() * v.amplitudes() - value * v.amplitudes()).norm() / n;
}

} // namespace alo

#endif
