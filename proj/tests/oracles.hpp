#ifndef ALO_TESTS_ORACLES_HPP
#define ALO_TESTS_ORACLES_HPP

// Independent reference computations. Nothing here calls into the library's
// numerics; expected values in the tests are derived from these and frozen.

#include <cmath>
#include <complex>
#include <algorithm>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Dense = Eigen::MatrixXcd;

/// Triple-loop product.
inline Dense matmul(const Dense& x, const Dense& y)
{
    Dense out = Dense::Zero(x.rows(), y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index k = 0; k < x.cols(); ++k)
            for (Eigen::Index j = 0; j < y.cols(); ++j) out(i, j) += x(i, k) * y(k, j);
    return out;
}

inline Dense dagger(const Dense& x)
{
    Dense out(x.cols(), x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) out(j, i) = std::conj(x(i, j));
    return out;
}

/// [n]_q as the geometric sum 1 + q + ... + q^(n-1).
inline double q_integer(std::size_t n, double q)
{
    double s = 0.0, p = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        s += p;
        p *= q;
    }
    return s;
}

inline double factorial(std::size_t n)
{
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

/// Boson lowering matrix built entry by entry: a(n-1, n) = sqrt(n).
inline Dense boson_lowering(std::size_t dim)
{
    Dense a = Dense::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t n = 1; n < dim; ++n)
        a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(static_cast<double>(n));
    return a;
}

/// Amplitudes c_n = exp(-|z|^2/2) z^n / sqrt(n!) of a coherent state (a c = z c).
inline std::vector<Complex> coherent_amplitudes(Complex z, std::size_t dim)
{
    std::vector<Complex> c(dim);
    Complex term = std::exp(-0.5 * std::norm(z));
    for (std::size_t n = 0; n < dim; ++n) {
        c[n] = term;
        term *= z / std::sqrt(static_cast<double>(n + 1));
    }
    return c;
}

/// Probability weight of a coherent state on levels >= n0, by direct summation.
inline double coherent_tail(Complex z, std::size_t n0, std::size_t terms = 400)
{
    double s = 0.0;
    const auto c = coherent_amplitudes(z, n0 + terms);
    for (std::size_t n = n0; n < c.size(); ++n) s += std::norm(c[n]);
    return s;
}

/// Two-mode oscillator-like spectrum w1 (n1 + c1) + w2 (n2 + c2) + e0 for n1, n2 <= n_max, sorted.
inline std::vector<double> two_mode_levels(double w1, double c1, double w2, double c2, double e0, std::size_t n_max)
{
    std::vector<double> out;
    for (std::size_t n1 = 0; n1 <= n_max; ++n1)
        for (std::size_t n2 = 0; n2 <= n_max; ++n2)
            out.push_back(w1 * (static_cast<double>(n1) + c1) + w2 * (static_cast<double>(n2) + c2) + e0);
    std::sort(out.begin(), out.end());
    return out;
}

/// Square-well levels e_n = (sqrt(e0) + n step)^2 from the recursion e_{n+1} = (sqrt(e_n) + step)^2.
inline std::vector<double> square_well_levels(double e0, double step, std::size_t count)
{
    std::vector<double> e{e0};
    while (e.size() < count) {
        const double r = std::sqrt(e.back()) + step;
        e.push_back(r * r);
    }
    return e;
}

/// Hand-rolled deterministic generator (splitmix64) so test inputs do not depend on <random> implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform(double lo = -1.0, double hi = 1.0)
    {
        return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    std::size_t index(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(next() % (hi - lo + 1)); }

    Complex complex() { return {uniform(), uniform()}; }

    Dense matrix(Eigen::Index d)
    {
        Dense m(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) m(i, j) = complex();
        return m;
    }

    Dense hermitian(Eigen::Index d)
    {
        const Dense m = matrix(d);
        return 0.5 * (m + dagger(m));
    }

private:
    std::uint64_t state_;
};

} // namespace oracle

#endif
