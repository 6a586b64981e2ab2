#pragma once

// Dense real linear algebra for small systems (n <= 12): matrix/vector
// containers, Gauss-Jordan inversion, rank, characteristic polynomial,
// eigenvalues and left eigenvectors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reachid/error.hpp"

namespace reachid {

using Complex = std::complex<double>;

class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
    Vector(std::initializer_list<double> values) : data_(values) {}
    explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

    static Vector unit(std::size_t dim, std::size_t axis) {
        Vector e(dim);
        e[axis] = 1.0;
        return e;
    }

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }
    std::span<const double> values() const noexcept { return data_; }

    Vector& operator+=(const Vector& o) {
        check_same(o);
        for (std::size_t i = 0; i < size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Vector& operator-=(const Vector& o) {
        check_same(o);
        for (std::size_t i = 0; i < size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Vector& operator*=(double s) {
        for (auto& x : data_) x *= s;
        return *this;
    }
    Vector& operator/=(double s) {
        for (auto& x : data_) x /= s;
        return *this;
    }

    friend Vector operator+(Vector a, const Vector& b) { return a += b; }
    friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
    friend Vector operator*(Vector a, double s) { return a *= s; }
    friend Vector operator*(double s, Vector a) { return a *= s; }
    friend Vector operator/(Vector a, double s) { return a /= s; }
    friend Vector operator-(Vector a) { return a *= -1.0; }
    friend bool operator==(const Vector&, const Vector&) = default;

    double max_abs() const noexcept {
        double m = 0.0;
        for (double x : data_) m = std::max(m, std::abs(x));
        return m;
    }
    double norm() const noexcept {
        double s = 0.0;
        for (double x : data_) s += x * x;
        return std::sqrt(s);
    }
    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
    }

private:
    void check_same(const Vector& o) const {
        if (o.size() != size())
            fail(ErrorKind::DimensionMismatch,
                 "vector sizes " + std::to_string(size()) + " and " + std::to_string(o.size()));
    }

    std::vector<double> data_;
};

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) fail(ErrorKind::DimensionMismatch, "dot product of unequal sizes");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) fail(ErrorKind::DimensionMismatch, "ragged matrix initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Matrix diagonal(const Vector& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
    static Matrix from_columns(std::span<const Vector> columns) {
        if (columns.empty()) fail(ErrorKind::InvalidArgument, "no columns");
        Matrix m(columns.front().size(), columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) m.set_col(j, columns[j]);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector row(std::size_t i) const {
        return Vector(std::vector<double>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)));
    }
    Vector col(std::size_t j) const {
        Vector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_col(std::size_t j, const Vector& v) {
        if (v.size() != rows_) fail(ErrorKind::DimensionMismatch, "column length");
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (double x : data_) m = std::max(m, std::abs(x));
        return m;
    }
    double frobenius() const noexcept {
        double s = 0.0;
        for (double x : data_) s += x * x;
        return std::sqrt(s);
    }
    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }
    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(double s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator-(Matrix a) { return a *= -1.0; }
    friend bool operator==(const Matrix&, const Matrix&) = default;

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) fail(ErrorKind::DimensionMismatch, "matrix product");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend Vector operator*(const Matrix& a, const Vector& x) {
        if (a.cols_ != x.size()) fail(ErrorKind::DimensionMismatch, "matrix-vector product");
        Vector y(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

private:
    void check_same(const Matrix& o) const {
        if (o.rows_ != rows_ || o.cols_ != cols_) fail(ErrorKind::DimensionMismatch, "matrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }
inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).max_abs(); }

struct LinalgTolerances {
    double pivot = 1e-12;  // relative to max |entry|
    double eig = 1e-8;     // relative to matrix norm
};

/// Gauss-Jordan elimination with partial pivoting. Throws SingularMatrix when
/// a pivot drops below tol_pivot * max|entry|.
inline Matrix mat_inverse(const Matrix& m, double tol_pivot = LinalgTolerances{}.pivot) {
    if (!m.square()) fail(ErrorKind::DimensionMismatch, "inverse of non-square matrix");
    const std::size_t n = m.rows();
    const double scale = m.max_abs();
    if (scale == 0.0) fail(ErrorKind::SingularMatrix, "zero matrix");
    const double threshold = tol_pivot * scale;

    Matrix a = m;
    Matrix inv = Matrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (std::abs(a(p, k)) <= threshold)
            fail(ErrorKind::SingularMatrix, "pivot " + std::to_string(k) + " below tolerance");
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(p, j), a(k, j));
                std::swap(inv(p, j), inv(k, j));
            }
        const double piv = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= piv;
            inv(k, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double f = a(i, k);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

namespace detail {

// Row echelon reduction with partial pivoting; returns the absolute pivots in
// elimination order, stopping at the first column whose best pivot is <= cutoff.
inline std::vector<double> echelon_pivots(Matrix a, double cutoff) {
    std::vector<double> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t p = row;
        for (std::size_t i = row + 1; i < a.rows(); ++i)
            if (std::abs(a(i, col)) > std::abs(a(p, col))) p = i;
        if (std::abs(a(p, col)) <= cutoff) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
        pivots.push_back(std::abs(a(row, col)));
        for (std::size_t i = row + 1; i < a.rows(); ++i) {
            const double f = a(i, col) / a(row, col);
            for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
        }
        ++row;
    }
    return pivots;
}

}  // namespace detail

/// Rank by row-echelon reduction; pivots at or below tol * max|entry| count as zero.
inline std::size_t mat_rank(const Matrix& m, double tol) {
    if (tol < 0.0) fail(ErrorKind::InvalidArgument, "negative rank tolerance");
    const double scale = m.max_abs();
    if (scale == 0.0) return 0;
    return detail::echelon_pivots(m, tol * scale).size();
}

/// Smallest pivot of a partially pivoted elimination of a square matrix,
/// relative to max|entry|. Zero for singular (or zero) matrices. Used as a
/// cheap proxy for the smallest singular value.
inline double min_relative_pivot(const Matrix& m) {
    if (!m.square()) fail(ErrorKind::DimensionMismatch, "pivot margin of non-square matrix");
    const double scale = m.max_abs();
    if (scale == 0.0) return 0.0;
    auto pivots = detail::echelon_pivots(m, 0.0);
    if (pivots.size() < m.rows()) return 0.0;
    return *std::min_element(pivots.begin(), pivots.end()) / scale;
}

/// Coefficients c[0..n] (lowest degree first, c[n] = 1) of det(lambda I - m),
/// by the Faddeev-LeVerrier recursion.
inline std::vector<double> characteristic_polynomial(const Matrix& m) {
    if (!m.square()) fail(ErrorKind::DimensionMismatch, "characteristic polynomial of non-square matrix");
    const std::size_t n = m.rows();
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    Matrix mk(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk;
        for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
        c[n - k] = -(m * mk).trace() / static_cast<double>(k);
    }
    return c;
}

namespace detail {

struct PolyEval {
    Complex value;
    Complex derivative;
    double bound;  // sum |c_i| |z|^i, rounding-error scale of value
};

inline PolyEval horner(std::span<const double> c, Complex z) {
    Complex p = c.back();
    Complex dp = 0.0;
    double bound = std::abs(c.back());
    const double az = std::abs(z);
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[i];
        bound = bound * az + std::abs(c[i]);
    }
    return {p, dp, bound};
}

}  // namespace detail

/// Roots of a real monic polynomial (coefficients lowest degree first) by
/// Aberth-Ehrlich simultaneous iteration. Complex roots are returned as exact
/// conjugate pairs.
inline std::vector<Complex> polynomial_roots(std::span<const double> coeffs, int max_sweeps = 200) {
    if (coeffs.size() < 2) return {};
    const std::size_t n = coeffs.size() - 1;
    std::vector<double> c(coeffs.begin(), coeffs.end());
    const double lead = c[n];
    if (lead == 0.0) fail(ErrorKind::InvalidArgument, "leading coefficient is zero");
    for (auto& x : c) x /= lead;

    if (n == 1) return {Complex(-c[0], 0.0)};

    // Fujiwara bound on root moduli, centred on the root mean.
    const Complex centre(-c[n - 1] / static_cast<double>(n), 0.0);
    double radius = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        radius = std::max(radius, std::pow(std::abs(c[k]), 1.0 / static_cast<double>(n - k)));
    radius = std::max(2.0 * radius, 1e-3);

    std::vector<Complex> z(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n) + 0.4;
        z[j] = centre + std::polar(radius, angle);
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<bool> done(n, false);
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (done[j]) continue;
            const auto ev = detail::horner(c, z[j]);
            if (std::abs(ev.value) <= 4.0 * eps * ev.bound) {
                done[j] = true;
                continue;
            }
            const Complex ratio = ev.value / ev.derivative;
            Complex repulsion = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) repulsion += 1.0 / (z[j] - z[k]);
            const Complex step = ratio / (1.0 - ratio * repulsion);
            z[j] -= step;
            if (std::abs(step) <= 2.0 * eps * std::abs(z[j])) done[j] = true;
            else converged = false;
        }
    }
    if (!converged) fail(ErrorKind::NoConvergence, "Aberth iteration did not converge");

    // Conjugate symmetrization.
    std::vector<bool> used(n, false);
    std::vector<Complex> out;
    out.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        used[j] = true;
        if (std::abs(z[j].imag()) <= 1e-12 * (1.0 + std::abs(z[j]))) {
            out.emplace_back(z[j].real(), 0.0);
            continue;
        }
        std::size_t best = n;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            if (used[k] || z[k].imag() * z[j].imag() >= 0.0) continue;
            const double d = std::abs(z[k] - std::conj(z[j]));
            if (d < best_dist) {
                best_dist = d;
                best = k;
            }
        }
        if (best == n) {
            out.emplace_back(z[j].real(), 0.0);
            continue;
        }
        used[best] = true;
        const Complex mean = 0.5 * (z[j] + std::conj(z[best]));
        out.push_back(mean);
        out.push_back(std::conj(mean));
    }
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return out;
}

/// Eigenvalues sorted by descending real part, then descending imaginary part.
inline std::vector<Complex> eigenvalues(const Matrix& m) {
    if (!m.square()) fail(ErrorKind::DimensionMismatch, "eigenvalues of non-square matrix");
    if (m.rows() > 12) fail(ErrorKind::InvalidArgument, "eigenvalue solver limited to n <= 12");
    const auto poly = characteristic_polynomial(m);
    return polynomial_roots(poly);
}

namespace detail {

// Solves (M) x = rhs in place for complex M by partial-pivot elimination.
// Pivots smaller than `floor` are replaced by `floor`, which is the standard
// treatment of the (intentionally) near-singular shifted matrix in inverse
// iteration.
inline std::vector<Complex> solve_shifted(std::vector<Complex> a, std::size_t n, std::vector<Complex> rhs,
                                          double floor) {
    auto at = [&](std::size_t i, std::size_t j) -> Complex& { return a[i * n + j]; };
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(at(p, j), at(k, j));
            std::swap(rhs[p], rhs[k]);
        }
        if (std::abs(at(k, k)) < floor) at(k, k) = floor;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = at(i, k) / at(k, k);
            if (f == Complex(0.0)) continue;
            for (std::size_t j = k; j < n; ++j) at(i, j) -= f * at(k, j);
            rhs[i] -= f * rhs[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        Complex s = rhs[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= at(k, j) * rhs[j];
        rhs[k] = s / at(k, k);
    }
    return rhs;
}

inline double complex_norm(const std::vector<Complex>& v) {
    double s = 0.0;
    for (auto x : v) s += std::norm(x);
    return std::sqrt(s);
}

}  // namespace detail

/// Residual ||eta^T m - lambda eta^T||_2.
inline double left_eigen_residual(const Matrix& m, Complex lambda, const std::vector<Complex>& eta) {
    const std::size_t n = m.rows();
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        Complex r = -lambda * eta[j];
        for (std::size_t i = 0; i < n; ++i) r += eta[i] * m(i, j);
        s += std::norm(r);
    }
    return std::sqrt(s);
}

/// Unit-norm left eigenvector (eta^T m = lambda eta^T) by three steps of
/// inverse iteration on m^T - lambda I from a fixed-seed random start. The
/// phase is fixed so the largest-magnitude component is real and positive.
inline std::vector<Complex> left_eigenvector(const Matrix& m, Complex lambda,
                                             double tol = LinalgTolerances{}.eig) {
    if (!m.square()) fail(ErrorKind::DimensionMismatch, "left eigenvector of non-square matrix");
    const std::size_t n = m.rows();
    const double norm = m.frobenius();
    const double scale = std::max(norm, std::abs(lambda));
    const double floor = std::max(scale, 1.0) * std::numeric_limits<double>::epsilon();

    std::vector<Complex> shifted(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) shifted[i * n + j] = m(j, i) - (i == j ? lambda : Complex(0.0));

    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<Complex> x(n);
    for (auto& xi : x) xi = Complex(unif(rng), unif(rng));

    for (int it = 0; it < 3; ++it) {
        x = detail::solve_shifted(shifted, n, x, floor);
        const double nx = detail::complex_norm(x);
        if (!(nx > 0.0) || !std::isfinite(nx)) fail(ErrorKind::NoConvergence, "inverse iteration broke down");
        for (auto& xi : x) xi /= nx;
    }

    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(x[i]) > std::abs(x[big]) * (1.0 + 1e-12)) big = i;
    const Complex phase = std::abs(x[big]) / x[big];
    for (auto& xi : x) xi *= phase;

    if (norm > 0.0 && left_eigen_residual(m, lambda, x) > tol * norm)
        fail(ErrorKind::NoConvergence, "left eigenvector residual above tolerance");
    return x;
}

}  // namespace reachid
