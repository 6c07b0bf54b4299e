#include "rulkit/linalg.hpp"

#include <cassert>
#include <cmath>

#include "rulkit/errors.hpp"

namespace rulkit {

double dot(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec matvec(const Mat& m, const Vec& v) {
    assert(m.cols() == v.size());
    Vec out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Mat outer(const Vec& a, const Vec& b) {
    Mat m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
    return m;
}

double trace(const Mat& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows() && i < m.cols(); ++i) s += m(i, i);
    return s;
}

void symmetrize(Mat& m) {
    assert(m.rows() == m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
}

double quadratic_form(const Mat& a, const Vec& x) {
    assert(a.rows() == a.cols() && a.rows() == x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) row += a(i, j) * x[j];
        s += x[i] * row;
    }
    return s;
}

bool cholesky(const Mat& a, Mat& l) {
    const std::size_t n = a.rows();
    assert(a.cols() == n);
    l = Mat(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) return false;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return true;
}

Vec cholesky_solve(const Mat& l, const Vec& b) {
    const std::size_t n = l.rows();
    Vec y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    Vec x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

namespace {

// Escalates a trace-scaled ridge until the factorization succeeds.
// A finite symmetric matrix always becomes positive definite for a
// large enough ridge, so the loop terminates unless inputs are NaN.
Mat factor_with_ridge(Mat a, bool* ridged) {
    const std::size_t n = a.rows();
    if (ridged != nullptr) *ridged = false;
    Mat l;
    if (cholesky(a, l)) return l;

    const double tr = trace(a);
    double eps = 1e-8 * (tr > 0.0 ? tr / static_cast<double>(n) : 1.0);
    for (int attempt = 0; attempt < 60; ++attempt) {
        Mat reg = a;
        for (std::size_t i = 0; i < n; ++i) reg(i, i) += eps;
        if (cholesky(reg, l)) {
            if (ridged != nullptr) *ridged = true;
            return l;
        }
        eps *= 10.0;
    }
    throw Error("matrix could not be regularized to positive definite (non-finite input?)");
}

} // namespace

Vec solve_spd(Mat a, const Vec& b, bool* ridged) {
    const Mat l = factor_with_ridge(std::move(a), ridged);
    return cholesky_solve(l, b);
}

Mat invert_spd(Mat a, bool* ridged) {
    const std::size_t n = a.rows();
    const Mat l = factor_with_ridge(std::move(a), ridged);
    Mat inv(n, n);
    Vec e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const Vec col = cholesky_solve(l, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
        e[j] = 0.0;
    }
    symmetrize(inv);
    return inv;
}

} // namespace rulkit
