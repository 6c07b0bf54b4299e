#pragma once

#include <cstddef>
#include <vector>

namespace rulkit {

using Vec = std::vector<double>;

/// Small dense row-major matrix. All model matrices here are tiny
/// (at most (lags+1) x (lags+1)), so no effort is spent on blocking.
class Mat {
  public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Mat identity(std::size_t n, double scale = 1.0) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return a_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& storage() const { return a_; }
    std::vector<double>& storage() { return a_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

double dot(const Vec& a, const Vec& b);
Vec matvec(const Mat& m, const Vec& v);
Mat outer(const Vec& a, const Vec& b);
double trace(const Mat& m);
void symmetrize(Mat& m);

/// xᵀ A x for square A.
double quadratic_form(const Mat& a, const Vec& x);

/// Cholesky factorization A = L·Lᵀ of a symmetric matrix.
/// Returns false when A is not positive definite.
bool cholesky(const Mat& a, Mat& l);

/// Solves L·Lᵀ x = b given the Cholesky factor.
Vec cholesky_solve(const Mat& l, const Vec& b);

/// Solves A x = b for symmetric A; when the factorization fails, a ridge
/// proportional to trace(A)/n is added and escalated until it succeeds.
/// `ridged` (optional) reports whether regularization was needed.
Vec solve_spd(Mat a, const Vec& b, bool* ridged = nullptr);

/// Inverse of a symmetric positive definite matrix, with the same escalating
/// ridge fallback so degenerate dispersions never surface as caller errors.
Mat invert_spd(Mat a, bool* ridged = nullptr);

} // namespace rulkit
