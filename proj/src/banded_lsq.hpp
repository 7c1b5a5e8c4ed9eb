#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bz/errors.hpp"

namespace bz::detail {

// Row-by-row Givens QR for least squares min ||A x - c|| where every row of
// A has its nonzeros in three consecutive columns. R keeps upper bandwidth 2.
// Working on A instead of the normal matrix A^T A keeps the conditioning at
// sqrt(cond(A^T A)), which matters once lambda^-4 dwarfs the fidelity weight.
class BandedLeastSquares {
public:
    explicit BandedLeastSquares(std::size_t cols)
        : cols_(cols), r_(cols, {0.0, 0.0, 0.0}), qtc_(cols, 0.0), filled_(cols, false) {}

    // Adds the row sum_k coeffs[k] x_{first+k} = rhs (coeffs past the last column are ignored).
    void add_row(std::size_t first, std::array<double, 3> coeffs, double rhs) {
        std::array<double, 3> row = coeffs;
        std::size_t col = first;
        while (col < cols_) {
            if (row[0] == 0.0) {
                shift(row);
                ++col;
                continue;
            }
            if (!filled_[col]) {
                r_[col] = row;
                qtc_[col] = rhs;
                filled_[col] = true;
                return;
            }
            std::array<double, 3>& top = r_[col];
            const double h = std::hypot(top[0], row[0]);
            const double c = top[0] / h;
            const double s = row[0] / h;
            for (std::size_t k = 0; k < 3; ++k) {
                const double a = top[k];
                const double b = row[k];
                top[k] = c * a + s * b;
                row[k] = -s * a + c * b;
            }
            const double a = qtc_[col];
            qtc_[col] = c * a + s * rhs;
            rhs = -s * a + c * rhs;
            shift(row);
            ++col;
        }
        residual_ += rhs * rhs;
    }

    std::vector<double> solve() const {
        std::vector<double> x(cols_, 0.0);
        for (std::size_t i = cols_; i-- > 0;) {
            if (!filled_[i] || r_[i][0] == 0.0) {
                throw VerificationError("banded least squares: rank deficient system");
            }
            double acc = qtc_[i];
            if (i + 1 < cols_) acc -= r_[i][1] * x[i + 1];
            if (i + 2 < cols_) acc -= r_[i][2] * x[i + 2];
            x[i] = acc / r_[i][0];
        }
        return x;
    }

    // Squared norm of the part of c orthogonal to range(A).
    double residual_squares() const { return residual_; }

private:
    static void shift(std::array<double, 3>& row) {
        row[0] = row[1];
        row[1] = row[2];
        row[2] = 0.0;
    }

    std::size_t cols_;
    std::vector<std::array<double, 3>> r_;
    std::vector<double> qtc_;
    std::vector<bool> filled_;
    double residual_ = 0.0;
};

}  // namespace bz::detail
