#include "qkt/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qkt/errors.hpp"

namespace qkt {

namespace {

// sqrt(a^2 + b^2) without destructive underflow or overflow.
double pythag(double a, double b) {
    const double absa = std::abs(a);
    const double absb = std::abs(b);
    if (absa > absb) {
        const double r = absb / absa;
        return absa * std::sqrt(1.0 + r * r);
    }
    if (absb == 0.0) return 0.0;
    const double r = absa / absb;
    return absb * std::sqrt(1.0 + r * r);
}

} // namespace

TridiagonalEigen eig_symmetric_tridiagonal(const Eigen::VectorXd& diag,
                                           const Eigen::VectorXd& offdiag) {
    const int n = static_cast<int>(diag.size());
    if (n == 0) throw std::invalid_argument("eig_symmetric_tridiagonal: empty diagonal");
    if (offdiag.size() != n - 1)
        throw std::invalid_argument("eig_symmetric_tridiagonal: offdiag size must be n - 1");

    // Working copies: d carries the diagonal (eigenvalues on exit), e the
    // off-diagonal shifted down one slot as in the classic QL routines.
    std::vector<double> d(diag.data(), diag.data() + n);
    std::vector<double> e(n, 0.0);
    for (int i = 1; i < n; ++i) e[i - 1] = offdiag[i - 1];
    e[n - 1] = 0.0;

    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);

    const long iter_budget = 50L * n;
    long iters = 0;

    for (int l = 0; l < n; ++l) {
        for (;;) {
            // Find a negligible off-diagonal element e[m].
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m == l) break;  // d[l] converged

            if (++iters > iter_budget)
                throw NumericalError("eig_symmetric_tridiagonal: QL iteration budget exceeded");

            // Wilkinson-type shift from the leading 2x2 of the active block.
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = pythag(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));

            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool deflated = false;

            // Implicit QL sweep m-1 .. l, rotations accumulated into z.
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if (r == 0.0) {  // deflate: split the block
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                for (int k = 0; k < n; ++k) {
                    f = z(k, i + 1);
                    z(k, i + 1) = s * z(k, i) + c * f;
                    z(k, i) = c * z(k, i) - s * f;
                }
            }
            if (deflated) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Ascending eigenvalue order with matching columns.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    TridiagonalEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = d[order[k]];
        out.eigenvectors.col(k) = z.col(order[k]);
    }
    return out;
}

} // namespace qkt
