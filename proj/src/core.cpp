#include "geoclt/core.hpp"

#include <atomic>

namespace geoclt {

namespace {
std::atomic<double> g_tolerance{1e-9};
}

double tolerance() { return g_tolerance.load(std::memory_order_relaxed); }

void set_tolerance(double tol)
{
    if (!(tol > 0.0) || !(tol < 1.0))
        throw InputError("tolerance must lie in (0, 1)");
    g_tolerance.store(tol, std::memory_order_relaxed);
}

Mat tangent_frame(const Vec& u)
{
    const int d = static_cast<int>(u.size());
    // Householder reflection mapping u to +-e_k, k the largest component;
    // the remaining reflected basis vectors span u^perp.
    int k = 0;
    u.cwiseAbs().maxCoeff(&k);
    Vec w = u;
    const double s = u(k) >= 0 ? 1.0 : -1.0;
    w(k) += s;
    const double wn2 = w.squaredNorm();
    Mat frame(d, d - 1);
    int col = 0;
    for (int i = 0; i < d; ++i) {
        if (i == k)
            continue;
        Vec e = unit(d, i);
        frame.col(col++) = e - (2.0 * w(i) / wn2) * w;
    }
    return frame;
}

} // namespace geoclt
