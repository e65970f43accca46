#pragma once

#include <cmath>
#include <cstdint>

namespace estq {

struct QuadratureOutcome {
    double value = 0.0;
    double error_estimate = 0.0;  // accumulated local error bound
    bool converged = true;
    std::int64_t evaluations = 0;
};

namespace detail {

template <class F>
void adaptive_simpson_step(const F& f, double lo, double hi, double flo, double fmid,
                           double fhi, double whole, double tol, int depth,
                           QuadratureOutcome& out) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double flmid = f(lmid);
    const double frmid = f(rmid);
    out.evaluations += 2;

    const double h = hi - lo;
    const double left = (h / 12.0) * (flo + 4.0 * flmid + fmid);
    const double right = (h / 12.0) * (fmid + 4.0 * frmid + fhi);
    const double delta = left + right - whole;

    if (depth <= 0) {
        out.converged = false;
        out.value += left + right + delta / 15.0;
        out.error_estimate += std::fabs(delta) / 15.0;
        return;
    }
    if (std::fabs(delta) <= 15.0 * tol || h < 1e-300) {
        out.value += left + right + delta / 15.0;  // Richardson correction
        out.error_estimate += std::fabs(delta) / 15.0;
        return;
    }
    adaptive_simpson_step(f, lo, mid, flo, flmid, fmid, left, 0.5 * tol, depth - 1, out);
    adaptive_simpson_step(f, mid, hi, fmid, frmid, fhi, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

// Adaptive Simpson on [lo, hi] with an absolute tolerance.
template <class F>
QuadratureOutcome integrate(const F& f, double lo, double hi, double abs_tol = 1e-10,
                            int max_depth = 52) {
    QuadratureOutcome out;
    if (!(hi > lo)) return out;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo);
    const double fmid = f(mid);
    const double fhi = f(hi);
    out.evaluations = 3;
    const double whole = ((hi - lo) / 6.0) * (flo + 4.0 * fmid + fhi);
    detail::adaptive_simpson_step(f, lo, hi, flo, fmid, fhi, whole, abs_tol, max_depth, out);
    return out;
}

}  // namespace estq
