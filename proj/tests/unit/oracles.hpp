#pragma once
// Closed forms and brute-force references used to check the library.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// W of a minimum-uncertainty Gaussian with position width a and momentum width b = s^2/a.
inline double gaussian_wigner(double q, double p, double X, double Y, double a, double s) {
    const double b = s * s / a;
    return std::exp(-(q - X) * (q - X) / a - (p - Y) * (p - Y) / b) / (M_PI * s);
}

// Normalized Hermite functions psi_n(q) for m = omega = 1, hbar = s, by the stable recurrence.
inline std::vector<double> hermite_functions(double q, int nmax, double s) {
    std::vector<double> h(nmax + 1);
    const double x = q / std::sqrt(s);
    h[0] = std::pow(M_PI * s, -0.25) * std::exp(-x * x / 2);
    if (nmax > 0) h[1] = std::sqrt(2.0) * x * h[0];
    for (int n = 2; n <= nmax; ++n) h[n] = std::sqrt(2.0 / n) * x * h[n - 1] - std::sqrt((n - 1.0) / n) * h[n - 2];
    return h;
}

// W(q_i, p) = (1/(pi s)) sum_y dq psi*(q+y) psi(q-y) exp(2 i p y / s), direct over all y with |y| < ymax.
template <class Psi>
double direct_wigner(const Psi& psi, double q, double p, double s, double dq, double ymax) {
    double acc = 0;
    for (double y = -ymax; y <= ymax + 1e-12; y += dq) acc += (std::conj(psi(q + y)) * psi(q - y) * std::exp(cplx(0, 2 * p * y / s))).real();
    return acc * dq / (M_PI * s);
}

// |<a|b>|^2 for two coherent states sharing widths.
inline double coherent_overlap2(double X1, double Y1, double X2, double Y2, double a, double s) {
    const double b = s * s / a;
    return std::exp(-(X1 - X2) * (X1 - X2) / (2 * a) - (Y1 - Y2) * (Y1 - Y2) / (2 * b));
}

}  // namespace oracle
