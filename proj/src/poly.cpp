#include "sassdpr/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace sassdpr::poly {

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Poly add(const Poly& a, const Poly& b) {
    Poly c(std::max(a.size(), b.size()), 0.0);
    for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

Poly scale(const Poly& a, double s) {
    Poly c(a);
    for (double& x : c) x *= s;
    return c;
}

Poly pow(const Poly& a, int n) {
    Poly c{1.0};
    for (int i = 0; i < n; ++i) c = mul(c, a);
    return c;
}

Poly binomial_power(double a, double b, int n) { return pow(Poly{a, b}, n); }

Poly from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> c{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> n(c.size() + 1, 0.0);
        for (size_t i = 0; i < c.size(); ++i) {
            n[i] += c[i];
            n[i + 1] -= r * c[i];
        }
        c = std::move(n);
    }
    Poly out(c.size());
    for (size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

Division divide(const Poly& num, const Poly& d) {
    if (d.empty() || d.front() == 0.0) throw std::invalid_argument("divisor must have nonzero leading term");
    // Division in z^-1 from the low-order end: q = num / d as a truncated series of length
    // deg(num) - deg(d) + 1; the remainder is whatever that truncation leaves behind.
    const int nq = static_cast<int>(num.size()) - static_cast<int>(d.size()) + 1;
    Division out;
    if (nq <= 0) {
        out.remainder = num;
        return out;
    }
    Poly r(num);
    out.quotient.assign(nq, 0.0);
    for (int i = 0; i < nq; ++i) {
        const double q = r[i] / d[0];
        out.quotient[i] = q;
        for (size_t j = 0; j < d.size(); ++j) r[i + j] -= q * d[j];
    }
    out.remainder.assign(r.begin() + nq, r.end());
    return out;
}

}  // namespace sassdpr::poly
