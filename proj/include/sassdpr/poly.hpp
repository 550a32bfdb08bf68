#pragma once

#include <complex>
#include <vector>

// Real polynomials in z^-1, coefficient i multiplies z^-i.
namespace sassdpr::poly {

using Poly = std::vector<double>;

Poly mul(const Poly& a, const Poly& b);
Poly add(const Poly& a, const Poly& b);
Poly scale(const Poly& a, double s);
Poly pow(const Poly& a, int n);
// (a + b z^-1)^n
Poly binomial_power(double a, double b, int n);
// prod (1 - r_k z^-1), imaginary residue dropped.
Poly from_roots(const std::vector<std::complex<double>>& roots);

struct Division {
    Poly quotient;
    Poly remainder;
};
// Long division num = q * d + r with deg r < deg d.
Division divide(const Poly& num, const Poly& d);

}  // namespace sassdpr::poly
