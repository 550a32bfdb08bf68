#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sassdpr/errors.hpp"

namespace sassdpr {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

// B(z)/A(z) in powers of z^-1; den[0] is 1.
struct TransferFunction {
    std::vector<double> num;
    std::vector<double> den;

    int num_degree() const { return static_cast<int>(num.size()) - 1; }
    int den_degree() const { return static_cast<int>(den.size()) - 1; }
};

struct GramianPair {
    MatrixXd Wr;
    MatrixXd Wo;
};

// SISO realization s(k+1) = A s(k) + B u(k), y(k) = C s(k) + D u(k).
struct StateSpaceModel {
    MatrixXd A;
    VectorXd B;
    RowVectorXd C;
    double D = 0.0;
    std::optional<GramianPair> gramians;

    int order() const { return static_cast<int>(A.rows()); }
};

struct BalancedRealization {
    StateSpaceModel ss;
    MatrixXd T;
    VectorXd sigma;
};

// Roots of den, i.e. the filter poles.
std::vector<cplx> tf_poles(const TransferFunction& tf);

// B(e^{jw}) / A(e^{jw}).
cplx tf_response(const TransferFunction& tf, double omega);

// Direct-form difference equation with zero initial state.
std::vector<double> tf_filter(const TransferFunction& tf, const std::vector<double>& x);

StateSpaceModel tf_to_ss(const TransferFunction& tf);

std::vector<double> impulse_response(const StateSpaceModel& ss, int n);

GramianPair solve_lyapunov(const StateSpaceModel& ss);

StateSpaceModel similarity_transform(const StateSpaceModel& ss, const MatrixXd& T);

BalancedRealization balance_internally(const StateSpaceModel& ss);

// Largest |eig(A)|.
double spectral_radius(const MatrixXd& A);

}  // namespace sassdpr
