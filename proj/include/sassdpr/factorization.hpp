#pragma once

#include <functional>
#include <vector>

#include "sassdpr/zerophase.hpp"

namespace sassdpr {

// K-th order difference operator, (N-K) x N.
struct DifferenceMatrix {
    int N = 0;
    int K = 0;
    std::vector<double> stencil;  // (-1)^(K-j) C(K,j), j = 0..K

    MatrixXd dense() const;
    VectorXd apply(const VectorXd& x) const;            // D x
    VectorXd apply_transpose(const VectorXd& v) const;  // D^T v
    MatrixXd right_multiply_transpose(const MatrixXd& X) const;  // X D^T
    MatrixXd left_apply(const MatrixXd& X) const;                // X D
};

DifferenceMatrix difference_matrix(int N, int K);

// N x (N-1), ones strictly below the diagonal.
MatrixXd integration_matrix(int N);
// S applied K times with a leading zero each time; inverts D(K) up to the null space.
VectorXd integrate(const VectorXd& v, int K);

TransferFunction deconvolve_factor(const TransferFunction& tfG, int K);

// Columns K..N-1 of the N x N Toeplitz matrix of g1, so that G1 D reproduces Gf away from the edge.
MatrixXd factor_init(const std::vector<double>& g1, int N, int K);

struct FactorizedFilter {
    MatrixXd Gf;
    MatrixXd G1;
    DifferenceMatrix D;
    int K = 0;
    double final_error = 0.0;
    int iterations = 0;
    bool converged = false;
    double lipschitz = 0.0;
    std::vector<double> cost_trace;  // accepted iterates
};

struct ApgdOptions {
    double eps = 1e-6;
    int kmax = 20000;
    bool record_trace = false;
    bool throw_on_cap = true;
};

// Dense route: Gf given as a matrix.
FactorizedFilter apgd_factorize(const MatrixXd& Gf, const DifferenceMatrix& D, const MatrixXd& G1_init,
                                const ApgdOptions& opt = {});
// Recursion route: products with Gf and Gf^T run through the state-space model.
FactorizedFilter apgd_factorize(const StateSpaceModel& ss, const DifferenceMatrix& D,
                                const MatrixXd& G1_init, const ApgdOptions& opt = {});

// Builds the initial factor from the composite's transfer function and runs APGD.
FactorizedFilter factorize_filter(const CompositeFilter& f, int N, int K, const ApgdOptions& opt = {});

// ||Gf^T Gf - Gf^T G1 D||_F^2
double factorization_error(const StateSpaceModel& ss, const MatrixXd& G1, const DifferenceMatrix& D);

// ||Gf^T G1 h|| for the impulse h at index (N-K)/2.
double centered_filter_norm(const StateSpaceModel& ss, const MatrixXd& G1);

// Largest eigenvalue of a symmetric PSD operator by power iteration.
double power_iteration(const std::function<VectorXd(const VectorXd&)>& op, int n, int iters = 30,
                       double tol = 1e-6);

}  // namespace sassdpr
