#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Cholesky>

#include "sassdpr/dictionaries.hpp"
#include "sassdpr/factorization.hpp"
#include "sassdpr/zerophase.hpp"

namespace sassdpr {

using LinearMap = std::function<VectorXd(const VectorXd&)>;

double soft_threshold(double x, double T);
std::complex<double> soft_threshold(std::complex<double> x, double T);
VectorXd soft_threshold(const VectorXd& x, double T);
MatrixXd soft_threshold(const MatrixXd& x, double T);
MatrixXcd soft_threshold(const MatrixXcd& x, double T);

// argmin_x 1/2 ||x - y||^2 + lam ||D x||_1, first-order differences.
VectorXd tvd(const VectorXd& y, double lam);

struct FistaOptions {
    double eps = 1e-13;  // relative cost change
    int kmax = 20000;
    double lipschitz = 0.0;  // <= 0: power iteration on A^T A
    bool record_trace = false;
    bool throw_on_cap = true;
};

struct FistaResult {
    VectorXd v;
    int iterations = 0;
    double cost = 0.0;
    bool converged = false;
    double lipschitz = 0.0;
    std::vector<double> cost_trace;
};

// argmin_v 1/2 ||b - A v||^2 + lam ||v||_1 by monotone FISTA.
// NoConvergence<VectorXd> carries the best iterate when the cap is hit and throw_on_cap is set.
FistaResult fista_l1(const LinearMap& A, const LinearMap& At, const VectorXd& b, int n, double lam,
                     const FistaOptions& opt = {});

struct SasdResult {
    VectorXd x;
    VectorXd x1;
    VectorXd x2;
    VectorXd v;
    int iterations = 0;
    double final_cost = 0.0;
    bool converged = false;
    std::vector<double> cost_trace;
    // Padded problem data, kept for the certificate.
    VectorXd padded_input;
    int P = 0;
    double lam = 0.0;
};

struct SasdCertificate {
    double max_inactive_ratio = 0.0;
    double max_active_deviation = 0.0;
    int inactive_violations = 0;
    int sign_violations = 0;
    bool passed() const { return inactive_violations == 0 && sign_violations == 0; }
};

// y may be either lpf.N() long, or lpf.N() - 2P long with P = lpf.pad().P, in which case
// it is padded with lpf.pad().degree and the outputs are cropped back.
SasdResult sasd(const VectorXd& y, const ZeroPhaseOperator& lpf, const FactorizedFilter& hpf, double lam,
                const FistaOptions& opt = {});

SasdCertificate check_sasd_optimality(const SasdResult& r, const FactorizedFilter& hpf, double tol = 1e-3);

// Dense SPD solve with [mu I + sum_i Q_i^2], Q_i the zero-phase matrices given.
class GramSystem {
public:
    GramSystem() = default;
    explicit GramSystem(const MatrixXd& system);
    VectorXd solve(const VectorXd& g) const { return llt_.solve(g); }
    int N() const { return static_cast<int>(llt_.rows()); }

private:
    Eigen::LLT<MatrixXd> llt_;
};

// Dense Gf^T Gf built row-wise through the recursions.
MatrixXd zero_phase_matrix(const StateSpaceModel& ss, int N);

// mu I + (B^T B)^2
GramSystem sapr_system(const ZeroPhaseOperator& bpf, double mu);
// mu I + (B^T B)^2 + (H^T H)^2 with H^T H = I - L^T L
GramSystem sasdpr_system(const ZeroPhaseOperator& lpf, const ZeroPhaseOperator& bpf, double mu);

struct AdmmOptions {
    double eps = 1e-5;  // relative cost change
    int kmax = 200;
    bool throw_on_cap = false;
};

struct SaprResult {
    MatrixXd k;
    VectorXd pattern;
    int iterations = 0;
    bool converged = false;
    std::vector<double> cost_trace;
};

struct SasdprResult {
    VectorXd x1;
    VectorXd x2;
    VectorXd x3;
    MatrixXcd c;
    int iterations = 0;
    bool converged = false;
    std::vector<double> cost_trace;
};

// The high-pass term H^T H is realized as I - L^T L from the low-pass operator.
// Inputs follow the sasd length rule; k, c and the cost trace live on the padded grid,
// signal outputs are cropped.
double sapr_cost(const VectorXd& y, const ZeroPhaseOperator& lpf, const ZeroPhaseOperator& bpf,
                 const WdwtDictionary& dict, const MatrixXd& k, double lam0, double lam1);

SaprResult sapr(const VectorXd& y, const ZeroPhaseOperator& lpf, const ZeroPhaseOperator& bpf,
                const WdwtDictionary& dict, double lam0, double lam1, double mu, double eta,
                const AdmmOptions& opt = {}, const GramSystem* F = nullptr);

double sasdpr_cost(const VectorXd& y, const ZeroPhaseOperator& lpf, const ZeroPhaseOperator& bpf,
                   const StftDictionary& dict, const MatrixXcd& c, const VectorXd& x3, double lam0,
                   double lam1, double lam2);

SasdprResult sasdpr(const VectorXd& y, const ZeroPhaseOperator& lpf, const ZeroPhaseOperator& bpf,
                    const StftDictionary& dict, double lam0, double lam1, double lam2, double mu,
                    const AdmmOptions& opt = {}, const GramSystem* F = nullptr);

// Reference denoisers for benchmarks.
VectorXd lowpass_baseline(const VectorXd& y, const ZeroPhaseOperator& lpf);
VectorXd tvd_baseline(const VectorXd& y, double lam);

}  // namespace sassdpr
