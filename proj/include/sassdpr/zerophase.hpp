#pragma once

#include <optional>
#include <vector>

#include "sassdpr/spectral.hpp"

namespace sassdpr {

struct PaddingPolicy {
    int P = 0;
    int degree = 1;
};

// (A^-1, A^-2 B, C, D): the time-reversed realization whose impulse response
// matrix is the transpose of the forward one.
struct BackwardRealization {
    MatrixXd Ab;
    VectorXd Bb;
    RowVectorXd Cb;
    double Db = 0.0;
};

// Throws SingularTransform when |det A| < 1e-12.
BackwardRealization backward_realization(const StateSpaceModel& ss);

// Signals are the columns of X.
MatrixXd causal_filter(const StateSpaceModel& ss, const MatrixXd& X);      // Gf X
MatrixXd anticausal_filter(const StateSpaceModel& ss, const MatrixXd& X);  // Gf^T X

// Signals are the rows of X; no transposes are made.
MatrixXd causal_filter_rows(const StateSpaceModel& ss, const MatrixXd& X);      // X Gf^T
MatrixXd anticausal_filter_rows(const StateSpaceModel& ss, const MatrixXd& X);  // X Gf

MatrixXd build_impulse_matrix(const StateSpaceModel& ss, int N);

enum class ApplyPath { Recursion, Matrix };

class ZeroPhaseOperator {
public:
    // The N x N impulse matrix is cached when cache_matrix is set or N <= kDefaultCacheLimit.
    static constexpr int kDefaultCacheLimit = 2048;

    ZeroPhaseOperator(CompositeFilter filter, int N, PaddingPolicy pad = {},
                      std::optional<bool> cache_matrix = std::nullopt);

    const CompositeFilter& filter() const { return filter_; }
    const StateSpaceModel& ss() const { return filter_.ss; }
    int N() const { return N_; }
    const PaddingPolicy& pad() const { return pad_; }
    bool has_matrix() const { return Gf_.has_value(); }
    const MatrixXd& Gf() const;

    // Gf^T Gf u.
    VectorXd apply(const VectorXd& u, ApplyPath path = ApplyPath::Recursion) const;
    // Column-wise Gf^T Gf X.
    MatrixXd apply_columns(const MatrixXd& X) const;

    VectorXd forward(const VectorXd& u) const;  // Gf u
    VectorXd adjoint(const VectorXd& u) const;  // Gf^T u

private:
    CompositeFilter filter_;
    int N_;
    PaddingPolicy pad_;
    std::optional<MatrixXd> Gf_;
};

// Full apply_zero_phase contract: length check, then Gf^T Gf u.
VectorXd apply_zero_phase(const ZeroPhaseOperator& op, const VectorXd& u,
                          ApplyPath path = ApplyPath::Recursion);

struct PaddedSignal {
    VectorXd y;
    int P = 0;
};

int pad_length(double fs);
PaddedSignal pad_signal(const VectorXd& u, double fs, int degree = 1);
PaddedSignal pad_signal_with(const VectorXd& u, int P, int degree = 1);
VectorXd unpad_signal(const VectorXd& y, int P);

}  // namespace sassdpr
