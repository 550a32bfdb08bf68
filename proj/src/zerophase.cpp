#include "sassdpr/zerophase.hpp"

#include <cmath>
#include <string>

namespace sassdpr {

BackwardRealization backward_realization(const StateSpaceModel& ss) {
    Eigen::PartialPivLU<MatrixXd> lu(ss.A);
    if (ss.order() > 0 && std::abs(lu.determinant()) < 1e-12)
        throw SingularTransform("A is singular; backward realization undefined");
    BackwardRealization b;
    b.Ab = lu.inverse();
    b.Bb = b.Ab * (b.Ab * ss.B);
    b.Cb = ss.C;
    b.Db = ss.D;
    return b;
}

namespace {

// Runs the recursion over time-major data: column k of Xt holds sample k of every signal.
// reverse=false: s(k+1) = A s(k) + B x(k), y(k) = C s(k) + D x(k).
// reverse=true:  s(k) = A s(k+1) + B x(k+1), y(k) = C s(k) + D x(k), s(N-1) = 0.
MatrixXd run_time_major(const StateSpaceModel& ss, const MatrixXd& Xt, bool reverse) {
    const int n = static_cast<int>(Xt.rows());
    const int N = static_cast<int>(Xt.cols());
    const int m = ss.order();
    MatrixXd Yt(n, N);
    if (m == 0) return ss.D * Xt;

    // State of every signal, one column per state variable; updates are plain column axpys.
    MatrixXd S = MatrixXd::Zero(n, m), S2(n, m);
    auto step = [&](int k) {
        auto y = Yt.col(k);
        const auto x = Xt.col(k);
        y = ss.D * x;
        for (int q = 0; q < m; ++q) y += ss.C(q) * S.col(q);
        for (int r = 0; r < m; ++r) {
            auto nr = S2.col(r);
            nr = ss.B(r) * x;
            for (int q = 0; q < m; ++q)
                if (ss.A(r, q) != 0.0) nr += ss.A(r, q) * S.col(q);
        }
        S.swap(S2);
    };
    if (!reverse)
        for (int k = 0; k < N; ++k) step(k);
    else
        for (int k = N - 1; k >= 0; --k) step(k);
    return Yt;
}

}  // namespace

MatrixXd causal_filter(const StateSpaceModel& ss, const MatrixXd& X) {
    return run_time_major(ss, X.transpose(), false).transpose();
}

MatrixXd anticausal_filter(const StateSpaceModel& ss, const MatrixXd& X) {
    return run_time_major(ss, X.transpose(), true).transpose();
}

MatrixXd causal_filter_rows(const StateSpaceModel& ss, const MatrixXd& X) {
    return run_time_major(ss, X, false);
}

MatrixXd anticausal_filter_rows(const StateSpaceModel& ss, const MatrixXd& X) {
    return run_time_major(ss, X, true);
}

MatrixXd build_impulse_matrix(const StateSpaceModel& ss, int N) {
    const std::vector<double> h = impulse_response(ss, N);
    MatrixXd G = MatrixXd::Zero(N, N);
    for (int j = 0; j < N; ++j)
        for (int i = j; i < N; ++i) G(i, j) = h[i - j];
    return G;
}

ZeroPhaseOperator::ZeroPhaseOperator(CompositeFilter filter, int N, PaddingPolicy pad,
                                     std::optional<bool> cache_matrix)
    : filter_(std::move(filter)), N_(N), pad_(pad) {
    if (N < 1) throw LengthMismatch("operator length must be positive");
    if (pad.P < 0 || pad.degree < 0 || pad.degree > 3)
        throw ParameterError("padding needs P >= 0 and degree in 0..3");
    if (cache_matrix.value_or(N <= kDefaultCacheLimit)) Gf_ = build_impulse_matrix(filter_.ss, N);
}

const MatrixXd& ZeroPhaseOperator::Gf() const {
    if (!Gf_) throw ParameterError("impulse matrix was not cached for this operator");
    return *Gf_;
}

VectorXd ZeroPhaseOperator::forward(const VectorXd& u) const {
    if (u.size() != N_) throw LengthMismatch("signal length differs from operator length");
    return causal_filter(filter_.ss, u);
}

VectorXd ZeroPhaseOperator::adjoint(const VectorXd& u) const {
    if (u.size() != N_) throw LengthMismatch("signal length differs from operator length");
    return anticausal_filter(filter_.ss, u);
}

VectorXd ZeroPhaseOperator::apply(const VectorXd& u, ApplyPath path) const {
    if (u.size() != N_) throw LengthMismatch("signal length differs from operator length");
    if (path == ApplyPath::Matrix) {
        const MatrixXd& G = Gf();
        return G.transpose() * (G * u);
    }
    return anticausal_filter(filter_.ss, causal_filter(filter_.ss, u));
}

MatrixXd ZeroPhaseOperator::apply_columns(const MatrixXd& X) const {
    if (X.rows() != N_) throw LengthMismatch("signal length differs from operator length");
    MatrixXd Xt = X.transpose();
    Xt = run_time_major(filter_.ss, Xt, false);
    Xt = run_time_major(filter_.ss, Xt, true);
    return Xt.transpose();
}

VectorXd apply_zero_phase(const ZeroPhaseOperator& op, const VectorXd& u, ApplyPath path) {
    return op.apply(u, path);
}

int pad_length(double fs) {
    if (!(fs > 0.0)) throw ParameterError("sampling rate must be positive");
    return static_cast<int>(std::ceil(fs / 5.0 - 1e-9));
}

namespace {

// Least-squares polynomial through seg(0..P-1), evaluated at integer offsets t.
VectorXd extrapolate(const VectorXd& seg, int degree, const VectorXd& t) {
    const int P = static_cast<int>(seg.size());
    const double sc = P > 1 ? 1.0 / (P - 1) : 1.0;
    MatrixXd V(P, degree + 1);
    for (int i = 0; i < P; ++i)
        for (int d = 0; d <= degree; ++d) V(i, d) = std::pow(i * sc, d);
    const VectorXd c = V.colPivHouseholderQr().solve(seg);
    VectorXd out(t.size());
    for (int i = 0; i < t.size(); ++i) {
        double acc = 0.0;
        for (int d = degree; d >= 0; --d) acc = acc * (t(i) * sc) + c(d);
        out(i) = acc;
    }
    return out;
}

}  // namespace

PaddedSignal pad_signal_with(const VectorXd& u, int P, int degree) {
    if (P < 0) throw ParameterError("pad length must be nonnegative");
    if (degree < 0 || degree > 3) throw ParameterError("padding degree must be in 0..3");
    const int N = static_cast<int>(u.size());
    if (P == 0) return {u, 0};
    if (N < std::max(degree + 1, P) || P < degree + 1)
        throw TooShort("signal of length " + std::to_string(N) + " cannot be padded by " + std::to_string(P));
    PaddedSignal out;
    out.P = P;
    out.y.resize(N + 2 * P);
    VectorXd tl(P), tr(P);
    for (int i = 0; i < P; ++i) {
        tl(i) = i - P;
        tr(i) = P + i;
    }
    out.y.head(P) = extrapolate(u.head(P), degree, tl);
    out.y.segment(P, N) = u;
    out.y.tail(P) = extrapolate(u.tail(P), degree, tr);
    return out;
}

PaddedSignal pad_signal(const VectorXd& u, double fs, int degree) {
    return pad_signal_with(u, pad_length(fs), degree);
}

VectorXd unpad_signal(const VectorXd& y, int P) {
    if (P < 0 || y.size() < 2 * P + 1) throw LengthMismatch("signal too short to remove padding");
    return y.segment(P, y.size() - 2 * P);
}

}  // namespace sassdpr
