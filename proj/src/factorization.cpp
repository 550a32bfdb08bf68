#include "sassdpr/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sassdpr/poly.hpp"

namespace sassdpr {

DifferenceMatrix difference_matrix(int N, int K) {
    if (K < 1 || K >= N) throw OrderError("difference order must satisfy 1 <= K < N");
    DifferenceMatrix D;
    D.N = N;
    D.K = K;
    D.stencil.resize(K + 1);
    double c = 1.0;
    for (int j = 0; j <= K; ++j) {
        D.stencil[j] = ((K - j) % 2 ? -1.0 : 1.0) * c;
        c = c * (K - j) / (j + 1);
    }
    return D;
}

MatrixXd DifferenceMatrix::dense() const {
    MatrixXd out = MatrixXd::Zero(N - K, N);
    for (int i = 0; i < N - K; ++i)
        for (int j = 0; j <= K; ++j) out(i, i + j) = stencil[j];
    return out;
}

VectorXd DifferenceMatrix::apply(const VectorXd& x) const {
    if (x.size() != N) throw LengthMismatch("difference operator expects length N");
    VectorXd out = VectorXd::Zero(N - K);
    for (int j = 0; j <= K; ++j) out += stencil[j] * x.segment(j, N - K);
    return out;
}

VectorXd DifferenceMatrix::apply_transpose(const VectorXd& v) const {
    if (v.size() != N - K) throw LengthMismatch("difference transpose expects length N-K");
    VectorXd out = VectorXd::Zero(N);
    for (int j = 0; j <= K; ++j) out.segment(j, N - K) += stencil[j] * v;
    return out;
}

MatrixXd DifferenceMatrix::right_multiply_transpose(const MatrixXd& X) const {
    if (X.cols() != N) throw ShapeError("X D^T needs N columns");
    MatrixXd out = MatrixXd::Zero(X.rows(), N - K);
    for (int j = 0; j <= K; ++j) out += stencil[j] * X.middleCols(j, N - K);
    return out;
}

MatrixXd DifferenceMatrix::left_apply(const MatrixXd& X) const {
    if (X.cols() != N - K) throw ShapeError("X D needs N-K columns");
    MatrixXd out = MatrixXd::Zero(X.rows(), N);
    for (int j = 0; j <= K; ++j) out.middleCols(j, N - K) += stencil[j] * X;
    return out;
}

MatrixXd integration_matrix(int N) {
    if (N < 2) throw OrderError("integration matrix needs N >= 2");
    MatrixXd S = MatrixXd::Zero(N, N - 1);
    for (int j = 0; j < N - 1; ++j) S.col(j).tail(N - 1 - j).setOnes();
    return S;
}

VectorXd integrate(const VectorXd& v, int K) {
    VectorXd x = v;
    for (int r = 0; r < K; ++r) {
        VectorXd y(x.size() + 1);
        y(0) = 0.0;
        double acc = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) y(i + 1) = (acc += x(i));
        x.swap(y);
    }
    return x;
}

TransferFunction deconvolve_factor(const TransferFunction& tfG, int K) {
    if (K < 1) throw OrderError("K must be positive");
    const auto div = poly::divide(tfG.num, poly::binomial_power(1.0, -1.0, K));
    double r2 = 0.0;
    for (double r : div.remainder) r2 += r * r;
    if (div.quotient.empty() || std::sqrt(r2) >= 1e-6)
        throw NotFactorable("numerator lacks " + std::to_string(K) + " zeros at z=1");
    return {div.quotient, tfG.den};
}

MatrixXd factor_init(const std::vector<double>& g1, int N, int K) {
    MatrixXd G1 = MatrixXd::Zero(N, N - K);
    for (int j = 0; j < N - K; ++j)
        for (int i = j + K; i < N; ++i) G1(i, j) = g1[i - j - K];
    return G1;
}

double power_iteration(const std::function<VectorXd(const VectorXd&)>& op, int n, int iters, double tol) {
    std::mt19937 rng(12345);
    std::normal_distribution<double> nd;
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = nd(rng);
    v.normalize();
    double lam = 0.0;
    for (int k = 0; k < iters; ++k) {
        VectorXd w = op(v);
        const double next = v.dot(w);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        if (k > 0 && std::abs(next - lam) <= tol * std::abs(next)) {
            lam = next;
            break;
        }
        lam = next;
    }
    return lam;
}

namespace {

// Power iteration converges from below; the step is planned against a slightly larger bound.
constexpr double kLipschitzSafety = 1.02;

// Keeps W = G1^T upper triangular, i.e. G1 lower triangular.
void project_upper(MatrixXd& W) {
    for (Eigen::Index c = 0; c + 1 < W.rows() && c < W.cols(); ++c) W.col(c).tail(W.rows() - 1 - c).setZero();
}

// D^T W, W with N-K rows.
MatrixXd dt_rows(const DifferenceMatrix& D, const MatrixXd& W) {
    MatrixXd out = MatrixXd::Zero(D.N, W.cols());
    for (int j = 0; j <= D.K; ++j) out.middleRows(j, D.N - D.K) += D.stencil[j] * W;
    return out;
}

// D X, X with N rows.
MatrixXd d_rows(const DifferenceMatrix& D, const MatrixXd& X) {
    MatrixXd out = MatrixXd::Zero(D.N - D.K, X.cols());
    for (int j = 0; j <= D.K; ++j) out += D.stencil[j] * X.middleRows(j, D.N - D.K);
    return out;
}

// One projected gradient step from z = a1 A + a2 B, whose residual is a1 FA + a2 FB.
// Writes u, its residual Fu, and returns ||Fu||^2. u and Fu never alias A, B, FA, FB.
using StepKernel = std::function<double(double a1, const MatrixXd& A, const MatrixXd& FA, double a2,
                                        const MatrixXd& B, const MatrixXd& FB, MatrixXd& u, MatrixXd& Fu)>;

// Monotone FISTA on c(Y) = ||Gf^T(Gf - Y D)||_F^2, iterated on W = Y^T so the
// recursions run along the storage order. The residual F(W) = D^T W Gf - Gf^T Gf is
// affine, so F at the extrapolated point is a combination of residuals already computed.
FactorizedFilter run_apgd(const StepKernel& step, const std::function<MatrixXd(const MatrixXd&)>& residual,
                          double L, const DifferenceMatrix& D, const MatrixXd& G1_init, const ApgdOptions& opt) {
    const int N = D.N;
    if (G1_init.rows() != N || G1_init.cols() != N - D.K)
        throw ShapeError("initial factor must be N x (N-K)");

    // Buffers: current x, previous x, trial u, spare.
    MatrixXd W[4], F[4];
    int ix = 0, iprev = 1, iu = 2, isp = 3;
    W[ix] = G1_init.transpose();
    project_upper(W[ix]);
    F[ix] = residual(W[ix]);
    W[iprev] = W[ix];
    F[iprev] = F[ix];
    for (int i : {iu, isp}) {
        W[i].setZero(N - D.K, N);
        F[i].resize(N, N);
    }
    double cx = F[ix].squaredNorm();
    // z = a1 W[iA] + a2 W[iB]
    int iA = ix, iB = iprev;
    double a1 = 1.0, a2 = 0.0;
    double t = 1.0;

    FactorizedFilter out;
    out.D = D;
    out.K = D.K;
    out.lipschitz = L;
    if (opt.record_trace) out.cost_trace.push_back(cx);

    int k = 0;
    bool done = false;
    for (k = 1; k <= opt.kmax; ++k) {
        const double cu = step(a1, W[iA], F[iA], a2, W[iB], F[iB], W[iu], F[iu]);
        const double tn = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        if (cu <= cx) {
            const double change = cx - cu;
            cx = cu;
            if (opt.record_trace) out.cost_trace.push_back(cx);
            if (change < opt.eps) done = true;
            const int old_prev = iprev;
            iprev = ix;
            ix = iu;
            iu = old_prev;
            // z = x + (t-1)/tn (x - xprev)
            const double a = (t - 1.0) / tn;
            iA = ix, iB = iprev, a1 = 1.0 + a, a2 = -a;
        } else {
            // x is kept, so the next accepted step treats it as the previous iterate too.
            std::swap(iu, isp);
            // z = x + t/tn (u - x)
            const double a = t / tn;
            iA = ix, iB = isp, a1 = 1.0 - a, a2 = a;
        }
        t = tn;
        if (done) break;
    }

    out.G1 = W[ix].transpose();
    out.final_error = cx;
    out.iterations = std::min(k, opt.kmax);
    out.converged = done;
    if (!done && opt.throw_on_cap)
        throw NoConvergence<FactorizedFilter>("factorization hit the iteration cap", std::move(out));
    return out;
}

double lipschitz_bound(const std::function<VectorXd(const VectorXd&)>& gtg, const DifferenceMatrix& D) {
    const double lg = power_iteration(gtg, D.N);
    const double ld = power_iteration([&](const VectorXd& v) { return D.apply(D.apply_transpose(v)); }, D.N - D.K);
    return kLipschitzSafety * lg * ld;
}

// Runs the recursion along the columns of an n x N block. At time k, begin(k) returns a
// pointer to the input column and out(i, y) receives output sample i; end(k) runs after
// the column. The state update for all n signals is one loop.
template <int M, class Begin, class Out, class End>
void recurse_columns_fixed(const StateSpaceModel& ss, Eigen::Index n, int N, bool reverse, Begin& begin,
                           Out& out, End& end) {
    double A[M][M], B[M], C[M];
    for (int r = 0; r < M; ++r) {
        B[r] = ss.B(r);
        C[r] = ss.C(r);
        for (int q = 0; q < M; ++q) A[r][q] = ss.A(r, q);
    }
    const double Dd = ss.D;
    // One contiguous array per state variable so the loop over signals vectorizes.
    MatrixXd S = MatrixXd::Zero(n, M);
    double* sp[M];
    for (int r = 0; r < M; ++r) sp[r] = S.col(r).data();
    for (int step = 0; step < N; ++step) {
        const int k = reverse ? N - 1 - step : step;
        const double* __restrict xp = begin(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            double si[M];
            for (int r = 0; r < M; ++r) si[r] = sp[r][i];
            double yi = Dd * xp[i];
            for (int r = 0; r < M; ++r) yi += C[r] * si[r];
            for (int r = 0; r < M; ++r) {
                double acc = B[r] * xp[i];
                for (int q = 0; q < M; ++q) acc += A[r][q] * si[q];
                sp[r][i] = acc;
            }
            out(i, yi);
        }
        end(k);
    }
}

template <class Begin, class Out, class End>
void recurse_columns(const StateSpaceModel& ss, Eigen::Index n, int N, bool reverse, Begin&& begin, Out&& out,
                     End&& end) {
    switch (ss.order()) {
        case 1: return recurse_columns_fixed<1>(ss, n, N, reverse, begin, out, end);
        case 2: return recurse_columns_fixed<2>(ss, n, N, reverse, begin, out, end);
        case 3: return recurse_columns_fixed<3>(ss, n, N, reverse, begin, out, end);
        case 4: return recurse_columns_fixed<4>(ss, n, N, reverse, begin, out, end);
        case 6: return recurse_columns_fixed<6>(ss, n, N, reverse, begin, out, end);
        case 8: return recurse_columns_fixed<8>(ss, n, N, reverse, begin, out, end);
        default: break;
    }
    const int m = ss.order();
    MatrixXd S = MatrixXd::Zero(n, m);
    VectorXd nxt(m);
    for (int s = 0; s < N; ++s) {
        const int k = reverse ? N - 1 - s : s;
        const double* xp = begin(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto si = S.row(i);
            out(i, ss.D * xp[i] + ss.C.dot(si));
            nxt = ss.A * si.transpose() + ss.B * xp[i];
            S.row(i) = nxt.transpose();
        }
        end(k);
    }
}

}  // namespace

FactorizedFilter apgd_factorize(const MatrixXd& Gf, const DifferenceMatrix& D, const MatrixXd& G1_init,
                                const ApgdOptions& opt) {
    if (Gf.rows() != Gf.cols() || Gf.rows() != D.N) throw ShapeError("Gf must be N x N");
    const MatrixXd GtG = Gf.transpose() * Gf;
    const double L = lipschitz_bound([&](const VectorXd& v) -> VectorXd { return GtG * v; }, D);
    auto residual = [&](const MatrixXd& W) -> MatrixXd { return dt_rows(D, W) * Gf - GtG; };
    StepKernel step = [&](double a1, const MatrixXd& A, const MatrixXd& FA, double a2, const MatrixXd& B,
                          const MatrixXd& FB, MatrixXd& u, MatrixXd& Fu) {
        const MatrixXd Fz = a1 * FA + a2 * FB;
        u = a1 * A + a2 * B - d_rows(D, Fz * Gf.transpose()) / L;
        project_upper(u);
        Fu = residual(u);
        return Fu.squaredNorm();
    };
    FactorizedFilter f = run_apgd(step, residual, L, D, G1_init, opt);
    f.Gf = Gf;
    return f;
}

FactorizedFilter apgd_factorize(const StateSpaceModel& ss, const DifferenceMatrix& D, const MatrixXd& G1_init,
                                const ApgdOptions& opt) {
    const int N = D.N;
    const int NK = N - D.K;
    const MatrixXd Gf = build_impulse_matrix(ss, N);
    const double L = lipschitz_bound(
        [&](const VectorXd& v) -> VectorXd { return anticausal_filter(ss, causal_filter(ss, v)); }, D);
    const auto& st = D.stencil;

    const std::vector<double> h = impulse_response(ss, N);
    VectorXd hrev(N);  // hrev(N-1-t) = h(t), so row k of Gf is hrev.tail(k+1)
    for (int t = 0; t < N; ++t) hrev(N - 1 - t) = h[t];
    VectorXd x(N), y(N);
    // F(W) = (D^T W - Gf^T) Gf, one anticausal pass; returns ||F||^2.
    auto residual_into = [&](const MatrixXd& W, MatrixXd& F) {
        double c = 0.0;
        double* fk = nullptr;
        recurse_columns(
            ss, N, N, true,
            [&](int k) -> const double* {
                // W is upper triangular: column k is zero below row k.
                const int hk = std::min(k + 1, NK);
                x.setZero();
                for (int j = 0; j <= D.K; ++j) x.segment(j, hk) += st[j] * W.col(k).head(hk);
                x.head(k + 1) -= hrev.tail(k + 1);
                fk = F.col(k).data();
                return x.data();
            },
            [&](Eigen::Index i, double yi) { fk[i] = yi; },
            [&](int k) { c += F.col(k).squaredNorm(); });
        return c;
    };
    auto residual = [&](const MatrixXd& W) -> MatrixXd {
        MatrixXd F(N, N);
        residual_into(W, F);
        return F;
    };
    // Causal pass over Fz, then difference, step and projection column by column.
    StepKernel step = [&](double a1, const MatrixXd& A, const MatrixXd& FA, double a2, const MatrixXd& B,
                          const MatrixXd& FB, MatrixXd& u, MatrixXd& Fu) {
        const double inv = 1.0 / L;
        recurse_columns(
            ss, N, N, false,
            [&](int k) -> const double* {
                x = a1 * FA.col(k) + a2 * FB.col(k);
                return x.data();
            },
            [&](Eigen::Index i, double yi) { y(i) = yi; },
            [&](int k) {
                // The tail of every buffer column stays zero.
                const int h = std::min(k + 1, NK);
                auto uk = u.col(k).head(h);
                uk = a1 * A.col(k).head(h) + a2 * B.col(k).head(h);
                for (int j = 0; j <= D.K; ++j) uk -= (inv * st[j]) * y.segment(j, h);

            });
        return residual_into(u, Fu);
    };
    try {
        FactorizedFilter f = run_apgd(step, residual, L, D, G1_init, opt);
        f.Gf = Gf;
        return f;
    } catch (NoConvergence<FactorizedFilter>& e) {
        e.best.Gf = Gf;
        throw;
    }
}

FactorizedFilter factorize_filter(const CompositeFilter& f, int N, int K, const ApgdOptions& opt) {
    const DifferenceMatrix D = difference_matrix(N, K);
    const TransferFunction g1tf = deconvolve_factor(f.tf, K);
    std::vector<double> imp(N, 0.0);
    imp[0] = 1.0;
    const std::vector<double> g1 = tf_filter(g1tf, imp);
    return apgd_factorize(f.ss, D, factor_init(g1, N, K), opt);
}

double factorization_error(const StateSpaceModel& ss, const MatrixXd& G1, const DifferenceMatrix& D) {
    const int N = D.N;
    const MatrixXd G = build_impulse_matrix(ss, N);
    return (G.transpose() * (G - D.left_apply(G1))).squaredNorm();
}

double centered_filter_norm(const StateSpaceModel& ss, const MatrixXd& G1) {
    const Eigen::Index c = G1.cols() / 2;
    return anticausal_filter(ss, G1.col(c)).norm();
}

}  // namespace sassdpr
