#include "sassdpr/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace sassdpr {

namespace {

constexpr double kStabilityMargin = 1e-9;
constexpr double kMaxLyapunovCond = 1e12;

MatrixXd companion(const std::vector<double>& den) {
    const int m = static_cast<int>(den.size()) - 1;
    MatrixXd A = MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) A(0, j) = -den[j + 1];
    for (int i = 1; i < m; ++i) A(i, i - 1) = 1.0;
    return A;
}

}  // namespace

std::vector<cplx> tf_poles(const TransferFunction& tf) {
    if (tf.den.size() <= 1) return {};
    Eigen::EigenSolver<MatrixXd> es(companion(tf.den), false);
    std::vector<cplx> out;
    for (int i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

cplx tf_response(const TransferFunction& tf, double omega) {
    const cplx zinv = std::polar(1.0, -omega);
    auto horner = [&](const std::vector<double>& c) {
        cplx acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * zinv + *it;
        return acc;
    };
    return horner(tf.num) / horner(tf.den);
}

std::vector<double> tf_filter(const TransferFunction& tf, const std::vector<double>& x) {
    std::vector<double> y(x.size(), 0.0);
    const double a0 = tf.den.at(0);
    for (size_t k = 0; k < x.size(); ++k) {
        double acc = 0.0;
        for (size_t i = 0; i < tf.num.size() && i <= k; ++i) acc += tf.num[i] * x[k - i];
        for (size_t i = 1; i < tf.den.size() && i <= k; ++i) acc -= tf.den[i] * y[k - i];
        y[k] = acc / a0;
    }
    return y;
}

double spectral_radius(const MatrixXd& A) {
    if (A.rows() == 0) return 0.0;
    Eigen::EigenSolver<MatrixXd> es(A, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

StateSpaceModel tf_to_ss(const TransferFunction& tf) {
    if (tf.den.empty() || tf.num.empty()) throw DegreeError("empty coefficient list");
    if (tf.den[0] != 1.0) throw DegreeError("den[0] must be 1");
    const int ma = tf.den_degree();
    if (tf.num_degree() > ma)
        throw DegreeError("numerator degree " + std::to_string(tf.num_degree()) +
                          " exceeds denominator degree " + std::to_string(ma));
    for (const cplx& p : tf_poles(tf)) {
        if (std::abs(p) >= 1.0 - kStabilityMargin)
            throw UnstableFilter("pole with modulus " + std::to_string(std::abs(p)));
    }

    std::vector<double> b(tf.num);
    b.resize(ma + 1, 0.0);

    StateSpaceModel ss;
    ss.A = companion(tf.den);
    ss.B = VectorXd::Zero(ma);
    if (ma > 0) ss.B(0) = 1.0;
    ss.C = RowVectorXd(ma);
    for (int i = 1; i <= ma; ++i) ss.C(i - 1) = b[i] - tf.den[i] * b[0];
    ss.D = b[0];
    return ss;
}

std::vector<double> impulse_response(const StateSpaceModel& ss, int n) {
    std::vector<double> h(std::max(n, 0), 0.0);
    if (n <= 0) return h;
    h[0] = ss.D;
    VectorXd s = ss.B;
    for (int k = 1; k < n; ++k) {
        h[k] = ss.C.dot(s);
        s = ss.A * s;
    }
    return h;
}

namespace {

// Solves W = A W A^T + Q through the Kronecker system.
MatrixXd stein(const MatrixXd& A, const MatrixXd& Q) {
    const int m = static_cast<int>(A.rows());
    const int m2 = m * m;
    MatrixXd K = MatrixXd::Identity(m2, m2);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (A(i, j) != 0.0) K.block(i * m, j * m, m, m) -= A(i, j) * A;
    Eigen::PartialPivLU<MatrixXd> lu(K);
    const double rc = lu.rcond();
    if (!(rc > 1.0 / kMaxLyapunovCond))
        throw SingularLyapunov("I - A(x)A condition estimate " + std::to_string(1.0 / rc));
    // vec stacks columns; the (i,j) block layout above makes (A (x) A) vec(W) = vec(A W A^T).
    VectorXd q = Eigen::Map<const VectorXd>(Q.data(), m2);
    VectorXd w = lu.solve(q);
    MatrixXd W = Eigen::Map<MatrixXd>(w.data(), m, m);
    return 0.5 * (W + W.transpose());
}

}  // namespace

GramianPair solve_lyapunov(const StateSpaceModel& ss) {
    GramianPair g;
    g.Wr = stein(ss.A, ss.B * ss.B.transpose());
    g.Wo = stein(ss.A.transpose(), ss.C.transpose() * ss.C);
    return g;
}

StateSpaceModel similarity_transform(const StateSpaceModel& ss, const MatrixXd& T) {
    if (T.rows() != ss.order() || T.cols() != ss.order())
        throw SingularTransform("transform shape does not match state dimension");
    Eigen::PartialPivLU<MatrixXd> lu(T);
    if (ss.order() > 0 && std::abs(lu.determinant()) <= 1e-12)
        throw SingularTransform("|det T| below 1e-12");
    StateSpaceModel out;
    out.A = lu.solve(ss.A * T);
    out.B = lu.solve(ss.B);
    out.C = ss.C * T;
    out.D = ss.D;
    return out;
}

BalancedRealization balance_internally(const StateSpaceModel& ss) {
    const int m = ss.order();
    const GramianPair g = ss.gramians ? *ss.gramians : solve_lyapunov(ss);

    Eigen::LLT<MatrixXd> cr(g.Wr), co(g.Wo);
    if (cr.info() != Eigen::Success) throw NotPositiveDefinite("reachability Gramian is not SPD");
    if (co.info() != Eigen::Success) throw NotPositiveDefinite("observability Gramian is not SPD");
    const MatrixXd Lr = cr.matrixL();
    const MatrixXd Lo = co.matrixL();

    Eigen::JacobiSVD<MatrixXd> svd(Lo.transpose() * Lr, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd sigma = svd.singularValues();
    if (m > 0 && !(sigma.minCoeff() > 0.0)) throw NotPositiveDefinite("zero Hankel singular value");
    const VectorXd isq = sigma.cwiseSqrt().cwiseInverse();

    BalancedRealization out;
    out.T = Lr * svd.matrixV() * isq.asDiagonal();
    const MatrixXd Tinv = isq.asDiagonal() * svd.matrixU().transpose() * Lo.transpose();
    out.ss.A = Tinv * ss.A * out.T;
    out.ss.B = Tinv * ss.B;
    out.ss.C = ss.C * out.T;
    out.ss.D = ss.D;
    out.sigma = sigma;
    out.ss.gramians = GramianPair{MatrixXd(sigma.asDiagonal()), MatrixXd(sigma.asDiagonal())};
    return out;
}

}  // namespace sassdpr
