#include "doctest.h"
#include "sassdpr/zerophase.hpp"
#include "test_util.hpp"

using namespace sassdpr;
using testutil::pi;

TEST_CASE("impulse matrix structure") {
    auto id = tf_to_ss({{1.0}, {1.0}});
    CHECK(build_impulse_matrix(id, 3).isApprox(MatrixXd::Identity(3, 3)));

    auto d = tf_to_ss({{0.0, 1.0}, {1.0, -0.5}});
    MatrixXd G = build_impulse_matrix(d, 3);
    MatrixXd ref(3, 3);
    ref << 0, 0, 0, 1, 0, 0, 0.5, 1, 0;
    CHECK((G - ref).norm() < 1e-14);

    auto hp = design_highpass(4, 0.2 * pi);
    MatrixXd Gh = build_impulse_matrix(hp.ss, 100);
    for (int i = 60; i < 100; ++i) CHECK(std::abs(Gh.row(i).sum()) < 1e-6);
}

TEST_CASE("causal and anticausal passes against convolution") {
    auto g = design_bandpass(2, 0.2 * pi, 0.3 * pi);
    const int N = 200;
    const auto h = impulse_response(g.ss, N);
    VectorXd u = testutil::randn(N, 3);
    CHECK((causal_filter(g.ss, u) - testutil::convolve_causal(h, u)).norm() < 1e-10 * u.norm());
    VectorXd ur = u.reverse();
    VectorXd back = testutil::convolve_causal(h, ur).reverse();
    CHECK((anticausal_filter(g.ss, u) - back).norm() < 1e-10 * u.norm());

    MatrixXd X(N, 3);
    for (int c = 0; c < 3; ++c) X.col(c) = testutil::randn(N, 10 + c);
    CHECK((causal_filter_rows(g.ss, X.transpose()) - causal_filter(g.ss, X).transpose()).norm() < 1e-12);
    CHECK((anticausal_filter_rows(g.ss, X.transpose()) - anticausal_filter(g.ss, X).transpose()).norm() < 1e-12);
}

TEST_CASE("backward realization generates the transposed matrix") {
    auto g = design_highpass(2, 0.2 * pi);
    auto b = backward_realization(g.ss);
    const int N = 40;
    // Entry (i, i+k) of the upper-triangular matrix is Db for k = 0, else Cb Ab^(-k-1) Bb.
    const MatrixXd Abinv = b.Ab.inverse();
    MatrixXd Gb = MatrixXd::Zero(N, N), P = Abinv * Abinv;
    for (int k = 0; k < N; ++k) {
        const double gk = k == 0 ? b.Db : (b.Cb * P * b.Bb)(0);
        if (k > 0) P = P * Abinv;
        for (int i = 0; i + k < N; ++i) Gb(i, i + k) = gk;
    }
    const MatrixXd G = build_impulse_matrix(g.ss, N);
    CHECK((Gb - G.transpose()).norm() < 1e-10 * G.norm());
    // The anticausal recursion realizes the same matrix.
    VectorXd x = testutil::randn(N, 5);
    CHECK((anticausal_filter(g.ss, x) - Gb * x).norm() < 1e-10 * x.norm());
    StateSpaceModel sing = g.ss;
    sing.A.setZero();
    CHECK_THROWS_AS(backward_realization(sing), SingularTransform);
}

TEST_CASE("matrix and recursion paths agree") {
    for (int M : {2, 4, 6, 8})
        for (int N : {64, 256, 1024}) {
            ZeroPhaseOperator op(design_highpass(M, 0.2 * pi), N, {}, true);
            const int trials = N == 1024 ? 10 : 50;
            double worst = 0.0;
            for (int t = 0; t < trials; ++t) {
                VectorXd u = testutil::randn(N, 100 * M + t);
                worst = std::max(worst, (op.apply(u, ApplyPath::Matrix) - op.apply(u)).norm() / u.norm());
            }
            CHECK(worst < 1e-8);
        }
}

TEST_CASE("batched application matches column by column") {
    ZeroPhaseOperator op(design_lowpass(3, 0.1 * pi), 300);
    MatrixXd X(300, 4);
    for (int c = 0; c < 4; ++c) X.col(c) = testutil::randn(300, 40 + c);
    MatrixXd Y = op.apply_columns(X);
    for (int c = 0; c < 4; ++c) CHECK((Y.col(c) - op.apply(VectorXd(X.col(c)))).norm() < 1e-12);
}

TEST_CASE("zero phase: centered impulse is symmetric") {
    for (const auto& g : {design_highpass(4, 0.2 * pi), design_lowpass(2, 0.1 * pi), design_bandpass(3, 0.1 * pi, 0.2 * pi)}) {
        const int N = 20 * g.ss.order() * 10 + 1;
        ZeroPhaseOperator op(g, N);
        VectorXd e = VectorXd::Zero(N);
        e(N / 2) = 1.0;
        VectorXd r = op.apply(e);
        CHECK((r - VectorXd(r.reverse())).cwiseAbs().maxCoeff() < 1e-6 * r.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("magnitude is squared") {
    auto g = design_highpass(2, 0.2 * pi);
    const int N = 1024;
    ZeroPhaseOperator op(g, N);
    VectorXd e = VectorXd::Zero(N);
    e(N / 2) = 1.0;
    VectorXd r = op.apply(e);
    for (int k = 0; k < 64; ++k) {
        const double w = pi * k / 63.0;
        cplx acc = 0.0;
        for (int n = 0; n < N; ++n) acc += r(n) * std::polar(1.0, -w * (n - N / 2));
        const double m = std::abs(frequency_response(g.ss, w));
        CHECK(std::abs(std::abs(acc) - m * m) < 1e-4);
    }
}

TEST_CASE("DC gain and zero input") {
    ZeroPhaseOperator op(design_lowpass(2, 0.1 * pi), 400);
    VectorXd y = op.apply(VectorXd::Ones(400));
    for (int i = 100; i < 300; ++i) CHECK(y(i) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(op.apply(VectorXd::Zero(400)).norm() == 0.0);
    CHECK_THROWS_AS(op.apply(VectorXd::Zero(10)), LengthMismatch);
    CHECK_THROWS_AS(apply_zero_phase(op, VectorXd::Zero(10)), LengthMismatch);
    CHECK(op.has_matrix());
    ZeroPhaseOperator big(design_lowpass(2, 0.1 * pi), 3000);
    CHECK_FALSE(big.has_matrix());
    CHECK_THROWS_AS(big.Gf(), ParameterError);
}

TEST_CASE("low-pass and high-pass from one prototype are complementary") {
    const int N = 1000;
    const double wc = 0.1 * pi;
    ZeroPhaseOperator L(design_lowpass(2, wc), N), H(design_highpass(2, wc), N);
    for (int t = 0; t < 5; ++t) {
        VectorXd v = testutil::randn(N, 70 + t);
        VectorXd d = (v - L.apply(v)) - H.apply(v);
        // Finite matrices break the identity only through the edge transients.
        CHECK(d.segment(200, 600).norm() < 1e-3 * v.norm());
    }
}

TEST_CASE("padding") {
    CHECK(pad_length(200) == 40);
    CHECK(pad_length(100) == 20);
    VectorXd c = VectorXd::Constant(50, 2.5);
    auto p0 = pad_signal_with(c, 10, 0);
    CHECK(p0.y.size() == 70);
    CHECK((p0.y.array() - 2.5).abs().maxCoeff() < 1e-12);

    VectorXd ramp = VectorXd::LinSpaced(80, 0, 79);
    auto p1 = pad_signal_with(ramp, 20, 1);
    for (int i = 0; i < p1.y.size(); ++i) CHECK(p1.y(i) == doctest::Approx(i - 20.0).epsilon(1e-10));

    VectorXd q(60);
    for (int i = 0; i < 60; ++i) q(i) = 0.01 * i * i - 0.3 * i + 1;
    auto p2 = pad_signal_with(q, 15, 2);
    for (int i = 0; i < p2.y.size(); ++i) {
        const double t = i - 15.0;
        CHECK(p2.y(i) == doctest::Approx(0.01 * t * t - 0.3 * t + 1).epsilon(1e-8));
    }

    VectorXd s = testutil::randn(6000, 1);
    auto ps = pad_signal(s, 200.0, 1);
    CHECK(ps.P == 40);
    ZeroPhaseOperator op(design_lowpass(2, 0.1 * pi), static_cast<int>(ps.y.size()));
    CHECK(unpad_signal(op.apply(ps.y), ps.P).size() == 6000);
    CHECK((unpad_signal(ps.y, ps.P) - s).norm() == 0.0);
    CHECK(unpad_signal(s, 0).size() == 6000);
    CHECK_THROWS_AS(pad_signal_with(VectorXd::Ones(5), 10, 1), TooShort);
    CHECK_THROWS_AS(unpad_signal(VectorXd::Ones(5), 3), LengthMismatch);
}
