#include "doctest.h"
#include "sassdpr/spectral.hpp"
#include "test_util.hpp"

using namespace sassdpr;
using testutil::pi;

namespace {
double mag(const StateSpaceModel& s, double w) { return std::abs(frequency_response(s, w)); }
}  // namespace

TEST_CASE("prototype closed forms") {
    auto t1 = design_prototype_lowpass(1, pi / 2);
    REQUIRE(t1.num.size() == 2);
    CHECK(t1.num[0] == doctest::Approx(0.5));
    CHECK(t1.num[1] == doctest::Approx(0.5));
    CHECK(t1.den[1] == doctest::Approx(0.0).epsilon(1e-12));

    auto t2 = design_prototype_lowpass(2, 0.1 * pi);
    auto ref = testutil::butter2(0.1 * pi);
    for (int i = 0; i < 3; ++i) {
        CHECK(t2.num[i] == doctest::Approx(ref.b[i]).epsilon(1e-10));
        CHECK(t2.den[i] == doctest::Approx(ref.a[i]).epsilon(1e-10));
    }
    CHECK(t2.den[1] == doctest::Approx(-1.561018).epsilon(1e-5));
    CHECK(t2.den[2] == doctest::Approx(0.641352).epsilon(1e-5));

    for (int M = 1; M <= 8; ++M) {
        auto t = design_prototype_lowpass(M, 0.3 * pi);
        CHECK(std::abs(tf_response(t, 0.0)) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(tf_response(t, 0.3 * pi)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(design_prototype_lowpass(0, 0.1), OrderError);
    CHECK_THROWS_AS(design_prototype_lowpass(9, 0.1), OrderError);
    CHECK_THROWS_AS(design_prototype_lowpass(2, 0.0), FrequencyError);
    CHECK_THROWS_AS(design_prototype_lowpass(2, pi), FrequencyError);
}

TEST_CASE("unit functions") {
    auto lp = make_unit_function(ResponseKind::LowPass, 0.3, 0.3);
    CHECK(lp.xi == doctest::Approx(0.0));
    CHECK(std::abs(tf_response(lp.tf, 0.7) - std::polar(1.0, -0.7)) < 1e-12);

    auto hp = make_unit_function(ResponseKind::HighPass, 0.1 * pi, 0.2 * pi);
    CHECK(hp.xi == doctest::Approx(0.902113).epsilon(1e-6));
    CHECK(std::abs(hp.xi) < 1.0);

    auto bp = make_unit_function(ResponseKind::BandPass, 0.1 * pi, 0.5 * pi);
    CHECK(bp.xi == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(tf_response(bp.tf, 0.4) + std::polar(1.0, -0.8)) < 1e-12);

    for (const auto& u : {lp, hp, bp})
        for (int k = 0; k < 64; ++k) CHECK(std::abs(tf_response(u.tf, pi * k / 63.0)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(make_unit_function(ResponseKind::HighPass, 0.0, 0.2), FrequencyError);
}

TEST_CASE("composition reproduces H(F) and the printed cutoffs") {
    auto lp = design_lowpass(2, 0.1 * pi);
    auto proto = balance_internally(tf_to_ss(design_prototype_lowpass(2, 0.1 * pi))).ss;
    for (int k = 0; k < 50; ++k) {
        const double w = pi * k / 49.0;
        CHECK(std::abs(frequency_response(lp.ss, w) - frequency_response(proto, w)) < 1e-10);
    }

    auto hp = design_highpass(2, 0.2 * pi, 0.1 * pi);
    CHECK(hp.ss.order() == 2);
    CHECK(mag(hp.ss, 0.2 * pi) * mag(hp.ss, 0.2 * pi) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(mag(hp.ss, 0.0) < 1e-8);

    auto bp = design_bandpass_center(2, 0.5 * pi, 0.1 * pi);
    CHECK(bp.ss.order() == 4);
    CHECK(mag(bp.ss, 0.5 * pi) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mag(bp.ss, 0.0) < 1e-8);
    CHECK(mag(bp.ss, pi) < 1e-8);
}

TEST_CASE("random compositions agree with the substitution") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.05, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
        const int M = 1 + trial % 4;
        const double w0 = U(rng) * pi, w1 = U(rng) * pi;
        const auto kind = static_cast<ResponseKind>(trial % 3);
        const auto ptf = design_prototype_lowpass(M, w0);
        const auto proto = balance_internally(tf_to_ss(ptf)).ss;
        const auto uf = make_unit_function(kind, w0, w1);
        const auto g = compose(proto, ptf, uf);
        double worst = 0.0;
        for (int k = 0; k < 128; ++k) {
            const double w = pi * k / 127.0;
            // H evaluated directly from its coefficients at z^-1 = 1/F(e^{jw}).
            const cplx zi = tf_response(uf.tf, w);
            cplx nb = 0.0, db = 0.0, p = 1.0;
            for (int i = 0; i <= M; ++i, p *= zi) {
                nb += ptf.num[i] * p;
                db += ptf.den[i] * p;
            }
            worst = std::max(worst, std::abs(frequency_response(g.ss, w) - nb / db));
            CHECK(std::abs(tf_response(g.tf, w) - nb / db) < 1e-7);
        }
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("balancedness carries over to the composite") {
    for (auto kind : {ResponseKind::LowPass, ResponseKind::HighPass, ResponseKind::BandPass}) {
        const auto ptf = design_prototype_lowpass(3, 0.15 * pi);
        const auto g = compose(balance_internally(tf_to_ss(ptf)).ss, ptf, make_unit_function(kind, 0.15 * pi, 0.3 * pi));
        const auto gr = solve_lyapunov(g.ss);
        CHECK((gr.Wr - gr.Wo).norm() < 1e-6 * gr.Wr.norm());
        const MatrixXd off = gr.Wr - MatrixXd(gr.Wr.diagonal().asDiagonal());
        CHECK(off.norm() < 1e-6 * gr.Wr.norm());
    }
}

TEST_CASE("high-pass and band-pass composites block constants") {
    for (const auto& g : {design_highpass(3, 0.2 * pi), design_bandpass(2, 0.2 * pi, 0.3 * pi)}) {
        auto tf = g.tf;
        std::vector<double> ones(3000, 1.0);
        auto y = tf_filter(tf, ones);
        CHECK(std::abs(y.back()) < 1e-6);
        // Same through the state-space model.
        VectorXd s = VectorXd::Zero(g.ss.order());
        double out = 0.0;
        for (int k = 0; k < 3000; ++k) {
            out = g.ss.C.dot(s) + g.ss.D;
            s = g.ss.A * s + g.ss.B;
        }
        CHECK(std::abs(out) < 1e-6);
    }
}

TEST_CASE("band-pass half-power points land on the requested edges") {
    const double w1 = 0.18 * pi, w2 = 0.34 * pi;
    for (int M : {1, 2, 4}) {
        auto g = design_bandpass(M, w1, w2);
        CHECK(g.cutoffs.size() == 2);
        for (double w : {w1, w2}) CHECK(mag(g.ss, w) * mag(g.ss, w) == doctest::Approx(0.5).epsilon(1e-3));
    }
    auto c = design_bandpass_center(2, 0.5 * pi, 0.1 * pi);
    for (double w : c.cutoffs) CHECK(mag(c.ss, w) * mag(c.ss, w) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK_THROWS_AS(bandpass_center(0.3, 0.2), FrequencyError);
}

TEST_CASE("response kind strings") {
    CHECK(parse_response_kind("hp") == ResponseKind::HighPass);
    CHECK(to_string(ResponseKind::BandPass) == "bp");
    CHECK_THROWS_AS(parse_response_kind("notch"), ParameterError);
}
