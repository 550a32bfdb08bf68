#include "doctest.h"
#include "sassdpr/factorization.hpp"
#include "test_util.hpp"

using namespace sassdpr;
using testutil::pi;

namespace {
CompositeFilter table_hp() { return design_highpass(2, 0.2 * pi, 0.1 * pi); }
}  // namespace

TEST_CASE("difference matrix") {
    auto D = difference_matrix(4, 1);
    MatrixXd ref(3, 4);
    ref << -1, 1, 0, 0, 0, -1, 1, 0, 0, 0, -1, 1;
    CHECK((D.dense() - ref).norm() == 0.0);
    auto D2 = difference_matrix(10, 2);
    CHECK(D2.stencil == std::vector<double>{1, -2, 1});
    auto D3 = difference_matrix(12, 3);
    CHECK(D3.stencil == std::vector<double>{-1, 3, -3, 1});
    for (int d = 0; d < 3; ++d) {
        VectorXd p(12);
        for (int n = 0; n < 12; ++n) p(n) = std::pow(n, d);
        CHECK(D3.apply(p).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(D2.apply(VectorXd::Ones(10)).norm() == 0.0);
    VectorXd x = testutil::randn(10, 1), v = testutil::randn(8, 2);
    CHECK((D2.apply(x) - D2.dense() * x).norm() < 1e-12);
    CHECK((D2.apply_transpose(v) - D2.dense().transpose() * v).norm() < 1e-12);
    MatrixXd X = MatrixXd::Random(3, 10), Y = MatrixXd::Random(3, 8);
    CHECK((D2.right_multiply_transpose(X) - X * D2.dense().transpose()).norm() < 1e-12);
    CHECK((D2.left_apply(Y) - Y * D2.dense()).norm() < 1e-12);
    CHECK_THROWS_AS(difference_matrix(3, 3), OrderError);
    CHECK_THROWS_AS(difference_matrix(3, 0), OrderError);
}

TEST_CASE("integration matrix") {
    MatrixXd S = integration_matrix(3);
    MatrixXd ref(3, 2);
    ref << 0, 0, 1, 0, 1, 1;
    CHECK((S - ref).norm() == 0.0);
    MatrixXd S8 = integration_matrix(8);
    CHECK((difference_matrix(8, 1).dense() * S8 - MatrixXd::Identity(7, 7)).norm() == 0.0);
    VectorXd e1 = VectorXd::Zero(7);
    e1(0) = 1;
    VectorXd c = S8 * e1;
    CHECK(c(0) == 0.0);
    CHECK((c.tail(7).array() == 1.0).all());
    VectorXd v = testutil::randn(7, 4);
    CHECK((integrate(v, 1) - S8 * v).norm() < 1e-12);
    VectorXd w = testutil::randn(6, 5);
    CHECK((difference_matrix(8, 2).apply(integrate(w, 2)) - w).norm() < 1e-12);
    CHECK_THROWS_AS(integration_matrix(1), OrderError);
}

TEST_CASE("deconvolution by (1 - z^-1)^K") {
    auto a = deconvolve_factor({{1.0, -1.0}, {1.0}}, 1);
    CHECK(a.num.size() == 1);
    CHECK(a.num[0] == doctest::Approx(1.0));
    auto b = deconvolve_factor({{1.0, -2.0, 1.0}, {1.0}}, 1);
    REQUIRE(b.num.size() == 2);
    CHECK(b.num[0] == doctest::Approx(1.0));
    CHECK(b.num[1] == doctest::Approx(-1.0));
    auto hp = table_hp();
    CHECK_NOTHROW(deconvolve_factor(hp.tf, 2));
    CHECK_THROWS_AS(deconvolve_factor(hp.tf, 3), NotFactorable);
    CHECK_THROWS_AS(deconvolve_factor(design_lowpass(2, 0.2 * pi).tf, 1), NotFactorable);
}

TEST_CASE("initial factor reproduces the filter") {
    auto hp = table_hp();
    const int N = 80;
    const auto h = impulse_response(hp.ss, N);
    for (int K : {1, 2}) {
        std::vector<double> imp(N, 0.0);
        imp[0] = 1.0;
        const auto g1 = tf_filter(deconvolve_factor(hp.tf, K), imp);
        // Second route: K running sums of the impulse response.
        std::vector<double> c = h;
        for (int r = 0; r < K; ++r)
            for (int n = 1; n < N; ++n) c[n] += c[n - 1];
        for (int n = 0; n < N; ++n) CHECK(g1[n] == doctest::Approx(c[n]).epsilon(1e-9).scale(1.0));
        const MatrixXd G1 = factor_init(g1, N, K);
        const MatrixXd G = build_impulse_matrix(hp.ss, N);
        const MatrixXd R = G1 * difference_matrix(N, K).dense();
        CHECK((R.rightCols(N - K) - G.rightCols(N - K)).norm() < 1e-10);
    }
}

TEST_CASE("recursion and dense routes agree") {
    auto hp = table_hp();
    const int N = 60;
    const MatrixXd G = build_impulse_matrix(hp.ss, N);
    for (int K : {1, 2}) {
        std::vector<double> imp(N, 0.0);
        imp[0] = 1.0;
        const MatrixXd G1 = factor_init(tf_filter(deconvolve_factor(hp.tf, K), imp), N, K);
        const auto D = difference_matrix(N, K);
        ApgdOptions o;
        o.kmax = 300;
        o.throw_on_cap = false;
        auto a = apgd_factorize(G, D, G1, o);
        auto b = apgd_factorize(hp.ss, D, G1, o);
        CHECK(a.iterations == b.iterations);
        CHECK(a.final_error == doctest::Approx(b.final_error).epsilon(1e-9));
        CHECK((a.G1 - b.G1).norm() < 1e-8 * a.G1.norm());
        CHECK((a.Gf - G).norm() == 0.0);
    }
}

TEST_CASE("factorization invariants") {
    auto hp = table_hp();
    const int N = 100, K = 2;
    ApgdOptions o;
    o.record_trace = true;
    auto f = factorize_filter(hp, N, K, o);
    CHECK(f.converged);
    for (int j = 0; j < f.G1.cols(); ++j)
        for (int i = 0; i < std::min<int>(j, N); ++i) CHECK(f.G1(i, j) == 0.0);
    CHECK(f.final_error == doctest::Approx(factorization_error(hp.ss, f.G1, f.D)).epsilon(1e-9));
    for (size_t k = 1; k < f.cost_trace.size(); ++k) CHECK(f.cost_trace[k] <= f.cost_trace[k - 1] + 1e-9);
    CHECK(f.cost_trace.back() < f.cost_trace.front());

    const MatrixXd Z = f.Gf.transpose() * f.G1 * f.D.dense();
    CHECK((Z * VectorXd::Ones(N)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(f.final_error == doctest::Approx(0.2044).epsilon(0.10));
}

TEST_CASE("factored filter keeps zero phase") {
    auto hp = table_hp();
    const int N = 201;
    auto f = factorize_filter(hp, N, 1);
    VectorXd e = VectorXd::Zero(N);
    e(N / 2) = 1.0;
    VectorXd r = f.Gf.transpose() * (f.G1 * f.D.apply(e));
    const double asym = (r - VectorXd(r.reverse())).cwiseAbs().maxCoeff();
    CHECK(asym < 1e-3 * r.cwiseAbs().maxCoeff());
}

TEST_CASE("iteration cap") {
    auto hp = table_hp();
    ApgdOptions o;
    o.kmax = 5;
    try {
        factorize_filter(hp, 50, 1, o);
        FAIL("expected NoConvergence");
    } catch (const NoConvergence<FactorizedFilter>& e) {
        CHECK(e.best.iterations == 5);
        CHECK_FALSE(e.best.converged);
        CHECK(e.best.G1.rows() == 50);
        CHECK(e.best.final_error > 0.0);
    }
}

TEST_CASE("power iteration") {
    MatrixXd A = MatrixXd::Zero(4, 4);
    A.diagonal() << 1, 2, 3, 7;
    CHECK(power_iteration([&](const VectorXd& v) -> VectorXd { return A * v; }, 4, 200, 1e-12) ==
          doctest::Approx(7.0).epsilon(1e-8));
}
