#include "sassdpr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "sassdpr/poly.hpp"

namespace sassdpr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kValidationPoints = 128;
constexpr double kValidationTol = 1e-7;

void check_frequency(double w, const char* name) {
    if (!(w > 0.0 && w < kPi)) throw FrequencyError(std::string(name) + " must lie in (0, pi)");
}

}  // namespace

std::string to_string(ResponseKind k) {
    switch (k) {
        case ResponseKind::LowPass: return "lp";
        case ResponseKind::HighPass: return "hp";
        case ResponseKind::BandPass: return "bp";
    }
    return "?";
}

ResponseKind parse_response_kind(const std::string& s) {
    if (s == "lp" || s == "lowpass") return ResponseKind::LowPass;
    if (s == "hp" || s == "highpass") return ResponseKind::HighPass;
    if (s == "bp" || s == "bandpass") return ResponseKind::BandPass;
    throw ParameterError("unknown response kind '" + s + "'");
}

namespace {

std::vector<cplx> prototype_poles(int M, double omega0) {
    if (M < 1 || M > 8) throw OrderError("prototype order must be in 1..8");
    check_frequency(omega0, "omega0");
    const double wc = std::tan(omega0 / 2.0);
    std::vector<cplx> poles;
    for (int k = 0; k < M; ++k) {
        const cplx s = wc * std::polar(1.0, kPi * (2.0 * k + M + 1) / (2.0 * M));
        poles.push_back((1.0 + s) / (1.0 - s));
    }
    return poles;
}

// x2 driven by the output of the first system.
StateSpaceModel series(const StateSpaceModel& a, const StateSpaceModel& b) {
    const int m1 = a.order(), m2 = b.order();
    StateSpaceModel s;
    s.A = MatrixXd::Zero(m1 + m2, m1 + m2);
    s.A.topLeftCorner(m1, m1) = a.A;
    s.A.bottomLeftCorner(m2, m1) = b.B * a.C;
    s.A.bottomRightCorner(m2, m2) = b.A;
    s.B = VectorXd(m1 + m2);
    s.B << a.B, b.B * a.D;
    s.C = RowVectorXd(m1 + m2);
    s.C << b.D * a.C, b.C;
    s.D = b.D * a.D;
    return s;
}

// Unit-DC-gain sections (1 + z^-1)^r / (pole polynomial), complex pairs in real normal form.
// The companion form of the full prototype is badly conditioned once the poles cluster near 1.
StateSpaceModel cascade_realization(const std::vector<cplx>& poles) {
    StateSpaceModel total;
    bool first = true;
    for (const cplx& p : poles) {
        StateSpaceModel sec;
        if (std::abs(p.imag()) < 1e-12) {
            const double g = (1.0 - p.real()) / 2.0;
            sec = tf_to_ss({{g, g}, {1.0, -p.real()}});
        } else if (p.imag() > 0.0) {
            const double a1 = -2.0 * p.real(), a2 = std::norm(p);
            const double g = (1.0 + a1 + a2) / 4.0;
            sec = tf_to_ss({{g, 2.0 * g, g}, {1.0, a1, a2}});
            Eigen::EigenSolver<MatrixXd> es(sec.A);
            int idx = es.eigenvalues()(0).imag() > 0.0 ? 0 : 1;
            const Eigen::VectorXcd v = es.eigenvectors().col(idx);
            MatrixXd T(2, 2);
            T.col(0) = v.real();
            T.col(1) = v.imag();
            sec = similarity_transform(sec, T);
        } else {
            continue;
        }
        total = first ? sec : series(total, sec);
        first = false;
    }
    return total;
}

}  // namespace

TransferFunction design_prototype_lowpass(int M, double omega0) {
    const std::vector<cplx> poles = prototype_poles(M, omega0);
    TransferFunction tf;
    tf.den = poly::from_roots(poles);
    tf.num = poly::binomial_power(1.0, 1.0, M);  // (1 + z^-1)^M
    double sden = 0.0;
    for (double a : tf.den) sden += a;
    const double g = sden / std::pow(2.0, M);
    for (double& b : tf.num) b *= g;
    return tf;
}

UnitFunction make_unit_function(ResponseKind kind, double omega0, double omega1) {
    check_frequency(omega0, "omega0");
    check_frequency(omega1, "omega1");
    UnitFunction uf;
    uf.kind = kind;
    switch (kind) {
        case ResponseKind::LowPass:
            uf.xi = std::sin((omega0 - omega1) / 2.0) / std::sin((omega0 + omega1) / 2.0);
            uf.tf = {{-uf.xi, 1.0}, {1.0, -uf.xi}};
            uf.L = 1;
            break;
        case ResponseKind::HighPass:
            uf.xi = std::cos((omega0 + omega1) / 2.0) / std::cos((omega0 - omega1) / 2.0);
            uf.tf = {{uf.xi, -1.0}, {1.0, -uf.xi}};
            uf.L = 1;
            break;
        case ResponseKind::BandPass:
            uf.xi = std::cos(omega1);
            uf.tf = {{0.0, uf.xi, -1.0}, {1.0, -uf.xi, 0.0}};
            uf.L = 2;
            break;
    }
    uf.ss = balance_internally(tf_to_ss(uf.tf)).ss;
    return uf;
}

cplx evaluate_at(const StateSpaceModel& ss, cplx w) {
    const int m = ss.order();
    if (m == 0) return ss.D;
    const Eigen::MatrixXcd K =
        Eigen::MatrixXcd::Identity(m, m) - w * ss.A.cast<cplx>();
    const Eigen::VectorXcd x = K.partialPivLu().solve(ss.B.cast<cplx>());
    return ss.D + w * (ss.C.cast<cplx>() * x)(0);
}

cplx frequency_response(const StateSpaceModel& ss, double omega) {
    return evaluate_at(ss, std::polar(1.0, -omega));
}

std::vector<cplx> frequency_response(const StateSpaceModel& ss, const std::vector<double>& omegas) {
    std::vector<cplx> out;
    out.reserve(omegas.size());
    for (double w : omegas) out.push_back(frequency_response(ss, w));
    return out;
}

CompositeFilter compose(const StateSpaceModel& proto, const TransferFunction& proto_tf,
                        const UnitFunction& uf) {
    const int M = proto.order();
    const StateSpaceModel& f = uf.ss;
    const MatrixXd IM = MatrixXd::Identity(M, M);
    const double delta = f.D;
    const MatrixXd R = (IM - delta * proto.A).inverse();

    CompositeFilter out;
    StateSpaceModel& g = out.ss;
    const MatrixXd AR = proto.A * R;
    const MatrixXd bg = f.B * f.C;
    g.A = Eigen::kroneckerProduct(IM, f.A).eval() + Eigen::kroneckerProduct(AR, bg).eval();
    const VectorXd RB = R * proto.B;
    const RowVectorXd CR = proto.C * R;
    g.B = Eigen::kroneckerProduct(RB, f.B).eval();
    g.C = Eigen::kroneckerProduct(CR, f.C).eval();
    g.D = proto.D + delta * (proto.C * R * proto.B)(0);

    // Pointwise check against H(F(e^{jw})).
    double worst = 0.0, scale = 1.0;
    for (int k = 0; k < kValidationPoints; ++k) {
        const double w = kPi * k / (kValidationPoints - 1);
        const cplx finv = tf_response(uf.tf, w);
        const cplx ref = evaluate_at(proto, finv);
        const cplx got = frequency_response(g, w);
        worst = std::max(worst, std::abs(got - ref));
        scale = std::max(scale, std::abs(ref));
    }
    if (!(worst <= kValidationTol * scale))
        throw CompositionMismatch("composite response deviates from H(F) by " + std::to_string(worst));

    // Same filter as a rational function: sum b_i Nf^i Df^(M-i) over sum a_i Nf^i Df^(M-i).
    std::vector<double> b(proto_tf.num);
    b.resize(M + 1, 0.0);
    std::vector<double> num{0.0}, den{0.0};
    for (int i = 0; i <= M; ++i) {
        const auto term = poly::mul(poly::pow(uf.tf.num, i), poly::pow(uf.tf.den, M - i));
        num = poly::add(num, poly::scale(term, b[i]));
        den = poly::add(den, poly::scale(term, proto_tf.den[i]));
    }
    const double d0 = den[0];
    out.tf.num = poly::scale(num, 1.0 / d0);
    out.tf.den = poly::scale(den, 1.0 / d0);
    out.tf.den[0] = 1.0;

    out.response_kind = uf.kind;
    out.m1_zeros = M;
    out.proto_order = M;
    return out;
}

namespace {

CompositeFilter build(int M, double omega0, ResponseKind kind, double omega1) {
    const TransferFunction proto_tf = design_prototype_lowpass(M, omega0);
    const StateSpaceModel proto = balance_internally(cascade_realization(prototype_poles(M, omega0))).ss;
    return compose(proto, proto_tf, make_unit_function(kind, omega0, omega1));
}

}  // namespace

CompositeFilter design_lowpass(int M, double omega_c, double omega0) {
    check_frequency(omega_c, "cutoff");
    CompositeFilter f = build(M, omega0 > 0.0 ? omega0 : omega_c, ResponseKind::LowPass, omega_c);
    f.cutoffs = {omega_c};
    return f;
}

CompositeFilter design_highpass(int M, double omega_c, double omega0) {
    check_frequency(omega_c, "cutoff");
    CompositeFilter f = build(M, omega0 > 0.0 ? omega0 : omega_c, ResponseKind::HighPass, omega_c);
    f.cutoffs = {omega_c};
    return f;
}

CompositeFilter design_bandpass_center(int M, double omega_n, double bandwidth) {
    check_frequency(omega_n, "center");
    check_frequency(bandwidth, "bandwidth");
    CompositeFilter f = build(M, bandwidth, ResponseKind::BandPass, omega_n);
    const double mid = std::acos(std::cos(omega_n) * std::cos(bandwidth / 2.0));
    f.cutoffs = {mid - bandwidth / 2.0, mid + bandwidth / 2.0};
    return f;
}

double bandpass_center(double omega1, double omega2) {
    if (!(omega1 > 0.0 && omega1 < omega2 && omega2 < kPi))
        throw FrequencyError("band edges must satisfy 0 < w1 < w2 < pi");
    return std::acos(std::cos((omega1 + omega2) / 2.0) / std::cos((omega2 - omega1) / 2.0));
}

CompositeFilter design_bandpass(int M, double omega1, double omega2) {
    CompositeFilter f = design_bandpass_center(M, bandpass_center(omega1, omega2), omega2 - omega1);
    f.cutoffs = {omega1, omega2};
    return f;
}

}  // namespace sassdpr
