#include "sassdpr/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sassdpr {

double soft_threshold(double x, double T) {
    if (x > T) return x - T;
    if (x < -T) return x + T;
    return 0.0;
}

std::complex<double> soft_threshold(std::complex<double> x, double T) {
    const double a = std::abs(x);
    if (a <= T) return {0.0, 0.0};
    return x * ((a - T) / a);
}

VectorXd soft_threshold(const VectorXd& x, double T) {
    return x.unaryExpr([T](double v) { return soft_threshold(v, T); });
}

MatrixXd soft_threshold(const MatrixXd& x, double T) {
    return x.unaryExpr([T](double v) { return soft_threshold(v, T); });
}

MatrixXcd soft_threshold(const MatrixXcd& x, double T) {
    return x.unaryExpr([T](std::complex<double> v) { return soft_threshold(v, T); });
}

// Condat's direct algorithm. The segment [k0, k] is the current run; vmin/vmax bound its
// value and umin/umax track the running dual sums against those bounds.
VectorXd tvd(const VectorXd& y, double lam) {
    if (lam < 0.0) throw ParameterError("tvd: lambda must be nonnegative");
    const int n = static_cast<int>(y.size());
    VectorXd x(n);
    if (n == 0) return x;
    if (lam == 0.0 || n == 1) return y;

    const double two_lam = 2.0 * lam;
    int k = 0, k0 = 0, kplus = 0, kminus = 0;
    double umin = lam, umax = -lam;
    double vmin = y[0] - lam, vmax = y[0] + lam;

    for (;;) {
        while (k == n - 1) {
            if (umin < 0.0) {
                do x[k0++] = vmin; while (k0 <= kminus);
                k = kminus = k0;
                vmin = y[k];
                umin = lam;
                umax = vmin + umin - vmax;
            } else if (umax > 0.0) {
                do x[k0++] = vmax; while (k0 <= kplus);
                k = kplus = k0;
                vmax = y[k];
                umax = -lam;
                umin = vmax + umax - vmin;
            } else {
                vmin += umin / (k - k0 + 1);
                do x[k0++] = vmin; while (k0 <= k);
                return x;
            }
        }
        umin += y[k + 1] - vmin;
        if (umin < -lam) {
            do x[k0++] = vmin; while (k0 <= kminus);
            k = kplus = kminus = k0;
            vmin = y[k];
            vmax = vmin + two_lam;
            umin = lam;
            umax = -lam;
            continue;
        }
        umax += y[k + 1] - vmax;
        if (umax > lam) {
            do x[k0++] = vmax; while (k0 <= kplus);
            k = kplus = kminus = k0;
            vmax = y[k];
            vmin = vmax - two_lam;
            umin = lam;
            umax = -lam;
            continue;
        }
        ++k;
        if (umin >= lam) {
            kminus = k;
            vmin += (umin - lam) / (kminus - k0 + 1);
            umin = lam;
        }
        if (umax <= -lam) {
            kplus = k;
            vmax += (umax + lam) / (kplus - k0 + 1);
            umax = -lam;
        }
    }
}

FistaResult fista_l1(const LinearMap& A, const LinearMap& At, const VectorXd& b, int n, double lam,
                     const FistaOptions& opt) {
    if (lam < 0.0) throw ParameterError("fista_l1: lambda must be nonnegative");
    FistaResult res;
    double L = opt.lipschitz;
    if (L <= 0.0) {
        L = 1.02 * power_iteration([&](const VectorXd& x) { return At(A(x)); }, n, 200, 1e-10);
    }
    res.lipschitz = L;
    if (!(L > 0.0)) {
        // A is zero: any v with minimal l1 norm, i.e. zero, is optimal.
        res.v = VectorXd::Zero(n);
        res.cost = 0.5 * b.squaredNorm();
        res.converged = true;
        return res;
    }

    auto cost = [&](const VectorXd& Av, const VectorXd& v) {
        return 0.5 * (b - Av).squaredNorm() + lam * v.lpNorm<1>();
    };

    VectorXd x = VectorXd::Zero(n), xprev = x, z = x;
    VectorXd Ax = VectorXd::Zero(b.size()), Axprev = Ax, Az = Ax;
    double c = cost(Ax, x);
    double t = 1.0;
    if (opt.record_trace) res.cost_trace.push_back(c);

    int k = 0;
    for (; k < opt.kmax; ++k) {
        VectorXd u = soft_threshold(VectorXd(z - At(Az - b) / L), lam / L);
        VectorXd Au = A(u);
        const double cu = cost(Au, u);
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        if (cu <= c) {
            const double prev = c;
            xprev.swap(x);
            Axprev.swap(Ax);
            x = std::move(u);
            Ax = std::move(Au);
            c = cu;
            if (opt.record_trace) res.cost_trace.push_back(c);
            const double a = (t - 1.0) / tn;
            z = (1.0 + a) * x - a * xprev;
            Az = (1.0 + a) * Ax - a * Axprev;
            t = tn;
            if (std::abs(prev - c) <= opt.eps * std::max(prev, std::numeric_limits<double>::min())) {
                ++k;
                res.converged = true;
                break;
            }
        } else {
            const double a = t / tn;
            z = (1.0 - a) * x + a * u;
            Az = (1.0 - a) * Ax + a * Au;
            t = tn;
        }
    }
    res.v = std::move(x);
    res.iterations = k;
    res.cost = c;
    if (!res.converged && opt.throw_on_cap) {
        throw NoConvergence<VectorXd>("fista_l1: iteration cap " + std::to_string(opt.kmax) + " reached",
                                      res.v);
    }
    return res;
}

namespace {

struct Prepared {
    VectorXd y;
    int P = 0;
};

Prepared prepare(const VectorXd& y, const ZeroPhaseOperator& op) {
    const int n = static_cast<int>(y.size());
    if (n == op.N()) return {y, 0};
    const int P = op.pad().P;
    if (P > 0 && n + 2 * P == op.N()) {
        PaddedSignal p = pad_signal_with(y, P, op.pad().degree);
        return {std::move(p.y), P};
    }
    throw LengthMismatch("signal length " + std::to_string(n) + " does not fit an operator of length " +
                         std::to_string(op.N()));
}

VectorXd crop(const VectorXd& x, int P) {
    return P == 0 ? x : unpad_signal(x, P);
}

void check_length(int n, int expected, const char* what) {
    if (n != expected) {
        throw LengthMismatch(std::string(what) + ": length " + std::to_string(n) + ", expected " +
                             std::to_string(expected));
    }
}

}  // namespace

SasdResult sasd(const VectorXd& y, const ZeroPhaseOperator& lpf, const FactorizedFilter& hpf, double lam,
                const FistaOptions& opt) {
    Prepared p = prepare(y, lpf);
    const int N = static_cast<int>(p.y.size());
    check_length(static_cast<int>(hpf.Gf.rows()), N, "sasd high-pass factor");
    const MatrixXd& G = hpf.Gf;
    const MatrixXd& G1 = hpf.G1;

    const VectorXd b = G.transpose() * (G * p.y);
    LinearMap A = [&](const VectorXd& v) -> VectorXd { return G.transpose() * (G1 * v); };
    LinearMap At = [&](const VectorXd& r) -> VectorXd { return G1.transpose() * (G * r); };

    FistaResult fr = fista_l1(A, At, b, static_cast<int>(G1.cols()), lam, opt);

    SasdResult r;
    r.v = std::move(fr.v);
    r.iterations = fr.iterations;
    r.final_cost = fr.cost;
    r.converged = fr.converged;
    r.cost_trace = std::move(fr.cost_trace);
    const VectorXd x2 = integrate(r.v, hpf.K);
    const VectorXd x1 = lpf.apply(p.y - x2);
    r.x1 = crop(x1, p.P);
    r.x2 = crop(x2, p.P);
    r.x = r.x1 + r.x2;
    r.padded_input = std::move(p.y);
    r.P = p.P;
    r.lam = lam;
    return r;
}

SasdCertificate check_sasd_optimality(const SasdResult& r, const FactorizedFilter& hpf, double tol) {
    const MatrixXd& G = hpf.Gf;
    const MatrixXd& G1 = hpf.G1;
    const VectorXd resid = G.transpose() * (G * r.padded_input) - G.transpose() * (G1 * r.v);
    const VectorXd g = (G1.transpose() * (G * resid)) / r.lam;
    SasdCertificate cert;
    for (Eigen::Index j = 0; j < r.v.size(); ++j) {
        if (r.v[j] == 0.0) {
            cert.max_inactive_ratio = std::max(cert.max_inactive_ratio, std::abs(g[j]));
            if (std::abs(g[j]) > 1.0 + tol) ++cert.inactive_violations;
        } else {
            const double dev = std::abs(g[j] - (r.v[j] > 0.0 ? 1.0 : -1.0));
            cert.max_active_deviation = std::max(cert.max_active_deviation, dev);
            if (dev > tol) ++cert.sign_violations;
        }
    }
    return cert;
}

GramSystem::GramSystem(const MatrixXd& system) {
    llt_.compute(system);
    if (llt_.info() != Eigen::Success) throw NotPositiveDefinite("ADMM system matrix is not positive definite");
}

MatrixXd zero_phase_matrix(const StateSpaceModel& ss, int N) {
    return anticausal_filter_rows(ss, causal_filter_rows(ss, MatrixXd::Identity(N, N)));
}

namespace {

// X Gf^T Gf for signals along the rows; equals Gf^T Gf X when X is symmetric.
MatrixXd right_zero_phase(const StateSpaceModel& ss, const MatrixXd& X) {
    return anticausal_filter_rows(ss, causal_filter_rows(ss, X));
}

void symmetrize(MatrixXd& S) {
    S = 0.5 * (S + S.transpose()).eval();
}

void check_admm_params(double mu, double eta) {
    if (!(mu > 0.0)) throw ParameterError("mu must be positive");
    if (!(eta > 0.0)) throw ParameterError("eta must be positive");
}

// Relative cost change below eps, and the split copies agree: while the iterate sits at zero the
// cost is flat even though the duals are still moving.
bool admm_stop(const std::vector<double>& trace, double eps, double residual, double scale, double floor) {
    if (trace.size() < 2) return false;
    const double a = trace[trace.size() - 2], b = trace.back();
    if (std::abs(a - b) > eps * std::max(std::abs(a), std::numeric_limits<double>::min())) return false;
    return residual <= std::sqrt(eps) * scale + floor;
}

double tv_norm(const VectorXd& x) {
    const Eigen::Index n = x.size();
    return n < 2 ? 0.0 : (x.tail(n - 1) - x.head(n - 1)).lpNorm<1>();
}

}  // namespace

GramSystem sapr_system(const ZeroPhaseOperator& bpf, double mu) {
    check_admm_params(mu, 1.0);
    const MatrixXd Q = zero_phase_matrix(bpf.ss(), bpf.N());
    MatrixXd S = right_zero_phase(bpf.ss(), Q);
    S.diagonal().array() += mu;
    symmetrize(S);
    return GramSystem(S);
}

GramSystem sasdpr_system(const ZeroPhaseOperator& lpf, const ZeroPhaseOperator& bpf, double mu) {
    check_admm_params(mu, 1.0);
    check_length(lpf.N(), bpf.N(), "sasdpr low-pass operator");
    const int N = bpf.N();
    MatrixXd S;
    {
        const MatrixXd Q = zero_phase_matrix(bpf.ss(), N);
        S = right_zero_phase(bpf.ss(), Q);
    }
    {
        MatrixXd QH = -zero_phase_matrix(lpf.ss(), N);
        QH.diagonal().array() += 1.0;
        // QH^2 = QH - QH L^T L
        S += QH;
        S -= right_zero_phase(lpf.ss(), QH);
    }
    S.diagonal().array() += mu;
    symmetrize(S);
    return GramSystem(S);
}

double sapr_cost(const VectorXd& y, const ZeroPhaseOperator& lpf, const ZeroPhaseOperator& bpf,
                 const WdwtDictionary& dict, const MatrixXd& k, double lam0, double lam1) {
    const VectorXd Psik = dict.synthesis(k);
    const VectorXd Hy = y - lpf.apply(y);
    return 0.5 * (Hy - bpf.apply(Psik)).squaredNorm() + lam0 * k.lpNorm<1>() + lam1 * tv_norm(Psik);
}

SaprResult sapr(const VectorXd& y_in, const ZeroPhaseOperator& lpf, const ZeroPhaseOperator& bpf,
                const WdwtDictionary& dict, double lam0, double lam1, double mu, double eta,
                const AdmmOptions& opt, const GramSystem* F) {
    check_admm_params(mu, eta);
    if (lam0 < 0.0 || lam1 < 0.0) throw ParameterError("sapr: lambdas must be nonnegative");
    const Prepared pr = prepare(y_in, lpf);
    const VectorXd& y = pr.y;
    const int N = static_cast<int>(y.size());
    check_length(bpf.N(), N, "sapr band-pass operator");
    check_length(lpf.N(), N, "sapr low-pass operator");
    check_length(dict.N(), N, "sapr dictionary");

    // Zero data: k = 0 is optimal and the iteration would only stir rounding noise.
    if (y.isZero(0.0)) {
        SaprResult r;
        r.k = MatrixXd::Zero(dict.W(), dict.V());
        r.pattern = VectorXd::Zero(N - 2 * pr.P);
        r.converged = true;
        r.cost_trace = {0.0};
        return r;
    }

    GramSystem own;
    if (F == nullptr) {
        own = sapr_system(bpf, mu);
        F = &own;
    }
    check_length(F->N(), N, "sapr system");

    auto QB = [&](const VectorXd& u) { return bpf.apply(u); };
    auto QH = [&](const VectorXd& u) -> VectorXd { return u - lpf.apply(u); };

    const VectorXd Hy = QH(y);
    const VectorXd BHy = QB(Hy);
    MatrixXd k = dict.analysis(QB(y));
    MatrixXd v = k;
    MatrixXd d1 = MatrixXd::Zero(k.rows(), k.cols());
    MatrixXd d2 = d1;
    const MatrixXd b1 = dict.analysis(BHy) / mu;

    auto cost = [&](const MatrixXd& kk) {
        const VectorXd Psik = dict.synthesis(kk);
        return 0.5 * (Hy - QB(Psik)).squaredNorm() + lam0 * kk.lpNorm<1>() + lam1 * tv_norm(Psik);
    };

    const double floor = 1e-10 * y.norm();
    SaprResult r;
    int it = 0;
    for (; it < opt.kmax; ++it) {
        const MatrixXd g1 = b1 + k + d1;
        const MatrixXd u1 = g1 - dict.analysis(QB(F->solve(QB(dict.synthesis(g1)))));
        const MatrixXd p = (mu * (u1 - d1) + eta * (v - d2)) / (mu + eta);
        k = soft_threshold(p, lam0 / (mu + eta));
        const MatrixXd m = d2 + k;
        const VectorXd Psim = dict.synthesis(m);
        v = m + dict.analysis(tvd(Psim, lam1 / eta) - Psim);
        d1 -= u1 - k;
        d2 -= v - k;
        r.cost_trace.push_back(cost(k));
        const double res = (u1 - k).norm() + (v - k).norm();
        const double scale = std::max({u1.norm(), v.norm(), k.norm()});
        if (admm_stop(r.cost_trace, opt.eps, res, scale, floor)) {
            ++it;
            r.converged = true;
            break;
        }
    }
    r.iterations = it;
    r.pattern = crop(QB(dict.synthesis(k)), pr.P);
    r.k = std::move(k);
    if (!r.converged && opt.throw_on_cap) {
        throw NoConvergence<MatrixXd>("sapr: iteration cap " + std::to_string(opt.kmax) + " reached", r.k);
    }
    return r;
}

double sasdpr_cost(const VectorXd& y, const ZeroPhaseOperator& lpf, const ZeroPhaseOperator& bpf,
                   const StftDictionary& dict, const MatrixXcd& c, const VectorXd& x3, double lam0,
                   double lam1, double lam2) {
    const VectorXd e = y - x3;
    const VectorXd r = (e - lpf.apply(e)) - bpf.apply(dict.synthesis(c));
    return 0.5 * r.squaredNorm() + lam0 * c.cwiseAbs().sum() + lam1 * tv_norm(x3) + lam2 * x3.lpNorm<1>();
}

SasdprResult sasdpr(const VectorXd& y_in, const ZeroPhaseOperator& lpf, const ZeroPhaseOperator& bpf,
                    const StftDictionary& dict, double lam0, double lam1, double lam2, double mu,
                    const AdmmOptions& opt, const GramSystem* F) {
    check_admm_params(mu, 1.0);
    if (lam0 < 0.0 || lam1 < 0.0 || lam2 < 0.0) throw ParameterError("sasdpr: lambdas must be nonnegative");
    const Prepared pr = prepare(y_in, lpf);
    const VectorXd& y = pr.y;
    const int N = static_cast<int>(y.size());
    check_length(bpf.N(), N, "sasdpr band-pass operator");
    check_length(lpf.N(), N, "sasdpr low-pass operator");
    check_length(dict.N(), N, "sasdpr dictionary");

    if (y.isZero(0.0)) {
        SasdprResult r;
        r.c = MatrixXcd::Zero(dict.W(), dict.V());
        r.x1 = r.x2 = r.x3 = VectorXd::Zero(N - 2 * pr.P);
        r.converged = true;
        r.cost_trace = {0.0};
        return r;
    }

    GramSystem own;
    if (F == nullptr) {
        own = sasdpr_system(lpf, bpf, mu);
        F = &own;
    }
    check_length(F->N(), N, "sasdpr system");

    auto QB = [&](const VectorXd& u) { return bpf.apply(u); };
    auto QH = [&](const VectorXd& u) -> VectorXd { return u - lpf.apply(u); };

    const VectorXd Hy = QH(y);
    MatrixXcd c = dict.analysis(QB(y));
    VectorXd x3 = Hy;
    MatrixXcd d1 = MatrixXcd::Zero(c.rows(), c.cols());
    VectorXd d2 = VectorXd::Zero(N);
    const MatrixXcd b1 = dict.analysis(QB(Hy)) / mu;
    const VectorXd b2 = QH(Hy) / mu;

    const double floor = 1e-10 * y.norm();
    SasdprResult r;
    int it = 0;
    for (; it < opt.kmax; ++it) {
        const MatrixXcd g1 = b1 + c + d1;
        const VectorXd g2 = b2 + x3 + d2;
        const VectorXd g = QB(dict.synthesis(g1)) + QH(g2);
        const VectorXd Fg = F->solve(g);
        const MatrixXcd u1 = g1 - dict.analysis(QB(Fg));
        const VectorXd u2 = g2 - QH(Fg);
        c = soft_threshold(MatrixXcd(u1 - d1), lam0 / mu);
        x3 = soft_threshold(VectorXd(tvd(u2 - d2, lam1 / mu)), lam2 / mu);
        d1 -= u1 - c;
        d2 -= u2 - x3;
        r.cost_trace.push_back(sasdpr_cost(y, lpf, bpf, dict, c, x3, lam0, lam1, lam2));
        const double res = (u1 - c).norm() + (u2 - x3).norm();
        const double scale = std::max({u1.norm(), c.norm(), u2.norm(), x3.norm()});
        if (admm_stop(r.cost_trace, opt.eps, res, scale, floor)) {
            ++it;
            r.converged = true;
            break;
        }
    }
    r.iterations = it;
    const VectorXd x2 = QB(dict.synthesis(c));
    r.x1 = crop(lpf.apply(y - x2 - x3), pr.P);
    r.x2 = crop(x2, pr.P);
    r.x3 = crop(x3, pr.P);
    r.c = std::move(c);
    if (!r.converged && opt.throw_on_cap) {
        throw NoConvergence<MatrixXcd>("sasdpr: iteration cap " + std::to_string(opt.kmax) + " reached", r.c);
    }
    return r;
}

VectorXd lowpass_baseline(const VectorXd& y, const ZeroPhaseOperator& lpf) {
    Prepared p = prepare(y, lpf);
    return crop(lpf.apply(p.y), p.P);
}

VectorXd tvd_baseline(const VectorXd& y, double lam) {
    return tvd(y, lam);
}

}  // namespace sassdpr
