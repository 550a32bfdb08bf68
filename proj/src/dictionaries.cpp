#include "sassdpr/dictionaries.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <fftw3.h>

namespace sassdpr {

namespace {

bool is_pow2(int W) { return W >= 4 && (W & (W - 1)) == 0; }

}  // namespace

FrameGeometry::FrameGeometry(int W_, int N_) : W(W_), N(N_) {
    if (!is_pow2(W)) throw WindowError("window length must be a power of 2 and at least 4");
    if (N < 1) throw ShapeError("signal length must be positive");
    hop = W / 4;
    V = (N - 1) / hop + 4;
}

const std::array<double, 4>& db2_lowpass() {
    static const std::array<double, 4> h = [] {
        const double s3 = std::sqrt(3.0), d = 4.0 * std::sqrt(2.0);
        return std::array<double, 4>{(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d};
    }();
    return h;
}

void dwt_periodic(const double* x, double* out, int L) {
    const auto& h = db2_lowpass();
    const double g[4] = {h[3], -h[2], h[1], -h[0]};
    std::vector<double> cur(x, x + L), a;
    for (int len = L; len >= 2; len /= 2) {
        const int half = len / 2;
        a.assign(half, 0.0);
        for (int k = 0; k < half; ++k) {
            double sa = 0.0, sd = 0.0;
            for (int j = 0; j < 4; ++j) {
                const double v = cur[(2 * k + j) % len];
                sa += h[j] * v;
                sd += g[j] * v;
            }
            a[k] = sa;
            out[half + k] = sd;
        }
        cur.swap(a);
    }
    out[0] = cur[0];
}

void idwt_periodic(const double* c, double* out, int L) {
    const auto& h = db2_lowpass();
    const double g[4] = {h[3], -h[2], h[1], -h[0]};
    std::vector<double> cur{c[0]}, next;
    for (int len = 2; len <= L; len *= 2) {
        const int half = len / 2;
        next.assign(len, 0.0);
        for (int k = 0; k < half; ++k)
            for (int j = 0; j < 4; ++j) next[(2 * k + j) % len] += h[j] * cur[k] + g[j] * c[half + k];
        cur.swap(next);
    }
    std::copy(cur.begin(), cur.end(), out);
}

WdwtDictionary::WdwtDictionary(int W, int N) : g_(W, N) {
    while ((1 << levels_) < W) ++levels_;
}

MatrixXd WdwtDictionary::analysis(const VectorXd& y) const {
    if (y.size() != g_.N) throw ShapeError("signal length differs from dictionary length");
    MatrixXd k(g_.W, g_.V);
    std::vector<double> buf(g_.W);
    for (int v = 0; v < g_.V; ++v) {
        const int s = g_.start(v);
        for (int i = 0; i < g_.W; ++i) {
            const int n = s + i;
            buf[i] = (n >= 0 && n < g_.N) ? y(n) : 0.0;
        }
        dwt_periodic(buf.data(), k.col(v).data(), g_.W);
    }
    return 0.5 * k;
}

VectorXd WdwtDictionary::synthesis(const MatrixXd& k) const {
    if (k.rows() != g_.W || k.cols() != g_.V) throw ShapeError("coefficient grid has the wrong shape");
    VectorXd y = VectorXd::Zero(g_.N);
    std::vector<double> buf(g_.W);
    for (int v = 0; v < g_.V; ++v) {
        idwt_periodic(k.col(v).data(), buf.data(), g_.W);
        const int s = g_.start(v);
        for (int i = 0; i < g_.W; ++i) {
            const int n = s + i;
            if (n >= 0 && n < g_.N) y(n) += 0.5 * buf[i];
        }
    }
    return y;
}

struct StftDictionary::Plans {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;

    explicit Plans(int W) {
        in = fftw_alloc_complex(W);
        out = fftw_alloc_complex(W);
        fwd = fftw_plan_dft_1d(W, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        inv = fftw_plan_dft_1d(W, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Plans() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
        fftw_free(in);
        fftw_free(out);
    }
};

StftDictionary::StftDictionary(int W, int N) : g_(W, N), win_(W), plans_(std::make_unique<Plans>(W)) {
    for (int n = 0; n < W; ++n) win_(n) = std::sin(std::numbers::pi * (n + 0.5) / W);
}

StftDictionary::~StftDictionary() = default;
StftDictionary::StftDictionary(StftDictionary&&) noexcept = default;

MatrixXcd StftDictionary::analysis(const VectorXd& y) const {
    if (y.size() != g_.N) throw ShapeError("signal length differs from dictionary length");
    const int W = g_.W;
    // Unitary DFT times 1/sqrt(2): the four overlapping squared sine windows sum to 2.
    const double sc = 1.0 / std::sqrt(2.0 * W);
    MatrixXcd c(W, g_.V);
    for (int v = 0; v < g_.V; ++v) {
        const int s = g_.start(v);
        for (int i = 0; i < W; ++i) {
            const int n = s + i;
            plans_->in[i][0] = (n >= 0 && n < g_.N) ? win_(i) * y(n) : 0.0;
            plans_->in[i][1] = 0.0;
        }
        fftw_execute(plans_->fwd);
        for (int i = 0; i < W; ++i) c(i, v) = sc * std::complex<double>(plans_->out[i][0], plans_->out[i][1]);
    }
    return c;
}

VectorXd StftDictionary::synthesis(const MatrixXcd& c) const {
    if (c.rows() != g_.W || c.cols() != g_.V) throw ShapeError("coefficient grid has the wrong shape");
    const int W = g_.W;
    const double sc = 1.0 / std::sqrt(2.0 * W);
    VectorXd y = VectorXd::Zero(g_.N);
    for (int v = 0; v < g_.V; ++v) {
        for (int i = 0; i < W; ++i) {
            plans_->in[i][0] = c(i, v).real();
            plans_->in[i][1] = c(i, v).imag();
        }
        fftw_execute(plans_->inv);
        const int s = g_.start(v);
        for (int i = 0; i < W; ++i) {
            const int n = s + i;
            if (n >= 0 && n < g_.N) y(n) += sc * win_(i) * plans_->out[i][0];
        }
    }
    return y;
}

}  // namespace sassdpr
