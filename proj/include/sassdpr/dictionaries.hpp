#pragma once

#include <array>
#include <memory>

#include <Eigen/Dense>

#include "sassdpr/errors.hpp"

namespace sassdpr {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Window placement shared by both dictionaries: hop W/4, window v starts at (v-3)*hop,
// so every sample of [0, N) is covered by exactly four windows. Samples outside are zero.
struct FrameGeometry {
    int W = 0;
    int N = 0;
    int hop = 0;
    int V = 0;

    FrameGeometry() = default;
    FrameGeometry(int W, int N);
    int start(int v) const { return (v - 3) * hop; }
};

// Orthonormal 4-tap Daubechies scaling filter.
const std::array<double, 4>& db2_lowpass();

// Full-depth periodic DWT of a power-of-2 block, layout [a_J, d_J, ..., d_1].
void dwt_periodic(const double* x, double* out, int L);
void idwt_periodic(const double* c, double* out, int L);

class WdwtDictionary {
public:
    WdwtDictionary(int W, int N);

    const FrameGeometry& geometry() const { return g_; }
    int W() const { return g_.W; }
    int N() const { return g_.N; }
    int V() const { return g_.V; }
    int levels() const { return levels_; }

    MatrixXd analysis(const VectorXd& y) const;   // W x V
    VectorXd synthesis(const MatrixXd& k) const;  // length N

private:
    FrameGeometry g_;
    int levels_ = 0;
};

class StftDictionary {
public:
    StftDictionary(int W, int N);
    ~StftDictionary();
    StftDictionary(const StftDictionary&) = delete;
    StftDictionary& operator=(const StftDictionary&) = delete;
    StftDictionary(StftDictionary&&) noexcept;

    const FrameGeometry& geometry() const { return g_; }
    int W() const { return g_.W; }
    int N() const { return g_.N; }
    int V() const { return g_.V; }
    const VectorXd& window() const { return win_; }

    MatrixXcd analysis(const VectorXd& y) const;   // W x V, row = FFT bin
    VectorXd synthesis(const MatrixXcd& c) const;  // real part, length N

private:
    struct Plans;
    FrameGeometry g_;
    VectorXd win_;
    std::unique_ptr<Plans> plans_;
};

inline MatrixXd wdwt_analysis(const WdwtDictionary& d, const VectorXd& y) { return d.analysis(y); }
inline VectorXd wdwt_synthesis(const WdwtDictionary& d, const MatrixXd& k) { return d.synthesis(k); }
inline MatrixXcd stft_analysis(const StftDictionary& d, const VectorXd& y) { return d.analysis(y); }
inline VectorXd stft_synthesis(const StftDictionary& d, const MatrixXcd& c) { return d.synthesis(c); }

}  // namespace sassdpr
