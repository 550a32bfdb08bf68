#pragma once

#include <string>
#include <vector>

#include "sassdpr/statespace.hpp"

namespace sassdpr {

enum class ResponseKind { LowPass, HighPass, BandPass };

std::string to_string(ResponseKind k);
ResponseKind parse_response_kind(const std::string& s);

// All-pass 1/F(z) substituted for z^-1 in the prototype.
struct UnitFunction {
    ResponseKind kind = ResponseKind::LowPass;
    double xi = 0.0;
    TransferFunction tf;
    StateSpaceModel ss;  // internally balanced
    int L = 1;
};

struct CompositeFilter {
    StateSpaceModel ss;  // balanced, order L*M
    TransferFunction tf;  // same filter by polynomial substitution
    ResponseKind response_kind = ResponseKind::LowPass;
    int m1_zeros = 0;
    std::vector<double> cutoffs;  // rad/sample
    int proto_order = 0;
};

// Classical Butterworth low-pass, analog prototype + prewarped bilinear map.
TransferFunction design_prototype_lowpass(int M, double omega0);

UnitFunction make_unit_function(ResponseKind kind, double omega0, double omega1);

// G(z) = H(F(z)) from a balanced prototype and a balanced unit function.
CompositeFilter compose(const StateSpaceModel& proto, const TransferFunction& proto_tf,
                        const UnitFunction& uf);

std::vector<cplx> frequency_response(const StateSpaceModel& ss, const std::vector<double>& omegas);
cplx frequency_response(const StateSpaceModel& ss, double omega);

// Evaluates H at w = 1/F(e^{jw}) through the state-space of H.
cplx evaluate_at(const StateSpaceModel& ss, cplx w);

// Designers. omega0 <= 0 selects the default prototype cutoff.
CompositeFilter design_lowpass(int M, double omega_c, double omega0 = -1.0);
CompositeFilter design_highpass(int M, double omega_c, double omega0 = -1.0);
// Center/bandwidth form: the prototype cutoff is the bandwidth.
CompositeFilter design_bandpass_center(int M, double omega_n, double bandwidth);
// Passband form: half-power points at omega1 and omega2.
CompositeFilter design_bandpass(int M, double omega1, double omega2);

// Center frequency whose unit function puts the half-power points at omega1, omega2.
double bandpass_center(double omega1, double omega2);

}  // namespace sassdpr
