#include "chaoscomm/codec.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chaoscomm {

int comparator_bit(double v, double Vo) { return v <= Vo ? 1 : 0; }

double xor_mask(int m, int h, const CodecParams& p) {
    return p.kappa * p.mask_high * ((m != 0) ^ (h != 0) ? 1.0 : 0.0);
}

int bit_from_voltage(double v, double threshold) { return v > threshold ? 1 : 0; }

double threshold_decode(double vc, const CodecParams& p) {
    return vc <= p.decode_threshold ? 0.0 : p.mask_high;
}

FilterSpec FilterSpec::none() { return {FilterId::None, 0.0, 0.0}; }
FilterSpec FilterSpec::filter1() { return {FilterId::Filter1, 40.0, 7e-9}; }
FilterSpec FilterSpec::filter2() { return {FilterId::Filter2, 1e3, 2.5e-9}; }
FilterSpec FilterSpec::filter3() { return {FilterId::Filter3, 1e3, 7e-9}; }

FilterSpec FilterSpec::from_id(FilterId id) {
    switch (id) {
        case FilterId::None: return none();
        case FilterId::Filter1: return filter1();
        case FilterId::Filter2: return filter2();
        case FilterId::Filter3: return filter3();
    }
    throw std::invalid_argument("unknown filter id");
}

double FilterSpec::cutoff_hz() const {
    if (id == FilterId::None) return 0.0;
    return 1.0 / (2.0 * std::numbers::pi * Re * Ce);
}

double FilterSpec::gain_at(double f_hz) const {
    if (id == FilterId::None) return 1.0;
    const double w_tau = 2.0 * std::numbers::pi * f_hz * Re * Ce;
    return 1.0 / std::sqrt(1.0 + w_tau * w_tau);
}

std::string FilterSpec::name() const {
    switch (id) {
        case FilterId::None: return "none";
        case FilterId::Filter1: return "filter1";
        case FilterId::Filter2: return "filter2";
        case FilterId::Filter3: return "filter3";
    }
    return "?";
}

double lowpass_step(double state, double vin, double dt, const FilterSpec& f) {
    if (f.id == FilterId::None) return vin;
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    // Exact solution of tau dVc/dt = vin - Vc with vin held constant over dt.
    const double a = std::exp(-dt / f.tau());
    return vin + (state - vin) * a;
}

Trace keystream_trace(const Trace& state, double Vo, double high_level) {
    Trace out;
    out.dt = state.dt;
    out.t0 = state.t0;
    out.samples.reserve(state.size());
    for (double v : state.samples)
        out.samples.push_back(comparator_bit(v, Vo) ? high_level : 0.0);
    return out;
}

}  // namespace chaoscomm
