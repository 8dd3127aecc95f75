#pragma once
// Keystream comparator, XOR masking/unmasking, output RC low-pass filters and
// the threshold decoder that recovers the binary message.

#include <string>

#include "chaoscomm/signals.hpp"

namespace chaoscomm {

// Comparator + XOR gate + output level scaling shared by all three links.
struct CodecParams {
    double Vo = 2.0;                // V, comparator DC reference
    double kappa = 1.0;             // output level scale (U* = kappa * mask_high)
    double mask_high = 5.0;         // V, logic-high level of the XOR output
    double decode_threshold = 2.5;  // V, RX gate/decoder threshold
};

// Output-stage level shifter component values (diode clamp network). The
// idealised codec maps logic levels straight to 0/mask_high volts; these are
// retained for documentation and reporting.
struct LevelShiftParams {
    double RD = 1e3;          // ohm
    double zener_clamp = 5.0; // V
};

// Keystream comparator: H = 1 when v <= Vo, else 0 (equality maps to 1).
int comparator_bit(double v, double Vo);

// XOR mask: returns kappa * mask_high * (m XOR h) volts.
double xor_mask(int m, int h, const CodecParams& p);

// Receiver input gate: 1 when v > threshold, else 0 (equality maps to 0).
int bit_from_voltage(double v, double threshold = 2.5);

// Threshold decoder: 0 V when vc <= decode_threshold, else mask_high volts.
double threshold_decode(double vc, const CodecParams& p);

// First-order RC low-pass on the decoded output.
enum class FilterId { None, Filter1, Filter2, Filter3 };

struct FilterSpec {
    FilterId id = FilterId::None;
    double Re = 0.0;  // ohm
    double Ce = 0.0;  // F

    static FilterSpec none();
    static FilterSpec filter1();  // 40 ohm, 7 nF
    static FilterSpec filter2();  // 1 kohm, 2.5 nF
    static FilterSpec filter3();  // 1 kohm, 7 nF
    static FilterSpec from_id(FilterId id);

    double tau() const { return Re * Ce; }
    double cutoff_hz() const;
    // First-order magnitude response 1/sqrt(1 + (2 pi f Re Ce)^2).
    double gain_at(double f_hz) const;
    std::string name() const;
};

// Advance the filter state one step with input vin held constant over dt
// (exact exponential update). For FilterId::None the input passes through.
double lowpass_step(double state, double vin, double dt, const FilterSpec& f);

// Comparator keystream of a chaotic state trace, expressed at 0/5 V levels.
Trace keystream_trace(const Trace& state, double Vo, double high_level = 5.0);

}  // namespace chaoscomm
