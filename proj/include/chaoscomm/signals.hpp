#pragma once
// Time-series container, square-wave message generation, and CSV trace I/O.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace chaoscomm {

// Uniformly sampled signal. `samples[k]` is the value at t0 + k*dt.
struct Trace {
    double dt = 1.0;
    double t0 = 0.0;
    std::vector<double> samples;

    std::size_t size() const { return samples.size(); }
    double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double duration() const { return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1); }
};

// Binary square-wave message: alternating high/low levels at `frequency`
// (one full high+low cycle per period), starting a high segment at t = phase.
struct MessageSpec {
    double frequency = 6222.0;  // Hz
    double low_level = 0.0;     // V
    double high_level = 5.0;    // V
    double duty = 0.5;          // fraction of the period spent high
    double phase = 0.0;         // s, offset of the first rising edge
};

// Level (low_level/high_level) of the message at time t. Defined for all t
// (periodic extension), so a transmitter can be warmed up at negative times.
double message_level(const MessageSpec& spec, double t);

// Logical bit (0/1) of the message at time t.
int message_bit(const MessageSpec& spec, double t);

// Sample the message at n points spaced dt starting at t0.
// Throws std::invalid_argument if dt or n is non-positive, or if dt is too
// coarse to represent the message (dt >= half the period).
Trace generate_message(const MessageSpec& spec, double dt, std::size_t n, double t0 = 0.0);

// Ordered collection of named traces sharing a time base.
using TraceMap = std::vector<std::pair<std::string, Trace>>;

// Write traces as CSV: header "t,<name>,...", one row per sample, values
// printed with 17 significant digits, LF line endings. All traces must share
// dt/t0/length. The file is written atomically (temp file + rename).
// Throws std::invalid_argument on inconsistent traces, std::runtime_error on
// I/O failure or non-finite samples.
void write_trace_csv(const std::string& path, const TraceMap& traces);

// Inverse of write_trace_csv. Throws std::runtime_error on missing file,
// malformed header/rows, non-numeric or non-finite (NaN/Inf) values.
TraceMap read_trace_csv(const std::string& path);

}  // namespace chaoscomm
