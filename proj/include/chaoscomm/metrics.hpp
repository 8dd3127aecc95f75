#pragma once
// Decode/synchronization quality metrics: lag alignment, bit error rate,
// RMS sync error, correlation / anti-synchronization, glitch counting.

#include <cstddef>

#include "chaoscomm/signals.hpp"

namespace chaoscomm {

// Lag (in whole samples, >= 0) at which `signal` best matches `reference`
// delayed versions, chosen to maximise the absolute normalised
// cross-correlation; the absolute value makes the alignment insensitive to a
// global polarity inversion of the decoded signal. Search window is
// [0, max_lag_samples]. Returns the lag in samples.
std::size_t align_lag(const Trace& reference, const Trace& signal,
                      std::size_t max_lag_samples);

struct BerResult {
    double ber = 0.0;            // fraction of wrong bits, decoded as-is
    double ber_complement = 0.0; // fraction wrong after global inversion
    double ber_polarity_agnostic = 0.0;  // min of the two
    std::size_t bits = 0;        // number of bits compared
    std::size_t errors = 0;      // wrong bits (as-is polarity)
};

// Compare the decoded trace against the message bit clock: both traces are
// sampled at mid-bit instants after `settle` seconds; the decoded trace is
// read `lag_samples` later than the message. Bits are classified by comparing
// against `threshold` (2.5 V). Throws std::invalid_argument if fewer than 10
// bits remain after settling.
BerResult bit_error_rate(const Trace& message, const Trace& decoded,
                         const MessageSpec& spec, double settle,
                         std::size_t lag_samples, double threshold = 2.5);

// RMS of (a - b) over [from_frac, to_frac] of the common length.
double sync_error_rms(const Trace& a, const Trace& b,
                      double from_frac = 0.0, double to_frac = 1.0);

// Pearson correlation coefficient over [from_frac, to_frac].
double correlation(const Trace& a, const Trace& b,
                   double from_frac = 0.0, double to_frac = 1.0);

// Anti-synchronization: correlation <= -0.9.
bool is_antisynchronized(double corr);

struct GlitchStats {
    std::size_t glitches = 0;     // wrong runs shorter than 10% of a bit
    std::size_t long_runs = 0;    // wrong runs >= 10% of a bit (bit errors)
    std::size_t wrong_samples = 0;
};

// Count maximal wrong-valued runs of the decoded bitstream (sampled every dt,
// aligned with lag_samples, classified against threshold) that are shorter
// than 10% of a bit period. Evaluated after `settle` seconds.
GlitchStats count_glitches(const Trace& message, const Trace& decoded,
                           const MessageSpec& spec, double settle,
                           std::size_t lag_samples, double threshold = 2.5);

}  // namespace chaoscomm
