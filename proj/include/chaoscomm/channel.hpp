#pragma once
// Additive white Gaussian channel noise with a deterministic, seeded PRNG.
// The noise level is specified as a percentage A of the mean absolute value
// of the clean signal: sigma = (A/100) * mean(|clean|).

#include <cstdint>
#include <random>

#include "chaoscomm/signals.hpp"

namespace chaoscomm {

enum class NoisePlacement { SyncOnly, InfoOnly, Both, SingleSharedChannel };

struct NoiseSpec {
    double amplitude_percent = 0.0;  // A in [0, 100]
    NoisePlacement placement = NoisePlacement::Both;
    std::uint64_t seed = 0;
};

// Independent sub-stream identifiers derived from one user seed. Streams are
// decoupled so that, e.g., consuming initial-condition draws never shifts the
// noise realisation.
enum : std::uint64_t {
    kStreamSync = 0,   // sync-channel noise (also the single shared channel)
    kStreamInfo = 1,   // info-channel noise
    kStreamTxIc = 2,   // transmitter initial-condition draw
    kStreamRxIc = 3,   // receiver initial-condition draw
};

// Deterministic standard-normal generator: mt19937_64 seeded via a SplitMix64
// mix of (seed, stream), Marsaglia polar method for the normal deviates.
class GaussianStream {
  public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream);
    double next();                      // N(0, 1)
    double uniform();                   // [0, 1)
    double uniform_in(double a, double b);

  private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

// Add white Gaussian noise scaled to the clean trace:
//   sigma = (amplitude_percent / 100) * mean(|clean|)  over the whole trace.
// One independent deviate per sample (the sample-and-hold convention: each
// simulation step sees one noise value). amplitude_percent == 0 returns the
// input unchanged. Throws std::invalid_argument if amplitude_percent is
// outside [0, 100] or if the clean trace is empty or identically zero with
// amplitude_percent > 0.
// `stream` selects the sub-stream (kStreamSync / kStreamInfo).
Trace add_noise(const Trace& clean, const NoiseSpec& spec,
                std::uint64_t stream = kStreamSync);

// Reference sigma for a clean trace (used by the link engine and tests).
double noise_sigma(const Trace& clean, double amplitude_percent);

}  // namespace chaoscomm
