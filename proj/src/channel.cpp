#include "chaoscomm/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace chaoscomm {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream)
    : eng_(splitmix64(splitmix64(seed) ^ splitmix64(0x6A09E667F3BCC909ULL + stream))) {}

double GaussianStream::uniform() {
    // 53-bit mantissa draw in [0, 1).
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double GaussianStream::uniform_in(double a, double b) {
    return a + (b - a) * uniform();
}

double GaussianStream::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Marsaglia polar method: deterministic, no trigonometry.
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
}

double noise_sigma(const Trace& clean, double amplitude_percent) {
    if (clean.samples.empty()) throw std::invalid_argument("clean trace is empty");
    if (!(amplitude_percent >= 0.0 && amplitude_percent <= 100.0))
        throw std::invalid_argument("noise amplitude must lie in [0, 100] percent");
    if (amplitude_percent == 0.0) return 0.0;
    double acc = 0.0;
    for (double v : clean.samples) acc += std::fabs(v);
    const double mean_abs = acc / static_cast<double>(clean.samples.size());
    if (mean_abs == 0.0)
        throw std::invalid_argument("cannot scale noise to an identically zero signal");
    return amplitude_percent / 100.0 * mean_abs;
}

Trace add_noise(const Trace& clean, const NoiseSpec& spec, std::uint64_t stream) {
    const double sigma = noise_sigma(clean, spec.amplitude_percent);
    if (sigma == 0.0) return clean;
    GaussianStream g(spec.seed, stream);
    Trace out = clean;
    for (double& v : out.samples) v += sigma * g.next();
    return out;
}

}  // namespace chaoscomm
