#include "chaoscomm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaoscomm {

namespace {

// Pearson correlation of ref[k] against sig[k + lag] over the overlap,
// visiting every `stride`-th pair. Constant slices yield 0.
double lagged_corr(const std::vector<double>& ref, const std::vector<double>& sig,
                   std::size_t lag, std::size_t stride) {
    const std::size_t n = std::min(ref.size(), sig.size() - lag);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t k = 0; k < n; k += stride) {
        const double x = ref[k], y = sig[k + lag];
        sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    const double dm = static_cast<double>(m);
    const double cov = sxy - sx * sy / dm;
    const double vx = sxx - sx * sx / dm;
    const double vy = syy - sy * sy / dm;
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

}  // namespace

std::size_t align_lag(const Trace& reference, const Trace& signal,
                      std::size_t max_lag_samples) {
    const std::size_t n = std::min(reference.size(), signal.size());
    if (n < 4) throw std::invalid_argument("traces too short to align");
    const std::size_t max_lag = std::min(max_lag_samples, n - 2);
    // Cap the work: with very long traces estimate each lag's correlation on
    // a strided subset (the argmax is unchanged for bit-scale signals).
    const double budget = 2e7;
    const double work = static_cast<double>(n) * static_cast<double>(max_lag + 1);
    const std::size_t stride = work > budget
        ? static_cast<std::size_t>(work / budget) + 1 : 1;

    std::size_t best_lag = 0;
    double best = -1.0;
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        // Absolute value: a globally inverted decode must align at the same
        // lag as an upright one (polarity is scored later, not here).
        const double c = std::fabs(lagged_corr(reference.samples, signal.samples, lag, stride));
        if (c > best) {
            best = c;
            best_lag = lag;
        }
    }
    return best_lag;
}

BerResult bit_error_rate(const Trace& message, const Trace& decoded,
                         const MessageSpec& spec, double settle,
                         std::size_t lag_samples, double threshold) {
    if (message.dt != decoded.dt)
        throw std::invalid_argument("message and decoded traces must share dt");
    const double T = 1.0 / spec.frequency;
    const double dt = message.dt;
    const double t_end = message.t0 + message.duration();

    BerResult res;
    // Walk the bit clock: bit 2p is the high segment of period p, bit 2p+1
    // the low segment; sample each trace at the segment midpoint.
    const double t_start = std::max(message.t0, message.t0 + settle);
    long long p = static_cast<long long>(std::floor((t_start - spec.phase) / T)) - 1;
    for (;; ++p) {
        const double base = spec.phase + static_cast<double>(p) * T;
        const double mids[2] = {base + 0.5 * spec.duty * T,
                                base + spec.duty * T + 0.5 * (1.0 - spec.duty) * T};
        for (double mid : mids) {
            if (mid < t_start) continue;
            const std::size_t km = static_cast<std::size_t>(std::llround((mid - message.t0) / dt));
            const std::size_t kd = km + lag_samples;
            if (mid > t_end || km >= message.size() || kd >= decoded.size()) goto done;
            const bool expected = message.samples[km] > threshold;
            const bool got = decoded.samples[kd] > threshold;
            ++res.bits;
            if (expected != got) ++res.errors;
        }
    }
done:
    if (res.bits < 10)
        throw std::invalid_argument("fewer than 10 bits available after settling");
    const double nb = static_cast<double>(res.bits);
    res.ber = static_cast<double>(res.errors) / nb;
    res.ber_complement = static_cast<double>(res.bits - res.errors) / nb;
    res.ber_polarity_agnostic = std::min(res.ber, res.ber_complement);
    return res;
}

namespace {

std::pair<std::size_t, std::size_t> window_indices(std::size_t n, double from_frac,
                                                   double to_frac) {
    if (!(from_frac >= 0.0 && to_frac <= 1.0 && from_frac < to_frac))
        throw std::invalid_argument("window fractions must satisfy 0 <= from < to <= 1");
    auto lo = static_cast<std::size_t>(std::floor(from_frac * static_cast<double>(n)));
    auto hi = static_cast<std::size_t>(std::ceil(to_frac * static_cast<double>(n)));
    hi = std::min(hi, n);
    if (hi - lo < 2) throw std::invalid_argument("window too small");
    return {lo, hi};
}

}  // namespace

double sync_error_rms(const Trace& a, const Trace& b, double from_frac, double to_frac) {
    const std::size_t n = std::min(a.size(), b.size());
    auto [lo, hi] = window_indices(n, from_frac, to_frac);
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        const double d = a.samples[k] - b.samples[k];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(hi - lo));
}

double correlation(const Trace& a, const Trace& b, double from_frac, double to_frac) {
    const std::size_t n = std::min(a.size(), b.size());
    auto [lo, hi] = window_indices(n, from_frac, to_frac);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t k = lo; k < hi; ++k) {
        const double x = a.samples[k], y = b.samples[k];
        sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
    }
    const double m = static_cast<double>(hi - lo);
    const double cov = sxy - sx * sy / m;
    const double vx = sxx - sx * sx / m;
    const double vy = syy - sy * sy / m;
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

bool is_antisynchronized(double corr) { return corr <= -0.9; }

GlitchStats count_glitches(const Trace& message, const Trace& decoded,
                           const MessageSpec& spec, double settle,
                           std::size_t lag_samples, double threshold) {
    if (message.dt != decoded.dt)
        throw std::invalid_argument("message and decoded traces must share dt");
    const double dt = message.dt;
    const double bit_period = 0.5 / spec.frequency;  // one high or low segment
    const std::size_t max_glitch = static_cast<std::size_t>(0.1 * bit_period / dt);

    const std::size_t n = std::min(message.size(), decoded.size() - std::min(decoded.size(), lag_samples));
    std::size_t start = settle <= 0.0 ? 0
        : static_cast<std::size_t>(std::ceil(settle / dt));
    GlitchStats st;
    std::size_t run = 0;
    auto close_run = [&]() {
        if (run == 0) return;
        if (run < max_glitch) ++st.glitches; else ++st.long_runs;
        run = 0;
    };
    for (std::size_t k = start; k < n; ++k) {
        const bool expected = message.samples[k] > threshold;
        const bool got = decoded.samples[k + lag_samples] > threshold;
        if (expected != got) {
            ++run;
            ++st.wrong_samples;
        } else {
            close_run();
        }
    }
    close_run();
    return st;
}

}  // namespace chaoscomm
