#include <cmath>
#include <stdexcept>
#include <vector>

#include "chaoscomm/metrics.hpp"
#include "chaoscomm/signals.hpp"
#include "doctest.h"

using namespace chaoscomm;

namespace {

Trace make_trace(std::vector<double> v, double dt = 1e-5, double t0 = 0.0) {
    Trace tr;
    tr.dt = dt;
    tr.t0 = t0;
    tr.samples = std::move(v);
    return tr;
}

double wave(double t) {
    return std::sin(2.0 * 3.14159265358979323846 * 50.0 * t) +
           0.3 * std::sin(2.0 * 3.14159265358979323846 * 173.0 * t);
}

}  // namespace

TEST_CASE("align_lag recovers a pure delay") {
    const double dt = 1e-4;
    const std::size_t n = 2000;
    Trace ref = make_trace({}, dt), sig = make_trace({}, dt);
    ref.samples.resize(n);
    sig.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        ref.samples[k] = wave(static_cast<double>(k) * dt);
        sig.samples[k] = wave((static_cast<double>(k) - 3.0) * dt);  // delayed by 3
    }
    CHECK(align_lag(ref, sig, 50) == 3);

    // A globally inverted copy must align at the same lag.
    Trace inv = sig;
    for (double& v : inv.samples) v = -v;
    CHECK(align_lag(ref, inv, 50) == 3);

    // Zero delay.
    CHECK(align_lag(ref, ref, 50) == 0);

    CHECK_THROWS_AS(align_lag(make_trace({1.0, 2.0}), make_trace({1.0, 2.0}), 5),
                    std::invalid_argument);
}

TEST_CASE("bit_error_rate counts a constructed 7-in-124 error pattern") {
    MessageSpec spec;
    spec.frequency = 1000.0;
    const double dt = 1e-5;
    // 6200 samples -> t_end = 61.99 ms -> mid-bit instants 0.25, 0.75, ...,
    // 61.75 ms -> 124 bits.
    Trace msg = generate_message(spec, dt, 6200);
    Trace dec = msg;
    // Flip the decoded value exactly at seven mid-bit samples.
    for (std::size_t bit : {5u, 17u, 30u, 31u, 90u, 100u, 123u}) {
        const std::size_t km = 25 + 50 * bit;
        dec.samples[km] = 5.0 - dec.samples[km];
    }
    BerResult r = bit_error_rate(msg, dec, spec, 0.0, 0);
    CHECK(r.bits == 124);
    CHECK(r.errors == 7);
    CHECK(r.ber == doctest::Approx(7.0 / 124.0).epsilon(1e-15));
    CHECK(r.ber_complement == doctest::Approx(117.0 / 124.0).epsilon(1e-15));
    CHECK(r.ber_polarity_agnostic == doctest::Approx(7.0 / 124.0).epsilon(1e-15));

    SUBCASE("a compensated delay leaves the result unchanged") {
        Trace shifted = make_trace(std::vector<double>(4, 0.0), dt);
        shifted.samples.insert(shifted.samples.end(), dec.samples.begin(),
                               dec.samples.end());
        BerResult rs = bit_error_rate(msg, shifted, spec, 0.0, 4);
        CHECK(rs.bits == r.bits);
        CHECK(rs.errors == r.errors);
    }

    SUBCASE("global inversion swaps ber and its complement; pa is unchanged") {
        Trace inv = dec;
        for (double& v : inv.samples) v = 5.0 - v;
        BerResult ri = bit_error_rate(msg, inv, spec, 0.0, 0);
        CHECK(ri.ber == doctest::Approx(117.0 / 124.0).epsilon(1e-15));
        CHECK(ri.ber_complement == doctest::Approx(7.0 / 124.0).epsilon(1e-15));
        CHECK(ri.ber_polarity_agnostic == doctest::Approx(7.0 / 124.0).epsilon(1e-15));
    }

    SUBCASE("settle discards early bits") {
        // After 10 ms the first 20 bits are gone; only the flip at bit 5
        // falls inside the discarded prefix.
        Trace dec2 = msg;
        dec2.samples[25 + 50 * 5] = 5.0 - dec2.samples[25 + 50 * 5];
        BerResult r2 = bit_error_rate(msg, dec2, spec, 10e-3, 0);
        CHECK(r2.bits == 104);
        CHECK(r2.errors == 0);
    }
}

TEST_CASE("bit_error_rate rejects degenerate input") {
    MessageSpec spec;
    spec.frequency = 1000.0;
    Trace msg = generate_message(spec, 1e-5, 300);  // only 6 bits in 2.99 ms
    CHECK_THROWS_AS(bit_error_rate(msg, msg, spec, 0.0, 0), std::invalid_argument);

    Trace other = generate_message(spec, 2e-5, 300);
    CHECK_THROWS_AS(bit_error_rate(generate_message(spec, 1e-5, 6200), other, spec,
                                   0.0, 0),
                    std::invalid_argument);
}

TEST_CASE("sync_error_rms on known vectors") {
    CHECK(sync_error_rms(make_trace({0, 0, 0, 0}), make_trace({1, 1, 1, 1})) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sync_error_rms(make_trace({0, 3}), make_trace({0, -1})) ==
          doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));

    // Window selection: the first half is identical, the second half differs
    // by exactly 2.
    std::vector<double> a(10, 1.0), b(10, 1.0);
    for (std::size_t k = 5; k < 10; ++k) b[k] = 3.0;
    CHECK(sync_error_rms(make_trace(a), make_trace(b), 0.0, 0.5) ==
          doctest::Approx(0.0));
    CHECK(sync_error_rms(make_trace(a), make_trace(b), 0.5, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS_AS(sync_error_rms(make_trace(a), make_trace(b), 0.7, 0.3),
                    std::invalid_argument);
    CHECK_THROWS_AS(sync_error_rms(make_trace(a), make_trace(b), 0.0, 1.2),
                    std::invalid_argument);
    CHECK_THROWS_AS(sync_error_rms(make_trace(a), make_trace(b), 0.95, 1.0),
                    std::invalid_argument);
}

TEST_CASE("correlation is +/-1 for affine images and 0 for constants") {
    Trace x = make_trace({}, 1e-4);
    x.samples.resize(500);
    for (std::size_t k = 0; k < x.size(); ++k)
        x.samples[k] = wave(static_cast<double>(k) * 1e-4);
    Trace up = x, down = x, flat = x;
    for (double& v : up.samples) v = 2.0 * v + 1.0;
    for (double& v : down.samples) v = -0.5 * v + 3.0;
    for (double& v : flat.samples) v = 4.2;
    CHECK(correlation(x, up) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(correlation(x, down) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(correlation(x, flat) == 0.0);
}

TEST_CASE("anti-synchronization threshold sits at -0.9") {
    CHECK(is_antisynchronized(-1.0));
    CHECK(is_antisynchronized(-0.9));
    CHECK(!is_antisynchronized(-0.89));
    CHECK(!is_antisynchronized(0.95));
}

TEST_CASE("count_glitches separates short runs from bit errors") {
    MessageSpec spec;
    spec.frequency = 1000.0;
    const double dt = 1e-5;  // bit period 0.5 ms -> 50 samples; glitch < 5
    Trace msg = generate_message(spec, dt, 1000);
    Trace dec = msg;
    auto flip_run = [&](std::size_t k0, std::size_t len) {
        for (std::size_t k = k0; k < k0 + len; ++k)
            dec.samples[k] = 5.0 - dec.samples[k];
    };
    flip_run(100, 2);   // glitch
    flip_run(300, 4);   // glitch
    flip_run(500, 5);   // exactly at the limit -> long run
    flip_run(700, 50);  // a full wrong bit
    GlitchStats st = count_glitches(msg, dec, spec, 0.0, 0);
    CHECK(st.glitches == 2);
    CHECK(st.long_runs == 2);
    CHECK(st.wrong_samples == 61);

    SUBCASE("settle excludes early runs") {
        GlitchStats s2 = count_glitches(msg, dec, spec, 2e-3, 0);
        CHECK(s2.glitches == 1);
        CHECK(s2.long_runs == 2);
        CHECK(s2.wrong_samples == 59);
    }

    SUBCASE("a compensated delay leaves the counts unchanged") {
        Trace shifted = make_trace(std::vector<double>(3, 0.0), dt);
        shifted.samples.insert(shifted.samples.end(), dec.samples.begin(),
                               dec.samples.end());
        GlitchStats s3 = count_glitches(msg, shifted, spec, 0.0, 3);
        CHECK(s3.glitches == st.glitches);
        CHECK(s3.long_runs == st.long_runs);
        CHECK(s3.wrong_samples == st.wrong_samples);
    }

    SUBCASE("identical traces have no wrong samples") {
        GlitchStats s4 = count_glitches(msg, msg, spec, 0.0, 0);
        CHECK(s4.glitches == 0);
        CHECK(s4.long_runs == 0);
        CHECK(s4.wrong_samples == 0);
    }
}
