#include "chaoscomm/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chaoscomm {

std::string to_string(Circuit c) {
    switch (c) {
        case Circuit::A: return "a";
        case Circuit::B: return "b";
        case Circuit::Ca: return "ca";
        case Circuit::Cb: return "cb";
    }
    return "?";
}

std::optional<Circuit> circuit_from_string(const std::string& s) {
    if (s == "a" || s == "A") return Circuit::A;
    if (s == "b" || s == "B") return Circuit::B;
    if (s == "ca" || s == "Ca" || s == "CA") return Circuit::Ca;
    if (s == "cb" || s == "Cb" || s == "CB") return Circuit::Cb;
    return std::nullopt;
}

std::string to_string(NoisePlacement p) {
    switch (p) {
        case NoisePlacement::SyncOnly: return "sync";
        case NoisePlacement::InfoOnly: return "info";
        case NoisePlacement::Both: return "both";
        case NoisePlacement::SingleSharedChannel: return "shared";
    }
    return "?";
}

std::optional<NoisePlacement> placement_from_string(const std::string& s) {
    if (s == "sync") return NoisePlacement::SyncOnly;
    if (s == "info") return NoisePlacement::InfoOnly;
    if (s == "both") return NoisePlacement::Both;
    if (s == "shared") return NoisePlacement::SingleSharedChannel;
    return std::nullopt;
}

LinkConfig resolve_defaults(LinkConfig cfg) {
    const bool is_c = cfg.circuit == Circuit::Ca || cfg.circuit == Circuit::Cb;
    if (cfg.dt == 0.0) cfg.dt = is_c ? 1e-8 : 1e-7;
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(cfg.duration > 0.0)) throw std::invalid_argument("duration must be positive");
    if (cfg.duration / cfg.dt > 1e8)
        throw std::invalid_argument("duration/dt exceeds the 1e8 step budget");
    if (!(cfg.tx_warmup >= 0.0)) throw std::invalid_argument("warmup must be non-negative");
    if (!(cfg.ic_ball > 0.0)) throw std::invalid_argument("ic_ball must be positive");
    if (!(cfg.codec.kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (!(cfg.noise.amplitude_percent >= 0.0 && cfg.noise.amplitude_percent <= 100.0))
        throw std::invalid_argument("noise amplitude must lie in [0, 100] percent");

    if (!cfg.explicit_filter) {
        switch (cfg.circuit) {
            case Circuit::A: cfg.filter = FilterSpec::filter2(); break;
            case Circuit::B: cfg.filter = FilterSpec::filter1(); break;
            default: cfg.filter = FilterSpec::filter3(); break;
        }
    }
    if (cfg.comparator_vo) {
        cfg.codec.Vo = *cfg.comparator_vo;
    } else {
        cfg.codec.Vo = cfg.circuit == Circuit::Cb ? -0.02 : 2.0;
    }

    if (cfg.circuit == Circuit::A) {
        // Circuit A has a single shared channel; the generic default "both"
        // is coerced, anything channel-specific is a configuration error.
        if (cfg.noise.placement == NoisePlacement::Both)
            cfg.noise.placement = NoisePlacement::SingleSharedChannel;
        if (cfg.noise.placement != NoisePlacement::SingleSharedChannel)
            throw std::invalid_argument("circuit a uses the single shared channel (noise target 'shared')");
    } else if (cfg.noise.placement == NoisePlacement::SingleSharedChannel) {
        throw std::invalid_argument("noise target 'shared' only applies to circuit a");
    }

    const std::size_t tx_dim = cfg.circuit == Circuit::A ? 2 : 3;
    const std::size_t rx_dim = 2;  // response subsystems are all two-dimensional
    if (!cfg.tx_initial.empty() && cfg.tx_initial.size() != tx_dim)
        throw std::invalid_argument("tx_initial has the wrong dimension");
    const std::size_t rx_expected = cfg.circuit == Circuit::A ? 2 : rx_dim;
    if (!cfg.rx_initial.empty() && cfg.rx_initial.size() != rx_expected)
        throw std::invalid_argument("rx_initial has the wrong dimension");

    cfg.noise.seed = cfg.seed;  // one seed per run; sub-streams split it
    return cfg;
}

namespace {

template <std::size_t N>
Vec<N> draw_or_use(const std::vector<double>& given, std::uint64_t seed,
                   std::uint64_t stream, double ball) {
    Vec<N> out{};
    if (!given.empty()) {
        for (std::size_t i = 0; i < N; ++i) out[i] = given[i];
        return out;
    }
    GaussianStream g(seed, stream);
    bool all_zero = true;
    do {
        all_zero = true;
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = g.uniform_in(-ball, ball);
            if (out[i] != 0.0) all_zero = false;
        }
    } while (all_zero);  // the ball excludes the exact origin
    return out;
}

// RK4 step that also reports the four stage-local values of one component
// (the sync drive tapped by the receiver).
template <std::size_t N, class Rhs>
Vec<N> rk4_step_capture(Rhs&& f, const Vec<N>& x, double dt, std::size_t comp,
                        double stage_vals[4]) {
    Vec<N> k1 = f(x);
    Vec<N> tmp;
    stage_vals[0] = x[comp];
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    stage_vals[1] = tmp[comp];
    Vec<N> k2 = f(tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    stage_vals[2] = tmp[comp];
    Vec<N> k3 = f(tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + dt * k3[i];
    stage_vals[3] = tmp[comp];
    Vec<N> k4 = f(tmp);
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// RK4 step of a driven (response) system whose drive takes a prescribed value
// at each stage (the transmitter's stage-local drive plus held noise).
template <std::size_t N, class Rhs>
Vec<N> rk4_step_driven(Rhs&& f, const Vec<N>& x, double dt, const double drive[4]) {
    Vec<N> k1 = f(x, drive[0]);
    Vec<N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    Vec<N> k2 = f(tmp, drive[1]);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    Vec<N> k3 = f(tmp, drive[2]);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + dt * k3[i];
    Vec<N> k4 = f(tmp, drive[3]);
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

Trace make_trace(double dt, std::vector<double> samples) {
    Trace tr;
    tr.dt = dt;
    tr.t0 = 0.0;
    tr.samples = std::move(samples);
    return tr;
}

struct DecodeState {
    double vc = 0.0;
    bool started = false;
};

// One decoder update: returns (VM, records intermediate levels if asked).
struct DecodeSample {
    int hr, fp, mp;
    double vout2, vc, vm;
};

DecodeSample decode_step(double rx_cmp_state, double vout_noisy, double dt,
                         const CodecParams& codec, const FilterSpec& filter,
                         DecodeState& st) {
    DecodeSample s{};
    s.hr = comparator_bit(rx_cmp_state, codec.Vo);
    s.fp = bit_from_voltage(vout_noisy, codec.decode_threshold);
    s.mp = s.fp ^ s.hr;
    s.vout2 = codec.kappa * codec.mask_high * s.mp;
    if (!st.started) {
        st.vc = s.vout2;
        st.started = true;
    } else {
        st.vc = lowpass_step(st.vc, s.vout2, dt, filter);
    }
    s.vc = st.vc;
    s.vm = threshold_decode(st.vc, codec);
    return s;
}

struct MetricsInput {
    const Trace* message;
    const Trace* decoded;
    const Trace* tx_cmp;
    const Trace* rx_cmp;
    MessageSpec spec;
    double duration;
    double dt;
};

SyncReport compute_report(const MetricsInput& in) {
    SyncReport rep;
    const double settle = std::max(0.1 * in.duration, 0.002);
    const double settle_frac = std::min(0.9, settle / in.duration);

    // Alignment search across up to half a bit period, on post-settle slices.
    const std::size_t ks = static_cast<std::size_t>(settle / in.dt);
    const std::size_t n = in.message->size();
    std::size_t max_lag = static_cast<std::size_t>(std::llround(0.25 / in.spec.frequency / in.dt));
    std::size_t lag = 0;
    if (ks + 16 < n) {
        Trace ref = make_trace(in.dt, {in.message->samples.begin() + ks, in.message->samples.end()});
        Trace sig = make_trace(in.dt, {in.decoded->samples.begin() + ks, in.decoded->samples.end()});
        lag = align_lag(ref, sig, max_lag);
    }
    rep.alignment_lag = static_cast<double>(lag) * in.dt;

    try {
        BerResult ber = bit_error_rate(*in.message, *in.decoded, in.spec, settle, lag);
        rep.ber = ber.ber;
        rep.ber_polarity_agnostic = ber.ber_polarity_agnostic;
        rep.bits = ber.bits;
        rep.bit_errors = ber.errors;
    } catch (const std::invalid_argument&) {
        // Runs too short to score at least 10 bits carry no BER.
        rep.ber = std::numeric_limits<double>::quiet_NaN();
        rep.ber_polarity_agnostic = rep.ber;
        rep.bits = 0;
        rep.bit_errors = 0;
    }

    GlitchStats gs = count_glitches(*in.message, *in.decoded, in.spec, settle, lag);
    rep.glitches = gs.glitches;

    rep.sync_rms = sync_error_rms(*in.tx_cmp, *in.rx_cmp, settle_frac, 1.0);
    rep.sync_rms_first_10pct = sync_error_rms(*in.tx_cmp, *in.rx_cmp, 0.0, 0.1);
    rep.sync_rms_last_50pct = sync_error_rms(*in.tx_cmp, *in.rx_cmp, 0.5, 1.0);
    rep.correlation = correlation(*in.tx_cmp, *in.rx_cmp, settle_frac, 1.0);
    rep.antisync = is_antisynchronized(rep.correlation);
    return rep;
}

// ------------------------------------------------------------------ circuit A
LinkResult run_link_a_engine(const LinkConfig& cfg) {
    const double dt = cfg.dt;
    const std::size_t n = static_cast<std::size_t>(std::llround(cfg.duration / dt));
    const std::size_t warm = static_cast<std::size_t>(std::llround(cfg.tx_warmup / dt));

    Vec<2> tx = draw_or_use<2>(cfg.tx_initial, cfg.seed, kStreamTxIc, cfg.ic_ball);
    Vec<2> rx = draw_or_use<2>(cfg.rx_initial, cfg.seed, kStreamRxIc, cfg.ic_ball);

    // Transmitter warm-up: the oscillator runs (with its own codec loop)
    // before t = 0; the transmission starts from the resulting state.
    for (std::size_t j = 0; j < warm; ++j) {
        const double t = (static_cast<double>(j) - static_cast<double>(warm)) * dt;
        const int m = message_bit(cfg.message, t);
        const int ht = comparator_bit(tx[1], cfg.codec.Vo);
        const double vout = xor_mask(m, ht, cfg.codec);
        tx = rk4_step<2>([&](const Vec<2>& s) { return circuit_a_rhs(s, vout, cfg.a); }, tx, dt);
        check_in_bounds(tx, t + dt, cfg.guard);
    }

    Trace message = generate_message(cfg.message, dt, n + 1);

    // Pass 1: transmitter, clean masked output (the only channel signal).
    std::vector<double> tx_v1(n + 1), tx_v2(n + 1), vout_clean(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        tx_v1[k] = tx[0];
        tx_v2[k] = tx[1];
        const int m = message.samples[k] > cfg.codec.decode_threshold ? 1 : 0;
        const int ht = comparator_bit(tx[1], cfg.codec.Vo);
        vout_clean[k] = xor_mask(m, ht, cfg.codec);
        if (k == n) break;
        const double vout = vout_clean[k];
        tx = rk4_step<2>([&](const Vec<2>& s) { return circuit_a_rhs(s, vout, cfg.a); }, tx, dt);
        check_in_bounds(tx, static_cast<double>(k + 1) * dt, cfg.guard);
    }

    Trace vout_tr = make_trace(dt, std::move(vout_clean));
    const double sigma = noise_sigma(vout_tr, cfg.noise.amplitude_percent);

    // Pass 2: channel noise + receiver (driven by the noisy shared signal).
    GaussianStream gs(cfg.noise.seed, kStreamSync);
    std::vector<double> rx_v1(n + 1), rx_v2(n + 1), vout_noisy(n + 1), vm(n + 1);
    std::vector<double> hs, f_level, hs_rx, mprime, vout2_tr, vc_tr;
    const bool rec = cfg.record_traces;
    if (rec) {
        hs.resize(n + 1); f_level.resize(n + 1); hs_rx.resize(n + 1);
        mprime.resize(n + 1); vout2_tr.resize(n + 1); vc_tr.resize(n + 1);
    }
    DecodeState dst;
    for (std::size_t k = 0; k <= n; ++k) {
        rx_v1[k] = rx[0];
        rx_v2[k] = rx[1];
        const double noise = sigma == 0.0 ? 0.0 : sigma * gs.next();
        const double v_ch = vout_tr.samples[k] + noise;
        vout_noisy[k] = v_ch;
        DecodeSample dsm = decode_step(rx[1], v_ch, dt, cfg.codec, cfg.filter, dst);
        vm[k] = dsm.vm;
        if (rec) {
            const int m = message.samples[k] > cfg.codec.decode_threshold ? 1 : 0;
            const int ht = comparator_bit(tx_v2[k], cfg.codec.Vo);
            hs[k] = 5.0 * ht;
            f_level[k] = 5.0 * (m ^ ht);
            hs_rx[k] = 5.0 * dsm.hr;
            mprime[k] = 5.0 * dsm.mp;
            vout2_tr[k] = dsm.vout2;
            vc_tr[k] = dsm.vc;
        }
        if (k == n) break;
        rx = rk4_step<2>([&](const Vec<2>& s) { return circuit_a_rhs(s, v_ch, cfg.a); }, rx, dt);
        check_in_bounds(rx, static_cast<double>(k + 1) * dt, cfg.guard);
    }

    LinkResult res;
    res.resolved = cfg;
    Trace tx_cmp = make_trace(dt, std::move(tx_v2));
    Trace rx_cmp = make_trace(dt, std::move(rx_v2));
    Trace vm_tr = make_trace(dt, std::move(vm));

    MetricsInput mi{&message, &vm_tr, &tx_cmp, &rx_cmp, cfg.message, cfg.duration, dt};
    res.report = compute_report(mi);

    res.traces.emplace_back("M", message);
    if (rec) {
        res.traces.emplace_back("HS", make_trace(dt, std::move(hs)));
        res.traces.emplace_back("F", make_trace(dt, std::move(f_level)));
    }
    res.traces.emplace_back("Vout", std::move(vout_tr));
    res.traces.emplace_back("Vout_noisy", make_trace(dt, std::move(vout_noisy)));
    if (rec) {
        res.traces.emplace_back("HS_rx", make_trace(dt, std::move(hs_rx)));
        res.traces.emplace_back("Mprime", make_trace(dt, std::move(mprime)));
        res.traces.emplace_back("Vout2", make_trace(dt, std::move(vout2_tr)));
        res.traces.emplace_back("VC", make_trace(dt, std::move(vc_tr)));
    }
    res.traces.emplace_back("VM", std::move(vm_tr));
    res.traces.emplace_back("tx_V1", make_trace(dt, std::move(tx_v1)));
    res.traces.emplace_back("tx_V2", std::move(tx_cmp));
    res.traces.emplace_back("rx_V1", make_trace(dt, std::move(rx_v1)));
    res.traces.emplace_back("rx_V2", std::move(rx_cmp));
    // Metrics were computed before the traces were moved into the map; keep
    // the map self-consistent by re-pointing nothing afterwards.
    return res;
}

// --------------------------------------------------- drive-response circuits
struct DriveResponseModel {
    std::size_t drive_comp;   // tx component on the sync channel
    std::size_t tx_cmp_comp;  // tx comparator component
    const char* tx_names[3];
    const char* rx_names[2];
};

template <class TxRhs, class RxRhs>
LinkResult run_drive_response(const LinkConfig& cfg, TxRhs&& tx_rhs, RxRhs&& rx_rhs,
                              const DriveResponseModel& model) {
    const double dt = cfg.dt;
    const std::size_t n = static_cast<std::size_t>(std::llround(cfg.duration / dt));
    const std::size_t warm = static_cast<std::size_t>(std::llround(cfg.tx_warmup / dt));

    Vec<3> tx = draw_or_use<3>(cfg.tx_initial, cfg.seed, kStreamTxIc, cfg.ic_ball);
    Vec<2> rx = draw_or_use<2>(cfg.rx_initial, cfg.seed, kStreamRxIc, cfg.ic_ball);

    for (std::size_t j = 0; j < warm; ++j) {
        tx = rk4_step<3>(tx_rhs, tx, dt);
        check_in_bounds(tx, (static_cast<double>(j) - static_cast<double>(warm)) * dt + dt, cfg.guard);
    }

    Trace message = generate_message(cfg.message, dt, n + 1);

    // Pass 1: transmitter. Record states, clean masked output and the four
    // stage-local drive values of every step (the receiver integrates against
    // the same stage values, so a noiseless receiver tracks bit-for-bit).
    std::vector<double> tx_c0(n + 1), tx_c1(n + 1), tx_c2(n + 1), vout_clean(n + 1);
    std::vector<double> stage_drive(4 * n);
    for (std::size_t k = 0; k <= n; ++k) {
        tx_c0[k] = tx[0];
        tx_c1[k] = tx[1];
        tx_c2[k] = tx[2];
        const int m = message.samples[k] > cfg.codec.decode_threshold ? 1 : 0;
        const int ht = comparator_bit(tx[model.tx_cmp_comp], cfg.codec.Vo);
        vout_clean[k] = xor_mask(m, ht, cfg.codec);
        if (k == n) break;
        tx = rk4_step_capture<3>(tx_rhs, tx, dt, model.drive_comp, &stage_drive[4 * k]);
        check_in_bounds(tx, static_cast<double>(k + 1) * dt, cfg.guard);
    }

    const std::vector<double>* drive_src = nullptr;
    switch (model.drive_comp) {
        case 0: drive_src = &tx_c0; break;
        case 1: drive_src = &tx_c1; break;
        default: drive_src = &tx_c2; break;
    }

    Trace vout_tr = make_trace(dt, std::move(vout_clean));
    Trace sync_tr = make_trace(dt, *drive_src);

    const bool noise_sync = cfg.noise.placement == NoisePlacement::SyncOnly ||
                            cfg.noise.placement == NoisePlacement::Both;
    const bool noise_info = cfg.noise.placement == NoisePlacement::InfoOnly ||
                            cfg.noise.placement == NoisePlacement::Both;
    const double sigma_sync = noise_sync ? noise_sigma(sync_tr, cfg.noise.amplitude_percent) : 0.0;
    const double sigma_info = noise_info ? noise_sigma(vout_tr, cfg.noise.amplitude_percent) : 0.0;

    // Pass 2: channels + receiver.
    GaussianStream g_sync(cfg.noise.seed, kStreamSync);
    GaussianStream g_info(cfg.noise.seed, kStreamInfo);
    std::vector<double> rx_c0(n + 1), rx_c1(n + 1), sync_noisy(n + 1), vout_noisy(n + 1), vm(n + 1);
    std::vector<double> hs, f_level, hs_rx, mprime, vout2_tr, vc_tr;
    const bool rec = cfg.record_traces;
    if (rec) {
        hs.resize(n + 1); f_level.resize(n + 1); hs_rx.resize(n + 1);
        mprime.resize(n + 1); vout2_tr.resize(n + 1); vc_tr.resize(n + 1);
    }
    DecodeState dst;
    for (std::size_t k = 0; k <= n; ++k) {
        rx_c0[k] = rx[0];
        rx_c1[k] = rx[1];
        const double ns = sigma_sync == 0.0 ? 0.0 : sigma_sync * g_sync.next();
        const double ni = sigma_info == 0.0 ? 0.0 : sigma_info * g_info.next();
        sync_noisy[k] = sync_tr.samples[k] + ns;
        vout_noisy[k] = vout_tr.samples[k] + ni;
        // The receiver comparator taps its first state component by
        // convention (rx_names[0] is the comparator variable).
        DecodeSample dsm = decode_step(rx[0], vout_noisy[k], dt, cfg.codec, cfg.filter, dst);
        vm[k] = dsm.vm;
        if (rec) {
            const int m = message.samples[k] > cfg.codec.decode_threshold ? 1 : 0;
            const int ht = comparator_bit(
                (model.tx_cmp_comp == 0 ? tx_c0[k] : model.tx_cmp_comp == 1 ? tx_c1[k] : tx_c2[k]),
                cfg.codec.Vo);
            hs[k] = 5.0 * ht;
            f_level[k] = 5.0 * (m ^ ht);
            hs_rx[k] = 5.0 * dsm.hr;
            mprime[k] = 5.0 * dsm.mp;
            vout2_tr[k] = dsm.vout2;
            vc_tr[k] = dsm.vc;
        }
        if (k == n) break;
        // Held noise: one sync deviate per step offsets all four stage values.
        double drives[4];
        for (int s = 0; s < 4; ++s) drives[s] = stage_drive[4 * k + s] + ns;
        rx = rk4_step_driven<2>(rx_rhs, rx, dt, drives);
        check_in_bounds(rx, static_cast<double>(k + 1) * dt, cfg.guard);
    }

    LinkResult res;
    res.resolved = cfg;
    Trace tx_cmp = make_trace(dt, model.tx_cmp_comp == 0 ? tx_c0
                                  : model.tx_cmp_comp == 1 ? tx_c1 : tx_c2);
    Trace rx_cmp = make_trace(dt, rx_c0);
    Trace vm_tr = make_trace(dt, std::move(vm));

    MetricsInput mi{&message, &vm_tr, &tx_cmp, &rx_cmp, cfg.message, cfg.duration, dt};
    res.report = compute_report(mi);

    res.traces.emplace_back("M", message);
    if (rec) {
        res.traces.emplace_back("HS", make_trace(dt, std::move(hs)));
        res.traces.emplace_back("F", make_trace(dt, std::move(f_level)));
    }
    res.traces.emplace_back("Vout", std::move(vout_tr));
    res.traces.emplace_back("Vout_noisy", make_trace(dt, std::move(vout_noisy)));
    res.traces.emplace_back("sync", std::move(sync_tr));
    res.traces.emplace_back("sync_noisy", make_trace(dt, std::move(sync_noisy)));
    if (rec) {
        res.traces.emplace_back("HS_rx", make_trace(dt, std::move(hs_rx)));
        res.traces.emplace_back("Mprime", make_trace(dt, std::move(mprime)));
        res.traces.emplace_back("Vout2", make_trace(dt, std::move(vout2_tr)));
        res.traces.emplace_back("VC", make_trace(dt, std::move(vc_tr)));
    }
    res.traces.emplace_back("VM", std::move(vm_tr));
    res.traces.emplace_back(std::string("tx_") + model.tx_names[0], make_trace(dt, std::move(tx_c0)));
    res.traces.emplace_back(std::string("tx_") + model.tx_names[1], make_trace(dt, std::move(tx_c1)));
    res.traces.emplace_back(std::string("tx_") + model.tx_names[2], make_trace(dt, std::move(tx_c2)));
    res.traces.emplace_back(std::string("rx_") + model.rx_names[0], std::move(rx_cmp));
    res.traces.emplace_back(std::string("rx_") + model.rx_names[1], make_trace(dt, std::move(rx_c1)));
    return res;
}

}  // namespace

LinkResult run_link(const LinkConfig& raw) {
    LinkConfig cfg = resolve_defaults(raw);
    switch (cfg.circuit) {
        case Circuit::A:
            return run_link_a_engine(cfg);
        case Circuit::B: {
            const ChuaParams& p = cfg.chua;
            DriveResponseModel model{1 /*VC2 drives*/, 0 /*comparator on VC1*/,
                                     {"VC1", "VC2", "iL"}, {"VC1", "iL"}};
            return run_drive_response(
                cfg,
                [&p](const Vec<3>& s) { return chua_rhs(s, p); },
                [&p](const Vec<2>& r, double d) -> Vec<2> {
                    // Response: (VC1, iL) slaved to the received VC2.
                    return {(p.G() * (d - r[0]) - chua_nonlinearity(r[0], p)) / p.C1,
                            -d / p.L};
                },
                model);
        }
        case Circuit::Ca: {
            const LorenzLikeParams& p = cfg.lorenz;
            DriveResponseModel model{0 /*V1 drives*/, 2 /*comparator on V3*/,
                                     {"V1", "V2", "V3"}, {"V3", "V2"}};
            // rx state r = (V3r, V2r): comparator component first.
            return run_drive_response(
                cfg,
                [&p](const Vec<3>& s) { return lorenz_like_rhs(s, p); },
                [&p](const Vec<2>& r, double d) -> Vec<2> {
                    return {-p.k31() * d - p.k312() * d * r[1],
                            -p.k22() * r[1] + p.k213() * d * r[0]};
                },
                model);
        }
        case Circuit::Cb: {
            const LorenzLikeParams& p = cfg.lorenz;
            DriveResponseModel model{1 /*V2 drives*/, 0 /*comparator on V1*/,
                                     {"V1", "V2", "V3"}, {"V1", "V3"}};
            return run_drive_response(
                cfg,
                [&p](const Vec<3>& s) { return lorenz_like_rhs(s, p); },
                [&p](const Vec<2>& r, double d) -> Vec<2> {
                    return {-p.k11() * r[0] - p.k13() * r[1],
                            -p.k31() * r[0] - p.k312() * r[0] * d};
                },
                model);
        }
    }
    throw std::invalid_argument("unknown circuit");
}

LinkResult run_link_a(LinkConfig cfg) {
    cfg.circuit = Circuit::A;
    return run_link(cfg);
}

LinkResult run_link_chua(LinkConfig cfg) {
    cfg.circuit = Circuit::B;
    return run_link(cfg);
}

LinkResult run_link_lorenz(LinkConfig cfg) {
    if (cfg.circuit != Circuit::Ca && cfg.circuit != Circuit::Cb) cfg.circuit = Circuit::Ca;
    return run_link(cfg);
}

}  // namespace chaoscomm
