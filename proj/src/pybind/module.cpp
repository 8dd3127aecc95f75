// Python bindings for the link simulator: one-call simulate/sweep plus the
// small codec/channel helpers that are useful for analysis notebooks.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaoscomm/channel.hpp"
#include "chaoscomm/codec.hpp"
#include "chaoscomm/config.hpp"
#include "chaoscomm/link.hpp"
#include "chaoscomm/signals.hpp"

namespace py = pybind11;
using namespace chaoscomm;

namespace {

Circuit parse_circuit(const std::string& s) {
    auto c = circuit_from_string(s);
    if (!c) throw std::invalid_argument("unknown circuit '" + s + "' (expected a|b|ca|cb)");
    return *c;
}

NoisePlacement parse_placement(const std::string& s) {
    auto p = placement_from_string(s);
    if (!p)
        throw std::invalid_argument("unknown noise target '" + s +
                                    "' (expected sync|info|both|shared)");
    return *p;
}

LinkConfig make_config(const std::string& circuit, double noise_pct,
                       const std::string& noise_target, const std::string& filter,
                       double kappa, double dt, double duration, double warmup,
                       std::uint64_t seed, std::optional<double> comparator_vo,
                       bool record_traces) {
    LinkConfig cfg;
    cfg.circuit = parse_circuit(circuit);
    cfg.noise.amplitude_percent = noise_pct;
    cfg.noise.placement = parse_placement(noise_target);
    if (!filter.empty()) {
        cfg.filter = FilterSpec::from_id(filter_from_string(filter));
        cfg.explicit_filter = true;
    }
    cfg.codec.kappa = kappa;
    cfg.dt = dt;
    cfg.duration = duration;
    cfg.tx_warmup = warmup;
    cfg.seed = seed;
    cfg.comparator_vo = comparator_vo;
    cfg.record_traces = record_traces;
    return cfg;
}

py::dict report_to_dict(const SyncReport& r) {
    py::dict d;
    d["ber"] = r.ber;
    d["ber_polarity_agnostic"] = r.ber_polarity_agnostic;
    d["sync_rms"] = r.sync_rms;
    d["correlation"] = r.correlation;
    d["antisync"] = r.antisync;
    d["alignment_lag"] = r.alignment_lag;
    d["glitches"] = r.glitches;
    d["bits"] = r.bits;
    d["bit_errors"] = r.bit_errors;
    d["sync_rms_first_10pct"] = r.sync_rms_first_10pct;
    d["sync_rms_last_50pct"] = r.sync_rms_last_50pct;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Chaotic-masking secure-communication link simulator";
    m.attr("__version__") = kToolVersion;

    m.def(
        "simulate",
        [](const std::string& circuit, double noise_pct, const std::string& noise_target,
           const std::string& filter, double kappa, double dt, double duration,
           double warmup, std::uint64_t seed, std::optional<double> comparator_vo,
           bool include_traces) {
            LinkConfig cfg = make_config(circuit, noise_pct, noise_target, filter,
                                         kappa, dt, duration, warmup, seed,
                                         comparator_vo, include_traces);
            LinkResult res = run_link(cfg);
            py::dict d = report_to_dict(res.report);
            d["circuit"] = to_string(res.resolved.circuit);
            d["noise_target"] = to_string(res.resolved.noise.placement);
            d["filter"] = res.resolved.filter.name();
            d["dt"] = res.resolved.dt;
            d["seed"] = res.resolved.seed;
            if (include_traces) {
                py::dict traces;
                for (const auto& [name, tr] : res.traces)
                    traces[py::str(name)] = tr.samples;
                d["traces"] = traces;
            }
            return d;
        },
        py::arg("circuit"), py::arg("noise_pct") = 0.0, py::arg("noise_target") = "both",
        py::arg("filter") = std::string(), py::arg("kappa") = 1.0, py::arg("dt") = 0.0,
        py::arg("duration") = 0.02, py::arg("warmup") = 0.01, py::arg("seed") = 42,
        py::arg("comparator_vo") = std::nullopt, py::arg("include_traces") = false,
        "Run one link end to end and return the decode/synchronization report.");

    m.def(
        "sweep",
        [](const std::string& circuit, const std::vector<double>& amplitudes,
           int repeats, const std::string& noise_target, const std::string& filter,
           double kappa, double dt, double duration, double warmup,
           std::uint64_t seed, int threads) {
            LinkConfig base = make_config(circuit, 0.0, noise_target, filter, kappa,
                                          dt, duration, warmup, seed, std::nullopt,
                                          false);
            auto rows = sweep_noise(base, amplitudes, repeats, threads);
            py::list out;
            for (const auto& r : rows) {
                py::dict d = report_to_dict(r.report);
                d["circuit"] = to_string(r.circuit);
                d["noise_target"] = to_string(r.placement);
                d["amplitude_pct"] = r.amplitude_pct;
                d["repeat"] = r.repeat;
                d["error"] = r.error;
                out.append(d);
            }
            return out;
        },
        py::arg("circuit"), py::arg("amplitudes"), py::arg("repeats") = 10,
        py::arg("noise_target") = "both", py::arg("filter") = std::string(),
        py::arg("kappa") = 1.0, py::arg("dt") = 0.0, py::arg("duration") = 0.02,
        py::arg("warmup") = 0.01, py::arg("seed") = 42, py::arg("threads") = 1,
        "Seeded noise-amplitude sweep; returns one report dict per run.");

    m.def(
        "message",
        [](std::size_t n, double frequency, double dt, double t0, double low,
           double high, double duty) {
            MessageSpec spec;
            spec.frequency = frequency;
            spec.low_level = low;
            spec.high_level = high;
            spec.duty = duty;
            return generate_message(spec, dt, n, t0).samples;
        },
        py::arg("n"), py::arg("frequency") = 6222.0, py::arg("dt") = 1e-7,
        py::arg("t0") = 0.0, py::arg("low") = 0.0, py::arg("high") = 5.0,
        py::arg("duty") = 0.5, "Square-wave message samples.");

    m.def(
        "filter_gain",
        [](const std::string& filter, double f_hz) {
            return FilterSpec::from_id(filter_from_string(filter)).gain_at(f_hz);
        },
        py::arg("filter"), py::arg("f_hz"),
        "Magnitude response of an output filter at f_hz.");

    m.def("comparator_bit", &comparator_bit, py::arg("v"), py::arg("vo") = 2.0,
          "Keystream comparator: 1 when v <= vo.");

    m.def("bit_from_voltage", &bit_from_voltage, py::arg("v"),
          py::arg("threshold") = 2.5, "Receiver gate: 1 when v > threshold.");

    m.def(
        "xor_mask",
        [](int m_bit, int h_bit, double kappa) {
            CodecParams p;
            p.kappa = kappa;
            return xor_mask(m_bit, h_bit, p);
        },
        py::arg("m"), py::arg("h"), py::arg("kappa") = 1.0,
        "Masked output voltage kappa * 5 * (m XOR h).");

    m.def(
        "add_noise",
        [](const std::vector<double>& samples, double amplitude_pct,
           std::uint64_t seed, double dt, const std::string& stream) {
            Trace tr;
            tr.dt = dt;
            tr.samples = samples;
            NoiseSpec spec;
            spec.amplitude_percent = amplitude_pct;
            spec.seed = seed;
            const std::uint64_t id = stream == "info" ? kStreamInfo : kStreamSync;
            return add_noise(tr, spec, id).samples;
        },
        py::arg("samples"), py::arg("amplitude_pct"), py::arg("seed") = 42,
        py::arg("dt") = 1e-7, py::arg("stream") = "sync",
        "Additive Gaussian noise with sigma = pct/100 * mean(|samples|).");

    m.def("splitmix64", &splitmix64, py::arg("x"),
          "The 64-bit mixing function used for seed derivation.");

    py::register_exception<SimulationDiverged>(m, "SimulationDiverged",
                                               PyExc_RuntimeError);
}
