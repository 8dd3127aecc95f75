// chaoscomm - chaotic-masking secure communication link simulator.
//
// Subcommands:
//   simulate         run one link, write traces.csv / report.csv / manifest
//   sweep            noise-amplitude sweep, write sweep.csv / gnuplot data
//   compare-filters  run one configuration under every output filter
//
// Exit codes: 0 success, 2 usage/configuration error, 3 simulation divergence.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chaoscomm/config.hpp"
#include "chaoscomm/link.hpp"

namespace cc = chaoscomm;

namespace {

std::string fmt_double(double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.17g", v);
    return tmp;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("failed writing '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("failed to move '" + tmp + "' into place: " + ec.message());
}

std::string report_csv(const cc::SyncReport& r) {
    std::string buf =
        "ber,ber_polarity_agnostic,sync_rms,corr,antisync,alignment_lag,glitches,"
        "bits,bit_errors\n";
    buf += fmt_double(r.ber) + "," + fmt_double(r.ber_polarity_agnostic) + "," +
           fmt_double(r.sync_rms) + "," + fmt_double(r.correlation) + "," +
           (r.antisync ? std::string("1") : std::string("0")) + "," +
           fmt_double(r.alignment_lag) + "," + std::to_string(r.glitches) + "," +
           std::to_string(r.bits) + "," + std::to_string(r.bit_errors) + "\n";
    return buf;
}

std::filesystem::path out_path(const cc::RunOptions& opt, const char* name) {
    return std::filesystem::path(opt.out_dir) / name;
}

int cmd_simulate(cc::RunOptions& opt) {
    cc::LinkResult res = cc::run_link(opt.link);
    cc::write_trace_csv(out_path(opt, "traces.csv").string(), res.traces);
    atomic_write_text(out_path(opt, "report.csv").string(), report_csv(res.report));
    cc::write_manifest(out_path(opt, "manifest").string(), opt, "simulate");
    std::cout << "circuit=" << cc::to_string(res.resolved.circuit)
              << " noise=" << res.resolved.noise.amplitude_percent << "%"
              << " target=" << cc::to_string(res.resolved.noise.placement)
              << " filter=" << res.resolved.filter.name()
              << " ber=" << res.report.ber
              << " ber_pa=" << res.report.ber_polarity_agnostic
              << " sync_rms=" << res.report.sync_rms
              << " corr=" << res.report.correlation
              << " antisync=" << (res.report.antisync ? 1 : 0)
              << " lag=" << res.report.alignment_lag
              << " glitches=" << res.report.glitches << "\n";
    std::cout << "wrote " << out_path(opt, "traces.csv").string() << ", "
              << out_path(opt, "report.csv").string() << ", "
              << out_path(opt, "manifest").string() << "\n";
    return 0;
}

int cmd_sweep(cc::RunOptions& opt) {
    const int threads = cc::resolve_threads(opt.threads);
    auto rows = cc::sweep_noise(opt.link, opt.amplitudes, opt.repeats, threads);
    cc::write_sweep_csv(out_path(opt, "sweep.csv").string(), rows);
    cc::write_gnuplot_ber(out_path(opt, "ber_vs_amplitude.dat").string(), rows);
    cc::write_manifest(out_path(opt, "manifest").string(), opt, "sweep");
    std::cout << "amplitude_pct mean_ber mean_ber_pa\n";
    for (double a : opt.amplitudes)
        std::cout << a << " " << cc::mean_ber(rows, a) << " "
                  << cc::mean_ber(rows, a, true) << "\n";
    std::size_t failed = 0;
    for (const auto& r : rows)
        if (!r.error.empty()) ++failed;
    if (failed)
        std::cerr << failed << " of " << rows.size()
                  << " runs failed (see the error column)\n";
    std::cout << "wrote " << out_path(opt, "sweep.csv").string() << ", "
              << out_path(opt, "ber_vs_amplitude.dat").string() << ", "
              << out_path(opt, "manifest").string() << "\n";
    return 0;
}

int cmd_compare_filters(cc::RunOptions& opt) {
    const cc::FilterId ids[4] = {cc::FilterId::None, cc::FilterId::Filter1,
                                 cc::FilterId::Filter2, cc::FilterId::Filter3};
    std::string buf = "filter,glitches,ber,ber_polarity_agnostic,alignment_lag\n";
    std::cout << "filter    glitches  ber        lag\n";
    for (cc::FilterId id : ids) {
        cc::LinkConfig cfg = opt.link;
        cfg.filter = cc::FilterSpec::from_id(id);
        cfg.explicit_filter = true;
        cc::LinkResult res = cc::run_link(cfg);
        buf += cfg.filter.name() + "," + std::to_string(res.report.glitches) + "," +
               fmt_double(res.report.ber) + "," +
               fmt_double(res.report.ber_polarity_agnostic) + "," +
               fmt_double(res.report.alignment_lag) + "\n";
        std::printf("%-9s %-9zu %-10.4g %-10.4g\n", cfg.filter.name().c_str(),
                    res.report.glitches, res.report.ber, res.report.alignment_lag);
    }
    atomic_write_text(out_path(opt, "filters.csv").string(), buf);
    cc::write_manifest(out_path(opt, "manifest").string(), opt, "compare-filters");
    std::cout << "wrote " << out_path(opt, "filters.csv").string() << ", "
              << out_path(opt, "manifest").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    cc::RunOptions opt;
    std::string config_path, circuit_s, target_s, filter_s, amplitudes_s;

    // Config file first (lowest precedence), flags override below.
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
    }
    if (!config_path.empty()) {
        try {
            cc::apply_config(opt, cc::load_config(config_path));
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    CLI::App app{"chaotic-masking secure communication link simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value configuration file");
        sub->add_option("--circuit", circuit_s, "circuit: a|b|ca|cb");
        sub->add_option("--noise-pct", opt.link.noise.amplitude_percent,
                        "noise amplitude A as percent of mean |signal|");
        sub->add_option("--noise-target", target_s, "noisy channel(s): sync|info|both|shared");
        sub->add_option("--filter", filter_s, "output filter: 1|2|3|none");
        sub->add_option("--kappa", opt.link.codec.kappa, "masked-output level scale");
        sub->add_option("--dt", opt.link.dt, "integration step (s); 0 = per-circuit default");
        sub->add_option("--duration", opt.link.duration, "transmission length (s)");
        sub->add_option("--warmup", opt.link.tx_warmup, "transmitter warm-up before t=0 (s)");
        sub->add_option("--seed", opt.link.seed, "PRNG seed (ICs and channel noise)");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--threads", opt.threads,
                        "worker threads (0 = CHAOSCOMM_THREADS env or 1)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run one link end to end");
    add_common(sim);
    CLI::App* swp = app.add_subcommand("sweep", "noise-amplitude sweep");
    add_common(swp);
    swp->add_option("--amplitudes", amplitudes_s, "comma-separated amplitude list (%)");
    swp->add_option("--repeats", opt.repeats, "seeded repetitions per amplitude");
    CLI::App* cmp = app.add_subcommand("compare-filters",
                                       "one configuration under every filter");
    add_common(cmp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!circuit_s.empty()) {
            auto c = cc::circuit_from_string(circuit_s);
            if (!c) throw std::runtime_error("unknown circuit '" + circuit_s + "' (expected a|b|ca|cb)");
            opt.link.circuit = *c;
        }
        if (!target_s.empty()) {
            auto p = cc::placement_from_string(target_s);
            if (!p) throw std::runtime_error("unknown noise target '" + target_s +
                                             "' (expected sync|info|both|shared)");
            opt.link.noise.placement = *p;
        }
        if (!filter_s.empty()) {
            opt.link.filter = cc::FilterSpec::from_id(cc::filter_from_string(filter_s));
            opt.link.explicit_filter = true;
        }
        if (!amplitudes_s.empty()) opt.amplitudes = cc::parse_amplitude_list(amplitudes_s);

        if (sim->parsed()) return cmd_simulate(opt);
        if (swp->parsed()) return cmd_sweep(opt);
        if (cmp->parsed()) return cmd_compare_filters(opt);
        std::cerr << "error: no command given\n";
        return 2;
    } catch (const cc::SimulationDiverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
