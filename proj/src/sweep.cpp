#include "chaoscomm/link.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

namespace chaoscomm {

std::uint64_t derive_repeat_seed(std::uint64_t base_seed, int repeat) {
    return splitmix64(base_seed + (static_cast<std::uint64_t>(repeat) + 1) *
                                      0x9E3779B97F4A7C15ULL);
}

std::vector<SweepRow> sweep_noise(const LinkConfig& base,
                                  const std::vector<double>& amplitudes,
                                  int repeats, int max_threads) {
    if (amplitudes.empty()) throw std::invalid_argument("amplitude list is empty");
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");

    std::vector<SweepRow> rows(amplitudes.size() * static_cast<std::size_t>(repeats));
    for (std::size_t ai = 0; ai < amplitudes.size(); ++ai)
        for (int r = 0; r < repeats; ++r) {
            SweepRow& row = rows[ai * static_cast<std::size_t>(repeats) + r];
            row.circuit = base.circuit;
            row.placement = base.circuit == Circuit::A
                                ? NoisePlacement::SingleSharedChannel
                                : base.noise.placement;
            row.amplitude_pct = amplitudes[ai];
            row.repeat = r;
        }

    auto run_one = [&](SweepRow& row) {
        LinkConfig cfg = base;
        cfg.noise.amplitude_percent = row.amplitude_pct;
        // Repeat k pairs the same ICs and noise realisation across amplitudes.
        cfg.seed = derive_repeat_seed(base.seed, row.repeat);
        cfg.record_traces = false;
        try {
            row.report = run_link(cfg).report;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const int nthreads = std::max(1, std::min<int>(max_threads, static_cast<int>(rows.size())));
    if (nthreads <= 1) {
        for (auto& row : rows) run_one(row);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= rows.size()) return;
                run_one(rows[i]);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

namespace {

std::string fmt_double(double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.17g", v);
    return tmp;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

void atomic_write(const std::string& path, const std::string& content) {
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

}  // namespace

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::string buf =
        "circuit,placement,amplitude_pct,repeat,ber,ber_polarity_agnostic,"
        "sync_rms,corr,antisync,glitches,error\n";
    for (const auto& r : rows) {
        buf += to_string(r.circuit);
        buf += ',';
        buf += to_string(r.placement);
        buf += ',';
        buf += fmt_double(r.amplitude_pct);
        buf += ',';
        buf += std::to_string(r.repeat);
        buf += ',';
        buf += fmt_double(r.report.ber);
        buf += ',';
        buf += fmt_double(r.report.ber_polarity_agnostic);
        buf += ',';
        buf += fmt_double(r.report.sync_rms);
        buf += ',';
        buf += fmt_double(r.report.correlation);
        buf += ',';
        buf += r.report.antisync ? '1' : '0';
        buf += ',';
        buf += std::to_string(r.report.glitches);
        buf += ',';
        buf += sanitize(r.error);
        buf += '\n';
    }
    atomic_write(path, buf);
}

double mean_ber(const std::vector<SweepRow>& rows, double amplitude,
                bool polarity_agnostic) {
    double acc = 0.0;
    std::size_t cnt = 0;
    for (const auto& r : rows) {
        if (r.amplitude_pct != amplitude || !r.error.empty()) continue;
        const double v = polarity_agnostic ? r.report.ber_polarity_agnostic : r.report.ber;
        if (std::isnan(v)) continue;
        acc += v;
        ++cnt;
    }
    return cnt == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : acc / static_cast<double>(cnt);
}

void write_gnuplot_ber(const std::string& path, const std::vector<SweepRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("no sweep rows");
    // Preserve first-appearance order of amplitudes.
    std::vector<double> amps;
    for (const auto& r : rows)
        if (std::find(amps.begin(), amps.end(), r.amplitude_pct) == amps.end())
            amps.push_back(r.amplitude_pct);

    std::string buf = "# circuit=" + to_string(rows.front().circuit) +
                      " placement=" + to_string(rows.front().placement) + "\n";
    buf += "# amplitude_pct mean_ber\n";
    for (double a : amps) {
        buf += fmt_double(a);
        buf += ' ';
        buf += fmt_double(mean_ber(rows, a));
        buf += '\n';
    }
    atomic_write(path, buf);
}

}  // namespace chaoscomm
