#include "chaoscomm/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chaoscomm {

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "circuit", "noise-pct", "noise-target", "filter", "kappa", "dt",
        "duration", "warmup", "seed", "repeats", "amplitudes", "out", "threads",
    };
    return keys;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size())
        throw std::runtime_error("bad numeric value for '" + key + "': '" + v + "'");
    return x;
}

long long parse_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
        throw std::runtime_error("bad integer value for '" + key + "': '" + v + "'");
    return x;
}

std::string fmt_double(double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.17g", v);
    return tmp;
}

}  // namespace

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    const auto& known = known_config_keys();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected key=value, got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": unknown key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

std::vector<double> parse_amplitude_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw std::runtime_error("empty amplitude in list '" + csv + "'");
        out.push_back(parse_double("amplitudes", item));
    }
    if (out.empty()) throw std::runtime_error("amplitude list is empty");
    for (double a : out)
        if (!(a >= 0.0 && a <= 100.0))
            throw std::runtime_error("amplitude " + fmt_double(a) + " outside [0, 100]");
    return out;
}

FilterId filter_from_string(const std::string& s) {
    if (s == "1" || s == "filter1") return FilterId::Filter1;
    if (s == "2" || s == "filter2") return FilterId::Filter2;
    if (s == "3" || s == "filter3") return FilterId::Filter3;
    if (s == "none" || s == "None") return FilterId::None;
    throw std::runtime_error("unknown filter '" + s + "' (expected 1|2|3|none)");
}

std::string filter_to_string(FilterId id) {
    switch (id) {
        case FilterId::Filter1: return "1";
        case FilterId::Filter2: return "2";
        case FilterId::Filter3: return "3";
        case FilterId::None: return "none";
    }
    return "?";
}

void apply_config(RunOptions& opt, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "circuit") {
            auto c = circuit_from_string(value);
            if (!c) throw std::runtime_error("unknown circuit '" + value + "' (expected a|b|ca|cb)");
            opt.link.circuit = *c;
        } else if (key == "noise-pct") {
            opt.link.noise.amplitude_percent = parse_double(key, value);
        } else if (key == "noise-target") {
            auto p = placement_from_string(value);
            if (!p) throw std::runtime_error("unknown noise target '" + value + "' (expected sync|info|both|shared)");
            opt.link.noise.placement = *p;
        } else if (key == "filter") {
            opt.link.filter = FilterSpec::from_id(filter_from_string(value));
            opt.link.explicit_filter = true;
            opt.filter_given = true;
        } else if (key == "kappa") {
            opt.link.codec.kappa = parse_double(key, value);
        } else if (key == "dt") {
            opt.link.dt = parse_double(key, value);
        } else if (key == "duration") {
            opt.link.duration = parse_double(key, value);
        } else if (key == "warmup") {
            opt.link.tx_warmup = parse_double(key, value);
        } else if (key == "seed") {
            opt.link.seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "repeats") {
            const long long r = parse_int(key, value);
            if (r < 1) throw std::runtime_error("repeats must be >= 1");
            opt.repeats = static_cast<int>(r);
        } else if (key == "amplitudes") {
            opt.amplitudes = parse_amplitude_list(value);
        } else if (key == "out") {
            opt.out_dir = value;
        } else if (key == "threads") {
            const long long t = parse_int(key, value);
            if (t < 0) throw std::runtime_error("threads must be >= 0");
            opt.threads = static_cast<int>(t);
        } else {
            throw std::runtime_error("unknown key '" + key + "'");
        }
    }
}

std::string render_config(const RunOptions& opt) {
    // Emit a loadable config: resolved values, stable order.
    LinkConfig resolved = resolve_defaults(opt.link);
    std::string buf;
    buf += "circuit=" + to_string(resolved.circuit) + "\n";
    buf += "noise-pct=" + fmt_double(resolved.noise.amplitude_percent) + "\n";
    buf += "noise-target=" + to_string(resolved.noise.placement) + "\n";
    buf += "filter=" + filter_to_string(resolved.filter.id) + "\n";
    buf += "kappa=" + fmt_double(resolved.codec.kappa) + "\n";
    buf += "dt=" + fmt_double(resolved.dt) + "\n";
    buf += "duration=" + fmt_double(resolved.duration) + "\n";
    buf += "warmup=" + fmt_double(resolved.tx_warmup) + "\n";
    buf += "seed=" + std::to_string(resolved.seed) + "\n";
    buf += "repeats=" + std::to_string(opt.repeats) + "\n";
    buf += "amplitudes=";
    for (std::size_t i = 0; i < opt.amplitudes.size(); ++i) {
        if (i) buf += ',';
        buf += fmt_double(opt.amplitudes[i]);
    }
    buf += "\n";
    buf += "out=" + opt.out_dir + "\n";
    buf += "threads=" + std::to_string(opt.threads) + "\n";
    return buf;
}

void write_manifest(const std::string& path, const RunOptions& opt,
                    const std::string& command) {
    std::string buf;
    buf += "# chaoscomm " + std::string(kToolVersion) + "\n";
    buf += "# command: " + command + "\n";
    {
        std::time_t now = std::time(nullptr);
        char ts[64];
        std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        buf += "# generated: " + std::string(ts) + "\n";
    }
    buf += render_config(opt);

    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) throw std::runtime_error("failed writing '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("failed to move '" + tmp + "' into place: " + ec.message());
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CHAOSCOMM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    }
    return 1;
}

}  // namespace chaoscomm
