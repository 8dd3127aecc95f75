#include "chaoscomm/signals.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace chaoscomm {

namespace {

void validate_spec(const MessageSpec& spec) {
    if (!(spec.frequency > 0.0)) throw std::invalid_argument("message frequency must be positive");
    if (!(spec.duty > 0.0 && spec.duty < 1.0)) throw std::invalid_argument("message duty must lie in (0, 1)");
    if (!(spec.high_level > spec.low_level)) throw std::invalid_argument("message high level must exceed low level");
}

}  // namespace

double message_level(const MessageSpec& spec, double t) {
    const double x = (t - spec.phase) * spec.frequency;
    double frac = x - std::floor(x);  // periodic extension, valid for t < 0 too
    return frac < spec.duty ? spec.high_level : spec.low_level;
}

int message_bit(const MessageSpec& spec, double t) {
    const double x = (t - spec.phase) * spec.frequency;
    double frac = x - std::floor(x);
    return frac < spec.duty ? 1 : 0;
}

Trace generate_message(const MessageSpec& spec, double dt, std::size_t n, double t0) {
    validate_spec(spec);
    if (!(dt > 0.0)) throw std::invalid_argument("sample interval must be positive");
    if (n == 0) throw std::invalid_argument("sample count must be positive");
    const double half_period = 0.5 / spec.frequency;
    if (dt >= half_period)
        throw std::invalid_argument("sample interval too coarse for the message (dt >= half period)");
    Trace out;
    out.dt = dt;
    out.t0 = t0;
    out.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.samples[k] = message_level(spec, t0 + static_cast<double>(k) * dt);
    return out;
}

namespace {

void append_double(std::string& buf, double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.17g", v);
    buf += tmp;
}

}  // namespace

void write_trace_csv(const std::string& path, const TraceMap& traces) {
    if (traces.empty()) throw std::invalid_argument("no traces to write");
    const Trace& first = traces.front().second;
    for (const auto& [name, tr] : traces) {
        if (name.empty() || name.find(',') != std::string::npos ||
            name.find('\n') != std::string::npos)
            throw std::invalid_argument("invalid trace name: '" + name + "'");
        if (tr.size() != first.size() || tr.dt != first.dt || tr.t0 != first.t0)
            throw std::invalid_argument("traces in one file must share dt, t0 and length");
        for (double v : tr.samples)
            if (!std::isfinite(v))
                throw std::runtime_error("trace '" + name + "' contains a non-finite sample");
    }

    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    const std::string tmp_path = path + ".tmp";

    std::string buf;
    buf.reserve(1 << 20);
    buf += "t";
    for (const auto& [name, tr] : traces) {
        buf += ',';
        buf += name;
    }
    buf += '\n';

    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp_path + "' for writing");
    const std::size_t n = first.size();
    for (std::size_t k = 0; k < n; ++k) {
        append_double(buf, first.time_at(k));
        for (const auto& [name, tr] : traces) {
            buf += ',';
            append_double(buf, tr.samples[k]);
        }
        buf += '\n';
        if (buf.size() > (1 << 20) - 1024) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + tmp_path + "'");
    std::error_code ec;
    std::filesystem::rename(tmp_path, path, ec);
    if (ec) throw std::runtime_error("failed to move '" + tmp_path + "' into place: " + ec.message());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_strict_double(const std::string& s, std::size_t line_no) {
    if (s.empty())
        throw std::runtime_error("empty field at line " + std::to_string(line_no));
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw std::runtime_error("malformed number '" + s + "' at line " + std::to_string(line_no));
    if (!std::isfinite(v))
        throw std::runtime_error("non-finite value '" + s + "' at line " + std::to_string(line_no));
    return v;
}

}  // namespace

TraceMap read_trace_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "t")
        throw std::runtime_error("'" + path + "': header must be t,<name>,...");

    const std::size_t ncols = header.size();
    std::vector<std::vector<double>> cols(ncols);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != ncols)
            throw std::runtime_error("'" + path + "': row at line " + std::to_string(line_no) +
                                     " has " + std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(ncols));
        for (std::size_t i = 0; i < ncols; ++i)
            cols[i].push_back(parse_strict_double(fields[i], line_no));
    }
    if (cols[0].size() < 2)
        throw std::runtime_error("'" + path + "': need at least two rows");

    const double t0 = cols[0][0];
    const double dt = cols[0][1] - cols[0][0];
    if (!(dt > 0.0)) throw std::runtime_error("'" + path + "': time column must be increasing");

    TraceMap out;
    out.reserve(ncols - 1);
    for (std::size_t i = 1; i < ncols; ++i) {
        Trace tr;
        tr.dt = dt;
        tr.t0 = t0;
        tr.samples = std::move(cols[i]);
        out.emplace_back(header[i], std::move(tr));
    }
    return out;
}

}  // namespace chaoscomm
