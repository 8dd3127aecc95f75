#pragma once
// Flat key=value run-configuration files, the run manifest, and the shared
// option model used by the command-line tool.

#include <map>
#include <string>
#include <vector>

#include "chaoscomm/link.hpp"

namespace chaoscomm {

inline constexpr const char* kToolVersion = "1.0.0";

// Everything a CLI invocation (or manifest) can specify.
struct RunOptions {
    LinkConfig link{};
    std::vector<double> amplitudes = {0.01, 0.1, 1.0, 5.0, 10.0, 20.0, 50.0};
    int repeats = 10;
    std::string out_dir = "out";
    int threads = 0;  // 0 -> CHAOSCOMM_THREADS env var, else 1
    bool filter_given = false;  // --filter appeared (allows explicit "none")
};

// Keys accepted in config files (also the manifest keys).
const std::vector<std::string>& known_config_keys();

// Parse a flat key=value file ('#' starts a comment, blank lines ignored).
// Unknown keys and malformed lines throw std::runtime_error.
std::map<std::string, std::string> load_config(const std::string& path);

// Apply parsed key=value settings onto options (values validated; throws
// std::runtime_error on a bad value).
void apply_config(RunOptions& opt, const std::map<std::string, std::string>& kv);

// Serialise options back to the key=value form (stable key order). The result
// is itself a loadable config file.
std::string render_config(const RunOptions& opt);

// Write the run manifest: comment header (tool version, timestamp, command)
// followed by the fully resolved configuration. Atomic (temp file + rename).
void write_manifest(const std::string& path, const RunOptions& opt,
                    const std::string& command);

// Parse helpers shared by the CLI (throw std::runtime_error on bad input).
std::vector<double> parse_amplitude_list(const std::string& csv);
FilterId filter_from_string(const std::string& s);
std::string filter_to_string(FilterId id);

// Resolve worker-thread count: explicit value, else CHAOSCOMM_THREADS, else 1.
int resolve_threads(int requested);

}  // namespace chaoscomm
