#pragma once
// End-to-end link assembly: transmitter oscillator + comparator keystream +
// XOR masking, noisy channel(s), receiver (drive-coupled response oscillator
// + keystream + XOR unmask + RC filter + threshold decoder), plus metrics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chaoscomm/channel.hpp"
#include "chaoscomm/codec.hpp"
#include "chaoscomm/metrics.hpp"
#include "chaoscomm/oscillators.hpp"
#include "chaoscomm/signals.hpp"

namespace chaoscomm {

// Circuit selector. Ca/Cb are the two role assignments of the Lorenz-like
// circuit: Ca drives with V1 (receiver rebuilds V2,V3; comparator on V3),
// Cb drives with V2 (receiver rebuilds V1,V3; comparator on V1).
enum class Circuit { A, B, Ca, Cb };

std::string to_string(Circuit c);
std::optional<Circuit> circuit_from_string(const std::string& s);
std::string to_string(NoisePlacement p);
std::optional<NoisePlacement> placement_from_string(const std::string& s);

struct LinkConfig {
    Circuit circuit = Circuit::A;
    MessageSpec message{};
    CodecParams codec{};     // codec.Vo is overwritten by resolve_defaults
    std::optional<double> comparator_vo;  // empty -> circuit default reference
    FilterSpec filter{};     // resolved per circuit when id == None and !explicit_filter
    NoiseSpec noise{};
    double dt = 0.0;         // 0 -> per-circuit default (1e-7 for A/B, 1e-8 for C)
    double duration = 0.02;  // s of recorded transmission
    double tx_warmup = 0.01; // s the transmitter free-runs before t = 0
    // Initial conditions; empty -> seeded draw from the uniform IC ball.
    // Component order: tx follows the circuit state (A: V1,V2; B: VC1,VC2,iL;
    // C: V1,V2,V3); rx follows the response state with the comparator
    // variable first (A: V1,V2; B: VC1,iL; Ca: V3,V2; Cb: V1,V3).
    std::vector<double> tx_initial;
    std::vector<double> rx_initial;
    std::uint64_t seed = 42;
    double guard = kDefaultGuard;
    double ic_ball = 0.1;    // half-width of the uniform IC ball
    bool explicit_filter = false;  // true: honour filter.id as given (incl. None)
    bool record_traces = true;     // false: keep only what metrics need

    CircuitAParams a{};
    ChuaParams chua{};
    LorenzLikeParams lorenz{};
};

// Fill in per-circuit defaults (dt, filter, comparator reference) and
// validate; throws std::invalid_argument on bad settings.
LinkConfig resolve_defaults(LinkConfig cfg);

struct SyncReport {
    double ber = 0.0;
    double ber_polarity_agnostic = 0.0;
    double sync_rms = 0.0;        // RMS tx-rx error of the keystream state
    double correlation = 0.0;     // Pearson corr of the keystream state pair
    bool antisync = false;        // correlation <= -0.9
    double alignment_lag = 0.0;   // s, decode alignment lag
    std::size_t glitches = 0;     // short wrong runs after alignment
    std::size_t bits = 0;
    std::size_t bit_errors = 0;
    double sync_rms_first_10pct = 0.0;
    double sync_rms_last_50pct = 0.0;
};

struct LinkResult {
    TraceMap traces;      // named signals: message, keystreams, channel, decode
    SyncReport report;
    LinkConfig resolved;  // the fully resolved configuration that ran
};

// Simulate one link end to end. Throws SimulationDiverged on blow-up.
LinkResult run_link(const LinkConfig& cfg);

// Per-circuit entry points (same engine, circuit forced).
LinkResult run_link_a(LinkConfig cfg);
LinkResult run_link_chua(LinkConfig cfg);
LinkResult run_link_lorenz(LinkConfig cfg);  // honours cfg.circuit = Ca or Cb

// ----------------------------------------------------------------------- sweep
struct SweepRow {
    Circuit circuit{};
    NoisePlacement placement{};
    double amplitude_pct = 0.0;
    int repeat = 0;
    SyncReport report{};
    std::string error;  // non-empty if this run failed (e.g. divergence)
};

// Run `repeats` seeded repetitions at every amplitude. Repeat k of every
// amplitude uses the same derived seed (same ICs and noise sub-streams), so
// amplitudes are compared on paired realisations. Failed runs produce a row
// with `error` set instead of aborting the sweep. `max_threads` caps worker
// threads (<=1 means serial).
std::vector<SweepRow> sweep_noise(const LinkConfig& base,
                                  const std::vector<double>& amplitudes,
                                  int repeats, int max_threads = 1);

std::uint64_t derive_repeat_seed(std::uint64_t base_seed, int repeat);

// Sweep CSV with header:
//   circuit,placement,amplitude_pct,repeat,ber,ber_polarity_agnostic,
//   sync_rms,corr,antisync,glitches,error
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

// Two-column gnuplot data (amplitude, mean BER over successful repeats),
// prefixed with a comment header naming circuit/placement.
void write_gnuplot_ber(const std::string& path, const std::vector<SweepRow>& rows);

// Mean of a report field over successful rows at one amplitude.
double mean_ber(const std::vector<SweepRow>& rows, double amplitude,
                bool polarity_agnostic = false);

}  // namespace chaoscomm
