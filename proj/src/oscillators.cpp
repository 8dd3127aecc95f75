#include "chaoscomm/oscillators.hpp"

#include <cmath>

namespace chaoscomm {

SimulationDiverged::SimulationDiverged(double t_fail)
    : std::runtime_error("simulation diverged at t = " + std::to_string(t_fail) + " s"),
      t(t_fail) {}

Vec<2> circuit_a_rhs(const Vec<2>& s, double vout, const CircuitAParams& p) {
    const double V1 = s[0], V2 = s[1];
    const double rc = p.rc();
    const double V = -p.gamma() * vout - V2;  // summing-inverter node
    return {(-V - p.beta() * V1) / rc,
            (-V1 - p.beta() * V2) / rc};
}

double chua_nonlinearity(double v, const ChuaParams& p) {
    // Odd five-segment piecewise-linear characteristic, written as a sum of
    // absolute-value kinks so continuity at the knees is structural.
    const double m0 = p.m0(), m1 = p.m1(), msat = p.msat();
    const double Bp = p.Bp(), Bsat = p.Bsat();
    return msat * v +
           0.5 * (m1 - m0) * (std::fabs(v + Bp) - std::fabs(v - Bp)) +
           0.5 * (m0 - msat) * (std::fabs(v + Bsat) - std::fabs(v - Bsat));
}

Vec<3> chua_rhs(const Vec<3>& s, const ChuaParams& p) {
    const double VC1 = s[0], VC2 = s[1], iL = s[2];
    const double G = p.G();
    return {(G * (VC2 - VC1) - chua_nonlinearity(VC1, p)) / p.C1,
            (G * (VC1 - VC2) + iL) / p.C2,
            -VC2 / p.L};
}

Vec<3> lorenz_like_rhs(const Vec<3>& s, const LorenzLikeParams& p) {
    const double V1 = s[0], V2 = s[1], V3 = s[2];
    return {-p.k11() * V1 - p.k13() * V3,
            -p.k22() * V2 + p.k213() * V1 * V3,
            -p.k31() * V1 - p.k312() * V1 * V2};
}

namespace {

template <std::size_t N, class Rhs>
FreeRunResult free_run_impl(Rhs&& rhs, Vec<N> x, double dt, std::size_t n,
                            double guard, const char* const (&names)[N]) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    FreeRunResult res;
    for (std::size_t i = 0; i < N; ++i) {
        Trace tr;
        tr.dt = dt;
        tr.t0 = 0.0;
        tr.samples.reserve(n + 1);
        res.states.emplace_back(names[i], std::move(tr));
    }
    auto record = [&](const Vec<N>& s) {
        for (std::size_t i = 0; i < N; ++i) res.states[i].second.samples.push_back(s[i]);
    };
    check_in_bounds(x, 0.0, guard);
    record(x);
    for (std::size_t k = 0; k < n; ++k) {
        x = rk4_step<N>(rhs, x, dt);
        check_in_bounds(x, static_cast<double>(k + 1) * dt, guard);
        record(x);
    }
    return res;
}

}  // namespace

FreeRunResult free_run(const CircuitAParams& p, Vec<2> ic, double vout_const,
                       double dt, std::size_t n, double guard) {
    static const char* const names[2] = {"V1", "V2"};
    return free_run_impl<2>([&](const Vec<2>& s) { return circuit_a_rhs(s, vout_const, p); },
                            ic, dt, n, guard, names);
}

FreeRunResult free_run(const ChuaParams& p, Vec<3> ic,
                       double dt, std::size_t n, double guard) {
    static const char* const names[3] = {"VC1", "VC2", "iL"};
    return free_run_impl<3>([&](const Vec<3>& s) { return chua_rhs(s, p); },
                            ic, dt, n, guard, names);
}

FreeRunResult free_run(const LorenzLikeParams& p, Vec<3> ic,
                       double dt, std::size_t n, double guard) {
    static const char* const names[3] = {"V1", "V2", "V3"};
    return free_run_impl<3>([&](const Vec<3>& s) { return lorenz_like_rhs(s, p); },
                            ic, dt, n, guard, names);
}

}  // namespace chaoscomm
