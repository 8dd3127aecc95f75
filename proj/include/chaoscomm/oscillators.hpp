#pragma once
// The three transmitter circuits (state equations with component-derived
// coefficients), the Chua diode nonlinearity, a classical RK4 stepper, and
// free-run integration with a blow-up guard.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "chaoscomm/signals.hpp"

namespace chaoscomm {

// Thrown when any state component leaves the +/- guard range (or goes
// non-finite) during integration. `t` is the simulation time of failure.
struct SimulationDiverged : std::runtime_error {
    double t;
    explicit SimulationDiverged(double t_fail);
};

template <std::size_t N>
using Vec = std::array<double, N>;

// ---------------------------------------------------------------- circuit A
// Non-autonomous two-integrator loop driven by the masked output voltage:
//   RC dV2/dt = -V1 - (R/Rs) V2
//   RC dV1/dt = -V  - (R/Rs) V1,   V = -(R/Rf) Vout - V2
struct CircuitAParams {
    double R = 10e3;    // ohm, integrator input resistor
    double Rs = 510e3;  // ohm, integrator leak resistor
    double Rf = 18e3;   // ohm, drive injection resistor
    double C = 1e-9;    // F, integrator capacitor
    double Vsat = 7.5;  // V, op-amp saturation (informational)

    double rc() const { return R * C; }          // 1e-5 s
    double beta() const { return R / Rs; }       // leak ratio
    double gamma() const { return R / Rf; }      // drive gain
};

// state = (V1, V2); vout is the exogenous drive (piecewise constant in a link)
Vec<2> circuit_a_rhs(const Vec<2>& s, double vout, const CircuitAParams& p);

// ------------------------------------------------------------------- circuit B
// Chua-type oscillator. The nonlinear diode is realised with op-amp negative
// resistors; beyond the op-amp saturation knee the incremental slope turns
// positive, giving a five-segment odd piecewise-linear characteristic:
//   slope m1 for |v| <= Bp, m0 for Bp < |v| <= Bsat, msat beyond.
struct ChuaParams {
    double C1 = 10e-9;    // F
    double C2 = 100e-9;   // F
    double L = 18e-3;     // H
    // Wiper position of the coupling potentiometer as a fraction of full
    // travel. The coupling resistance is the complement side of the track,
    // Rc = (1 - pot_fraction) * pot_total: small fractions give weak coupling
    // (Rc near the full 2 kohm, the double-scroll region for this L/C set),
    // large fractions give strong coupling and a simple limit cycle.
    double pot_fraction = 0.5;
    double pot_total = 2e3;      // ohm, full potentiometer track
    double RA = 220.0;    // ohm, op-amp output resistor (sets saturated slope)
    double RB = 22e3;     // ohm
    double Rg1 = 2.2e3;   // ohm
    double Rg2 = 3.3e3;   // ohm
    double Esat = 7.5;    // V, op-amp saturation level

    double Rc_effective() const { return (1.0 - pot_fraction) * pot_total; }
    double G() const { return 1.0 / Rc_effective(); }
    double m0() const { return 1.0 / RB - 1.0 / Rg1; }             // outer slope
    double m1() const { return -(1.0 / Rg1 + 1.0 / Rg2); }         // inner slope
    double msat() const { return 1.0 / RB + 1.0 / RA; }            // saturated slope
    double Bp() const { return Rg2 / (RB + Rg2) * Esat; }          // inner knee, V
    double Bsat() const { return Rg1 / (RA + Rg1) * Esat; }        // outer knee, V
};

// Diode current g(v) of the Chua circuit (odd, continuous piecewise-linear).
double chua_nonlinearity(double v, const ChuaParams& p);

// state = (VC1, VC2, iL):
//   C1 dVC1/dt = G (VC2 - VC1) - g(VC1)
//   C2 dVC2/dt = G (VC1 - VC2) + iL
//   L  diL/dt  = -VC2
Vec<3> chua_rhs(const Vec<3>& s, const ChuaParams& p);

// ------------------------------------------------------------------- circuit C
// Lorenz-like multiplier oscillator, state = (V1, V2, V3) in volts:
//   dV1/dt = -k11 V1 - k13 V3
//   dV3/dt = -k31 V1 - k312 V1 V2
//   dV2/dt = -k22 V2 + k213 V1 V3
struct LorenzLikeParams {
    double R = 10e3;     // ohm
    double R50 = 50e3;   // ohm
    double Rx = 1e3;     // ohm
    double R200 = 200e3; // ohm
    double R30 = 30e3;   // ohm
    double R3 = 3e3;     // ohm
    double R6 = 6e3;     // ohm
    double C = 100e-9;   // F

    double k11() const { return R50 / (Rx * C * R); }                       // 5e4 1/s
    double k13() const { return R50 / (Rx * C * R); }                       // 5e4 1/s
    double k31() const { return R200 / (Rx * C * R); }                      // 2e5 1/s
    double k312() const { return (R / (Rx * C * R200)) * (1.0 + R30 / Rx); }// 1.55e4 1/(V s)
    double k22() const { return R6 / (Rx * C * R3); }                       // 2e4 1/s
    double k213() const { return (1.0 / (Rx * C)) * (1.0 + R30 / Rx); }     // 3.1e5 1/(V s)
};

Vec<3> lorenz_like_rhs(const Vec<3>& s, const LorenzLikeParams& p);

// --------------------------------------------------------------------- stepper
// One classical fourth-order Runge-Kutta step of dx/dt = f(x).
template <std::size_t N, class Rhs>
Vec<N> rk4_step(Rhs&& f, const Vec<N>& x, double dt) {
    Vec<N> k1 = f(x);
    Vec<N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    Vec<N> k2 = f(tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    Vec<N> k3 = f(tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + dt * k3[i];
    Vec<N> k4 = f(tmp);
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// Throws SimulationDiverged{t} if any |x[i]| exceeds `guard` or is non-finite.
template <std::size_t N>
void check_in_bounds(const Vec<N>& x, double t, double guard) {
    for (double v : x)
        if (!(v >= -guard && v <= guard)) throw SimulationDiverged(t);
}

inline constexpr double kDefaultGuard = 100.0;  // V (A for inductor current)

// -------------------------------------------------------------------- free run
// Integrate an undriven oscillator from an initial condition and record every
// state component as a named trace. n is the number of steps (n+1 samples).
struct FreeRunResult {
    TraceMap states;
};

FreeRunResult free_run(const CircuitAParams& p, Vec<2> ic, double vout_const,
                       double dt, std::size_t n, double guard = kDefaultGuard);
FreeRunResult free_run(const ChuaParams& p, Vec<3> ic,
                       double dt, std::size_t n, double guard = kDefaultGuard);
FreeRunResult free_run(const LorenzLikeParams& p, Vec<3> ic,
                       double dt, std::size_t n, double guard = kDefaultGuard);

}  // namespace chaoscomm
