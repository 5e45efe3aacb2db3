#pragma once

// Closed-form arm energy ripple for unity power factor, written without the
// library's waveform code.
//
// Upper-arm power p = (U/2 - V s)(I0 + I1 s), s = sin(theta), expands to
//   p = a + b s - c s^2,  a = U I0 / 2, b = U I1 / 2 - V I0, c = V I1.
// Energy e(theta) = [a th - b cos th - c (th/2 - sin(2 th)/4)] / w, whose
// extrema sit where p = 0: a quadratic in s.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

struct RippleInputs {
    double power_w;
    double ac_amplitude_v;
    double m;
    double grid_hz;
};

inline double closed_form_ripple(const RippleInputs& in)
{
    const double u = 2.0 * in.ac_amplitude_v / in.m;
    const double idc = in.power_w / u;
    const double iac = 2.0 * in.power_w / (3.0 * in.ac_amplitude_v);
    const double i0 = idc / 3.0;
    const double i1 = iac / 2.0;
    const double v = in.ac_amplitude_v;
    const double w = 2.0 * std::numbers::pi * in.grid_hz;

    const double a = u * i0 / 2.0;
    const double b = u * i1 / 2.0 - v * i0;
    const double c = v * i1;
    if (a == 0.0 && b == 0.0 && c == 0.0) return 0.0;

    auto energy = [&](double th) {
        return (a * th - b * std::cos(th) - c * (th / 2.0 - std::sin(2.0 * th) / 4.0)) / w;
    };

    // c s^2 - b s - a = 0
    std::vector<double> roots;
    const double disc = b * b + 4.0 * a * c;
    if (c != 0.0 && disc >= 0.0) {
        roots.push_back((b + std::sqrt(disc)) / (2.0 * c));
        roots.push_back((b - std::sqrt(disc)) / (2.0 * c));
    } else if (c == 0.0 && b != 0.0) {
        roots.push_back(-a / b);
    }
    std::vector<double> thetas;
    for (double s : roots) {
        if (s < -1.0 || s > 1.0) continue;
        const double t = std::asin(s);
        thetas.push_back(t);
        thetas.push_back(std::numbers::pi - t);
    }
    if (thetas.empty()) return 0.0;
    double lo = energy(thetas.front());
    double hi = lo;
    for (double t : thetas) {
        lo = std::min(lo, energy(t));
        hi = std::max(hi, energy(t));
    }
    return hi - lo;
}

}  // namespace oracle
