#include <catch2/catch_amalgamated.hpp>

#include "petdse/errors.hpp"
#include "petdse/mmc_sizing.hpp"

#include "../oracles/ripple_oracle.hpp"
#include "../oracles/structure_oracles.hpp"

using namespace petdse;
using Catch::Approx;

namespace {

SubmoduleCounts counts(const SystemSpec& spec, TopologyKind kind, double m)
{
    return size_submodules(spec, solve_operating_point(spec, m), default_topology(kind));
}

}  // namespace

TEST_CASE("submodule counts at reference points", "[mmc_sizing]")
{
    const SystemSpec spec;
    CHECK(counts(spec, TopologyKind::HalfBridge, 1.0) == SubmoduleCounts{30, 30, 0});
    CHECK(counts(spec, TopologyKind::FullBridge, 1.0) == SubmoduleCounts{30, 0, 30});
    CHECK(counts(spec, TopologyKind::HybridTraditional, 2.0) == SubmoduleCounts{23, 15, 8});
    CHECK(counts(spec, TopologyKind::HybridSbb, 6.0) == SubmoduleCounts{18, 5, 13});
}

TEST_CASE("counts cover the sampled arm voltage", "[mmc_sizing][oracle]")
{
    const SystemSpec spec;
    for (auto kind : {TopologyKind::HybridTraditional, TopologyKind::HybridSbb, TopologyKind::FullBridge}) {
        const auto topo = default_topology(kind);
        for (double m = 1.05; m <= std::min(topo.m_max, 7.0) + 1e-9; m += 0.05) {
            const auto op = solve_operating_point(spec, m);
            const auto c = size_submodules(spec, op, topo);
            INFO(to_string(kind) << " m=" << m);
            CHECK(c.n_half + c.n_full == c.n_total);
            CHECK(oracle::covers_arm_voltage(c.n_half, c.n_full, spec.sm_capacitor_voltage_v, op.u_dc,
                                             spec.ac_voltage_amplitude_v));
            // One fewer full cell would no longer cover the negative swing.
            if (kind != TopologyKind::FullBridge && c.n_full > 0) {
                CHECK_FALSE(oracle::covers_arm_voltage(c.n_half + 1, c.n_full - 1, spec.sm_capacitor_voltage_v,
                                                       op.u_dc, spec.ac_voltage_amplitude_v));
            }
        }
    }
}

TEST_CASE("full-bridge covers both voltage limits across the table", "[mmc_sizing][oracle]")
{
    const SystemSpec spec;
    const auto fb = default_topology(TopologyKind::FullBridge);
    for (double m = 1.0; m <= 28.0; m += 0.5) {
        const auto op = solve_operating_point(spec, m);
        const auto c = size_submodules(spec, op, fb);
        CHECK(c.n_full == c.n_total);
        CHECK(oracle::covers_arm_voltage(c.n_half, c.n_full, spec.sm_capacitor_voltage_v, op.u_dc,
                                         spec.ac_voltage_amplitude_v, 2000));
    }
}

TEST_CASE("infeasible sizing throws", "[mmc_sizing]")
{
    const SystemSpec spec;
    CHECK_THROWS_AS(counts(spec, TopologyKind::HybridTraditional, 2.5), FeasibilityError);
    CHECK_THROWS_AS(counts(spec, TopologyKind::HalfBridge, 1.2), FeasibilityError);
}

TEST_CASE("arm energy ripple matches the closed-form oracle", "[mmc_sizing][oracle]")
{
    const SystemSpec spec;
    const std::pair<double, double> expected[] = {{1, 6.89e3}, {2, 6.89e3}, {3, 13.3e3}, {6, 30.5e3}};
    for (auto [m, kj] : expected) {
        const double numeric = arm_energy_ripple(solve_operating_point(spec, m), spec);
        const double exact = oracle::closed_form_ripple({spec.rated_power_w, spec.ac_voltage_amplitude_v, m,
                                                         spec.grid_frequency_hz});
        INFO("m=" << m);
        CHECK(numeric == Approx(exact).epsilon(0.02));
        CHECK(numeric == Approx(kj).epsilon(0.02));
    }
    for (double m = 0.5; m <= 10.0; m += 0.37) {
        const double numeric = arm_energy_ripple(solve_operating_point(spec, m), spec);
        const double exact = oracle::closed_form_ripple({spec.rated_power_w, spec.ac_voltage_amplitude_v, m,
                                                         spec.grid_frequency_hz});
        CHECK(numeric == Approx(exact).epsilon(1e-4));
    }
}

TEST_CASE("ripple is zero at zero power", "[mmc_sizing]")
{
    SystemSpec spec;
    spec.rated_power_w = 0;
    CHECK(arm_energy_ripple(solve_operating_point(spec, 2.0), spec) == 0.0);
}

TEST_CASE("ripple converges with sample count", "[mmc_sizing]")
{
    SystemSpec spec;
    for (double m : {1.0, 2.0, 3.0, 6.0}) {
        spec.waveform_samples = 4096;
        const double a = arm_energy_ripple(solve_operating_point(spec, m), spec);
        spec.waveform_samples = 8192;
        const double b = arm_energy_ripple(solve_operating_point(spec, m), spec);
        CHECK(std::abs(b - a) / b < 1e-3);
    }
}

TEST_CASE("ripple rises with m from 2 to 7", "[mmc_sizing]")
{
    const SystemSpec spec;
    double prev = arm_energy_ripple(solve_operating_point(spec, 2.0), spec);
    for (double m = 2.05; m <= 7.0 + 1e-9; m += 0.05) {
        const double e = arm_energy_ripple(solve_operating_point(spec, m), spec);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("capacitor sizing", "[mmc_sizing]")
{
    const SystemSpec spec;
    auto topo = default_topology(TopologyKind::HalfBridge);
    // 6890 / (2 * 30 * 2000^2 * 0.1)
    CHECK(size_capacitor(spec, 6.89e3, 30, topo) == Approx(287.08e-6).epsilon(1e-3));
    CHECK(size_capacitor(spec, 0.0, 30, topo) == 0.0);
    topo.capacitor_reduction_factor = 0.5;
    CHECK(size_capacitor(spec, 6.89e3, 30, topo) == Approx(143.54e-6).epsilon(1e-3));
}

TEST_CASE("IGBT counts against cell enumeration", "[mmc_sizing][oracle]")
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    auto design = [&](TopologyKind kind, double m) {
        return evaluate_mmc(spec, solve_operating_point(spec, m), catalog.topology(kind), catalog);
    };
    const auto hb = design(TopologyKind::HalfBridge, 1.0);
    CHECK(hb.igbt_count_total == 360);
    CHECK(hb.igbt_count_total == oracle::converter_switches(30, 0, 0));
    const auto trad = design(TopologyKind::HybridTraditional, 2.0);
    CHECK(trad.igbt_count_total == 372);
    CHECK(trad.igbt_count_total == oracle::converter_switches(15, 8, 0));
    const auto fb = design(TopologyKind::FullBridge, 2.0);
    CHECK(fb.igbt_count_total == 552);
    CHECK(fb.igbt_count_total == oracle::converter_switches(0, 23, 0));
    const auto sbb = design(TopologyKind::HybridSbb, 3.0);
    CHECK(sbb.igbt_count_total ==
          oracle::converter_switches(sbb.n_half, sbb.n_full, catalog.topology(TopologyKind::HybridSbb).branch_igbt_count));
}

TEST_CASE("design fields are consistent", "[mmc_sizing]")
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    for (double m : {1.5, 3.0, 6.0}) {
        const auto d = evaluate_mmc(spec, solve_operating_point(spec, m), catalog.topology(TopologyKind::HybridSbb),
                                    catalog);
        CHECK(d.total_capacitance == Approx(6 * d.n_total * d.sm_capacitance));
        CHECK(d.hybridization_ratio == Approx(static_cast<double>(d.n_full) / d.n_total));
        CHECK(d.device.name == "FZ800R45KL3_B5");
        CHECK(d.warnings.empty());
    }
    const auto hb = evaluate_mmc(spec, solve_operating_point(spec, 1.0), catalog.topology(TopologyKind::HalfBridge),
                                 catalog);
    CHECK(hb.hybridization_ratio == 0.0);
    const auto fb = evaluate_mmc(spec, solve_operating_point(spec, 4.0), catalog.topology(TopologyKind::FullBridge),
                                 catalog);
    CHECK(fb.hybridization_ratio == 1.0);
}

TEST_CASE("per-arm device count stays within 60..64", "[mmc_sizing]")
{
    const SystemSpec spec;
    const auto sbb = default_topology(TopologyKind::HybridSbb);
    for (int i = 0; i <= 120; ++i) {
        const double m = 1.0 + 0.05 * i;
        auto topo = sbb;
        if (m <= 1.0) topo = default_topology(TopologyKind::HalfBridge);
        const auto c = size_submodules(spec, solve_operating_point(spec, m), topo);
        const int per_arm = 2 * c.n_half + 4 * c.n_full;
        CHECK(per_arm >= 60);
        CHECK(per_arm <= 64);
    }
}

TEST_CASE("total capacitance does not depend on N", "[mmc_sizing]")
{
    // 6 N C = 6 dE f / (2 Uc^2 eps): varying Uc moves N, but total * Uc^2 stays put.
    const auto catalog = default_catalog();
    const auto topo = catalog.topology(TopologyKind::HybridSbb);
    std::vector<int> ns;
    std::vector<double> scaled;
    for (double uc : {1.5e3, 2e3, 2.5e3, 3e3}) {
        SystemSpec spec;
        spec.sm_capacitor_voltage_v = uc;
        const auto d = evaluate_mmc(spec, solve_operating_point(spec, 3.0), topo, catalog);
        ns.push_back(d.n_total);
        scaled.push_back(d.total_capacitance * uc * uc);
    }
    CHECK(ns.front() != ns.back());
    for (double v : scaled) CHECK(v == Approx(scaled.front()).epsilon(1e-12));

    const SystemSpec spec;
    for (int n : {5, 18, 30, 47}) {
        CHECK(6 * n * size_capacitor(spec, 1e4, n, topo) == Approx(6 * size_capacitor(spec, 1e4, 1, topo)));
    }
}
