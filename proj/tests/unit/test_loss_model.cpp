#include <catch2/catch_amalgamated.hpp>

#include "petdse/loss_model.hpp"

#include <vector>

using namespace petdse;
using Catch::Approx;

namespace {

struct Design {
    OperatingPoint op;
    MmcDesign mmc;
    DcdcDesign dcdc;
    TopologyDescriptor topo;
};

Design make(const SystemSpec& spec, const Catalog& catalog, TopologyKind kind, double m)
{
    Design d;
    d.topo = catalog.topology(kind);
    d.op = solve_operating_point(spec, m);
    d.mmc = evaluate_mmc(spec, d.op, d.topo, catalog);
    d.dcdc = evaluate_dcdc(spec, d.op, catalog);
    return d;
}

LossBreakdown losses(const SystemSpec& spec, const Design& d)
{
    return total_losses(spec, d.op, d.mmc, d.dcdc, d.topo);
}

}  // namespace

TEST_CASE("conduction of a single cell at constant current", "[loss_model]")
{
    DeviceModel dev;
    dev.v0_v = 1.5;
    dev.r_on_ohm = 2e-3;
    const std::vector<double> current(64, 100.0);
    // (1.5 + 0.002 * 100) * 100
    CHECK(arm_conduction_loss(1, 0, dev, current) == Approx(170.0));
    CHECK(arm_conduction_loss(0, 1, dev, current) == Approx(340.0));
    const std::vector<double> negative(64, -100.0);
    CHECK(arm_conduction_loss(1, 0, dev, negative) == Approx(170.0));
}

TEST_CASE("zero power gives zero losses and unit efficiency", "[loss_model]")
{
    SystemSpec spec;
    spec.rated_power_w = 0;
    const auto catalog = default_catalog();
    const auto d = make(spec, catalog, TopologyKind::HybridSbb, 3.0);
    const auto l = losses(spec, d);
    CHECK(l.mmc_conduction == 0.0);
    CHECK(l.mmc_switching == 0.0);
    CHECK(l.mmc_branch == 0.0);
    CHECK(l.dcdc_conduction == 0.0);
    CHECK(l.dcdc_switching == 0.0);
    CHECK(l.total == 0.0);
    CHECK(l.efficiency == 1.0);
}

TEST_CASE("zvs factor only scales DC/DC switching", "[loss_model]")
{
    SystemSpec spec;
    const auto catalog = default_catalog();
    const auto d = make(spec, catalog, TopologyKind::HybridSbb, 3.0);
    const auto with = dcdc_losses(d.op, d.dcdc, spec);
    spec.dcdc_zvs_factor = 0;
    const auto without = dcdc_losses(d.op, d.dcdc, spec);
    CHECK(without.switching == 0.0);
    CHECK(without.conduction == with.conduction);
    CHECK(with.switching > 0.0);
}

TEST_CASE("doubling units at fixed per-unit current doubles DC/DC losses", "[loss_model][oracle]")
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    const auto d = make(spec, catalog, TopologyKind::HybridSbb, 3.0);
    auto doubled = d.dcdc;
    doubled.unit_count *= 2;
    const auto a = dcdc_losses(d.op, d.dcdc, spec);
    const auto b = dcdc_losses(d.op, doubled, spec);
    CHECK(b.conduction == Approx(2 * a.conduction));
    CHECK(b.switching == Approx(2 * a.switching));
    CHECK(b.total() == Approx(2 * a.total()));
}

TEST_CASE("DC/DC per-unit formulas", "[loss_model]")
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    const auto d = make(spec, catalog, TopologyKind::HybridSbb, 3.0);
    const auto& dev = d.dcdc.device;
    const double iu = 250.0;
    const double cond = 4 * 8 * (dev.v0_v + dev.r_on_ohm * iu) * iu;
    const double sw = 4 * 16 * 2500 * dev.esw_j * (iu / dev.i_ref_a) * (2500 / dev.v_ref_v) * 0.5;
    const auto l = dcdc_losses(d.op, d.dcdc, spec);
    CHECK(l.conduction == Approx(cond));
    CHECK(l.switching == Approx(sw));
}

TEST_CASE("breakdown sums and efficiency", "[loss_model]")
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    const auto l = losses(spec, make(spec, catalog, TopologyKind::HybridSbb, 2.5));
    CHECK(l.total == Approx(l.mmc_conduction + l.mmc_switching + l.mmc_branch + l.dcdc_conduction + l.dcdc_switching));
    CHECK(l.efficiency == Approx((spec.rated_power_w - l.total) / spec.rated_power_w));
    CHECK(l.efficiency > 0.0);
    CHECK(l.efficiency < 1.0);
    const auto& sbb = catalog.topology(TopologyKind::HybridSbb);
    CHECK(l.mmc_branch == Approx(sbb.branch_loss_fraction * (l.mmc_conduction + l.mmc_switching)));
}

TEST_CASE("hybrid loses less than full-bridge at m = 1.5", "[loss_model]")
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    const auto trad = losses(spec, make(spec, catalog, TopologyKind::HybridTraditional, 1.5));
    const auto fb = losses(spec, make(spec, catalog, TopologyKind::FullBridge, 1.5));
    CHECK(trad.total < fb.total);
}

TEST_CASE("hybrid-sbb losses grow from m = 3 to m = 5", "[loss_model]")
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    CHECK(losses(spec, make(spec, catalog, TopologyKind::HybridSbb, 3.0)).total <
          losses(spec, make(spec, catalog, TopologyKind::HybridSbb, 5.0)).total);
}

TEST_CASE("full-bridge conduction exceeds both hybrids at every common point", "[loss_model]")
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    for (int i = 1; i <= 120; ++i) {
        const double m = 1.0 + 0.05 * i;
        const auto fb = losses(spec, make(spec, catalog, TopologyKind::FullBridge, m));
        const auto sbb = losses(spec, make(spec, catalog, TopologyKind::HybridSbb, m));
        CHECK(fb.mmc_conduction > sbb.mmc_conduction);
        if (m <= 2.0 + 1e-9) {
            const auto trad = losses(spec, make(spec, catalog, TopologyKind::HybridTraditional, m));
            CHECK(fb.mmc_conduction > trad.mmc_conduction);
        }
    }
}

TEST_CASE("losses are homogeneous in the device loss coefficients", "[loss_model]")
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    auto scaled = catalog;
    const double k = 3.7;
    for (auto* t : {&scaled.mmc_devices, &scaled.dcdc_devices}) {
        for (auto& r : t->mutable_rows()) {
            r.device.v0_v *= k;
            r.device.r_on_ohm *= k;
            r.device.esw_j *= k;
        }
    }
    for (auto kind : {TopologyKind::HybridTraditional, TopologyKind::HybridSbb, TopologyKind::FullBridge}) {
        const auto a = losses(spec, make(spec, catalog, kind, 1.8));
        const auto b = losses(spec, make(spec, scaled, kind, 1.8));
        CHECK(b.mmc_conduction == Approx(k * a.mmc_conduction).epsilon(1e-12));
        CHECK(b.mmc_switching == Approx(k * a.mmc_switching).epsilon(1e-12));
        CHECK(b.mmc_branch == Approx(k * a.mmc_branch).epsilon(1e-12));
        CHECK(b.dcdc_conduction == Approx(k * a.dcdc_conduction).epsilon(1e-12));
        CHECK(b.dcdc_switching == Approx(k * a.dcdc_switching).epsilon(1e-12));
        CHECK(b.total == Approx(k * a.total).epsilon(1e-12));
    }
}
