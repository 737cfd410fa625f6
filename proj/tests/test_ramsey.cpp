#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "cavmeas/ramsey/circuit.hpp"
#include "cavmeas/ramsey/fringe_fit.hpp"
#include "cavmeas/ramsey/qubit.hpp"
#include "cavmeas/cqed/units.hpp"

using namespace cavmeas;
using namespace cavmeas::ramsey;
using namespace cavmeas::units;
using sim::Method;

namespace {

constexpr double pi = std::numbers::pi;

double bloch_norm(const QubitState& s) { return std::sqrt(s.w * s.w + 4 * std::norm(s.coherence)); }

// Bisection on the known-increasing factor; independent of any library root finder.
double recovery_distance(double n0, double waist, double level) {
    double lo = 0, hi = 10 * waist;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::exp(-n0 * std::exp(-2 * mid * mid / (waist * waist))) < level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

RamseyConfig ideal_config(std::optional<Method> m) {
    auto c = ramsey_defaults(m);
    c.ideal_readout = true;
    return c;
}

}  // namespace

TEST_CASE("rotations on the Bloch sphere") {
    const auto s = rotate(QubitState::f2_pole(), 0, pi / 2);
    CHECK(s.w == doctest::Approx(0).scale(1));
    CHECK(s.p_f1() == doctest::Approx(0.5));
    CHECK(std::abs(s.coherence) == doctest::Approx(0.5));

    const auto flipped = rotate(QubitState::f2_pole(), 0.7, pi);
    CHECK(flipped.w == doctest::Approx(-1));

    for (double phi : {0.0, 0.5, pi / 2, 2.0, pi, 4.5}) {
        const auto t = rotate(s, phi, pi / 2);
        CHECK(t.p_f1() == doctest::Approx(0.5 * (1 + std::cos(phi))).scale(1));
    }

    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int i = 0; i < 200; ++i) {
        QubitState q = rotate(rotate(QubitState::f2_pole(), u(g), u(g)), u(g), u(g));
        CHECK(bloch_norm(q) == doctest::Approx(1).epsilon(1e-12));
        const double a = u(g), b = u(g), ax = u(g);
        const auto two = rotate(rotate(q, ax, a), ax, b);
        const auto one = rotate(q, ax, a + b);
        CHECK(two.w == doctest::Approx(one.w).scale(1).epsilon(1e-12));
        CHECK(std::abs(two.coherence - one.coherence) < 1e-12);
        const auto back = rotate(rotate(q, ax, a), ax, -a);
        CHECK(std::abs(back.coherence - q.coherence) < 1e-12);
    }
}

TEST_CASE("dephasing keeps states physical") {
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 500; ++i) {
        QubitState q = rotate(QubitState::f2_pole(), 6 * u(g), 6 * u(g));
        q = dephase(q, u(g), 6 * u(g));
        q = rotate(q, 6 * u(g), 6 * u(g));
        CHECK(q.physical());
        CHECK(q.p_f1() >= -1e-12);
        CHECK(q.p_f1() <= 1 + 1e-12);
    }
    CHECK_THROWS(dephase(QubitState::f2_pole(), 1.1));
    CHECK_THROWS(dephase(QubitState::f2_pole(), -0.1));
}

TEST_CASE("backaction factor") {
    CHECK(backaction_factor(100, 0, 10e-6) == doctest::Approx(std::exp(-100.0)));
    CHECK(backaction_factor(0, 0, 10e-6) == 1.0);
    CHECK(backaction_factor(100, 1.0, 10e-6) == doctest::Approx(1.0));
    CHECK_THROWS(backaction_factor(100, 1e-6, 0));
    CHECK_THROWS(backaction_factor(-1, 1e-6, 1e-6));
    double last = 0;
    for (double d = 0; d < 60e-6; d += 1e-6) {
        const double f = backaction_factor(14, d, 20e-6);
        CHECK(f >= last);
        last = f;
    }

    // Pure dephasing commutes with rotations about z.
    const auto s = rotate(QubitState::f2_pole(), 0.3, 1.1);
    const auto a = dephase(dephase(s, 0.6), 1, 0.8);
    const auto b = dephase(dephase(s, 1, 0.8), 0.6);
    CHECK(std::abs(a.coherence - b.coherence) < 1e-15);
}

TEST_CASE("backaction calibration at the default waists") {
    const auto sys = cqed::SystemParams::defaults();
    const double w_fl = default_backaction_waist(Method::Fluorescence, sys);
    const double w_tr = default_backaction_waist(Method::Transmission, sys);
    const double n_fl = default_scatter_number(Method::Fluorescence);
    const double n_tr = default_scatter_number(Method::Transmission);
    CHECK(n_fl == 100);
    CHECK(backaction_factor(n_fl, um(34.5), w_fl) >= 0.97);
    CHECK(backaction_factor(n_tr, um(46.0), w_tr) >= 0.97);
    const double onset_fl = to_um(recovery_distance(n_fl, w_fl, 0.97));
    const double onset_tr = to_um(recovery_distance(n_tr, w_tr, 0.97));
    CHECK(onset_fl >= 18);
    CHECK(onset_fl <= 22);
    CHECK(onset_tr >= 33);
    CHECK(onset_tr <= 37);
}

TEST_CASE("fringe fit") {
    const auto ph = uniform_phases(12);
    std::vector<double> p;
    for (double x : ph) p.push_back(0.5 + 0.3 * std::cos(x));
    auto f = fit_fringe(ph, p);
    CHECK(f.contrast == doctest::Approx(0.6));
    CHECK(f.phase_offset == doctest::Approx(0).scale(1));
    CHECK(f.baseline == doctest::Approx(0.5));

    f = fit_fringe(ph, std::vector<double>(12, 0.37));
    CHECK(f.contrast == doctest::Approx(0).scale(1));
    CHECK(f.baseline == doctest::Approx(0.37));

    std::mt19937_64 g(17);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const double c = 0.05 + 0.9 * u(g), phi0 = 2 * pi * u(g) - pi, a = 0.5 + 0.2 * (u(g) - 0.5);
        std::vector<double> phases, vals;
        for (int k = 0; k < 7; ++k) phases.push_back(7 * u(g));
        for (double x : phases) vals.push_back(a + 0.5 * c * std::cos(x - phi0));
        const auto r = fit_fringe(phases, vals);
        CHECK(r.contrast == doctest::Approx(c).epsilon(1e-9));
        CHECK(std::remainder(r.phase_offset - phi0, 2 * pi) == doctest::Approx(0).scale(1).epsilon(1e-9));
        CHECK(r.baseline == doctest::Approx(a).epsilon(1e-9));
    }

    // Three distinct phases, or aliases of them.
    CHECK_THROWS_AS(fit_fringe({0, 1, 2}, {0.1, 0.2, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(fit_fringe({0, 1, 2, 1 + 2 * pi}, {0.1, 0.2, 0.3, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(fit_fringe({0, 1, 2, 3}, {0.1, 0.2, 0.3}), std::invalid_argument);
}

TEST_CASE("ideal Ramsey run without mid-circuit measurement") {
    const auto sys = cqed::SystemParams::defaults();
    auto c = ideal_config(std::nullopt);
    for (double x : c.phases) CHECK(ideal_p_f1(x, c, sys) == doctest::Approx(0.5 * (1 + std::cos(x))).scale(1));
    const auto r = run_ramsey(c, sys, 5);
    CHECK(r.reference.fit.contrast > 0.97);
    CHECK(r.measured.fit.contrast > 0.97);
    CHECK(r.normalized_contrast == doctest::Approx(1).epsilon(0.03));
    for (const auto& e : r.measured.p_f1) {
        CHECK(e.value >= 0);
        CHECK(e.value <= 1);
    }
}

TEST_CASE("measurement at the cavity centre erases the fringe") {
    const auto sys = cqed::SystemParams::defaults();
    auto c = ramsey_defaults(Method::Fluorescence);
    c.distance = 0;
    for (double x : c.phases) CHECK(ideal_p_f1(x, c, sys) == doctest::Approx(0.5));
    const auto r = run_ramsey(c, sys, 6);
    // Contrast of pure binomial noise: a few times sqrt(2 / (12 * 2000)).
    CHECK(r.measured.fit.contrast < 0.06);
    CHECK(r.normalized_contrast < 0.07);
}

TEST_CASE("mid-circuit measurement far from the atom") {
    const auto sys = cqed::SystemParams::defaults();
    auto fl = ramsey_defaults(Method::Fluorescence);
    fl.distance = um(34.5);
    CHECK(run_ramsey(fl, sys, 8).normalized_contrast >= 0.94);
    auto tr = ramsey_defaults(Method::Transmission);
    tr.distance = um(46.0);
    tr.readout_config = sim::MethodConfig::defaults(Method::Transmission);
    tr.readout_model = sim::RateModel::transmission_defaults();
    CHECK(run_ramsey(tr, sys, 8).normalized_contrast >= 0.94);
}

TEST_CASE("phase kick shifts the fringe, not the contrast") {
    const auto sys = cqed::SystemParams::defaults();
    auto c = ideal_config(Method::Fluorescence);
    c.distance = um(60);
    c.phase_kick = 0.9;
    std::vector<double> p;
    for (double x : c.phases) p.push_back(ideal_p_f1(x, c, sys));
    const auto f = fit_fringe(c.phases, p);
    CHECK(f.contrast == doctest::Approx(1).epsilon(1e-9));
    CHECK(std::abs(std::remainder(f.phase_offset, 2 * pi)) == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("Ramsey runs are deterministic across worker counts") {
    const auto sys = cqed::SystemParams::defaults();
    auto c = ramsey_defaults(Method::Fluorescence);
    c.distance = um(18);
    c.n_shots = 500;
    const auto a = run_ramsey(c, sys, 77, {0, 1});
    const auto b = run_ramsey(c, sys, 77, {0, 4});
    CHECK(a.measured.f1_counts == b.measured.f1_counts);
    CHECK(a.reference.f1_counts == b.reference.f1_counts);
    CHECK(a.normalized_contrast == b.normalized_contrast);
    const auto d = run_ramsey(c, sys, 78, {0, 1});
    CHECK(a.measured.f1_counts != d.measured.f1_counts);
}

TEST_CASE("contrast recovers with distance") {
    const auto sys = cqed::SystemParams::defaults();
    auto c = ideal_config(Method::Fluorescence);
    c.n_shots = 4000;
    std::vector<double> d;
    for (double x = 0; x <= 40; x += 4) d.push_back(um(x));
    const auto curve = contrast_vs_distance(d, c, sys, 3);
    REQUIRE(curve.size() == d.size());
    const double w = default_backaction_waist(Method::Fluorescence, sys);
    for (const auto& pt : curve) {
        const double expected = backaction_factor(c.n_scatter_at_center, pt.distance, w);
        CAPTURE(pt.distance);
        // Five standard errors of a 12-point fit at 4000 shots, normalised.
        CHECK(std::abs(pt.normalized_contrast - expected) < 0.05);
    }
    CHECK(curve.front().normalized_contrast < 0.1);
    CHECK(curve.back().normalized_contrast > 0.95);
}

TEST_CASE("lumped reference imperfection") {
    const auto sys = cqed::SystemParams::defaults();
    auto c = ideal_config(Method::Fluorescence);
    c.contrast_factor = 0.6;
    c.distance = um(60);
    const auto r = run_ramsey(c, sys, 12);
    CHECK(r.reference.fit.contrast == doctest::Approx(0.6).epsilon(0.05));
    CHECK(r.normalized_contrast == doctest::Approx(1).epsilon(0.06));

    c.contrast_factor = 0;
    CHECK_THROWS(c.validate());
    c.contrast_factor = 1;
    c.phases.clear();
    CHECK_THROWS(c.validate());
}
