#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "cavmeas/errors.hpp"
#include "cavmeas/readout/statistics.hpp"
#include "cavmeas/sim/batch.hpp"
#include "cavmeas/sim/trajectory.hpp"

using namespace cavmeas;
using namespace cavmeas::sim;

namespace {

struct Moments {
    double mean = 0, var = 0;
    long n = 0;
};

Moments moments(const std::vector<int>& x) {
    Moments m;
    m.n = static_cast<long>(x.size());
    for (int v : x) m.mean += v;
    m.mean /= m.n;
    for (int v : x) m.var += (v - m.mean) * (v - m.mean);
    m.var /= (m.n - 1);
    return m;
}

// Mean and variance of a Poisson(lambda) sample within 3 standard errors.
void check_poisson(const std::vector<int>& x, double lambda) {
    const Moments m = moments(x);
    CHECK(std::abs(m.mean - lambda) < 3 * std::sqrt(lambda / m.n));
    CHECK(std::abs(m.var - lambda) < 3 * std::sqrt((lambda + 2 * lambda * lambda) / m.n));
}

void check_binomial(long k, long n, double p) {
    CHECK(std::abs(double(k) / n - p) < 3 * std::sqrt(p * (1 - p) / n));
}

RateModel quiet_fluorescence() {
    RateModel m;
    m.r_bright = 0.76e6;
    m.r_dark = 0.0;
    m.p_repump = 1.0;
    return m;
}

Rng rng_for(std::uint64_t i, std::uint64_t stream = 99) { return Rng({2024, stream, i}); }

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a({1, 2, 3}), b({1, 2, 3}), c({1, 2, 4});
    bool differs = false;
    for (int i = 0; i < 16; ++i) {
        const auto x = a(), y = b(), z = c();
        CHECK(x == y);
        differs |= x != z;
    }
    CHECK(differs);
    Rng u({7, 7, 7});
    for (int i = 0; i < 10000; ++i) {
        const double v = u.uniform();
        CHECK((v >= 0.0 && v < 1.0));
    }
}

TEST_CASE("state helpers") {
    CHECK(state_index(TweezerState::Empty) == 0);
    CHECK(state_index(TweezerState::F2) == 2);
    for (auto s : {TweezerState::Empty, TweezerState::F1, TweezerState::F2, TweezerState::Lost}) {
        CHECK(parse_state(to_string(s)) == s);
    }
    CHECK(parse_method("transmission") == Method::Transmission);
    CHECK_THROWS(parse_method("laser"));
}

TEST_CASE("rate model and method config validation") {
    for (Method m : {Method::Fluorescence, Method::Transmission}) {
        CHECK_NOTHROW(RateModel::defaults(m).validate(m));
        CHECK_NOTHROW(MethodConfig::defaults(m).validate());
    }
    RateModel bad = RateModel::fluorescence_defaults();
    bad.p_repump = 1.2;
    CHECK_THROWS_AS(bad.validate(Method::Fluorescence), ConfigError);
    bad = RateModel::fluorescence_defaults();
    bad.r_dark = bad.r_bright;
    CHECK_THROWS_AS(bad.validate(Method::Fluorescence), ConfigError);
    MethodConfig c = MethodConfig::defaults(Method::Fluorescence);
    c.tau = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    // Orientation comes from the method tag.
    const RateModel t = RateModel::transmission_defaults();
    CHECK(t.photon_rate(Method::Transmission, TweezerState::F2) == t.r_dark);
    CHECK(t.photon_rate(Method::Transmission, TweezerState::Empty) == t.r_bright);
    CHECK(t.photon_rate(Method::Fluorescence, TweezerState::F2) == t.r_bright);
}

TEST_CASE("total measurement time") {
    const auto f = MethodConfig::defaults(Method::Fluorescence);
    const auto t = MethodConfig::defaults(Method::Transmission);
    CHECK(f.total_time() == doctest::Approx(50e-6));
    CHECK(t.total_time() == doctest::Approx(105e-6));
}

TEST_CASE("preparation error") {
    RateModel m;
    Rng rng = rng_for(0);
    m.eps_prep_f2 = 0.0;
    for (int i = 0; i < 1000; ++i) {
        CHECK(apply_prep_error(TweezerState::F2, m, rng) == TweezerState::F2);
        CHECK(apply_prep_error(TweezerState::Empty, m, rng) == TweezerState::Empty);
    }
    m.eps_prep_f2 = 0.003;
    m.eps_prep_f1 = 0.01;
    long flipped = 0, f1_flipped = 0;
    const long n = 1000000;
    for (long i = 0; i < n; ++i) {
        flipped += apply_prep_error(TweezerState::F2, m, rng) == TweezerState::F1;
        f1_flipped += apply_prep_error(TweezerState::F1, m, rng) == TweezerState::F2;
    }
    check_binomial(flipped, n, 0.003);
    check_binomial(f1_flipped, n, 0.01);
    CHECK_THROWS(apply_prep_error(TweezerState::Lost, m, rng));
}

TEST_CASE("repump") {
    RateModel m;
    m.p_repump = 1.0;
    Rng rng = rng_for(1);
    CHECK(apply_repump(TweezerState::F1, m, rng) == TweezerState::F2);
    for (auto s : {TweezerState::Empty, TweezerState::F2, TweezerState::Lost}) CHECK(apply_repump(s, m, rng) == s);
    m.p_repump = 0.99;
    long ok = 0;
    const long n = 1000000;
    for (long i = 0; i < n; ++i) ok += apply_repump(TweezerState::F1, m, rng) == TweezerState::F2;
    check_binomial(ok, n, 0.99);
}

TEST_CASE("empty tweezer without background stays dark") {
    RateModel m = quiet_fluorescence();
    Rng rng = rng_for(2);
    for (int i = 0; i < 100; ++i) {
        const auto r = simulate_interval(TweezerState::Empty, m, Method::Fluorescence, 25e-6, rng);
        CHECK(r.counts == 0);
        CHECK(r.end_state == TweezerState::Empty);
    }
}

TEST_CASE("counts are Poisson without depumping or loss") {
    const double tau = 25e-6;
    const long n = 100000;
    RateModel m = quiet_fluorescence();
    m.r_dark = 0.3e6;
    for (auto [state, rate, method] : {std::tuple{TweezerState::F2, m.r_bright, Method::Fluorescence},
                                       {TweezerState::F1, m.r_dark, Method::Fluorescence},
                                       {TweezerState::F2, m.r_dark, Method::Transmission},
                                       {TweezerState::Empty, m.r_bright, Method::Transmission}}) {
        std::vector<int> c;
        for (long i = 0; i < n; ++i) {
            Rng rng = rng_for(i, 10 + state_index(state));
            c.push_back(simulate_interval(state, m, method, tau, rng).counts);
        }
        check_poisson(c, rate * tau);
    }
}

TEST_CASE("bright F2 rarely stays at or below one count") {
    RateModel m = quiet_fluorescence();
    const double tau = 25e-6;
    const double exact = readout::poisson_cdf(1, m.r_bright * tau);
    CHECK(exact == doctest::Approx(20 * std::exp(-19.0)).epsilon(1e-10));
    CHECK(exact == doctest::Approx(1.1e-7).epsilon(0.05));
    long low = 0;
    const long n = 1000000;
    for (long i = 0; i < n; ++i) {
        Rng rng = rng_for(i, 20);
        low += simulate_interval(TweezerState::F2, m, Method::Fluorescence, tau, rng).counts <= 1;
    }
    // Expected 0.11 events.
    CHECK(low <= 2);
}

TEST_CASE("lost and empty tweezers count identically") {
    RateModel m = RateModel::fluorescence_defaults();
    m.r_dark = 0.2e6;
    const long n = 100000;
    std::vector<int> a, b;
    for (long i = 0; i < n; ++i) {
        Rng r1 = rng_for(i, 30), r2 = rng_for(i, 31);
        const auto lost = simulate_interval(TweezerState::Lost, m, Method::Fluorescence, 25e-6, r1);
        CHECK(lost.end_state == TweezerState::Lost);
        a.push_back(lost.counts);
        b.push_back(simulate_interval(TweezerState::Empty, m, Method::Fluorescence, 25e-6, r2).counts);
    }
    const Moments ma = moments(a), mb = moments(b);
    CHECK(std::abs(ma.mean - mb.mean) < 3 * std::sqrt((ma.var + mb.var) / n));
    const double lambda = m.r_dark * 25e-6;
    CHECK(std::abs(ma.var - mb.var) < 3 * std::sqrt(2 * (lambda + 2 * lambda * lambda) / n));
}

TEST_CASE("measurement sequencing") {
    RateModel m = quiet_fluorescence();
    m.eps_prep_empty = 0.0;
    MethodConfig cfg = MethodConfig::defaults(Method::Fluorescence);
    std::vector<int> second;
    for (long i = 0; i < 100000; ++i) {
        Rng rng = rng_for(i, 40);
        const auto e = simulate_measurement(TweezerState::Empty, cfg, m, rng);
        CHECK(e.counts1 == 0);
        CHECK(e.counts2 == 0);
        CHECK(e.final == TweezerState::Empty);
        const auto o = simulate_measurement(TweezerState::F1, cfg, m, rng);
        CHECK(o.counts1 == 0);
        second.push_back(o.counts2);
    }
    check_poisson(second, m.r_bright * cfg.tau);
}

TEST_CASE("loss only happens to atoms and is absorbing") {
    RateModel m = RateModel::fluorescence_defaults();
    m.loss_heating = 1e-3;
    m.eps_prep_empty = 0.0;
    const auto cfg = MethodConfig::defaults(Method::Fluorescence);
    long lost = 0;
    for (long i = 0; i < 20000; ++i) {
        Rng rng = rng_for(i, 50);
        const auto e = simulate_measurement(TweezerState::Empty, cfg, m, rng);
        CHECK(e.final == TweezerState::Empty);
        const auto o = simulate_measurement(TweezerState::F2, cfg, m, rng);
        lost += o.final == TweezerState::Lost;
    }
    CHECK(lost > 0);
}

TEST_CASE("F2 atoms are lost more often than F1 atoms under fluorescence") {
    const auto m = RateModel::fluorescence_defaults();
    const auto cfg = MethodConfig::defaults(Method::Fluorescence);
    auto loss = [&](TweezerState s) {
        const auto b = run_batch(100000, s, cfg, m, 5);
        long k = 0;
        for (const auto& o : b) k += o.final == TweezerState::Lost;
        return double(k) / b.size();
    };
    const double f1 = loss(TweezerState::F1), f2 = loss(TweezerState::F2);
    CHECK(f2 > f1 + 3 * std::sqrt((f1 + f2) / 100000));
}

TEST_CASE("stronger depumping never helps a bright F2 atom") {
    RateModel m = quiet_fluorescence();
    const int th = 1;
    const double tau = 25e-6;
    std::vector<double> low_frac;
    for (double g : {1e3, 3e4, 1e5}) {
        m.gamma_depump = g;
        long low = 0;
        const long n = 100000;
        for (long i = 0; i < n; ++i) {
            Rng rng = rng_for(i, 60);
            low += simulate_interval(TweezerState::F2, m, Method::Fluorescence, tau, rng).counts <= th;
        }
        low_frac.push_back(double(low) / n);
    }
    CHECK(low_frac[0] <= low_frac[1]);
    CHECK(low_frac[1] <= low_frac[2]);
}

TEST_CASE("batch streams are deterministic and order independent") {
    const auto m = RateModel::transmission_defaults();
    const auto cfg = MethodConfig::defaults(Method::Transmission);
    auto same = [](const std::vector<TrajectoryOutcome>& a, const std::vector<TrajectoryOutcome>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].counts1 != b[i].counts1 || a[i].counts2 != b[i].counts2 || a[i].final != b[i].final ||
                a[i].actual_initial != b[i].actual_initial || a[i].seed_index != b[i].seed_index)
                return false;
        }
        return true;
    };
    const auto a = run_batch(5000, TweezerState::F2, cfg, m, 42);
    CHECK(same(a, run_batch(5000, TweezerState::F2, cfg, m, 42)));
    CHECK(same(a, run_batch(5000, TweezerState::F2, cfg, m, 42, {0, 4})));
    CHECK(same(a, run_batch(5000, TweezerState::F2, cfg, m, 42, {0, 0})));
    CHECK_FALSE(same(a, run_batch(5000, TweezerState::F2, cfg, m, 43)));
    CHECK_FALSE(same(a, run_batch(5000, TweezerState::F2, cfg, m, 42, {1, 1})));
    // A prefix of a longer batch is the shorter batch.
    const auto longer = run_batch(6000, TweezerState::F2, cfg, m, 42, {0, 3});
    CHECK(same(a, std::vector<TrajectoryOutcome>(longer.begin(), longer.begin() + 5000)));
    CHECK_THROWS(run_batch(0, TweezerState::F2, cfg, m, 42));
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].counts1 >= 0);
        CHECK(a[i].seed_index == i);
    }
}

TEST_CASE("rate jitter widens the count distribution") {
    RateModel m = quiet_fluorescence();
    m.rate_jitter = 0.1;
    const double lambda = m.r_bright * 25e-6;
    std::vector<int> c;
    for (long i = 0; i < 100000; ++i) {
        Rng rng = rng_for(i, 70);
        AttemptState a;
        a.rate_scale = draw_rate_scale(m, rng);
        c.push_back(simulate_interval(TweezerState::F2, m, Method::Fluorescence, 25e-6, rng, a).counts);
    }
    const Moments mo = moments(c);
    const double expected_var = lambda + lambda * lambda * 0.01;
    CHECK(std::abs(mo.mean - lambda) < 3 * std::sqrt(expected_var / mo.n));
    CHECK(mo.var == doctest::Approx(expected_var).epsilon(0.03));
}
